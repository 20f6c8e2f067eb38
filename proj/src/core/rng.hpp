#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "core/units.hpp"

namespace imtd {

/// Seedable random source with a fixed cross-platform mapping from engine
/// output to doubles. std::mt19937_64 is bit-stable everywhere; the standard
/// distributions are not, so uniform/gaussian are derived here directly.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1).
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via Box-Muller (one value per call, pair cached).
  double gaussian(double mean = 0.0, double sd = 1.0) {
    if (have_spare_) {
      have_spare_ = false;
      return mean + sd * spare_;
    }
    double u1 = uniform01();
    double u2 = uniform01();
    while (u1 <= 1e-300) u1 = uniform01();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    spare_ = mag * std::sin(2.0 * kPi * u2);
    have_spare_ = true;
    return mean + sd * mag * std::cos(2.0 * kPi * u2);
  }

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace imtd
