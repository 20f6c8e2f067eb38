#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "core/acquisition.hpp"
#include "core/kinematics.hpp"

namespace imtd {

enum class Hand { left, right };

/// Workspace-scan generation parameters. The default self-rotation sweep
/// ranges follow the hand-specific behavior of the tracked exercises:
/// left [-70, +40] deg, right [-120, +10] deg.
struct ScanParams {
  double cone_half_angle = 13.0;              // degrees
  std::pair<double, double> d_range = {40.0, 100.0};  // mm
  double duration = 10.0;                     // s
  double rate = 100.0;                        // Hz
  std::pair<double, double> phi3_range = {-70.0, 40.0};  // degrees
  double ellipse_ratio = 1.0;                 // phi2/phi1 boundary amplitude ratio (1 = circle)

  static ScanParams for_hand(Hand hand);
  void validate() const;
};

struct NoiseParams {
  double angle_noise_sd = 0.0;        // degrees, applied to phi1/phi2/phi3
  double translation_noise_sd = 0.0;  // mm, applied to d
  std::uint64_t seed = 0;
};

/// Smooth spiral sweep of the workspace cone: the gimbal point rotates while
/// its radius pumps between a floor and the cone boundary, touching the
/// boundary on grid samples; d and phi3 sweep sinusoidally across their
/// ranges. Deterministic in the parameters; exactly duration*rate samples.
std::vector<JointState> generate_cone_scan(const ScanParams& p);

/// Six grasp-lift-transfer-place phases with dwells long enough to register
/// as idle time, lateral motion inside the cone, and a depth band spanning
/// roughly the reported 55 mm workspace. Starts shallow (inside the first
/// half roller turn) so a freshly zeroed decoder tracks absolute depth.
/// Emits duration*rate + 1 samples so the session duration metric is exact.
std::vector<JointState> generate_peg_transfer_profile(double duration, double rate, Hand hand,
                                                      std::uint64_t seed);

struct EncodedStream {
  std::vector<EncoderFrame> frames;
  std::vector<std::size_t> saturated_samples;  // indices clamped into range
};

/// Additive Gaussian joint noise followed by nearest-count encoding.
/// Zero noise decodes back within quantization bounds.
EncodedStream corrupt_and_encode(std::span<const JointState> joints, const Calibration& cal,
                                 const NoiseParams& n);

}  // namespace imtd
