#include "core/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "core/rng.hpp"
#include "core/units.hpp"

namespace imtd {

namespace {

// Golden-angle advance between radial boundary touches, so scan directions
// fill the circle without closing into a short cycle.
constexpr double kGoldenAngle = 2.399963229728653;
constexpr double kRadialPumpHz = 0.5;
constexpr double kRadialFloor = 0.15;

double smootherstep(double u) {
  u = std::clamp(u, 0.0, 1.0);
  return u * u * u * (u * (u * 6.0 - 15.0) + 10.0);
}

// Trapezoidal-velocity easing: short quadratic ramps around a constant-speed
// cruise. Strokes leave and enter rest quickly, so the time spent crawling
// below any idle threshold at stroke ends stays negligible.
double trapezoid_ease(double u) {
  u = std::clamp(u, 0.0, 1.0);
  constexpr double r = 0.15;
  constexpr double peak = 1.0 / (1.0 - r);
  if (u < r) return peak * u * u / (2.0 * r);
  if (u <= 1.0 - r) return peak * (u - r / 2.0);
  return 1.0 - peak * (1.0 - u) * (1.0 - u) / (2.0 * r);
}

// One joint channel as a keyframe sequence, eased between keys and held flat
// outside them.
class Track {
public:
  void add(double t, double v) { keys_.emplace_back(t, v); }

  double sample(double t) {
    while (cursor_ + 1 < keys_.size() && keys_[cursor_ + 1].first <= t) ++cursor_;
    if (cursor_ + 1 >= keys_.size()) return keys_.back().second;
    const auto& [t0, v0] = keys_[cursor_];
    const auto& [t1, v1] = keys_[cursor_ + 1];
    return v0 + (v1 - v0) * trapezoid_ease((t - t0) / (t1 - t0));
  }

private:
  std::vector<std::pair<double, double>> keys_;
  std::size_t cursor_ = 0;
};

}  // namespace

ScanParams ScanParams::for_hand(Hand hand) {
  ScanParams p;
  p.phi3_range = hand == Hand::left ? std::pair{-70.0, 40.0} : std::pair{-120.0, 10.0};
  return p;
}

void ScanParams::validate() const {
  if (!(cone_half_angle > 0.0)) fail(Errc::invalid_argument, "scan: cone_half_angle must be > 0");
  if (!(d_range.first >= 0.0) || !(d_range.second > d_range.first)) {
    fail(Errc::invalid_argument, "scan: d_range must be non-negative and increasing");
  }
  if (!(duration > 0.0) || !(rate > 0.0)) {
    fail(Errc::invalid_argument, "scan: duration and rate must be > 0");
  }
  if (!(ellipse_ratio > 0.0) || ellipse_ratio > 1.0) {
    fail(Errc::invalid_argument, "scan: ellipse_ratio must be in (0, 1]");
  }
  if (!(phi3_range.second > phi3_range.first)) {
    fail(Errc::invalid_argument, "scan: phi3_range must be increasing");
  }
}

std::vector<JointState> generate_cone_scan(const ScanParams& p) {
  p.validate();
  const auto n = static_cast<std::size_t>(std::llround(p.duration * p.rate));
  const double omega = (2.0 * kPi + kGoldenAngle) * kRadialPumpHz;  // rad/s
  const double d_mid = 0.5 * (p.d_range.first + p.d_range.second);
  const double d_amp = 0.5 * (p.d_range.second - p.d_range.first);
  const double p3_mid = 0.5 * (p.phi3_range.first + p.phi3_range.second);
  const double p3_amp = 0.5 * (p.phi3_range.second - p.phi3_range.first);

  std::vector<JointState> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / p.rate;
    const double pump = std::sin(kPi * kRadialPumpHz * t);
    const double rho = p.cone_half_angle * (kRadialFloor + (1.0 - kRadialFloor) * pump * pump);
    const double theta = omega * t;
    JointState q;
    q.phi1 = rho * std::cos(theta);
    q.phi2 = p.ellipse_ratio * rho * std::sin(theta);
    q.phi3 = p3_mid + p3_amp * std::sin(2.0 * kPi * 0.15 * t + 0.5);
    q.d = d_mid + d_amp * std::sin(2.0 * kPi * 0.2 * t);
    q.t = t;
    out.push_back(q);
  }
  return out;
}

std::vector<JointState> generate_peg_transfer_profile(double duration, double rate, Hand hand,
                                                      std::uint64_t seed) {
  if (!(duration >= 30.0)) {
    fail(Errc::invalid_argument, "peg transfer: duration must cover six phases (>= 30 s)");
  }
  if (!(rate > 0.0)) fail(Errc::invalid_argument, "peg transfer: rate must be > 0");

  Rng rng(seed ^ (hand == Hand::left ? 0x1eF7ull : 0x816F7ull));
  const std::pair<double, double> phi3_range =
      hand == Hand::left ? std::pair{-70.0, 40.0} : std::pair{-120.0, 10.0};
  // The dominant hand realigns the tool more; give it wider phi3 excursions.
  const double p3_swing = hand == Hand::left ? 0.55 : 0.9;
  auto phi3_at = [&](double u) {
    const double mid = 0.5 * (phi3_range.first + phi3_range.second);
    const double amp = 0.5 * (phi3_range.second - phi3_range.first) * p3_swing;
    return mid + amp * (2.0 * u - 1.0);
  };

  const double d_travel = 45.0;
  const double d_deep = 63.0;
  const double start_d = 10.0;  // inside the first half roller turn

  Track phi2;
  Track phi3;
  Track depth;
  phi2.add(0.0, 0.0);
  phi3.add(0.0, phi3_at(0.5));
  depth.add(0.0, start_d);

  // Moves run one channel at a time with short staggered hand-offs: the next
  // channel departs while the previous one finishes its stroke. The tip then
  // only settles to rest inside the grasp and place dwells, and the decoded
  // count staircase traces the same path length as the continuous motion.
  const double w = duration / 6.0;
  double phi2_hold = 0.0;
  double p3_hold = phi3_at(0.5);
  for (int peg = 0; peg < 6; ++peg) {
    const double t0 = w * peg;
    auto at = [&](double frac) { return t0 + frac * w; };
    const double src = 8.0 + rng.uniform(-1.5, 1.5);
    const double dst = -8.0 + rng.uniform(-1.5, 1.5);
    const double grasp_d = d_deep + rng.uniform(-2.0, 2.0);
    const double place_d = d_deep + rng.uniform(-2.0, 2.0);
    const double p3_a = phi3_at(rng.uniform01());
    const double p3_b = phi3_at(rng.uniform01());

    // d: lift [0.00,0.10], descend [0.228,0.328], dwell, lift [0.50,0.60],
    //    descend [0.728,0.828], dwell to 1.00.
    // phi2: approach [0.095,0.235], transfer [0.595,0.735]; each stroke
    // starts as the previous one reaches 95 % of its span.
    depth.add(at(0.10), d_travel);
    depth.add(at(0.228), d_travel);
    depth.add(at(0.328), grasp_d);
    depth.add(at(0.50), grasp_d);   // grasp dwell [0.328, 0.50]
    depth.add(at(0.60), d_travel);
    depth.add(at(0.728), d_travel);
    depth.add(at(0.828), place_d);
    depth.add(at(1.00), place_d);   // place dwell [0.828, 1.00]

    phi2.add(at(0.095), phi2_hold);
    phi2.add(at(0.235), src);
    phi2.add(at(0.595), src);
    phi2.add(at(0.735), dst);
    phi2_hold = dst;

    phi3.add(at(0.095), p3_hold);
    phi3.add(at(0.235), p3_a);
    phi3.add(at(0.595), p3_a);
    phi3.add(at(0.735), p3_b);
    p3_hold = p3_b;
  }

  const auto n = static_cast<std::size_t>(std::llround(duration * rate)) + 1;
  std::vector<JointState> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / rate;
    JointState q;
    q.phi1 = 0.0;
    q.phi2 = phi2.sample(t);
    q.phi3 = phi3.sample(t);
    q.d = depth.sample(t);
    q.t = t;
    out.push_back(q);
  }
  return out;
}

EncodedStream corrupt_and_encode(std::span<const JointState> joints, const Calibration& cal,
                                 const NoiseParams& n) {
  cal.validate();
  if (n.angle_noise_sd < 0.0 || n.translation_noise_sd < 0.0) {
    fail(Errc::invalid_argument, "noise standard deviations must be >= 0");
  }
  Rng rng(n.seed);
  const bool noisy = n.angle_noise_sd > 0.0 || n.translation_noise_sd > 0.0;
  const double angle_limit = 180.0 - cal.gimbal_step();

  EncodedStream out;
  out.frames.reserve(joints.size());
  for (std::size_t i = 0; i < joints.size(); ++i) {
    JointState q = joints[i];
    if (noisy) {
      q.phi1 += rng.gaussian(0.0, n.angle_noise_sd);
      q.phi2 += rng.gaussian(0.0, n.angle_noise_sd);
      q.phi3 = q.phi3.value_or(0.0) + rng.gaussian(0.0, n.angle_noise_sd);
      q.d += rng.gaussian(0.0, n.translation_noise_sd);
    }
    bool clamped = false;
    auto clamp_angle = [&](double v) {
      if (std::abs(v) > angle_limit) {
        clamped = true;
        return std::clamp(v, -angle_limit, angle_limit);
      }
      return v;
    };
    q.phi1 = clamp_angle(q.phi1);
    q.phi2 = clamp_angle(q.phi2);
    q.phi3 = clamp_angle(q.phi3.value_or(0.0));
    if (q.d < 0.0) {
      clamped = true;
      q.d = 0.0;
    }
    if (clamped) out.saturated_samples.push_back(i);
    out.frames.push_back(encode_state(q, cal));
  }
  return out;
}

}  // namespace imtd
