#include "core/acquisition.hpp"

#include <cmath>
#include <string>

#include "core/units.hpp"

namespace imtd {

namespace {

// Signed residue of x modulo n, in [-n/2, n/2).
long long signed_mod(long long x, long long n) {
  long long m = ((x % n) + n) % n;
  if (m >= n / 2) m -= n;
  return m;
}

long long quantize_angle(double deg, double step, int counts, const char* channel) {
  if (!std::isfinite(deg)) fail(Errc::invalid_argument, std::string(channel) + ": non-finite angle");
  const long long q = std::llround(deg / step);
  if (std::llabs(q) > counts / 2 - 1) {
    fail(Errc::saturation, std::string(channel) + ": angle outside representable range");
  }
  return q;
}

}  // namespace

double Calibration::translation_step() const { return 2.0 * kPi * roller_radius / kCounts9; }

void Calibration::validate() const {
  if (!(roller_radius > 0.0)) fail(Errc::invalid_argument, "calibration: roller_radius must be > 0");
  if (!(sample_rate > 0.0)) fail(Errc::invalid_argument, "calibration: sample_rate must be > 0");
  if (!(cone_half_angle > 0.0)) {
    fail(Errc::invalid_argument, "calibration: cone_half_angle must be > 0");
  }
  if (zero_offsets.c1 >= kCounts10 || zero_offsets.c2 >= kCounts10 ||
      zero_offsets.ct >= kCounts9 || zero_offsets.c3 >= kCounts12) {
    fail(Errc::invalid_argument, "calibration: zero offset outside channel range");
  }
}

void validate_frame(const EncoderFrame& f) {
  if (f.c1 >= kCounts10) fail(Errc::out_of_range, "frame: channel c1 count out of range");
  if (f.c2 >= kCounts10) fail(Errc::out_of_range, "frame: channel c2 count out of range");
  if (f.ct >= kCounts9) fail(Errc::out_of_range, "frame: channel ct count out of range");
  if (f.c3 >= kCounts12) fail(Errc::out_of_range, "frame: channel c3 count out of range");
  if (!std::isfinite(f.t) || f.t < 0.0) fail(Errc::out_of_range, "frame: invalid timestamp");
}

EncoderFrame encode_state(const JointState& q, const Calibration& cal) {
  cal.validate();
  const double astep = cal.gimbal_step();
  const long long q1 = quantize_angle(q.phi1, astep, kCounts10, "c1");
  const long long q2 = quantize_angle(q.phi2, astep, kCounts10, "c2");
  const long long q3 =
      quantize_angle(q.phi3.value_or(0.0), cal.self_rotation_step(), kCounts12, "c3");
  if (!std::isfinite(q.d) || q.d < 0.0) {
    fail(Errc::saturation, "ct: insertion depth must be finite and >= 0");
  }
  const long long qt = std::llround(q.d / cal.translation_step());

  EncoderFrame f;
  f.c1 = static_cast<std::uint16_t>(((cal.zero_offsets.c1 + q1) % kCounts10 + kCounts10) % kCounts10);
  f.c2 = static_cast<std::uint16_t>(((cal.zero_offsets.c2 + q2) % kCounts10 + kCounts10) % kCounts10);
  f.c3 = static_cast<std::uint16_t>(((cal.zero_offsets.c3 + q3) % kCounts12 + kCounts12) % kCounts12);
  f.ct = static_cast<std::uint16_t>(((cal.zero_offsets.ct + qt) % kCounts9 + kCounts9) % kCounts9);
  f.t = q.t;
  return f;
}

StreamDecoder::StreamDecoder(const Calibration& cal, double initial_depth_mm) : cal_(cal) {
  cal_.validate();
  reset(initial_depth_mm);
}

void StreamDecoder::reset(double initial_depth_mm) {
  initial_depth_ = initial_depth_mm;
  primed_ = false;
  roller_unwrapped_ = 0;
}

JointState StreamDecoder::decode(const EncoderFrame& f) {
  validate_frame(f);
  const double astep = cal_.gimbal_step();

  JointState q;
  q.phi1 = static_cast<double>(signed_mod(f.c1 - cal_.zero_offsets.c1, kCounts10)) * astep;
  q.phi2 = static_cast<double>(signed_mod(f.c2 - cal_.zero_offsets.c2, kCounts10)) * astep;
  q.phi3 = static_cast<double>(signed_mod(f.c3 - cal_.zero_offsets.c3, kCounts12)) *
           cal_.self_rotation_step();

  const long long rel = f.ct - cal_.zero_offsets.ct;
  if (!primed_) {
    const long long seed = std::llround(initial_depth_ / cal_.translation_step());
    roller_unwrapped_ = seed + signed_mod(rel - seed, kCounts9);
    primed_ = true;
  } else {
    roller_unwrapped_ += signed_mod(rel - roller_unwrapped_, kCounts9);
  }
  q.d = static_cast<double>(roller_unwrapped_) * cal_.translation_step();
  q.t = f.t;
  return q;
}

std::vector<JointState> StreamDecoder::decode_stream(std::span<const EncoderFrame> frames) {
  reset(initial_depth_);
  std::vector<JointState> out;
  out.reserve(frames.size());
  for (const EncoderFrame& f : frames) out.push_back(decode(f));
  return out;
}

JointState decode_frame(const EncoderFrame& f, const Calibration& cal) {
  StreamDecoder dec(cal);
  return dec.decode(f);
}

ZeroOffsets static_zero(std::span<const EncoderFrame> frames) {
  if (frames.size() < 10) {
    fail(Errc::insufficient_data, "static_zero: need at least 10 frames");
  }
  const char* names[4] = {"c1", "c2", "ct", "c3"};
  double mean[4] = {0, 0, 0, 0};
  int lo[4], hi[4];
  for (int c = 0; c < 4; ++c) {
    lo[c] = 1 << 14;
    hi[c] = -1;
  }
  for (const EncoderFrame& f : frames) {
    validate_frame(f);
    const int v[4] = {f.c1, f.c2, f.ct, f.c3};
    for (int c = 0; c < 4; ++c) {
      mean[c] += v[c];
      lo[c] = std::min(lo[c], v[c]);
      hi[c] = std::max(hi[c], v[c]);
    }
  }
  for (int c = 0; c < 4; ++c) {
    if (hi[c] - lo[c] > 2) {
      fail(Errc::not_static,
           std::string("static_zero: channel ") + names[c] + " spreads over more than 2 counts");
    }
    mean[c] /= static_cast<double>(frames.size());
  }
  // nearbyint under the default rounding mode is round-half-even.
  ZeroOffsets z;
  z.c1 = static_cast<std::uint16_t>(std::nearbyint(mean[0]));
  z.c2 = static_cast<std::uint16_t>(std::nearbyint(mean[1]));
  z.ct = static_cast<std::uint16_t>(std::nearbyint(mean[2]));
  z.c3 = static_cast<std::uint16_t>(std::nearbyint(mean[3]));
  return z;
}

}  // namespace imtd
