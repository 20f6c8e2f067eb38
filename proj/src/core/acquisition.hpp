#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "core/error.hpp"
#include "core/kinematics.hpp"

namespace imtd {

/// Raw counts for the four encoder channels at one instant.
/// c1/c2: 10-bit gimbal channels, ct: 9-bit roller channel, c3: 12-bit
/// self-rotation channel.
struct EncoderFrame {
  std::uint16_t c1 = 0;
  std::uint16_t c2 = 0;
  std::uint16_t ct = 0;
  std::uint16_t c3 = 0;
  double t = 0.0;
};

inline constexpr int kCounts10 = 1024;
inline constexpr int kCounts9 = 512;
inline constexpr int kCounts12 = 4096;

struct ZeroOffsets {
  std::uint16_t c1 = 512;
  std::uint16_t c2 = 512;
  std::uint16_t ct = 256;
  std::uint16_t c3 = 2048;
};

/// Channel zeroing and geometry used to turn counts into joint values.
struct Calibration {
  ZeroOffsets zero_offsets;
  double roller_radius = 4.482;      // mm; one 9-bit count = 2*pi*r/512 of translation
  double sample_rate = 100.0;        // Hz
  double cone_half_angle = 13.0;     // degrees

  double gimbal_step() const { return 360.0 / kCounts10; }           // deg/count
  double self_rotation_step() const { return 360.0 / kCounts12; }    // deg/count
  double translation_step() const;                                   // mm/count

  void validate() const;
};

/// Throws out_of_range naming the offending channel.
void validate_frame(const EncoderFrame& f);

/// Nearest-count quantization of a joint state. The roller count wraps at 512;
/// absolute depth beyond half a roller turn is recoverable only across a
/// continuous stream (see StreamDecoder). Throws saturation when the state is
/// not representable (|angle| > 180 deg after offset, or d < 0).
EncoderFrame encode_state(const JointState& q, const Calibration& cal);

/// Stateful decoder for one encoder stream. Gimbal and self-rotation channels
/// decode as wrap-aware signed count differences from the calibration zero;
/// the roller channel is unwrapped incrementally, accumulating translation
/// across frames. A count jump above half the channel range between
/// consecutive frames is a wrap.
class StreamDecoder {
public:
  explicit StreamDecoder(const Calibration& cal, double initial_depth_mm = 0.0);

  /// Decode one frame, advancing the roller accumulator.
  JointState decode(const EncoderFrame& f);

  /// Decode a whole stream from a fresh accumulator state.
  std::vector<JointState> decode_stream(std::span<const EncoderFrame> frames);

  void reset(double initial_depth_mm = 0.0);

private:
  Calibration cal_;
  double initial_depth_ = 0.0;
  bool primed_ = false;
  long long roller_unwrapped_ = 0;   // counts relative to the zero offset
};

/// Convenience: decode one isolated frame (fresh accumulator, depth seed 0).
JointState decode_frame(const EncoderFrame& f, const Calibration& cal);

/// Per-channel offsets from a static acquisition: rounded mean count
/// (round-half-even). Requires at least 10 frames; rejects the window with
/// not_static if any channel spreads over more than 2 counts.
ZeroOffsets static_zero(std::span<const EncoderFrame> frames);

}  // namespace imtd
