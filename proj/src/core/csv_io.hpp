#pragma once

#include <span>
#include <string>
#include <vector>

#include "core/acquisition.hpp"
#include "core/kinematics.hpp"
#include "core/reference.hpp"

namespace imtd {

/// Fixed-decimal formatting used by every writer so outputs diff cleanly:
/// timestamps 6 dp, angles 4 dp, lengths 3 dp.
std::string format_fixed(double v, int decimals);

// Raw encoder stream: header `t,c1,c2,ct,c3`.
void save_raw_stream_csv(const std::string& path, std::span<const EncoderFrame> frames);
std::vector<EncoderFrame> load_raw_stream_csv(const std::string& path);

// Joint stream: header `t,phi1,phi2,phi3,d` (degrees/mm); an empty phi3
// field marks an undefined self-rotation.
void save_joints_csv(const std::string& path, std::span<const JointState> joints);
std::vector<JointState> load_joints_csv(const std::string& path);

// Marker stream: header `t,cx,cy,cz,px,py,pz` (seconds/mm).
void save_marker_csv(const std::string& path, const MarkerStream& stream);
MarkerStream load_marker_csv(const std::string& path);

// Static triad: three rotation rows then the origin row, whitespace-separated.
void save_triad(const std::string& path, const FrameTriad& triad);
FrameTriad load_triad(const std::string& path);

// Aligned comparison series for plotting: one time column plus
// device/reference columns per channel.
void save_aligned_csv(const std::string& path, const AlignmentResult& alignment);

enum class StreamKind { raw_counts, joints };

/// Identify a stream CSV by its header line.
StreamKind sniff_stream_csv(const std::string& path);

}  // namespace imtd
