#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "core/error.hpp"
#include "core/kinematics.hpp"

namespace imtd {

/// One motion-capture record: rigid-body center C and tool-tip point P in the
/// capture frame (mm), at time t (s).
struct MarkerSample {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  Eigen::Vector3d tip = Eigen::Vector3d::Zero();
  double t = 0.0;
};

struct MarkerStream {
  std::vector<MarkerSample> samples;
  double rate = 120.0;  // Hz, nominal
};

/// An orthonormal frame: axis vectors as matrix columns, plus origin.
struct FrameTriad {
  Eigen::Matrix3d axes = Eigen::Matrix3d::Identity();
  Eigen::Vector3d origin = Eigen::Vector3d::Zero();
};

/// Channels compared against the reference system. Self-rotation is excluded:
/// the capture system cannot observe it from the tool-axis vector.
enum class Channel { phi1, phi2, translation };

const char* channel_name(Channel c);

/// Device and reference series resampled onto one uniform time grid.
struct AlignedPair {
  Channel channel = Channel::phi1;
  std::vector<double> t;
  std::vector<double> device;
  std::vector<double> reference;
};

/// Rigid transform mapping reference-frame coordinates into the device base
/// frame, from one static frame observed in both systems. Throws on
/// non-orthonormal triads (tolerance 1e-6).
Transform estimate_frame_transform(const FrameTriad& static_device,
                                   const FrameTriad& static_reference);

struct DerivedJoints {
  std::vector<JointState> joints;
  std::size_t dropped_samples = 0;  // ||P - C|| <= 1 mm, excluded and counted
};

/// Joint states from marker vectors: V = R (P - C) expressed in the device
/// frame, angles via joint_angles_from_vector, d = ||V||.
DerivedJoints derive_reference_joints(const MarkerStream& m, const Transform& ref_to_device,
                                      AngleConvention convention = AngleConvention::sign_reconciled);

struct AlignmentResult {
  std::vector<AlignedPair> channels;  // phi1, phi2, translation
  double applied_lag = 0.0;           // s added to the reference clock
};

/// Linear resampling of both series onto a uniform grid over their overlap
/// (which must span at least 1 s). When lag_correction is set, a cross-
/// correlation search over +/- 0.5 s at grid resolution shifts the reference
/// clock before the final resampling.
AlignmentResult resample_align(std::span<const JointState> device,
                               std::span<const JointState> reference, double grid_rate,
                               bool lag_correction = true);

/// Mean squared difference over an aligned pair (deg^2 or mm^2).
double channel_mse(const AlignedPair& p);

}  // namespace imtd
