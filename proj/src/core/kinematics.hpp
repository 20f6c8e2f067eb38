#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <vector>

#include "core/error.hpp"

namespace imtd {

/// Joint variables of the 4-DoF (3R1T) device at one instant.
/// phi1/phi2 are the gimbal angles about X and Y, phi3 the tool self-rotation
/// about its own axis, d the insertion depth along the tool axis.
/// Angles in degrees, d in mm, t in seconds. phi3 is absent when the source
/// of the state cannot define it (e.g. a tool axis through the vertical).
struct JointState {
  double phi1 = 0.0;
  double phi2 = 0.0;
  std::optional<double> phi3 = 0.0;
  double d = 0.0;
  double t = 0.0;
};

/// Cartesian tip position (mm) at time t (s).
struct TipPosition {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double t = 0.0;

  Eigen::Vector3d vec() const { return {x, y, z}; }
};

/// Time-ordered tip samples.
using TipTrajectory = std::vector<TipPosition>;

/// Rigid transform: orthonormal rotation plus translation in mm.
struct Transform {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  Eigen::Vector3d apply(const Eigen::Vector3d& p) const { return rotation * p + translation; }
  Eigen::Vector3d apply_vector(const Eigen::Vector3d& v) const { return rotation * v; }

  Transform inverse() const {
    return {rotation.transpose(), -(rotation.transpose() * translation)};
  }
};

/// Elementary joint transforms; angles in degrees, lengths in mm.
Transform rot_x(double deg);
Transform rot_y(double deg);
Transform rot_z(double deg);
Transform trans_z(double mm);

/// Product of the chain in listed order. Re-orthonormalizes the accumulated
/// rotation every 50 products so deep chains keep R'R = I to 1e-9.
/// Throws invalid_argument on an empty chain.
Transform compose(std::span<const Transform> chain);

/// Nearest rotation matrix (polar factor).
Eigen::Matrix3d orthonormalized(const Eigen::Matrix3d& m);

/// Tip position from joint state, closed form:
///   x = d sin(phi2), y = -d sin(phi1) cos(phi2), z = d cos(phi1) cos(phi2).
/// phi3 does not enter; it rotates the tool about its own axis.
TipPosition forward_kinematics(const JointState& q);

/// The joint transform chain rot_x(phi1) * rot_y(phi2) * rot_z(phi3) * trans_z(d)
/// evaluated at the origin. Matches forward_kinematics; kept as the independent
/// matrix route for validation.
TipPosition forward_kinematics_chain(const JointState& q);

/// Angle extraction conventions for a tool-axis vector.
/// paper_literal applies phi1 = atan2(vy, vz), phi2 = atan2(vx, vz) verbatim;
/// sign_reconciled uses the exact inverse of the forward model
/// (phi2 = asin(vx/|v|), phi1 = atan2(-vy, vz)) so FK round-trips.
enum class AngleConvention { paper_literal, sign_reconciled };

struct VectorAngles {
  double phi1 = 0.0;                 // degrees
  double phi2 = 0.0;                 // degrees
  std::optional<double> phi3;        // degrees; absent when vx = vy = 0
};

/// Extract gimbal/self-rotation angles from a 3-vector.
/// Throws degenerate on a zero vector.
VectorAngles joint_angles_from_vector(const Eigen::Vector3d& v,
                                      AngleConvention convention = AngleConvention::sign_reconciled);

/// Elementwise forward kinematics over a strictly time-ordered joint sequence.
TipTrajectory reconstruct_trajectory(std::span<const JointState> joints);

}  // namespace imtd
