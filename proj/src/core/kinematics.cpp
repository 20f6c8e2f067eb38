#include "core/kinematics.hpp"

#include <cmath>

#include "core/units.hpp"

namespace imtd {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) fail(Errc::invalid_argument, std::string(what) + " is not finite");
}

}  // namespace

Transform rot_x(double deg) {
  require_finite(deg, "rot_x angle");
  return {Eigen::AngleAxisd(deg2rad(deg), Eigen::Vector3d::UnitX()).toRotationMatrix(),
          Eigen::Vector3d::Zero()};
}

Transform rot_y(double deg) {
  require_finite(deg, "rot_y angle");
  return {Eigen::AngleAxisd(deg2rad(deg), Eigen::Vector3d::UnitY()).toRotationMatrix(),
          Eigen::Vector3d::Zero()};
}

Transform rot_z(double deg) {
  require_finite(deg, "rot_z angle");
  return {Eigen::AngleAxisd(deg2rad(deg), Eigen::Vector3d::UnitZ()).toRotationMatrix(),
          Eigen::Vector3d::Zero()};
}

Transform trans_z(double mm) {
  require_finite(mm, "trans_z length");
  return {Eigen::Matrix3d::Identity(), Eigen::Vector3d(0.0, 0.0, mm)};
}

Eigen::Matrix3d orthonormalized(const Eigen::Matrix3d& m) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0.0) {
    Eigen::Matrix3d u = svd.matrixU();
    u.col(2) *= -1.0;
    r = u * svd.matrixV().transpose();
  }
  return r;
}

Transform compose(std::span<const Transform> chain) {
  if (chain.empty()) fail(Errc::invalid_argument, "compose: empty transform chain");
  Transform acc = chain[0];
  int since_fixup = 0;
  for (std::size_t i = 1; i < chain.size(); ++i) {
    acc.translation = acc.rotation * chain[i].translation + acc.translation;
    acc.rotation = acc.rotation * chain[i].rotation;
    if (++since_fixup >= 50) {
      acc.rotation = orthonormalized(acc.rotation);
      since_fixup = 0;
    }
  }
  return acc;
}

TipPosition forward_kinematics(const JointState& q) {
  require_finite(q.phi1, "phi1");
  require_finite(q.phi2, "phi2");
  require_finite(q.d, "d");
  const double p1 = deg2rad(q.phi1);
  const double p2 = deg2rad(q.phi2);
  return {q.d * std::sin(p2),
          -q.d * std::sin(p1) * std::cos(p2),
          q.d * std::cos(p1) * std::cos(p2),
          q.t};
}

TipPosition forward_kinematics_chain(const JointState& q) {
  const Transform chain[] = {rot_x(q.phi1), rot_y(q.phi2), rot_z(q.phi3.value_or(0.0)),
                             trans_z(q.d)};
  const Eigen::Vector3d p = compose(chain).apply(Eigen::Vector3d::Zero());
  return {p.x(), p.y(), p.z(), q.t};
}

VectorAngles joint_angles_from_vector(const Eigen::Vector3d& v, AngleConvention convention) {
  const double n = v.norm();
  if (n <= 0.0 || !std::isfinite(n)) {
    fail(Errc::degenerate, "joint_angles_from_vector: zero or non-finite vector");
  }
  VectorAngles out;
  if (convention == AngleConvention::paper_literal) {
    out.phi1 = rad2deg(std::atan2(v.y(), v.z()));
    out.phi2 = rad2deg(std::atan2(v.x(), v.z()));
  } else {
    out.phi2 = rad2deg(std::asin(std::clamp(v.x() / n, -1.0, 1.0)));
    out.phi1 = rad2deg(std::atan2(-v.y(), v.z()));
  }
  if (v.x() != 0.0 || v.y() != 0.0) {
    out.phi3 = rad2deg(std::atan2(v.y(), v.x()));
  }
  return out;
}

TipTrajectory reconstruct_trajectory(std::span<const JointState> joints) {
  TipTrajectory out;
  out.reserve(joints.size());
  double prev_t = -std::numeric_limits<double>::infinity();
  for (const JointState& q : joints) {
    if (!(q.t > prev_t)) {
      fail(Errc::ordering, "reconstruct_trajectory: timestamps must be strictly increasing");
    }
    prev_t = q.t;
    out.push_back(forward_kinematics(q));
  }
  return out;
}

}  // namespace imtd
