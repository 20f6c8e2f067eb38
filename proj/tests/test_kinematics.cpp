#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "core/kinematics.hpp"
#include "core/units.hpp"

using namespace imtd;

namespace {

// Independent oracle: the four homogeneous joint matrices multiplied directly
// as 4x4 blocks, bypassing Transform entirely.
Eigen::Matrix4d hom_rot_x(double deg) {
  const double c = std::cos(deg2rad(deg));
  const double s = std::sin(deg2rad(deg));
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m(1, 1) = c; m(1, 2) = -s;
  m(2, 1) = s; m(2, 2) = c;
  return m;
}

Eigen::Matrix4d hom_rot_y(double deg) {
  const double c = std::cos(deg2rad(deg));
  const double s = std::sin(deg2rad(deg));
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m(0, 0) = c; m(0, 2) = s;
  m(2, 0) = -s; m(2, 2) = c;
  return m;
}

Eigen::Matrix4d hom_rot_z(double deg) {
  const double c = std::cos(deg2rad(deg));
  const double s = std::sin(deg2rad(deg));
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m(0, 0) = c; m(0, 1) = -s;
  m(1, 0) = s; m(1, 1) = c;
  return m;
}

Eigen::Matrix4d hom_trans_z(double mm) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m(2, 3) = mm;
  return m;
}

Eigen::Vector3d chain_oracle(const JointState& q) {
  const Eigen::Matrix4d m = hom_rot_x(q.phi1) * hom_rot_y(q.phi2) *
                            hom_rot_z(q.phi3.value_or(0.0)) * hom_trans_z(q.d);
  return m.block<3, 1>(0, 3);
}

JointState random_workspace_state(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> angle(0.0, 13.0);
  std::uniform_real_distribution<double> dir(0.0, 2.0 * kPi);
  std::uniform_real_distribution<double> phi3(-120.0, 40.0);
  std::uniform_real_distribution<double> depth(5.0, 120.0);
  const double rho = angle(gen);
  const double theta = dir(gen);
  JointState q;
  q.phi1 = rho * std::cos(theta);
  q.phi2 = rho * std::sin(theta);
  q.phi3 = phi3(gen);
  q.d = depth(gen);
  return q;
}

}  // namespace

TEST_CASE("elementary transforms") {
  const Transform id = rot_x(0.0);
  CHECK((id.rotation - Eigen::Matrix3d::Identity()).norm() == doctest::Approx(0.0));
  CHECK(id.translation.norm() == doctest::Approx(0.0));

  const Transform tz = trans_z(100.0);
  CHECK((tz.rotation - Eigen::Matrix3d::Identity()).norm() == doctest::Approx(0.0));
  CHECK(tz.translation.isApprox(Eigen::Vector3d(0, 0, 100)));

  const Eigen::Vector3d rotated = rot_z(90.0).apply(Eigen::Vector3d(1, 0, 0));
  CHECK(rotated.x() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(rotated.y() == doctest::Approx(1.0));
  CHECK(rotated.z() == doctest::Approx(0.0).epsilon(1e-12));

  CHECK_THROWS_AS(rot_x(std::numeric_limits<double>::quiet_NaN()), Error);
}

TEST_CASE("compose basics") {
  const Transform t = compose(std::array{rot_x(20.0), rot_y(-35.0), trans_z(42.0)});

  SUBCASE("inverse pair gives identity") {
    const Transform round = compose(std::array{t, t.inverse()});
    CHECK((round.rotation - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(round.translation.cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("identity is neutral") {
    const Transform left = compose(std::array{Transform{}, t});
    CHECK((left.rotation - t.rotation).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((left.translation - t.translation).cwiseAbs().maxCoeff() < 1e-15);
  }

  SUBCASE("single element returns itself") {
    const Transform single = compose(std::span<const Transform>(&t, 1));
    CHECK((single.rotation - t.rotation).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("empty chain is rejected") {
    CHECK_THROWS_AS(compose({}), Error);
  }
}

TEST_CASE("joint chain matches direct 4x4 multiplication") {
  std::mt19937_64 gen(7);
  for (int i = 0; i < 500; ++i) {
    const JointState q = random_workspace_state(gen);
    const Transform chain =
        compose(std::array{rot_x(q.phi1), rot_y(q.phi2), rot_z(*q.phi3), trans_z(q.d)});
    const Eigen::Vector3d expected = chain_oracle(q);
    CHECK((chain.apply(Eigen::Vector3d::Zero()) - expected).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("forward kinematics closed form") {
  SUBCASE("straight-down insertion") {
    const TipPosition p = forward_kinematics({0, 0, 0, 100, 0});
    CHECK(p.x == doctest::Approx(0.0));
    CHECK(p.y == doctest::Approx(0.0));
    CHECK(p.z == doctest::Approx(100.0));
  }

  SUBCASE("full lateral tilt") {
    const TipPosition p = forward_kinematics({0, 90, 0, 50, 0});
    CHECK(p.x == doctest::Approx(50.0));
    CHECK(p.y == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(p.z == doctest::Approx(0.0).epsilon(1e-12));
  }

  SUBCASE("combined tilt against the matrix chain") {
    const JointState q{10.0, 5.0, 30.0, 80.0, 0.0};
    const TipPosition p = forward_kinematics(q);
    CHECK(p.x == doctest::Approx(6.973).epsilon(1e-4));
    CHECK(p.y == doctest::Approx(-13.839).epsilon(1e-4));
    CHECK(p.z == doctest::Approx(78.485).epsilon(1e-4));
    CHECK((p.vec() - chain_oracle(q)).cwiseAbs().maxCoeff() < 1e-9);
  }

  SUBCASE("phi3 does not move the tip") {
    const TipPosition base = forward_kinematics({10, 5, 0, 80, 0});
    for (const double phi3 : {-120.0, -30.0, 45.0, 170.0}) {
      const TipPosition p = forward_kinematics({10, 5, phi3, 80, 0});
      CHECK(p.x == base.x);
      CHECK(p.y == base.y);
      CHECK(p.z == base.z);
    }
  }

  SUBCASE("non-finite input rejected") {
    CHECK_THROWS_AS(forward_kinematics({std::numeric_limits<double>::infinity(), 0, 0, 1, 0}),
                    Error);
  }
}

TEST_CASE("forward kinematics properties") {
  std::mt19937_64 gen(11);
  SUBCASE("closed form equals chain evaluation") {
    for (int i = 0; i < 2000; ++i) {
      const JointState q = random_workspace_state(gen);
      const TipPosition closed = forward_kinematics(q);
      const TipPosition chained = forward_kinematics_chain(q);
      CHECK(std::abs(closed.x - chained.x) < 1e-9);
      CHECK(std::abs(closed.y - chained.y) < 1e-9);
      CHECK(std::abs(closed.z - chained.z) < 1e-9);
    }
  }
  SUBCASE("tip norm equals insertion depth") {
    for (int i = 0; i < 2000; ++i) {
      const JointState q = random_workspace_state(gen);
      CHECK(forward_kinematics(q).vec().norm() == doctest::Approx(q.d).epsilon(1e-12));
    }
  }
}

TEST_CASE("angles from vector") {
  SUBCASE("axis-aligned vector") {
    const VectorAngles a = joint_angles_from_vector({0, 0, 1});
    CHECK(a.phi1 == doctest::Approx(0.0));
    CHECK(a.phi2 == doctest::Approx(0.0));
    CHECK_FALSE(a.phi3.has_value());
  }

  SUBCASE("literal extraction on (1,0,1)") {
    const VectorAngles a = joint_angles_from_vector({1, 0, 1}, AngleConvention::paper_literal);
    CHECK(a.phi1 == doctest::Approx(0.0));
    CHECK(a.phi2 == doctest::Approx(45.0));
  }

  SUBCASE("reconciled extraction on (1,0,1)") {
    const VectorAngles a = joint_angles_from_vector({1, 0, 1}, AngleConvention::sign_reconciled);
    CHECK(a.phi1 == doctest::Approx(0.0));
    CHECK(a.phi2 == doctest::Approx(45.0));
  }

  SUBCASE("round trip through the forward model") {
    const TipPosition p = forward_kinematics({10, 5, 0, 80, 0});
    const VectorAngles a = joint_angles_from_vector(p.vec(), AngleConvention::sign_reconciled);
    CHECK(a.phi1 == doctest::Approx(10.0).epsilon(1e-8));
    CHECK(a.phi2 == doctest::Approx(5.0).epsilon(1e-8));
  }

  SUBCASE("literal convention flips the phi1 sign") {
    const TipPosition p = forward_kinematics({10, 0, 0, 80, 0});
    const VectorAngles a = joint_angles_from_vector(p.vec(), AngleConvention::paper_literal);
    CHECK(a.phi1 == doctest::Approx(-10.0).epsilon(1e-8));
  }

  SUBCASE("zero vector is degenerate") {
    CHECK_THROWS_AS(joint_angles_from_vector({0, 0, 0}), Error);
  }
}

TEST_CASE("round-trip property inside the cone") {
  std::mt19937_64 gen(13);
  for (int i = 0; i < 2000; ++i) {
    JointState q = random_workspace_state(gen);
    const VectorAngles a =
        joint_angles_from_vector(forward_kinematics(q).vec(), AngleConvention::sign_reconciled);
    CHECK(std::abs(a.phi1 - q.phi1) < 1e-6);
    CHECK(std::abs(a.phi2 - q.phi2) < 1e-6);
  }
}

TEST_CASE("rotations stay orthonormal at composition depth 100") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> angle(-180.0, 180.0);
  std::vector<Transform> chain;
  for (int i = 0; i < 100; ++i) {
    switch (i % 3) {
      case 0: chain.push_back(rot_x(angle(gen))); break;
      case 1: chain.push_back(rot_y(angle(gen))); break;
      default: chain.push_back(rot_z(angle(gen))); break;
    }
  }
  const Transform t = compose(chain);
  const Eigen::Matrix3d gram = t.rotation.transpose() * t.rotation;
  CHECK((gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(t.rotation.determinant() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("trajectory reconstruction") {
  SUBCASE("empty sequence") {
    CHECK(reconstruct_trajectory({}).empty());
  }

  SUBCASE("single state") {
    const std::vector<JointState> joints{{0, 0, 0, 100, 0}};
    const TipTrajectory traj = reconstruct_trajectory(joints);
    REQUIRE(traj.size() == 1);
    CHECK(traj[0].z == doctest::Approx(100.0));
  }

  SUBCASE("per-sample norm equals depth") {
    std::mt19937_64 gen(19);
    std::vector<JointState> joints;
    for (int i = 0; i < 200; ++i) {
      JointState q = random_workspace_state(gen);
      q.t = 0.01 * i;
      joints.push_back(q);
    }
    const TipTrajectory traj = reconstruct_trajectory(joints);
    for (std::size_t i = 0; i < traj.size(); ++i) {
      CHECK(traj[i].vec().norm() == doctest::Approx(joints[i].d).epsilon(1e-12));
    }
  }

  SUBCASE("non-monotonic timestamps rejected") {
    const std::vector<JointState> joints{{0, 0, 0, 10, 1.0}, {0, 0, 0, 10, 1.0}};
    CHECK_THROWS_AS(reconstruct_trajectory(joints), Error);
  }
}
