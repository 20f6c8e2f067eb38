#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "core/evaluation.hpp"
#include "core/report_io.hpp"
#include "core/units.hpp"

using namespace imtd;

namespace {

MetricSet table_left() {
  MetricSet m;
  m.time_total = 164.0;
  m.idle_pct = 52.0;
  m.path_length = 2043.0;
  m.depth_workspace = 55.0;
  m.avg_speed = 2043.0 / 164.0;
  m.avg_accel = 0.076;
  m.jerk = 163.73;
  m.fluidity = 1.0 / 163.73;
  m.volume = 463591.0;
  return m;
}

MetricSet table_right() {
  MetricSet m;
  m.time_total = 164.0;
  m.idle_pct = 49.0;
  m.path_length = 1857.0;
  m.depth_workspace = 56.0;
  m.avg_speed = 1857.0 / 164.0;
  m.avg_accel = 0.069;
  m.jerk = 155.66;
  m.fluidity = 1.0 / 155.66;
  m.volume = 424029.0;
  return m;
}

std::vector<JointState> circle_scan(double radius, int n) {
  std::vector<JointState> joints;
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * kPi * i / n;
    JointState q;
    q.phi1 = radius * std::cos(a);
    q.phi2 = radius * std::sin(a);
    q.d = 60.0;
    q.t = 0.01 * i;
    joints.push_back(q);
  }
  return joints;
}

}  // namespace

TEST_CASE("subcategory grouping covers all nine metrics exactly once") {
  const MetricSet m = table_left();
  const SubcategoryView v = group_by_subcategory(m);
  CHECK(v.execution_rapidity.time_total == m.time_total);
  CHECK(v.execution_rapidity.idle_pct == m.idle_pct);
  CHECK(v.gesture_control.avg_accel == m.avg_accel);
  CHECK(*v.gesture_control.fluidity == *m.fluidity);
  CHECK(v.gesture_control.jerk == m.jerk);
  CHECK(v.gesture_control.avg_speed == m.avg_speed);
  CHECK(v.navigation_3d.path_length == m.path_length);
  CHECK(v.navigation_3d.depth_workspace == m.depth_workspace);
  CHECK(*v.navigation_3d.volume == *m.volume);
}

TEST_CASE("undefined fluidity carries through the view") {
  MetricSet m = table_left();
  m.fluidity.reset();
  m.notes.push_back("fluidity undefined: jerk below epsilon");
  const SubcategoryView v = group_by_subcategory(m);
  CHECK_FALSE(v.gesture_control.fluidity.has_value());
  CHECK(v.notes.size() == 1);
}

TEST_CASE("bimanual report") {
  const MetricConfig cfg;
  const Calibration cal;

  SUBCASE("identical hands have zero relative differences") {
    const SessionReport r = bimanual_report(table_left(), table_left(), std::nullopt, cfg, cal,
                                            AngleConvention::sign_reconciled);
    for (const auto& [key, value] : r.relative_difference) {
      REQUIRE_MESSAGE(value.has_value(), key);
      CHECK(*value == doctest::Approx(0.0));
    }
  }

  SUBCASE("reported bimanual values") {
    const SessionReport r = bimanual_report(table_left(), table_right(), std::nullopt, cfg, cal,
                                            AngleConvention::sign_reconciled);
    CHECK(*r.relative_difference.at("path_length") == doctest::Approx(-0.091).epsilon(0.01));
    CHECK(r.left->execution_rapidity.time_total == doctest::Approx(164.0));
    CHECK(r.left->execution_rapidity.idle_pct == doctest::Approx(52.0));
    bool right_flag = false;
    for (const std::string& note : r.notes) {
      if (note.find("right hand covers less distance") != std::string::npos) right_flag = true;
    }
    CHECK(right_flag);
  }

  SUBCASE("undefined fluidity yields a gap note") {
    MetricSet right = table_right();
    right.fluidity.reset();
    const SessionReport r = bimanual_report(table_left(), right, std::nullopt, cfg, cal,
                                            AngleConvention::sign_reconciled);
    CHECK_FALSE(r.relative_difference.at("fluidity").has_value());
    bool gap_note = false;
    for (const std::string& note : r.notes) {
      if (note.find("fluidity undefined") != std::string::npos) gap_note = true;
    }
    CHECK(gap_note);
  }

  SUBCASE("duration mismatch beyond one percent is warned, not fatal") {
    MetricSet right = table_right();
    right.time_total = 170.0;
    const SessionReport r = bimanual_report(table_left(), right, std::nullopt, cfg, cal,
                                            AngleConvention::sign_reconciled);
    bool warned = false;
    for (const std::string& note : r.notes) {
      if (note.find("durations differ") != std::string::npos) warned = true;
    }
    CHECK(warned);
  }

  SUBCASE("single-handed report") {
    const SessionReport r = bimanual_report(table_left(), std::nullopt, std::nullopt, cfg, cal,
                                            AngleConvention::sign_reconciled);
    CHECK(r.left.has_value());
    CHECK_FALSE(r.right.has_value());
    CHECK(r.relative_difference.empty());
  }
}

TEST_CASE("report serialization is deterministic") {
  const SessionReport r = bimanual_report(table_left(), table_right(), std::nullopt,
                                          MetricConfig{}, Calibration{},
                                          AngleConvention::sign_reconciled);
  const std::string a = report_to_json(r).dump(2);
  const std::string b = report_to_json(r).dump(2);
  CHECK(a == b);
  CHECK(a.find("\"session\"") != std::string::npos);
  CHECK(a.find("\"execution_rapidity\"") != std::string::npos);
  CHECK(a.find("\"validation\"") != std::string::npos);
  CHECK(a.find("\"config\"") != std::string::npos);
}

TEST_CASE("workspace boundary") {
  SUBCASE("circle of 13 degrees fits both semi-axes at 13") {
    const BoundarySummary b = workspace_boundary(circle_scan(13.0, 720), 13.0);
    REQUIRE(b.ellipse.has_value());
    CHECK(b.ellipse->semi_major == doctest::Approx(13.0).epsilon(0.005));
    CHECK(b.ellipse->semi_minor == doctest::Approx(13.0).epsilon(0.005));
    CHECK(std::abs(b.ellipse->semi_major - 13.0) < 0.1);
    CHECK(std::abs(b.ellipse->semi_minor - 13.0) < 0.1);
    CHECK_FALSE(b.cone_violation);
    CHECK(b.max_cone_angle == doctest::Approx(13.0));
  }

  SUBCASE("anisotropic ellipse") {
    std::vector<JointState> joints;
    for (int i = 0; i < 720; ++i) {
      const double a = 2.0 * kPi * i / 720.0;
      joints.push_back({12.0 * std::cos(a), 6.0 * std::sin(a), 0.0, 60.0, 0.01 * i});
    }
    const BoundarySummary b = workspace_boundary(joints, 13.0);
    REQUIRE(b.ellipse.has_value());
    CHECK(b.ellipse->semi_major == doctest::Approx(12.0).epsilon(0.005));
    CHECK(b.ellipse->semi_minor == doctest::Approx(6.0).epsilon(0.005));
  }

  SUBCASE("all points at the origin degenerate cleanly") {
    std::vector<JointState> joints(150);
    for (std::size_t i = 0; i < joints.size(); ++i) joints[i].t = 0.01 * static_cast<double>(i);
    const BoundarySummary b = workspace_boundary(joints, 13.0);
    CHECK(b.max_cone_angle == 0.0);
    CHECK_FALSE(b.cone_violation);
    CHECK_FALSE(b.ellipse.has_value());
    CHECK(b.hull.size() <= 2);
  }

  SUBCASE("a single sample beyond the half angle raises the violation flag") {
    std::vector<JointState> joints = circle_scan(12.0, 300);
    joints[150].phi1 = 15.0;
    joints[150].phi2 = 0.0;
    const BoundarySummary b = workspace_boundary(joints, 13.0);
    CHECK(b.cone_violation);
    CHECK(b.max_cone_angle == doctest::Approx(15.0));
  }

  SUBCASE("too few samples") {
    CHECK_THROWS_AS(workspace_boundary(circle_scan(10.0, 99), 13.0), Error);
  }

  SUBCASE("fitted semi-axes never exceed the hull extent by more than 5 percent") {
    std::mt19937_64 gen(41);
    std::uniform_real_distribution<double> r1(4.0, 13.0);
    std::uniform_real_distribution<double> ratio(0.3, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
      const double a = r1(gen);
      const double b_axis = a * ratio(gen);
      std::vector<JointState> joints;
      for (int i = 0; i < 400; ++i) {
        const double ang = 2.0 * kPi * i / 400.0;
        joints.push_back(
            {a * std::cos(ang), b_axis * std::sin(ang), 0.0, 60.0, 0.01 * i});
      }
      const BoundarySummary b = workspace_boundary(joints, 13.0);
      REQUIRE(b.ellipse.has_value());
      double hull_extent = 0.0;
      for (const auto& v : b.hull) {
        hull_extent = std::max(hull_extent, std::hypot(v[0], v[1]));
      }
      CHECK(b.ellipse->semi_major <= hull_extent * 1.05);
    }
  }
}
