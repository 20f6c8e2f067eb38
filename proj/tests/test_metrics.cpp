#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "core/metrics.hpp"
#include "core/units.hpp"

using namespace imtd;

namespace {

TipTrajectory sampled(double duration, double rate, auto&& position) {
  TipTrajectory traj;
  const auto n = static_cast<std::size_t>(std::llround(duration * rate)) + 1;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / rate;
    const Eigen::Vector3d p = position(t);
    traj.push_back({p.x(), p.y(), p.z(), t});
  }
  return traj;
}

TipTrajectory straight_line(double speed, double duration, double rate) {
  return sampled(duration, rate, [&](double t) { return Eigen::Vector3d(speed * t, 0, 50); });
}

TipTrajectory stationary(double duration, double rate) {
  return sampled(duration, rate, [&](double) { return Eigen::Vector3d(3, -4, 60); });
}

}  // namespace

TEST_CASE("differentiate") {
  const MetricConfig cfg;

  SUBCASE("constant position has zero velocity") {
    const auto v = differentiate(stationary(2.0, 100.0), 1, cfg);
    for (const auto& vi : v) CHECK(vi.norm() == doctest::Approx(0.0).epsilon(1e-12));
  }

  SUBCASE("linear ramp is exact") {
    const auto v = differentiate(straight_line(5.0, 2.0, 100.0), 1, cfg);
    for (const auto& vi : v) {
      CHECK(vi.x() == doctest::Approx(5.0).epsilon(1e-9));
      CHECK(std::abs(vi.y()) < 1e-9);
    }
  }

  SUBCASE("sinusoid velocity within 1 percent of analytic peak") {
    const TipTrajectory traj = sampled(2.0, 100.0, [](double t) {
      return Eigen::Vector3d(std::sin(2.0 * kPi * t), 0, 40);
    });
    const auto v = differentiate(traj, 1, cfg);
    const double peak = 2.0 * kPi;
    double worst = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double analytic = peak * std::cos(2.0 * kPi * traj[i].t);
      worst = std::max(worst, std::abs(v[i].x() - analytic));
    }
    CHECK(worst < 0.01 * peak);
  }

  SUBCASE("too few samples") {
    TipTrajectory two{{0, 0, 0, 0.0}, {1, 0, 0, 0.1}};
    CHECK_THROWS_AS(differentiate(two, 3, cfg), Error);
  }
}

TEST_CASE("total time") {
  CHECK(total_time(straight_line(1.0, 164.0, 10.0)) == doctest::Approx(164.0));
  CHECK(total_time({{0, 0, 0, 5.0}}) == 0.0);
  TipTrajectory t{{0, 0, 0, 2.5}, {0, 0, 0, 10.0}};
  CHECK(total_time(t) == doctest::Approx(7.5));
  CHECK_THROWS_AS(total_time({}), Error);
}

TEST_CASE("idle time percentage") {
  const MetricConfig cfg;

  SUBCASE("constant motion above threshold") {
    CHECK(idle_time_pct(straight_line(10.0, 10.0, 100.0), cfg) == doctest::Approx(0.0));
  }

  SUBCASE("fully stationary") {
    CHECK(idle_time_pct(stationary(5.0, 100.0), cfg) == doctest::Approx(100.0));
  }

  SUBCASE("half stationary, half moving") {
    // 82 s at rest then 82 s at 10 mm/s.
    const TipTrajectory traj = sampled(164.0, 100.0, [](double t) {
      const double x = t <= 82.0 ? 0.0 : 10.0 * (t - 82.0);
      return Eigen::Vector3d(x, 0, 50);
    });
    CHECK(idle_time_pct(traj, cfg) == doctest::Approx(50.0).epsilon(0.01));
  }

  SUBCASE("monotone in the speed threshold") {
    const TipTrajectory traj = sampled(20.0, 50.0, [](double t) {
      return Eigen::Vector3d(2.0 * std::sin(0.5 * t), 0, 50);
    });
    double prev = -1.0;
    for (double thr : {0.2, 0.5, 1.0, 2.0, 4.0}) {
      MetricConfig c;
      c.idle_speed_threshold = thr;
      const double idle = idle_time_pct(traj, c);
      CHECK(idle >= prev);
      prev = idle;
    }
  }
}

TEST_CASE("path length") {
  SUBCASE("3-4-5 segment") {
    TipTrajectory traj{{0, 0, 0, 0.0}, {3, 4, 0, 1.0}};
    CHECK(path_length(traj) == doctest::Approx(5.0));
  }

  SUBCASE("single point") {
    CHECK(path_length({{1, 2, 3, 0.0}}) == 0.0);
  }

  SUBCASE("unit circle chord sum") {
    TipTrajectory traj;
    const int n = 1000;
    for (int i = 0; i < n; ++i) {
      const double a = 2.0 * kPi * i / (n - 1);
      traj.push_back({std::cos(a), std::sin(a), 0, 0.01 * i});
    }
    CHECK(path_length(traj) == doctest::Approx(2.0 * kPi).epsilon(1e-4));
  }

  SUBCASE("empty input") {
    CHECK_THROWS_AS(path_length({}), Error);
  }
}

TEST_CASE("depth workspace") {
  SUBCASE("explicit span") {
    TipTrajectory traj{{0, 0, 10, 0.0}, {0, 0, 65, 1.0}, {0, 0, 40, 2.0}};
    CHECK(depth_workspace(traj) == doctest::Approx(55.0));
  }

  SUBCASE("constant depth") {
    CHECK(depth_workspace(stationary(1.0, 100.0)) == 0.0);
  }

  SUBCASE("sinusoidal depth") {
    const TipTrajectory traj = sampled(10.0, 100.0, [](double t) {
      return Eigen::Vector3d(0, 0, 40.0 + 8.0 * std::sin(t));
    });
    CHECK(depth_workspace(traj) == doctest::Approx(16.0).epsilon(1e-3));
  }
}

TEST_CASE("average speed") {
  SUBCASE("reported bimanual values from their path/time pairs") {
    // 2043 mm over 164 s and 1857 mm over 164 s.
    CHECK(path_length(straight_line(2043.0 / 164.0, 164.0, 100.0)) /
              total_time(straight_line(2043.0 / 164.0, 164.0, 100.0)) ==
          doctest::Approx(12.46).epsilon(2e-3));
    const TipTrajectory traj = straight_line(1857.0 / 164.0, 164.0, 100.0);
    CHECK(average_speed(traj) == doctest::Approx(11.32).epsilon(2e-3));
  }

  SUBCASE("stationary trajectory") {
    CHECK(average_speed(stationary(5.0, 100.0)) == 0.0);
  }

  SUBCASE("zero duration") {
    CHECK_THROWS_AS(average_speed({{0, 0, 0, 1.0}}), Error);
  }
}

TEST_CASE("average acceleration") {
  const MetricConfig cfg;

  SUBCASE("constant speed") {
    CHECK(average_acceleration(straight_line(10.0, 10.0, 100.0), cfg) ==
          doctest::Approx(0.0).epsilon(1e-9));
  }

  SUBCASE("speed ramp 0 to 10 over 10 s") {
    const TipTrajectory traj = sampled(10.0, 100.0, [](double t) {
      return Eigen::Vector3d(0.5 * t * t, 0, 50);
    });
    CHECK(average_acceleration(traj, cfg) == doctest::Approx(1.0).epsilon(0.02));
  }

  SUBCASE("alternating speed series, brute-force sum") {
    // Speeds 0,1,0,1,... over 1 s steps: ten unit jumps in 10 s.
    std::vector<double> speeds;
    for (int i = 0; i <= 10; ++i) speeds.push_back(i % 2 == 0 ? 0.0 : 1.0);
    double brute = 0.0;
    for (std::size_t i = 0; i + 1 < speeds.size(); ++i) {
      brute += std::abs(speeds[i + 1] - speeds[i]);
    }
    CHECK(average_acceleration_from_speeds(speeds, 10.0) == doctest::Approx(brute / 10.0));
    CHECK(average_acceleration_from_speeds(speeds, 10.0) == doctest::Approx(1.0));
  }
}

TEST_CASE("jerk and fluidity") {
  const MetricConfig cfg;

  SUBCASE("reciprocal relation on reported values") {
    CHECK(*fluidity_from_jerk(163.73) == doctest::Approx(61.08e-4).epsilon(1e-3));
    CHECK(*fluidity_from_jerk(155.66) == doctest::Approx(64.24e-4).epsilon(1e-3));
  }

  SUBCASE("constant acceleration has zero jerk and undefined fluidity") {
    const TipTrajectory traj = sampled(5.0, 100.0, [](double t) {
      return Eigen::Vector3d(2.0 * t * t, 0, 50);
    });
    const JerkResult r = jerk_and_fluidity(traj, cfg);
    CHECK(r.jerk == doctest::Approx(0.0).epsilon(1e-9));
    CHECK_FALSE(r.fluidity.has_value());
  }

  SUBCASE("cubic trajectory jerk within 2 percent of analytic") {
    const double a = 0.4;
    const TipTrajectory traj = sampled(10.0, 100.0, [&](double t) {
      return Eigen::Vector3d(a * t * t * t, 0, 50);
    });
    const JerkResult r = jerk_and_fluidity(traj, cfg);
    CHECK(r.jerk == doctest::Approx(6.0 * a).epsilon(0.02));
    CHECK(*r.fluidity == doctest::Approx(1.0 / r.jerk));
  }

  SUBCASE("norm-derivative mode vanishes for constant-radius motion") {
    MetricConfig literal = cfg;
    literal.jerk_mode = JerkMode::norm_derivative;
    const TipTrajectory traj = sampled(10.0, 100.0, [](double t) {
      return Eigen::Vector3d(50.0 * std::cos(t), 50.0 * std::sin(t), 0);
    });
    const JerkResult lit = jerk_and_fluidity(traj, literal);
    CHECK(lit.jerk == doctest::Approx(0.0).epsilon(1e-6));
    const JerkResult vec = jerk_and_fluidity(traj, cfg);
    CHECK(vec.jerk > 1.0);  // the vector form sees the rotation
  }
}

TEST_CASE("workspace volume") {
  const MetricConfig cfg;
  auto two_rings = [](double r_shallow, double r_deep, double z0, double z1) {
    TipTrajectory traj;
    int i = 0;
    for (int ring = 0; ring < 2; ++ring) {
      const double r = ring == 0 ? r_shallow : r_deep;
      const double z = ring == 0 ? z0 : z1;
      for (int k = 0; k < 200; ++k) {
        const double a = 2.0 * kPi * k / 200.0;
        traj.push_back({r * std::cos(a), r * std::sin(a), z, 0.01 * i++});
      }
    }
    return traj;
  };

  SUBCASE("cylinder limit") {
    CHECK(workspace_volume(two_rings(10, 10, 10, 40), cfg) ==
          doctest::Approx(9424.78).epsilon(1e-3));
  }

  SUBCASE("cone limit") {
    CHECK(workspace_volume(two_rings(0, 10, 10, 40), cfg) ==
          doctest::Approx(3141.59).epsilon(1e-3));
  }

  SUBCASE("frustum") {
    CHECK(workspace_volume(two_rings(4, 12, 10, 60), cfg) ==
          doctest::Approx(10890.85).epsilon(1e-3));
  }

  SUBCASE("degenerate depth") {
    CHECK_THROWS_AS(workspace_volume(stationary(1.0, 100.0), cfg), Error);
  }
}

TEST_CASE("metric set on closed-form trajectories") {
  const MetricConfig cfg;

  SUBCASE("straight line at constant speed") {
    const MetricSet m = compute_metric_set(straight_line(10.0, 10.0, 100.0), cfg);
    CHECK(m.time_total == doctest::Approx(10.0));
    CHECK(m.path_length == doctest::Approx(100.0).epsilon(1e-9));
    CHECK(m.avg_speed == doctest::Approx(10.0).epsilon(1e-9));
    CHECK(m.avg_accel == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(m.idle_pct == doctest::Approx(0.0));
    CHECK(m.jerk == doctest::Approx(0.0).epsilon(1e-9));
    CHECK_FALSE(m.fluidity.has_value());
    CHECK(m.avg_speed * m.time_total == doctest::Approx(m.path_length).epsilon(0.005));
  }

  SUBCASE("stationary five seconds") {
    const MetricSet m = compute_metric_set(stationary(5.0, 100.0), cfg);
    CHECK(m.time_total == doctest::Approx(5.0));
    CHECK(m.path_length == 0.0);
    CHECK(m.avg_speed == 0.0);
    CHECK(m.idle_pct == doctest::Approx(100.0));
    CHECK_FALSE(m.fluidity.has_value());
    CHECK_FALSE(m.volume.has_value());
    CHECK(m.notes.size() >= 2);
  }
}

TEST_CASE("metric invariances") {
  const MetricConfig cfg;
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> amp(5.0, 20.0);
  const double a1 = amp(gen);
  const double a2 = amp(gen);
  const TipTrajectory base = sampled(20.0, 100.0, [&](double t) {
    return Eigen::Vector3d(a1 * std::sin(0.7 * t), a2 * std::cos(0.4 * t),
                           60.0 + 10.0 * std::sin(0.3 * t));
  });
  const MetricSet m0 = compute_metric_set(base, cfg);

  SUBCASE("scale covariance") {
    const double k = 2.5;
    TipTrajectory scaled = base;
    for (TipPosition& p : scaled) {
      p.x *= k;
      p.y *= k;
      p.z *= k;
    }
    MetricConfig scaled_cfg = cfg;
    scaled_cfg.idle_speed_threshold = cfg.idle_speed_threshold * k;
    const MetricSet m = compute_metric_set(scaled, scaled_cfg);
    CHECK(m.path_length == doctest::Approx(k * m0.path_length).epsilon(1e-9));
    CHECK(m.depth_workspace == doctest::Approx(k * m0.depth_workspace).epsilon(1e-9));
    CHECK(m.avg_speed == doctest::Approx(k * m0.avg_speed).epsilon(1e-9));
    CHECK(m.avg_accel == doctest::Approx(k * m0.avg_accel).epsilon(1e-9));
    CHECK(m.jerk == doctest::Approx(k * m0.jerk).epsilon(1e-9));
    CHECK(*m.volume == doctest::Approx(k * k * k * *m0.volume).epsilon(1e-9));
    CHECK(m.idle_pct == doctest::Approx(m0.idle_pct).epsilon(1e-9));
  }

  SUBCASE("time shift invariance") {
    TipTrajectory shifted = base;
    for (TipPosition& p : shifted) p.t += 1234.5;
    const MetricSet m = compute_metric_set(shifted, cfg);
    CHECK(m.time_total == doctest::Approx(m0.time_total));
    CHECK(m.path_length == doctest::Approx(m0.path_length));
    CHECK(m.avg_speed == doctest::Approx(m0.avg_speed));
    CHECK(m.avg_accel == doctest::Approx(m0.avg_accel).epsilon(1e-9));
    CHECK(m.jerk == doctest::Approx(m0.jerk).epsilon(1e-9));
    CHECK(m.idle_pct == doctest::Approx(m0.idle_pct));
  }

  SUBCASE("reversal preserves geometry metrics") {
    TipTrajectory reversed;
    for (std::size_t i = base.size(); i-- > 0;) {
      TipPosition p = base[i];
      p.t = base.back().t - p.t;
      reversed.push_back(p);
    }
    const MetricSet m = compute_metric_set(reversed, cfg);
    CHECK(m.time_total == doctest::Approx(m0.time_total));
    CHECK(m.path_length == doctest::Approx(m0.path_length).epsilon(1e-9));
    CHECK(m.depth_workspace == doctest::Approx(m0.depth_workspace).epsilon(1e-9));
    CHECK(*m.volume == doctest::Approx(*m0.volume).epsilon(1e-9));
  }
}

TEST_CASE("metric errors carry the failing metric name") {
  const MetricConfig cfg;
  TipTrajectory three{{0, 0, 0, 0.0}, {1, 0, 0, 0.1}, {2, 0, 0, 0.2}};
  try {
    compute_metric_set(three, cfg);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::insufficient_data);
  }
}
