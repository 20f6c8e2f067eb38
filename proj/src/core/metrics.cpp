#include "core/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "core/units.hpp"

namespace imtd {

namespace {

void require_samples(const TipTrajectory& traj, std::size_t n, const char* op) {
  if (traj.empty()) fail(Errc::insufficient_data, std::string(op) + ": empty trajectory");
  if (traj.size() < n) {
    fail(Errc::insufficient_data,
         std::string(op) + ": need at least " + std::to_string(n) + " samples");
  }
}

// b - a with differences at the floating-point noise floor flushed to exact
// zero, so constant and affine inputs yield exactly zero higher derivatives.
double flushed_diff(double a, double b) {
  const double d = b - a;
  if (std::abs(d) <= 16.0 * std::numeric_limits<double>::epsilon() * (std::abs(a) + std::abs(b))) {
    return 0.0;
  }
  return d;
}

Eigen::Vector3d flushed_diff(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  return {flushed_diff(a.x(), b.x()), flushed_diff(a.y(), b.y()), flushed_diff(a.z(), b.z())};
}

// Value of the Lagrange polynomial through pts (at integer coordinates
// 0..m-1) evaluated at x; used to extrapolate beyond the series ends.
Eigen::Vector3d lagrange_extrapolate(std::span<const Eigen::Vector3d> pts, double x) {
  Eigen::Vector3d acc = Eigen::Vector3d::Zero();
  const int m = static_cast<int>(pts.size());
  for (int i = 0; i < m; ++i) {
    double w = 1.0;
    for (int j = 0; j < m; ++j) {
      if (j != i) w *= (x - j) / (i - j);
    }
    acc += w * pts[static_cast<std::size_t>(i)];
  }
  return acc;
}

// Centered moving average with the full window everywhere. The series is
// padded by cubic extrapolation so the smoothing bias stays uniform up to the
// ends; a window that shrinks near the boundary would kink the bias profile
// and blow up third differences there.
std::vector<Eigen::Vector3d> moving_average(const std::vector<Eigen::Vector3d>& in, int window) {
  const int n = static_cast<int>(in.size());
  if (window <= 1 || n < 2) return in;
  const int half = window / 2;
  const int m = std::min(4, n);
  const std::span<const Eigen::Vector3d> head(in.data(), static_cast<std::size_t>(m));
  const std::span<const Eigen::Vector3d> tail(in.data() + n - m, static_cast<std::size_t>(m));
  auto at = [&](int idx) -> Eigen::Vector3d {
    if (idx < 0) return lagrange_extrapolate(head, static_cast<double>(idx));
    if (idx >= n) return lagrange_extrapolate(tail, static_cast<double>(idx - (n - m)));
    return in[static_cast<std::size_t>(idx)];
  };
  std::vector<Eigen::Vector3d> out(in.size());
  for (int i = 0; i < n; ++i) {
    Eigen::Vector3d acc = Eigen::Vector3d::Zero();
    for (int j = i - half; j <= i + half; ++j) acc += at(j);
    out[i] = acc / static_cast<double>(window);
  }
  return out;
}

// Derivative of the Lagrange parabola through three samples, evaluated at t.
// Written in difference form: the weights of a derivative sum to zero, so
// factoring f0 out keeps constants exactly at zero.
Eigen::Vector3d lagrange3_derivative(double t, double t0, double t1, double t2,
                                     const Eigen::Vector3d& f0, const Eigen::Vector3d& f1,
                                     const Eigen::Vector3d& f2) {
  const double w1 = (2.0 * t - t0 - t2) / ((t1 - t0) * (t1 - t2));
  const double w2 = (2.0 * t - t0 - t1) / ((t2 - t0) * (t2 - t1));
  return w1 * flushed_diff(f0, f1) + w2 * flushed_diff(f0, f2);
}

std::vector<Eigen::Vector3d> diff_once(const std::vector<Eigen::Vector3d>& f,
                                       const std::vector<double>& t) {
  const std::size_t n = f.size();
  std::vector<Eigen::Vector3d> out(n);
  if (n == 2) {
    out[0] = out[1] = flushed_diff(f[0], f[1]) / (t[1] - t[0]);
    return out;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    out[i] = flushed_diff(f[i - 1], f[i + 1]) / (t[i + 1] - t[i - 1]);
  }
  out[0] = lagrange3_derivative(t[0], t[0], t[1], t[2], f[0], f[1], f[2]);
  out[n - 1] = lagrange3_derivative(t[n - 1], t[n - 3], t[n - 2], t[n - 1], f[n - 3], f[n - 2],
                                    f[n - 1]);
  return out;
}

struct DerivativeChain {
  std::vector<double> t;
  std::vector<std::vector<Eigen::Vector3d>> series;  // series[k] = k-th derivative, k >= 1
};

DerivativeChain derivative_chain(const std::vector<Eigen::Vector3d>& positions,
                                 const std::vector<double>& times, int upto, int window) {
  DerivativeChain chain;
  chain.t = times;
  std::vector<Eigen::Vector3d> cur = moving_average(positions, window);
  for (int k = 1; k <= upto; ++k) {
    cur = diff_once(cur, times);
    chain.series.push_back(cur);
  }
  return chain;
}

std::vector<Eigen::Vector3d> trajectory_positions(const TipTrajectory& traj) {
  std::vector<Eigen::Vector3d> p;
  p.reserve(traj.size());
  for (const TipPosition& s : traj) p.push_back(s.vec());
  return p;
}

std::vector<double> trajectory_times(const TipTrajectory& traj) {
  std::vector<double> t;
  t.reserve(traj.size());
  for (const TipPosition& s : traj) t.push_back(s.t);
  return t;
}

std::vector<double> norms(const std::vector<Eigen::Vector3d>& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].norm();
  return out;
}

double trapezoid(const std::vector<double>& f, const std::vector<double>& t) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < f.size(); ++i) {
    acc += 0.5 * (f[i] + f[i + 1]) * (t[i + 1] - t[i]);
  }
  return acc;
}

// Linear-interpolated percentile of an unsorted sample.
double percentile(std::vector<double> v, double pct) {
  if (v.empty()) fail(Errc::degenerate, "percentile of empty sample");
  std::sort(v.begin(), v.end());
  const double rank = pct / 100.0 * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(rank));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  return v[lo] * (1.0 - frac) + v[hi] * frac;
}

double idle_from_speeds(const std::vector<double>& speeds, const std::vector<double>& t,
                        const MetricConfig& cfg, double duration) {
  double idle = 0.0;
  std::size_t i = 0;
  const std::size_t n = speeds.size();
  while (i < n) {
    if (speeds[i] < cfg.idle_speed_threshold) {
      std::size_t j = i;
      while (j + 1 < n && speeds[j + 1] < cfg.idle_speed_threshold) ++j;
      const double len = t[j] - t[i];
      if (len >= cfg.idle_min_duration) idle += len;
      i = j + 1;
    } else {
      ++i;
    }
  }
  if (duration <= 0.0) return 0.0;
  return std::min(100.0, 100.0 * idle / duration);
}

// Third differences of 53-bit positions over step h are rounding noise below
// roughly ulp(|x|) / (2h)^3; a computed jerk under that bound carries no
// information and reads as zero.
double jerk_noise_floor(const std::vector<Eigen::Vector3d>& positions,
                        const std::vector<double>& times) {
  double max_abs = 0.0;
  for (const Eigen::Vector3d& p : positions) max_abs = std::max(max_abs, p.cwiseAbs().maxCoeff());
  std::vector<double> steps(times.size() - 1);
  for (std::size_t i = 0; i + 1 < times.size(); ++i) steps[i] = times[i + 1] - times[i];
  std::nth_element(steps.begin(), steps.begin() + static_cast<std::ptrdiff_t>(steps.size() / 2),
                   steps.end());
  const double h = std::max(steps[steps.size() / 2], 1e-12);
  const double stencil = 8.0 * h * h * h;
  return 32.0 * std::numeric_limits<double>::epsilon() * max_abs / stencil;
}

double jerk_value(const TipTrajectory& traj, const MetricConfig& cfg) {
  const double duration = total_time(traj);
  if (duration <= 0.0) fail(Errc::degenerate, "jerk: zero duration");
  const std::vector<double> times = trajectory_times(traj);
  const std::vector<Eigen::Vector3d> positions = trajectory_positions(traj);
  double jerk = 0.0;
  if (cfg.jerk_mode == JerkMode::vector_derivative) {
    const DerivativeChain chain = derivative_chain(positions, times, 3, cfg.smoothing_window);
    jerk = trapezoid(norms(chain.series[2]), times) / duration;
  } else {
    // Literal variant: third derivative of the scalar tip distance.
    std::vector<Eigen::Vector3d> dist(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) dist[i] = {positions[i].norm(), 0.0, 0.0};
    const DerivativeChain chain = derivative_chain(dist, times, 3, cfg.smoothing_window);
    std::vector<double> integrand(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) integrand[i] = chain.series[2][i].x();
    jerk = std::abs(trapezoid(integrand, times) / duration);
  }
  return jerk <= jerk_noise_floor(positions, times) ? 0.0 : jerk;
}

}  // namespace

void MetricConfig::validate() const {
  if (smoothing_window < 1 || smoothing_window % 2 == 0) {
    fail(Errc::invalid_argument, "metric config: smoothing_window must be odd and >= 1");
  }
  if (!(idle_speed_threshold > 0.0) || !(idle_min_duration > 0.0)) {
    fail(Errc::invalid_argument, "metric config: idle thresholds must be positive");
  }
  if (!(jerk_epsilon > 0.0)) fail(Errc::invalid_argument, "metric config: jerk_epsilon must be positive");
  if (!(frustum_band_fraction > 0.0) || frustum_band_fraction > 0.5) {
    fail(Errc::invalid_argument, "metric config: frustum_band_fraction must be in (0, 0.5]");
  }
  if (!(frustum_radius_percentile > 0.0) || frustum_radius_percentile > 100.0) {
    fail(Errc::invalid_argument, "metric config: frustum_radius_percentile must be in (0, 100]");
  }
}

std::vector<Eigen::Vector3d> differentiate(const TipTrajectory& traj, int order,
                                           const MetricConfig& cfg) {
  if (order < 1 || order > 3) fail(Errc::invalid_argument, "differentiate: order must be 1..3");
  cfg.validate();
  require_samples(traj, static_cast<std::size_t>(order) + 1, "differentiate");
  const DerivativeChain chain = derivative_chain(trajectory_positions(traj),
                                                 trajectory_times(traj), order,
                                                 cfg.smoothing_window);
  return chain.series[static_cast<std::size_t>(order) - 1];
}

double total_time(const TipTrajectory& traj) {
  require_samples(traj, 1, "total_time");
  return traj.back().t - traj.front().t;
}

double idle_time_pct(const TipTrajectory& traj, const MetricConfig& cfg) {
  cfg.validate();
  require_samples(traj, 2, "idle_time_pct");
  const std::vector<double> speeds = norms(differentiate(traj, 1, cfg));
  return idle_from_speeds(speeds, trajectory_times(traj), cfg, total_time(traj));
}

double path_length(const TipTrajectory& traj) {
  require_samples(traj, 1, "path_length");
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < traj.size(); ++i) {
    acc += (traj[i + 1].vec() - traj[i].vec()).norm();
  }
  return acc;
}

double depth_workspace(const TipTrajectory& traj) {
  require_samples(traj, 1, "depth_workspace");
  auto [lo, hi] = std::minmax_element(traj.begin(), traj.end(),
                                      [](const TipPosition& a, const TipPosition& b) {
                                        return a.z < b.z;
                                      });
  return hi->z - lo->z;
}

double average_speed(const TipTrajectory& traj) {
  const double duration = total_time(traj);
  if (duration <= 0.0) fail(Errc::degenerate, "average_speed: zero duration");
  return path_length(traj) / duration;
}

double average_acceleration_from_speeds(std::span<const double> speeds, double duration) {
  if (speeds.size() < 2) fail(Errc::insufficient_data, "average_acceleration: need >= 2 speeds");
  if (duration <= 0.0) fail(Errc::degenerate, "average_acceleration: zero duration");
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < speeds.size(); ++i) acc += std::abs(speeds[i + 1] - speeds[i]);
  return acc / duration;
}

double average_acceleration(const TipTrajectory& traj, const MetricConfig& cfg) {
  cfg.validate();
  require_samples(traj, 3, "average_acceleration");
  const std::vector<double> speeds = norms(differentiate(traj, 1, cfg));
  return average_acceleration_from_speeds(speeds, total_time(traj));
}

std::optional<double> fluidity_from_jerk(double jerk, double epsilon) {
  if (jerk < epsilon) return std::nullopt;
  return 1.0 / jerk;
}

JerkResult jerk_and_fluidity(const TipTrajectory& traj, const MetricConfig& cfg) {
  cfg.validate();
  require_samples(traj, 4, "jerk");
  JerkResult r;
  r.jerk = jerk_value(traj, cfg);
  r.fluidity = fluidity_from_jerk(r.jerk, cfg.jerk_epsilon);
  return r;
}

double workspace_volume(const TipTrajectory& traj, const MetricConfig& cfg) {
  cfg.validate();
  require_samples(traj, 1, "workspace_volume");
  const double h = depth_workspace(traj);
  if (h <= 0.0) fail(Errc::degenerate, "workspace_volume: degenerate depth span");
  auto [lo, hi] = std::minmax_element(traj.begin(), traj.end(),
                                      [](const TipPosition& a, const TipPosition& b) {
                                        return a.z < b.z;
                                      });
  const double band = cfg.frustum_band_fraction * h;
  std::vector<double> deep_radii;
  std::vector<double> shallow_radii;
  for (const TipPosition& p : traj) {
    const double radial = std::hypot(p.x, p.y);
    if (p.z >= hi->z - band) deep_radii.push_back(radial);
    if (p.z <= lo->z + band) shallow_radii.push_back(radial);
  }
  const double big_r = percentile(std::move(deep_radii), cfg.frustum_radius_percentile);
  const double small_r = percentile(std::move(shallow_radii), cfg.frustum_radius_percentile);
  return kPi / 3.0 * h * (big_r * big_r + big_r * small_r + small_r * small_r);
}

MetricSet compute_metric_set(const TipTrajectory& traj, const MetricConfig& cfg) {
  cfg.validate();
  require_samples(traj, 4, "compute_metric_set");

  MetricSet m;
  auto labeled = [](const char* name, auto&& fn) -> decltype(fn()) {
    try {
      return fn();
    } catch (const Error& e) {
      fail(e.code(), std::string("metric ") + name + ": " + e.what());
    }
  };

  m.time_total = labeled("time_total", [&] { return total_time(traj); });
  m.path_length = labeled("path_length", [&] { return path_length(traj); });
  m.depth_workspace = labeled("depth_workspace", [&] { return depth_workspace(traj); });
  if (m.time_total <= 0.0) fail(Errc::degenerate, "metric avg_speed: zero duration");
  m.avg_speed = m.path_length / m.time_total;

  const std::vector<double> times = trajectory_times(traj);
  const std::vector<Eigen::Vector3d> positions = trajectory_positions(traj);
  const DerivativeChain chain = labeled("differentiate", [&] {
    return derivative_chain(positions, times, 3, cfg.smoothing_window);
  });
  const std::vector<double> speeds = norms(chain.series[0]);

  m.idle_pct = idle_from_speeds(speeds, times, cfg, m.time_total);
  m.avg_accel =
      labeled("avg_accel", [&] { return average_acceleration_from_speeds(speeds, m.time_total); });

  if (cfg.jerk_mode == JerkMode::vector_derivative) {
    const double raw = trapezoid(norms(chain.series[2]), times) / m.time_total;
    m.jerk = raw <= jerk_noise_floor(positions, times) ? 0.0 : raw;
  } else {
    m.jerk = labeled("jerk", [&] { return jerk_value(traj, cfg); });
  }
  m.fluidity = fluidity_from_jerk(m.jerk, cfg.jerk_epsilon);
  if (!m.fluidity) m.notes.push_back("fluidity undefined: jerk below epsilon");

  try {
    m.volume = workspace_volume(traj, cfg);
  } catch (const Error& e) {
    if (e.code() != Errc::degenerate) {
      fail(e.code(), std::string("metric volume: ") + e.what());
    }
    m.notes.push_back("volume undefined: degenerate depth workspace");
  }
  return m;
}

}  // namespace imtd
