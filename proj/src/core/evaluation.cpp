#include "core/evaluation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "core/units.hpp"

namespace imtd {

namespace {

double cross(const std::array<double, 2>& o, const std::array<double, 2>& a,
             const std::array<double, 2>& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Andrew monotone chain; returns CCW vertices, collinear points dropped.
std::vector<std::array<double, 2>> convex_hull(std::vector<std::array<double, 2>> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const std::size_t n = pts.size();
  if (n <= 2) return pts;
  std::vector<std::array<double, 2>> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = n - 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

std::optional<EllipseFit> fit_ellipse(const std::vector<std::array<double, 2>>& pts) {
  if (pts.size() < 5) return std::nullopt;
  Eigen::MatrixXd a(pts.size(), 5);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double x = pts[i][0];
    const double y = pts[i][1];
    a.row(static_cast<Eigen::Index>(i)) << x * x, x * y, y * y, x, y;
  }
  const Eigen::VectorXd rhs = Eigen::VectorXd::Ones(a.rows());
  const Eigen::VectorXd p = a.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(rhs);

  Eigen::Matrix2d m;
  m << p(0), p(1) / 2.0, p(1) / 2.0, p(2);
  Eigen::Matrix2d center_lhs;
  center_lhs << 2.0 * p(0), p(1), p(1), 2.0 * p(2);
  if (std::abs(center_lhs.determinant()) < 1e-12) return std::nullopt;
  const Eigen::Vector2d center = center_lhs.colPivHouseholderQr().solve(Eigen::Vector2d(-p(3), -p(4)));

  const double c0 = p(0) * center.x() * center.x() + p(1) * center.x() * center.y() +
                    p(2) * center.y() * center.y() + p(3) * center.x() + p(4) * center.y() - 1.0;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(m);
  const double l0 = eig.eigenvalues()(0);
  const double l1 = eig.eigenvalues()(1);
  if (l0 <= 0.0 || l1 <= 0.0 || -c0 <= 0.0) return std::nullopt;

  EllipseFit fit;
  fit.semi_major = std::sqrt(-c0 / l0);  // smaller eigenvalue -> longer axis
  fit.semi_minor = std::sqrt(-c0 / l1);
  fit.center_phi1 = center.x();
  fit.center_phi2 = center.y();
  const Eigen::Vector2d major_dir = eig.eigenvectors().col(0);
  fit.tilt = rad2deg(std::atan2(major_dir.y(), major_dir.x()));
  return fit;
}

std::optional<double> relative_diff(std::optional<double> left, std::optional<double> right) {
  if (!left || !right || *left == 0.0) return std::nullopt;
  return (*right - *left) / *left;
}

}  // namespace

SubcategoryView group_by_subcategory(const MetricSet& m) {
  SubcategoryView v;
  v.execution_rapidity = {m.time_total, m.idle_pct};
  v.gesture_control = {m.avg_accel, m.fluidity, m.jerk, m.avg_speed};
  v.navigation_3d = {m.path_length, m.depth_workspace, m.volume};
  v.notes = m.notes;
  return v;
}

SessionReport bimanual_report(const std::optional<MetricSet>& left,
                              const std::optional<MetricSet>& right,
                              const std::optional<ChannelMse>& mse, const MetricConfig& cfg,
                              const Calibration& cal, AngleConvention convention) {
  if (!left && !right) fail(Errc::invalid_argument, "bimanual_report: no metric sets supplied");

  SessionReport report;
  report.metric_config = cfg;
  report.calibration = cal;
  report.convention = convention;
  report.validation = mse;
  if (left) report.left = group_by_subcategory(*left);
  if (right) report.right = group_by_subcategory(*right);

  if (left && right) {
    auto opt = [](double v) { return std::optional<double>(v); };
    report.relative_difference["time_total"] = relative_diff(opt(left->time_total), opt(right->time_total));
    report.relative_difference["idle_pct"] = relative_diff(opt(left->idle_pct), opt(right->idle_pct));
    report.relative_difference["path_length"] =
        relative_diff(opt(left->path_length), opt(right->path_length));
    report.relative_difference["depth_workspace"] =
        relative_diff(opt(left->depth_workspace), opt(right->depth_workspace));
    report.relative_difference["avg_speed"] = relative_diff(opt(left->avg_speed), opt(right->avg_speed));
    report.relative_difference["avg_accel"] = relative_diff(opt(left->avg_accel), opt(right->avg_accel));
    report.relative_difference["jerk"] = relative_diff(opt(left->jerk), opt(right->jerk));
    report.relative_difference["fluidity"] = relative_diff(left->fluidity, right->fluidity);
    report.relative_difference["volume"] = relative_diff(left->volume, right->volume);

    if (!left->fluidity || !right->fluidity) {
      report.notes.push_back("fluidity undefined for at least one hand; comparison omitted");
    }
    const double t_max = std::max(left->time_total, right->time_total);
    if (t_max > 0.0 && std::abs(left->time_total - right->time_total) / t_max > 0.01) {
      report.notes.push_back("warning: session durations differ by more than 1 %");
    }
    if (right->path_length < left->path_length) {
      report.notes.push_back("right hand covers less distance: more optimized trajectory");
    } else if (left->path_length < right->path_length) {
      report.notes.push_back("left hand covers less distance: more optimized trajectory");
    }
    if (left->volume && right->volume) {
      if (*right->volume < *left->volume) {
        report.notes.push_back("right hand explores a smaller volume: better spatial efficiency");
      } else if (*left->volume < *right->volume) {
        report.notes.push_back("left hand explores a smaller volume: better spatial efficiency");
      }
    }
  }
  return report;
}

BoundarySummary workspace_boundary(std::span<const JointState> joints, double cone_half_angle) {
  if (joints.size() < 100) {
    fail(Errc::insufficient_data, "workspace_boundary: need at least 100 samples");
  }
  std::vector<std::array<double, 2>> pts;
  pts.reserve(joints.size());
  BoundarySummary out;
  for (const JointState& q : joints) {
    pts.push_back({q.phi1, q.phi2});
    out.max_cone_angle = std::max(out.max_cone_angle, std::hypot(q.phi1, q.phi2));
  }
  // A nanodegree of slack: boundary-touching scans sample the half angle
  // exactly and must not flag through rounding alone.
  out.cone_violation = out.max_cone_angle > cone_half_angle + 1e-9;
  out.hull = convex_hull(std::move(pts));
  out.ellipse = fit_ellipse(out.hull);
  return out;
}

}  // namespace imtd
