#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/error.hpp"
#include "core/kinematics.hpp"

namespace imtd {

/// How the smoothness integrand is formed: norm of the third derivative of the
/// position vector (default), or the third derivative of the scalar distance
/// |r(t)| (zero for constant-radius motion, kept selectable for comparison).
enum class JerkMode { vector_derivative, norm_derivative };

/// Parameters the metric definitions leave open. Echoed into every report.
struct MetricConfig {
  double idle_speed_threshold = 1.0;   // mm/s
  double idle_min_duration = 0.5;      // s
  int smoothing_window = 5;            // odd sample count
  double jerk_epsilon = 1e-9;          // mm/s^3; below this, fluidity is undefined
  double frustum_band_fraction = 0.1;  // depth fraction defining the end bands
  double frustum_radius_percentile = 95.0;
  JerkMode jerk_mode = JerkMode::vector_derivative;

  void validate() const;
};

/// The nine evaluation metrics for one hand's trajectory.
/// fluidity is absent when jerk is below jerk_epsilon; volume is absent when
/// the depth workspace is degenerate. Absences are listed in notes.
struct MetricSet {
  double time_total = 0.0;      // s
  double idle_pct = 0.0;        // %
  double path_length = 0.0;     // mm
  double depth_workspace = 0.0; // mm
  double avg_speed = 0.0;       // mm/s
  double avg_accel = 0.0;       // mm/s^2
  double jerk = 0.0;            // mm/s^3
  std::optional<double> fluidity;  // s^3/mm
  std::optional<double> volume;    // mm^3
  std::vector<std::string> notes;
};

/// Time series of sample derivatives (d position / dt^order), one vector per
/// input sample. The series is moving-average smoothed before differencing;
/// interior points use symmetric differences, endpoints one-sided second-order
/// differences.
std::vector<Eigen::Vector3d> differentiate(const TipTrajectory& traj, int order,
                                           const MetricConfig& cfg);

double total_time(const TipTrajectory& traj);
double idle_time_pct(const TipTrajectory& traj, const MetricConfig& cfg);
double path_length(const TipTrajectory& traj);
double depth_workspace(const TipTrajectory& traj);
double average_speed(const TipTrajectory& traj);
double average_acceleration(const TipTrajectory& traj, const MetricConfig& cfg);

/// Consecutive-difference mean of a scalar speed series over a duration;
/// the summation path behind average_acceleration.
double average_acceleration_from_speeds(std::span<const double> speeds, double duration);

struct JerkResult {
  double jerk = 0.0;
  std::optional<double> fluidity;
};

JerkResult jerk_and_fluidity(const TipTrajectory& traj, const MetricConfig& cfg);

/// 1/jerk, absent below epsilon.
std::optional<double> fluidity_from_jerk(double jerk, double epsilon = 1e-9);

/// Truncated-cone estimate of the explored volume: h spans the depth
/// workspace, R and r are radius percentiles within the deepest and
/// shallowest depth bands. Throws degenerate when the depth span is zero.
double workspace_volume(const TipTrajectory& traj, const MetricConfig& cfg);

/// All nine metrics from one differentiation pass. Degenerate fluidity/volume
/// become absences with notes; hard sub-metric failures are rethrown with the
/// metric name attached.
MetricSet compute_metric_set(const TipTrajectory& traj, const MetricConfig& cfg);

}  // namespace imtd
