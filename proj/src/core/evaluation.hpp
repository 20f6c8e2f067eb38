#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/acquisition.hpp"
#include "core/kinematics.hpp"
#include "core/metrics.hpp"

namespace imtd {

/// The nine metrics partitioned into the three skill subcategories. Average
/// speed sits under gesture control with acceleration and fluidity; jerk is
/// carried next to fluidity as its reciprocal base value.
struct SubcategoryView {
  struct ExecutionRapidity {
    double time_total = 0.0;
    double idle_pct = 0.0;
  } execution_rapidity;
  struct GestureControl {
    double avg_accel = 0.0;
    std::optional<double> fluidity;
    double jerk = 0.0;
    double avg_speed = 0.0;
  } gesture_control;
  struct Navigation3d {
    double path_length = 0.0;
    double depth_workspace = 0.0;
    std::optional<double> volume;
  } navigation_3d;
  std::vector<std::string> notes;
};

SubcategoryView group_by_subcategory(const MetricSet& m);

struct ChannelMse {
  double phi1 = 0.0;         // deg^2
  double phi2 = 0.0;         // deg^2
  double translation = 0.0;  // mm^2
  double applied_lag = 0.0;  // s
  std::size_t dropped_reference_samples = 0;
};

/// Bimanual, subcategory-grouped session report plus everything needed to
/// reproduce it: the configuration echo and processing notes.
struct SessionReport {
  std::optional<SubcategoryView> left;
  std::optional<SubcategoryView> right;
  std::map<std::string, std::optional<double>> relative_difference;  // (right-left)/left
  std::optional<ChannelMse> validation;
  MetricConfig metric_config;
  Calibration calibration;
  AngleConvention convention = AngleConvention::sign_reconciled;
  std::vector<std::string> notes;
};

/// Side-by-side report. Metric sets may be single-handed (pass nullopt).
/// A session-duration mismatch beyond 1 % is recorded as a warning note.
SessionReport bimanual_report(const std::optional<MetricSet>& left,
                              const std::optional<MetricSet>& right,
                              const std::optional<ChannelMse>& mse, const MetricConfig& cfg,
                              const Calibration& cal, AngleConvention convention);

struct EllipseFit {
  double semi_major = 0.0;  // degrees
  double semi_minor = 0.0;  // degrees
  double center_phi1 = 0.0;
  double center_phi2 = 0.0;
  double tilt = 0.0;  // degrees, major axis vs phi1 axis
};

/// Gimbal-plane workspace summary: convex hull of (phi1, phi2), a least-
/// squares ellipse through the hull vertices, and the cone-angle check.
struct BoundarySummary {
  std::vector<std::array<double, 2>> hull;  // (phi1, phi2) vertices, CCW
  std::optional<EllipseFit> ellipse;        // absent for degenerate hulls
  double max_cone_angle = 0.0;              // degrees
  bool cone_violation = false;
};

/// Requires at least 100 samples.
BoundarySummary workspace_boundary(std::span<const JointState> joints, double cone_half_angle);

}  // namespace imtd
