#include "imtd/imtd.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <fstream>
#include <string>
#include <vector>

#include "core/acquisition.hpp"
#include "core/csv_io.hpp"
#include "core/evaluation.hpp"
#include "core/kinematics.hpp"
#include "core/metrics.hpp"
#include "core/reference.hpp"
#include "core/report_io.hpp"
#include "core/simulator.hpp"

struct imtd_calibration {
  imtd::Calibration v;
};
struct imtd_metric_config {
  imtd::MetricConfig v;
};
struct imtd_joint_series {
  std::vector<imtd::JointState> v;
};
struct imtd_frame_series {
  std::vector<imtd::EncoderFrame> v;
  std::size_t saturated = 0;
};
struct imtd_metric_set {
  imtd::MetricSet v;
};
struct imtd_validation {
  imtd::ChannelMse mse;
  imtd::AlignmentResult alignment;
};
struct imtd_report {
  imtd::SessionReport v;
};

namespace {

thread_local std::string g_last_error;

void set_last_error(const std::string& msg) { g_last_error = msg; }

imtd_status map_errc(imtd::Errc code) {
  switch (code) {
    case imtd::Errc::invalid_argument: return IMTD_ERR_INVALID_ARGUMENT;
    case imtd::Errc::parse: return IMTD_ERR_PARSE;
    case imtd::Errc::alignment: return IMTD_ERR_ALIGNMENT;
    case imtd::Errc::metric: return IMTD_ERR_METRIC;
    case imtd::Errc::io: return IMTD_ERR_IO;
    case imtd::Errc::out_of_range: return IMTD_ERR_RANGE;
    case imtd::Errc::insufficient_data: return IMTD_ERR_INSUFFICIENT_DATA;
    case imtd::Errc::degenerate: return IMTD_ERR_DEGENERATE;
    case imtd::Errc::not_static: return IMTD_ERR_NOT_STATIC;
    case imtd::Errc::ordering: return IMTD_ERR_ORDERING;
    case imtd::Errc::saturation: return IMTD_ERR_SATURATION;
  }
  return IMTD_ERR_UNKNOWN;
}

template <typename Fn>
imtd_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    return IMTD_OK;
  } catch (const imtd::Error& e) {
    set_last_error(e.what());
    return map_errc(e.code());
  } catch (const std::exception& e) {
    set_last_error(e.what());
    return IMTD_ERR_UNKNOWN;
  } catch (...) {
    set_last_error("unknown failure");
    return IMTD_ERR_UNKNOWN;
  }
}

imtd_status require(bool ok, const char* msg) {
  if (ok) return IMTD_OK;
  set_last_error(msg);
  return IMTD_ERR_INVALID_ARGUMENT;
}

imtd::AngleConvention to_convention(imtd_convention c) {
  return c == IMTD_CONVENTION_PAPER ? imtd::AngleConvention::paper_literal
                                    : imtd::AngleConvention::sign_reconciled;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

const imtd::MetricSet* metrics_or_null(const imtd_metric_set* m) { return m ? &m->v : nullptr; }

}  // namespace

extern "C" {

const char* imtd_last_error(void) { return g_last_error.c_str(); }

/* ---- calibration / metric config ---- */

imtd_calibration* imtd_calibration_default(void) { return new (std::nothrow) imtd_calibration{}; }

imtd_status imtd_calibration_load(const char* path, imtd_calibration** out) {
  if (imtd_status s = require(path && out, "calibration_load: null argument")) return s;
  return guarded([&] { *out = new imtd_calibration{imtd::load_calibration(path)}; });
}

imtd_status imtd_calibration_save(const imtd_calibration* cal, const char* path) {
  if (imtd_status s = require(cal && path, "calibration_save: null argument")) return s;
  return guarded([&] {
    std::ofstream outfile(path);
    if (!outfile) imtd::fail(imtd::Errc::io, std::string("cannot open for writing: ") + path);
    outfile << imtd::calibration_to_json(cal->v).dump(2) << '\n';
  });
}

void imtd_calibration_free(imtd_calibration* cal) { delete cal; }

double imtd_calibration_cone_half_angle(const imtd_calibration* cal) {
  return cal ? cal->v.cone_half_angle : 0.0;
}

double imtd_calibration_sample_rate(const imtd_calibration* cal) {
  return cal ? cal->v.sample_rate : 0.0;
}

imtd_metric_config* imtd_metric_config_default(void) {
  return new (std::nothrow) imtd_metric_config{};
}

imtd_status imtd_metric_config_load(const char* path, imtd_metric_config** out) {
  if (imtd_status s = require(path && out, "metric_config_load: null argument")) return s;
  return guarded([&] { *out = new imtd_metric_config{imtd::load_metric_config(path)}; });
}

imtd_status imtd_metric_config_set_jerk_mode(imtd_metric_config* cfg, imtd_jerk_mode mode) {
  if (imtd_status s = require(cfg != nullptr, "set_jerk_mode: null config")) return s;
  cfg->v.jerk_mode = mode == IMTD_JERK_NORM_DERIVATIVE ? imtd::JerkMode::norm_derivative
                                                       : imtd::JerkMode::vector_derivative;
  return IMTD_OK;
}

void imtd_metric_config_free(imtd_metric_config* cfg) { delete cfg; }

/* ---- kinematics ---- */

imtd_status imtd_forward_kinematics(double phi1_deg, double phi2_deg, double d_mm,
                                    double out_xyz[3]) {
  if (imtd_status s = require(out_xyz != nullptr, "forward_kinematics: null output")) return s;
  return guarded([&] {
    const imtd::TipPosition p =
        imtd::forward_kinematics({phi1_deg, phi2_deg, 0.0, d_mm, 0.0});
    out_xyz[0] = p.x;
    out_xyz[1] = p.y;
    out_xyz[2] = p.z;
  });
}

/* ---- simulation ---- */

imtd_status imtd_simulate_cone_scan(double cone_half_angle_deg, double d_min_mm, double d_max_mm,
                                    double duration_s, double rate_hz, imtd_hand hand,
                                    double ellipse_ratio, imtd_joint_series** out) {
  if (imtd_status s = require(out != nullptr, "simulate_cone_scan: null output")) return s;
  return guarded([&] {
    imtd::ScanParams p =
        imtd::ScanParams::for_hand(hand == IMTD_HAND_LEFT ? imtd::Hand::left : imtd::Hand::right);
    p.cone_half_angle = cone_half_angle_deg;
    p.d_range = {d_min_mm, d_max_mm};
    p.duration = duration_s;
    p.rate = rate_hz;
    p.ellipse_ratio = ellipse_ratio;
    *out = new imtd_joint_series{imtd::generate_cone_scan(p)};
  });
}

imtd_status imtd_simulate_peg_transfer(double duration_s, double rate_hz, imtd_hand hand,
                                       uint64_t seed, imtd_joint_series** out) {
  if (imtd_status s = require(out != nullptr, "simulate_peg_transfer: null output")) return s;
  return guarded([&] {
    *out = new imtd_joint_series{imtd::generate_peg_transfer_profile(
        duration_s, rate_hz, hand == IMTD_HAND_LEFT ? imtd::Hand::left : imtd::Hand::right,
        seed)};
  });
}

imtd_status imtd_encode(const imtd_joint_series* joints, const imtd_calibration* cal,
                        double angle_noise_sd_deg, double translation_noise_sd_mm, uint64_t seed,
                        imtd_frame_series** out) {
  if (imtd_status s = require(joints && cal && out, "encode: null argument")) return s;
  return guarded([&] {
    imtd::NoiseParams n{angle_noise_sd_deg, translation_noise_sd_mm, seed};
    imtd::EncodedStream enc = imtd::corrupt_and_encode(joints->v, cal->v, n);
    *out = new imtd_frame_series{std::move(enc.frames), enc.saturated_samples.size()};
  });
}

/* ---- streams ---- */

imtd_status imtd_joint_series_load_csv(const char* path, imtd_joint_series** out) {
  if (imtd_status s = require(path && out, "joint_series_load_csv: null argument")) return s;
  return guarded([&] { *out = new imtd_joint_series{imtd::load_joints_csv(path)}; });
}

imtd_status imtd_joint_series_save_csv(const imtd_joint_series* joints, const char* path) {
  if (imtd_status s = require(joints && path, "joint_series_save_csv: null argument")) return s;
  return guarded([&] { imtd::save_joints_csv(path, joints->v); });
}

size_t imtd_joint_series_size(const imtd_joint_series* joints) {
  return joints ? joints->v.size() : 0;
}

imtd_status imtd_joint_series_at(const imtd_joint_series* joints, size_t index, double* t_s,
                                 double* phi1_deg, double* phi2_deg, double* phi3_deg,
                                 int* phi3_defined, double* d_mm) {
  if (imtd_status s = require(joints != nullptr, "joint_series_at: null series")) return s;
  if (index >= joints->v.size()) {
    set_last_error("joint_series_at: index out of range");
    return IMTD_ERR_RANGE;
  }
  const imtd::JointState& q = joints->v[index];
  if (t_s) *t_s = q.t;
  if (phi1_deg) *phi1_deg = q.phi1;
  if (phi2_deg) *phi2_deg = q.phi2;
  if (phi3_defined) *phi3_defined = q.phi3.has_value() ? 1 : 0;
  if (phi3_deg && q.phi3) *phi3_deg = *q.phi3;
  if (d_mm) *d_mm = q.d;
  return IMTD_OK;
}

double imtd_joint_series_max_cone_angle(const imtd_joint_series* joints) {
  double max_angle = 0.0;
  if (!joints) return max_angle;
  for (const imtd::JointState& q : joints->v) {
    max_angle = std::max(max_angle, std::hypot(q.phi1, q.phi2));
  }
  return max_angle;
}

void imtd_joint_series_free(imtd_joint_series* joints) { delete joints; }

imtd_status imtd_frame_series_load_csv(const char* path, imtd_frame_series** out) {
  if (imtd_status s = require(path && out, "frame_series_load_csv: null argument")) return s;
  return guarded([&] { *out = new imtd_frame_series{imtd::load_raw_stream_csv(path), 0}; });
}

imtd_status imtd_frame_series_save_csv(const imtd_frame_series* frames, const char* path) {
  if (imtd_status s = require(frames && path, "frame_series_save_csv: null argument")) return s;
  return guarded([&] { imtd::save_raw_stream_csv(path, frames->v); });
}

size_t imtd_frame_series_size(const imtd_frame_series* frames) {
  return frames ? frames->v.size() : 0;
}

size_t imtd_frame_series_saturated_count(const imtd_frame_series* frames) {
  return frames ? frames->saturated : 0;
}

void imtd_frame_series_free(imtd_frame_series* frames) { delete frames; }

imtd_status imtd_decode(const imtd_frame_series* frames, const imtd_calibration* cal,
                        double initial_depth_mm, imtd_joint_series** out) {
  if (imtd_status s = require(frames && cal && out, "decode: null argument")) return s;
  return guarded([&] {
    imtd::StreamDecoder decoder(cal->v, initial_depth_mm);
    *out = new imtd_joint_series{decoder.decode_stream(frames->v)};
  });
}

imtd_status imtd_load_stream_auto(const char* path, const imtd_calibration* cal,
                                  double initial_depth_mm, imtd_joint_series** out) {
  if (imtd_status s = require(path && out, "load_stream_auto: null argument")) return s;
  return guarded([&] {
    if (imtd::sniff_stream_csv(path) == imtd::StreamKind::joints) {
      *out = new imtd_joint_series{imtd::load_joints_csv(path)};
      return;
    }
    if (!cal) {
      imtd::fail(imtd::Errc::invalid_argument,
                 std::string(path) + ": raw count stream requires a calibration");
    }
    imtd::StreamDecoder decoder(cal->v, initial_depth_mm);
    *out = new imtd_joint_series{decoder.decode_stream(imtd::load_raw_stream_csv(path))};
  });
}

/* ---- metrics ---- */

imtd_status imtd_metrics_compute(const imtd_joint_series* joints, const imtd_metric_config* cfg,
                                 imtd_metric_set** out) {
  if (imtd_status s = require(joints && cfg && out, "metrics_compute: null argument")) return s;
  return guarded([&] {
    const imtd::TipTrajectory traj = imtd::reconstruct_trajectory(joints->v);
    *out = new imtd_metric_set{imtd::compute_metric_set(traj, cfg->v)};
  });
}

imtd_status imtd_metric_set_value(const imtd_metric_set* metrics, imtd_metric metric,
                                  double* value, int* defined) {
  if (imtd_status s = require(metrics && value, "metric_set_value: null argument")) return s;
  const imtd::MetricSet& m = metrics->v;
  int dummy = 0;
  int& def = defined ? *defined : dummy;
  def = 1;
  switch (metric) {
    case IMTD_METRIC_TIME_TOTAL: *value = m.time_total; return IMTD_OK;
    case IMTD_METRIC_IDLE_PCT: *value = m.idle_pct; return IMTD_OK;
    case IMTD_METRIC_PATH_LENGTH: *value = m.path_length; return IMTD_OK;
    case IMTD_METRIC_DEPTH_WORKSPACE: *value = m.depth_workspace; return IMTD_OK;
    case IMTD_METRIC_AVG_SPEED: *value = m.avg_speed; return IMTD_OK;
    case IMTD_METRIC_AVG_ACCEL: *value = m.avg_accel; return IMTD_OK;
    case IMTD_METRIC_JERK: *value = m.jerk; return IMTD_OK;
    case IMTD_METRIC_FLUIDITY:
      def = m.fluidity.has_value() ? 1 : 0;
      if (m.fluidity) *value = *m.fluidity;
      return IMTD_OK;
    case IMTD_METRIC_VOLUME:
      def = m.volume.has_value() ? 1 : 0;
      if (m.volume) *value = *m.volume;
      return IMTD_OK;
  }
  set_last_error("metric_set_value: unknown metric");
  return IMTD_ERR_INVALID_ARGUMENT;
}

void imtd_metric_set_free(imtd_metric_set* metrics) { delete metrics; }

/* ---- reference validation ---- */

imtd_status imtd_validate(const imtd_joint_series* device, const char* marker_csv_path,
                          const char* device_triad_path, const char* reference_triad_path,
                          double grid_rate_hz, int lag_correction, imtd_convention convention,
                          imtd_validation** out) {
  if (imtd_status s = require(device && marker_csv_path && out, "validate: null argument")) {
    return s;
  }
  return guarded([&] {
    const imtd::MarkerStream markers = imtd::load_marker_csv(marker_csv_path);
    imtd::FrameTriad device_triad;
    imtd::FrameTriad reference_triad;
    if (device_triad_path) device_triad = imtd::load_triad(device_triad_path);
    if (reference_triad_path) reference_triad = imtd::load_triad(reference_triad_path);
    const imtd::Transform ref_to_device =
        imtd::estimate_frame_transform(device_triad, reference_triad);
    const imtd::DerivedJoints derived =
        imtd::derive_reference_joints(markers, ref_to_device, to_convention(convention));
    imtd::AlignmentResult alignment =
        imtd::resample_align(device->v, derived.joints, grid_rate_hz, lag_correction != 0);

    imtd::ChannelMse mse;
    mse.phi1 = imtd::channel_mse(alignment.channels[0]);
    mse.phi2 = imtd::channel_mse(alignment.channels[1]);
    mse.translation = imtd::channel_mse(alignment.channels[2]);
    mse.applied_lag = alignment.applied_lag;
    mse.dropped_reference_samples = derived.dropped_samples;
    *out = new imtd_validation{mse, std::move(alignment)};
  });
}

imtd_status imtd_validation_mse(const imtd_validation* v, double* phi1_deg2, double* phi2_deg2,
                                double* translation_mm2) {
  if (imtd_status s = require(v != nullptr, "validation_mse: null validation")) return s;
  if (phi1_deg2) *phi1_deg2 = v->mse.phi1;
  if (phi2_deg2) *phi2_deg2 = v->mse.phi2;
  if (translation_mm2) *translation_mm2 = v->mse.translation;
  return IMTD_OK;
}

double imtd_validation_applied_lag(const imtd_validation* v) {
  return v ? v->mse.applied_lag : 0.0;
}

size_t imtd_validation_dropped_samples(const imtd_validation* v) {
  return v ? v->mse.dropped_reference_samples : 0;
}

imtd_status imtd_validation_save_aligned_csv(const imtd_validation* v, const char* path) {
  if (imtd_status s = require(v && path, "validation_save_aligned_csv: null argument")) return s;
  return guarded([&] { imtd::save_aligned_csv(path, v->alignment); });
}

void imtd_validation_free(imtd_validation* v) { delete v; }

/* ---- workspace boundary ---- */

imtd_status imtd_workspace_boundary(const imtd_joint_series* joints, double cone_half_angle_deg,
                                    double* max_cone_angle_deg, int* violation,
                                    double* semi_major_deg, double* semi_minor_deg,
                                    int* ellipse_valid) {
  if (imtd_status s = require(joints != nullptr, "workspace_boundary: null series")) return s;
  return guarded([&] {
    const imtd::BoundarySummary b =
        imtd::workspace_boundary(joints->v, cone_half_angle_deg);
    if (max_cone_angle_deg) *max_cone_angle_deg = b.max_cone_angle;
    if (violation) *violation = b.cone_violation ? 1 : 0;
    if (ellipse_valid) *ellipse_valid = b.ellipse.has_value() ? 1 : 0;
    if (b.ellipse) {
      if (semi_major_deg) *semi_major_deg = b.ellipse->semi_major;
      if (semi_minor_deg) *semi_minor_deg = b.ellipse->semi_minor;
    }
  });
}

/* ---- session reports ---- */

imtd_status imtd_report_build(const imtd_metric_set* left, const imtd_metric_set* right,
                              const imtd_validation* validation, const imtd_calibration* cal,
                              const imtd_metric_config* cfg, imtd_convention convention,
                              imtd_report** out) {
  if (imtd_status s = require(cal && cfg && out, "report_build: null argument")) return s;
  if (imtd_status s = require(left || right, "report_build: need at least one metric set")) {
    return s;
  }
  return guarded([&] {
    std::optional<imtd::MetricSet> l;
    std::optional<imtd::MetricSet> r;
    if (const imtd::MetricSet* m = metrics_or_null(left)) l = *m;
    if (const imtd::MetricSet* m = metrics_or_null(right)) r = *m;
    std::optional<imtd::ChannelMse> mse;
    if (validation) mse = validation->mse;
    *out = new imtd_report{
        imtd::bimanual_report(l, r, mse, cfg->v, cal->v, to_convention(convention))};
  });
}

imtd_status imtd_report_save_json(const imtd_report* report, const char* path) {
  if (imtd_status s = require(report && path, "report_save_json: null argument")) return s;
  return guarded([&] { imtd::save_report_json(path, report->v); });
}

imtd_status imtd_report_save_metrics_csv(const imtd_report* report, const char* path) {
  if (imtd_status s = require(report && path, "report_save_metrics_csv: null argument")) return s;
  return guarded([&] { imtd::save_metrics_csv(path, report->v); });
}

imtd_status imtd_report_render(const imtd_report* report, char** out_text) {
  if (imtd_status s = require(report && out_text, "report_render: null argument")) return s;
  return guarded([&] {
    *out_text = dup_string(imtd::render_report_text(imtd::report_to_json(report->v)));
    if (!*out_text) imtd::fail(imtd::Errc::io, "report_render: allocation failed");
  });
}

imtd_status imtd_report_render_file(const char* json_path, char** out_text) {
  if (imtd_status s = require(json_path && out_text, "report_render_file: null argument")) {
    return s;
  }
  return guarded([&] {
    *out_text = dup_string(imtd::render_report_text(imtd::load_json_file(json_path)));
    if (!*out_text) imtd::fail(imtd::Errc::io, "report_render_file: allocation failed");
  });
}

void imtd_report_free(imtd_report* report) { delete report; }

void imtd_string_free(char* text) { std::free(text); }

}  // extern "C"
