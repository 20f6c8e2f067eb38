#include "core/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "core/csv_io.hpp"

namespace imtd {

namespace {

using nlohmann::json;

// Recorded output precisions (decimal places).
constexpr int kTimeDp = 4;
constexpr int kAngleDp = 4;
constexpr int kLengthDp = 3;
constexpr int kFluidityDp = 8;
constexpr int kRelDiffDp = 6;

double round_to(double v, int dp) {
  const double scale = std::pow(10.0, dp);
  return std::round(v * scale) / scale;
}

json opt_number(const std::optional<double>& v, int dp) {
  if (!v) return nullptr;
  return round_to(*v, dp);
}

json hand_to_json(const SubcategoryView& v) {
  json j;
  j["execution_rapidity"] = {{"time_total_s", round_to(v.execution_rapidity.time_total, kTimeDp)},
                             {"idle_pct", round_to(v.execution_rapidity.idle_pct, kTimeDp)}};
  j["gesture_control"] = {{"avg_accel_mm_s2", round_to(v.gesture_control.avg_accel, kAngleDp)},
                          {"fluidity", opt_number(v.gesture_control.fluidity, kFluidityDp)},
                          {"jerk_mm_s3", round_to(v.gesture_control.jerk, kAngleDp)},
                          {"avg_speed_mm_s", round_to(v.gesture_control.avg_speed, kLengthDp)}};
  j["navigation_3d"] = {{"path_length_mm", round_to(v.navigation_3d.path_length, kLengthDp)},
                        {"depth_workspace_mm", round_to(v.navigation_3d.depth_workspace, kLengthDp)},
                        {"volume_mm3", opt_number(v.navigation_3d.volume, kLengthDp)}};
  j["notes"] = v.notes;
  return j;
}

struct MetricRow {
  const char* key;
  const char* unit;
};

constexpr MetricRow kMetricRows[] = {
    {"time_total", "s"},         {"idle_pct", "%"},        {"path_length", "mm"},
    {"depth_workspace", "mm"},   {"avg_speed", "mm/s"},    {"avg_accel", "mm/s^2"},
    {"jerk", "mm/s^3"},          {"fluidity", "s^3/mm"},   {"volume", "mm^3"},
};

std::optional<double> metric_value(const SubcategoryView& v, const std::string& key) {
  if (key == "time_total") return v.execution_rapidity.time_total;
  if (key == "idle_pct") return v.execution_rapidity.idle_pct;
  if (key == "path_length") return v.navigation_3d.path_length;
  if (key == "depth_workspace") return v.navigation_3d.depth_workspace;
  if (key == "avg_speed") return v.gesture_control.avg_speed;
  if (key == "avg_accel") return v.gesture_control.avg_accel;
  if (key == "jerk") return v.gesture_control.jerk;
  if (key == "fluidity") return v.gesture_control.fluidity;
  if (key == "volume") return v.navigation_3d.volume;
  return std::nullopt;
}

int metric_dp(const std::string& key) {
  if (key == "fluidity") return kFluidityDp;
  if (key == "avg_accel" || key == "jerk" || key == "idle_pct" || key == "time_total") {
    return kAngleDp;
  }
  return kLengthDp;
}

}  // namespace

const char* convention_name(AngleConvention c) {
  return c == AngleConvention::paper_literal ? "paper" : "reconciled";
}

AngleConvention convention_from_name(const std::string& name) {
  if (name == "paper") return AngleConvention::paper_literal;
  if (name == "reconciled") return AngleConvention::sign_reconciled;
  fail(Errc::invalid_argument, "unknown convention: " + name);
}

const char* jerk_mode_name(JerkMode m) {
  return m == JerkMode::vector_derivative ? "vector" : "norm-derivative";
}

JerkMode jerk_mode_from_name(const std::string& name) {
  if (name == "vector") return JerkMode::vector_derivative;
  if (name == "norm-derivative") return JerkMode::norm_derivative;
  fail(Errc::invalid_argument, "unknown jerk mode: " + name);
}

json calibration_to_json(const Calibration& cal) {
  return {{"zero_offsets",
           {{"c1", cal.zero_offsets.c1},
            {"c2", cal.zero_offsets.c2},
            {"ct", cal.zero_offsets.ct},
            {"c3", cal.zero_offsets.c3}}},
          {"roller_radius_mm", cal.roller_radius},
          {"sample_rate_hz", cal.sample_rate},
          {"cone_half_angle_deg", cal.cone_half_angle}};
}

Calibration calibration_from_json(const json& j) {
  Calibration cal;
  try {
    if (j.contains("zero_offsets")) {
      const json& z = j.at("zero_offsets");
      cal.zero_offsets.c1 = z.value("c1", cal.zero_offsets.c1);
      cal.zero_offsets.c2 = z.value("c2", cal.zero_offsets.c2);
      cal.zero_offsets.ct = z.value("ct", cal.zero_offsets.ct);
      cal.zero_offsets.c3 = z.value("c3", cal.zero_offsets.c3);
    }
    cal.roller_radius = j.value("roller_radius_mm", cal.roller_radius);
    cal.sample_rate = j.value("sample_rate_hz", cal.sample_rate);
    cal.cone_half_angle = j.value("cone_half_angle_deg", cal.cone_half_angle);
  } catch (const json::exception& e) {
    fail(Errc::parse, std::string("calibration json: ") + e.what());
  }
  cal.validate();
  return cal;
}

Calibration load_calibration(const std::string& path) {
  return calibration_from_json(load_json_file(path));
}

json metric_config_to_json(const MetricConfig& cfg) {
  return {{"idle_speed_threshold_mm_s", cfg.idle_speed_threshold},
          {"idle_min_duration_s", cfg.idle_min_duration},
          {"smoothing_window", cfg.smoothing_window},
          {"jerk_epsilon_mm_s3", cfg.jerk_epsilon},
          {"frustum_band_fraction", cfg.frustum_band_fraction},
          {"frustum_radius_percentile", cfg.frustum_radius_percentile},
          {"jerk_mode", jerk_mode_name(cfg.jerk_mode)}};
}

MetricConfig metric_config_from_json(const json& j) {
  MetricConfig cfg;
  try {
    cfg.idle_speed_threshold = j.value("idle_speed_threshold_mm_s", cfg.idle_speed_threshold);
    cfg.idle_min_duration = j.value("idle_min_duration_s", cfg.idle_min_duration);
    cfg.smoothing_window = j.value("smoothing_window", cfg.smoothing_window);
    cfg.jerk_epsilon = j.value("jerk_epsilon_mm_s3", cfg.jerk_epsilon);
    cfg.frustum_band_fraction = j.value("frustum_band_fraction", cfg.frustum_band_fraction);
    cfg.frustum_radius_percentile =
        j.value("frustum_radius_percentile", cfg.frustum_radius_percentile);
    if (j.contains("jerk_mode")) cfg.jerk_mode = jerk_mode_from_name(j.at("jerk_mode"));
  } catch (const json::exception& e) {
    fail(Errc::parse, std::string("metric config json: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

MetricConfig load_metric_config(const std::string& path) {
  return metric_config_from_json(load_json_file(path));
}

json report_to_json(const SessionReport& report) {
  json session;
  session["left"] = report.left ? hand_to_json(*report.left) : json(nullptr);
  session["right"] = report.right ? hand_to_json(*report.right) : json(nullptr);
  if (report.left && report.right) {
    json rel = json::object();
    for (const auto& [key, value] : report.relative_difference) {
      rel[key] = opt_number(value, kRelDiffDp);
    }
    session["relative_difference"] = rel;
  }

  json validation(nullptr);
  if (report.validation) {
    validation = {{"mse",
                   {{"phi1_deg2", round_to(report.validation->phi1, 6)},
                    {"phi2_deg2", round_to(report.validation->phi2, 6)},
                    {"translation_mm2", round_to(report.validation->translation, 6)}}},
                  {"applied_lag_s", round_to(report.validation->applied_lag, 6)},
                  {"dropped_reference_samples", report.validation->dropped_reference_samples}};
  }

  json config = {{"calibration", calibration_to_json(report.calibration)},
                 {"metric_config", metric_config_to_json(report.metric_config)},
                 {"convention", convention_name(report.convention)},
                 {"precision",
                  {{"times_dp", kTimeDp},
                   {"angles_dp", kAngleDp},
                   {"lengths_dp", kLengthDp},
                   {"fluidity_dp", kFluidityDp}}}};

  return {{"session", session}, {"validation", validation}, {"config", config},
          {"notes", report.notes}};
}

void save_report_json(const std::string& path, const SessionReport& report) {
  std::ofstream out(path);
  if (!out) fail(Errc::io, "cannot open for writing: " + path);
  out << report_to_json(report).dump(2) << '\n';
  if (!out) fail(Errc::io, "write failed: " + path);
}

void save_metrics_csv(const std::string& path, const SessionReport& report) {
  std::ofstream out(path);
  if (!out) fail(Errc::io, "cannot open for writing: " + path);
  out << "hand,metric,value,unit\n";
  auto emit = [&](const char* hand, const SubcategoryView& v) {
    for (const MetricRow& row : kMetricRows) {
      const std::optional<double> value = metric_value(v, row.key);
      out << hand << ',' << row.key << ',';
      if (value) out << format_fixed(*value, metric_dp(row.key));
      out << ',' << row.unit << '\n';
    }
  };
  if (report.left) emit("left", *report.left);
  if (report.right) emit("right", *report.right);
  if (!out) fail(Errc::io, "write failed: " + path);
}

std::string render_report_text(const json& report) {
  std::string out;
  char buf[160];
  auto line = [&](const char* fmt, auto... args) {
    std::snprintf(buf, sizeof(buf), fmt, args...);
    out += buf;
    out += '\n';
  };

  auto cell = [](const json& hand, const char* group, const char* key) -> std::string {
    if (hand.is_null()) return "-";
    const json& v = hand.at(group).at(key);
    if (v.is_null()) return "undefined";
    char num[48];
    std::snprintf(num, sizeof(num), "%.4f", v.get<double>());
    return num;
  };

  const json& session = report.at("session");
  const json& left = session.at("left");
  const json& right = session.at("right");

  line("%-28s %14s %14s", "metric", "left", "right");
  struct Row {
    const char* label;
    const char* group;
    const char* key;
  };
  const Row rows[] = {
      {"-- execution rapidity --", nullptr, nullptr},
      {"time_total (s)", "execution_rapidity", "time_total_s"},
      {"idle (%)", "execution_rapidity", "idle_pct"},
      {"-- gesture control --", nullptr, nullptr},
      {"avg_accel (mm/s^2)", "gesture_control", "avg_accel_mm_s2"},
      {"fluidity (s^3/mm)", "gesture_control", "fluidity"},
      {"jerk (mm/s^3)", "gesture_control", "jerk_mm_s3"},
      {"avg_speed (mm/s)", "gesture_control", "avg_speed_mm_s"},
      {"-- 3d navigation --", nullptr, nullptr},
      {"path_length (mm)", "navigation_3d", "path_length_mm"},
      {"depth_workspace (mm)", "navigation_3d", "depth_workspace_mm"},
      {"volume (mm^3)", "navigation_3d", "volume_mm3"},
  };
  for (const Row& r : rows) {
    if (!r.group) {
      line("%s", r.label);
    } else {
      line("  %-26s %14s %14s", r.label, cell(left, r.group, r.key).c_str(),
           cell(right, r.group, r.key).c_str());
    }
  }

  const json& validation = report.at("validation");
  if (!validation.is_null()) {
    line("%s", "-- validation (mse vs reference) --");
    line("  %-26s %14.6f", "phi1 (deg^2)", validation.at("mse").at("phi1_deg2").get<double>());
    line("  %-26s %14.6f", "phi2 (deg^2)", validation.at("mse").at("phi2_deg2").get<double>());
    line("  %-26s %14.6f", "translation (mm^2)",
         validation.at("mse").at("translation_mm2").get<double>());
    line("  %-26s %14.6f", "applied lag (s)", validation.at("applied_lag_s").get<double>());
  }

  if (report.contains("notes")) {
    for (const auto& note : report.at("notes")) {
      out += "note: " + note.get<std::string>() + '\n';
    }
  }
  return out;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open for reading: " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(Errc::parse, path + ": " + e.what());
  }
}

}  // namespace imtd
