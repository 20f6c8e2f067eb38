#pragma once

#include <json.hpp>
#include <string>

#include "core/evaluation.hpp"

namespace imtd {

// Calibration and metric configuration files are small JSON documents;
// missing keys fall back to the defaults.
nlohmann::json calibration_to_json(const Calibration& cal);
Calibration calibration_from_json(const nlohmann::json& j);
Calibration load_calibration(const std::string& path);

nlohmann::json metric_config_to_json(const MetricConfig& cfg);
MetricConfig metric_config_from_json(const nlohmann::json& j);
MetricConfig load_metric_config(const std::string& path);

/// Session report as a JSON tree:
///   session -> {left, right} -> three subcategory blocks,
///   plus validation.mse, relative differences, config echo and notes.
/// Values are rounded to the recorded precisions so serialization is stable.
nlohmann::json report_to_json(const SessionReport& report);

void save_report_json(const std::string& path, const SessionReport& report);

/// Companion flat CSV: one row per metric per hand (`hand,metric,value,unit`).
void save_metrics_csv(const std::string& path, const SessionReport& report);

/// Fixed-layout text rendering of a report document for terminal display.
std::string render_report_text(const nlohmann::json& report);

nlohmann::json load_json_file(const std::string& path);

const char* convention_name(AngleConvention c);
AngleConvention convention_from_name(const std::string& name);
const char* jerk_mode_name(JerkMode m);
JerkMode jerk_mode_from_name(const std::string& name);

}  // namespace imtd
