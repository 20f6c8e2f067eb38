// Command-line front end for the imtd toolkit. Talks to the core exclusively
// through the C API in imtd/imtd.h.

#include <CLI11.hpp>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>

#include "imtd/imtd.h"

namespace {

namespace fs = std::filesystem;

// Exit codes: 0 success, 2 parse, 3 alignment, 4 metric, 5 io, 6 bad arguments,
// 1 anything else.
int exit_code_for(imtd_status status) {
  switch (status) {
    case IMTD_OK: return 0;
    case IMTD_ERR_PARSE: return 2;
    case IMTD_ERR_ALIGNMENT: return 3;
    case IMTD_ERR_METRIC:
    case IMTD_ERR_INSUFFICIENT_DATA:
    case IMTD_ERR_DEGENERATE: return 4;
    case IMTD_ERR_IO: return 5;
    case IMTD_ERR_INVALID_ARGUMENT: return 6;
    default: return 1;
  }
}

struct CliError {
  imtd_status status;
};

void check(imtd_status status) {
  if (status != IMTD_OK) {
    std::fprintf(stderr, "error: %s\n", imtd_last_error());
    throw CliError{status};
  }
}

using CalPtr = std::unique_ptr<imtd_calibration, decltype(&imtd_calibration_free)>;
using CfgPtr = std::unique_ptr<imtd_metric_config, decltype(&imtd_metric_config_free)>;
using JointsPtr = std::unique_ptr<imtd_joint_series, decltype(&imtd_joint_series_free)>;
using FramesPtr = std::unique_ptr<imtd_frame_series, decltype(&imtd_frame_series_free)>;
using MetricsPtr = std::unique_ptr<imtd_metric_set, decltype(&imtd_metric_set_free)>;
using ValidationPtr = std::unique_ptr<imtd_validation, decltype(&imtd_validation_free)>;
using ReportPtr = std::unique_ptr<imtd_report, decltype(&imtd_report_free)>;

CalPtr load_calibration_or_default(const std::string& path) {
  if (path.empty()) return {imtd_calibration_default(), &imtd_calibration_free};
  imtd_calibration* cal = nullptr;
  check(imtd_calibration_load(path.c_str(), &cal));
  return {cal, &imtd_calibration_free};
}

CfgPtr load_metric_config_or_default(const std::string& path, const std::string& jerk_mode) {
  CfgPtr cfg{nullptr, &imtd_metric_config_free};
  if (path.empty()) {
    cfg.reset(imtd_metric_config_default());
  } else {
    imtd_metric_config* raw = nullptr;
    check(imtd_metric_config_load(path.c_str(), &raw));
    cfg.reset(raw);
  }
  if (!jerk_mode.empty()) {
    check(imtd_metric_config_set_jerk_mode(
        cfg.get(), jerk_mode == "norm-derivative" ? IMTD_JERK_NORM_DERIVATIVE : IMTD_JERK_VECTOR));
  }
  return cfg;
}

void require_out_dir(const std::string& out_dir) {
  if (!fs::is_directory(out_dir)) {
    std::fprintf(stderr, "error: output directory does not exist: %s\n", out_dir.c_str());
    throw CliError{IMTD_ERR_IO};
  }
}

struct CommonFlags {
  std::string calibration;
  std::string metric_config;
  std::string out_dir = ".";
  std::string convention = "reconciled";
  std::string jerk_mode;
};

imtd_convention convention_of(const CommonFlags& common) {
  return common.convention == "paper" ? IMTD_CONVENTION_PAPER : IMTD_CONVENTION_RECONCILED;
}

int cmd_simulate(const CommonFlags& common, const std::string& profile, const std::string& hand,
                 double duration, double rate, std::uint64_t seed, double cone_half_angle,
                 double d_min, double d_max, double ellipse_ratio, double angle_noise,
                 double translation_noise, const std::string& prefix) {
  require_out_dir(common.out_dir);
  const CalPtr cal = load_calibration_or_default(common.calibration);
  const imtd_hand h = hand == "right" ? IMTD_HAND_RIGHT : IMTD_HAND_LEFT;

  imtd_joint_series* joints_raw = nullptr;
  if (profile == "cone-scan") {
    check(imtd_simulate_cone_scan(cone_half_angle, d_min, d_max, duration, rate, h, ellipse_ratio,
                                  &joints_raw));
  } else {
    check(imtd_simulate_peg_transfer(duration, rate, h, seed, &joints_raw));
  }
  const JointsPtr joints{joints_raw, &imtd_joint_series_free};

  imtd_frame_series* frames_raw = nullptr;
  check(imtd_encode(joints.get(), cal.get(), angle_noise, translation_noise, seed, &frames_raw));
  const FramesPtr frames{frames_raw, &imtd_frame_series_free};

  const std::string stem = prefix.empty() ? profile + "_" + hand : prefix;
  const std::string raw_path = (fs::path(common.out_dir) / (stem + "_raw.csv")).string();
  const std::string truth_path = (fs::path(common.out_dir) / (stem + "_truth.csv")).string();
  check(imtd_frame_series_save_csv(frames.get(), raw_path.c_str()));
  check(imtd_joint_series_save_csv(joints.get(), truth_path.c_str()));

  double first_d = 0.0;
  check(imtd_joint_series_at(joints.get(), 0, nullptr, nullptr, nullptr, nullptr, nullptr,
                             &first_d));
  std::printf("profile: %s (%s hand)\n", profile.c_str(), hand.c_str());
  std::printf("samples: %zu at %.1f Hz\n", imtd_joint_series_size(joints.get()), rate);
  std::printf("max cone angle: %.4f deg\n", imtd_joint_series_max_cone_angle(joints.get()));
  std::printf("initial depth: %.3f mm\n", first_d);
  std::printf("seed: %llu\n", static_cast<unsigned long long>(seed));
  if (imtd_frame_series_saturated_count(frames.get()) > 0) {
    std::printf("saturated samples: %zu\n", imtd_frame_series_saturated_count(frames.get()));
  }
  std::printf("wrote %s\n", raw_path.c_str());
  std::printf("wrote %s\n", truth_path.c_str());
  return 0;
}

int cmd_decode(const CommonFlags& common, const std::string& input, double initial_depth,
               const std::string& output) {
  const CalPtr cal = load_calibration_or_default(common.calibration);
  imtd_frame_series* frames_raw = nullptr;
  check(imtd_frame_series_load_csv(input.c_str(), &frames_raw));
  const FramesPtr frames{frames_raw, &imtd_frame_series_free};

  imtd_joint_series* joints_raw = nullptr;
  check(imtd_decode(frames.get(), cal.get(), initial_depth, &joints_raw));
  const JointsPtr joints{joints_raw, &imtd_joint_series_free};
  check(imtd_joint_series_save_csv(joints.get(), output.c_str()));
  std::printf("decoded %zu frames -> %s\n", imtd_frame_series_size(frames.get()), output.c_str());
  return 0;
}

int cmd_validate(const CommonFlags& common, const std::string& device_path,
                 const std::string& reference_path, const std::string& device_triad,
                 const std::string& reference_triad, double grid_rate, bool no_lag_correction,
                 double initial_depth) {
  require_out_dir(common.out_dir);
  const CalPtr cal = load_calibration_or_default(common.calibration);

  imtd_joint_series* device_raw = nullptr;
  check(imtd_load_stream_auto(device_path.c_str(), cal.get(), initial_depth, &device_raw));
  const JointsPtr device{device_raw, &imtd_joint_series_free};

  imtd_validation* validation_raw = nullptr;
  check(imtd_validate(device.get(), reference_path.c_str(),
                      device_triad.empty() ? nullptr : device_triad.c_str(),
                      reference_triad.empty() ? nullptr : reference_triad.c_str(), grid_rate,
                      no_lag_correction ? 0 : 1, convention_of(common), &validation_raw));
  const ValidationPtr validation{validation_raw, &imtd_validation_free};

  double phi1 = 0.0;
  double phi2 = 0.0;
  double translation = 0.0;
  check(imtd_validation_mse(validation.get(), &phi1, &phi2, &translation));
  std::printf("channel        mse\n");
  std::printf("phi1     %12.6f deg^2\n", phi1);
  std::printf("phi2     %12.6f deg^2\n", phi2);
  std::printf("trans    %12.6f mm^2\n", translation);
  std::printf("applied lag: %.6f s\n", imtd_validation_applied_lag(validation.get()));
  std::printf("dropped reference samples: %zu\n",
              imtd_validation_dropped_samples(validation.get()));

  const std::string aligned_path = (fs::path(common.out_dir) / "aligned.csv").string();
  check(imtd_validation_save_aligned_csv(validation.get(), aligned_path.c_str()));
  std::printf("wrote %s\n", aligned_path.c_str());
  return 0;
}

int cmd_evaluate(const CommonFlags& common, const std::string& left_path,
                 const std::string& right_path, const std::string& reference_path,
                 const std::string& device_triad, const std::string& reference_triad,
                 double grid_rate, bool no_lag_correction, double initial_depth) {
  require_out_dir(common.out_dir);
  const CalPtr cal = load_calibration_or_default(common.calibration);
  const CfgPtr cfg = load_metric_config_or_default(common.metric_config, common.jerk_mode);

  JointsPtr left{nullptr, &imtd_joint_series_free};
  JointsPtr right{nullptr, &imtd_joint_series_free};
  MetricsPtr left_metrics{nullptr, &imtd_metric_set_free};
  MetricsPtr right_metrics{nullptr, &imtd_metric_set_free};

  if (!left_path.empty()) {
    imtd_joint_series* raw = nullptr;
    check(imtd_load_stream_auto(left_path.c_str(), cal.get(), initial_depth, &raw));
    left.reset(raw);
    imtd_metric_set* m = nullptr;
    check(imtd_metrics_compute(left.get(), cfg.get(), &m));
    left_metrics.reset(m);
  }
  if (!right_path.empty()) {
    imtd_joint_series* raw = nullptr;
    check(imtd_load_stream_auto(right_path.c_str(), cal.get(), initial_depth, &raw));
    right.reset(raw);
    imtd_metric_set* m = nullptr;
    check(imtd_metrics_compute(right.get(), cfg.get(), &m));
    right_metrics.reset(m);
  }

  ValidationPtr validation{nullptr, &imtd_validation_free};
  if (!reference_path.empty()) {
    const imtd_joint_series* device = left ? left.get() : right.get();
    imtd_validation* raw = nullptr;
    check(imtd_validate(device, reference_path.c_str(),
                        device_triad.empty() ? nullptr : device_triad.c_str(),
                        reference_triad.empty() ? nullptr : reference_triad.c_str(), grid_rate,
                        no_lag_correction ? 0 : 1, convention_of(common), &raw));
    validation.reset(raw);
  }

  imtd_report* report_raw = nullptr;
  check(imtd_report_build(left_metrics.get(), right_metrics.get(), validation.get(), cal.get(),
                          cfg.get(), convention_of(common), &report_raw));
  const ReportPtr report{report_raw, &imtd_report_free};

  const std::string report_path = (fs::path(common.out_dir) / "report.json").string();
  const std::string metrics_path = (fs::path(common.out_dir) / "metrics.csv").string();
  check(imtd_report_save_json(report.get(), report_path.c_str()));
  check(imtd_report_save_metrics_csv(report.get(), metrics_path.c_str()));

  char* text = nullptr;
  check(imtd_report_render(report.get(), &text));
  std::fputs(text, stdout);
  imtd_string_free(text);
  std::printf("wrote %s\n", report_path.c_str());
  std::printf("wrote %s\n", metrics_path.c_str());
  return 0;
}

int cmd_report(const std::string& input, const std::string& output) {
  char* text = nullptr;
  check(imtd_report_render_file(input.c_str(), &text));
  if (output.empty()) {
    std::fputs(text, stdout);
  } else {
    std::FILE* f = std::fopen(output.c_str(), "w");
    if (!f) {
      imtd_string_free(text);
      std::fprintf(stderr, "error: cannot open for writing: %s\n", output.c_str());
      throw CliError{IMTD_ERR_IO};
    }
    std::fputs(text, f);
    std::fclose(f);
    std::printf("wrote %s\n", output.c_str());
  }
  imtd_string_free(text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"4-DoF laparoscopic motion tracking toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // common flags may follow the subcommand

  CommonFlags common;
  app.add_option("--calibration", common.calibration, "Calibration JSON file")
      ->check(CLI::ExistingFile);
  app.add_option("--metric-config", common.metric_config, "Metric configuration JSON file")
      ->check(CLI::ExistingFile);
  app.add_option("--out", common.out_dir, "Output directory (default .)");
  app.add_option("--convention", common.convention, "Angle extraction convention")
      ->check(CLI::IsMember({"paper", "reconciled"}));
  app.add_option("--jerk-mode", common.jerk_mode, "Jerk integrand")
      ->check(CLI::IsMember({"vector", "norm-derivative"}));

  // simulate
  std::string profile = "cone-scan";
  std::string hand = "left";
  double duration = 10.0;
  double rate = 100.0;
  std::uint64_t seed = 0;
  double cone_half_angle = 13.0;
  double d_min = 40.0;
  double d_max = 100.0;
  double ellipse_ratio = 1.0;
  double angle_noise = 0.0;
  double translation_noise = 0.0;
  std::string prefix;
  CLI::App* simulate = app.add_subcommand("simulate", "Generate a synthetic session");
  simulate->add_option("--profile", profile, "Trajectory profile")
      ->check(CLI::IsMember({"cone-scan", "peg-transfer"}));
  simulate->add_option("--hand", hand, "Hand")->check(CLI::IsMember({"left", "right"}));
  simulate->add_option("--duration", duration, "Duration in seconds");
  simulate->add_option("--rate", rate, "Sample rate in Hz");
  simulate->add_option("--seed", seed, "Random seed");
  simulate->add_option("--cone-half-angle", cone_half_angle, "Cone half angle in degrees");
  simulate->add_option("--d-min", d_min, "Minimum insertion depth (mm, cone scan)");
  simulate->add_option("--d-max", d_max, "Maximum insertion depth (mm, cone scan)");
  simulate->add_option("--ellipse-ratio", ellipse_ratio, "Boundary ellipse axis ratio");
  simulate->add_option("--noise-angle-sd", angle_noise, "Gaussian angle noise sd (deg)");
  simulate->add_option("--noise-translation-sd", translation_noise,
                       "Gaussian translation noise sd (mm)");
  simulate->add_option("--prefix", prefix, "Output file stem (default <profile>_<hand>)");

  // decode
  std::string decode_input;
  std::string decode_output = "joints.csv";
  double initial_depth = 0.0;
  CLI::App* decode = app.add_subcommand("decode", "Decode a raw count stream to joint states");
  decode->add_option("--input", decode_input, "Raw stream CSV")->required()
      ->check(CLI::ExistingFile);
  decode->add_option("--output", decode_output, "Decoded joints CSV path");
  decode->add_option("--initial-depth", initial_depth,
                     "Insertion depth at the first frame (mm)");

  // validate
  std::string device_path;
  std::string reference_path;
  std::string device_triad;
  std::string reference_triad;
  double grid_rate = 100.0;
  bool no_lag_correction = false;
  CLI::App* validate = app.add_subcommand("validate", "Compare a device stream to a reference");
  validate->add_option("--device", device_path, "Device stream CSV (raw or joints)")
      ->required()->check(CLI::ExistingFile);
  validate->add_option("--reference", reference_path, "Reference marker CSV")
      ->required()->check(CLI::ExistingFile);
  validate->add_option("--triad-device", device_triad, "Device static triad file")
      ->check(CLI::ExistingFile);
  validate->add_option("--triad-reference", reference_triad, "Reference static triad file")
      ->check(CLI::ExistingFile);
  validate->add_option("--grid-rate", grid_rate, "Common resampling grid rate (Hz)");
  validate->add_flag("--no-lag-correction", no_lag_correction, "Disable clock-skew search");
  validate->add_option("--initial-depth", initial_depth,
                       "Insertion depth at the first raw frame (mm)");

  // evaluate
  std::string left_path;
  std::string right_path;
  CLI::App* evaluate = app.add_subcommand("evaluate", "Compute metrics and a session report");
  evaluate->add_option("--left", left_path, "Left-hand stream CSV (raw or joints)")
      ->check(CLI::ExistingFile);
  evaluate->add_option("--right", right_path, "Right-hand stream CSV (raw or joints)")
      ->check(CLI::ExistingFile);
  evaluate->add_option("--reference", reference_path, "Reference marker CSV for an MSE block")
      ->check(CLI::ExistingFile);
  evaluate->add_option("--triad-device", device_triad, "Device static triad file")
      ->check(CLI::ExistingFile);
  evaluate->add_option("--triad-reference", reference_triad, "Reference static triad file")
      ->check(CLI::ExistingFile);
  evaluate->add_option("--grid-rate", grid_rate, "Common resampling grid rate (Hz)");
  evaluate->add_flag("--no-lag-correction", no_lag_correction, "Disable clock-skew search");
  evaluate->add_option("--initial-depth", initial_depth,
                       "Insertion depth at the first raw frame (mm)");

  // report
  std::string report_input;
  std::string report_output;
  CLI::App* report = app.add_subcommand("report", "Render a report JSON as text");
  report->add_option("--input", report_input, "Report JSON file")->required()
      ->check(CLI::ExistingFile);
  report->add_option("--output", report_output, "Write the rendering here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      return cmd_simulate(common, profile, hand, duration, rate, seed, cone_half_angle, d_min,
                          d_max, ellipse_ratio, angle_noise, translation_noise, prefix);
    }
    if (decode->parsed()) {
      return cmd_decode(common, decode_input, initial_depth, decode_output);
    }
    if (validate->parsed()) {
      return cmd_validate(common, device_path, reference_path, device_triad, reference_triad,
                          grid_rate, no_lag_correction, initial_depth);
    }
    if (evaluate->parsed()) {
      if (left_path.empty() && right_path.empty()) {
        std::fprintf(stderr, "error: evaluate needs --left and/or --right\n");
        return 6;
      }
      return cmd_evaluate(common, left_path, right_path, reference_path, device_triad,
                          reference_triad, grid_rate, no_lag_correction, initial_depth);
    }
    if (report->parsed()) {
      return cmd_report(report_input, report_output);
    }
  } catch (const CliError& e) {
    return exit_code_for(e.status);
  }
  return 0;
}
