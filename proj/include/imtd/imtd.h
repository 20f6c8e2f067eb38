/*
 * imtd - integrated motion tracking device toolkit.
 *
 * C interface to the tracking core: encoder stream decoding, forward
 * kinematics, trajectory metrics, reference validation and session reports.
 * All handles are opaque; every fallible call returns an imtd_status and
 * leaves a human-readable message in imtd_last_error() on failure.
 *
 * Units at this boundary: angles in degrees, lengths in mm, time in seconds.
 */

#ifndef IMTD_H
#define IMTD_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum imtd_status {
  IMTD_OK = 0,
  IMTD_ERR_INVALID_ARGUMENT = 1,
  IMTD_ERR_PARSE = 2,
  IMTD_ERR_ALIGNMENT = 3,
  IMTD_ERR_METRIC = 4,
  IMTD_ERR_IO = 5,
  IMTD_ERR_RANGE = 6,
  IMTD_ERR_INSUFFICIENT_DATA = 7,
  IMTD_ERR_DEGENERATE = 8,
  IMTD_ERR_NOT_STATIC = 9,
  IMTD_ERR_ORDERING = 10,
  IMTD_ERR_SATURATION = 11,
  IMTD_ERR_UNKNOWN = 127
} imtd_status;

/* Message for the most recent failure on this thread. */
const char* imtd_last_error(void);

typedef struct imtd_calibration imtd_calibration;
typedef struct imtd_metric_config imtd_metric_config;
typedef struct imtd_joint_series imtd_joint_series;
typedef struct imtd_frame_series imtd_frame_series;
typedef struct imtd_metric_set imtd_metric_set;
typedef struct imtd_validation imtd_validation;
typedef struct imtd_report imtd_report;

typedef enum imtd_convention {
  IMTD_CONVENTION_RECONCILED = 0, /* exact inverse of the forward model */
  IMTD_CONVENTION_PAPER = 1       /* literal atan2 extraction */
} imtd_convention;

typedef enum imtd_jerk_mode {
  IMTD_JERK_VECTOR = 0,          /* norm of the third position derivative */
  IMTD_JERK_NORM_DERIVATIVE = 1  /* third derivative of the tip distance */
} imtd_jerk_mode;

typedef enum imtd_hand { IMTD_HAND_LEFT = 0, IMTD_HAND_RIGHT = 1 } imtd_hand;

typedef enum imtd_metric {
  IMTD_METRIC_TIME_TOTAL = 0,
  IMTD_METRIC_IDLE_PCT = 1,
  IMTD_METRIC_PATH_LENGTH = 2,
  IMTD_METRIC_DEPTH_WORKSPACE = 3,
  IMTD_METRIC_AVG_SPEED = 4,
  IMTD_METRIC_AVG_ACCEL = 5,
  IMTD_METRIC_JERK = 6,
  IMTD_METRIC_FLUIDITY = 7,
  IMTD_METRIC_VOLUME = 8
} imtd_metric;

/* ---- calibration and metric configuration ---- */

imtd_calibration* imtd_calibration_default(void);
imtd_status imtd_calibration_load(const char* path, imtd_calibration** out);
imtd_status imtd_calibration_save(const imtd_calibration* cal, const char* path);
void imtd_calibration_free(imtd_calibration* cal);
double imtd_calibration_cone_half_angle(const imtd_calibration* cal);
double imtd_calibration_sample_rate(const imtd_calibration* cal);

imtd_metric_config* imtd_metric_config_default(void);
imtd_status imtd_metric_config_load(const char* path, imtd_metric_config** out);
imtd_status imtd_metric_config_set_jerk_mode(imtd_metric_config* cfg, imtd_jerk_mode mode);
void imtd_metric_config_free(imtd_metric_config* cfg);

/* ---- kinematics ---- */

/* Tip position for one joint state (self-rotation does not affect it). */
imtd_status imtd_forward_kinematics(double phi1_deg, double phi2_deg, double d_mm,
                                    double out_xyz[3]);

/* ---- simulation ---- */

imtd_status imtd_simulate_cone_scan(double cone_half_angle_deg, double d_min_mm, double d_max_mm,
                                    double duration_s, double rate_hz, imtd_hand hand,
                                    double ellipse_ratio, imtd_joint_series** out);

imtd_status imtd_simulate_peg_transfer(double duration_s, double rate_hz, imtd_hand hand,
                                       uint64_t seed, imtd_joint_series** out);

/* Gaussian joint noise followed by nearest-count encoding. */
imtd_status imtd_encode(const imtd_joint_series* joints, const imtd_calibration* cal,
                        double angle_noise_sd_deg, double translation_noise_sd_mm, uint64_t seed,
                        imtd_frame_series** out);

/* ---- streams ---- */

imtd_status imtd_joint_series_load_csv(const char* path, imtd_joint_series** out);
imtd_status imtd_joint_series_save_csv(const imtd_joint_series* joints, const char* path);
size_t imtd_joint_series_size(const imtd_joint_series* joints);
/* phi3_defined receives 0 when the self-rotation is undefined for that sample
 * (phi3_deg is then left untouched). Output pointers may be NULL. */
imtd_status imtd_joint_series_at(const imtd_joint_series* joints, size_t index, double* t_s,
                                 double* phi1_deg, double* phi2_deg, double* phi3_deg,
                                 int* phi3_defined, double* d_mm);
double imtd_joint_series_max_cone_angle(const imtd_joint_series* joints);
void imtd_joint_series_free(imtd_joint_series* joints);

imtd_status imtd_frame_series_load_csv(const char* path, imtd_frame_series** out);
imtd_status imtd_frame_series_save_csv(const imtd_frame_series* frames, const char* path);
size_t imtd_frame_series_size(const imtd_frame_series* frames);
/* Samples clamped into range while encoding (noise pushed them outside). */
size_t imtd_frame_series_saturated_count(const imtd_frame_series* frames);
void imtd_frame_series_free(imtd_frame_series* frames);

/* Decode a raw stream into joint states. initial_depth_mm seeds the roller
 * unwrap accumulator: pass the insertion depth at the first frame when the
 * stream does not begin within half a roller turn of the mechanical zero. */
imtd_status imtd_decode(const imtd_frame_series* frames, const imtd_calibration* cal,
                        double initial_depth_mm, imtd_joint_series** out);

/* Load a stream CSV of either kind; raw count streams are decoded with the
 * supplied calibration (required for raw input, may be NULL for joints). */
imtd_status imtd_load_stream_auto(const char* path, const imtd_calibration* cal,
                                  double initial_depth_mm, imtd_joint_series** out);

/* ---- metrics ---- */

imtd_status imtd_metrics_compute(const imtd_joint_series* joints, const imtd_metric_config* cfg,
                                 imtd_metric_set** out);
/* defined receives 0 for an undefined fluidity/volume; value is untouched. */
imtd_status imtd_metric_set_value(const imtd_metric_set* metrics, imtd_metric metric,
                                  double* value, int* defined);
void imtd_metric_set_free(imtd_metric_set* metrics);

/* ---- reference validation ---- */

/* Compare a device joint stream against a marker stream. Triad files carry
 * the static frames used for reference-to-device alignment; pass NULL for
 * either to use the identity frame. lag_correction enables the +/-0.5 s
 * cross-correlation clock-skew search. */
imtd_status imtd_validate(const imtd_joint_series* device, const char* marker_csv_path,
                          const char* device_triad_path, const char* reference_triad_path,
                          double grid_rate_hz, int lag_correction, imtd_convention convention,
                          imtd_validation** out);
imtd_status imtd_validation_mse(const imtd_validation* v, double* phi1_deg2, double* phi2_deg2,
                                double* translation_mm2);
double imtd_validation_applied_lag(const imtd_validation* v);
size_t imtd_validation_dropped_samples(const imtd_validation* v);
imtd_status imtd_validation_save_aligned_csv(const imtd_validation* v, const char* path);
void imtd_validation_free(imtd_validation* v);

/* ---- workspace boundary ---- */

/* Convex-hull / ellipse summary of the gimbal plane. ellipse_valid receives 0
 * when the hull is too degenerate to fit. Output pointers may be NULL. */
imtd_status imtd_workspace_boundary(const imtd_joint_series* joints, double cone_half_angle_deg,
                                    double* max_cone_angle_deg, int* violation,
                                    double* semi_major_deg, double* semi_minor_deg,
                                    int* ellipse_valid);

/* ---- session reports ---- */

imtd_status imtd_report_build(const imtd_metric_set* left, const imtd_metric_set* right,
                              const imtd_validation* validation, const imtd_calibration* cal,
                              const imtd_metric_config* cfg, imtd_convention convention,
                              imtd_report** out);
imtd_status imtd_report_save_json(const imtd_report* report, const char* path);
imtd_status imtd_report_save_metrics_csv(const imtd_report* report, const char* path);
/* Fixed-layout text rendering; free the result with imtd_string_free. */
imtd_status imtd_report_render(const imtd_report* report, char** out_text);
imtd_status imtd_report_render_file(const char* json_path, char** out_text);
void imtd_report_free(imtd_report* report);
void imtd_string_free(char* text);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* IMTD_H */
