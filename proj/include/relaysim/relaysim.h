// SPDX-License-Identifier: Apache-2.0
//
// relaysim: relay attack simulator for multi-carrier phase-based ranging
// Copyright (C) 2026 The relaysim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

/* C interface to the relaysim library.
 *
 * Every function returns an rs_status. On failure the message of the most
 * recent error on the calling thread is available from rs_last_error().
 * Handles are opaque and owned by the caller; release them with the
 * matching *_free function. */

#ifndef RELAYSIM_RELAYSIM_H
#define RELAYSIM_RELAYSIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(RELAYSIM_BUILD_SHARED)
#    define RS_API __declspec(dllexport)
#  else
#    define RS_API __declspec(dllimport)
#  endif
#else
#  define RS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rs_status {
    RS_OK = 0,
    RS_ERR_INVALID_ARGUMENT = 1,
    RS_ERR_CONFIG = 2,
    RS_ERR_IO = 3,
    RS_ERR_SIMULATION = 4,
    RS_ERR_INTERNAL = 5
} rs_status;

typedef struct rs_scenario rs_scenario;
typedef struct rs_result rs_result;

RS_API const char* rs_version(void);
RS_API const char* rs_last_error(void);
RS_API const char* rs_status_name(rs_status status);

/* Scenario text is "key = value" lines. Overrides set with rs_scenario_set
 * replace values from the file. */
RS_API rs_status rs_scenario_load_file(const char* path, rs_scenario** out);
RS_API rs_status rs_scenario_parse(const char* text, rs_scenario** out);
RS_API rs_status rs_scenario_set(rs_scenario* scenario, const char* key, const char* value);
/* Resolved configuration including defaults. The string stays valid until
 * the next call on this handle. */
RS_API rs_status rs_scenario_resolved(rs_scenario* scenario, const char** text);
RS_API void rs_scenario_free(rs_scenario* scenario);

/* experiment: "sweep", "ota", "reciprocity" or "rss"; NULL uses the
 * experiment named in the scenario. */
RS_API rs_status rs_run(rs_scenario* scenario, const char* experiment, rs_result** out);
RS_API void rs_result_free(rs_result* result);

RS_API rs_status rs_result_row_count(const rs_result* result, size_t* count);
RS_API rs_status rs_result_write_csv(const rs_result* result, const char* path);
/* CSV into a caller buffer. *needed receives the size including the NUL. */
RS_API rs_status rs_result_csv(const rs_result* result, char* buffer, size_t capacity, size_t* needed);
RS_API rs_status rs_result_config_echo(const rs_result* result, const char** text);

RS_API rs_status rs_result_cell_count(const rs_result* result, size_t* count);
RS_API rs_status rs_result_cell(const rs_result* result, size_t index, const char** scenario_id, size_t* count,
                                double* mean, double* sd, double* min, double* max);
RS_API rs_status rs_result_cell_by_id(const rs_result* result, const char* scenario_id, size_t* count,
                                      double* mean, double* sd, double* min, double* max);

RS_API rs_status rs_result_metric_count(const rs_result* result, size_t* count);
RS_API rs_status rs_result_metric(const rs_result* result, size_t index, const char** name, double* value);
RS_API rs_status rs_result_metric_by_name(const rs_result* result, const char* name, double* value);

/* Detector and switch trace of one attacked sweep. */
RS_API rs_status rs_write_tdd_trace(rs_scenario* scenario, const char* path);

/* Standalone estimator and detector entry points. */
RS_API rs_status rs_unambiguous_range(double f_step_hz, double* range_m);
RS_API rs_status rs_required_phase_slope(double d_set_m, double d_m, double f_step_hz, double* slope_rad);
RS_API rs_status rs_estimate_distance(const double* phase_rad, size_t count, double f_step_hz, double* distance_m);
RS_API rs_status rs_clipped_fraction(double duration_us, double reaction_us, double* fraction);
RS_API rs_status rs_reciprocity_dissimilarity(const double* mag_ab, const double* mag_ba, size_t count,
                                              int linear_domain, double* value);
RS_API rs_status rs_calibrate_epsilon(const double* samples, size_t count, double quantile, double* epsilon);

#ifdef __cplusplus
}
#endif

#endif /* RELAYSIM_RELAYSIM_H */
