// Copyright 2026 The qmpemba Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


/* C interface to qmpemba. Every function returns a qmpemba_status; on failure
 * qmpemba_last_error() describes the problem for the calling thread. Handles
 * are opaque and owned by the caller, who releases them with the matching
 * *_free function. */

#ifndef QMPEMBA_H
#define QMPEMBA_H

#include <stddef.h>

#if defined(QMPEMBA_BUILDING_LIBRARY)
#define QMPEMBA_API __attribute__((visibility("default")))
#else
#define QMPEMBA_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qmpemba_status {
    QMPEMBA_OK = 0,
    QMPEMBA_ERR_INVALID = 1,
    QMPEMBA_ERR_CONFIG = 2,
    QMPEMBA_ERR_NUMERICAL = 3,
    /* Sweep finished but some cells failed. */
    QMPEMBA_ERR_PARTIAL = 4,
    QMPEMBA_ERR_IO = 5
} qmpemba_status;

typedef struct qmpemba_config qmpemba_config;
typedef struct qmpemba_spectrum qmpemba_spectrum;

QMPEMBA_API const char* qmpemba_version(void);
/* Message of the last failed call on this thread; "" if none. */
QMPEMBA_API const char* qmpemba_last_error(void);

QMPEMBA_API qmpemba_status qmpemba_config_parse(const char* json_text, qmpemba_config** out);
QMPEMBA_API qmpemba_status qmpemba_config_load(const char* path, qmpemba_config** out);
/* name: "fig2", "fig3-qme" or "fig3-anti". */
QMPEMBA_API qmpemba_status qmpemba_config_preset(const char* name, qmpemba_config** out);
QMPEMBA_API qmpemba_status qmpemba_config_set_output_dir(qmpemba_config* cfg, const char* dir);
QMPEMBA_API qmpemba_status qmpemba_config_set_dt(qmpemba_config* cfg, double dt);
/* Canonical JSON. The string lives until the next call on this handle or its release. */
QMPEMBA_API qmpemba_status qmpemba_config_to_json(qmpemba_config* cfg, const char** json_text);
QMPEMBA_API qmpemba_status qmpemba_config_output_dir(const qmpemba_config* cfg, const char** dir);
QMPEMBA_API void qmpemba_config_free(qmpemba_config* cfg);

/* Writes every artifact into the config's output directory. */
QMPEMBA_API qmpemba_status qmpemba_run(const qmpemba_config* cfg);

/* axes: n_axes strings of the form "name=v1,v2,...". Writes sweep.csv into
 * the config's output directory. failed_cells may be NULL. */
QMPEMBA_API qmpemba_status qmpemba_sweep(const qmpemba_config* cfg, const char* const* axes, size_t n_axes,
                                         size_t* failed_cells);

/* quenched = 0 for the base generator, 1 for the generator with the bond channel. */
QMPEMBA_API qmpemba_status qmpemba_spectrum_compute(const qmpemba_config* cfg, int quenched, qmpemba_spectrum** out);
QMPEMBA_API size_t qmpemba_spectrum_size(const qmpemba_spectrum* spec);
QMPEMBA_API qmpemba_status qmpemba_spectrum_eigenvalue(const qmpemba_spectrum* spec, size_t index, double* re,
                                                       double* im);
QMPEMBA_API qmpemba_status qmpemba_spectrum_write_csv(const qmpemba_spectrum* spec, const char* path);
QMPEMBA_API void qmpemba_spectrum_free(qmpemba_spectrum* spec);

/* spectrum_L0.csv and, when the quench is enabled, spectrum_L1.csv into the output directory. */
QMPEMBA_API qmpemba_status qmpemba_write_spectra(const qmpemba_config* cfg);

#ifdef __cplusplus
}
#endif

#endif
