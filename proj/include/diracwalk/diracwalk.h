// Copyright 2026 The diracwalk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DIRACWALK_DIRACWALK_H
#define DIRACWALK_DIRACWALK_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define DW_API __attribute__((visibility("default")))
#else
#define DW_API
#endif

typedef enum dw_status {
    DW_OK = 0,
    DW_ERR_INTERNAL = 1,
    DW_ERR_CONFIG = 2,
    DW_ERR_RESOURCE = 3,
    DW_ERR_DOMAIN = 4,
    DW_ERR_SHAPE = 5,
    DW_ERR_DIMENSION = 6,
    DW_ERR_DEGENERATE = 7,
    DW_ERR_INSUFFICIENT_DATA = 8,
    DW_ERR_BUDGET = 9,
    DW_ERR_IO = 10,
    DW_ERR_ARGUMENT = 11
} dw_status;

typedef struct dw_config dw_config;
typedef struct dw_field dw_field;
typedef struct dw_circuit dw_circuit;

/* Message of the last failed call on this thread ("" after success). */
DW_API const char *dw_last_error(void);
DW_API const char *dw_status_name(dw_status status);
DW_API const char *dw_version(void);
/* Frees strings returned through char** out-parameters. */
DW_API void dw_string_free(char *s);

/* Configuration. A config holds unresolved overrides; defaults for the
 * experiment are applied (and validated) on use. */
DW_API dw_status dw_config_new(const char *experiment, dw_config **out);
DW_API dw_status dw_config_parse(const char *json_text, dw_config **out);
DW_API dw_status dw_config_load(const char *path, dw_config **out);
/* Dotted key, e.g. "grid.n"; the value is read as JSON, else as a string. */
DW_API dw_status dw_config_set(dw_config *config, const char *key, const char *value);
DW_API dw_status dw_config_resolved(const dw_config *config, char **json_out);
DW_API void dw_config_free(dw_config *config);

/* Runs the configured experiment and writes its outputs. */
DW_API dw_status dw_run(const dw_config *config, char **summary_json);

/* Spinor fields. spinor_im may be NULL. */
DW_API dw_status dw_field_gaussian(int dim, size_t n, double omega, double sigma, const double p0[3],
                                   const double center[3], const double *spinor_re, const double *spinor_im,
                                   dw_field **out);
DW_API dw_status dw_field_load(const char *path, dw_field **out);
DW_API dw_status dw_field_save(const dw_field *field, const char *path);
DW_API dw_status dw_field_norm(const dw_field *field, double *out);
DW_API dw_status dw_field_position(const dw_field *field, int axis, double *out);
DW_API dw_status dw_field_transmission(const dw_field *field, double barrier, double *out);
DW_API void dw_field_free(dw_field *field);

/* One product-formula step of length formula.time / formula.steps for the
 * configured grid, physics and potential. */
DW_API dw_status dw_circuit_trotter_step(const dw_config *config, dw_circuit **out);
DW_API dw_status dw_circuit_num_qubits(const dw_circuit *circuit, int *out);
/* format: "text" or "qasm3". */
DW_API dw_status dw_circuit_export(const dw_circuit *circuit, const char *format, char **out);
/* JSON: total, two_qubit, depth, by_kind, by_block. */
DW_API dw_status dw_circuit_counts(const dw_circuit *circuit, char **json_out);
DW_API dw_status dw_circuit_apply(const dw_circuit *circuit, dw_field *field);
DW_API void dw_circuit_free(dw_circuit *circuit);

/* Walsh spectrum of count (a power of two) real samples. */
DW_API dw_status dw_walsh_dump(const double *values, size_t count, double threshold, char **out);

#ifdef __cplusplus
}
#endif

#endif
