/* Copyright 2026 The photomesh Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef PHOTOMESH_PHOTOMESH_H_
#define PHOTOMESH_PHOTOMESH_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PM_API __declspec(dllexport)
#else
#define PM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pm_status {
  PM_OK = 0,
  PM_ERR_INVALID_ARGUMENT = 1,
  PM_ERR_INVALID_DIMENSION = 2,
  PM_ERR_OUT_OF_RANGE = 3,
  PM_ERR_NOT_UNITARY = 4,
  PM_ERR_DIMENSION_MISMATCH = 5,
  PM_ERR_LAYOUT_MISMATCH = 6,
  PM_ERR_INFEASIBLE = 7,
  PM_ERR_IO = 8,
  PM_ERR_PARSE = 9,
  PM_ERR_INTERNAL = 10
} pm_status;

typedef enum pm_mesh_kind { PM_MESH_SQUARE = 0, PM_MESH_TRIANGULAR = 1 } pm_mesh_kind;

typedef struct pm_matrix pm_matrix;
typedef struct pm_settings pm_settings;

/* Build identifier, e.g. "photomesh 0.1.0". */
PM_API const char *pm_version(void);

/* Message of the last failed call on this thread; "" after a success. */
PM_API const char *pm_last_error(void);
/* Measured unitarity deviation of the last PM_ERR_NOT_UNITARY, else 0. */
PM_API double pm_last_deviation(void);

PM_API pm_status pm_matrix_haar(int n, uint64_t seed, pm_matrix **out);
PM_API pm_status pm_matrix_fourier(int n, pm_matrix **out);
PM_API pm_status pm_matrix_load(const char *path, pm_matrix **out);
PM_API pm_status pm_matrix_save(const pm_matrix *m, const char *path);
PM_API int pm_matrix_dim(const pm_matrix *m);
PM_API pm_status pm_matrix_entry(const pm_matrix *m, int row, int col, double *re, double *im);
PM_API void pm_matrix_free(pm_matrix *m);

PM_API pm_status pm_fidelity(const pm_matrix *a, const pm_matrix *b, double *out);
/* Largest entrywise modulus of a - b. */
PM_API pm_status pm_max_deviation(const pm_matrix *a, const pm_matrix *b, double *out);

PM_API pm_status pm_decompose(const pm_matrix *m, pm_mesh_kind kind, pm_settings **out);
PM_API pm_status pm_settings_unitary(const pm_settings *s, pm_matrix **out);
PM_API pm_status pm_settings_load(const char *path, pm_settings **out);
PM_API pm_status pm_settings_save(const pm_settings *s, const char *path);
PM_API int pm_settings_node_count(const pm_settings *s);
PM_API void pm_settings_free(pm_settings *s);

typedef struct pm_simulation_report {
  double fidelity;
  int affected;
  int n_clipped;
  double mean_rel_deviation;
  double max_rel_deviation;
} pm_simulation_report;

/* Decomposes, clips to a hardware sample drawn from (sigma, seed) and
 * evaluates the result. */
PM_API pm_status pm_simulate(const pm_matrix *m, pm_mesh_kind kind, double sigma, uint64_t seed,
                             pm_simulation_report *out);

typedef struct pm_optimize_options {
  int extra_layers;
  int max_iters; /* <= 0 selects the default */
  double tol;    /* <= 0 selects the default */
} pm_optimize_options;

typedef struct pm_optimization_report {
  double fidelity_direct; /* clipped square decomposition, no extra layers */
  double fidelity_before; /* optimizer start point */
  double fidelity_after;
  double enhancement;     /* (1 - direct) / (1 - after); +inf when after is exact */
  int iterations;
  int converged;
} pm_optimization_report;

/* Hardware is drawn for the square mesh with `extra_layers` extra layers.
 * `settings_out` may be NULL. */
PM_API pm_status pm_optimize(const pm_matrix *m, double sigma, uint64_t seed,
                             const pm_optimize_options *options, pm_optimization_report *out,
                             pm_settings **settings_out);

/* Runs a named experiment (fig2, fig3, fig4, fourier). `config_path` and
 * `overrides_json` may be NULL; overrides win over the file, which wins over
 * defaults. The one-line summary is copied into `summary` (truncated). */
PM_API pm_status pm_experiment_run(const char *name, const char *config_path,
                                   const char *overrides_json, const char *out_dir, int jobs,
                                   char *summary, size_t summary_len);

#ifdef __cplusplus
}
#endif

#endif /* PHOTOMESH_PHOTOMESH_H_ */
