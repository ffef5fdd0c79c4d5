/*
 * Copyright 2026 The latkit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to latkit.  Every function returning latkit_status sets a
 * thread-local message readable through latkit_last_error() on failure.
 * Objects are opaque and owned by the caller once returned. */

#ifndef LATKIT_LATKIT_H_
#define LATKIT_LATKIT_H_

#include <stddef.h>
#include <stdint.h>

#if defined(LATKIT_BUILDING_LIBRARY)
#define LATKIT_API __attribute__((visibility("default")))
#else
#define LATKIT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum latkit_status {
  LATKIT_OK = 0,
  LATKIT_SINGULAR_BASIS = 1,
  LATKIT_BUDGET_EXCEEDED = 2,
  LATKIT_TOLERANCE_UNREACHABLE = 3,
  LATKIT_DIMENSION_TOO_LARGE = 4,
  LATKIT_REDUCTION_UNSTABLE = 5,
  LATKIT_INVALID_ARGUMENT = 6,
  LATKIT_PARSE_ERROR = 7,
  LATKIT_IO_ERROR = 8,
  LATKIT_INTERNAL_ERROR = 100
} latkit_status;

typedef struct latkit_lattice latkit_lattice;
typedef struct latkit_beta latkit_beta;

typedef struct latkit_config {
  double mass_tol;       /* relative tolerance of Gaussian masses */
  double eta_tol;        /* relative width of the smoothing bracket */
  uint64_t enum_budget;  /* enumeration node cap */
  double alpha_max;      /* range of the beta estimate */
  uint64_t seed;
  int shifts;            /* sandwich shifts per lattice */
  int workers;           /* verify worker threads */
} latkit_config;

typedef struct latkit_mass {
  double value;  /* truncated sum */
  double lo;
  double hi;
  double mid;
  double tail_bound;
  double rounding;
  double trunc_radius;
  uint64_t points;
} latkit_mass;

typedef struct latkit_smoothing {
  double eta;
  double lo;
  double hi;
  double mass_at_lo; /* certified lower end of rho_{1/lo}(L*) */
  double mass_at_hi; /* certified upper end of rho_{1/hi}(L*) */
  int evaluations;
} latkit_smoothing;

typedef struct latkit_covering {
  double mu_lo;
  double mu_hi;
  double gs_bound;
  double eta_bound; /* NaN when the eta bound does not apply */
  int starts;
} latkit_covering;

typedef struct latkit_verify_summary {
  int lattices;
  int passed;
  int failed;
  int report_only;
} latkit_verify_summary;

LATKIT_API const char* latkit_last_error(void);
LATKIT_API const char* latkit_status_name(latkit_status status);
LATKIT_API void latkit_config_default(latkit_config* config);

LATKIT_API latkit_status latkit_lattice_load(const char* path, latkit_lattice** out);
LATKIT_API latkit_status latkit_lattice_from_json(const char* text, latkit_lattice** out);
/* row_major[i * dim + j] is coordinate i of basis vector j. */
LATKIT_API latkit_status latkit_lattice_from_rows(int dim, const double* row_major, latkit_lattice** out);
LATKIT_API latkit_status latkit_lattice_dual(const latkit_lattice* lattice, latkit_lattice** out);
LATKIT_API void latkit_lattice_free(latkit_lattice* lattice);
LATKIT_API int latkit_lattice_dim(const latkit_lattice* lattice);
LATKIT_API const char* latkit_lattice_name(const latkit_lattice* lattice);
LATKIT_API int latkit_lattice_is_exact(const latkit_lattice* lattice);
LATKIT_API double latkit_lattice_det(const latkit_lattice* lattice);
/* Writes the basis in the same layout as latkit_lattice_from_rows. */
LATKIT_API void latkit_lattice_basis(const latkit_lattice* lattice, double* row_major);
LATKIT_API latkit_status latkit_lattice_to_json(const latkit_lattice* lattice, char** out);
LATKIT_API void latkit_string_free(char* text);

/* style: "unimodular_of_Zn" or "integer_entries". */
LATKIT_API latkit_status latkit_generate_random(int dim, uint64_t seed, const char* style, latkit_lattice** out);

/* coeffs and vector may be NULL; otherwise they receive dim entries. */
LATKIT_API latkit_status latkit_shortest_vector(const latkit_lattice* lattice, const latkit_config* config, double* norm,
                                                long long* coeffs, double* vector);
LATKIT_API latkit_status latkit_closest_vector(const latkit_lattice* lattice, const latkit_config* config,
                                               const double* target, double* distance, long long* coeffs);
/* Nonzero points with norm <= alpha * lambda1. */
LATKIT_API latkit_status latkit_count_points(const latkit_lattice* lattice, const latkit_config* config, double alpha,
                                             uint64_t* count);
/* t may be NULL for the unshifted mass. */
LATKIT_API latkit_status latkit_gaussian_mass(const latkit_lattice* lattice, const latkit_config* config, double s,
                                              const double* t, double r, latkit_mass* out);
LATKIT_API latkit_status latkit_smoothing_parameter(const latkit_lattice* lattice, const latkit_config* config,
                                                    latkit_smoothing* out);
/* deep_hole may be NULL; otherwise it receives dim entries. */
LATKIT_API latkit_status latkit_covering_radius(const latkit_lattice* lattice, const latkit_config* config,
                                                latkit_covering* out, double* deep_hole);

LATKIT_API latkit_status latkit_beta_estimate(const latkit_lattice* lattice, const latkit_config* config,
                                              double alpha_max, latkit_beta** out);
LATKIT_API double latkit_beta_value(const latkit_beta* beta);
LATKIT_API double latkit_beta_alpha_at_max(const latkit_beta* beta);
LATKIT_API size_t latkit_beta_sample_count(const latkit_beta* beta);
LATKIT_API void latkit_beta_sample(const latkit_beta* beta, size_t index, double* alpha, uint64_t* count);
LATKIT_API void latkit_beta_free(latkit_beta* beta);

/* Loads every *.json in corpus_dir and writes report.csv, invariants.csv,
 * summary.md and chart.svg to out_dir.  *exit_code is 0 when no check
 * failed and 1 otherwise; summary may be NULL. */
LATKIT_API latkit_status latkit_run_verify(const char* corpus_dir, const char* out_dir, const latkit_config* config,
                                           int* exit_code, latkit_verify_summary* summary);

#ifdef __cplusplus
}
#endif

#endif /* LATKIT_LATKIT_H_ */
