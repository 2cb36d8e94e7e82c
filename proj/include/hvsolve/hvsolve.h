/* Copyright 2026 The hvsolve Authors */
/* SPDX-License-Identifier: Apache-2.0 */

#ifndef HVSOLVE_HVSOLVE_H_
#define HVSOLVE_HVSOLVE_H_

#include <stddef.h>
#include <stdint.h>

#if defined(HVS_BUILDING_LIBRARY)
#define HVS_API __attribute__((visibility("default")))
#else
#define HVS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hvs_status
{
  HVS_OK = 0,
  HVS_ERR_INVALID_ARGUMENT = 1,
  HVS_ERR_PARSE = 2,
  HVS_ERR_MISSING_SLOT = 3,
  HVS_ERR_NON_FINITE = 4,
  HVS_ERR_VERSION = 5,
  HVS_ERR_INTEGRITY = 6,
  HVS_ERR_GENERATION_FAILED = 7,
  HVS_ERR_NUMERICAL = 8,
  HVS_ERR_IO = 9,
  HVS_ERR_INTERNAL = 99
} hvs_status;

typedef struct hvs_system hvs_system;
typedef struct hvs_instance hvs_instance;
typedef struct hvs_template hvs_template;
typedef struct hvs_solutions hvs_solutions;
typedef struct hvs_report hvs_report;

/* Message of the last failed call on this thread; "" after a success. */
HVS_API const char *hvs_last_error(void);
HVS_API const char *hvs_version(void);
HVS_API const char *hvs_status_name(hvs_status s);
/* Strings returned through char** out-parameters are owned by the caller. */
HVS_API void hvs_string_free(char *s);

/* ---- systems ---- */
HVS_API hvs_status hvs_system_parse(const char *text, hvs_system **out);
HVS_API void hvs_system_free(hvs_system *sys);
HVS_API size_t hvs_system_num_variables(const hvs_system *sys);
HVS_API size_t hvs_system_num_polys(const hvs_system *sys);
HVS_API size_t hvs_system_num_slots(const hvs_system *sys);
HVS_API hvs_status hvs_system_format(const hvs_system *sys, char **out);

/* Built-in worked systems: "SYS-A", "SYS-B", "SYS-C". */
HVS_API size_t hvs_builtin_count(void);
HVS_API const char *hvs_builtin_name(size_t i);
HVS_API hvs_status hvs_builtin_texts(const char *name, char **problem, char **instance);

/* ---- generation ---- */
typedef struct hvs_generate_options
{
  int64_t eps_num; /* epsilon = eps_num / eps_den, 0 < epsilon < 1 */
  int64_t eps_den;
  double rank_tol;
  uint64_t seed;
  size_t max_subset_size; /* 0: every subset */
  const char *hidden;     /* variable name, or NULL to search all */
  int reduce;             /* compute a reduction schedule */
} hvs_generate_options;

HVS_API void hvs_generate_options_default(hvs_generate_options *opts);
/* On HVS_ERR_GENERATION_FAILED the last error lists every rejected candidate. */
HVS_API hvs_status hvs_generate(const hvs_system *sys, const hvs_generate_options *opts,
                                hvs_template **out);

/* ---- templates ---- */
typedef struct hvs_template_info
{
  size_t basis_size;
  size_t pencil_size;
  size_t reduced_size;
  size_t hidden_index;
  int hidden_degree;
  size_t eliminates;
  size_t removes;
  size_t num_variables;
  size_t num_slots;
} hvs_template_info;

HVS_API hvs_status hvs_template_parse(const char *text, hvs_template **out);
HVS_API hvs_status hvs_template_serialize(const hvs_template *t, char **out);
HVS_API hvs_status hvs_template_describe(const hvs_template *t, char **out);
HVS_API hvs_status hvs_template_info_get(const hvs_template *t, hvs_template_info *info);
HVS_API const char *hvs_template_variable(const hvs_template *t, size_t i);
HVS_API void hvs_template_free(hvs_template *t);

/* ---- instances ---- */
HVS_API hvs_status hvs_instance_parse(const hvs_template *t, const char *text,
                                      hvs_instance **out);
/* values[i] is the value of slot i in declaration order. */
HVS_API hvs_status hvs_instance_from_values(const hvs_template *t, const double *values,
                                            size_t count, hvs_instance **out);
HVS_API void hvs_instance_free(hvs_instance *inst);

/* ---- solving ---- */
typedef struct hvs_solve_options
{
  int reduce;
  int keep_all;
  double residual_tol;
  double consistency_tol;
  double ratio_tol;
  double pivot_tol;
  double inf_tol;
} hvs_solve_options;

typedef enum hvs_solution_status
{
  HVS_SOLUTION_VALID = 0,
  HVS_SOLUTION_INVALID = 1,
  HVS_SOLUTION_INDETERMINATE = 2
} hvs_solution_status;

typedef enum hvs_format
{
  HVS_FORMAT_CSV = 0,
  HVS_FORMAT_STRUCT = 1
} hvs_format;

HVS_API void hvs_solve_options_default(hvs_solve_options *opts);
HVS_API hvs_status hvs_solve(const hvs_template *t, const hvs_instance *inst,
                             const hvs_solve_options *opts, hvs_solutions **out);
HVS_API size_t hvs_solutions_count(const hvs_solutions *s);
HVS_API size_t hvs_solutions_valid_count(const hvs_solutions *s);
HVS_API int hvs_solutions_used_fallback(const hvs_solutions *s);
HVS_API size_t hvs_solutions_solved_size(const hvs_solutions *s);
/* re and im receive one entry per variable. */
HVS_API hvs_status hvs_solutions_point(const hvs_solutions *s, size_t i, double *re, double *im);
HVS_API hvs_status hvs_solutions_stats(const hvs_solutions *s, size_t i, double *residual_max,
                                       double *consistency, hvs_solution_status *status);
HVS_API hvs_status hvs_solutions_format(const hvs_solutions *s, hvs_format format, char **out);
HVS_API void hvs_solutions_free(hvs_solutions *s);

/* ---- stability benchmark ---- */
typedef enum hvs_bench_mode
{
  HVS_BENCH_RANDOM = 0,
  HVS_BENCH_NEAR_DEGENERATE = 1
} hvs_bench_mode;

typedef struct hvs_bench_options
{
  size_t trials;
  hvs_bench_mode mode;
  double gap;
  uint64_t seed;
  hvs_solve_options solve;
} hvs_bench_options;

typedef struct hvs_report_summary
{
  size_t trials;
  size_t successes;
  size_t failures;
  double q10;
  double q50;
  double q90;
  double mean_solve_seconds;
} hvs_report_summary;

HVS_API void hvs_bench_options_default(hvs_bench_options *opts);
HVS_API hvs_status hvs_bench(const hvs_template *t, const hvs_bench_options *opts,
                             hvs_report **out);
HVS_API hvs_status hvs_report_summary_get(const hvs_report *r, hvs_report_summary *out);
HVS_API hvs_status hvs_report_csv(const hvs_report *r, char **out);
HVS_API hvs_status hvs_report_summary_text(const hvs_report *r, const char *label, char **out);
HVS_API hvs_status hvs_report_histogram(const hvs_report *r, char **out);
HVS_API void hvs_report_free(hvs_report *r);

#ifdef __cplusplus
}
#endif

#endif /* HVSOLVE_HVSOLVE_H_ */
