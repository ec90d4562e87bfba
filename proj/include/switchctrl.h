/* C interface of the switching-control solver library.
 *
 * All entry points are thread-compatible: handles are immutable after
 * creation except through the explicit setter, and the last-error message is
 * thread local. Functions returning swc_status set the error message
 * retrievable via swc_last_error() on failure. Strings returned through
 * char** out-parameters are heap-allocated and must be released with
 * swc_string_free().
 */
#ifndef SWITCHCTRL_H
#define SWITCHCTRL_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum swc_status {
  SWC_OK = 0,
  SWC_ERR_INVALID_ARGUMENT = 1,
  SWC_ERR_PARSE = 2,
  SWC_ERR_VALIDATION = 3,
  SWC_ERR_IO = 4,
  SWC_ERR_SOLVER = 5,
  SWC_ERR_LIMIT = 6
} swc_status;

/* Opaque handles. */
typedef struct swc_problem swc_problem;
typedef struct swc_result swc_result;

const char* swc_version(void);

/* Message describing the most recent failure on this thread ("" if none). */
const char* swc_last_error(void);

void swc_string_free(char* s);

/* --- problem construction ------------------------------------------------ */

swc_status swc_problem_from_file(const char* path, swc_problem** out);
swc_status swc_problem_from_json(const char* text, swc_problem** out);

/* Canonical JSON form of the validated configuration. */
swc_status swc_problem_to_json(const swc_problem* problem, char** out);

/* Overrides a scalar parameter ("alpha" or "eps") and revalidates. */
swc_status swc_problem_set_real(swc_problem* problem, const char* name,
                                double value);

void swc_problem_free(swc_problem* problem);

/* --- solving -------------------------------------------------------------- */

swc_status swc_solve(const swc_problem* problem, swc_result** out);
void swc_result_free(swc_result* result);

double swc_result_objective(const swc_result* result);
double swc_result_switching_error(const swc_result* result);
double swc_result_beta_max(const swc_result* result);
double swc_result_residual_norm(const swc_result* result);
int swc_result_switch_count(const swc_result* result);
/* 1 when the switching tolerance was met before the beta cap, else 0. */
int swc_result_switched(const swc_result* result);

swc_status swc_result_to_json(const swc_result* result, char** out);

/* Writes controls.csv, report.json, homotopy.csv (and optional state.csv). */
swc_status swc_result_write_artifacts(const swc_result* result,
                                      const char* dir);

/* --- parameter sweeps ----------------------------------------------------- */

/* Independent solve per value of "alpha" or "eps". When out_dir is non-NULL,
 * per-value artifacts and summary.csv are written there. summary_json
 * receives a machine-readable summary of all entries. */
swc_status swc_sweep(const swc_problem* problem, const char* parameter,
                     const double* values, size_t n_values,
                     const char* out_dir, char** summary_json);

/* --- verification oracles ------------------------------------------------- */

/* Worst relative error between the analytic gradient and central finite
 * differences of the objective (beta = 0, the given gamma). */
swc_status swc_check_gradient(const swc_problem* problem, double gamma,
                              int trials, double step, double* max_rel_error);

/* Exhaustive-enumeration oracle (piecewise-constant mode): minimizes the
 * objective over the configured value grid, runs the solver on the same
 * problem and reports both values as JSON. */
swc_status swc_oracle_compare(const swc_problem* problem, char** report_json);

/* Exact-switching check for piecewise-constant controls with the
 * beta-continuation forced above the operator-norm estimate. */
swc_status swc_check_switching_pc(const swc_problem* problem,
                                  char** report_json);

#ifdef __cplusplus
}
#endif

#endif /* SWITCHCTRL_H */
