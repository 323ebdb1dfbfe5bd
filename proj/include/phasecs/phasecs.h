#ifndef PHASECS_PHASECS_H
#define PHASECS_PHASECS_H

/* C interface to the phasecs library. Every fallible call returns a
 * phasecs_status; on failure phasecs_last_error() describes the problem
 * (per thread, valid until the next call on that thread). Objects returned
 * through out-pointers belong to the caller and are released with the
 * matching *_free function. */

#include <stddef.h>
#include <stdint.h>

#if defined(PHASECS_BUILDING_LIBRARY)
#define PHASECS_API __attribute__((visibility("default")))
#else
#define PHASECS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum phasecs_status {
  PHASECS_OK = 0,
  PHASECS_ERR_INVALID_ARG = 1,
  PHASECS_ERR_SOLVER = 2,
  PHASECS_ERR_CAP = 3,
  PHASECS_ERR_NUMERIC = 4,
  PHASECS_ERR_IO = 5,
  PHASECS_ERR_INTERNAL = 6
} phasecs_status;

typedef struct phasecs_matrix phasecs_matrix;
typedef struct phasecs_text phasecs_text;
typedef struct phasecs_sweep phasecs_sweep;

PHASECS_API const char* phasecs_version(void);
PHASECS_API const char* phasecs_last_error(void);
/* Name of the size cap behind the last PHASECS_ERR_CAP, or "". */
PHASECS_API const char* phasecs_last_cap(void);
PHASECS_API const char* phasecs_status_name(phasecs_status status);

/* Text blobs (CSV, JSON, SVG). */
PHASECS_API const char* phasecs_text_data(const phasecs_text* text);
PHASECS_API size_t phasecs_text_size(const phasecs_text* text);
PHASECS_API void phasecs_text_free(phasecs_text* text);

/* Matrices. The text format is "m N" on the first line followed by m rows
 * of N whitespace-separated decimals. */
PHASECS_API phasecs_status phasecs_matrix_create(size_t rows, size_t cols, const double* row_major,
                                                 phasecs_matrix** out);
PHASECS_API phasecs_status phasecs_matrix_identity(size_t n, phasecs_matrix** out);
/* i.i.d. N(0, 1/rows) entries. */
PHASECS_API phasecs_status phasecs_matrix_gaussian(size_t rows, size_t cols, uint64_t seed,
                                                   phasecs_matrix** out);
PHASECS_API phasecs_status phasecs_matrix_parse(const char* text, phasecs_matrix** out);
PHASECS_API phasecs_status phasecs_matrix_load(const char* path, phasecs_matrix** out);
/* Built-in matrices: "failure-2x2", "identity-2", "vacuous-4x2". */
PHASECS_API phasecs_status phasecs_matrix_example(const char* name, phasecs_matrix** out);
PHASECS_API size_t phasecs_matrix_rows(const phasecs_matrix* a);
PHASECS_API size_t phasecs_matrix_cols(const phasecs_matrix* a);
PHASECS_API phasecs_status phasecs_matrix_get(const phasecs_matrix* a, size_t i, size_t j, double* out);
PHASECS_API void phasecs_matrix_free(phasecs_matrix* a);

/* Recovery constants. */
typedef struct phasecs_theory_params {
  double omega;
  double rho;
  double alpha;
  double t;
  double delta_tk;
  double theta_minus;
  double theta_plus;
} phasecs_theory_params;

typedef struct phasecs_bound_constants {
  double gamma;
  double a;
  double d;
  double t_omega;
  double delta_threshold;
  double c1;
  double c2;
  int applicable;
} phasecs_bound_constants;

PHASECS_API void phasecs_theory_defaults(phasecs_theory_params* params);
PHASECS_API phasecs_status phasecs_bound_constants_eval(const phasecs_theory_params* params,
                                                        phasecs_bound_constants* out);
PHASECS_API phasecs_status phasecs_unweighted_constants(double t, double delta_tk, double* c1, double* c2);

typedef struct phasecs_constants_grid {
  double rho;
  double theta_minus;
  double theta_plus;
  double t;
  double delta_tk;
  const double* alphas;
  size_t alpha_count;
  const double* omegas;
  size_t omega_count;
} phasecs_constants_grid;

PHASECS_API phasecs_status phasecs_constants_csv(const phasecs_constants_grid* grid, phasecs_text** out);
/* panel 0: t^omega, 1: C1, 2: C2. */
PHASECS_API phasecs_status phasecs_constants_svg(const phasecs_constants_grid* grid, int panel,
                                                 phasecs_text** out);

/* Solver and single recoveries. */
typedef struct phasecs_solver_options {
  double lambda;
  double penalty;
  double tol_abs;
  double tol_rel;
  int max_iter;
  int adapt_penalty;
} phasecs_solver_options;

typedef enum phasecs_signal_kind { PHASECS_SPARSE = 0, PHASECS_COMPRESSIBLE = 1 } phasecs_signal_kind;

typedef struct phasecs_recover_spec {
  phasecs_signal_kind kind;
  size_t n;
  size_t k;
  double theta;
  double rho;
  double alpha;
  double omega;
  size_t m;
  double sigma;
  uint64_t seed;
} phasecs_recover_spec;

typedef enum phasecs_solve_status {
  PHASECS_SOLVE_CONVERGED = 0,
  PHASECS_SOLVE_MAX_ITER = 1,
  PHASECS_SOLVE_FAILED = 2
} phasecs_solve_status;

typedef struct phasecs_recover_result {
  double snr_db;
  int iterations;
  phasecs_solve_status solve_status;
  double primal_residual;
  double dual_residual;
  double feasibility;
  double epsilon;
  double wall_ms;
} phasecs_recover_result;

PHASECS_API void phasecs_solver_defaults(phasecs_solver_options* opts);
PHASECS_API void phasecs_recover_defaults(phasecs_recover_spec* spec);
/* Runs one instance end to end. A solver that stops without converging is
 * reported through out->solve_status, not the return value. `json` may be
 * NULL. */
PHASECS_API phasecs_status phasecs_recover(const phasecs_recover_spec* spec,
                                           const phasecs_solver_options* opts,
                                           phasecs_recover_result* out, phasecs_text** json);

/* Sweeps. Presets: "fig2-sparse", "fig3-compressible". */
PHASECS_API phasecs_status phasecs_sweep_preset(const char* name, phasecs_sweep** out);
PHASECS_API phasecs_status phasecs_sweep_parse(const char* text, phasecs_sweep** out);
PHASECS_API phasecs_status phasecs_sweep_load(const char* path, phasecs_sweep** out);
PHASECS_API phasecs_status phasecs_sweep_set_seed(phasecs_sweep* sweep, uint64_t seed);
PHASECS_API phasecs_status phasecs_sweep_set_threads(phasecs_sweep* sweep, size_t threads);
PHASECS_API phasecs_status phasecs_sweep_format(const phasecs_sweep* sweep, phasecs_text** out);
PHASECS_API phasecs_status phasecs_sweep_run(const phasecs_sweep* sweep, phasecs_text** csv);
PHASECS_API void phasecs_sweep_free(phasecs_sweep* sweep);
/* Charts of mean SNR against m, read back from sweep CSV text. */
PHASECS_API phasecs_status phasecs_sweep_chart_count(const char* csv, size_t* count);
PHASECS_API phasecs_status phasecs_sweep_chart(const char* csv, size_t index, phasecs_text** out);

/* Certificates. `weights` may be NULL for w = 1. */
typedef enum phasecs_check {
  PHASECS_CHECK_NSP = 0,
  PHASECS_CHECK_PNSP = 1,
  PHASECS_CHECK_RIP = 2,
  PHASECS_CHECK_SRIP = 3
} phasecs_check;

typedef enum phasecs_verdict {
  PHASECS_HOLDS_EXACT = 0,
  PHASECS_FAILS = 1,
  PHASECS_INDETERMINATE = 2
} phasecs_verdict;

typedef struct phasecs_certify_options {
  int falsify;                 /* 0: exact mode, 1: randomized falsification */
  double kernel_tol;           /* <= 0 selects the default */
  uint64_t seed;
  size_t restarts;
  int require_both_nonzero;    /* phaseless check: both u and v nonzero */
} phasecs_certify_options;

PHASECS_API void phasecs_certify_defaults(phasecs_certify_options* opts);
/* `json` and `verdict` may be NULL; `verdict` is left untouched for the RIP checks. */
PHASECS_API phasecs_status phasecs_certify(const phasecs_matrix* a, phasecs_check check, size_t k,
                                           const double* weights, size_t weight_count,
                                           const phasecs_certify_options* opts, phasecs_text** json,
                                           phasecs_verdict* verdict);

typedef enum phasecs_program { PHASECS_PROGRAM_L1 = 0, PHASECS_PROGRAM_PHASELESS = 1 } phasecs_program;

/* Brute-force minimizers for measurements of the planted signal x:
 * y = A x for the linear program, b = |A x| for the phaseless one.
 * `recovered` (may be NULL) is 1 when x is the unique minimizer (up to sign).
 * `json` may be NULL. */
PHASECS_API phasecs_status phasecs_oracle(const phasecs_matrix* a, phasecs_program program,
                                          const double* x, size_t n, const double* weights,
                                          size_t weight_count, phasecs_text** json, int* recovered);

#ifdef __cplusplus
}
#endif

#endif
