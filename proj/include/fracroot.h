/* fracroot — fractional Newton-Raphson root finding, C API.
 *
 * The library locates real and complex zeros of nonlinear systems from real
 * initial conditions by sweeping the order of a fractional derivative over
 * (-2, 2). All state lives behind opaque handles; every function that can
 * fail returns an fr_status, and fr_last_error() describes the most recent
 * failure on the calling thread.
 */
#ifndef FRACROOT_H
#define FRACROOT_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#  define FRACROOT_API __declspec(dllexport)
#else
#  define FRACROOT_API __attribute__((visibility("default")))
#endif

typedef enum fr_status {
    FR_OK = 0,
    FR_ERR_SYNTAX = 1,        /* bad expression text */
    FR_ERR_ARITY = 2,         /* unknown variable / wrong dimension */
    FR_ERR_DOMAIN = 3,        /* argument outside the operation's domain */
    FR_ERR_PRECONDITION = 4,  /* configuration or precondition violated */
    FR_ERR_EMPTY_GRID = 5,    /* grid parameters eliminate all points */
    FR_ERR_UNSUPPORTED = 6,   /* expression has no fractional series form */
    FR_ERR_BAD_HANDLE = 7,    /* null or out-of-range argument */
    FR_ERR_INTERNAL = 8,
} fr_status;

typedef enum fr_method {
    FR_METHOD_NEWTON = 0,
    FR_METHOD_FRAC_NEWTON_RAPHSON = 1,
    FR_METHOD_FRAC_NEWTON = 2,
    FR_METHOD_QUASI = 3,
    FR_METHOD_PSEUDO = 4,
    FR_METHOD_CHORD = 5,
} fr_method;

typedef enum fr_deriv {
    FR_DERIV_RIEMANN_LIOUVILLE = 0,
    FR_DERIV_CAPUTO = 1,
} fr_deriv;

typedef enum fr_outcome {
    FR_OUTCOME_CONVERGED = 0,
    FR_OUTCOME_DIVERGED = 1,
    FR_OUTCOME_EXHAUSTED = 2,
} fr_outcome;

/* Sweep configuration. Initialize with fr_config_default and override. */
typedef struct fr_config {
    double tol;         /* convergence tolerance on ||f(x)||_2 */
    int max_iter;       /* iteration limit per order */
    double delta;       /* order-switch threshold, tol < delta < 1 */
    double div_bound;   /* divergence bound M on the residual */
    double eps_shift;   /* pseudo-Newton diagonal shift */
    double chord_slope; /* parallel-chord slope; NaN = derivative at x0 */
    fr_deriv deriv;     /* which fractional derivative */
    int n_trunc;        /* Taylor terms kept per transcendental call */
    double alpha_step;  /* grid spacing over (-2, 2) */
    double alpha_excl;  /* exclusion radius around -1, 0, 1 */
    double alpha;       /* NaN = full grid; a value = single-order sweep */
    double eps_dedup;   /* registry relative-distance threshold */
    int jobs;           /* worker threads; runs stay deterministic */
    int record_trace;   /* keep per-iteration traces in the records */
} fr_config;

typedef struct fr_system fr_system;
typedef struct fr_result fr_result;

/* Human-readable description of the last error on this thread. */
FRACROOT_API const char* fr_last_error(void);

FRACROOT_API void fr_config_default(fr_config* cfg);

/* Parse n expressions over x1..xn (plain x when n = 1). */
FRACROOT_API fr_status fr_system_parse(const char* const* equations, int n, fr_system** out);
FRACROOT_API void fr_system_free(fr_system* sys);
FRACROOT_API int fr_system_dim(const fr_system* sys);

/* 1 when the system contains sin/cos/exp/sinh/cosh (whose expansions are
 * truncated Taylor series, accurate for moderate |x|), else 0. */
FRACROOT_API int fr_system_has_transcendental(const fr_system* sys);

/* Evaluate f at a complex point (arrays of length n). */
FRACROOT_API fr_status fr_system_eval(const fr_system* sys, const double* re, const double* im,
                                      double* out_re, double* out_im);

/* Run the full sweep from a real initial condition x0 (length n). */
FRACROOT_API fr_status fr_sweep(const fr_system* sys, fr_method method, const fr_config* cfg,
                                const double* x0, fr_result** out);
FRACROOT_API void fr_result_free(fr_result* res);

/* Deduplicated roots. Component arrays have length n. */
FRACROOT_API int fr_result_root_count(const fr_result* res);
FRACROOT_API fr_status fr_result_root(const fr_result* res, int index, double* alpha,
                                      double* root_re, double* root_im, double* residual,
                                      int* iterations, double* last_step);

/* Every per-alpha run, in ascending-alpha order. */
FRACROOT_API int fr_result_record_count(const fr_result* res);
FRACROOT_API fr_status fr_result_record(const fr_result* res, int index, double* alpha,
                                        fr_outcome* outcome, int* iterations, double* final_re,
                                        double* final_im, double* residual, double* last_step);

/* Iterate traces (available when record_trace was set). A row holds the
 * iteration index, the effective order used to reach it, the point, and the
 * residual there. */
FRACROOT_API int fr_result_trace_len(const fr_result* res, int record_index);
FRACROOT_API fr_status fr_result_trace_row(const fr_result* res, int record_index, int row,
                                           int* iteration, double* alpha_eff, double* x_re,
                                           double* x_im, double* residual);

#ifdef __cplusplus
}
#endif

#endif /* FRACROOT_H */
