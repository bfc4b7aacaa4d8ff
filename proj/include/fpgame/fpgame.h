/* fpgame: binary fingerprinting capacity games.
 *
 * C interface of the shared library. All objects are opaque handles created
 * and destroyed here; every function returns an fpg_status, with outputs
 * through pointer arguments. fpg_last_error() describes the most recent
 * failure on the calling thread. Strings returned through char** are owned
 * by the caller and released with fpg_string_free().
 */
#ifndef FPGAME_FPGAME_H
#define FPGAME_FPGAME_H

#include <stddef.h>

#if defined(_WIN32)
#define FPG_API __declspec(dllexport)
#else
#define FPG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
    FPG_OK = 0,
    FPG_ERR_INVALID_ARGUMENT = 1,
    FPG_ERR_DOMAIN = 2,
    FPG_ERR_PARSE = 3,
    FPG_ERR_NO_CONVERGENCE = 4,
    FPG_ERR_DIVERGENT_INTEGRAL = 5,
    FPG_ERR_INTERNAL = 6
} fpg_status;

typedef enum { FPG_DECODER_JOINT = 0, FPG_DECODER_SIMPLE = 1 } fpg_decoder;

typedef struct fpg_channel fpg_channel;
typedef struct fpg_prior fpg_prior;
typedef struct fpg_solution fpg_solution;

FPG_API const char* fpg_version(void);
FPG_API const char* fpg_last_error(void);
FPG_API void fpg_string_free(char* s);

/* ---- channels ------------------------------------------------------- */

FPG_API fpg_status fpg_channel_create(int k, const double* p, size_t len,
                                      fpg_channel** out);
FPG_API fpg_status fpg_channel_interleaving(int k, fpg_channel** out);
FPG_API fpg_status fpg_channel_from_json(const char* json, fpg_channel** out);
FPG_API fpg_status fpg_channel_to_json(const fpg_channel* c, char** out);
FPG_API int fpg_channel_k(const fpg_channel* c);
FPG_API fpg_status fpg_channel_probs(const fpg_channel* c, double* buf, size_t len);
/* report_json receives the violation list; *ok is 1 when feasible. */
FPG_API fpg_status fpg_channel_validate(const fpg_channel* c, int symmetric, int* ok,
                                        char** report_json);
FPG_API void fpg_channel_free(fpg_channel* c);

/* ---- priors ---------------------------------------------------------- */

/* spec grammar: arcsine | beta:<float> | point:<float> | @<path to JSON> */
FPG_API fpg_status fpg_prior_parse(const char* spec, fpg_prior** out);
FPG_API fpg_status fpg_prior_from_json(const char* json, fpg_prior** out);
FPG_API fpg_status fpg_prior_to_json(const fpg_prior* p, char** out);
FPG_API void fpg_prior_free(fpg_prior* p);

/* ---- payoffs ---------------------------------------------------------- */

FPG_API fpg_status fpg_payoff(double w, const fpg_channel* c, fpg_decoder d,
                              double* value);
/* gradient over all k+1 coordinates; entries 0 and k are zero. */
FPG_API fpg_status fpg_payoff_gradient(double w, const fpg_channel* c, fpg_decoder d,
                                       double* grad, size_t len);
FPG_API fpg_status fpg_response_curve(const fpg_channel* c, double w, double* value);
FPG_API fpg_status fpg_expected_payoff(const fpg_prior* p, const fpg_channel* c,
                                       fpg_decoder d, double* value);

/* ---- solvers and bounds ---------------------------------------------- */

FPG_API fpg_status fpg_capacity_bounds(int k, fpg_decoder d, double* lower,
                                       double* upper, double* asymptote);
FPG_API fpg_status fpg_capacity_bounds_json(int k, fpg_decoder d, char** out);

FPG_API fpg_status fpg_maximize_over_w(const fpg_channel* c, fpg_decoder d, int grid,
                                       double* w_star, double* value);

/* Frank-Wolfe attack minimization; tol <= 0 and max_iter <= 0 select the
 * defaults (1e-9, 50000). On FPG_ERR_NO_CONVERGENCE the best iterate is
 * still returned. */
FPG_API fpg_status fpg_minimize_over_channel(const fpg_prior* p, int k, fpg_decoder d,
                                             double tol, int max_iter,
                                             fpg_channel** channel, double* value,
                                             double* gap);

/* Double-oracle saddle solver; tol/w_grid <= 0 select defaults (1e-6, 4097).
 * On FPG_ERR_NO_CONVERGENCE the best solution is still returned. */
FPG_API fpg_status fpg_solve_saddle(int k, fpg_decoder d, double tol, int w_grid,
                                    fpg_solution** out);
FPG_API fpg_status fpg_solution_value(const fpg_solution* s, double* value);
FPG_API fpg_status fpg_solution_gap(const fpg_solution* s, double* gap);
FPG_API fpg_status fpg_solution_iterations(const fpg_solution* s, int* iterations);
FPG_API int fpg_solution_converged(const fpg_solution* s);
FPG_API fpg_status fpg_solution_channel(const fpg_solution* s, fpg_channel** out);
FPG_API fpg_status fpg_solution_prior(const fpg_solution* s, fpg_prior** out);
FPG_API fpg_status fpg_solution_to_json(const fpg_solution* s, char** out);
FPG_API void fpg_solution_free(fpg_solution* s);

FPG_API fpg_status fpg_degenerate_prior_maximin(int k, double* value);

/* ---- asymptotics ------------------------------------------------------ */

FPG_API fpg_status fpg_fisher_integral(const fpg_prior* p, double* value);
FPG_API fpg_status fpg_asymptotic_capacity(const fpg_prior* p, int k, double* value);
/* samples g_opt (and J_opt when j_out non-null; endpoints get J=0) */
FPG_API fpg_status fpg_optimal_profile_sample(const fpg_prior* p, const double* w,
                                              size_t n, double* g_out, double* j_out);
FPG_API fpg_status fpg_optimal_profile_lift(const fpg_prior* p, int k,
                                            fpg_channel** out);
FPG_API fpg_status fpg_normalized_payoff(double w, const fpg_channel* c, double* value);

/* ---- oracle ------------------------------------------------------------ */

FPG_API fpg_status fpg_grid_minimax(int k, fpg_decoder d, int w_points, int p_points,
                                    double* value);
/* max relative error of analytic vs central-difference gradients over
 * `cases` random (w, channel, k <= 10) triples */
FPG_API fpg_status fpg_oracle_gradient_check(unsigned seed, int cases,
                                             double* max_rel_err);
/* Lemma-4 style integral under the prior by two independent schemes */
FPG_API fpg_status fpg_oracle_dual_quadrature(const fpg_prior* p, double* gauss_jacobi,
                                              double* tanh_sinh, double* discrepancy);

#ifdef __cplusplus
}
#endif

#endif /* FPGAME_FPGAME_H */
