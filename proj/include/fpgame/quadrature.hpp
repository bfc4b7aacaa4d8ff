#ifndef FPGAME_QUADRATURE_HPP
#define FPGAME_QUADRATURE_HPP

#include <functional>
#include <utility>
#include <vector>

#include "fpgame/core.hpp"

namespace fpg {

/// Integrand over (0,1); receives both w and 1-w so endpoint-singular
/// factors can be evaluated without cancellation.
using Integrand = std::function<double(double, double)>;

/// Gauss-Jacobi nodes/weights on [-1,1] for weight (1-x)^a (1+x)^b, a,b > -1.
/// Newton iteration on the three-term recurrence; nodes ascending.
struct JacobiRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
JacobiRule gauss_jacobi(int n, double a, double b);

/// Quadrature for expectations against a continuous prior: nodes in (0,1),
/// weights absorb the pdf, so E[f] = sum_i weights[i] * f(nodes[i]).
struct QuadratureRule {
    enum class Scheme { GaussJacobi, TanhSinh, CompositeSimpson };
    Scheme scheme = Scheme::GaussJacobi;
    double jacobi_a = 0.0, jacobi_b = 0.0;  // endpoint exponents when GaussJacobi
    std::vector<double> nodes;
    std::vector<double> weights;

    double integrate(const std::function<double(double)>& f) const;
    double integrate2(const Integrand& f) const;  // f(w, 1-w) variant
};

/// Builds the expectation rule for a prior: Gauss-Jacobi with exponents
/// (theta-1, theta-1) for the Beta family (arcsine included), tanh-sinh
/// node/weight table for custom pdfs. n >= 8.
QuadratureRule build_quadrature(const ContinuousPrior& prior, int n);

/// Self-terminating tanh-sinh integration of f over (0,1).
/// abs_tol is the level-to-level agreement target; achieved_error reports
/// the final level difference when non-null.
double tanh_sinh(const Integrand& f, double abs_tol = 1e-12,
                 double* achieved_error = nullptr);

/// Adaptive Simpson on [a,b] to absolute tolerance; max_depth bounds the
/// endpoint refinement for integrable singularities.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol = 1e-11, int max_depth = 60);

}  // namespace fpg

#endif
