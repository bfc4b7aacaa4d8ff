#include "fpgame/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace fpg {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Jacobi polynomial P_n^{(a,b)}(x) and derivative via the three-term
// recurrence; returns {P_n, P_n'}.
std::pair<double, double> jacobi_poly(int n, double a, double b, double x) {
    if (n == 0) return {1.0, 0.0};
    double pm1 = 1.0;
    double p = 0.5 * (a - b + (a + b + 2.0) * x);
    for (int m = 2; m <= n; ++m) {
        double c1 = 2.0 * m * (m + a + b) * (2.0 * m + a + b - 2.0);
        double c2 = (2.0 * m + a + b - 1.0) * (a * a - b * b);
        double c3 = (2.0 * m + a + b - 1.0) * (2.0 * m + a + b) * (2.0 * m + a + b - 2.0);
        double c4 = 2.0 * (m + a - 1.0) * (m + b - 1.0) * (2.0 * m + a + b);
        double next = ((c2 + c3 * x) * p - c4 * pm1) / c1;
        pm1 = p;
        p = next;
    }
    // P_n' from the lowering identity on the last pair
    double deriv = (n * (a - b - (2.0 * n + a + b) * x) * p +
                    2.0 * (n + a) * (n + b) * pm1) /
                   ((2.0 * n + a + b) * (1.0 - x * x));
    return {p, deriv};
}

}  // namespace

JacobiRule gauss_jacobi(int n, double a, double b) {
    if (n < 1) throw std::invalid_argument("gauss_jacobi: n must be >= 1");
    if (!(a > -1.0) || !(b > -1.0))
        throw std::invalid_argument("gauss_jacobi: exponents must exceed -1");
    JacobiRule rule;
    rule.nodes.resize(static_cast<size_t>(n));
    rule.weights.resize(static_cast<size_t>(n));

    double lw = std::lgamma(n + a + 1.0) + std::lgamma(n + b + 1.0) -
                std::lgamma(n + a + b + 1.0) - std::lgamma(n + 2.0);
    double weight_factor = -(2.0 * n + a + b + 2.0) / (n + a + b + 1.0) *
                           std::exp(lw + (a + b) * std::log(2.0));

    for (int i = 1; i <= n; ++i) {
        // descending Chebyshev-like initial guess
        double x = std::cos(kPi * (0.5 * a + i - 0.25) / (0.5 * (1.0 + a + b) + n));
        for (int it = 0; it < 100; ++it) {
            auto [pn, dpn] = jacobi_poly(n, a, b, x);
            double dx = pn / dpn;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        auto [pn, dpn] = jacobi_poly(n, a, b, x);
        (void)pn;
        double pn1 = jacobi_poly(n + 1, a, b, x).first;
        rule.nodes[static_cast<size_t>(n - i)] = x;
        rule.weights[static_cast<size_t>(n - i)] = weight_factor / (dpn * pn1);
    }
    return rule;
}

double QuadratureRule::integrate(const std::function<double(double)>& f) const {
    double s = 0.0;
    for (size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
}

double QuadratureRule::integrate2(const Integrand& f) const {
    double s = 0.0;
    for (size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i], 1.0 - nodes[i]);
    return s;
}

QuadratureRule build_quadrature(const ContinuousPrior& prior, int n) {
    if (n < 8) throw std::invalid_argument("build_quadrature: n must be >= 8");
    QuadratureRule rule;
    if (prior.kind() == ContinuousPrior::Kind::CustomPdf) {
        // tanh-sinh node table: fixed level chosen so the trailing terms
        // underflow; weights absorb the pdf pointwise.
        rule.scheme = QuadratureRule::Scheme::TanhSinh;
        double h = 3.0 / n;
        for (int j = -n; j <= n; ++j) {
            double t = j * h;
            double u = 0.5 * kPi * std::sinh(t);
            double w = 1.0 / (1.0 + std::exp(-2.0 * u));
            double omw = 1.0 / (1.0 + std::exp(2.0 * u));
            double dwdt = 0.5 * kPi * std::cosh(t) / (2.0 * std::cosh(u) * std::cosh(u));
            if (w <= 0.0 || omw <= 0.0 || dwdt == 0.0) continue;
            rule.nodes.push_back(w);
            rule.weights.push_back(h * dwdt * prior.pdf(w, omw));
        }
        double total = 0.0;
        for (double x : rule.weights) total += x;
        if (std::abs(total - 1.0) > 1e-8)
            throw std::runtime_error("build_quadrature: pdf does not integrate to 1 with given hints");
        return rule;
    }

    // Beta family: Jacobi weight absorbs [w(1-w)]^{theta-1} exactly.
    double theta = prior.theta();
    double e = theta - 1.0;
    JacobiRule base = gauss_jacobi(n, e, e);
    rule.scheme = QuadratureRule::Scheme::GaussJacobi;
    rule.jacobi_a = e;
    rule.jacobi_b = e;
    // map [-1,1] -> [0,1]: the 2^{-(2 theta - 1)} transform factor and the
    // Beta normalization fold into the weights so they sum to 1.
    double scale = std::exp(-(2.0 * theta - 1.0) * std::log(2.0) - log_beta_symmetric(theta));
    rule.nodes.resize(base.nodes.size());
    rule.weights.resize(base.nodes.size());
    for (size_t i = 0; i < base.nodes.size(); ++i) {
        rule.nodes[i] = 0.5 * (1.0 + base.nodes[i]);
        rule.weights[i] = scale * base.weights[i];
    }
    return rule;
}

double tanh_sinh(const Integrand& f, double abs_tol, double* achieved_error) {
    // level 0: h = 1, then halve, reusing prior abscissae
    auto term = [&f](double t) -> double {
        double u = 0.5 * kPi * std::sinh(t);
        double w = 1.0 / (1.0 + std::exp(-2.0 * u));
        double omw = 1.0 / (1.0 + std::exp(2.0 * u));
        double dwdt = 0.5 * kPi * std::cosh(t) / (2.0 * std::cosh(u) * std::cosh(u));
        if (w <= 0.0 || omw <= 0.0 || dwdt < 1e-300) return 0.0;
        double v = f(w, omw) * dwdt;
        return std::isfinite(v) ? v : 0.0;
    };

    double h = 1.0;
    double sum = term(0.0);
    for (int j = 1; j <= 7; ++j) sum += term(j * h) + term(-j * h);
    double prev = sum * h;
    double err = std::abs(prev);
    for (int level = 1; level <= 12; ++level) {
        h *= 0.5;
        double tmax = 7.0;
        double add = 0.0;
        for (double t = h; t <= tmax; t += 2.0 * h) add += term(t) + term(-t);
        double cur = 0.5 * prev + h * add;
        err = std::abs(cur - prev);
        prev = cur;
        if (level >= 3 && err <= abs_tol * std::max(1.0, std::abs(cur))) break;
    }
    if (achieved_error) *achieved_error = err;
    return prev;
}

namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double m, double b,
                   double fa, double fm, double fb, double whole, double tol, int depth) {
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_rec(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_depth) {
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    if (!std::isfinite(fa)) fa = 0.0;  // integrable endpoint singularities
    if (!std::isfinite(fb)) fb = 0.0;
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, m, b, fa, fm, fb, whole, abs_tol, max_depth);
}

}  // namespace fpg
