#include "fpgame/payoff.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fpg {

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kGradClamp = 1e-12;  // gradient-only regularization of interior p_z

double clamp01(double x) { return std::min(1.0 - kGradClamp, std::max(kGradClamp, x)); }

// h'(x) = log2((1-x)/x)
double entropy_derivative(double x) { return std::log2((1.0 - x) / x); }

struct SimpleParts {
    double a, b, m;  // alpha1'p, alpha0'p, alpha'p
};

SimpleParts simple_parts(const KernelTriple& t, std::span<const double> p) {
    SimpleParts s{0.0, 0.0, 0.0};
    for (int z = 0; z <= t.k; ++z) {
        double pz = p[static_cast<size_t>(z)];
        s.a += t.alpha1[static_cast<size_t>(z)] * pz;
        s.b += t.alpha0[static_cast<size_t>(z)] * pz;
        s.m += t.alpha[static_cast<size_t>(z)] * pz;
    }
    return s;
}

double joint_value_from_kernels(const KernelTriple& t, std::span<const double> p) {
    double m = 0.0, hsum = 0.0;
    for (int z = 0; z <= t.k; ++z) {
        double az = t.alpha[static_cast<size_t>(z)];
        if (az == 0.0) continue;
        double pz = p[static_cast<size_t>(z)];
        m += az * pz;
        hsum += az * binary_entropy(pz);
    }
    return (binary_entropy(std::min(1.0, std::max(0.0, m))) - hsum) / t.k;
}

double simple_value_from_kernels(const KernelTriple& t, double w, std::span<const double> p) {
    if (w == 0.0 || w == 1.0) return 0.0;
    SimpleParts s = simple_parts(t, p);
    // rounding in the dot products may land a hair outside [0,1]
    double a = std::min(1.0, std::max(0.0, s.a));
    double b = std::min(1.0, std::max(0.0, s.b));
    double m = std::min(1.0, std::max(0.0, s.m));
    if (m <= 0.0 || m >= 1.0) return 0.0;  // degenerate only when both laws collapse
    return w * kl_bernoulli(a, m) + (1.0 - w) * kl_bernoulli(b, m);
}

// Accumulates the full-coordinate gradient of the single-node payoff,
// scaled by `scale`, into grad. Returns true when some interior coordinate
// sits on the boundary (gradient clamped there).
bool joint_gradient_from_kernels(const KernelTriple& t, std::span<const double> p,
                                 double scale, std::span<double> grad) {
    double m = 0.0;
    for (int z = 0; z <= t.k; ++z) m += t.alpha[static_cast<size_t>(z)] * p[static_cast<size_t>(z)];
    bool unbounded = false;
    double hm = entropy_derivative(clamp01(m));
    for (int z = 1; z < t.k; ++z) {
        double pz = p[static_cast<size_t>(z)];
        if (pz <= 0.0 || pz >= 1.0) unbounded = true;
        double g = t.alpha[static_cast<size_t>(z)] / t.k * (hm - entropy_derivative(clamp01(pz)));
        grad[static_cast<size_t>(z)] += scale * g;
    }
    return unbounded;
}

bool simple_gradient_from_kernels(const KernelTriple& t, double w, std::span<const double> p,
                                  double scale, std::span<double> grad) {
    if (w == 0.0 || w == 1.0) return false;  // payoff identically 0 in p
    SimpleParts s = simple_parts(t, p);
    double a = clamp01(s.a), b = clamp01(s.b), m = clamp01(s.m);
    bool unbounded = (s.a != a) || (s.b != b) || (s.m != m);
    double dra = kl_bernoulli_dr(a, m);
    double drb = kl_bernoulli_dr(b, m);
    double dsm = w * kl_bernoulli_ds(a, m) + (1.0 - w) * kl_bernoulli_ds(b, m);
    for (int z = 1; z < t.k; ++z) {
        double g = w * dra * t.alpha1[static_cast<size_t>(z)] +
                   (1.0 - w) * drb * t.alpha0[static_cast<size_t>(z)] +
                   dsm * t.alpha[static_cast<size_t>(z)];
        grad[static_cast<size_t>(z)] += scale * g;
    }
    return unbounded;
}

void check_inputs(double w, const CollusionChannel& c) {
    if (!(w >= 0.0 && w <= 1.0)) throw std::domain_error("payoff: w outside [0,1]");
    if (c.k() < 2) throw std::domain_error("payoff: invalid channel");
}

}  // namespace

double response_curve(const CollusionChannel& c, double w) {
    check_inputs(w, c);
    if (w == 0.0) return c[0];
    if (w == 1.0) return c[c.k()];
    std::vector<double> a = binomial_pmf(c.k(), w);
    double g = 0.0;
    for (int z = 0; z <= c.k(); ++z) g += a[static_cast<size_t>(z)] * c[z];
    return g;
}

double response_curve_derivative(const CollusionChannel& c, double w) {
    check_inputs(w, c);
    int k = c.k();
    std::vector<double> base = binomial_pmf(k - 1, w);
    double d = 0.0;
    for (int j = 0; j <= k - 1; ++j)
        d += base[static_cast<size_t>(j)] * (c[j + 1] - c[j]);
    return k * d;
}

PayoffEvaluation joint_payoff(double w, const CollusionChannel& c, bool want_gradient) {
    check_inputs(w, c);
    KernelTriple t = kernels(c.k(), w);
    PayoffEvaluation e;
    e.w = w;
    e.decoder = DecoderKind::Joint;
    e.value = joint_value_from_kernels(t, c.probs());
    if (want_gradient) {
        std::vector<double> grad(static_cast<size_t>(c.k()) + 1, 0.0);
        e.gradient_unbounded = joint_gradient_from_kernels(t, c.probs(), 1.0, grad);
        e.gradient_p = std::move(grad);
    }
    return e;
}

PayoffEvaluation simple_payoff(double w, const CollusionChannel& c, bool want_gradient) {
    check_inputs(w, c);
    KernelTriple t = kernels(c.k(), w);
    PayoffEvaluation e;
    e.w = w;
    e.decoder = DecoderKind::Simple;
    e.value = simple_value_from_kernels(t, w, c.probs());
    if (want_gradient) {
        std::vector<double> grad(static_cast<size_t>(c.k()) + 1, 0.0);
        e.gradient_unbounded = simple_gradient_from_kernels(t, w, c.probs(), 1.0, grad);
        e.gradient_p = std::move(grad);
    }
    return e;
}

PayoffEvaluation payoff(double w, const CollusionChannel& c, DecoderKind d, bool want_gradient) {
    return d == DecoderKind::Joint ? joint_payoff(w, c, want_gradient)
                                   : simple_payoff(w, c, want_gradient);
}

double payoff_value(double w, const CollusionChannel& c, DecoderKind d) {
    check_inputs(w, c);
    KernelTriple t = kernels(c.k(), w);
    return d == DecoderKind::Joint ? joint_value_from_kernels(t, c.probs())
                                   : simple_value_from_kernels(t, w, c.probs());
}

double joint_payoff_kl_form(double w, const CollusionChannel& c) {
    check_inputs(w, c);
    KernelTriple t = kernels(c.k(), w);
    double m = 0.0;
    for (int z = 0; z <= t.k; ++z) m += t.alpha[static_cast<size_t>(z)] * c[z];
    if (m <= 0.0 || m >= 1.0) {
        // Z degenerate (w on the boundary): both forms are exactly 0.
        return 0.0;
    }
    double s = 0.0;
    for (int z = 0; z <= t.k; ++z) {
        double az = t.alpha[static_cast<size_t>(z)];
        if (az == 0.0) continue;
        s += az * kl_bernoulli(c[z], m);
    }
    return s / t.k;
}

double payoff_w_derivative(double w, const CollusionChannel& c, DecoderKind d) {
    check_inputs(w, c);
    int k = c.k();
    std::vector<double> base = binomial_pmf(k - 1, w);  // degree k-1 basis
    if (d == DecoderKind::Joint) {
        double m = response_curve(c, w);
        double dm = 0.0, dh = 0.0;
        for (int j = 0; j <= k - 1; ++j) {
            double bj = base[static_cast<size_t>(j)];
            dm += bj * (c[j + 1] - c[j]);
            dh += bj * (binary_entropy(c[j + 1]) - binary_entropy(c[j]));
        }
        return (entropy_derivative(clamp01(m)) * k * dm - k * dh) / k;
    }
    // simple: I = w d(a||m) + (1-w) d(b||m)
    KernelTriple t = kernels(k, w);
    SimpleParts s = simple_parts(t, c.probs());
    double a = clamp01(s.a), b = clamp01(s.b), m = clamp01(s.m);
    double da = 0.0, db = 0.0, dm = 0.0;
    for (int j = 0; j <= k - 1; ++j) {
        double bj = base[static_cast<size_t>(j)];
        dm += bj * (c[j + 1] - c[j]);
    }
    dm *= k;
    if (k >= 2) {
        std::vector<double> base2 = binomial_pmf(k - 2, w);
        for (int j = 0; j <= k - 2; ++j) {
            double bj = base2[static_cast<size_t>(j)];
            da += bj * (c[j + 2] - c[j + 1]);
            db += bj * (c[j + 1] - c[j]);
        }
        da *= (k - 1);
        db *= (k - 1);
    }
    return kl_bernoulli(a, m) - kl_bernoulli(b, m) +
           w * (kl_bernoulli_dr(a, m) * da + kl_bernoulli_ds(a, m) * dm) +
           (1.0 - w) * (kl_bernoulli_dr(b, m) * db + kl_bernoulli_ds(b, m) * dm);
}

double expected_payoff(const FiniteSpectrumPrior& prior, const CollusionChannel& c,
                       DecoderKind d) {
    double v = 0.0;
    for (size_t i = 0; i < prior.size(); ++i)
        v += prior.masses()[i] * payoff_value(prior.support()[i], c, d);
    return v;
}

double expected_payoff(const ContinuousPrior& prior, const CollusionChannel& c,
                       DecoderKind d) {
    int n = 96;
    QuadratureRule rule = build_quadrature(prior, n);
    double prev = rule.integrate([&](double w) { return payoff_value(w, c, d); });
    for (int level = 0; level < 5; ++level) {
        n *= 2;
        rule = build_quadrature(prior, n);
        double cur = rule.integrate([&](double w) { return payoff_value(w, c, d); });
        if (std::abs(cur - prev) <= 1e-8) return cur;
        prev = cur;
    }
    throw std::runtime_error("expected_payoff: quadrature did not converge to 1e-8");
}

ExpectedPayoff::ExpectedPayoff(int k, DecoderKind d, std::vector<double> nodes,
                               std::vector<double> weights)
    : k_(k), decoder_(d), nodes_(std::move(nodes)), weights_(std::move(weights)) {
    if (nodes_.size() != weights_.size() || nodes_.empty())
        throw std::invalid_argument("ExpectedPayoff: node/weight mismatch");
    kernels_.reserve(nodes_.size());
    for (double w : nodes_) kernels_.push_back(kernels(k_, w));
}

ExpectedPayoff ExpectedPayoff::for_prior(const FiniteSpectrumPrior& prior, int k,
                                         DecoderKind d) {
    return ExpectedPayoff(k, d, prior.support(), prior.masses());
}

ExpectedPayoff ExpectedPayoff::for_prior(const ContinuousPrior& prior, int k, DecoderKind d,
                                         int quad_nodes) {
    QuadratureRule rule = build_quadrature(prior, quad_nodes);
    return ExpectedPayoff(k, d, rule.nodes, rule.weights);
}

double ExpectedPayoff::value(std::span<const double> p) const {
    double v = 0.0;
    for (size_t i = 0; i < nodes_.size(); ++i) {
        v += weights_[i] * (decoder_ == DecoderKind::Joint
                                ? joint_value_from_kernels(kernels_[i], p)
                                : simple_value_from_kernels(kernels_[i], nodes_[i], p));
    }
    return v;
}

double ExpectedPayoff::value_and_gradient(std::span<const double> p,
                                          std::span<double> grad) const {
    std::fill(grad.begin(), grad.end(), 0.0);
    double v = 0.0;
    for (size_t i = 0; i < nodes_.size(); ++i) {
        if (decoder_ == DecoderKind::Joint) {
            v += weights_[i] * joint_value_from_kernels(kernels_[i], p);
            joint_gradient_from_kernels(kernels_[i], p, weights_[i], grad);
        } else {
            v += weights_[i] * simple_value_from_kernels(kernels_[i], nodes_[i], p);
            simple_gradient_from_kernels(kernels_[i], nodes_[i], p, weights_[i], grad);
        }
    }
    return v;
}

double ExpectedPayoff::node_value(size_t node, std::span<const double> p) const {
    return decoder_ == DecoderKind::Joint
               ? joint_value_from_kernels(kernels_[node], p)
               : simple_value_from_kernels(kernels_[node], nodes_[node], p);
}

}  // namespace fpg
