#ifndef FPGAME_PAYOFF_HPP
#define FPGAME_PAYOFF_HPP

#include <optional>
#include <span>
#include <vector>

#include "fpgame/core.hpp"
#include "fpgame/quadrature.hpp"

namespace fpg {

/// g_k(w) = alpha(w)' p, the Bernstein polynomial of the channel.
/// Exactly 0 at w=0 and 1 at w=1 under marking.
double response_curve(const CollusionChannel& c, double w);

/// g_k'(w) by exact differentiation of the Bernstein basis
/// (degree-reduction identity), not numerical differencing.
double response_curve_derivative(const CollusionChannel& c, double w);

struct PayoffEvaluation {
    double value = 0.0;
    double w = 0.0;
    DecoderKind decoder = DecoderKind::Joint;
    /// Full-coordinate gradient dI/dp_z, z = 0..k; entries at z=0 and z=k
    /// are 0 (pinned by marking, never optimized).
    std::optional<std::vector<double>> gradient_p;
    /// Set when some interior p_z sits exactly on {0,1}: the value is exact
    /// but the true gradient is unbounded there (reported entries are
    /// evaluated with p_z clamped to [1e-12, 1-1e-12]).
    bool gradient_unbounded = false;
};

PayoffEvaluation joint_payoff(double w, const CollusionChannel& c, bool want_gradient = true);
PayoffEvaluation simple_payoff(double w, const CollusionChannel& c, bool want_gradient = true);
PayoffEvaluation payoff(double w, const CollusionChannel& c, DecoderKind d,
                        bool want_gradient = true);

/// Value-only fast path.
double payoff_value(double w, const CollusionChannel& c, DecoderKind d);

/// Joint payoff in its KL representation (1/k) sum alpha_z d(p_z || alpha'p);
/// agrees with the entropy form to 1e-10 and exists for cross-checking.
double joint_payoff_kl_form(double w, const CollusionChannel& c);

/// Analytic dI/dw, used by the saddle certificates.
double payoff_w_derivative(double w, const CollusionChannel& c, DecoderKind d);

double expected_payoff(const FiniteSpectrumPrior& prior, const CollusionChannel& c,
                       DecoderKind d);

/// Quadrature with node doubling (96, 192, ...) until two levels agree
/// within 1e-8; throws on non-convergence.
double expected_payoff(const ContinuousPrior& prior, const CollusionChannel& c,
                       DecoderKind d);

/// Fixed-node expected-payoff evaluator used inside the solvers: kernels at
/// the nodes are precomputed once, value/gradient evaluations are then O(k)
/// per node. Immutable after construction.
class ExpectedPayoff {
public:
    ExpectedPayoff(int k, DecoderKind d, std::vector<double> nodes,
                   std::vector<double> weights);

    static ExpectedPayoff for_prior(const FiniteSpectrumPrior& prior, int k, DecoderKind d);
    static ExpectedPayoff for_prior(const ContinuousPrior& prior, int k, DecoderKind d,
                                    int quad_nodes);

    int k() const { return k_; }
    DecoderKind decoder() const { return decoder_; }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }

    double value(std::span<const double> p) const;
    /// Accumulates the full-coordinate expected gradient into grad (size k+1).
    double value_and_gradient(std::span<const double> p, std::span<double> grad) const;
    /// Payoff at a single node index (used by mass reoptimization).
    double node_value(size_t node, std::span<const double> p) const;

private:
    int k_;
    DecoderKind decoder_;
    std::vector<double> nodes_, weights_;
    std::vector<KernelTriple> kernels_;
};

}  // namespace fpg

#endif
