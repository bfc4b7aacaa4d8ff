#ifndef FPGAME_ASYMPTOTICS_HPP
#define FPGAME_ASYMPTOTICS_HPP

#include <functional>
#include <memory>

#include "fpgame/core.hpp"
#include "fpgame/payoff.hpp"

namespace fpg {

/// A twice-differentiable attack profile g on [0,1] with g(0)=0, g(1)=1.
/// Derivative evaluators are analytic when the construction knows them,
/// otherwise central differences (step 1e-5, Richardson for g'').
struct ChannelProfile {
    std::function<double(double)> g;
    std::function<double(double)> g_prime;
    std::function<double(double)> g_double_prime;

    static ChannelProfile identity();
    static ChannelProfile from_function(std::function<double(double)> g);
    static ChannelProfile from_functions(std::function<double(double)> g,
                                         std::function<double(double)> g1,
                                         std::function<double(double)> g2);
};

/// p_z = g(z/k); marking holds exactly, symmetry iff g(w) = 1 - g(1-w).
CollusionChannel lift_profile(const ChannelProfile& profile, int k);

/// G(w) = arccos(1 - 2 g(w)), the angle reparameterization; G(0)=0, G(1)=pi.
double angle_transform(const ChannelProfile& profile, double w);

/// J(w) = w(1-w) [G'(w)]^2 = w(1-w) g'(w)^2 / (g(w)(1-g(w))).
double local_payoff_J(const ChannelProfile& profile, double w);

/// Cumulative integral Phi(w) = int_0^w dv / (f(v) v (1-v)) for a prior
/// whose pdf diverges at the endpoints (exponents in (-1, 0)). Queries are
/// evaluated by endpoint-absorbing Gauss-Jacobi rules on [0,w] or [w,1];
/// total() is the Fisher-style integral of Lemma-4 type, >= pi^2.
class PhiTable {
public:
    explicit PhiTable(const ContinuousPrior& prior, int nodes = 64);
    double total() const { return total_; }
    double at(double w) const;

private:
    double head(double w) const;  // int_0^w, left-absorbing
    double tail(double w) const;  // int_w^1, right-absorbing
    ContinuousPrior prior_;
    JacobiRule left_rule_, right_rule_;  // reference rules on [-1,1]
    double exp0_, exp1_;
    double total_ = 0.0;
};

/// int_0^1 dw / (f_W(w) w (1-w)); throws when divergent (pdf endpoint
/// exponents >= 0, e.g. Beta(theta) with theta >= 1).
double fisher_integral(const ContinuousPrior& prior);

/// g_opt(w) = (1/2)[1 - cos(pi Phi(w) / Phi(1))]; the minimizer of E[J].
ChannelProfile optimal_profile(const ContinuousPrior& prior);

/// pi^2 / (k^2 2 ln2 fisher_integral); equals 1/(k^2 2 ln2) for arcsine.
double asymptotic_capacity(const ContinuousPrior& prior, int k);

/// k^2 2 ln2 * I_joint(w, channel).
double normalized_payoff(double w, const CollusionChannel& channel);

/// k |g_k(w) - g(w) - w(1-w) g''(w)/(2k)|; tends to 0 for smooth g.
double bernstein_expansion_check(const ChannelProfile& profile, int k, double w);

struct AsymptoticReport {
    double fisher_integral = 0.0;
    double asymptotic_capacity = 0.0;
    ChannelProfile g_opt;
    std::function<double(double)> J_opt;
};

AsymptoticReport asymptotic_report(const ContinuousPrior& prior, int k);

}  // namespace fpg

#endif
