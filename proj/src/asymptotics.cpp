#include "fpgame/asymptotics.hpp"

#include <cmath>
#include <stdexcept>

#include "fpgame/quadrature.hpp"

namespace fpg {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kLn2 = 0.6931471805599453;

void check_profile_bounds(double gv, double w) {
    if (!(gv >= 0.0 && gv <= 1.0))
        throw std::domain_error("profile value outside [0,1] at w=" + std::to_string(w));
}

}  // namespace

ChannelProfile ChannelProfile::identity() {
    return from_functions([](double w) { return w; }, [](double) { return 1.0; },
                          [](double) { return 0.0; });
}

ChannelProfile ChannelProfile::from_function(std::function<double(double)> g) {
    ChannelProfile p;
    p.g = g;
    const double h = 1e-5;
    p.g_prime = [g, h](double w) {
        double lo = std::max(0.0, w - h), hi = std::min(1.0, w + h);
        return (g(hi) - g(lo)) / (hi - lo);
    };
    p.g_double_prime = [g, h](double w) {
        // Richardson-extrapolated second difference
        double h2 = 2.0 * h;
        auto second = [&](double step) {
            return (g(w + step) - 2.0 * g(w) + g(w - step)) / (step * step);
        };
        if (w - h2 < 0.0 || w + h2 > 1.0) {
            double s = std::min({h, w, 1.0 - w});
            return s > 0.0 ? second(s) : 0.0;
        }
        return (4.0 * second(h) - second(h2)) / 3.0;
    };
    return p;
}

ChannelProfile ChannelProfile::from_functions(std::function<double(double)> g,
                                              std::function<double(double)> g1,
                                              std::function<double(double)> g2) {
    ChannelProfile p;
    p.g = std::move(g);
    p.g_prime = std::move(g1);
    p.g_double_prime = std::move(g2);
    return p;
}

CollusionChannel lift_profile(const ChannelProfile& profile, int k) {
    if (!profile.g) throw std::invalid_argument("lift_profile: profile has no g");
    std::vector<double> p(static_cast<size_t>(k) + 1);
    for (int z = 0; z <= k; ++z) {
        double gv = profile.g(static_cast<double>(z) / k);
        check_profile_bounds(gv, static_cast<double>(z) / k);
        p[static_cast<size_t>(z)] = gv;
    }
    p[0] = 0.0;  // marking holds exactly
    p[static_cast<size_t>(k)] = 1.0;
    return CollusionChannel(k, std::move(p));
}

double angle_transform(const ChannelProfile& profile, double w) {
    if (!(w >= 0.0 && w <= 1.0)) throw std::domain_error("angle_transform: w outside [0,1]");
    double gv = profile.g(w);
    check_profile_bounds(gv, w);
    return std::acos(1.0 - 2.0 * gv);
}

double local_payoff_J(const ChannelProfile& profile, double w) {
    if (!(w > 0.0 && w < 1.0)) throw std::domain_error("local_payoff_J: w must be interior");
    double gv = profile.g(w);
    check_profile_bounds(gv, w);
    if (gv == 0.0 || gv == 1.0)
        throw std::domain_error("local_payoff_J: g(w) on {0,1} at interior w");
    double gp = profile.g_prime(w);
    return w * (1.0 - w) * gp * gp / (gv * (1.0 - gv));
}

PhiTable::PhiTable(const ContinuousPrior& prior, int nodes)
    : prior_(prior), exp0_(prior.exponent_at_0()), exp1_(prior.exponent_at_1()) {
    if (exp0_ >= 0.0 || exp1_ >= 0.0)
        throw std::domain_error(
            "fisher integral diverges: pdf must blow up at both endpoints "
            "(Beta(theta) requires theta < 1)");
    // integrand 1/(f(v)v(1-v)) ~ v^{-(exp0+1)} at 0 and (1-v)^{-(exp1+1)} at 1
    double b0 = -(exp0_ + 1.0);  // exponent of v at the left endpoint
    double a1 = -(exp1_ + 1.0);  // exponent of (1-v) at the right endpoint
    left_rule_ = gauss_jacobi(nodes, 0.0, b0);
    right_rule_ = gauss_jacobi(nodes, a1, 0.0);
    // full integral: both singularities absorbed at once
    JacobiRule full = gauss_jacobi(nodes, a1, b0);
    double s = 0.0;
    for (size_t i = 0; i < full.nodes.size(); ++i) {
        double v = 0.5 * (1.0 + full.nodes[i]);
        double omv = 0.5 * (1.0 - full.nodes[i]);
        // residual after dividing out v^{b0} (1-v)^{a1}; finite at both ends
        double smooth = 1.0 /
                        (prior_.pdf(v, omv) * std::pow(v, 1.0 + b0) * std::pow(omv, 1.0 + a1));
        s += full.weights[i] * smooth;
    }
    total_ = s * std::pow(0.5, 1.0 + a1 + b0);  // affine map [-1,1] -> [0,1]
}

double PhiTable::head(double w) const {
    // int_0^w v^{b0} * [v^{-b0} / (f v (1-v))] dv via left-absorbing rule on [0,w]
    double b0 = -(exp0_ + 1.0);
    double s = 0.0;
    for (size_t i = 0; i < left_rule_.nodes.size(); ++i) {
        double x = left_rule_.nodes[i];
        double v = 0.5 * w * (1.0 + x);
        double smooth = 1.0 / (prior_.pdf(v, 1.0 - v) * std::pow(v, 1.0 + b0) * (1.0 - v));
        s += left_rule_.weights[i] * smooth;
    }
    return s * std::pow(0.5 * w, 1.0 + b0);
}

double PhiTable::tail(double w) const {
    double a1 = -(exp1_ + 1.0);
    double len = 1.0 - w;
    double s = 0.0;
    for (size_t i = 0; i < right_rule_.nodes.size(); ++i) {
        double x = right_rule_.nodes[i];
        double v = w + 0.5 * len * (1.0 + x);
        double omv = 0.5 * len * (1.0 - x);
        double smooth = 1.0 / (prior_.pdf(v, omv) * v * std::pow(omv, 1.0 + a1));
        s += right_rule_.weights[i] * smooth;
    }
    return s * std::pow(0.5 * len, 1.0 + a1);
}

double PhiTable::at(double w) const {
    if (w <= 0.0) return 0.0;
    if (w >= 1.0) return total_;
    return w <= 0.5 ? head(w) : total_ - tail(w);
}

double fisher_integral(const ContinuousPrior& prior) {
    return PhiTable(prior).total();
}

ChannelProfile optimal_profile(const ContinuousPrior& prior) {
    auto table = std::make_shared<PhiTable>(prior);
    double phi1 = table->total();
    ContinuousPrior p = prior;
    auto phi_ratio = [table, phi1](double w) { return table->at(w) / phi1; };
    auto g = [phi_ratio](double w) {
        if (w <= 0.0) return 0.0;
        if (w >= 1.0) return 1.0;
        double r = std::min(1.0, std::max(0.0, phi_ratio(w)));
        return 0.5 * (1.0 - std::cos(kPi * r));
    };
    // Phi'(w) = 1/(f(w)w(1-w)) is known analytically, so g' and g'' are too
    // (Phi'' analytic for the Beta family, central difference otherwise).
    auto dphi = [p](double w) { return 1.0 / (p.pdf(w, 1.0 - w) * w * (1.0 - w)); };
    std::function<double(double)> ddphi;
    if (p.kind() == ContinuousPrior::Kind::CustomPdf) {
        const double fd = 1e-6;
        ddphi = [dphi, fd](double w) {
            double hi = std::min(1.0 - 1e-12, w + fd);
            double lo = std::max(1e-12, w - fd);
            return (dphi(hi) - dphi(lo)) / (hi - lo);
        };
    } else {
        double theta = p.theta();
        double logB = log_beta_symmetric(theta);
        ddphi = [theta, logB](double w) {
            // d/dw B [w(1-w)]^{-theta} = -theta B [w(1-w)]^{-theta-1} (1-2w)
            return -theta * std::exp(logB - (theta + 1.0) * std::log(w * (1.0 - w))) *
                   (1.0 - 2.0 * w);
        };
    }
    auto g1 = [phi_ratio, dphi, phi1](double w) {
        return 0.5 * std::sin(kPi * phi_ratio(w)) * kPi * dphi(w) / phi1;
    };
    auto g2 = [phi_ratio, dphi, ddphi, phi1](double w) {
        double r = phi_ratio(w);
        double c = kPi / phi1;
        double d = dphi(w);
        return 0.5 * (std::cos(kPi * r) * c * c * d * d + std::sin(kPi * r) * c * ddphi(w));
    };
    return ChannelProfile::from_functions(g, g1, g2);
}

double asymptotic_capacity(const ContinuousPrior& prior, int k) {
    if (k < 2) throw std::domain_error("asymptotic_capacity: k must be >= 2");
    double fi = fisher_integral(prior);
    return kPi * kPi / (static_cast<double>(k) * k * 2.0 * kLn2 * fi);
}

double normalized_payoff(double w, const CollusionChannel& channel) {
    double k = channel.k();
    return k * k * 2.0 * kLn2 * payoff_value(w, channel, DecoderKind::Joint);
}

double bernstein_expansion_check(const ChannelProfile& profile, int k, double w) {
    if (!(w > 0.0 && w < 1.0))
        throw std::domain_error("bernstein_expansion_check: w must be interior");
    CollusionChannel lifted = lift_profile(profile, k);
    double gk = response_curve(lifted, w);
    double approx = profile.g(w) + w * (1.0 - w) * profile.g_double_prime(w) / (2.0 * k);
    return k * std::abs(gk - approx);
}

AsymptoticReport asymptotic_report(const ContinuousPrior& prior, int k) {
    AsymptoticReport r;
    r.fisher_integral = fisher_integral(prior);
    r.asymptotic_capacity = asymptotic_capacity(prior, k);
    r.g_opt = optimal_profile(prior);
    ChannelProfile gopt = r.g_opt;
    r.J_opt = [gopt](double w) { return local_payoff_J(gopt, w); };
    return r;
}

}  // namespace fpg
