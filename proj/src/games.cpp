#include "fpgame/games.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace fpg {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kLn2 = 0.6931471805599453;

// golden-section maximization on [lo, hi] to interval width xtol
template <typename F>
std::pair<double, double> golden_max(F&& f, double lo, double hi, double xtol) {
    const double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > xtol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    double x = 0.5 * (a + b);
    return {x, f(x)};
}

template <typename F>
std::pair<double, double> golden_min(F&& f, double lo, double hi, double xtol) {
    auto [x, v] = golden_max([&](double t) { return -f(t); }, lo, hi, xtol);
    return {x, -v};
}

// Free-coordinate channel parameterization. Symmetric mode mirrors
// z <-> k-z and pins p_{k/2} = 1/2; asymmetric mode frees all interior z.
struct ChannelParam {
    int k;
    bool symmetric;
    int dim() const { return symmetric ? (k - 1) / 2 : k - 1; }

    std::vector<double> expand(std::span<const double> q) const {
        std::vector<double> p(static_cast<size_t>(k) + 1, 0.0);
        p[static_cast<size_t>(k)] = 1.0;
        if (symmetric) {
            int m = dim();
            for (int z = 1; z <= m; ++z) {
                p[static_cast<size_t>(z)] = q[static_cast<size_t>(z - 1)];
                p[static_cast<size_t>(k - z)] = 1.0 - q[static_cast<size_t>(z - 1)];
            }
            if (k % 2 == 0) p[static_cast<size_t>(k / 2)] = 0.5;
        } else {
            for (int z = 1; z < k; ++z) p[static_cast<size_t>(z)] = q[static_cast<size_t>(z - 1)];
        }
        return p;
    }

    void fold_gradient(std::span<const double> grad_full, std::span<double> out) const {
        if (symmetric) {
            int m = dim();
            for (int z = 1; z <= m; ++z)
                out[static_cast<size_t>(z - 1)] = grad_full[static_cast<size_t>(z)] -
                                                  grad_full[static_cast<size_t>(k - z)];
        } else {
            for (int z = 1; z < k; ++z) out[static_cast<size_t>(z - 1)] = grad_full[static_cast<size_t>(z)];
        }
    }

    std::vector<double> interleaving_start() const {
        std::vector<double> q(static_cast<size_t>(dim()));
        for (int z = 1; z <= dim(); ++z) q[static_cast<size_t>(z - 1)] = static_cast<double>(z) / k;
        return q;
    }
};

// Euclidean projection onto the probability simplex.
void project_simplex(std::vector<double>& v) {
    size_t n = v.size();
    std::vector<double> u = v;
    std::sort(u.begin(), u.end(), std::greater<double>());
    double css = 0.0, theta = 0.0;
    int rho = -1;
    for (size_t i = 0; i < n; ++i) {
        css += u[i];
        double t = (css - 1.0) / static_cast<double>(i + 1);
        if (u[i] - t > 0.0) {
            rho = static_cast<int>(i);
            theta = t;
        }
    }
    (void)rho;
    for (auto& x : v) x = std::max(0.0, x - theta);
}

}  // namespace

BoundsReport capacity_bounds(int k, DecoderKind d) {
    if (k < 2) throw std::domain_error("capacity_bounds: k must be >= 2");
    BoundsReport r;
    r.k = k;
    r.decoder = d;
    double k2 = static_cast<double>(k) * k;
    r.lower_arcsine = 2.0 / (k2 * kPi * kPi * kLn2);
    r.asymptote = 1.0 / (k2 * 2.0 * kLn2);
    r.upper_interleaving = d == DecoderKind::Joint
                               ? 1.0 / (k2 * kLn2)
                               : 1.0 - binary_entropy(0.5 + 0.5 / k);
    return r;
}

LineSearchResult maximize_over_w(const CollusionChannel& c, DecoderKind d,
                                 std::pair<double, double> domain, int grid) {
    auto [lo, hi] = domain;
    if (!(lo >= 0.0 && hi <= 1.0 && lo < hi))
        throw std::invalid_argument("maximize_over_w: bad domain");
    if (grid < 3) grid = 3;
    double best_w = lo, best_v = -std::numeric_limits<double>::infinity();
    int best_i = 0;
    for (int i = 0; i < grid; ++i) {
        double w = lo + (hi - lo) * i / (grid - 1);
        double v = payoff_value(w, c, d);
        if (v > best_v) {  // strict: ties break toward smallest w
            best_v = v;
            best_w = w;
            best_i = i;
        }
    }
    double a = lo + (hi - lo) * std::max(0, best_i - 1) / (grid - 1);
    double b = lo + (hi - lo) * std::min(grid - 1, best_i + 1) / (grid - 1);
    auto [wr, vr] = golden_max([&](double w) { return payoff_value(w, c, d); }, a, b, 1e-10);
    LineSearchResult r;
    if (vr > best_v) {
        r.w = wr;
        r.value = vr;
    } else {
        r.w = best_w;
        r.value = best_v;
    }
    return r;
}

FwResult minimize_expected(const ExpectedPayoff& payoff, const FwOptions& opts,
                           std::vector<double> warm_free) {
    ChannelParam param{payoff.k(), opts.symmetric};
    int m = param.dim();
    std::vector<double> q =
        warm_free.empty() ? param.interleaving_start() : std::move(warm_free);
    if (static_cast<int>(q.size()) != m)
        throw std::invalid_argument("minimize_expected: warm start dimension mismatch");

    FwResult res;
    if (m == 0) {
        std::vector<double> p = param.expand(q);
        res.value = payoff.value(p);
        res.gap = 0.0;
        res.converged = true;
        res.channel = CollusionChannel(payoff.k(), std::move(p));
        return res;
    }

    std::vector<double> p = param.expand(q);
    std::vector<double> grad_full(static_cast<size_t>(payoff.k()) + 1, 0.0);
    std::vector<double> gfold(static_cast<size_t>(m), 0.0);
    std::vector<double> vertex(static_cast<size_t>(m), 0.0);
    std::vector<double> trial(static_cast<size_t>(m), 0.0);

    double value = 0.0, gap = std::numeric_limits<double>::infinity();
    int it = 0;
    for (; it < opts.max_iterations; ++it) {
        value = payoff.value_and_gradient(p, grad_full);
        param.fold_gradient(grad_full, gfold);
        gap = 0.0;
        for (int i = 0; i < m; ++i) {
            vertex[static_cast<size_t>(i)] = gfold[static_cast<size_t>(i)] > 0.0 ? 0.0 : 1.0;
            gap += gfold[static_cast<size_t>(i)] *
                   (q[static_cast<size_t>(i)] - vertex[static_cast<size_t>(i)]);
        }
        if (opts.record_trace) {
            res.objective_trace.push_back(value);
            res.gap_trace.push_back(gap);
        }
        if (gap <= opts.tol) {
            res.converged = true;
            break;
        }
        auto objective = [&](double gamma) {
            for (int i = 0; i < m; ++i)
                trial[static_cast<size_t>(i)] =
                    q[static_cast<size_t>(i)] +
                    gamma * (vertex[static_cast<size_t>(i)] - q[static_cast<size_t>(i)]);
            return payoff.value(param.expand(trial));
        };
        auto [gamma, gv] = golden_min(objective, 0.0, 1.0, 1e-12);
        (void)gv;
        for (int i = 0; i < m; ++i) {
            double x = q[static_cast<size_t>(i)] +
                       gamma * (vertex[static_cast<size_t>(i)] - q[static_cast<size_t>(i)]);
            q[static_cast<size_t>(i)] = std::min(1.0, std::max(0.0, x));
        }
        p = param.expand(q);
    }
    res.value = payoff.value(p);
    res.gap = gap;
    res.iterations = it;
    res.channel = CollusionChannel(payoff.k(), param.expand(q));
    return res;
}

FwResult minimize_over_channel(const FiniteSpectrumPrior& prior, int k, DecoderKind d,
                               const FwOptions& opts) {
    ExpectedPayoff payoff = ExpectedPayoff::for_prior(prior, k, d);
    return minimize_expected(payoff, opts);
}

FwResult minimize_over_channel(const ContinuousPrior& prior, int k, DecoderKind d,
                               const FwOptions& opts) {
    ExpectedPayoff payoff = ExpectedPayoff::for_prior(prior, k, d, opts.quad_nodes);
    return minimize_expected(payoff, opts);
}

namespace {

// Restricted maximin over mass assignments on a fixed folded support
// (points in [0, 1/2]; each point off 1/2 stands for the symmetric pair).
// Projected supergradient ascent with Polyak steps: the step target is the
// running restricted-minimax certificate min over best-response channels of
// max_i I(w_i, p).
struct RestrictedResult {
    std::vector<double> masses;
    double value = 0.0;              // rigorous maximin certificate (F - gap)
    std::vector<double> channel_q;   // best response, free coordinates
    double upper = 0.0;              // restricted minimax certificate
    int fw_iterations = 0;
    bool converged = false;
};

RestrictedResult solve_restricted_maximin(int k, DecoderKind d,
                                          const std::vector<double>& folded_support,
                                          const SolveOptions& opts,
                                          std::vector<double> warm_masses,
                                          std::vector<double> warm_q,
                                          int mass_steps) {
    size_t n = folded_support.size();
    ChannelParam param{k, true};
    ExpectedPayoff payoff(k, d, folded_support,
                          std::vector<double>(n, 1.0 / static_cast<double>(n)));

    FwOptions fw;
    fw.tol = opts.fw_tol;
    fw.max_iterations = opts.fw_max_iterations;
    fw.symmetric = true;

    std::vector<double> mu = warm_masses.size() == n
                                 ? std::move(warm_masses)
                                 : std::vector<double>(n, 1.0 / static_cast<double>(n));
    project_simplex(mu);

    RestrictedResult best;
    best.value = -std::numeric_limits<double>::infinity();
    best.upper = std::numeric_limits<double>::infinity();
    std::vector<double> q = warm_q;
    std::vector<double> vals(n, 0.0);

    for (int step = 0; step < mass_steps; ++step) {
        ExpectedPayoff obj(k, d, folded_support, mu);
        FwResult inner = minimize_expected(obj, fw, q);
        q = inner.channel.free_coords();
        best.fw_iterations += inner.iterations;
        double lower_cert = inner.value - std::max(0.0, inner.gap);
        if (lower_cert > best.value) {
            best.value = lower_cert;
            best.masses = mu;
            best.channel_q = q;
        }
        const auto& p = inner.channel.probs();
        double vmax = -std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < n; ++i) {
            vals[i] = payoff.node_value(i, p);
            vmax = std::max(vmax, vals[i]);
        }
        best.upper = std::min(best.upper, vmax);
        if (best.upper - best.value <= opts.mass_tol || n == 1) {
            best.converged = true;
            break;
        }
        double gnorm2 = 0.0;
        for (double v : vals) gnorm2 += v * v;
        double num = best.upper - inner.value;
        if (num <= 0.0 || gnorm2 <= 0.0) {
            best.converged = true;
            break;
        }
        double gamma = num / gnorm2;
        for (size_t i = 0; i < n; ++i) mu[i] += gamma * vals[i];
        project_simplex(mu);
    }
    if (best.channel_q.empty()) best.channel_q = q;
    return best;
}

double fold(double w) { return std::min(w, 1.0 - w); }

KktReport make_kkt_report(int k, DecoderKind d, const std::vector<double>& folded_support,
                          const std::vector<double>& masses, const CollusionChannel& channel) {
    KktReport kkt;
    kkt.second_order_ok = true;
    double vmin = std::numeric_limits<double>::infinity();
    double vmax = -std::numeric_limits<double>::infinity();
    for (double w : folded_support) {
        double v = payoff_value(w, channel, d);
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
        double d1 = payoff_w_derivative(w, channel, d);
        kkt.stationarity_w = std::max(kkt.stationarity_w, std::abs(d1));
        double h = 1e-5;
        double lo = std::max(1e-9, w - h), hi = std::min(1.0 - 1e-9, w + h);
        double d2 = (payoff_w_derivative(hi, channel, d) - payoff_w_derivative(lo, channel, d)) /
                    (hi - lo);
        if (!(d2 < 0.0)) kkt.second_order_ok = false;
    }
    kkt.equal_value_spread = vmax - vmin;

    // expected reduced gradient over free coordinates, projected at the box
    ChannelParam param{k, true};
    int m = param.dim();
    if (m > 0) {
        ExpectedPayoff payoff(k, d, folded_support, masses);
        std::vector<double> grad_full(static_cast<size_t>(k) + 1, 0.0);
        payoff.value_and_gradient(channel.probs(), grad_full);
        std::vector<double> gfold(static_cast<size_t>(m), 0.0);
        param.fold_gradient(grad_full, gfold);
        const double edge = 1e-9;
        for (int i = 0; i < m; ++i) {
            double qi = channel[i + 1];
            double g = gfold[static_cast<size_t>(i)];
            double r;
            if (qi <= edge)
                r = std::max(0.0, -g);
            else if (qi >= 1.0 - edge)
                r = std::max(0.0, g);
            else
                r = std::abs(g);
            kkt.stationarity_p = std::max(kkt.stationarity_p, r);
        }
    }
    return kkt;
}

FiniteSpectrumPrior expand_prior(const std::vector<double>& folded_support,
                                 const std::vector<double>& masses) {
    std::vector<std::pair<double, double>> atoms;
    for (size_t i = 0; i < folded_support.size(); ++i) {
        double w = folded_support[i], mu = masses[i];
        if (std::abs(w - 0.5) < 1e-15) {
            atoms.emplace_back(0.5, mu);
        } else {
            atoms.emplace_back(w, 0.5 * mu);
            atoms.emplace_back(1.0 - w, 0.5 * mu);
        }
    }
    std::sort(atoms.begin(), atoms.end());
    std::vector<double> support, mass;
    double total = 0.0;
    for (auto& [w, mu] : atoms) total += mu;
    for (auto& [w, mu] : atoms) {
        support.push_back(w);
        mass.push_back(mu / total);
    }
    return FiniteSpectrumPrior(std::move(support), std::move(mass));
}

// merge folded points within merge_tol and drop masses below the floor
void prune_support(std::vector<double>& support, std::vector<double>& masses,
                   double merge_tol, double mass_floor) {
    std::vector<std::pair<double, double>> pts;
    for (size_t i = 0; i < support.size(); ++i)
        if (masses[i] > mass_floor) pts.emplace_back(support[i], masses[i]);
    if (pts.empty()) {  // keep the heaviest point rather than an empty game
        size_t imax = 0;
        for (size_t i = 1; i < masses.size(); ++i)
            if (masses[i] > masses[imax]) imax = i;
        pts.emplace_back(support[imax], 1.0);
    }
    std::sort(pts.begin(), pts.end());
    std::vector<std::pair<double, double>> merged;
    for (auto& [w, mu] : pts) {
        if (!merged.empty() && w - merged.back().first <= merge_tol) {
            double tot = merged.back().second + mu;
            merged.back().first = (merged.back().first * merged.back().second + w * mu) / tot;
            merged.back().second = tot;
        } else {
            merged.emplace_back(w, mu);
        }
    }
    // a pair this close to the center is the center
    for (auto& [w, mu] : merged) {
        if (std::abs(w - 0.5) <= merge_tol) w = 0.5;
    }
    double total = 0.0;
    for (auto& [w, mu] : merged) total += mu;
    support.clear();
    masses.clear();
    for (auto& [w, mu] : merged) {
        support.push_back(w);
        masses.push_back(mu / total);
    }
}

int expanded_count(const std::vector<double>& folded_support) {
    int n = 0;
    for (double w : folded_support) n += std::abs(w - 0.5) < 1e-15 ? 1 : 2;
    return n;
}

}  // namespace

GameSolution solve_saddle(int k, DecoderKind d, const SolveOptions& opts) {
    if (k < 2) throw std::domain_error("solve_saddle: k must be >= 2");
    ChannelParam param{k, true};
    std::vector<double> support{0.5};
    std::vector<double> masses{1.0};
    std::vector<double> warm_q = param.interleaving_start();

    GameSolution sol;
    sol.decoder = d;

    int mass_steps = opts.max_mass_steps;
    bool tightened = false;
    RestrictedResult rest;
    LineSearchResult top{0.5, 0.0};
    int outer = 0;
    bool converged = false;

    for (outer = 1; outer <= opts.max_outer; ++outer) {
        rest = solve_restricted_maximin(k, d, support, opts, masses, warm_q, mass_steps);
        masses = rest.masses;
        warm_q = rest.channel_q;
        CollusionChannel channel = CollusionChannel::from_free_coords(k, warm_q);
        top = maximize_over_w(channel, d, {0.0, 1.0}, opts.w_grid);
        double gap = top.value - rest.value;
        if (gap <= opts.tol) {
            converged = true;
            break;
        }
        double wf = fold(top.w);
        double dist = std::numeric_limits<double>::infinity();
        for (double s : support) dist = std::min(dist, std::abs(s - wf));
        if (dist < opts.merge_tol) {
            if (tightened) break;  // restricted solve is the bottleneck; give up
            tightened = true;
            mass_steps *= 4;
            continue;
        }
        // attach the new point with a small starting mass
        std::vector<std::pair<double, double>> atoms;
        for (size_t i = 0; i < support.size(); ++i)
            atoms.emplace_back(support[i], masses[i] * 0.9);
        atoms.emplace_back(wf, 0.1);
        std::sort(atoms.begin(), atoms.end());
        support.clear();
        masses.clear();
        for (auto& [w, mu] : atoms) {
            support.push_back(w);
            masses.push_back(mu);
        }
    }

    // prune and polish
    prune_support(support, masses, opts.merge_tol, opts.mass_floor);
    int bound = (k + 1) / 2;
    for (int round = 0; round <= opts.polish_rounds; ++round) {
        bool over_bound = expanded_count(support) > bound;
        if (over_bound) {
            size_t imin = 0;
            for (size_t i = 1; i < masses.size(); ++i)
                if (masses[i] < masses[imin]) imin = i;
            support.erase(support.begin() + static_cast<long>(imin));
            masses.erase(masses.begin() + static_cast<long>(imin));
            double tot = std::accumulate(masses.begin(), masses.end(), 0.0);
            for (auto& x : masses) x /= tot;
        }
        rest = solve_restricted_maximin(k, d, support, opts, masses, warm_q,
                                        opts.max_mass_steps);
        masses = rest.masses;
        warm_q = rest.channel_q;
        CollusionChannel channel = CollusionChannel::from_free_coords(k, warm_q);
        top = maximize_over_w(channel, d, {0.0, 1.0}, opts.w_grid);
        if (round == opts.polish_rounds) break;
        // move each interior support point to the local maximizer of I(., p)
        bool moved = false;
        for (auto& s : support) {
            if (std::abs(s - 0.5) < 1e-15) continue;
            double r = 0.02;
            auto [ws, vs] = golden_max(
                [&](double w) { return payoff_value(w, channel, d); },
                std::max(1e-12, s - r), std::min(0.5, s + r), 1e-12);
            (void)vs;
            if (std::abs(ws - s) > 1e-13) moved = true;
            s = ws;
        }
        prune_support(support, masses, opts.merge_tol, opts.mass_floor);
        if (!moved && expanded_count(support) <= bound) break;
    }

    (void)converged;
    CollusionChannel channel = CollusionChannel::from_free_coords(k, warm_q);
    sol.maximin = rest.value;
    sol.minimax = top.value;
    sol.duality_gap = sol.minimax - sol.maximin;
    sol.value = 0.5 * (sol.maximin + sol.minimax);
    sol.converged = sol.duality_gap <= opts.tol && expanded_count(support) <= bound;
    sol.iterations = outer;
    sol.prior = expand_prior(support, masses);
    sol.channel = channel;
    sol.kkt = make_kkt_report(k, d, support, masses, channel);
    return sol;
}

double degenerate_prior_maximin(int k) {
    if (k < 2) throw std::domain_error("degenerate_prior_maximin: k must be >= 2");
    FwOptions fw;
    fw.tol = 1e-12;
    fw.symmetric = false;  // a point mass off 1/2 is not symbol-symmetric
    std::vector<double> warm;
    auto inner_min = [&](double w) {
        ExpectedPayoff payoff(k, DecoderKind::Joint, {w}, {1.0});
        FwResult r = minimize_expected(payoff, fw, warm);
        warm = r.channel.free_coords();
        return r.value;
    };
    // the outer function is symmetric about 1/2; scan the folded half
    double best_w = 0.5, best_v = inner_min(0.5);
    int grid = 129;
    for (int i = 1; i < grid; ++i) {
        double w = 0.5 * i / (grid - 1);
        double v = inner_min(w);
        if (v > best_v) {
            best_v = v;
            best_w = w;
        }
    }
    double r = 0.5 / (grid - 1);
    auto [wr, vr] = golden_max(inner_min, std::max(0.0, best_w - r),
                               std::min(0.5, best_w + r), 1e-9);
    (void)wr;
    return std::max(best_v, vr);
}

}  // namespace fpg

