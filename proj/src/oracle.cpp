#include "fpgame/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fpg {

namespace {

std::vector<double> grid(int n, double lo, double hi) {
    std::vector<double> g(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) g[static_cast<size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    return g;
}

// enumerate symmetric channels over the free-coordinate grid
std::vector<CollusionChannel> channel_grid(int k, int p_points) {
    int m = CollusionChannel::free_coord_count(k);
    std::vector<CollusionChannel> out;
    if (m == 0) {
        out.push_back(CollusionChannel::from_free_coords(k, {}));
        return out;
    }
    std::vector<double> axis = grid(p_points, 0.0, 1.0);
    std::vector<double> q(static_cast<size_t>(m), 0.0);
    std::vector<int> idx(static_cast<size_t>(m), 0);
    for (;;) {
        for (int i = 0; i < m; ++i) q[static_cast<size_t>(i)] = axis[static_cast<size_t>(idx[static_cast<size_t>(i)])];
        out.push_back(CollusionChannel::from_free_coords(k, q));
        int pos = 0;
        while (pos < m) {
            if (++idx[static_cast<size_t>(pos)] < p_points) break;
            idx[static_cast<size_t>(pos)] = 0;
            ++pos;
        }
        if (pos == m) break;
    }
    return out;
}

}  // namespace

GridMinimaxResult grid_minimax(int k, DecoderKind d, const GridSpec& spec) {
    if (k < 2 || k > 5)
        throw std::domain_error("grid_minimax: supported only for k in {2..5}");
    if (spec.w_points < 3 || spec.p_points < 3)
        throw std::domain_error("grid_minimax: grid counts must be >= 3");
    int cap = spec.prior_support_cap > 0 ? spec.prior_support_cap : (k + 1) / 2;
    if (cap > (k + 1) / 2)
        throw std::domain_error("grid_minimax: prior_support_cap exceeds spectrum bound");

    std::vector<CollusionChannel> channels = channel_grid(k, spec.p_points);
    size_t nch = channels.size();

    // payoff at the center and at each candidate pair position, per channel
    std::vector<double> center_vals(nch);
    for (size_t c = 0; c < nch; ++c) center_vals[c] = payoff_value(0.5, channels[c], d);

    // mass m on the symmetric pair {w, 1-w}, 1-m on the center atom.
    // cap == 1 forces the center-only prior; cap == 2 allows pure pair or pure
    // center; cap >= 3 allows any split on the 1/64 grid.
    std::vector<double> splits;
    if (cap == 1) {
        splits = {0.0};
    } else if (cap == 2) {
        splits = {0.0, 1.0};
    } else {
        splits = grid(spec.mass_resolution + 1, 0.0, 1.0);
    }

    GridMinimaxResult best;
    best.value = -std::numeric_limits<double>::infinity();
    std::vector<double> ws = grid(spec.w_points, 0.0, 0.5);

    std::vector<double> pair_vals(nch);
    for (double w : ws) {
        for (size_t c = 0; c < nch; ++c) pair_vals[c] = payoff_value(w, channels[c], d);
        for (double m : splits) {
            double vmin = std::numeric_limits<double>::infinity();
            size_t cmin = 0;
            for (size_t c = 0; c < nch; ++c) {
                double v = m * pair_vals[c] + (1.0 - m) * center_vals[c];
                if (v < vmin) {
                    vmin = v;
                    cmin = c;
                }
            }
            if (vmin > best.value) {
                best.value = vmin;
                best.channel = channels[cmin];
                if (m == 0.0 || w == 0.5) {
                    best.prior = FiniteSpectrumPrior({0.5}, {1.0});
                } else if (m == 1.0) {
                    best.prior = FiniteSpectrumPrior({w, 1.0 - w}, {0.5, 0.5});
                } else {
                    best.prior = FiniteSpectrumPrior({w, 0.5, 1.0 - w},
                                                     {0.5 * m, 1.0 - m, 0.5 * m});
                }
            }
        }
        if (w == 0.5) break;  // pair degenerates to the center; no further w
    }
    return best;
}

std::vector<double> fd_gradient(double w, const CollusionChannel& c, DecoderKind d,
                                double step) {
    int k = c.k();
    int m = CollusionChannel::free_coord_count(k);
    std::vector<double> q = c.free_coords();
    std::vector<double> g(static_cast<size_t>(m), 0.0);
    for (int i = 0; i < m; ++i) {
        double saved = q[static_cast<size_t>(i)];
        q[static_cast<size_t>(i)] = saved + step;
        double hi = payoff_value(w, CollusionChannel::from_free_coords(k, q), d);
        q[static_cast<size_t>(i)] = saved - step;
        double lo = payoff_value(w, CollusionChannel::from_free_coords(k, q), d);
        q[static_cast<size_t>(i)] = saved;
        g[static_cast<size_t>(i)] = (hi - lo) / (2.0 * step);
    }
    return g;
}

std::vector<double> fd_gradient_full(double w, const CollusionChannel& c, DecoderKind d,
                                     double step) {
    int k = c.k();
    std::vector<double> p = c.probs();
    std::vector<double> g(static_cast<size_t>(k) + 1, 0.0);
    for (int z = 1; z < k; ++z) {
        double saved = p[static_cast<size_t>(z)];
        p[static_cast<size_t>(z)] = saved + step;
        double hi = payoff_value(w, CollusionChannel::unchecked(k, p), d);
        p[static_cast<size_t>(z)] = saved - step;
        double lo = payoff_value(w, CollusionChannel::unchecked(k, p), d);
        p[static_cast<size_t>(z)] = saved;
        g[static_cast<size_t>(z)] = (hi - lo) / (2.0 * step);
    }
    return g;
}

DualQuadratureResult dual_quadrature(const Integrand& f, const ContinuousPrior& prior) {
    DualQuadratureResult r;
    QuadratureRule rule = build_quadrature(prior, 128);
    r.gauss_jacobi = rule.integrate2(f);
    r.tanh_sinh = tanh_sinh(
        [&](double w, double omw) { return f(w, omw) * prior.pdf(w, omw); }, 1e-13);
    r.discrepancy = std::abs(r.gauss_jacobi - r.tanh_sinh);
    r.agree = r.discrepancy <= 1e-7;
    return r;
}

}  // namespace fpg
