#ifndef FPGAME_GAMES_HPP
#define FPGAME_GAMES_HPP

#include <utility>
#include <vector>

#include "fpgame/core.hpp"
#include "fpgame/payoff.hpp"

namespace fpg {

/// Closed-form capacity bounds for coalition size k.
struct BoundsReport {
    int k = 0;
    DecoderKind decoder = DecoderKind::Joint;
    double lower_arcsine = 0.0;       // 2 / (k^2 pi^2 ln 2)
    double upper_interleaving = 0.0;  // joint: 1/(k^2 ln 2); simple: 1 - h(1/2 + 1/(2k))
    double asymptote = 0.0;           // 1 / (k^2 2 ln 2)
};

BoundsReport capacity_bounds(int k, DecoderKind d);

struct LineSearchResult {
    double w = 0.0;
    double value = 0.0;
};

/// Global maximization of I(., p) over the closed domain: dense grid scan
/// (ties toward smallest w) refined by golden section to |interval| <= 1e-10.
/// The value certifies C_k(P_W, {p}) from above for singleton attack classes.
LineSearchResult maximize_over_w(const CollusionChannel& c, DecoderKind d,
                                 std::pair<double, double> domain = {0.0, 1.0},
                                 int grid = 4097);

struct FwOptions {
    double tol = 1e-9;         // Frank-Wolfe duality gap target, bits
    int max_iterations = 50000;
    bool symmetric = true;     // optimize only z = 1..floor((k-1)/2), mirror the rest
    int quad_nodes = 192;      // nodes for continuous priors
    bool record_trace = false;
};

struct FwResult {
    CollusionChannel channel = CollusionChannel::interleaving(2);
    double value = 0.0;
    double gap = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> objective_trace;  // filled when record_trace
    std::vector<double> gap_trace;
};

/// Conditional gradient (Frank-Wolfe) minimization of the expected payoff
/// over the feasible channel box for a size-k coalition, with exact line
/// search. Non-convergence is reported through FwResult (best iterate and
/// final gap), not thrown.
FwResult minimize_over_channel(const FiniteSpectrumPrior& prior, int k, DecoderKind d,
                               const FwOptions& opts = {});
FwResult minimize_over_channel(const ContinuousPrior& prior, int k, DecoderKind d,
                               const FwOptions& opts = {});

/// Core driver over a fixed-node expected payoff (nodes act as the prior).
/// warm_free may carry a starting point in free coordinates.
FwResult minimize_expected(const ExpectedPayoff& payoff, const FwOptions& opts,
                           std::vector<double> warm_free = {});

struct KktReport {
    double stationarity_w = 0.0;     // max |dI/dw| over support points
    double equal_value_spread = 0.0; // max - min of I(w_i, p) over support
    bool second_order_ok = false;    // d2I/dw2 < 0 at every support point
    double stationarity_p = 0.0;     // max projected |E[dI/dp_z]| over free coords
};

struct SolveOptions {
    double tol = 1e-6;       // maximin/minimax certificate agreement, bits
    double fw_tol = 1e-9;
    double mass_tol = 1e-8;  // restricted maximin tolerance
    int max_outer = 64;
    int max_mass_steps = 600;
    int fw_max_iterations = 50000;
    int w_grid = 4097;
    double merge_tol = 1e-6;
    double mass_floor = 1e-9;
    int polish_rounds = 3;
};

struct GameSolution {
    double value = 0.0;
    FiniteSpectrumPrior prior{{0.5}, {1.0}};
    CollusionChannel channel = CollusionChannel::interleaving(2);
    DecoderKind decoder = DecoderKind::Joint;
    KktReport kkt;
    double duality_gap = 0.0;
    int iterations = 0;
    bool converged = false;
    double maximin = 0.0;  // E_P[I] certificate (lower)
    double minimax = 0.0;  // max_w I(w, p) certificate (upper)
};

/// Double-oracle saddle solver: grows a finite symmetric support from {1/2},
/// solves the restricted maximin over masses (projected subgradient with
/// Polyak steps) against Frank-Wolfe best responses, and expands with the
/// argmax of I(., p). Terminates when the two certificates agree within
/// opts.tol.
GameSolution solve_saddle(int k, DecoderKind d, const SolveOptions& opts = {});

/// max over point masses w of min over all marking channels of the joint
/// payoff; equals (1/k) 2^{-(k-1)}. The inner minimization runs without the
/// symmetry reduction: a point mass off 1/2 is not symbol-symmetric, so the
/// best response isn't either.
double degenerate_prior_maximin(int k);

}  // namespace fpg

#endif
