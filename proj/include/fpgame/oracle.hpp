#ifndef FPGAME_ORACLE_HPP
#define FPGAME_ORACLE_HPP

#include <vector>

#include "fpgame/core.hpp"
#include "fpgame/payoff.hpp"
#include "fpgame/quadrature.hpp"

namespace fpg {

struct GridSpec {
    int w_points = 401;         // symmetric-pair positions scanned on [0, 1/2]
    int p_points = 401;         // per free channel coordinate
    int mass_resolution = 64;   // simplex grid 1/64 for pair-vs-center mass
    int prior_support_cap = 0;  // 0 = floor((k+1)/2)
};

struct GridMinimaxResult {
    double value = 0.0;
    FiniteSpectrumPrior prior{{0.5}, {1.0}};
    CollusionChannel channel = CollusionChannel::interleaving(2);
};

/// Exhaustive maximin over gridded symmetric strategies for k in {2..5}:
/// symmetric priors within the spectrum bound reduce to a center atom plus
/// at most one symmetric pair, so the prior grid is (pair position, mass
/// split); channels are enumerated over the free symmetric coordinates.
GridMinimaxResult grid_minimax(int k, DecoderKind d, const GridSpec& spec = {});

/// Central-difference gradient over the free symmetric coordinates
/// (mirrored coordinates move together).
std::vector<double> fd_gradient(double w, const CollusionChannel& c, DecoderKind d,
                                double step = 1e-6);

/// Central-difference gradient over each interior coordinate independently.
std::vector<double> fd_gradient_full(double w, const CollusionChannel& c, DecoderKind d,
                                     double step = 1e-6);

struct DualQuadratureResult {
    double gauss_jacobi = 0.0;
    double tanh_sinh = 0.0;
    double discrepancy = 0.0;
    bool agree = false;  // discrepancy <= 1e-7
};

/// Integrates f (as a density-free integrand against Lebesgue measure,
/// weighted by the prior pdf) by the prior's Gauss-Jacobi rule and by
/// tanh-sinh independently.
DualQuadratureResult dual_quadrature(const Integrand& f, const ContinuousPrior& prior);

}  // namespace fpg

#endif
