#include "fpgame/fpgame.h"

#include <cstring>
#include <random>
#include <string>

#include "fpgame/asymptotics.hpp"
#include "fpgame/core.hpp"
#include "fpgame/games.hpp"
#include "fpgame/oracle.hpp"
#include "fpgame/payoff.hpp"
#include "fpgame/serialize.hpp"

using namespace fpg;

struct fpg_channel {
    CollusionChannel impl;
};

struct fpg_prior {
    AnyPrior impl;
};

struct fpg_solution {
    GameSolution impl;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

DecoderKind to_decoder(fpg_decoder d) {
    return d == FPG_DECODER_SIMPLE ? DecoderKind::Simple : DecoderKind::Joint;
}

// maps C++ exceptions onto status codes; FPG_OK only when fn completes
template <typename Fn>
fpg_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const std::domain_error& e) {
        set_error(e.what());
        return FPG_ERR_DOMAIN;
    } catch (const std::invalid_argument& e) {
        set_error(e.what());
        return FPG_ERR_INVALID_ARGUMENT;
    } catch (const std::exception& e) {
        set_error(e.what());
        return FPG_ERR_INTERNAL;
    } catch (...) {
        set_error("unknown error");
        return FPG_ERR_INTERNAL;
    }
}

const ContinuousPrior* as_continuous(const fpg_prior* p) {
    return std::get_if<ContinuousPrior>(&p->impl);
}

}  // namespace

extern "C" {

const char* fpg_version(void) { return "0.1.0"; }

const char* fpg_last_error(void) { return g_last_error.c_str(); }

void fpg_string_free(char* s) { delete[] s; }

fpg_status fpg_channel_create(int k, const double* p, size_t len, fpg_channel** out) {
    if (!p || !out) {
        set_error("null argument");
        return FPG_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        *out = new fpg_channel{CollusionChannel(k, std::vector<double>(p, p + len))};
        return FPG_OK;
    });
}

fpg_status fpg_channel_interleaving(int k, fpg_channel** out) {
    if (!out) {
        set_error("null argument");
        return FPG_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        *out = new fpg_channel{CollusionChannel::interleaving(k)};
        return FPG_OK;
    });
}

fpg_status fpg_channel_from_json(const char* json, fpg_channel** out) {
    if (!json || !out) {
        set_error("null argument");
        return FPG_ERR_INVALID_ARGUMENT;
    }
    try {
        *out = new fpg_channel{channel_from_json(json)};
        return FPG_OK;
    } catch (const std::exception& e) {
        set_error(e.what());
        return FPG_ERR_PARSE;
    }
}

fpg_status fpg_channel_to_json(const fpg_channel* c, char** out) {
    if (!c || !out) {
        set_error("null argument");
        return FPG_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        *out = dup_string(to_json(c->impl));
        return FPG_OK;
    });
}

int fpg_channel_k(const fpg_channel* c) { return c ? c->impl.k() : 0; }

fpg_status fpg_channel_probs(const fpg_channel* c, double* buf, size_t len) {
    if (!c || !buf) {
        set_error("null argument");
        return FPG_ERR_INVALID_ARGUMENT;
    }
    const auto& p = c->impl.probs();
    if (len < p.size()) {
        set_error("buffer too small: need k+1 entries");
        return FPG_ERR_INVALID_ARGUMENT;
    }
    std::memcpy(buf, p.data(), p.size() * sizeof(double));
    return FPG_OK;
}

fpg_status fpg_channel_validate(const fpg_channel* c, int symmetric, int* ok,
                                char** report_json) {
    if (!c || !ok) {
        set_error("null argument");
        return FPG_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        ValidationReport report = validate_channel(c->impl, symmetric != 0);
        *ok = report.ok() ? 1 : 0;
        if (report_json) {
            std::string json = "[";
            for (size_t i = 0; i < report.violations.size(); ++i) {
                const auto& v = report.violations[i];
                if (i) json += ",";
                const char* kind = v.kind == ChannelViolation::Kind::Marking ? "marking"
                                   : v.kind == ChannelViolation::Kind::Range ? "range"
                                                                             : "symmetry";
                json += std::string("{\"kind\":\"") + kind +
                        "\",\"index\":" + std::to_string(v.index) +
                        ",\"magnitude\":" + fmt17(v.magnitude) + "}";
            }
            json += "]";
            *report_json = dup_string(json);
        }
        return FPG_OK;
    });
}

void fpg_channel_free(fpg_channel* c) { delete c; }

fpg_status fpg_prior_parse(const char* spec, fpg_prior** out) {
    if (!spec || !out) {
        set_error("null argument");
        return FPG_ERR_INVALID_ARGUMENT;
    }
    try {
        *out = new fpg_prior{parse_prior(spec)};
        return FPG_OK;
    } catch (const std::exception& e) {
        set_error(e.what());
        return FPG_ERR_PARSE;
    }
}

fpg_status fpg_prior_from_json(const char* json, fpg_prior** out) {
    if (!json || !out) {
        set_error("null argument");
        return FPG_ERR_INVALID_ARGUMENT;
    }
    try {
        *out = new fpg_prior{prior_from_json(json)};
        return FPG_OK;
    } catch (const std::exception& e) {
        set_error(e.what());
        return FPG_ERR_PARSE;
    }
}

fpg_status fpg_prior_to_json(const fpg_prior* p, char** out) {
    if (!p || !out) {
        set_error("null argument");
        return FPG_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        *out = dup_string(to_json(p->impl));
        return FPG_OK;
    });
}

void fpg_prior_free(fpg_prior* p) { delete p; }

fpg_status fpg_payoff(double w, const fpg_channel* c, fpg_decoder d, double* value) {
    if (!c || !value) {
        set_error("null argument");
        return FPG_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        *value = payoff_value(w, c->impl, to_decoder(d));
        return FPG_OK;
    });
}

fpg_status fpg_payoff_gradient(double w, const fpg_channel* c, fpg_decoder d,
                               double* grad, size_t len) {
    if (!c || !grad) {
        set_error("null argument");
        return FPG_ERR_INVALID_ARGUMENT;
    }
    if (len < static_cast<size_t>(c->impl.k()) + 1) {
        set_error("buffer too small: need k+1 entries");
        return FPG_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        PayoffEvaluation e = payoff(w, c->impl, to_decoder(d), true);
        std::memcpy(grad, e.gradient_p->data(), e.gradient_p->size() * sizeof(double));
        return FPG_OK;
    });
}

fpg_status fpg_response_curve(const fpg_channel* c, double w, double* value) {
    if (!c || !value) {
        set_error("null argument");
        return FPG_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        *value = response_curve(c->impl, w);
        return FPG_OK;
    });
}

fpg_status fpg_expected_payoff(const fpg_prior* p, const fpg_channel* c, fpg_decoder d,
                               double* value) {
    if (!p || !c || !value) {
        set_error("null argument");
        return FPG_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        *value = std::visit(
            [&](const auto& prior) { return expected_payoff(prior, c->impl, to_decoder(d)); },
            p->impl);
        return FPG_OK;
    });
}

fpg_status fpg_capacity_bounds(int k, fpg_decoder d, double* lower, double* upper,
                               double* asymptote) {
    return guarded([&] {
        BoundsReport r = capacity_bounds(k, to_decoder(d));
        if (lower) *lower = r.lower_arcsine;
        if (upper) *upper = r.upper_interleaving;
        if (asymptote) *asymptote = r.asymptote;
        return FPG_OK;
    });
}

fpg_status fpg_capacity_bounds_json(int k, fpg_decoder d, char** out) {
    if (!out) {
        set_error("null argument");
        return FPG_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        *out = dup_string(to_json(capacity_bounds(k, to_decoder(d))));
        return FPG_OK;
    });
}

fpg_status fpg_maximize_over_w(const fpg_channel* c, fpg_decoder d, int grid,
                               double* w_star, double* value) {
    if (!c) {
        set_error("null argument");
        return FPG_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        LineSearchResult r =
            maximize_over_w(c->impl, to_decoder(d), {0.0, 1.0}, grid > 0 ? grid : 4097);
        if (w_star) *w_star = r.w;
        if (value) *value = r.value;
        return FPG_OK;
    });
}

fpg_status fpg_minimize_over_channel(const fpg_prior* p, int k, fpg_decoder d,
                                     double tol, int max_iter, fpg_channel** channel,
                                     double* value, double* gap) {
    if (!p) {
        set_error("null argument");
        return FPG_ERR_INVALID_ARGUMENT;
    }
    return guarded([&]() -> fpg_status {
        FwOptions opts;
        if (tol > 0.0) opts.tol = tol;
        if (max_iter > 0) opts.max_iterations = max_iter;
        FwResult r = std::visit(
            [&](const auto& prior) {
                return minimize_over_channel(prior, k, to_decoder(d), opts);
            },
            p->impl);
        if (channel) *channel = new fpg_channel{r.channel};
        if (value) *value = r.value;
        if (gap) *gap = r.gap;
        if (!r.converged) {
            set_error("Frank-Wolfe gap " + fmt17(r.gap) + " above tolerance after " +
                      std::to_string(r.iterations) + " iterations");
            return FPG_ERR_NO_CONVERGENCE;
        }
        return FPG_OK;
    });
}

fpg_status fpg_solve_saddle(int k, fpg_decoder d, double tol, int w_grid,
                            fpg_solution** out) {
    if (!out) {
        set_error("null argument");
        return FPG_ERR_INVALID_ARGUMENT;
    }
    return guarded([&]() -> fpg_status {
        SolveOptions opts;
        if (tol > 0.0) opts.tol = tol;
        if (w_grid > 2) opts.w_grid = w_grid;
        GameSolution sol = solve_saddle(k, to_decoder(d), opts);
        bool converged = sol.converged;
        double gap = sol.duality_gap;
        *out = new fpg_solution{std::move(sol)};
        if (!converged) {
            set_error("saddle certificates differ by " + fmt17(gap));
            return FPG_ERR_NO_CONVERGENCE;
        }
        return FPG_OK;
    });
}

fpg_status fpg_solution_value(const fpg_solution* s, double* value) {
    if (!s || !value) {
        set_error("null argument");
        return FPG_ERR_INVALID_ARGUMENT;
    }
    *value = s->impl.value;
    return FPG_OK;
}

fpg_status fpg_solution_gap(const fpg_solution* s, double* gap) {
    if (!s || !gap) {
        set_error("null argument");
        return FPG_ERR_INVALID_ARGUMENT;
    }
    *gap = s->impl.duality_gap;
    return FPG_OK;
}

fpg_status fpg_solution_iterations(const fpg_solution* s, int* iterations) {
    if (!s || !iterations) {
        set_error("null argument");
        return FPG_ERR_INVALID_ARGUMENT;
    }
    *iterations = s->impl.iterations;
    return FPG_OK;
}

int fpg_solution_converged(const fpg_solution* s) {
    return s && s->impl.converged ? 1 : 0;
}

fpg_status fpg_solution_channel(const fpg_solution* s, fpg_channel** out) {
    if (!s || !out) {
        set_error("null argument");
        return FPG_ERR_INVALID_ARGUMENT;
    }
    *out = new fpg_channel{s->impl.channel};
    return FPG_OK;
}

fpg_status fpg_solution_prior(const fpg_solution* s, fpg_prior** out) {
    if (!s || !out) {
        set_error("null argument");
        return FPG_ERR_INVALID_ARGUMENT;
    }
    *out = new fpg_prior{AnyPrior(s->impl.prior)};
    return FPG_OK;
}

fpg_status fpg_solution_to_json(const fpg_solution* s, char** out) {
    if (!s || !out) {
        set_error("null argument");
        return FPG_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        *out = dup_string(to_json(s->impl));
        return FPG_OK;
    });
}

void fpg_solution_free(fpg_solution* s) { delete s; }

fpg_status fpg_degenerate_prior_maximin(int k, double* value) {
    if (!value) {
        set_error("null argument");
        return FPG_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        *value = degenerate_prior_maximin(k);
        return FPG_OK;
    });
}

fpg_status fpg_fisher_integral(const fpg_prior* p, double* value) {
    if (!p || !value) {
        set_error("null argument");
        return FPG_ERR_INVALID_ARGUMENT;
    }
    const ContinuousPrior* cp = as_continuous(p);
    if (!cp) {
        set_error("fisher integral requires a continuous prior");
        return FPG_ERR_INVALID_ARGUMENT;
    }
    try {
        *value = fisher_integral(*cp);
        return FPG_OK;
    } catch (const std::domain_error& e) {
        set_error(e.what());
        return FPG_ERR_DIVERGENT_INTEGRAL;
    }
}

fpg_status fpg_asymptotic_capacity(const fpg_prior* p, int k, double* value) {
    if (!p || !value) {
        set_error("null argument");
        return FPG_ERR_INVALID_ARGUMENT;
    }
    const ContinuousPrior* cp = as_continuous(p);
    if (!cp) {
        set_error("asymptotic capacity requires a continuous prior");
        return FPG_ERR_INVALID_ARGUMENT;
    }
    try {
        *value = asymptotic_capacity(*cp, k);
        return FPG_OK;
    } catch (const std::domain_error& e) {
        set_error(e.what());
        return FPG_ERR_DIVERGENT_INTEGRAL;
    }
}

fpg_status fpg_optimal_profile_sample(const fpg_prior* p, const double* w, size_t n,
                                      double* g_out, double* j_out) {
    if (!p || !w || !g_out) {
        set_error("null argument");
        return FPG_ERR_INVALID_ARGUMENT;
    }
    const ContinuousPrior* cp = as_continuous(p);
    if (!cp) {
        set_error("optimal profile requires a continuous prior");
        return FPG_ERR_INVALID_ARGUMENT;
    }
    try {
        ChannelProfile g = optimal_profile(*cp);
        for (size_t i = 0; i < n; ++i) {
            g_out[i] = g.g(w[i]);
            if (j_out)
                j_out[i] = (w[i] > 0.0 && w[i] < 1.0) ? local_payoff_J(g, w[i]) : 0.0;
        }
        return FPG_OK;
    } catch (const std::domain_error& e) {
        set_error(e.what());
        return FPG_ERR_DIVERGENT_INTEGRAL;
    }
}

fpg_status fpg_optimal_profile_lift(const fpg_prior* p, int k, fpg_channel** out) {
    if (!p || !out) {
        set_error("null argument");
        return FPG_ERR_INVALID_ARGUMENT;
    }
    const ContinuousPrior* cp = as_continuous(p);
    if (!cp) {
        set_error("optimal profile requires a continuous prior");
        return FPG_ERR_INVALID_ARGUMENT;
    }
    try {
        *out = new fpg_channel{lift_profile(optimal_profile(*cp), k)};
        return FPG_OK;
    } catch (const std::domain_error& e) {
        set_error(e.what());
        return FPG_ERR_DIVERGENT_INTEGRAL;
    }
}

fpg_status fpg_normalized_payoff(double w, const fpg_channel* c, double* value) {
    if (!c || !value) {
        set_error("null argument");
        return FPG_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        *value = normalized_payoff(w, c->impl);
        return FPG_OK;
    });
}

fpg_status fpg_grid_minimax(int k, fpg_decoder d, int w_points, int p_points,
                            double* value) {
    if (!value) {
        set_error("null argument");
        return FPG_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        GridSpec spec;
        if (w_points > 2) spec.w_points = w_points;
        if (p_points > 2) spec.p_points = p_points;
        *value = grid_minimax(k, to_decoder(d), spec).value;
        return FPG_OK;
    });
}

fpg_status fpg_oracle_gradient_check(unsigned seed, int cases, double* max_rel_err) {
    if (!max_rel_err) {
        set_error("null argument");
        return FPG_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        std::mt19937 rng(seed);
        std::uniform_int_distribution<int> pick_k(3, 10);
        std::uniform_real_distribution<double> interior(0.05, 0.95);
        double worst = 0.0;
        for (int t = 0; t < cases; ++t) {
            int k = pick_k(rng);
            int m = CollusionChannel::free_coord_count(k);
            std::vector<double> q(static_cast<size_t>(m));
            for (auto& x : q) x = interior(rng);
            CollusionChannel c = CollusionChannel::from_free_coords(k, q);
            double w = interior(rng);
            DecoderKind d = (t % 2) ? DecoderKind::Simple : DecoderKind::Joint;
            PayoffEvaluation e = payoff(w, c, d, true);
            std::vector<double> fd = fd_gradient(w, c, d, 1e-6);
            for (int i = 0; i < m; ++i) {
                double analytic = (*e.gradient_p)[static_cast<size_t>(i + 1)] -
                                  (*e.gradient_p)[static_cast<size_t>(k - i - 1)];
                double ref = fd[static_cast<size_t>(i)];
                double denom = std::max({std::abs(analytic), std::abs(ref), 1e-8});
                worst = std::max(worst, std::abs(analytic - ref) / denom);
            }
        }
        *max_rel_err = worst;
        return FPG_OK;
    });
}

fpg_status fpg_oracle_dual_quadrature(const fpg_prior* p, double* gauss_jacobi,
                                      double* tanh_sinh_out, double* discrepancy) {
    if (!p) {
        set_error("null argument");
        return FPG_ERR_INVALID_ARGUMENT;
    }
    const ContinuousPrior* cp = as_continuous(p);
    if (!cp) {
        set_error("dual quadrature requires a continuous prior");
        return FPG_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        // the Lemma-4 style integrand: E_prior[1/(f(w) w (1-w) f(w))] = Fisher integral
        ContinuousPrior prior = *cp;
        DualQuadratureResult r = dual_quadrature(
            [prior](double w, double omw) {
                double f = prior.pdf(w, omw);
                return 1.0 / (f * f * w * omw);
            },
            prior);
        if (gauss_jacobi) *gauss_jacobi = r.gauss_jacobi;
        if (tanh_sinh_out) *tanh_sinh_out = r.tanh_sinh;
        if (discrepancy) *discrepancy = r.discrepancy;
        return FPG_OK;
    });
}

}  // extern "C"
