// fpgame CLI: capacities, bounds, asymptotics, sweeps, and oracle checks
// over the fingerprinting games library. Talks to libfpgame through the C
// API only; artifacts are deterministic (fixed column orders, 17
// significant digits, \n newlines).

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "fpgame/fpgame.h"

namespace {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

struct KRange {
    int lo = 2, hi = 2;
};

KRange parse_k_range(const std::string& text) {
    KRange r;
    size_t colon = text.find(':');
    try {
        if (colon == std::string::npos) {
            r.lo = r.hi = std::stoi(text);
        } else {
            r.lo = std::stoi(text.substr(0, colon));
            r.hi = std::stoi(text.substr(colon + 1));
        }
    } catch (const std::exception&) {
        throw CLI::ValidationError("--k", "expected <int> or <int>:<int>");
    }
    if (r.lo < 2 || r.hi < r.lo) throw CLI::ValidationError("--k", "need 2 <= lo <= hi");
    return r;
}

std::vector<fpg_decoder> parse_decoders(const std::string& text) {
    if (text == "joint") return {FPG_DECODER_JOINT};
    if (text == "simple") return {FPG_DECODER_SIMPLE};
    if (text == "both") return {FPG_DECODER_JOINT, FPG_DECODER_SIMPLE};
    throw CLI::ValidationError("--decoder", "expected joint|simple|both");
}

const char* decoder_label(fpg_decoder d) {
    return d == FPG_DECODER_JOINT ? "joint" : "simple";
}

void write_artifact(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::cerr << "cannot write " << out_path << "\n";
        std::exit(1);
    }
    out << content;
}

[[noreturn]] void die(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    std::exit(1);
}

std::string take_string(fpg_status st, char* s) {
    if (st != FPG_OK) die(fpg_last_error());
    std::string out(s);
    fpg_string_free(s);
    return out;
}

// RAII for the C handles
struct ChannelHandle {
    fpg_channel* h = nullptr;
    ~ChannelHandle() { fpg_channel_free(h); }
};
struct PriorHandle {
    fpg_prior* h = nullptr;
    ~PriorHandle() { fpg_prior_free(h); }
};
struct SolutionHandle {
    fpg_solution* h = nullptr;
    ~SolutionHandle() { fpg_solution_free(h); }
};

fpg_prior* load_prior(const std::string& spec) {
    fpg_prior* p = nullptr;
    if (fpg_prior_parse(spec.c_str(), &p) != FPG_OK) die(fpg_last_error());
    return p;
}

fpg_channel* load_channel(const std::string& spec, int k) {
    fpg_channel* c = nullptr;
    if (spec == "interleaving") {
        if (fpg_channel_interleaving(k, &c) != FPG_OK) die(fpg_last_error());
        return c;
    }
    if (!spec.empty() && spec[0] == '@') {
        std::ifstream in(spec.substr(1));
        if (!in) die("cannot read " + spec.substr(1));
        std::stringstream ss;
        ss << in.rdbuf();
        if (fpg_channel_from_json(ss.str().c_str(), &c) != FPG_OK) die(fpg_last_error());
        if (fpg_channel_k(c) != k) {
            fpg_channel_free(c);
            die("channel file has coalition size " + std::to_string(fpg_channel_k(c)) +
                ", expected " + std::to_string(k));
        }
        return c;
    }
    die("unknown channel spec '" + spec + "' (expected interleaving | optimal | @<path>)");
}

int num_threads() {
    if (const char* env = std::getenv("FPGAME_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

// ---- capacity ------------------------------------------------------------

int run_capacity(int k, fpg_decoder dec, const std::string& prior_spec,
                 const std::string& channel_spec, double tol, int grid,
                 const std::string& out_path) {
    bool prior_optimal = prior_spec == "optimal";
    bool channel_optimal = channel_spec == "optimal";
    int exit_code = 0;
    std::ostringstream os;

    if (prior_optimal && channel_optimal) {
        SolutionHandle sol;
        fpg_status st = fpg_solve_saddle(k, dec, tol, grid, &sol.h);
        if (st != FPG_OK && st != FPG_ERR_NO_CONVERGENCE) die(fpg_last_error());
        if (st == FPG_ERR_NO_CONVERGENCE) exit_code = 2;
        char* json = nullptr;
        os << take_string(fpg_solution_to_json(sol.h, &json), json) << "\n";
    } else if (channel_optimal) {
        PriorHandle prior{load_prior(prior_spec)};
        ChannelHandle channel;
        double value = 0.0, gap = 0.0;
        fpg_status st =
            fpg_minimize_over_channel(prior.h, k, dec, tol, 0, &channel.h, &value, &gap);
        if (st != FPG_OK && st != FPG_ERR_NO_CONVERGENCE) die(fpg_last_error());
        if (st == FPG_ERR_NO_CONVERGENCE) exit_code = 2;
        char* cj = nullptr;
        std::string channel_json = take_string(fpg_channel_to_json(channel.h, &cj), cj);
        char* pj = nullptr;
        std::string prior_json = take_string(fpg_prior_to_json(prior.h, &pj), pj);
        os << "{\"k\":" << k << ",\"decoder\":\"" << decoder_label(dec)
           << "\",\"value\":" << fmt17(value) << ",\"gap\":" << fmt17(gap)
           << ",\"prior\":" << prior_json << ",\"channel\":" << channel_json
           << ",\"converged\":" << (st == FPG_OK ? "true" : "false") << "}\n";
    } else if (prior_optimal) {
        ChannelHandle channel{load_channel(channel_spec, k)};
        double w_star = 0.0, value = 0.0;
        if (fpg_maximize_over_w(channel.h, dec, grid, &w_star, &value) != FPG_OK)
            die(fpg_last_error());
        char* cj = nullptr;
        std::string channel_json = take_string(fpg_channel_to_json(channel.h, &cj), cj);
        os << "{\"k\":" << k << ",\"decoder\":\"" << decoder_label(dec)
           << "\",\"value\":" << fmt17(value) << ",\"w_star\":" << fmt17(w_star)
           << ",\"channel\":" << channel_json << ",\"converged\":true}\n";
    } else {
        PriorHandle prior{load_prior(prior_spec)};
        ChannelHandle channel{load_channel(channel_spec, k)};
        double value = 0.0;
        if (fpg_expected_payoff(prior.h, channel.h, dec, &value) != FPG_OK)
            die(fpg_last_error());
        char* pj = nullptr;
        std::string prior_json = take_string(fpg_prior_to_json(prior.h, &pj), pj);
        char* cj = nullptr;
        std::string channel_json = take_string(fpg_channel_to_json(channel.h, &cj), cj);
        os << "{\"k\":" << k << ",\"decoder\":\"" << decoder_label(dec)
           << "\",\"value\":" << fmt17(value) << ",\"prior\":" << prior_json
           << ",\"channel\":" << channel_json << ",\"converged\":true}\n";
    }
    write_artifact(out_path, os.str());
    return exit_code;
}

// ---- bounds ----------------------------------------------------------------

int run_bounds(const KRange& range, const std::vector<fpg_decoder>& decs,
               const std::string& format, const std::string& out_path) {
    std::ostringstream os;
    bool json = format == "json";
    if (json) os << "[";
    else os << "k,decoder,lower,upper,asymptote\n";
    bool first = true;
    for (int k = range.lo; k <= range.hi; ++k) {
        for (fpg_decoder dec : decs) {
            if (json) {
                char* s = nullptr;
                std::string row = take_string(fpg_capacity_bounds_json(k, dec, &s), s);
                if (!first) os << ",";
                os << row;
            } else {
                double lower = 0.0, upper = 0.0, asym = 0.0;
                if (fpg_capacity_bounds(k, dec, &lower, &upper, &asym) != FPG_OK)
                    die(fpg_last_error());
                os << k << "," << decoder_label(dec) << "," << fmt17(lower) << ","
                   << fmt17(upper) << "," << fmt17(asym) << "\n";
            }
            first = false;
        }
    }
    if (json) os << "]\n";
    write_artifact(out_path, os.str());
    return 0;
}

// ---- sweep -----------------------------------------------------------------

struct SweepRow {
    int k;
    fpg_decoder dec;
    double value = 0.0, lower = 0.0, upper = 0.0, asymptote = 0.0, gap = 0.0;
    int iterations = 0;
    bool converged = false;
};

int run_sweep(const KRange& range, const std::vector<fpg_decoder>& decs, double tol,
              int grid, const std::string& out_path) {
    std::vector<SweepRow> rows;
    for (int k = range.lo; k <= range.hi; ++k)
        for (fpg_decoder dec : decs) rows.push_back({k, dec});

    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= rows.size()) return;
            SweepRow& row = rows[i];
            fpg_capacity_bounds(row.k, row.dec, &row.lower, &row.upper, &row.asymptote);
            SolutionHandle sol;
            fpg_status st = fpg_solve_saddle(row.k, row.dec, tol, grid, &sol.h);
            if (st != FPG_OK && st != FPG_ERR_NO_CONVERGENCE) die(fpg_last_error());
            fpg_solution_value(sol.h, &row.value);
            fpg_solution_gap(sol.h, &row.gap);
            fpg_solution_iterations(sol.h, &row.iterations);
            row.converged = fpg_solution_converged(sol.h) != 0;
        }
    };
    int nthreads = std::min<int>(num_threads(), static_cast<int>(rows.size()));
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    std::ostringstream os;
    os << "k,decoder,value,lower,upper,asymptote,gap,iterations,converged\n";
    bool all_converged = true;
    for (const SweepRow& row : rows) {
        os << row.k << "," << decoder_label(row.dec) << "," << fmt17(row.value) << ","
           << fmt17(row.lower) << "," << fmt17(row.upper) << "," << fmt17(row.asymptote)
           << "," << fmt17(row.gap) << "," << row.iterations << ","
           << (row.converged ? "true" : "false") << "\n";
        all_converged = all_converged && row.converged;
    }
    write_artifact(out_path, os.str());
    return all_converged ? 0 : 2;
}

// ---- asymptotics -----------------------------------------------------------

int run_asymptotics(int k, const std::string& prior_spec, const std::string& format,
                    double tol, const std::string& out_path) {
    PriorHandle prior{load_prior(prior_spec)};
    double fisher = 0.0, cap = 0.0;
    fpg_status st = fpg_fisher_integral(prior.h, &fisher);
    if (st != FPG_OK) die(fpg_last_error());
    if (fpg_asymptotic_capacity(prior.h, k, &cap) != FPG_OK) die(fpg_last_error());

    std::ostringstream os;
    if (format == "json") {
        char* pj = nullptr;
        std::string prior_json = take_string(fpg_prior_to_json(prior.h, &pj), pj);
        os << "{\"k\":" << k << ",\"prior\":" << prior_json
           << ",\"fisher_integral\":" << fmt17(fisher)
           << ",\"asymptotic_capacity\":" << fmt17(cap) << "}\n";
        write_artifact(out_path, os.str());
        return 0;
    }

    // CSV at the channel lattice w = z/k: the optimal asymptotic profile,
    // the solver's minimizing channel, and the two payoff curves.
    ChannelHandle solved;
    double value = 0.0, gap = 0.0;
    fpg_status fw = fpg_minimize_over_channel(prior.h, k, FPG_DECODER_JOINT, tol, 0,
                                              &solved.h, &value, &gap);
    if (fw != FPG_OK && fw != FPG_ERR_NO_CONVERGENCE) die(fpg_last_error());
    std::vector<double> ws(static_cast<size_t>(k) + 1);
    for (int z = 0; z <= k; ++z) ws[static_cast<size_t>(z)] = static_cast<double>(z) / k;
    std::vector<double> gopt(ws.size()), jopt(ws.size());
    if (fpg_optimal_profile_sample(prior.h, ws.data(), ws.size(), gopt.data(),
                                   jopt.data()) != FPG_OK)
        die(fpg_last_error());
    std::vector<double> probs(ws.size());
    fpg_channel_probs(solved.h, probs.data(), probs.size());

    os << "w,g_opt,p_solver,normalized_payoff,j_opt\n";
    for (size_t i = 0; i < ws.size(); ++i) {
        double norm = 0.0;
        fpg_normalized_payoff(ws[i], solved.h, &norm);
        os << fmt17(ws[i]) << "," << fmt17(gopt[i]) << "," << fmt17(probs[i]) << ","
           << fmt17(norm) << "," << fmt17(jopt[i]) << "\n";
    }
    write_artifact(out_path, os.str());
    return fw == FPG_OK ? 0 : 2;
}

// ---- oracle-check ----------------------------------------------------------

struct OracleEntry {
    std::string operation, inputs, comparator;
    double value = 0.0, delta = 0.0;
    bool pass = false;
};

int run_oracle_check(int k, const std::vector<fpg_decoder>& decs, double tol,
                     const std::string& out_path) {
    std::vector<OracleEntry> entries;

    for (fpg_decoder dec : decs) {
        OracleEntry e;
        e.operation = "grid_minimax_vs_solve_saddle";
        e.inputs = "k=" + std::to_string(k) + ",decoder=" + decoder_label(dec);
        double grid_value = 0.0;
        if (fpg_grid_minimax(k, dec, 0, 0, &grid_value) != FPG_OK) die(fpg_last_error());
        SolutionHandle sol;
        fpg_status st = fpg_solve_saddle(k, dec, tol, 0, &sol.h);
        if (st != FPG_OK && st != FPG_ERR_NO_CONVERGENCE) die(fpg_last_error());
        double solved = 0.0;
        fpg_solution_value(sol.h, &solved);
        e.value = solved;
        e.comparator = "grid=" + fmt17(grid_value);
        e.delta = std::abs(solved - grid_value);
        e.pass = e.delta <= 1e-3;
        entries.push_back(e);
    }

    {
        OracleEntry e;
        e.operation = "gradient_fd_vs_analytic";
        e.inputs = "cases=100,seed=20240601";
        double err = 0.0;
        if (fpg_oracle_gradient_check(20240601u, 100, &err) != FPG_OK)
            die(fpg_last_error());
        e.value = err;
        e.comparator = "rel_err<=1e-6";
        e.delta = err;
        e.pass = err <= 1e-6;
        entries.push_back(e);
    }

    {
        OracleEntry e;
        e.operation = "dual_quadrature_fisher";
        e.inputs = "prior=arcsine";
        PriorHandle arcsine{load_prior("arcsine")};
        double gj = 0.0, ts = 0.0, disc = 0.0;
        if (fpg_oracle_dual_quadrature(arcsine.h, &gj, &ts, &disc) != FPG_OK)
            die(fpg_last_error());
        e.value = gj;
        e.comparator = "tanh_sinh=" + fmt17(ts);
        e.delta = disc;
        e.pass = disc <= 1e-7;
        entries.push_back(e);
    }

    std::ostringstream os;
    os << "[";
    bool all_pass = true;
    for (size_t i = 0; i < entries.size(); ++i) {
        const OracleEntry& e = entries[i];
        if (i) os << ",";
        os << "{\"operation\":\"" << e.operation << "\",\"inputs\":\"" << e.inputs
           << "\",\"value\":" << fmt17(e.value) << ",\"comparator\":\"" << e.comparator
           << "\",\"delta\":" << fmt17(e.delta) << ",\"pass\":"
           << (e.pass ? "true" : "false") << "}";
        all_pass = all_pass && e.pass;
    }
    os << "]\n";
    write_artifact(out_path, os.str());
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fpgame: binary fingerprinting capacity games"};
    app.require_subcommand(1);

    std::string k_text = "2", decoder_text = "joint", prior_spec = "optimal";
    std::string channel_spec = "optimal", out_path, format;
    double tol = 0.0;
    int grid = 0;

    auto add_common = [&](CLI::App* cmd, const char* default_format) {
        cmd->add_option("--out", out_path, "output path (stdout when omitted)");
        format = default_format;
        cmd->add_option("--format", format, "csv|json");
        cmd->add_option("--tol", tol, "solver tolerance override");
        cmd->add_option("--grid", grid, "w-grid resolution override");
    };

    CLI::App* capacity = app.add_subcommand("capacity", "solve a capacity game");
    capacity->add_option("--k", k_text, "coalition size")->required();
    capacity->add_option("--decoder", decoder_text, "joint|simple");
    capacity->add_option("--prior", prior_spec,
                         "optimal | arcsine | beta:<t> | point:<w> | @<path>");
    capacity->add_option("--channel", channel_spec, "optimal | interleaving | @<path>");
    add_common(capacity, "json");

    CLI::App* bounds = app.add_subcommand("bounds", "closed-form capacity bounds");
    bounds->add_option("--k", k_text, "coalition size or range lo:hi")->required();
    bounds->add_option("--decoder", decoder_text, "joint|simple|both");
    add_common(bounds, "csv");

    CLI::App* sweep = app.add_subcommand("sweep", "saddle-point sweep over k");
    sweep->add_option("--k", k_text, "coalition size range lo:hi")->required();
    sweep->add_option("--decoder", decoder_text, "joint|simple|both");
    add_common(sweep, "csv");

    CLI::App* asymptotics = app.add_subcommand("asymptotics", "large-coalition analysis");
    asymptotics->add_option("--k", k_text, "coalition size")->required();
    asymptotics->add_option("--prior", prior_spec, "arcsine | beta:<t>");
    add_common(asymptotics, "json");

    CLI::App* oracle = app.add_subcommand("oracle-check", "brute-force cross-checks");
    oracle->add_option("--k", k_text, "coalition size (2..5)");
    oracle->add_option("--decoder", decoder_text, "joint|simple|both");
    add_common(oracle, "json");

    CLI11_PARSE(app, argc, argv);

    try {
        if (capacity->parsed()) {
            KRange r = parse_k_range(k_text);
            if (prior_spec == "optimal" && channel_spec == "interleaving")
                return run_capacity(r.lo, parse_decoders(decoder_text)[0], prior_spec,
                                    channel_spec, tol, grid, out_path);
            return run_capacity(r.lo, parse_decoders(decoder_text)[0], prior_spec,
                                channel_spec, tol, grid, out_path);
        }
        if (bounds->parsed())
            return run_bounds(parse_k_range(k_text), parse_decoders(decoder_text), format,
                              out_path);
        if (sweep->parsed()) {
            if (decoder_text == "joint" || decoder_text == "simple" ||
                decoder_text == "both")
                return run_sweep(parse_k_range(k_text), parse_decoders(decoder_text), tol,
                                 grid, out_path);
            die("sweep: bad --decoder");
        }
        if (asymptotics->parsed())
            return run_asymptotics(parse_k_range(k_text).lo, prior_spec, format, tol,
                                   out_path);
        if (oracle->parsed())
            return run_oracle_check(parse_k_range(k_text).lo, parse_decoders(decoder_text),
                                    tol, out_path);
    } catch (const CLI::Error& e) {
        return app.exit(e);
    }
    return 1;
}
