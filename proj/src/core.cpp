#include "fpgame/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fpg {

namespace {
constexpr double kLn2 = 0.6931471805599453;
}

double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::domain_error("binary_entropy: argument outside [0,1]");
    if (p == 0.0 || p == 1.0) return 0.0;
    return -(p * std::log2(p) + (1.0 - p) * std::log2(1.0 - p));
}

double kl_bernoulli(double r, double s) {
    if (!(r >= 0.0 && r <= 1.0) || !(s >= 0.0 && s <= 1.0))
        throw std::domain_error("kl_bernoulli: argument outside [0,1]");
    if (s == 0.0 || s == 1.0) {
        if (r == s) return 0.0;
        throw std::domain_error("kl_bernoulli: infinite divergence (s on boundary, r != s)");
    }
    double t = 0.0;
    if (r > 0.0) t += r * std::log2(r / s);
    if (r < 1.0) t += (1.0 - r) * std::log2((1.0 - r) / (1.0 - s));
    return t;
}

double kl_bernoulli_dr(double r, double s) {
    return std::log2((r * (1.0 - s)) / (s * (1.0 - r)));
}

double kl_bernoulli_ds(double r, double s) {
    return (s - r) / (s * (1.0 - s) * kLn2);
}

double log_choose(int n, int z) {
    if (z < 0 || z > n) return -std::numeric_limits<double>::infinity();
    return std::lgamma(n + 1.0) - std::lgamma(z + 1.0) - std::lgamma(n - z + 1.0);
}

std::vector<double> binomial_pmf(int n, double w) {
    std::vector<double> pmf(static_cast<size_t>(n) + 1, 0.0);
    if (w == 0.0) { pmf[0] = 1.0; return pmf; }
    if (w == 1.0) { pmf[static_cast<size_t>(n)] = 1.0; return pmf; }
    if (n <= 60) {
        // multiplicative recurrence keeps small-n results bit-stable
        double ratio = w / (1.0 - w);
        pmf[0] = std::pow(1.0 - w, n);
        for (int z = 1; z <= n; ++z)
            pmf[static_cast<size_t>(z)] =
                pmf[static_cast<size_t>(z - 1)] * ratio * (n - z + 1) / z;
    } else {
        double lw = std::log(w), lom = std::log1p(-w);
        for (int z = 0; z <= n; ++z)
            pmf[static_cast<size_t>(z)] =
                std::exp(log_choose(n, z) + z * lw + (n - z) * lom);
    }
    return pmf;
}

const char* decoder_name(DecoderKind d) {
    return d == DecoderKind::Joint ? "joint" : "simple";
}

DecoderKind decoder_from_name(const std::string& name) {
    if (name == "joint") return DecoderKind::Joint;
    if (name == "simple") return DecoderKind::Simple;
    throw std::invalid_argument("unknown decoder '" + name + "' (expected joint|simple)");
}

KernelTriple kernels(int k, double w) {
    if (k < 2) throw std::domain_error("kernels: k must be >= 2");
    if (!(w >= 0.0 && w <= 1.0)) throw std::domain_error("kernels: w outside [0,1]");
    KernelTriple t;
    t.k = k;
    t.w = w;
    t.alpha = binomial_pmf(k, w);
    std::vector<double> base = binomial_pmf(k - 1, w);
    t.alpha1.assign(static_cast<size_t>(k) + 1, 0.0);
    for (int z = 1; z <= k; ++z) t.alpha1[static_cast<size_t>(z)] = base[static_cast<size_t>(z - 1)];
    t.alpha0 = base;
    t.alpha0.push_back(0.0);
    return t;
}

std::string ChannelViolation::describe() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::Marking: os << "marking"; break;
        case Kind::Range: os << "range"; break;
        case Kind::Symmetry: os << "symmetry"; break;
    }
    os << " violation at z=" << index << " magnitude " << magnitude;
    return os.str();
}

CollusionChannel::CollusionChannel(int k, std::vector<double> p) : k_(k), p_(std::move(p)) {
    if (k_ < 2) throw std::invalid_argument("CollusionChannel: k must be >= 2");
    if (p_.size() != static_cast<size_t>(k_) + 1)
        throw std::invalid_argument("CollusionChannel: p must have k+1 entries");
    auto report = validate_channel(*this, false);
    if (!report.ok())
        throw std::invalid_argument("CollusionChannel: " + report.violations.front().describe());
}

CollusionChannel CollusionChannel::unchecked(int k, std::vector<double> p) {
    CollusionChannel c;
    c.k_ = k;
    c.p_ = std::move(p);
    return c;
}

CollusionChannel CollusionChannel::interleaving(int k) {
    if (k < 2) throw std::invalid_argument("interleaving: k must be >= 2");
    std::vector<double> p(static_cast<size_t>(k) + 1);
    for (int z = 0; z <= k; ++z) p[static_cast<size_t>(z)] = static_cast<double>(z) / k;
    return CollusionChannel(k, std::move(p));
}

CollusionChannel CollusionChannel::from_free_coords(int k, std::span<const double> q) {
    int m = free_coord_count(k);
    if (static_cast<int>(q.size()) != m)
        throw std::invalid_argument("from_free_coords: expected floor((k-1)/2) coordinates");
    std::vector<double> p(static_cast<size_t>(k) + 1, 0.0);
    p[static_cast<size_t>(k)] = 1.0;
    for (int z = 1; z <= m; ++z) {
        p[static_cast<size_t>(z)] = q[static_cast<size_t>(z - 1)];
        p[static_cast<size_t>(k - z)] = 1.0 - q[static_cast<size_t>(z - 1)];
    }
    if (k % 2 == 0) p[static_cast<size_t>(k / 2)] = 0.5;
    return CollusionChannel(k, std::move(p));
}

std::vector<double> CollusionChannel::free_coords() const {
    int m = free_coord_count(k_);
    std::vector<double> q(static_cast<size_t>(m));
    for (int z = 1; z <= m; ++z) q[static_cast<size_t>(z - 1)] = p_[static_cast<size_t>(z)];
    return q;
}

bool CollusionChannel::is_symmetric(double tol) const {
    for (int z = 0; z <= k_; ++z)
        if (std::abs(p_[static_cast<size_t>(z)] - (1.0 - p_[static_cast<size_t>(k_ - z)])) > tol)
            return false;
    return true;
}

CollusionChannel CollusionChannel::symmetrized() const {
    std::vector<double> q(p_.size());
    for (int z = 0; z <= k_; ++z)
        q[static_cast<size_t>(z)] =
            0.5 * (p_[static_cast<size_t>(z)] + 1.0 - p_[static_cast<size_t>(k_ - z)]);
    return CollusionChannel::unchecked(k_, std::move(q));
}

ValidationReport validate_channel(const CollusionChannel& c, bool symmetric) {
    ValidationReport report;
    const auto& p = c.probs();
    int k = c.k();
    if (p.size() != static_cast<size_t>(k) + 1) {
        report.violations.push_back({ChannelViolation::Kind::Range, -1,
                                     static_cast<double>(p.size())});
        return report;
    }
    if (p[0] != 0.0)
        report.violations.push_back({ChannelViolation::Kind::Marking, 0, std::abs(p[0])});
    if (p[static_cast<size_t>(k)] != 1.0)
        report.violations.push_back({ChannelViolation::Kind::Marking, k,
                                     std::abs(1.0 - p[static_cast<size_t>(k)])});
    for (int z = 0; z <= k; ++z) {
        double v = p[static_cast<size_t>(z)];
        if (v < 0.0 || v > 1.0)
            report.violations.push_back({ChannelViolation::Kind::Range, z,
                                         v < 0.0 ? -v : v - 1.0});
    }
    if (symmetric) {
        constexpr double tol = 1e-9;  // solver outputs are symmetric only to optimizer tolerance
        for (int z = 0; z <= k / 2; ++z) {
            double dev = std::abs(p[static_cast<size_t>(z)] -
                                  (1.0 - p[static_cast<size_t>(k - z)]));
            if (dev > tol)
                report.violations.push_back({ChannelViolation::Kind::Symmetry, z, dev});
        }
    }
    return report;
}

FiniteSpectrumPrior::FiniteSpectrumPrior(std::vector<double> support, std::vector<double> masses)
    : support_(std::move(support)), masses_(std::move(masses)) {
    if (support_.empty() || support_.size() != masses_.size())
        throw std::invalid_argument("FiniteSpectrumPrior: support/mass size mismatch");
    double sum = 0.0;
    for (size_t i = 0; i < support_.size(); ++i) {
        if (!(support_[i] >= 0.0 && support_[i] <= 1.0))
            throw std::invalid_argument("FiniteSpectrumPrior: support point outside [0,1]");
        if (!(masses_[i] > 0.0))
            throw std::invalid_argument("FiniteSpectrumPrior: masses must be positive");
        if (i > 0 && !(support_[i] > support_[i - 1]))
            throw std::invalid_argument("FiniteSpectrumPrior: support must be strictly increasing");
        sum += masses_[i];
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("FiniteSpectrumPrior: masses must sum to 1");
}

FiniteSpectrumPrior FiniteSpectrumPrior::point_mass(double w) {
    return FiniteSpectrumPrior({w}, {1.0});
}

bool FiniteSpectrumPrior::is_symmetric(double tol) const {
    size_t n = support_.size();
    for (size_t i = 0; i < n; ++i) {
        double mirrored = 1.0 - support_[n - 1 - i];
        if (std::abs(support_[i] - mirrored) > tol) return false;
        if (std::abs(masses_[i] - masses_[n - 1 - i]) > tol) return false;
    }
    return true;
}

double log_beta_symmetric(double theta) {
    return 2.0 * std::lgamma(theta) - std::lgamma(2.0 * theta);
}

ContinuousPrior ContinuousPrior::beta(double theta) {
    if (!(theta > 0.0)) throw std::invalid_argument("ContinuousPrior::beta: theta must be > 0");
    ContinuousPrior p;
    p.kind_ = Kind::Beta;
    p.theta_ = theta;
    p.exp0_ = p.exp1_ = theta - 1.0;
    double log_norm = log_beta_symmetric(theta);
    p.pdf_ = [theta, log_norm](double w, double omw) {
        return std::exp((theta - 1.0) * (std::log(w) + std::log(omw)) - log_norm);
    };
    return p;
}

ContinuousPrior ContinuousPrior::arcsine() {
    ContinuousPrior p = beta(0.5);
    p.kind_ = Kind::Arcsine;
    constexpr double pi = 3.141592653589793238462643383279502884;
    p.pdf_ = [](double w, double omw) {
        return 1.0 / (pi * std::sqrt(w * omw));
    };
    return p;
}

ContinuousPrior ContinuousPrior::custom(std::function<double(double, double)> pdf,
                                        double exponent_at_0, double exponent_at_1) {
    if (!pdf) throw std::invalid_argument("ContinuousPrior::custom: pdf required");
    if (exponent_at_0 <= -1.0 || exponent_at_1 <= -1.0)
        throw std::invalid_argument("ContinuousPrior::custom: pdf not integrable with given hints");
    ContinuousPrior p;
    p.kind_ = Kind::CustomPdf;
    p.theta_ = 0.0;
    p.exp0_ = exponent_at_0;
    p.exp1_ = exponent_at_1;
    p.pdf_ = std::move(pdf);
    return p;
}

}  // namespace fpg
