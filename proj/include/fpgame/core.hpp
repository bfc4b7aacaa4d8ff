#ifndef FPGAME_CORE_HPP
#define FPGAME_CORE_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fpg {

/// Binary entropy h(p) in bits, with the 0*log(0) = 0 convention.
/// Exact zeros at p = 0 and p = 1. Throws std::domain_error outside [0,1].
double binary_entropy(double p);

/// KL divergence d(r||s) between Bernoulli(r) and Bernoulli(s), in bits.
/// Throws std::domain_error when s is 0 or 1 with r != s (infinite divergence)
/// or when either argument leaves [0,1].
double kl_bernoulli(double r, double s);

/// Partial derivative of d(r||s) with respect to r, in bits.
double kl_bernoulli_dr(double r, double s);
/// Partial derivative of d(r||s) with respect to s, in bits.
double kl_bernoulli_ds(double r, double s);

/// log of the binomial coefficient C(n, z).
double log_choose(int n, int z);

/// Binomial(n, w) pmf over z = 0..n; exact point masses at w in {0,1}.
/// Stable up to n ~ 1e4 (log-space evaluation above n = 60).
std::vector<double> binomial_pmf(int n, double w);

enum class DecoderKind { Joint, Simple };

const char* decoder_name(DecoderKind d);
DecoderKind decoder_from_name(const std::string& name);

/// The three conditional laws of Z given W=w (and given X1 for the shifted
/// ones): alpha is Binomial(k,w); alpha1/alpha0 are the k-1 trial laws with
/// and without the shift from X1 = 1.
struct KernelTriple {
    int k = 0;
    double w = 0.0;
    std::vector<double> alpha;   // size k+1
    std::vector<double> alpha1;  // alpha1[0] == 0
    std::vector<double> alpha0;  // alpha0[k] == 0
};

KernelTriple kernels(int k, double w);

struct ChannelViolation {
    enum class Kind { Marking, Range, Symmetry };
    Kind kind;
    int index;
    double magnitude;
    std::string describe() const;
};

struct ValidationReport {
    std::vector<ChannelViolation> violations;
    bool ok() const { return violations.empty(); }
};

/// The colluders' strategy: p[z] = Pr(Y=1 | Z=z) for a coalition of size k.
/// Immutable. Checked construction enforces the marking constraint
/// p[0] = 0, p[k] = 1 and p[z] in [0,1]; symmetry is a property, not a
/// construction requirement.
class CollusionChannel {
public:
    CollusionChannel(int k, std::vector<double> p);

    /// Carries an arbitrary candidate vector without validation.
    static CollusionChannel unchecked(int k, std::vector<double> p);

    /// The interleaving attack p[z] = z/k.
    static CollusionChannel interleaving(int k);

    /// Builds the symbol-symmetric channel determined by the free
    /// coordinates q[0..m-1] = p[1..m], m = floor((k-1)/2); mirrors the
    /// rest and pins p[k/2] = 1/2 for even k.
    static CollusionChannel from_free_coords(int k, std::span<const double> q);

    int k() const { return k_; }
    const std::vector<double>& probs() const { return p_; }
    double operator[](int z) const { return p_[static_cast<size_t>(z)]; }

    /// Number of free coordinates under the symmetric reduction.
    static int free_coord_count(int k) { return (k - 1) / 2; }
    std::vector<double> free_coords() const;

    bool is_symmetric(double tol = 1e-9) const;

    /// Fixed point check of p[z] -> (p[z] + 1 - p[k-z]) / 2.
    CollusionChannel symmetrized() const;

private:
    CollusionChannel() = default;
    int k_ = 0;
    std::vector<double> p_;
};

/// Reports every violated constraint with index and magnitude. Never throws.
ValidationReport validate_channel(const CollusionChannel& c, bool symmetric);

/// Discrete embedding prior P_W with finite spectrum.
class FiniteSpectrumPrior {
public:
    FiniteSpectrumPrior(std::vector<double> support, std::vector<double> masses);

    static FiniteSpectrumPrior point_mass(double w);

    const std::vector<double>& support() const { return support_; }
    const std::vector<double>& masses() const { return masses_; }
    size_t size() const { return support_.size(); }

    bool is_symmetric(double tol = 1e-9) const;

private:
    std::vector<double> support_;
    std::vector<double> masses_;
};

/// Continuous embedding prior on (0,1). The endpoint exponents (a,b)
/// describe pdf ~ w^a near 0 and (1-w)^b near 1 and drive quadrature
/// construction. pdf takes (w, 1-w) so callers can stay accurate near the
/// endpoints.
class ContinuousPrior {
public:
    enum class Kind { Beta, Arcsine, CustomPdf };

    static ContinuousPrior beta(double theta);
    static ContinuousPrior arcsine();
    static ContinuousPrior custom(std::function<double(double, double)> pdf,
                                  double exponent_at_0, double exponent_at_1);

    Kind kind() const { return kind_; }
    double theta() const { return theta_; }
    double pdf(double w, double one_minus_w) const { return pdf_(w, one_minus_w); }
    double pdf(double w) const { return pdf_(w, 1.0 - w); }
    double exponent_at_0() const { return exp0_; }
    double exponent_at_1() const { return exp1_; }

private:
    ContinuousPrior() = default;
    Kind kind_ = Kind::Arcsine;
    double theta_ = 0.5;
    double exp0_ = -0.5, exp1_ = -0.5;
    std::function<double(double, double)> pdf_;
};

/// log Beta(theta, theta) normalization constant.
double log_beta_symmetric(double theta);

}  // namespace fpg

#endif
