#pragma once
#include "propriety/rational.hpp"

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

namespace propriety {

enum class FamilyKind { Binomial, Bernoulli, Poisson };

/// Whether the cumulant of the family's exponential form is monotone.
/// True for binomial, Bernoulli, Poisson (also gamma, inverse Gaussian);
/// false for the normal family. Drives the exponential-family rank check.
bool cumulant_is_monotone(FamilyKind family);

std::string family_name(FamilyKind family);

enum class LinkKind { Logit, Probit, Log, UserCdf };

struct Link {
    LinkKind kind = LinkKind::Logit;
    // Only meaningful for UserCdf: the largest finite absolute moment order
    // the user vouches for. Logit and Probit have moments of every order.
    std::optional<double> declared_moment_order;

    bool all_moments_finite() const {
        return kind == LinkKind::Logit || kind == LinkKind::Probit;
    }

    /// Inverse-link mean on the unit-trial scale: F(eta) or exp(eta).
    double mean(double eta) const;
    /// d mean / d eta; strictly positive for Logit, Probit, Log.
    double mean_derivative(double eta) const;
};

std::string link_name(LinkKind link);

enum class PriorKind { Gamma, Power };

// Prior tau_j ~ tau^(a-1) exp(-b tau) on the precision of one block of
// random effects. b > 0 is the gamma form, b = 0 the power form.
struct PriorBlock {
    int q = 0;
    Rational a;
    Rational b;

    PriorKind kind() const { return b > 0 ? PriorKind::Gamma : PriorKind::Power; }
    bool operator==(const PriorBlock&) const = default;
};

struct GlmmModel {
    FamilyKind family = FamilyKind::Bernoulli;
    Link link;
    std::vector<long> y;
    std::vector<long> m; // binomial trial counts; empty otherwise
    RatMatrix X;
    RatMatrix Z;
    std::vector<PriorBlock> blocks;
};

// A model whose invariants have been checked, with block column offsets
// resolved and double mirrors cached for numeric work. Immutable; safe to
// share across threads.
class ValidatedModel {
public:
    const GlmmModel& model() const { return model_; }
    FamilyKind family() const { return model_.family; }
    const Link& link() const { return model_.link; }

    int n() const { return n_; }
    int p() const { return p_; }
    int q() const { return q_; }
    int block_count() const { return static_cast<int>(model_.blocks.size()); }
    const std::vector<PriorBlock>& blocks() const { return model_.blocks; }
    int block_offset(int j) const { return offsets_[static_cast<std::size_t>(j)]; }

    const std::vector<long>& y() const { return model_.y; }
    /// Trial counts: m for binomial, all ones for Bernoulli.
    const std::vector<long>& trials() const { return trials_; }
    const RatMatrix& X() const { return model_.X; }
    const RatMatrix& Z() const { return model_.Z; }
    const Eigen::MatrixXd& Xd() const { return xd_; }
    const Eigen::MatrixXd& Zd() const { return zd_; }

    bool all_gamma() const;
    bool all_power() const;

    friend ValidatedModel validate(const GlmmModel& model);

private:
    GlmmModel model_;
    std::vector<long> trials_;
    std::vector<int> offsets_;
    Eigen::MatrixXd xd_, zd_;
    int n_ = 0, p_ = 0, q_ = 0;
};

/// Checks every model invariant and resolves block offsets. Throws
/// DimensionMismatch, ResponseOutOfRange, EmptyBlock, WrongLink or
/// WrongPriorKind. Idempotent: revalidating a validated model is a no-op.
ValidatedModel validate(const GlmmModel& model);
ValidatedModel validate(const ValidatedModel& model);

} // namespace propriety
