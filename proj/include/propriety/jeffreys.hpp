#pragma once
#include "propriety/glm.hpp"
#include "propriety/model.hpp"

#include <Eigen/Core>
#include <vector>

namespace propriety {

// Plug-in posterior moments of one random-effect level given tau, from the
// Laplace-style approximation with the mean-derivative frozen at the
// fixed-effects fit.
struct ConditionalMoments {
    double u_tilde = 0.0;
    double v_tilde = 0.0;
};

ConditionalMoments approx_conditional_moments(const ValidatedModel& model,
                                              int z_column,
                                              const Eigen::VectorXd& beta,
                                              double tau);

// Approximate independence Jeffreys prior for the block precisions,
// built from per-level constants c_{im} = sum_k z_imk^2 t'(x_mk beta_hat).
class JeffreysPrior {
public:
    JeffreysPrior(Eigen::VectorXd beta_hat, std::vector<std::vector<double>> c_constants);

    const Eigen::VectorXd& beta_hat() const { return beta_hat_; }
    int block_count() const { return static_cast<int>(c_.size()); }
    const std::vector<double>& c_constants(int block) const;

    /// [sum_m { tau^-2/2 - (tau + c_im)^-2/2 }]^(1/2); real for every
    /// tau > 0 since each bracket term is nonnegative.
    double density(int block, double tau) const;

    /// (sum_m sqrt(c_im)/2)^(1/2) * tau^(-5/4); dominates the density
    /// everywhere and is a power prior with exponent a = -1/4.
    double envelope(int block, double tau) const;
    double envelope_scale(int block) const;

    /// The bracketed information term itself; equals density squared.
    double fisher_info(int block, double tau) const;

private:
    Eigen::VectorXd beta_hat_;
    std::vector<std::vector<double>> c_;
};

/// Fits the fixed-effects GLM and assembles the per-level constants, one
/// per column of Z, grouped by block. Refuses separated or non-converged
/// fits rather than substitute a penalized estimate.
JeffreysPrior build_jeffreys(const ValidatedModel& model);

/// Closed-form comparator prior for the one-intercept case (p = q = r = 1):
/// (1 + n e^b tau / (1+e^b)^2)^-1 for binary data, (1 + n e^b tau)^-1 for
/// Poisson, both with unit proportionality constant.
double nk_density(FamilyKind family, int n, double beta_hat, double tau);

/// The unique tau where the one-intercept Jeffreys density crosses the
/// comparator; their log-ratio is strictly decreasing from +inf to -inf.
double crossover_tau0(FamilyKind family, int n, double beta_hat,
                      double rel_tol = 1e-10);

} // namespace propriety
