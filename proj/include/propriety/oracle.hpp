#pragma once
#include "propriety/model.hpp"

#include <Eigen/Core>
#include <vector>

namespace propriety {

struct QuadratureEstimate {
    double value = 0.0;
    double box = 0.0; // beta truncation half-width
    int tau_nodes = 0;
    int beta_nodes = 0;
    int u_nodes_cap = 0;
    double rel_error_est = 0.0;
};

struct MarginalSettings {
    double rel_tol = 1e-8;
    int start_nodes = 8;
    int newton_max_iterations = 100;
};

struct OracleSettings {
    int tau_nodes = 24;
    int beta_nodes = 24;
    double rel_tol = 1e-6;
    int max_refinements = 2;
    MarginalSettings marginal;
};

/// Log of the joint density of (y, u) at (beta, tau): every observation's
/// log pmf plus the exact multivariate normal log density of u, constants
/// included.
double complete_loglik(const Eigen::VectorXd& beta, const std::vector<double>& tau,
                       const Eigen::VectorXd& u, const ValidatedModel& model);

/// Log marginal likelihood log L(beta, tau | y) by adaptive Gauss-Hermite
/// quadrature centered at the mode of the u-integrand (damped Newton),
/// node counts doubled until the value stabilizes. Desk scale: q <= 4.
double marginal_loglik(const Eigen::VectorXd& beta, const std::vector<double>& tau,
                       const ValidatedModel& model, const MarginalSettings& settings = {});

/// Truncated normalizing constant: integral of pi(tau) L(beta, tau | y)
/// over beta in [-B, B]^p for each requested half-width B, with tau mapped
/// to (0,1) through tau = s/(1-s). Desk scale: p <= 2, q <= 2, r = 1.
/// A sequence whose successive ratios approach 1 is consistent with a
/// finite integral; growth that tracks B is consistent with impropriety,
/// never proof of either.
std::vector<QuadratureEstimate> truncated_cy(const ValidatedModel& model,
                                             const std::vector<double>& half_widths,
                                             const OracleSettings& settings = {});

/// Central finite difference of -d^2/dtau^2 log L(beta_hat, tau | y) for a
/// single-block model, for comparison with the information formula behind
/// the Jeffreys density.
double fisher_fd_oracle(const ValidatedModel& model, double tau,
                        const MarginalSettings& settings = {});

} // namespace propriety
