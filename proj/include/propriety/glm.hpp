#pragma once
#include "propriety/model.hpp"

#include <Eigen/Core>

namespace propriety {

struct GlmFit {
    Eigen::VectorXd beta_hat;
    bool converged = false;
    int iterations = 0;
    // Set when the fixed-effects MLE does not exist: for binomial-form data
    // this coincides with infeasibility of the positive-null-vector program
    // on the signed design.
    bool separation_flag = false;
    double deviance = 0.0;
};

struct GlmSettings {
    double deviance_rel_tol = 1e-10;
    double score_tol = 1e-8;
    int max_iterations = 100;
};

/// Fixed-effects-only fit by iteratively reweighted least squares with
/// step-halving. Requires full-column-rank X (exact check); a fit that
/// stalls is returned with converged = false rather than thrown.
GlmFit fit_glm(const ValidatedModel& model, const GlmSettings& settings = {});

} // namespace propriety
