#include "propriety/jeffreys.hpp"
#include "propriety/errors.hpp"
#include "propriety/special.hpp"

#include <cmath>

namespace propriety {

namespace {

// tau^-2/2 - (tau+c)^-2/2 rewritten as c(2 tau + c) / (2 tau^2 (tau+c)^2):
// no cancellation for tau >> c and manifestly nonnegative.
double info_term(double tau, double c) {
    const double tc = tau + c;
    return c * (2.0 * tau + c) / (2.0 * tau * tau * tc * tc);
}

void require_positive_tau(double tau) {
    if (!(tau > 0.0)) throw NonpositiveTau("tau must be positive");
}

// Per-unit mean derivative times trial count: d E(y) / d eta at eta.
double mean_derivative_at(const ValidatedModel& model, int row, double eta) {
    const double trials = model.family() == FamilyKind::Poisson
                              ? 1.0
                              : static_cast<double>(model.trials()[static_cast<std::size_t>(row)]);
    return trials * model.link().mean_derivative(eta);
}

double mean_at(const ValidatedModel& model, int row, double eta) {
    const double trials = model.family() == FamilyKind::Poisson
                              ? 1.0
                              : static_cast<double>(model.trials()[static_cast<std::size_t>(row)]);
    return trials * model.link().mean(eta);
}

} // namespace

ConditionalMoments approx_conditional_moments(const ValidatedModel& model,
                                              int z_column,
                                              const Eigen::VectorXd& beta,
                                              double tau) {
    require_positive_tau(tau);
    const Eigen::VectorXd eta = model.Xd() * beta;
    double resid_sum = 0.0, info_sum = 0.0;
    for (int i = 0; i < model.n(); ++i) {
        const double z = model.Zd()(i, z_column);
        if (z == 0.0) continue;
        const double yi = static_cast<double>(model.y()[static_cast<std::size_t>(i)]);
        resid_sum += z * (yi - mean_at(model, i, eta(i)));
        info_sum += z * z * mean_derivative_at(model, i, eta(i));
    }
    ConditionalMoments cm;
    cm.u_tilde = resid_sum / tau;
    cm.v_tilde = 1.0 / (tau + info_sum);
    return cm;
}

JeffreysPrior::JeffreysPrior(Eigen::VectorXd beta_hat,
                             std::vector<std::vector<double>> c_constants)
    : beta_hat_(std::move(beta_hat)), c_(std::move(c_constants)) {}

const std::vector<double>& JeffreysPrior::c_constants(int block) const {
    return c_.at(static_cast<std::size_t>(block));
}

double JeffreysPrior::fisher_info(int block, double tau) const {
    require_positive_tau(tau);
    double sum = 0.0;
    for (double c : c_.at(static_cast<std::size_t>(block)))
        sum += info_term(tau, c);
    return sum;
}

double JeffreysPrior::density(int block, double tau) const {
    return std::sqrt(fisher_info(block, tau));
}

double JeffreysPrior::envelope_scale(int block) const {
    double sum = 0.0;
    for (double c : c_.at(static_cast<std::size_t>(block)))
        sum += std::sqrt(c) / 2.0;
    return std::sqrt(sum);
}

double JeffreysPrior::envelope(int block, double tau) const {
    require_positive_tau(tau);
    return envelope_scale(block) * std::pow(tau, -1.25);
}

JeffreysPrior build_jeffreys(const ValidatedModel& model) {
    const GlmFit fit = fit_glm(model);
    if (fit.separation_flag)
        throw SeparationError("the fixed-effects MLE does not exist; "
                              "no plug-in value for the prior constants");
    if (!fit.converged)
        throw NotConverged("fixed-effects fit did not converge");

    const Eigen::VectorXd eta = model.Xd() * fit.beta_hat;
    std::vector<std::vector<double>> c(static_cast<std::size_t>(model.block_count()));
    for (int j = 0; j < model.block_count(); ++j) {
        const int offset = model.block_offset(j);
        const int qj = model.blocks()[static_cast<std::size_t>(j)].q;
        auto& cj = c[static_cast<std::size_t>(j)];
        cj.resize(static_cast<std::size_t>(qj), 0.0);
        for (int level = 0; level < qj; ++level) {
            double sum = 0.0;
            for (int i = 0; i < model.n(); ++i) {
                const double z = model.Zd()(i, offset + level);
                if (z == 0.0) continue;
                sum += z * z * mean_derivative_at(model, i, eta(i));
            }
            cj[static_cast<std::size_t>(level)] = sum;
        }
    }
    return JeffreysPrior(fit.beta_hat, std::move(c));
}

double nk_density(FamilyKind family, int n, double beta_hat, double tau) {
    if (tau < 0.0) throw NonpositiveTau("tau must be nonnegative");
    const double eb = std::exp(beta_hat);
    switch (family) {
        case FamilyKind::Bernoulli:
            return 1.0 / (1.0 + n * eb * tau / ((1.0 + eb) * (1.0 + eb)));
        case FamilyKind::Poisson:
            return 1.0 / (1.0 + n * eb * tau);
        case FamilyKind::Binomial:
            break;
    }
    throw OutOfScope("comparator prior has closed forms for binary and poisson "
                     "one-intercept models only");
}

double crossover_tau0(FamilyKind family, int n, double beta_hat, double rel_tol) {
    const double eb = std::exp(beta_hat);
    double c = 0.0;
    switch (family) {
        case FamilyKind::Bernoulli:
            c = n * eb / ((1.0 + eb) * (1.0 + eb));
            break;
        case FamilyKind::Poisson:
            c = n * eb;
            break;
        case FamilyKind::Binomial:
            throw OutOfScope("crossover is defined for the binary and poisson "
                             "one-intercept comparators");
    }

    // log pi_J - log pi_NK, strictly decreasing with a sign change.
    const auto f = [c](double tau) {
        return 0.5 * std::log(info_term(tau, c)) + std::log1p(c * tau);
    };

    double lo = 1.0, hi = 2.0;
    while (f(lo) < 0.0) lo *= 0.5;
    while (f(hi) > 0.0) hi *= 2.0;
    for (int it = 0; it < 200 && (hi - lo) > rel_tol * lo; ++it) {
        const double mid = std::sqrt(lo * hi);
        (f(mid) > 0.0 ? lo : hi) = mid;
    }
    return std::sqrt(lo * hi);
}

} // namespace propriety
