#include "propriety/glm.hpp"
#include "propriety/design.hpp"
#include "propriety/errors.hpp"
#include "propriety/positive_null.hpp"
#include "propriety/rank.hpp"
#include "propriety/special.hpp"

#include <Eigen/Cholesky>

#include <cmath>

namespace propriety {

namespace {

double xlogy(double x, double y) {
    return x == 0.0 ? 0.0 : x * std::log(y);
}

struct IrlsTerms {
    double mu, dmu_deta, variance;
};

IrlsTerms irls_terms(const ValidatedModel& model, double eta, double trials) {
    IrlsTerms t{};
    switch (model.family()) {
        case FamilyKind::Binomial:
        case FamilyKind::Bernoulli: {
            const double f = model.link().mean(eta);
            t.mu = trials * f;
            t.dmu_deta = trials * model.link().mean_derivative(eta);
            t.variance = std::max(trials * f * (1.0 - f), 1e-300);
            break;
        }
        case FamilyKind::Poisson: {
            t.mu = std::exp(eta);
            t.dmu_deta = t.mu;
            t.variance = std::max(t.mu, 1e-300);
            break;
        }
    }
    return t;
}

double deviance(const ValidatedModel& model, const Eigen::VectorXd& eta) {
    double dev = 0.0;
    for (int i = 0; i < model.n(); ++i) {
        const double yi = static_cast<double>(model.y()[static_cast<std::size_t>(i)]);
        switch (model.family()) {
            case FamilyKind::Binomial:
            case FamilyKind::Bernoulli: {
                const double mi = static_cast<double>(model.trials()[static_cast<std::size_t>(i)]);
                const double f = model.link().mean(eta(i));
                const double mu = std::min(std::max(mi * f, 1e-12), mi * (1.0 - 1e-12));
                dev += 2.0 * (xlogy(yi, yi / mu) + xlogy(mi - yi, (mi - yi) / (mi - mu)));
                break;
            }
            case FamilyKind::Poisson: {
                const double mu = std::exp(eta(i));
                dev += 2.0 * (xlogy(yi, yi / mu) - (yi - mu));
                break;
            }
        }
    }
    return dev;
}

bool mle_missing(const ValidatedModel& model) {
    if (model.family() == FamilyKind::Poisson) return false;
    if (model.family() == FamilyKind::Bernoulli) {
        const auto [xstar, zstar] = build_binary_star(model);
        (void)zstar;
        return !exists_positive_null(xstar).exists;
    }
    const Partition part = partition_indices(model.y(), model.trials());
    const DesignBundle bundle = build_bundle(model, part);
    return !exists_positive_null(bundle.xstar_tri).exists;
}

Eigen::VectorXd initial_beta(const ValidatedModel& model) {
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(model.p());

    int intercept = -1;
    for (int j = 0; j < model.p(); ++j) {
        bool ones = true;
        for (int i = 0; i < model.n() && ones; ++i)
            ones = model.X()(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) == 1;
        if (ones) { intercept = j; break; }
    }
    if (intercept < 0 || model.n() == 0) return beta;

    double ysum = 0.0, msum = 0.0;
    for (int i = 0; i < model.n(); ++i) {
        ysum += static_cast<double>(model.y()[static_cast<std::size_t>(i)]);
        if (model.family() != FamilyKind::Poisson)
            msum += static_cast<double>(model.trials()[static_cast<std::size_t>(i)]);
    }
    switch (model.family()) {
        case FamilyKind::Binomial:
        case FamilyKind::Bernoulli: {
            const double pbar = (ysum + 0.5) / (msum + 1.0);
            if (model.link().kind == LinkKind::Logit)
                beta(intercept) = std::log(pbar / (1.0 - pbar));
            else if (model.link().kind == LinkKind::Probit)
                beta(intercept) = normal_quantile(pbar);
            break;
        }
        case FamilyKind::Poisson:
            beta(intercept) = std::log((ysum + 0.5) / (model.n() + 1.0));
            break;
    }
    return beta;
}

} // namespace

GlmFit fit_glm(const ValidatedModel& model, const GlmSettings& settings) {
    if (model.link().kind == LinkKind::UserCdf)
        throw WrongLink("cannot fit a model with an unevaluable link");
    if (!is_full_column_rank(model.X()))
        throw RankDeficient("X is rank deficient; the fixed-effects fit is not identified");

    const Eigen::MatrixXd& X = model.Xd();
    const int n = model.n(), p = model.p();

    GlmFit fit;
    fit.separation_flag = mle_missing(model);
    fit.beta_hat = initial_beta(model);

    Eigen::VectorXd eta = X * fit.beta_hat;
    double dev = deviance(model, eta);

    for (int iter = 1; iter <= settings.max_iterations; ++iter) {
        fit.iterations = iter;

        Eigen::MatrixXd xtwx = Eigen::MatrixXd::Zero(p, p);
        Eigen::VectorXd xtwz = Eigen::VectorXd::Zero(p);
        Eigen::VectorXd score = Eigen::VectorXd::Zero(p);
        for (int i = 0; i < n; ++i) {
            const double trials = model.family() == FamilyKind::Poisson
                                      ? 1.0
                                      : static_cast<double>(model.trials()[static_cast<std::size_t>(i)]);
            const IrlsTerms t = irls_terms(model, eta(i), trials);
            const double w = t.dmu_deta * t.dmu_deta / t.variance;
            const double yi = static_cast<double>(model.y()[static_cast<std::size_t>(i)]);
            const double z = eta(i) + (yi - t.mu) / t.dmu_deta;
            xtwx.noalias() += w * X.row(i).transpose() * X.row(i);
            xtwz.noalias() += w * z * X.row(i);
            score.noalias() += (yi - t.mu) / t.variance * t.dmu_deta * X.row(i).transpose();
        }

        const Eigen::VectorXd beta_new = xtwx.ldlt().solve(xtwz);
        Eigen::VectorXd step = beta_new - fit.beta_hat;

        double dev_new = 0.0;
        Eigen::VectorXd beta_try;
        for (int halving = 0; halving <= 30; ++halving) {
            beta_try = fit.beta_hat + step;
            eta = X * beta_try;
            dev_new = deviance(model, eta);
            if (std::isfinite(dev_new) && dev_new <= dev + 1e-12 * (1.0 + std::abs(dev)))
                break;
            step *= 0.5;
        }

        const double change = std::abs(dev - dev_new);
        fit.beta_hat = beta_try;
        dev = dev_new;

        if (change < settings.deviance_rel_tol * (std::abs(dev) + 0.1) ||
            score.lpNorm<Eigen::Infinity>() < settings.score_tol) {
            fit.converged = true;
            break;
        }
    }

    fit.deviance = dev;
    return fit;
}

} // namespace propriety
