#include "propriety/oracle.hpp"
#include "propriety/errors.hpp"
#include "propriety/glm.hpp"
#include "propriety/special.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace propriety {

namespace {

double lchoose(long n, long k) {
    return std::lgamma(static_cast<double>(n) + 1.0) -
           std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

double obs_loglik(const ValidatedModel& model, int i, double eta) {
    const long y = model.y()[static_cast<std::size_t>(i)];
    switch (model.family()) {
        case FamilyKind::Binomial:
        case FamilyKind::Bernoulli: {
            const long m = model.trials()[static_cast<std::size_t>(i)];
            if (model.link().kind == LinkKind::Logit)
                return lchoose(m, y) + y * eta - m * log1pexp(eta);
            if (model.link().kind == LinkKind::Probit)
                return lchoose(m, y) + y * log_normal_cdf(eta) +
                       (m - y) * log_normal_cdf(-eta);
            throw WrongLink("no evaluable pmf for this link");
        }
        case FamilyKind::Poisson:
            return y * eta - std::exp(eta) -
                   std::lgamma(static_cast<double>(y) + 1.0);
    }
    throw WrongFamily("unknown family");
}

// d/d eta and -d^2/d eta^2 of the observation log pmf.
void obs_score_curvature(const ValidatedModel& model, int i, double eta,
                         double& score, double& curvature) {
    const double y = static_cast<double>(model.y()[static_cast<std::size_t>(i)]);
    switch (model.family()) {
        case FamilyKind::Binomial:
        case FamilyKind::Bernoulli: {
            const double m = static_cast<double>(model.trials()[static_cast<std::size_t>(i)]);
            if (model.link().kind == LinkKind::Logit) {
                const double f = logistic_cdf(eta);
                score = y - m * f;
                curvature = m * f * (1.0 - f);
                return;
            }
            if (model.link().kind == LinkKind::Probit) {
                const double lphi = -0.5 * eta * eta - 0.918938533204672742;
                const double r0 = std::exp(lphi - log_normal_cdf(eta));
                const double r1 = std::exp(lphi - log_normal_cdf(-eta));
                score = y * r0 - (m - y) * r1;
                curvature = y * (eta * r0 + r0 * r0) + (m - y) * (r1 * r1 - eta * r1);
                return;
            }
            throw WrongLink("no evaluable pmf for this link");
        }
        case FamilyKind::Poisson: {
            const double mu = std::exp(eta);
            score = y - mu;
            curvature = mu;
            return;
        }
    }
    throw WrongFamily("unknown family");
}

std::vector<double> tau_per_coordinate(const ValidatedModel& model,
                                       const std::vector<double>& tau) {
    if (static_cast<int>(tau.size()) != model.block_count())
        throw DimensionMismatch("tau length must match the block count");
    std::vector<double> out(static_cast<std::size_t>(model.q()));
    for (int j = 0; j < model.block_count(); ++j) {
        if (!(tau[static_cast<std::size_t>(j)] > 0.0))
            throw NonpositiveTau("tau must be positive");
        for (int l = 0; l < model.blocks()[static_cast<std::size_t>(j)].q; ++l)
            out[static_cast<std::size_t>(model.block_offset(j) + l)] =
                tau[static_cast<std::size_t>(j)];
    }
    return out;
}

struct ModeResult {
    Eigen::VectorXd mode;
    Eigen::MatrixXd hessian; // of -g at the mode; positive definite
    double value;            // g at the mode
};

double integrand_log(const ValidatedModel& model, const Eigen::VectorXd& beta,
                     const std::vector<double>& dtau, const Eigen::VectorXd& u) {
    const Eigen::VectorXd eta = model.Xd() * beta + model.Zd() * u;
    double g = 0.0;
    for (int i = 0; i < model.n(); ++i) g += obs_loglik(model, i, eta(i));
    for (int c = 0; c < model.q(); ++c) {
        const double t = dtau[static_cast<std::size_t>(c)];
        g += 0.5 * std::log(t) - 0.5 * t * u(c) * u(c);
    }
    g -= 0.5 * model.q() * std::log(2.0 * M_PI);
    return g;
}

ModeResult find_mode(const ValidatedModel& model, const Eigen::VectorXd& beta,
                     const std::vector<double>& dtau, const MarginalSettings& settings) {
    const int q = model.q();
    Eigen::VectorXd u = Eigen::VectorXd::Zero(q);
    double g = integrand_log(model, beta, dtau, u);

    Eigen::MatrixXd hess(q, q);
    for (int iter = 0; iter < settings.newton_max_iterations; ++iter) {
        const Eigen::VectorXd eta = model.Xd() * beta + model.Zd() * u;
        Eigen::VectorXd grad = Eigen::VectorXd::Zero(q);
        hess.setZero();
        for (int i = 0; i < model.n(); ++i) {
            double s, w;
            obs_score_curvature(model, i, eta(i), s, w);
            grad.noalias() += s * model.Zd().row(i).transpose();
            hess.noalias() += w * model.Zd().row(i).transpose() * model.Zd().row(i);
        }
        for (int c = 0; c < q; ++c) {
            grad(c) -= dtau[static_cast<std::size_t>(c)] * u(c);
            hess(c, c) += dtau[static_cast<std::size_t>(c)];
        }
        if (grad.lpNorm<Eigen::Infinity>() < 1e-10 * (1.0 + std::abs(g)))
            return {u, hess, g};

        Eigen::VectorXd step = hess.ldlt().solve(grad);
        double g_new = -std::numeric_limits<double>::infinity();
        for (int halving = 0; halving <= 40; ++halving) {
            g_new = integrand_log(model, beta, dtau, u + step);
            if (std::isfinite(g_new) && g_new >= g - 1e-14 * (1.0 + std::abs(g))) break;
            step *= 0.5;
        }
        if (!(g_new >= g - 1e-9 * (1.0 + std::abs(g))))
            throw ModeSearchFailed("damped newton failed to improve the integrand");
        u += step;
        g = g_new;
    }
    throw ModeSearchFailed("mode search exceeded the iteration budget");
}

int node_cap(int q) {
    switch (q) {
        case 1: return 128;
        case 2: return 64;
        case 3: return 24;
        default: return 12;
    }
}

double gauss_hermite_log_integral(const ValidatedModel& model,
                                  const Eigen::VectorXd& beta,
                                  const std::vector<double>& dtau,
                                  const ModeResult& mode, int nodes) {
    const int q = model.q();
    const QuadratureRule rule = gauss_hermite(nodes);
    std::vector<double> log_w(rule.weights.size());
    for (std::size_t k = 0; k < rule.weights.size(); ++k)
        log_w[k] = std::log(rule.weights[k]);

    const Eigen::MatrixXd cov = mode.hessian.inverse();
    const Eigen::LLT<Eigen::MatrixXd> llt(cov);
    const Eigen::MatrixXd scale = std::sqrt(2.0) * Eigen::MatrixXd(llt.matrixL());
    double log_det = 0.5 * q * std::log(2.0);
    for (int c = 0; c < q; ++c) log_det += std::log(llt.matrixL()(c, c));

    std::vector<int> idx(static_cast<std::size_t>(q), 0);
    double max_term = -std::numeric_limits<double>::infinity();
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(std::pow(nodes, q)));
    Eigen::VectorXd x(q);
    for (;;) {
        double lw = 0.0, x2 = 0.0;
        for (int c = 0; c < q; ++c) {
            const auto k = static_cast<std::size_t>(idx[static_cast<std::size_t>(c)]);
            x(c) = rule.nodes[k];
            lw += log_w[k];
            x2 += x(c) * x(c);
        }
        const Eigen::VectorXd u = mode.mode + scale * x;
        const double term = integrand_log(model, beta, dtau, u) + x2 + lw;
        terms.push_back(term);
        max_term = std::max(max_term, term);

        int c = 0;
        for (; c < q; ++c) {
            if (++idx[static_cast<std::size_t>(c)] < nodes) break;
            idx[static_cast<std::size_t>(c)] = 0;
        }
        if (c == q) break;
    }

    KahanSum sum;
    for (double t : terms) sum.add(std::exp(t - max_term));
    return log_det + max_term + std::log(sum.value());
}

int thread_budget() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    unsigned budget = std::min(hw, 4u);
    if (const char* env = std::getenv("PROPRIETY_KIT_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) budget = std::min<unsigned>(budget, static_cast<unsigned>(cap));
    }
    return static_cast<int>(budget);
}

} // namespace

double complete_loglik(const Eigen::VectorXd& beta, const std::vector<double>& tau,
                       const Eigen::VectorXd& u, const ValidatedModel& model) {
    const std::vector<double> dtau = tau_per_coordinate(model, tau);
    if (u.size() != model.q())
        throw DimensionMismatch("u length must equal the Z column count");
    if (beta.size() != model.p())
        throw DimensionMismatch("beta length must equal the X column count");
    return integrand_log(model, beta, dtau, u);
}

double marginal_loglik(const Eigen::VectorXd& beta, const std::vector<double>& tau,
                       const ValidatedModel& model, const MarginalSettings& settings) {
    if (model.q() > 4)
        throw ScaleLimit("marginal quadrature covers q <= 4");
    const std::vector<double> dtau = tau_per_coordinate(model, tau);
    if (model.n() == 0) return 0.0; // the normal integrates to one

    const ModeResult mode = find_mode(model, beta, dtau, settings);
    const int cap = node_cap(model.q());
    double prev = gauss_hermite_log_integral(model, beta, dtau, mode, settings.start_nodes);
    for (int nodes = settings.start_nodes * 2; nodes <= cap; nodes *= 2) {
        const double cur = gauss_hermite_log_integral(model, beta, dtau, mode, nodes);
        const double change = std::abs(cur - prev);
        prev = cur;
        if (change < settings.rel_tol) break;
    }
    return prev;
}

std::vector<QuadratureEstimate> truncated_cy(const ValidatedModel& model,
                                             const std::vector<double>& half_widths,
                                             const OracleSettings& settings) {
    if (model.p() > 2 || model.q() > 2 || model.block_count() != 1)
        throw ScaleLimit("truncated normalizer covers p <= 2, q <= 2, r = 1");
    const double a = to_double(model.blocks()[0].a);
    const double b = to_double(model.blocks()[0].b);

    // One level: tau nodes outer (parallel chunks), beta tensor inner.
    const auto evaluate = [&](int tau_nodes, int beta_nodes, double box) {
        const QuadratureRule stau = gauss_legendre01(tau_nodes);
        const QuadratureRule sbeta = gauss_legendre01(beta_nodes);
        const int p = model.p();

        std::vector<double> chunk(static_cast<std::size_t>(tau_nodes), 0.0);
        const auto run_chunk = [&](int ti) {
            const double s = stau.nodes[static_cast<std::size_t>(ti)];
            const double tau = s / (1.0 - s);
            const double jac_tau = 1.0 / ((1.0 - s) * (1.0 - s));
            const double log_prior = (a - 1.0) * std::log(tau) - b * tau;

            KahanSum acc;
            std::vector<int> idx(static_cast<std::size_t>(p), 0);
            Eigen::VectorXd beta(p);
            for (;;) {
                double wbeta = 1.0;
                for (int d = 0; d < p; ++d) {
                    const auto k = static_cast<std::size_t>(idx[static_cast<std::size_t>(d)]);
                    beta(d) = -box + 2.0 * box * sbeta.nodes[k];
                    wbeta *= 2.0 * box * sbeta.weights[k];
                }
                const double log_l =
                    marginal_loglik(beta, {tau}, model, settings.marginal);
                acc.add(wbeta * std::exp(log_l + log_prior));

                int d = 0;
                for (; d < p; ++d) {
                    if (++idx[static_cast<std::size_t>(d)] < beta_nodes) break;
                    idx[static_cast<std::size_t>(d)] = 0;
                }
                if (d == p) break;
            }
            chunk[static_cast<std::size_t>(ti)] =
                stau.weights[static_cast<std::size_t>(ti)] * jac_tau * acc.value();
        };

        const int threads = thread_budget();
        if (threads <= 1) {
            for (int ti = 0; ti < tau_nodes; ++ti) run_chunk(ti);
        } else {
            std::vector<std::thread> pool;
            pool.reserve(static_cast<std::size_t>(threads));
            for (int t = 0; t < threads; ++t)
                pool.emplace_back([&, t] {
                    for (int ti = t; ti < tau_nodes; ti += threads) run_chunk(ti);
                });
            for (auto& th : pool) th.join();
        }

        // Fixed combination order keeps results independent of the thread count.
        KahanSum total;
        for (double v : chunk) total.add(v);
        return total.value();
    };

    std::vector<QuadratureEstimate> estimates;
    estimates.reserve(half_widths.size());
    for (double box : half_widths) {
        int tn = settings.tau_nodes, bn = settings.beta_nodes;
        double value = evaluate(tn, bn, box);
        double rel_err = std::numeric_limits<double>::infinity();
        for (int refinement = 0; refinement < settings.max_refinements; ++refinement) {
            tn *= 2;
            bn *= 2;
            const double refined = evaluate(tn, bn, box);
            rel_err = std::abs(refined - value) / std::max(std::abs(refined), 1e-300);
            value = refined;
            if (rel_err < settings.rel_tol) break;
        }
        QuadratureEstimate est;
        est.value = value;
        est.box = box;
        est.tau_nodes = tn;
        est.beta_nodes = bn;
        est.u_nodes_cap = node_cap(model.q());
        est.rel_error_est = rel_err;
        estimates.push_back(est);
    }
    return estimates;
}

double fisher_fd_oracle(const ValidatedModel& model, double tau,
                        const MarginalSettings& settings) {
    if (model.block_count() != 1 || model.q() > 2)
        throw ScaleLimit("finite-difference information check covers single-block "
                         "models with q <= 2");
    if (!(tau > 0.0)) throw NonpositiveTau("tau must be positive");

    const GlmFit fit = fit_glm(model);
    const double h = 0.01 * tau;
    const double g_plus = marginal_loglik(fit.beta_hat, {tau + h}, model, settings);
    const double g_mid = marginal_loglik(fit.beta_hat, {tau}, model, settings);
    const double g_minus = marginal_loglik(fit.beta_hat, {tau - h}, model, settings);
    return -(g_plus - 2.0 * g_mid + g_minus) / (h * h);
}

} // namespace propriety
