#include "propriety/special.hpp"
#include "propriety/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace propriety {

double log1pexp(double x) {
    if (x > 33.0) return x;            // e^{-x} below double epsilon
    if (x < -37.0) return std::exp(x); // log1p(e^x) ~ e^x
    return std::log1p(std::exp(x));
}

double logistic_cdf(double x) {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double normal_pdf(double x) {
    static const double inv_sqrt_2pi = 0.3989422804014326779;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double log_normal_cdf(double x) {
    if (x > -8.0) return std::log(normal_cdf(x));
    // Mills-ratio series: Phi(x) = phi(x)/(-x) (1 - 1/x^2 + 3/x^4 - ...)
    const double x2 = x * x;
    const double series = 1.0 - 1.0 / x2 + 3.0 / (x2 * x2) - 15.0 / (x2 * x2 * x2);
    return -0.5 * x2 - std::log(-x) - 0.918938533204672742 + std::log(series);
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw OutOfScope("normal_quantile needs p in (0,1)");
    // logistic start, then Newton on Phi
    double x = std::log(p / (1.0 - p)) / 1.702;
    for (int it = 0; it < 60; ++it) {
        const double err = normal_cdf(x) - p;
        const double step = err / normal_pdf(x);
        x -= step;
        if (std::abs(step) < 1e-14 * (1.0 + std::abs(x))) break;
    }
    return x;
}

namespace {

// Nodes/weights from the symmetric tridiagonal Jacobi matrix of the
// orthogonal-polynomial recurrence.
QuadratureRule golub_welsch(const std::vector<double>& offdiag, double weight_mass) {
    const int n = static_cast<int>(offdiag.size()) + 1;
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k + 1 < n; ++k) {
        jac(k, k + 1) = offdiag[static_cast<std::size_t>(k)];
        jac(k + 1, k) = offdiag[static_cast<std::size_t>(k)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
    QuadratureRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        rule.nodes[static_cast<std::size_t>(k)] = es.eigenvalues()(k);
        const double v0 = es.eigenvectors()(0, k);
        rule.weights[static_cast<std::size_t>(k)] = weight_mass * v0 * v0;
    }
    return rule;
}

} // namespace

QuadratureRule gauss_hermite(int n) {
    std::vector<double> off(static_cast<std::size_t>(n - 1));
    for (int k = 1; k < n; ++k)
        off[static_cast<std::size_t>(k - 1)] = std::sqrt(k / 2.0);
    return golub_welsch(off, std::sqrt(M_PI));
}

QuadratureRule gauss_legendre01(int n) {
    std::vector<double> off(static_cast<std::size_t>(n - 1));
    for (int k = 1; k < n; ++k)
        off[static_cast<std::size_t>(k - 1)] = k / std::sqrt(4.0 * k * k - 1.0);
    QuadratureRule rule = golub_welsch(off, 2.0);
    for (auto& x : rule.nodes) x = 0.5 * (x + 1.0);
    for (auto& w : rule.weights) w *= 0.5;
    return rule;
}

} // namespace propriety
