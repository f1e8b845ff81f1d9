#pragma once
#include <vector>

namespace propriety {

/// log(1 + e^x) without overflow.
double log1pexp(double x);

double logistic_cdf(double x);

double normal_pdf(double x);
double normal_cdf(double x);
/// log Phi(x), accurate far into the lower tail.
double log_normal_cdf(double x);
/// Phi^{-1}(p) by Newton refinement; p in (0,1).
double normal_quantile(double p);

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Hermite rule for weight e^{-x^2} (Golub-Welsch).
QuadratureRule gauss_hermite(int n);

/// Gauss-Legendre rule on [0, 1].
QuadratureRule gauss_legendre01(int n);

// Compensated (Kahan) accumulator; summation order independent results
// at the stated tolerances.
class KahanSum {
public:
    void add(double x) {
        const double y = x - c_;
        const double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

private:
    double s_ = 0.0, c_ = 0.0;
};

} // namespace propriety
