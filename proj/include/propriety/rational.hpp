#pragma once
#include <boost/multiprecision/cpp_int.hpp>
#include <Eigen/Core>
#include <string>
#include <string_view>
#include <vector>

namespace propriety {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parses "3", "-2.9", "1e-3", "2.5E2" or "7/10" into an exact rational.
Rational rational_from_decimal(std::string_view text);

/// Shortest round-trip decimal form of x, parsed back exactly. A JSON
/// input of 2.9 lands on 29/10 instead of the binary double nearest it.
Rational rational_from_shortest_decimal(double x);

double to_double(const Rational& r);

/// "num/den" (or plain integer when den == 1), used for witnesses in reports.
std::string rational_to_string(const Rational& r);

// Dense row-major rational matrix. Desk-scale sizes only.
class RatMatrix {
public:
    RatMatrix() = default;
    RatMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    bool operator==(const RatMatrix& other) const = default;

    RatMatrix transposed() const;

    static RatMatrix identity(std::size_t n);

    Eigen::MatrixXd to_eigen() const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Rational> data_;
};

/// Side-by-side concatenation; row counts must agree.
RatMatrix hcat(const RatMatrix& a, const RatMatrix& b);

RatMatrix multiply(const RatMatrix& a, const RatMatrix& b);

} // namespace propriety
