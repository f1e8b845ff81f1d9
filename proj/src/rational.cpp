#include "propriety/rational.hpp"
#include "propriety/errors.hpp"

#include <json.hpp>

#include <cctype>
#include <cstdlib>

namespace propriety {

namespace {

Integer pow10(long e) {
    Integer v = 1;
    for (long i = 0; i < e; ++i) v *= 10;
    return v;
}

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

} // namespace

Rational rational_from_decimal(std::string_view text) {
    std::string_view s = text;
    if (s.empty()) throw ParseError("empty numeric literal");

    bool negative = false;
    if (s.front() == '+' || s.front() == '-') {
        negative = (s.front() == '-');
        s.remove_prefix(1);
    }

    // explicit fraction "num/den"
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        std::string_view num = s.substr(0, slash), den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den))
            throw ParseError("bad fraction literal: " + std::string(text));
        Integer n(std::string(num)), d(std::string(den));
        if (d == 0) throw ParseError("zero denominator: " + std::string(text));
        Rational r(n, d);
        return negative ? -r : r;
    }

    long exponent = 0;
    if (auto epos = s.find_first_of("eE"); epos != std::string_view::npos) {
        std::string_view etail = s.substr(epos + 1);
        std::string expstr(etail);
        if (expstr.empty()) throw ParseError("bad exponent: " + std::string(text));
        char* end = nullptr;
        exponent = std::strtol(expstr.c_str(), &end, 10);
        if (end == nullptr || *end != '\0')
            throw ParseError("bad exponent: " + std::string(text));
        s = s.substr(0, epos);
    }

    std::string_view ipart = s, fpart;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        ipart = s.substr(0, dot);
        fpart = s.substr(dot + 1);
    }
    if (ipart.empty() && fpart.empty())
        throw ParseError("bad numeric literal: " + std::string(text));
    if ((!ipart.empty() && !all_digits(ipart)) || (!fpart.empty() && !all_digits(fpart)))
        throw ParseError("bad numeric literal: " + std::string(text));

    Integer mantissa = ipart.empty() ? Integer(0) : Integer(std::string(ipart));
    for (char c : fpart) {
        mantissa *= 10;
        mantissa += (c - '0');
    }
    long scale = static_cast<long>(fpart.size()) - exponent;

    Rational r;
    if (scale >= 0)
        r = Rational(mantissa, pow10(scale));
    else
        r = Rational(mantissa * pow10(-scale), 1);
    return negative ? -r : r;
}

Rational rational_from_shortest_decimal(double x) {
    return rational_from_decimal(nlohmann::json(x).dump());
}

double to_double(const Rational& r) {
    return r.convert_to<double>();
}

std::string rational_to_string(const Rational& r) {
    const Integer num = numerator(r), den = denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

RatMatrix RatMatrix::transposed() const {
    RatMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            t(j, i) = (*this)(i, j);
    return t;
}

RatMatrix RatMatrix::identity(std::size_t n) {
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

Eigen::MatrixXd RatMatrix::to_eigen() const {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = to_double((*this)(i, j));
    return m;
}

RatMatrix hcat(const RatMatrix& a, const RatMatrix& b) {
    if (a.rows() != b.rows())
        throw DimensionMismatch("hcat: row counts differ");
    RatMatrix m(a.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) m(i, a.cols() + j) = b(i, j);
    }
    return m;
}

RatMatrix multiply(const RatMatrix& a, const RatMatrix& b) {
    if (a.cols() != b.rows())
        throw DimensionMismatch("multiply: inner dimensions differ");
    RatMatrix m(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (a(i, k) == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                m(i, j) += a(i, k) * b(k, j);
        }
    return m;
}

} // namespace propriety
