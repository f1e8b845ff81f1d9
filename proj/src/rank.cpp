#include "propriety/rank.hpp"
#include "propriety/errors.hpp"

#include <Eigen/SVD>

#include <numeric>
#include <stdexcept>

namespace propriety {

namespace {

// Integer echelon form of the row-scaled input. Row scaling by positive
// denominators preserves both rank and null space.
struct Echelon {
    std::vector<std::vector<Integer>> u; // rows in pivot order, then untouched
    std::vector<std::size_t> pivot_cols; // increasing
};

Echelon bareiss(const RatMatrix& m) {
    const std::size_t rows = m.rows(), cols = m.cols();
    std::vector<std::vector<Integer>> w(rows, std::vector<Integer>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        Integer lcm = 1;
        for (std::size_t j = 0; j < cols; ++j)
            lcm = boost::multiprecision::lcm(lcm, denominator(m(i, j)));
        for (std::size_t j = 0; j < cols; ++j) {
            const Rational scaled = m(i, j) * lcm;
            w[i][j] = numerator(scaled);
        }
    }

    Echelon ech;
    Integer prev = 1;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t pivot_row = rows;
        for (std::size_t i = r; i < rows; ++i) {
            if (w[i][c] != 0) { pivot_row = i; break; }
        }
        if (pivot_row == rows) continue;
        std::swap(w[r], w[pivot_row]);

        const Integer pivot = w[r][c];
        for (std::size_t i = r + 1; i < rows; ++i) {
            for (std::size_t j = c + 1; j < cols; ++j) {
                Integer num = w[i][j] * pivot - w[i][c] * w[r][j];
                Integer quot, rem;
                boost::multiprecision::divide_qr(num, prev, quot, rem);
                if (rem != 0)
                    throw std::logic_error("fraction-free elimination lost integrality");
                w[i][j] = quot;
            }
            w[i][c] = 0;
        }
        prev = pivot;
        ech.pivot_cols.push_back(c);
        ++r;
    }
    ech.u = std::move(w);
    return ech;
}

std::vector<Rational> null_vector_from_echelon(const Echelon& ech, std::size_t cols) {
    // First non-pivot column as the free variable; back-substitution stays
    // inside the pivot columns to its right.
    std::size_t free_col = cols;
    {
        std::size_t pi = 0;
        for (std::size_t c = 0; c < cols; ++c) {
            if (pi < ech.pivot_cols.size() && ech.pivot_cols[pi] == c) { ++pi; continue; }
            free_col = c;
            break;
        }
    }
    std::vector<Rational> x(cols, Rational(0));
    x[free_col] = 1;
    for (std::size_t ii = ech.pivot_cols.size(); ii-- > 0;) {
        const std::size_t c = ech.pivot_cols[ii];
        Rational acc = 0;
        for (std::size_t j = c + 1; j < cols; ++j) {
            if (x[j] == 0) continue;
            acc += Rational(ech.u[ii][j]) * x[j];
        }
        x[c] = -acc / Rational(ech.u[ii][c]);
    }

    // Normalize to a primitive integer vector, first nonzero entry positive.
    Integer lcm = 1;
    for (const auto& v : x) lcm = boost::multiprecision::lcm(lcm, denominator(v));
    Integer gcd = 0;
    std::vector<Integer> ints(cols);
    for (std::size_t j = 0; j < cols; ++j) {
        ints[j] = numerator(x[j] * lcm);
        gcd = boost::multiprecision::gcd(gcd, ints[j]);
    }
    if (gcd == 0) throw std::logic_error("null vector collapsed to zero");
    int sign = 0;
    for (std::size_t j = 0; j < cols && sign == 0; ++j)
        if (ints[j] != 0) sign = ints[j] > 0 ? 1 : -1;
    for (std::size_t j = 0; j < cols; ++j) x[j] = Rational(ints[j] * sign, gcd);
    return x;
}

} // namespace

RankResult column_rank(const RatMatrix& m) {
    if (m.rows() == 0 || m.cols() == 0)
        throw DimensionMismatch("column_rank: empty matrix");
    const Echelon ech = bareiss(m);
    RankResult result;
    result.rank = static_cast<int>(ech.pivot_cols.size());
    result.method = RankMethod::ExactRational;
    if (result.rank < static_cast<int>(m.cols())) {
        auto nv = null_vector_from_echelon(ech, m.cols());
        // M v = 0 must hold exactly; anything else is an elimination bug.
        for (std::size_t i = 0; i < m.rows(); ++i) {
            Rational acc = 0;
            for (std::size_t j = 0; j < m.cols(); ++j) acc += m(i, j) * nv[j];
            if (acc != 0) throw std::logic_error("null vector fails M v = 0");
        }
        result.null_vector = std::move(nv);
    }
    return result;
}

RankResult column_rank(const Eigen::MatrixXd& m) {
    if (m.rows() == 0 || m.cols() == 0)
        throw DimensionMismatch("column_rank: empty matrix");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double tol = static_cast<double>(std::max(m.rows(), m.cols())) *
                       std::numeric_limits<double>::epsilon() *
                       (sv.size() > 0 ? sv(0) : 0.0);
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol) ++rank;

    RankResult result;
    result.rank = rank;
    result.method = RankMethod::FloatSvd;
    if (rank < m.cols()) {
        std::vector<Rational> nv(static_cast<std::size_t>(m.cols()));
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            nv[static_cast<std::size_t>(j)] = Rational(svd.matrixV()(j, m.cols() - 1));
        result.null_vector = std::move(nv);
    }
    return result;
}

bool is_full_column_rank(const RatMatrix& m) {
    if (m.rows() < m.cols()) return false;
    return column_rank(m).rank == static_cast<int>(m.cols());
}

} // namespace propriety
