#include "propriety/positive_null.hpp"
#include "propriety/errors.hpp"

#include <limits>
#include <stdexcept>

namespace propriety {

namespace {

// Dense phase-1 tableau for  A s = b, s >= 0  with A of shape
// (constraints x structurals) and b >= 0 after sign normalization.
// Variables 0..ns-1 are structural, ns..ns+nc-1 artificial.
struct Phase1 {
    std::size_t nc, ns;
    std::vector<std::vector<Rational>> tab; // nc rows of [vars | rhs]
    std::vector<Rational> cost;             // reduced costs c_j - z_j
    Rational neg_objective;                 // value cell of the cost row
    std::vector<std::size_t> basis;

    Phase1(const std::vector<std::vector<Rational>>& a, const std::vector<Rational>& b)
        : nc(a.size()), ns(a.empty() ? 0 : a[0].size()),
          tab(nc, std::vector<Rational>(ns + nc + 1)),
          cost(ns + nc), basis(nc) {
        for (std::size_t i = 0; i < nc; ++i) {
            for (std::size_t j = 0; j < ns; ++j) tab[i][j] = a[i][j];
            tab[i][ns + i] = 1;
            tab[i][ns + nc] = b[i];
            basis[i] = ns + i;
        }
        // Cost row for min(sum of artificials) with the artificial basis:
        // reduced cost of structural j is -sum_i a_ij, of artificial 0.
        for (std::size_t j = 0; j < ns; ++j) {
            Rational s = 0;
            for (std::size_t i = 0; i < nc; ++i) s += a[i][j];
            cost[j] = -s;
        }
        neg_objective = 0;
        for (std::size_t i = 0; i < nc; ++i) neg_objective -= b[i];
    }

    void pivot(std::size_t row, std::size_t col) {
        const Rational p = tab[row][col];
        for (auto& v : tab[row]) v /= p;
        for (std::size_t i = 0; i < nc; ++i) {
            if (i == row || tab[i][col] == 0) continue;
            const Rational f = tab[i][col];
            for (std::size_t j = 0; j <= ns + nc; ++j)
                tab[i][j] -= f * tab[row][j];
        }
        if (cost[col] != 0) {
            const Rational f = cost[col];
            for (std::size_t j = 0; j < ns + nc; ++j)
                cost[j] -= f * tab[row][j];
            neg_objective -= f * tab[row][ns + nc];
        }
        basis[row] = col;
    }

    // Bland's rule on both choices; terminates without cycling.
    void solve() {
        for (;;) {
            std::size_t enter = ns + nc;
            for (std::size_t j = 0; j < ns + nc; ++j) {
                if (cost[j] < 0) { enter = j; break; }
            }
            if (enter == ns + nc) return;

            std::size_t leave = nc;
            Rational best_ratio;
            for (std::size_t i = 0; i < nc; ++i) {
                if (tab[i][enter] <= 0) continue;
                const Rational ratio = tab[i][ns + nc] / tab[i][enter];
                if (leave == nc || ratio < best_ratio ||
                    (ratio == best_ratio && basis[i] < basis[leave])) {
                    best_ratio = ratio;
                    leave = i;
                }
            }
            if (leave == nc)
                throw std::logic_error("phase-1 objective unbounded below");
            pivot(leave, enter);
        }
    }
};

} // namespace

FeasibilityResult exists_positive_null(const RatMatrix& m) {
    const std::size_t rows = m.rows(), cols = m.cols();
    if (rows == 0 || cols == 0)
        throw DimensionMismatch("exists_positive_null: empty matrix");

    // Substituting e = 1 + s turns { M^T e = 0, e >= 1 } into
    // { M^T s = -M^T 1, s >= 0 }.
    std::vector<std::vector<Rational>> a(cols, std::vector<Rational>(rows));
    std::vector<Rational> b(cols);
    std::vector<int> sign(cols, 1);
    for (std::size_t j = 0; j < cols; ++j) {
        Rational colsum = 0;
        for (std::size_t i = 0; i < rows; ++i) colsum += m(i, j);
        b[j] = -colsum;
        if (b[j] < 0) sign[j] = -1;
        for (std::size_t i = 0; i < rows; ++i)
            a[j][i] = sign[j] * m(i, j);
        b[j] *= sign[j];
    }

    Phase1 lp(a, b);
    lp.solve();
    const Rational objective = -lp.neg_objective;

    FeasibilityResult result;
    if (objective == 0) {
        std::vector<Rational> e(rows, Rational(1));
        for (std::size_t i = 0; i < lp.nc; ++i)
            if (lp.basis[i] < rows) e[lp.basis[i]] += lp.tab[i][rows + cols];
        for (std::size_t j = 0; j < cols; ++j) {
            Rational acc = 0;
            for (std::size_t i = 0; i < rows; ++i) acc += e[i] * m(i, j);
            if (acc != 0) throw std::logic_error("witness fails e^T M = 0");
        }
        result.exists = true;
        result.witness = std::move(e);
        return result;
    }

    // Dual values off the final cost row: for artificial column j,
    // reduced cost = 1 - y_j. Undo the sign normalization to get h with
    // M h <= 0 and 1^T M h = -objective < 0.
    std::vector<Rational> h(cols);
    for (std::size_t j = 0; j < cols; ++j)
        h[j] = sign[j] * (Rational(1) - lp.cost[rows + j]);
    Rational total = 0;
    for (std::size_t i = 0; i < rows; ++i) {
        Rational row_dot = 0;
        for (std::size_t j = 0; j < cols; ++j) row_dot += m(i, j) * h[j];
        if (row_dot > 0) throw std::logic_error("certificate fails M h <= 0");
        total += row_dot;
    }
    if (total >= 0) throw std::logic_error("certificate is degenerate");
    result.exists = false;
    result.certificate = std::move(h);
    return result;
}

} // namespace propriety
