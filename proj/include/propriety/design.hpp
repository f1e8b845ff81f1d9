#pragma once
#include "propriety/model.hpp"
#include "propriety/rational.hpp"

#include <utility>
#include <vector>

namespace propriety {

// Index partition of 1..n by response position: i1 holds y_i = 0, i2 holds
// y_i = m_i, i3 holds 1 <= y_i <= m_i - 1. Indices are stored 0-based.
struct Partition {
    std::vector<int> i1, i2, i3;
    int k() const { return static_cast<int>(i3.size()); }
    bool operator==(const Partition&) const = default;
};

Partition partition_indices(const std::vector<long>& y, const std::vector<long>& m);

// Row-augmented designs: X then the i3 rows of X again (in increasing index
// order), with row i of the starred variant equal to t_i times row i of the
// plain one. t_i is +1 on i1 and i3 rows, -1 on i2 rows and on every
// appended row.
struct DesignBundle {
    std::vector<int> t;
    RatMatrix x_tri, xstar_tri;
    RatMatrix z_tri, zstar_tri;
};

DesignBundle build_bundle(const ValidatedModel& model, const Partition& part);

/// Binary-response shortcut: row i of the result is (1 - 2 y_i) times the
/// corresponding design row. Equals the bundle construction since binary
/// data has an empty i3.
std::pair<RatMatrix, RatMatrix> build_binary_star(const ValidatedModel& model);

/// Rewrites a Poisson model as the pseudo-binomial model with m_i = max(y)
/// and the logistic cdf link that its propriety analysis reduces to.
ValidatedModel poissonize(const ValidatedModel& model);

} // namespace propriety
