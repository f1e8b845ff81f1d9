#pragma once
#include "propriety/rational.hpp"

#include <optional>
#include <vector>

namespace propriety {

// Outcome of the positive-null-vector feasibility question for a matrix M:
// does some e > 0 satisfy e^T M = 0? Exactly one of witness / certificate
// is present.
struct FeasibilityResult {
    bool exists = false;
    // e with every component >= 1 and e^T M = 0 exactly.
    std::optional<std::vector<Rational>> witness;
    // h != 0 with (M h)_i <= 0 for every row i and sum_i (M h)_i < 0,
    // so no positive combination of the rows of M can vanish.
    std::optional<std::vector<Rational>> certificate;
};

/// Decides existence of e > 0 with e^T M = 0 by solving the feasibility
/// program { M^T e = 0, e >= 1 } with a phase-1 simplex in exact rational
/// arithmetic under Bland's rule (positive scaling makes e > 0 and e >= 1
/// interchangeable). Infeasibility yields h from the final dual values.
FeasibilityResult exists_positive_null(const RatMatrix& m);

} // namespace propriety
