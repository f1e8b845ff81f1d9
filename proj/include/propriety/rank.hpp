#pragma once
#include "propriety/rational.hpp"

#include <Eigen/Core>
#include <optional>
#include <vector>

namespace propriety {

enum class RankMethod { ExactRational, FloatSvd };

struct RankResult {
    int rank = 0;
    RankMethod method = RankMethod::ExactRational;
    // Nonzero vector v with M v = 0, present iff rank < cols. Exact on the
    // rational path; on the float path the entries are the SVD null vector
    // converted losslessly from doubles.
    std::optional<std::vector<Rational>> null_vector;
};

/// Column rank by fraction-free (Bareiss) elimination over the integers,
/// after clearing row denominators. No tolerances involved.
RankResult column_rank(const RatMatrix& m);

/// Column rank by singular value thresholding with tolerance
/// max(rows, cols) * eps * sigma_max. For inputs that have no exact
/// rational representation.
RankResult column_rank(const Eigen::MatrixXd& m);

bool is_full_column_rank(const RatMatrix& m);

} // namespace propriety
