#pragma once
#include "propriety/design.hpp"
#include "propriety/model.hpp"
#include "propriety/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace propriety {

enum class Status { Pass, Fail, Unverifiable };

std::string status_name(Status s);

struct Subcondition {
    std::string name;
    Status status = Status::Unverifiable;
    std::string detail;
    // Witness e, certificate h or rank null vector backing the status.
    std::optional<std::vector<Rational>> vec;
    std::string vec_role; // "witness" | "certificate" | "null_vector"
};

// One theorem-shaped result evaluated against a model: a sufficient result
// is satisfied when every subcondition passes; a necessary result is
// violated when an applicable subcondition fails.
struct ConditionReport {
    std::string result_id;
    bool necessary = false;
    bool applicable = true;
    std::string scope_note;
    std::vector<Subcondition> subconditions;

    bool satisfied() const;
    bool violated() const;
    bool has_unverifiable() const;
};

enum class Outcome { Proper, Improper, Indeterminate };

std::string outcome_name(Outcome o);

// Verdict plus the evidence it stands on. Improper requires a violated
// applicable necessary result; Proper requires a fully satisfied sufficient
// result; everything else is Indeterminate.
struct Verdict {
    Outcome outcome = Outcome::Indeterminate;
    std::vector<ConditionReport> basis;
};

/// Gamma-prior sufficiency for binomial responses: full-rank X plus a
/// positive null vector of the signed augmented design, shape parameters
/// above p/2 with positive rates, and link moments of order p.
ConditionReport check_sufficient_binomial_gamma(const ValidatedModel& model,
                                                const DesignBundle& bundle);

/// Binary specialization using the (1-2y)-signed design.
ConditionReport check_sufficient_binary_gamma(const ValidatedModel& model);

/// Poisson (log link) sufficiency through the pseudo-binomial reduction;
/// the logistic cdf makes the moment condition automatic. Throws
/// DegenerateAllZero when every response is zero.
ConditionReport check_sufficient_poisson_gamma(const ValidatedModel& model);

/// Power-prior sufficiency (all b_j = 0) on the joint design (X, Z) with
/// -q_j/2 < a_j < 0 and link moments of order p - 2 sum(a_j). Dispatches
/// the binary and Poisson variants internally.
ConditionReport check_sufficient_power(const ValidatedModel& model,
                                       const DesignBundle* bundle = nullptr);

/// Necessary results that apply to the model: full-rank X and
/// a_j + q_j/2 > 0 for binomial-form responses; additionally the positive
/// null vector when Z has full column rank; and the exponential-family
/// rank condition when the caller asserts a proper covariance prior.
std::vector<ConditionReport> check_necessary(const ValidatedModel& model,
                                             const DesignBundle* bundle = nullptr,
                                             bool assert_proper_psi = false);

Verdict verdict(const ValidatedModel& model, bool assert_proper_psi = false);

} // namespace propriety
