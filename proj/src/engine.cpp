#include "propriety/engine.hpp"
#include "propriety/errors.hpp"
#include "propriety/positive_null.hpp"
#include "propriety/rank.hpp"

#include <sstream>

namespace propriety {

std::string status_name(Status s) {
    switch (s) {
        case Status::Pass: return "pass";
        case Status::Fail: return "fail";
        case Status::Unverifiable: return "unverifiable";
    }
    return "?";
}

std::string outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Proper: return "proper";
        case Outcome::Improper: return "improper";
        case Outcome::Indeterminate: return "indeterminate";
    }
    return "?";
}

bool ConditionReport::satisfied() const {
    if (!applicable || subconditions.empty()) return false;
    for (const auto& sub : subconditions)
        if (sub.status != Status::Pass) return false;
    return true;
}

bool ConditionReport::violated() const {
    if (!applicable) return false;
    for (const auto& sub : subconditions)
        if (sub.status == Status::Fail) return true;
    return false;
}

bool ConditionReport::has_unverifiable() const {
    for (const auto& sub : subconditions)
        if (sub.status == Status::Unverifiable) return true;
    return false;
}

namespace {

Rational half(long num) { return Rational(Integer(num), Integer(2)); }

Subcondition rank_subcondition(const RatMatrix& m, const std::string& label) {
    const RankResult rr = column_rank(m);
    Subcondition sub;
    sub.name = label;
    std::ostringstream os;
    os << "rank = " << rr.rank << " of " << m.cols() << " columns";
    sub.detail = os.str();
    if (rr.rank == static_cast<int>(m.cols())) {
        sub.status = Status::Pass;
    } else {
        sub.status = Status::Fail;
        sub.vec = rr.null_vector;
        sub.vec_role = "null_vector";
    }
    return sub;
}

Subcondition positive_null_subcondition(const RatMatrix& m, const std::string& label) {
    const FeasibilityResult fr = exists_positive_null(m);
    Subcondition sub;
    sub.name = label;
    if (fr.exists) {
        sub.status = Status::Pass;
        sub.detail = "a positive vector e with e^T M = 0 exists";
        sub.vec = fr.witness;
        sub.vec_role = "witness";
    } else {
        sub.status = Status::Fail;
        sub.detail = "no positive vector e has e^T M = 0; a separating direction exists";
        sub.vec = fr.certificate;
        sub.vec_role = "certificate";
    }
    return sub;
}

Subcondition gamma_hyperparameter_subcondition(const ValidatedModel& model) {
    Subcondition sub;
    sub.name = "shape_above_half_p";
    const Rational bound = half(model.p());
    std::ostringstream os;
    bool ok = true;
    for (std::size_t j = 0; j < model.blocks().size(); ++j) {
        const auto& blk = model.blocks()[j];
        const bool good = blk.a > bound && blk.b > 0;
        if (!good) {
            ok = false;
            os << (os.tellp() > 0 ? "; " : "") << "block " << j + 1 << " has a = "
               << rational_to_string(blk.a) << ", b = " << rational_to_string(blk.b);
        }
    }
    sub.status = ok ? Status::Pass : Status::Fail;
    sub.detail = ok ? "a_j > p/2 and b_j > 0 for every block"
                    : "needs a_j > p/2 = " + rational_to_string(bound) +
                          " and b_j > 0: " + os.str();
    return sub;
}

Subcondition power_hyperparameter_subcondition(const ValidatedModel& model) {
    Subcondition sub;
    sub.name = "shape_in_power_window";
    std::ostringstream os;
    bool ok = true;
    for (std::size_t j = 0; j < model.blocks().size(); ++j) {
        const auto& blk = model.blocks()[j];
        const bool good = blk.a > half(-blk.q) && blk.a < 0;
        if (!good) {
            ok = false;
            os << (os.tellp() > 0 ? "; " : "") << "block " << j + 1 << " has a = "
               << rational_to_string(blk.a) << " outside (-" << blk.q << "/2, 0)";
        }
    }
    sub.status = ok ? Status::Pass : Status::Fail;
    sub.detail = ok ? "-q_j/2 < a_j < 0 for every block" : os.str();
    return sub;
}

Subcondition moment_subcondition(const Link& link, const Rational& required) {
    Subcondition sub;
    sub.name = "link_moment_order";
    if (link.all_moments_finite()) {
        sub.status = Status::Pass;
        sub.detail = link_name(link.kind) + " has finite moments of every order";
        return sub;
    }
    if (link.kind == LinkKind::UserCdf) {
        if (!link.declared_moment_order) {
            sub.status = Status::Unverifiable;
            sub.detail = "needs finite absolute moments of order " +
                         rational_to_string(required) + "; none declared";
        } else if (Rational(*link.declared_moment_order) >= required) {
            sub.status = Status::Pass;
            sub.detail = "declared moment order covers " + rational_to_string(required);
        } else {
            sub.status = Status::Unverifiable;
            sub.detail = "declared moment order is below the required " +
                         rational_to_string(required);
        }
        return sub;
    }
    sub.status = Status::Unverifiable;
    sub.detail = "no moment information for this link";
    return sub;
}

Subcondition auto_pass_moment_subcondition() {
    Subcondition sub;
    sub.name = "link_moment_order";
    sub.status = Status::Pass;
    sub.detail = "logistic reduction; moments of every order are finite";
    return sub;
}

void require_all_gamma(const ValidatedModel& model) {
    if (!model.all_gamma())
        throw WrongPriorKind("gamma-prior check needs b_j > 0 for every block");
}

void require_all_power(const ValidatedModel& model) {
    if (!model.all_power())
        throw WrongPriorKind("power-prior check needs b_j = 0 for every block");
}

Rational power_required_order(const ValidatedModel& model) {
    Rational required(model.p());
    for (const auto& blk : model.blocks()) required -= 2 * blk.a;
    return required;
}

} // namespace

ConditionReport check_sufficient_binomial_gamma(const ValidatedModel& model,
                                                const DesignBundle& bundle) {
    if (model.family() == FamilyKind::Poisson)
        throw WrongFamily("binomial gamma-prior check needs binomial-form responses");
    require_all_gamma(model);

    ConditionReport report;
    report.result_id = "sufficient.binomial.gamma";
    report.subconditions.push_back(rank_subcondition(model.X(), "full_column_rank_x"));
    report.subconditions.push_back(
        positive_null_subcondition(bundle.xstar_tri, "positive_null_vector"));
    report.subconditions.push_back(gamma_hyperparameter_subcondition(model));
    report.subconditions.push_back(moment_subcondition(model.link(), Rational(model.p())));
    return report;
}

ConditionReport check_sufficient_binary_gamma(const ValidatedModel& model) {
    if (model.family() != FamilyKind::Bernoulli)
        throw WrongFamily("binary gamma-prior check needs a bernoulli model");
    require_all_gamma(model);

    const auto [xstar, zstar] = build_binary_star(model);
    (void)zstar;
    ConditionReport report;
    report.result_id = "sufficient.binary.gamma";
    report.subconditions.push_back(rank_subcondition(model.X(), "full_column_rank_x"));
    report.subconditions.push_back(positive_null_subcondition(xstar, "positive_null_vector"));
    report.subconditions.push_back(gamma_hyperparameter_subcondition(model));
    report.subconditions.push_back(moment_subcondition(model.link(), Rational(model.p())));
    return report;
}

ConditionReport check_sufficient_poisson_gamma(const ValidatedModel& model) {
    if (model.family() != FamilyKind::Poisson)
        throw WrongFamily("poisson gamma-prior check needs a poisson model");
    if (model.link().kind != LinkKind::Log)
        throw WrongLink("poisson check covers the log link only");
    require_all_gamma(model);

    const ValidatedModel pseudo = poissonize(model);
    const Partition part = partition_indices(pseudo.y(), pseudo.trials());
    const DesignBundle bundle = build_bundle(pseudo, part);

    ConditionReport report;
    report.result_id = "sufficient.poisson.gamma";
    report.subconditions.push_back(rank_subcondition(model.X(), "full_column_rank_x"));
    report.subconditions.push_back(
        positive_null_subcondition(bundle.xstar_tri, "positive_null_vector"));
    report.subconditions.push_back(gamma_hyperparameter_subcondition(model));
    report.subconditions.push_back(auto_pass_moment_subcondition());
    return report;
}

ConditionReport check_sufficient_power(const ValidatedModel& model,
                                       const DesignBundle* bundle) {
    require_all_power(model);

    ConditionReport report;
    RatMatrix joint_star;
    switch (model.family()) {
        case FamilyKind::Bernoulli: {
            report.result_id = "sufficient.binary.power";
            const auto [xstar, zstar] = build_binary_star(model);
            joint_star = hcat(xstar, zstar);
            break;
        }
        case FamilyKind::Binomial: {
            report.result_id = "sufficient.binomial.power";
            DesignBundle local;
            if (bundle == nullptr) {
                const Partition part = partition_indices(model.y(), model.trials());
                local = build_bundle(model, part);
                bundle = &local;
            }
            joint_star = hcat(bundle->xstar_tri, bundle->zstar_tri);
            break;
        }
        case FamilyKind::Poisson: {
            report.result_id = "sufficient.poisson.power";
            const ValidatedModel pseudo = poissonize(model);
            const Partition part = partition_indices(pseudo.y(), pseudo.trials());
            const DesignBundle pbundle = build_bundle(pseudo, part);
            joint_star = hcat(pbundle.xstar_tri, pbundle.zstar_tri);
            break;
        }
    }

    report.subconditions.push_back(
        rank_subcondition(hcat(model.X(), model.Z()), "full_column_rank_xz"));
    report.subconditions.push_back(positive_null_subcondition(joint_star, "positive_null_vector"));
    report.subconditions.push_back(power_hyperparameter_subcondition(model));
    if (model.family() == FamilyKind::Poisson)
        report.subconditions.push_back(auto_pass_moment_subcondition());
    else
        report.subconditions.push_back(
            moment_subcondition(model.link(), power_required_order(model)));
    return report;
}

std::vector<ConditionReport> check_necessary(const ValidatedModel& model,
                                             const DesignBundle* bundle,
                                             bool assert_proper_psi) {
    std::vector<ConditionReport> reports;
    const bool binomial_form = model.family() != FamilyKind::Poisson;

    DesignBundle local;
    if (binomial_form && bundle == nullptr) {
        const Partition part = partition_indices(model.y(), model.trials());
        local = build_bundle(model, part);
        bundle = &local;
    }

    if (binomial_form) {
        ConditionReport base;
        base.result_id = "necessary.binomial.base";
        base.necessary = true;
        base.scope_note = "holds for the tau prior family with any b_j >= 0";
        base.subconditions.push_back(rank_subcondition(model.X(), "full_column_rank_x"));
        {
            Subcondition sub;
            sub.name = "shape_plus_half_q_positive";
            std::ostringstream os;
            bool ok = true;
            for (std::size_t j = 0; j < model.blocks().size(); ++j) {
                const auto& blk = model.blocks()[j];
                if (!(blk.a + half(blk.q) > 0)) {
                    ok = false;
                    os << (os.tellp() > 0 ? "; " : "") << "block " << j + 1
                       << " has a + q/2 = " << rational_to_string(blk.a + half(blk.q));
                }
            }
            sub.status = ok ? Status::Pass : Status::Fail;
            sub.detail = ok ? "a_j + q_j/2 > 0 for every block" : os.str();
            base.subconditions.push_back(std::move(sub));
        }
        reports.push_back(std::move(base));

        ConditionReport full_z;
        full_z.result_id = "necessary.binomial.full_rank_z";
        full_z.necessary = true;
        const RankResult zrank = column_rank(model.Z());
        if (zrank.rank == model.q()) {
            full_z.subconditions.push_back(
                positive_null_subcondition(bundle->xstar_tri, "positive_null_vector"));
        } else {
            full_z.applicable = false;
            std::ostringstream os;
            os << "rank(Z) = " << zrank.rank << " < " << model.q()
               << "; this necessity needs full-column-rank Z";
            full_z.scope_note = os.str();
        }
        reports.push_back(std::move(full_z));
    }

    if (assert_proper_psi && cumulant_is_monotone(model.family())) {
        ConditionReport expo;
        expo.result_id = "necessary.exponential_family_rank";
        expo.necessary = true;
        expo.scope_note = "assumes a proper prior on the random-effect covariance "
                          "and a monotone cumulant, which " +
                          family_name(model.family()) + " has";
        expo.subconditions.push_back(rank_subcondition(model.X(), "full_column_rank_x"));
        reports.push_back(std::move(expo));
    }

    return reports;
}

Verdict verdict(const ValidatedModel& model, bool assert_proper_psi) {
    Verdict v;

    const bool binomial_form = model.family() != FamilyKind::Poisson;
    DesignBundle bundle;
    if (binomial_form) {
        const Partition part = partition_indices(model.y(), model.trials());
        bundle = build_bundle(model, part);
    }

    if (model.all_gamma()) {
        switch (model.family()) {
            case FamilyKind::Binomial:
                v.basis.push_back(check_sufficient_binomial_gamma(model, bundle));
                break;
            case FamilyKind::Bernoulli:
                v.basis.push_back(check_sufficient_binary_gamma(model));
                break;
            case FamilyKind::Poisson:
                try {
                    v.basis.push_back(check_sufficient_poisson_gamma(model));
                } catch (const DegenerateAllZero& e) {
                    ConditionReport r;
                    r.result_id = "sufficient.poisson.gamma";
                    Subcondition sub;
                    sub.name = "pseudo_binomial_reduction";
                    sub.status = Status::Unverifiable;
                    sub.detail = e.what();
                    r.subconditions.push_back(std::move(sub));
                    v.basis.push_back(std::move(r));
                }
                break;
        }
    } else if (model.all_power()) {
        try {
            v.basis.push_back(check_sufficient_power(model, binomial_form ? &bundle : nullptr));
        } catch (const DegenerateAllZero& e) {
            ConditionReport r;
            r.result_id = "sufficient.poisson.power";
            Subcondition sub;
            sub.name = "pseudo_binomial_reduction";
            sub.status = Status::Unverifiable;
            sub.detail = e.what();
            r.subconditions.push_back(std::move(sub));
            v.basis.push_back(std::move(r));
        }
    } else {
        // Sufficiency results cover all-gamma or all-power block priors only.
        ConditionReport r;
        r.result_id = "sufficient.mixed_prior_scope";
        Subcondition sub;
        sub.name = "prior_family_scope";
        sub.status = Status::Unverifiable;
        sub.detail = "blocks mix b_j = 0 with b_j > 0; no sufficiency result applies";
        r.subconditions.push_back(std::move(sub));
        v.basis.push_back(std::move(r));
    }

    auto necessary = check_necessary(model, binomial_form ? &bundle : nullptr,
                                     assert_proper_psi);
    for (auto& r : necessary) v.basis.push_back(std::move(r));

    bool any_necessary_violated = false;
    bool any_sufficient_satisfied = false;
    for (const auto& r : v.basis) {
        if (r.necessary && r.violated()) any_necessary_violated = true;
        if (!r.necessary && r.satisfied()) any_sufficient_satisfied = true;
    }
    v.outcome = any_necessary_violated ? Outcome::Improper
              : any_sufficient_satisfied ? Outcome::Proper
                                         : Outcome::Indeterminate;
    return v;
}

} // namespace propriety
