#include "propriety/engine.hpp"
#include "propriety/errors.hpp"
#include "support/fixtures.hpp"
#include "support/random_models.hpp"

#include <doctest.h>

#include <random>

using namespace propriety;
using testsupport::rmat;
using testsupport::rmat_int;

namespace {

DesignBundle bundle_of(const ValidatedModel& vm) {
    return build_bundle(vm, partition_indices(vm.y(), vm.trials()));
}

const Subcondition* find_sub(const ConditionReport& r, const std::string& name) {
    for (const auto& sub : r.subconditions)
        if (sub.name == name) return &sub;
    return nullptr;
}

} // namespace

TEST_CASE("one-way binomial example: gamma sufficiency is satisfied") {
    const ValidatedModel vm = validate(testsupport::oneway_binomial_example());
    const ConditionReport r = check_sufficient_binomial_gamma(vm, bundle_of(vm));
    CHECK(r.result_id == "sufficient.binomial.gamma");
    CHECK(r.satisfied());
}

TEST_CASE("gamma sufficiency fails when the shape drops to p/2 or below") {
    const ValidatedModel vm =
        validate(testsupport::oneway_binomial_example(Rational(9, 10), Rational(1, 10)));
    const ConditionReport r = check_sufficient_binomial_gamma(vm, bundle_of(vm));
    CHECK_FALSE(r.satisfied());
    const auto* sub = find_sub(r, "shape_above_half_p");
    REQUIRE(sub != nullptr);
    CHECK(sub->status == Status::Fail);
}

TEST_CASE("boundary shape a = p/2 exactly fails the strict inequality") {
    const ValidatedModel vm =
        validate(testsupport::oneway_binomial_example(Rational(1), Rational(1, 10)));
    const ConditionReport r = check_sufficient_binomial_gamma(vm, bundle_of(vm));
    const auto* sub = find_sub(r, "shape_above_half_p");
    REQUIRE(sub != nullptr);
    CHECK(sub->status == Status::Fail);
}

TEST_CASE("an undeclared or low user-cdf moment order is unverifiable, not failed") {
    GlmmModel m = testsupport::oneway_binomial_example();
    m.link = Link{LinkKind::UserCdf, 1.0}; // below p = 2
    const ValidatedModel vm = validate(m);
    const ConditionReport r = check_sufficient_binomial_gamma(vm, bundle_of(vm));
    const auto* sub = find_sub(r, "link_moment_order");
    REQUIRE(sub != nullptr);
    CHECK(sub->status == Status::Unverifiable);
    CHECK_FALSE(r.satisfied());
    CHECK_FALSE(r.violated());

    m.link = Link{LinkKind::UserCdf, std::nullopt};
    const ConditionReport r2 = check_sufficient_binomial_gamma(validate(m), bundle_of(validate(m)));
    const auto* sub2 = find_sub(r2, "link_moment_order");
    REQUIRE(sub2 != nullptr);
    CHECK(sub2->status == Status::Unverifiable);

    m.link = Link{LinkKind::UserCdf, 2.0}; // meets p exactly
    const ConditionReport r3 = check_sufficient_binomial_gamma(validate(m), bundle_of(validate(m)));
    CHECK(find_sub(r3, "link_moment_order")->status == Status::Pass);
}

TEST_CASE("gamma sufficiency refuses power priors") {
    const ValidatedModel vm =
        validate(testsupport::oneway_binomial_example(Rational(-1, 4), Rational(0)));
    CHECK_THROWS_AS(check_sufficient_binomial_gamma(vm, bundle_of(vm)), WrongPriorKind);
}

TEST_CASE("binary gamma sufficiency on forced and impossible designs") {
    GlmmModel m;
    m.family = FamilyKind::Bernoulli;
    m.link = Link{LinkKind::Logit, std::nullopt};
    m.y = {0, 1};
    m.X = rmat({{"1"}, {"1"}});
    m.Z = rmat_int({{1}, {1}});
    m.blocks = {PriorBlock{1, Rational(1), Rational(1)}};
    CHECK(check_sufficient_binary_gamma(validate(m)).satisfied());

    m.y = {0, 0};
    const ConditionReport r = check_sufficient_binary_gamma(validate(m));
    CHECK_FALSE(r.satisfied());
    CHECK(find_sub(r, "positive_null_vector")->status == Status::Fail);
}

TEST_CASE("binary gamma sufficiency requires a bernoulli model") {
    const ValidatedModel vm = validate(testsupport::oneway_binomial_example());
    CHECK_THROWS_AS(check_sufficient_binary_gamma(vm), WrongFamily);
}

TEST_CASE("poisson example: gamma sufficiency is satisfied") {
    const ValidatedModel vm = validate(testsupport::oneway_poisson_example());
    const ConditionReport r = check_sufficient_poisson_gamma(vm);
    CHECK(r.result_id == "sufficient.poisson.gamma");
    CHECK(r.satisfied());
}

TEST_CASE("poisson sufficiency propagates the all-zero degenerate case") {
    GlmmModel m = testsupport::oneway_poisson_example();
    m.y = {0, 0, 0, 0, 0, 0};
    CHECK_THROWS_AS(check_sufficient_poisson_gamma(validate(m)), DegenerateAllZero);
    const Verdict v = verdict(validate(m));
    CHECK(v.outcome == Outcome::Indeterminate);
}

TEST_CASE("two-way example with power priors: hyperparameters pass, rank fails") {
    const ValidatedModel vm = validate(testsupport::twoway_binomial_example(
        Rational(-1, 4), Rational(0), Rational(-1, 4), Rational(0)));
    const ConditionReport r = check_sufficient_power(vm);
    CHECK(r.result_id == "sufficient.binomial.power");
    CHECK(find_sub(r, "shape_in_power_window")->status == Status::Pass);
    CHECK(find_sub(r, "link_moment_order")->status == Status::Pass);
    const auto* rank_sub = find_sub(r, "full_column_rank_xz");
    REQUIRE(rank_sub != nullptr);
    CHECK(rank_sub->status == Status::Fail);
    CHECK(rank_sub->detail.find("rank = 5 of 7") != std::string::npos);
    CHECK_FALSE(r.satisfied());
}

TEST_CASE("power window boundary -q/2 fails strictly") {
    GlmmModel m;
    m.family = FamilyKind::Bernoulli;
    m.link = Link{LinkKind::Logit, std::nullopt};
    m.y = {0, 1, 1, 0};
    m.X = rmat({{"1", "0.5"}, {"1", "-1"}, {"1", "2"}, {"1", "-0.5"}});
    m.Z = rmat_int({{1, 0}, {0, 1}, {1, 0}, {0, 1}});
    m.blocks = {PriorBlock{2, Rational(-1), Rational(0)}};
    const ConditionReport r = check_sufficient_power(validate(m));
    CHECK(find_sub(r, "shape_in_power_window")->status == Status::Fail);
}

TEST_CASE("binary model with full-rank joint design: power sufficiency holds") {
    GlmmModel m;
    m.family = FamilyKind::Bernoulli;
    m.link = Link{LinkKind::Logit, std::nullopt};
    m.y = {0, 1, 0, 1, 0, 1};
    m.X = rmat({{"1"}, {"1"}, {"1"}, {"1"}, {"1"}, {"1"}});
    m.Z = rmat_int({{1, 0}, {1, 0}, {0, 1}, {0, 1}, {0, 0}, {0, 0}});
    m.blocks = {PriorBlock{2, Rational(-1, 4), Rational(0)}};
    const ValidatedModel vm = validate(m);
    const ConditionReport r = check_sufficient_power(vm);
    CHECK(r.result_id == "sufficient.binary.power");
    CHECK(find_sub(r, "full_column_rank_xz")->status == Status::Pass);

    // cross-check condition 1 against the brute-force oracle
    const auto [xstar, zstar] = build_binary_star(vm);
    const bool lp = testsupport::positive_null_exists_by_vertices(hcat(xstar, zstar));
    CHECK(lp);
    CHECK(find_sub(r, "positive_null_vector")->status ==
          (lp ? Status::Pass : Status::Fail));
    CHECK(r.satisfied());
    CHECK(verdict(vm).outcome == Outcome::Proper);
}

TEST_CASE("rank-deficient X violates the base necessity and the verdict is improper") {
    GlmmModel m = testsupport::oneway_binomial_example();
    for (std::size_t i = 0; i < 6; ++i) m.X(i, 1) = 3 * m.X(i, 0);
    const Verdict v = verdict(validate(m));
    CHECK(v.outcome == Outcome::Improper);
    bool base_violated = false;
    for (const auto& r : v.basis)
        if (r.result_id == "necessary.binomial.base" && r.violated()) base_violated = true;
    CHECK(base_violated);
}

TEST_CASE("a + q/2 at zero violates the base necessity") {
    const ValidatedModel vm =
        validate(testsupport::oneway_binomial_example(Rational(-1), Rational(0)));
    const auto reports = check_necessary(vm);
    bool violated = false;
    for (const auto& r : reports)
        if (r.result_id == "necessary.binomial.base") {
            const auto* sub = find_sub(r, "shape_plus_half_q_positive");
            REQUIRE(sub != nullptr);
            violated = sub->status == Status::Fail;
        }
    CHECK(violated);
    CHECK(verdict(vm).outcome == Outcome::Improper);
}

TEST_CASE("two-way example: full-rank-Z necessity is inapplicable, base holds") {
    const ValidatedModel vm = validate(testsupport::twoway_binomial_example());
    const auto reports = check_necessary(vm);
    bool base_ok = false, z_inapplicable = false;
    for (const auto& r : reports) {
        if (r.result_id == "necessary.binomial.base") base_ok = !r.violated();
        if (r.result_id == "necessary.binomial.full_rank_z") {
            z_inapplicable = !r.applicable;
            CHECK(r.scope_note.find("rank(Z) = 4") != std::string::npos);
        }
    }
    CHECK(base_ok);
    CHECK(z_inapplicable);
}

TEST_CASE("full-rank-Z necessity detects separation-style infeasibility") {
    // all responses saturated: no positive combination of the signed rows vanishes
    GlmmModel m;
    m.family = FamilyKind::Bernoulli;
    m.link = Link{LinkKind::Logit, std::nullopt};
    m.y = {1, 1, 1};
    m.X = rmat({{"1"}, {"1"}, {"1"}});
    m.Z = rmat_int({{1, 0}, {0, 1}, {1, 0}});
    m.blocks = {PriorBlock{2, Rational(2), Rational(1)}};
    const Verdict v = verdict(validate(m));
    CHECK(v.outcome == Outcome::Improper);
    bool z_violated = false;
    for (const auto& r : v.basis)
        if (r.result_id == "necessary.binomial.full_rank_z" && r.violated())
            z_violated = true;
    CHECK(z_violated);
}

TEST_CASE("exponential-family rank necessity applies to poisson only under the flag") {
    GlmmModel m = testsupport::oneway_poisson_example();
    for (std::size_t i = 0; i < 6; ++i) m.X(i, 1) = 3 * m.X(i, 0);
    const ValidatedModel vm = validate(m);

    CHECK(verdict(vm, false).outcome == Outcome::Indeterminate);
    const Verdict flagged = verdict(vm, true);
    CHECK(flagged.outcome == Outcome::Improper);
    bool expo_violated = false;
    for (const auto& r : flagged.basis)
        if (r.result_id == "necessary.exponential_family_rank" && r.violated())
            expo_violated = true;
    CHECK(expo_violated);
}

TEST_CASE("verdict goldens on the one-way binomial example") {
    CHECK(verdict(validate(testsupport::oneway_binomial_example())).outcome ==
          Outcome::Proper);
    // shape in the gap between the necessary and sufficient regions
    CHECK(verdict(validate(testsupport::oneway_binomial_example(Rational(3, 4),
                                                                Rational(1, 10))))
              .outcome == Outcome::Indeterminate);
}

TEST_CASE("verdict goldens on the poisson and two-way examples") {
    CHECK(verdict(validate(testsupport::oneway_poisson_example())).outcome ==
          Outcome::Proper);
    CHECK(verdict(validate(testsupport::twoway_binomial_example())).outcome ==
          Outcome::Proper);
}

TEST_CASE("mixed prior kinds leave sufficiency unverifiable") {
    const ValidatedModel vm = validate(testsupport::twoway_binomial_example(
        Rational(3, 2), Rational(1, 10), Rational(-1, 4), Rational(0)));
    const Verdict v = verdict(vm);
    CHECK(v.outcome == Outcome::Indeterminate);
    bool mixed_report = false;
    for (const auto& r : v.basis)
        if (r.result_id == "sufficient.mixed_prior_scope") mixed_report = true;
    CHECK(mixed_report);
}

TEST_CASE("a binomial model with unit trials matches the bernoulli verdict") {
    std::mt19937 rng(41);
    std::uniform_int_distribution<int> bit(0, 1), entry(-2, 2);
    for (int rep = 0; rep < 30; ++rep) {
        GlmmModel bin, ber;
        bin.family = FamilyKind::Binomial;
        ber.family = FamilyKind::Bernoulli;
        bin.link = ber.link = Link{LinkKind::Logit, std::nullopt};
        bin.X = ber.X = RatMatrix(4, 2);
        bin.Z = ber.Z = RatMatrix(4, 2);
        for (std::size_t i = 0; i < 4; ++i) {
            const int yi = bit(rng);
            bin.y.push_back(yi);
            ber.y.push_back(yi);
            bin.m.push_back(1);
            bin.X(i, 0) = ber.X(i, 0) = 1;
            bin.X(i, 1) = ber.X(i, 1) = entry(rng);
            bin.Z(i, i % 2) = ber.Z(i, i % 2) = 1;
        }
        const PriorBlock blk{2, rep % 2 ? Rational(3, 2) : Rational(-1, 4),
                             rep % 2 ? Rational(1, 10) : Rational(0)};
        bin.blocks = {blk};
        ber.blocks = {blk};
        CHECK(verdict(validate(bin)).outcome == verdict(validate(ber)).outcome);
    }
}

TEST_CASE("poisson sufficiency shares the rank and feasibility evidence of its reduction") {
    const ValidatedModel vm = validate(testsupport::oneway_poisson_example());
    const ConditionReport direct = check_sufficient_poisson_gamma(vm);

    const ValidatedModel pseudo = poissonize(vm);
    const ConditionReport via_binomial = check_sufficient_binomial_gamma(
        pseudo, build_bundle(pseudo, partition_indices(pseudo.y(), pseudo.trials())));

    CHECK(find_sub(direct, "full_column_rank_x")->status ==
          find_sub(via_binomial, "full_column_rank_x")->status);
    CHECK(find_sub(direct, "positive_null_vector")->status ==
          find_sub(via_binomial, "positive_null_vector")->status);
}

TEST_CASE("raising a gamma shape never breaks the hyperparameter condition") {
    std::mt19937 rng(43);
    std::uniform_int_distribution<int> num(1, 40);
    for (int rep = 0; rep < 40; ++rep) {
        const Rational a(num(rng), 10);
        const ValidatedModel vm =
            validate(testsupport::oneway_binomial_example(a, Rational(1, 10)));
        const ValidatedModel vm_up =
            validate(testsupport::oneway_binomial_example(a + Rational(num(rng), 10),
                                                          Rational(1, 10)));
        const auto status = [](const ValidatedModel& v) {
            const ConditionReport r =
                check_sufficient_binomial_gamma(v, bundle_of(v));
            for (const auto& sub : r.subconditions)
                if (sub.name == "shape_above_half_p") return sub.status;
            return Status::Unverifiable;
        };
        if (status(vm) == Status::Pass) CHECK(status(vm_up) == Status::Pass);
    }
}

TEST_CASE("no random model is both provably proper and provably improper") {
    std::mt19937 rng(47);
    for (int rep = 0; rep < 250; ++rep) {
        const GlmmModel m = testsupport::random_model(rng);
        ValidatedModel vm = validate(m);
        const Verdict v = verdict(vm, true);
        bool sufficient_ok = false, necessary_bad = false;
        for (const auto& r : v.basis) {
            if (!r.necessary && r.satisfied()) sufficient_ok = true;
            if (r.necessary && r.violated()) necessary_bad = true;
        }
        CHECK_FALSE((sufficient_ok && necessary_bad));
    }
}
