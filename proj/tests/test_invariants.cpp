// Tests for the exact genus / degree / critical-point formula evaluation.
//
// Golden values: the (p=11, N=1, reps (3,2,4,2)) example with genus 1,
// whose ungated simplified evaluation is the non-integral 7/2, two closed
// form families, and level-stability of the genus for repeated label
// tuples. Level-2 behavior of the windowed enumeration (including its
// integrality failures) is pinned as-is.

#include <catch2/catch_amalgamated.hpp>

#include "dormant/invariants.hpp"

using namespace dormant;

namespace {

RadiiTuple4 radii_from_reps(const PrimeLevel& ctx, std::array<long, 4> reps) {
    return RadiiTuple4(ctx, {RadiusClass(ctx, Int(reps[0])), RadiusClass(ctx, Int(reps[1])),
                             RadiusClass(ctx, Int(reps[2])), RadiusClass(ctx, Int(reps[3]))});
}

RadiiTuple4 radii_from_labels(const PrimeLevel& ctx, std::array<long, 4> labels) {
    return RadiiTuple4(ctx, {delta(ctx, Int(labels[0])), delta(ctx, Int(labels[1])),
                             delta(ctx, Int(labels[2])), delta(ctx, Int(labels[3]))});
}

} // namespace

TEST_CASE("golden level-1 example: genus 1 with all bounds attached") {
    PrimeLevel ctx(11, 1);
    RadiiTuple4 rho = radii_from_reps(ctx, {3, 2, 4, 2});

    GenusReport rep = genus_04(rho);
    CHECK(rep.genus == 1);
    CHECK(rep.genus_raw == Rat(1));
    CHECK(rep.degree == 3);
    CHECK(rep.genus_upper == Rat(55) / 2);
    CHECK(rep.degree_upper == 5);
    CHECK(rep.crit_bound == Rat(6)); // 300/11 − 234/11 = 66/11
    CHECK_FALSE(rep.simplified_applicable);
    CHECK_FALSE(rep.pair_identity_holds.has_value());

    // The simplified formula's hypothesis needs 2s+1 ≤ (11−3)/4 = 2 and the
    // labels here go up to s = 3, so the gated form refuses ...
    CHECK_THROWS_AS(genus_04_simplified(rho), HypothesisViolation);
    CHECK_THROWS_AS(pair_identity_check(rho), HypothesisViolation);
    CHECK_THROWS_AS(critical_points_bound_simplified(rho), HypothesisViolation);
    // ... and evaluating it anyway shows why: the value is not an integer.
    CHECK(genus_04_simplified_raw(rho) == Rat(7) / 2);
}

TEST_CASE("small level-1 genus values") {
    PrimeLevel ctx5(5, 1);
    GenusReport rep = genus_04(radii_from_labels(ctx5, {1, 1, 1, 1}));
    CHECK(rep.genus == 0); // 1 + (10/30)·6 − 30/10
    CHECK(rep.degree == 2);
    CHECK(genus_upper_bound(ctx5) == Rat(5));
    // (5,1) fails the smallness hypothesis outright: 4·(2·1+1) = 12 > 2.
    CHECK_FALSE(rep.simplified_applicable);

    GenusReport big = genus_04(radii_from_labels(PrimeLevel(11, 1), {3, 3, 3, 3}));
    CHECK(big.genus == 3);
    CHECK(big.degree == 4);
}

TEST_CASE("simplified formula agrees with the exact one under its hypothesis") {
    PrimeLevel ctx(23, 1);
    RadiiTuple4 rho = radii_from_labels(ctx, {1, 1, 1, 1}); // 4·3 = 12 ≤ 20

    GenusReport rep = genus_04(rho);
    CHECK(rep.genus == 1);
    CHECK(rep.simplified_applicable);
    REQUIRE(rep.pair_identity_holds.has_value());
    CHECK(*rep.pair_identity_holds);

    CHECK(genus_04_simplified(rho) == rep.genus);
    CHECK(pair_identity_check(rho));
    CHECK(rep.crit_bound == Rat(6));
    CHECK(critical_points_bound_simplified(rho) == rep.crit_bound);
}

TEST_CASE("genus is stable across levels for repeated label tuples") {
    for (unsigned N = 1; N <= 3; ++N) {
        PrimeLevel ctx(11, N);
        CHECK(genus_04(radii_from_labels(ctx, {1, 1, 1, 1})).genus == 1);
        CHECK(genus_04(radii_from_labels(ctx, {1, 2, 2, 1})).genus == 1);
    }
}

TEST_CASE("level-2 windowed enumeration breaks integrality for wide tuples") {
    PrimeLevel ctx(11, 2);

    // λᵢ = 12 = 1·11 + 1: every per-level fold window is [0, 24] at level 2
    // and [0, 2] at level 1, which admits 15 values per pairing (not a
    // digit-product 9), and the exact formula then evaluates to 148 + 3/11.
    RadiiTuple4 wide = radii_from_labels(ctx, {12, 12, 12, 12});
    CHECK_THROWS_AS(genus_04(wide), IntegralityViolation);

    // The simplified formula stays integral on the same sums — but lands on
    // 121, and the quadratic-sum identity that would reconcile the two
    // evaluations fails, so the disagreement is self-consistent.
    CHECK(simplified_hypothesis_holds(wide)); // 4·25 = 100 ≤ 118
    CHECK(genus_04_simplified(wide) == 121);
    CHECK_FALSE(pair_identity_check(wide));

    CHECK_THROWS_AS(genus_04(radii_from_labels(ctx, {3, 3, 3, 3})), IntegralityViolation);
}

TEST_CASE("closed-form families") {
    SECTION("constant-label family") {
        ExampleClosedForms f = example_closed_forms(11, 1, 1);
        REQUIRE(f.genus99.has_value());
        CHECK(*f.genus99 == 1);
        CHECK(*f.count99 == 3);
        CHECK_FALSE(f.genus30.has_value()); // 4 ∤ 10

        // λᵢ = m(p^N−1)/(p−1) = 1: the direct evaluation agrees.
        GenusReport rep = genus_04(radii_from_labels(PrimeLevel(11, 1), {1, 1, 1, 1}));
        CHECK(rep.genus == *f.genus99);
        CHECK(rep.degree == *f.count99);
    }

    SECTION("quarter-point family at p = 13") {
        ExampleClosedForms f = example_closed_forms(13, 1, 1);
        REQUIRE(f.genus30.has_value());
        CHECK(*f.genus30 == 10); // 1 + 12·(13−6−1)/8
        CHECK(*f.count30 == 6);
        CHECK(*f.genus99 == 1);
        CHECK(*f.count99 == 3);

        // λᵢ = 3 gives the full label set as modulus: degree (p−1)/2 = 6.
        GenusReport rep = genus_04(radii_from_labels(PrimeLevel(13, 1), {3, 3, 3, 3}));
        CHECK(rep.genus == *f.genus30);
        CHECK(rep.degree == *f.count30);
    }

    SECTION("quarter-point family at p = 17") {
        ExampleClosedForms f = example_closed_forms(17, 1, 0);
        REQUIRE(f.genus30.has_value());
        CHECK(*f.genus30 == 21);
        CHECK(*f.count30 == 8);

        GenusReport rep = genus_04(radii_from_labels(PrimeLevel(17, 1), {4, 4, 4, 4}));
        CHECK(rep.genus == 21);
        CHECK(rep.degree == 8);
    }

    SECTION("level-2 instance and per-half gating") {
        ExampleClosedForms f = example_closed_forms(5, 2, 0);
        REQUIRE(f.genus99.has_value());
        CHECK(*f.genus99 == 0); // m = 0: one-element modulus, genus 0
        CHECK(*f.count99 == 1);
        REQUIRE(f.genus30.has_value());
        CHECK(*f.genus30 == 48); // 1 + 4·(125−30−1)/8
        CHECK(*f.count30 == 10);

        // m = 1 fails the 8m < p−1 gate at p = 5; the other half survives.
        ExampleClosedForms g = example_closed_forms(5, 2, 1);
        CHECK_FALSE(g.genus99.has_value());
        CHECK(g.genus30.has_value());

        CHECK_THROWS_AS(example_closed_forms(9, 1, 0), ValidationError);
        CHECK_THROWS_AS(example_closed_forms(11, 1, -1), ValidationError);
    }
}

TEST_CASE("empty moduli are a structured error, never genus 0") {
    PrimeLevel ctx(11, 1);
    RadiiTuple4 empty = radii_from_labels(ctx, {0, 0, 0, 1});
    CHECK(csets_04(empty).total == 0);
    CHECK_THROWS_AS(genus_04(empty), EmptyModuli);
    CHECK_THROWS_AS(critical_points_bound(empty), EmptyModuli);

    // Hypothesis-compatible empty tuple: the gate passes, the moduli check
    // still refuses.
    PrimeLevel ctx23(23, 1);
    RadiiTuple4 empty23 = radii_from_labels(ctx23, {0, 0, 0, 2});
    CHECK(simplified_hypothesis_holds(empty23));
    CHECK(csets_04(empty23).total == 0);
    CHECK_THROWS_AS(genus_04_simplified(empty23), EmptyModuli);
    CHECK_THROWS_AS(critical_points_bound_simplified(empty23), EmptyModuli);
}

TEST_CASE("level-1 exhaustive soundness: integrality, bounds, agreement") {
    for (long p : {5L, 7L, 11L, 13L}) {
        PrimeLevel ctx(p, 1);
        long lmax = ctx.label_max().get_si();
        long bad = Int((ctx.p - 1) / 2).get_si();

        long nonempty = 0;
        for (long a = 0; a <= lmax; ++a)
            for (long b = 0; b <= lmax; ++b)
                for (long c = 0; c <= lmax; ++c)
                    for (long d = 0; d <= lmax; ++d) {
                        if (a == bad || b == bad || c == bad || d == bad) continue;
                        RadiiTuple4 rho = radii_from_labels(ctx, {a, b, c, d});
                        std::optional<GenusReport> rep;
                        try {
                            rep = genus_04(rho);
                        } catch (const EmptyModuli&) {
                            continue;
                        }
                        // No IntegralityViolation escapes at level 1.
                        ++nonempty;
                        CHECK(Rat(rep->genus) <= rep->genus_upper);
                        CHECK(rep->degree <= rep->degree_upper);
                        CHECK(rep->crit_bound >= 0);
                        if (rep->simplified_applicable) {
                            REQUIRE(rep->pair_identity_holds.has_value());
                            CHECK(*rep->pair_identity_holds);
                            CHECK(genus_04_simplified(rho) == rep->genus);
                            CHECK(critical_points_bound_simplified(rho) == rep->crit_bound);
                        }
                    }
        CHECK(nonempty > 0);
    }
}
