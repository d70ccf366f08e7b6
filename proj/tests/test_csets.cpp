#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "dormant/csets.hpp"

using namespace dormant;

namespace {

std::vector<long> values_of(const std::vector<EdgeLabel>& labels) {
    std::vector<long> out;
    for (const auto& l : labels) out.push_back(l.value.get_si());
    return out;
}

std::vector<long> reps_of(const std::vector<RadiusClass>& classes) {
    std::vector<long> out;
    for (const auto& c : classes) out.push_back(c.rep.get_si());
    return out;
}

std::array<EdgeLabel, 4> labels4(const PrimeLevel& ctx, long a, long b, long c, long d) {
    return {EdgeLabel(ctx, a), EdgeLabel(ctx, b), EdgeLabel(ctx, c), EdgeLabel(ctx, d)};
}

RadiiTuple4 radii_from_labels(const PrimeLevel& ctx, long a, long b, long c, long d) {
    return RadiiTuple4(ctx, {delta(ctx, a), delta(ctx, b), delta(ctx, c), delta(ctx, d)});
}

RadiiTuple4 radii_from_reps(const PrimeLevel& ctx, long a, long b, long c, long d) {
    return RadiiTuple4(
        ctx, {RadiusClass(ctx, a), RadiusClass(ctx, b), RadiusClass(ctx, c), RadiusClass(ctx, d)});
}

// Uniformly random element of B_N.
Int random_label(const PrimeLevel& ctx, std::mt19937& rng) {
    long max = ctx.label_max().get_si();
    long bad = Int((ctx.p - 1) / 2).get_si();
    long pp = ctx.p.get_si();
    std::uniform_int_distribution<long> dist(0, max);
    for (;;) {
        long a = dist(rng);
        if (a % pp != bad) return a;
    }
}

} // namespace

TEST_CASE("enumerate_B04 level-1 examples") {
    PrimeLevel p11(11, 1);
    CHECK(values_of(enumerate_B04(p11, labels4(p11, 1, 1, 1, 1))) == std::vector<long>{0, 1, 2});

    PrimeLevel p5(5, 1);
    CHECK(values_of(enumerate_B04(p5, labels4(p5, 1, 1, 1, 1))) == std::vector<long>{0, 1});
}

TEST_CASE("enumerate_B04 applies every fold window at level 2") {
    // At (p=11, N=2), λ = (12,12,12,12): the level-1 window allows folds
    // 0..2 and the level-2 window allows 0..24, so the base set is the 15
    // residues in [0, 24] whose level-1 fold is at most 2 — not only the 9
    // two-digit values with digits in {0,1,2}.
    PrimeLevel ctx(11, 2);
    auto set = enumerate_B04(ctx, labels4(ctx, 12, 12, 12, 12));
    CHECK(values_of(set) ==
          std::vector<long>{0, 1, 2, 8, 9, 10, 11, 12, 13, 19, 20, 21, 22, 23, 24});
}

TEST_CASE("enumerate_B11 examples") {
    PrimeLevel p5(5, 1);
    CHECK(values_of(enumerate_B11(p5, EdgeLabel(p5, 1))) == std::vector<long>{0, 1});

    PrimeLevel p11(11, 1);
    CHECK(values_of(enumerate_B11(p11, EdgeLabel(p11, 0))) == std::vector<long>{0});

    // λ = 4: the window is [0, min(8, 11−8−2)] = [0, 1]; exhaustive check
    // over B_1 confirms {0, 1}.
    CHECK(values_of(enumerate_B11(p11, EdgeLabel(p11, 4))) == std::vector<long>{0, 1});
}

TEST_CASE("csets_04 reproduces the level-1 golden example") {
    PrimeLevel ctx(11, 1);
    auto rep = csets_04(radii_from_reps(ctx, 3, 2, 4, 2));
    CHECK(reps_of(rep.cinf) == std::vector<long>{1, 2, 3});
    CHECK(reps_of(rep.c0) == std::vector<long>{1, 2, 3});
    CHECK(reps_of(rep.c1) == std::vector<long>{2, 3, 4});
    CHECK(rep.total == 9);
    CHECK(degree_04(radii_from_reps(ctx, 3, 2, 4, 2)) == 3);
}

TEST_CASE("csets_04 handles the constant-label family and the empty case") {
    PrimeLevel p5(5, 1);
    auto rep = csets_04(radii_from_labels(p5, 1, 1, 1, 1));
    CHECK(rep.total == 6);
    CHECK(rep.n0 == 2);
    CHECK(reps_of(rep.cinf) == std::vector<long>{1, 2}); // δ(1) = 1̄, δ(0) = 2̄

    auto empty = csets_04(radii_from_labels(p5, 0, 0, 0, 1));
    CHECK(empty.total == 0);
    CHECK(empty.sum_star == 0);
    CHECK(empty.sum_star_sq == 0);
    CHECK(empty.sum_star_prod == 0);
    CHECK(degree_04(radii_from_labels(p5, 0, 0, 0, 1)) == 0);
}

TEST_CASE("base-set enumeration is symmetric in the defining pairs") {
    std::mt19937 rng(7041);
    for (int p : {5, 7, 11}) {
        for (unsigned N = 1; N <= 2; ++N) {
            PrimeLevel ctx(p, N);
            for (int it = 0; it < 20; ++it) {
                Int a = random_label(ctx, rng), b = random_label(ctx, rng);
                Int c = random_label(ctx, rng), d = random_label(ctx, rng);
                auto mk = [&](const Int& w, const Int& x, const Int& y, const Int& z) {
                    return enumerate_B04(ctx, {EdgeLabel(ctx, w), EdgeLabel(ctx, x),
                                               EdgeLabel(ctx, y), EdgeLabel(ctx, z)});
                };
                auto base = mk(a, b, c, d);
                CHECK(mk(b, a, c, d) == base);
                CHECK(mk(a, b, d, c) == base);
                CHECK(mk(c, d, a, b) == base);
            }
        }
    }
}

TEST_CASE("count_B04_dp matches enumeration aggregates") {
    std::mt19937 rng(90210);

    auto check_tuple = [](const PrimeLevel& ctx, const std::array<Int, 4>& lam) {
        auto windows = detail::b04_windows(ctx, lam);
        auto enumd = detail::aggregates_from_values(ctx, detail::enumerate_values(ctx, windows));
        auto dp = count_B04_dp(ctx, lam);
        REQUIRE(dp.count == enumd.count);
        REQUIRE(dp.sum_eta == enumd.sum_eta);
        REQUIRE(dp.sum_star == enumd.sum_star);
        REQUIRE(dp.sum_star_sq == enumd.sum_star_sq);
        REQUIRE(dp.sum_star_prod == enumd.sum_star_prod);
    };

    // Pinned instances.
    check_tuple(PrimeLevel(11, 1), {1, 1, 1, 1});
    check_tuple(PrimeLevel(11, 2), {12, 12, 12, 12});
    CHECK(count_B04_dp(PrimeLevel(11, 2), {12, 12, 12, 12}).count == 15);

    // Exhaustive at p = 5, N = 1 (2^4 label tuples).
    {
        PrimeLevel ctx(5, 1);
        for (long a : {0, 1})
            for (long b : {0, 1})
                for (long c : {0, 1})
                    for (long d : {0, 1}) check_tuple(ctx, {a, b, c, d});
    }

    // Randomized coverage across the supported small range.
    for (int p : {5, 7, 11, 13}) {
        for (unsigned N = 1; N <= 3; ++N) {
            PrimeLevel ctx(p, N);
            for (int it = 0; it < 40; ++it) {
                check_tuple(ctx, {random_label(ctx, rng), random_label(ctx, rng),
                                  random_label(ctx, rng), random_label(ctx, rng)});
            }
        }
    }
}

TEST_CASE("cset_11 is the delta image of enumerate_B11") {
    PrimeLevel p5(5, 1);
    auto list = cset_11(p5, delta(p5, 1));
    CHECK(reps_of(list) == std::vector<long>{1, 2}); // δ({0,1}) = {2̄, 1̄}, sorted

    PrimeLevel p11(11, 1);
    auto single = cset_11(p11, delta(p11, 0));
    REQUIRE(single.size() == 1);
    CHECK(single[0] == delta(p11, 0));

    for (const auto& cls : cset_11(p11, delta(p11, 3))) {
        auto back = delta_inv(cls);
        auto base = enumerate_B11(p11, delta_inv(delta(p11, 3)));
        CHECK(std::find(base.begin(), base.end(), back) != base.end());
    }
}

TEST_CASE("slack membership predicates") {
    CHECK(ds_membership(13, 5, {3, 3, 3, 3}));
    CHECK(ds_membership(11, 2, {2, 2, 2, 2}));
    CHECK(ds_membership(5, 0, {0, 0, 0, 0}));
    CHECK_FALSE(ds_membership(11, 3, {0, 0, 0, 0}));
    CHECK_THROWS_AS(ds_membership(11, 5, {0, 0, 0, 0}), ValidationError); // s > (p−3)/2

    // N = 1 digit test reduces to the level-1 predicate.
    std::mt19937 rng(5150);
    PrimeLevel ctx13(13, 1);
    for (int it = 0; it < 50; ++it) {
        std::array<Int, 4> lam{random_label(ctx13, rng), random_label(ctx13, rng),
                               random_label(ctx13, rng), random_label(ctx13, rng)};
        for (Int s = 0; s <= 5; ++s)
            CHECK(dsn_membership(ctx13, s, lam) == ds_membership(13, s, lam));
    }

    // Constant-digit quadruple at level 3.
    PrimeLevel ctx(13, 3);
    Int lam = 3 + 3 * 13 + 3 * 169;
    for (Int s = 0; s <= 5; ++s)
        CHECK(dsn_membership(ctx, s, {lam, lam, lam, lam}));

    CHECK_THROWS_AS(DsQuadruple(11, 3, {0, 0, 0, 0}), ValidationError);
    CHECK_NOTHROW(DsQuadruple(13, 5, {3, 3, 3, 3}));
}

TEST_CASE("slack members obey the power lower bound") {
    // Membership at slack s forces at least s^N elements in the base set
    // (and 3·s^N across the classifying sets).
    std::mt19937 rng(31337);
    for (int p : {11, 13}) {
        for (unsigned N = 1; N <= 2; ++N) {
            PrimeLevel ctx(p, N);
            long level1_max = Int((ctx.p - 3) / 2).get_si();
            std::uniform_int_distribution<long> digit(0, level1_max);
            int found = 0;
            for (int it = 0; it < 200; ++it) {
                // Assemble labels digit by digit so that every digit quadruple
                // already satisfies the slack inequality for some s >= 1.
                std::array<Int, 4> lam{0, 0, 0, 0};
                bool feasible = true;
                for (unsigned j = 0; j < N && feasible; ++j) {
                    std::array<Int, 4> quad;
                    int tries = 0;
                    do {
                        for (auto& d : quad) d = digit(rng);
                        ++tries;
                    } while (detail::slack_of(ctx.p, quad) < 1 && tries < 200);
                    feasible = detail::slack_of(ctx.p, quad) >= 1;
                    for (size_t i = 0; i < 4; ++i) lam[i] += quad[i] * pow_int(ctx.p, j);
                }
                if (!feasible) continue;
                for (Int s = 1; 2 * s <= ctx.p - 3; ++s) {
                    if (!dsn_membership(ctx, s, lam)) continue;
                    ++found;
                    Int need = pow_int(s, ctx.N);
                    CHECK(count_B04_dp(ctx, lam).count >= need);
                    RadiiTuple4 rho(ctx, {delta(ctx, lam[0]), delta(ctx, lam[1]),
                                          delta(ctx, lam[2]), delta(ctx, lam[3])});
                    CHECK(csets_04(rho).total >= 3 * need);
                }
            }
            CHECK(found > 0);
        }
    }
}

TEST_CASE("tri-equality holds across random tuples") {
    std::mt19937 rng(24601);
    for (int p : {5, 7, 11, 13}) {
        for (unsigned N = 1; N <= 2; ++N) {
            PrimeLevel ctx(p, N);
            for (int it = 0; it < 30; ++it) {
                RadiiTuple4 rho(ctx, {delta(ctx, random_label(ctx, rng)),
                                      delta(ctx, random_label(ctx, rng)),
                                      delta(ctx, random_label(ctx, rng)),
                                      delta(ctx, random_label(ctx, rng))});
                auto rep = csets_04(rho); // throws ConsistencyError on violation
                CHECK(rep.n0 == rep.ninf);
            }
        }
    }
}

TEST_CASE("enumeration cutoff is enforced") {
    PrimeLevel ctx(11, 2);
    CHECK_THROWS_AS(enumerate_B04(ctx, labels4(ctx, 1, 1, 1, 1), 100), ValidationError);
    CHECK_NOTHROW(csets_04(radii_from_labels(ctx, 1, 1, 1, 1), 100)); // falls back to the DP
}
