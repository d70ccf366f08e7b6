#include <catch2/catch_amalgamated.hpp>

#include "dormant/tower.hpp"

using namespace dormant;

namespace {

RadiiTuple4 radii_from_reps(const PrimeLevel& ctx, long a, long b, long c, long d) {
    return RadiiTuple4(
        ctx, {RadiusClass(ctx, a), RadiusClass(ctx, b), RadiusClass(ctx, c), RadiusClass(ctx, d)});
}

std::array<Rat, 4> rat4(long num, long den) {
    Rat v(num, den);
    v.canonicalize();
    return {v, v, v, v};
}

std::array<Int, 4> int4(long v) { return {Int(v), Int(v), Int(v), Int(v)}; }

std::array<std::vector<unsigned>, 4> digits4(std::vector<unsigned> d) { return {d, d, d, d}; }

} // namespace

TEST_CASE("truncation of a rational radius spec") {
    // -1/4 at p=13, level 1: -4^{-1} = -10 ≡ 3, and the class of 3 is 3.
    PadicRadiusSpec spec = PadicRadiusSpec::rational(13, rat4(-1, 4));
    RadiiTuple4 r1 = truncate_radii(spec, 1);
    CHECK(r1.rho[0].rep == 3);
    CHECK(r1.rho[0].rep == delta(PrimeLevel(13, 1), 3).rep);

    // The unit -1/4 has every base-13 digit equal to 3.
    RadiiTuple4 r2 = truncate_radii(spec, 2);
    CHECK(r2.rho[0].rep == RadiusClass(PrimeLevel(13, 2), 3 + 3 * 13).rep);

    CHECK_THROWS_AS(PadicRadiusSpec::rational(13, rat4(1, 13)), ValidationError);
    CHECK_THROWS_AS(PadicRadiusSpec::rational(13, rat4(13, 4)), NonUnitRadius);
    CHECK_THROWS_AS(PadicRadiusSpec::rational(13, rat4(26, 3)), NonUnitRadius);
}

TEST_CASE("truncation of a constant-label spec") {
    PadicRadiusSpec spec = PadicRadiusSpec::constant_lambda(11, int4(1));
    PrimeLevel c3(11, 3);
    CHECK(truncate_radii(spec, 3).rho[2].rep == delta(c3, 1).rep);

    // Labels outside the level's label set are rejected level by level: 7 is
    // a valid label from level 2 on, but not at level 1.
    PadicRadiusSpec tall = PadicRadiusSpec::constant_lambda(11, int4(7));
    CHECK_THROWS_AS(truncate_radii(tall, 1), ValidationError);
    CHECK_NOTHROW(truncate_radii(tall, 2));

    // 2λ+1 ≡ 0 mod p is excluded at every level, hence at spec construction.
    CHECK_THROWS_AS(PadicRadiusSpec::constant_lambda(11, int4(5)), ValidationError);
    CHECK_THROWS_AS(PadicRadiusSpec::constant_lambda(11, {Int(1), Int(1), Int(1), Int(-2)}),
                    ValidationError);
}

TEST_CASE("truncation of a digit-stream spec") {
    PadicRadiusSpec spec = PadicRadiusSpec::digit_stream(7, digits4({3, 2, 5, 1}));
    CHECK(truncate_radii(spec, 1).rho[0].rep == 3);
    // 3 + 2·7 = 17, folded in Z/49 to min(17, 32) = 17.
    CHECK(truncate_radii(spec, 2).rho[0].rep == 17);
    CHECK_THROWS_AS(truncate_radii(spec, 5), ValidationError);

    CHECK_THROWS_AS(PadicRadiusSpec::digit_stream(7, digits4({0, 1})), NonUnitRadius);
    CHECK_THROWS_AS(PadicRadiusSpec::digit_stream(7, digits4({3, 7})), ValidationError);
    CHECK_THROWS_AS(PadicRadiusSpec::digit_stream(7, digits4({})), ValidationError);
}

TEST_CASE("truncations form a projective system") {
    // Reducing the level-(N+1) representative mod p^N and re-folding must give
    // the level-N representative, for every kind of spec.
    std::vector<PadicRadiusSpec> specs = {
        PadicRadiusSpec::rational(13, rat4(-1, 4)),
        PadicRadiusSpec::rational(11, rat4(-1, 10)),
        PadicRadiusSpec::constant_lambda(11, int4(1)),
        PadicRadiusSpec::digit_stream(7, digits4({3, 2, 5, 1})),
    };
    for (const auto& spec : specs) {
        for (unsigned N = 1; N <= 3; ++N) {
            RadiiTuple4 lo = truncate_radii(spec, N);
            RadiiTuple4 hi = truncate_radii(spec, N + 1);
            for (size_t i = 0; i < 4; ++i) {
                RadiusClass reduced(lo.ctx, mod_floor(hi.rho[i].rep, lo.ctx.pn));
                CHECK(reduced.rep == lo.rho[i].rep);
            }
        }
    }
}

TEST_CASE("rational-place lower bound") {
    PrimeLevel p11(11, 1);
    CHECK(p_lower_bound(radii_from_reps(p11, 3, 2, 4, 2)) == 9);

    PadicRadiusSpec spec = PadicRadiusSpec::rational(13, rat4(-1, 4));
    CHECK(p_lower_bound(truncate_radii(spec, 1)) == 18);

    PrimeLevel p5(5, 1);
    CHECK_THROWS_AS(p_lower_bound(radii_from_reps(p5, 1, 2, 2, 2)), EmptyModuli);
}

TEST_CASE("growth inequality decision procedure") {
    // θ = 0 path: the bound is exactly 3.
    CHECK(detail::growth_bound_check(2, 5, 11, 1, 128) == TriBool::Fail);
    CHECK(detail::growth_bound_check(3, 5, 11, 1, 128) == TriBool::Pass);
    // Exact bracket shortcut: 4p ≤ (p−1)g makes the bound ≤ 3.
    CHECK(detail::growth_bound_check(18, 10, 13, 5, 128) == TriBool::Pass);
    // Interval path (g = 1, bracket > 1): bound is 3·(44/10)^{log2/(2log11)}
    // ≈ 3.72, so 5 passes and 3 fails.
    CHECK(detail::growth_bound_check(5, 1, 11, 2, 128) == TriBool::Pass);
    CHECK(detail::growth_bound_check(3, 1, 11, 2, 128) == TriBool::Fail);
    // Degenerate genus: the bound is +∞ for θ > 0.
    CHECK(detail::growth_bound_check(6, 0, 5, 2, 128) == TriBool::Fail);
}

TEST_CASE("ratio enclosures") {
    BigFloat lo, hi;
    detail::ratio_interval(18, 10, Rat(1, 2), 128, lo, hi);
    CHECK(mpfr_cmp(lo.get(), hi.get()) <= 0);
    CHECK(detail::decimal_of(lo, MPFR_RNDD).substr(0, 4) == "5.69");
    CHECK(detail::decimal_of(hi, MPFR_RNDU).substr(0, 4) == "5.69");

    detail::ratio_interval(9, 1, Rat(1, 2), 128, lo, hi);
    CHECK(mpfr_cmp_ui(lo.get(), 9) == 0);
    CHECK(mpfr_cmp_ui(hi.get(), 9) == 0);

    detail::ratio_interval(7, 999, Rat(0), 128, lo, hi);
    CHECK(mpfr_cmp_ui(lo.get(), 7) == 0);

    detail::ratio_interval(6, 0, Rat(1, 2), 128, lo, hi);
    CHECK(mpfr_inf_p(lo.get()));
    CHECK(detail::decimal_of(lo, MPFR_RNDD) == "inf");
}

TEST_CASE("goodness certificate on the all-3-digits chain at p=13") {
    PadicRadiusSpec spec = PadicRadiusSpec::rational(13, rat4(-1, 4));
    GoodnessCertificate cert = alpha_goodness_certificate(spec, 5, 3);
    REQUIRE(cert.rows.size() == 3);
    CHECK(cert.certified);
    CHECK_FALSE(cert.failed_level.has_value());
    for (unsigned N = 1; N <= 3; ++N) {
        const CertificateRow& row = cert.rows[N - 1];
        CHECK(row.N == N);
        CHECK(row.bound_check == TriBool::Pass);
        // Closed forms for this family: count 3(p−1)p^{N−1}/2 and genus
        // 1 + (p−1)(p^{2N−1} − 6p^{N−1} − 1)/8.
        Int pn1 = pow_int(13, N - 1);
        CHECK(row.count == 3 * 6 * pn1);
        CHECK(row.genus == 1 + 12 * (pow_int(13, 2 * N - 1) - 6 * pn1 - 1) / 8);
        CHECK(row.degree == 6 * pn1);
        // Slack floor: degree ≥ 5^N, count ≥ 3·5^N.
        CHECK(row.degree >= pow_int(5, N));
        CHECK(row.count >= 3 * pow_int(5, N));
    }
    CHECK(cert.rows[1].genus == 3178);
    CHECK(cert.rows[2].genus == 555418);

    // Gate violations.
    CHECK_THROWS_AS(alpha_goodness_certificate(spec, 0, 1), ValidationError);
    CHECK_THROWS_AS(alpha_goodness_certificate(spec, 6, 1), ValidationError);
    CHECK_THROWS_AS(alpha_goodness_certificate(spec, 5, 0), ValidationError);
}

TEST_CASE("membership failures are level-exact") {
    // The constant INTEGER label 3 at p=13 has level-2 digits (3, 0); the
    // zero digit carries slack 0, so the slack-5 class is left at level 2
    // even though level 1 passes.  (The all-3-digits unit -1/4 is the chain
    // that stays inside; the two agree only at level 1.)
    PadicRadiusSpec spec = PadicRadiusSpec::constant_lambda(13, int4(3));
    GoodnessCertificate level1 = alpha_goodness_certificate(spec, 5, 1);
    CHECK(level1.certified);
    CHECK(level1.rows.size() == 1);
    CHECK(level1.rows[0].count == 18);
    CHECK(level1.rows[0].genus == 10);
    CHECK_THROWS_AS(alpha_goodness_certificate(spec, 5, 2), MembershipFailure);

    // All-zero labels have slack 0 at level 1 already.
    PadicRadiusSpec zeros = PadicRadiusSpec::constant_lambda(13, int4(0));
    CHECK_THROWS_AS(alpha_goodness_certificate(zeros, 1, 1), MembershipFailure);
}

TEST_CASE("slack-1 certificate on the all-1-digits chain at p=5") {
    PadicRadiusSpec spec = PadicRadiusSpec::rational(5, rat4(-1, 4));
    GoodnessCertificate cert = alpha_goodness_certificate(spec, 1, 3);
    REQUIRE(cert.rows.size() == 3);
    CHECK(cert.certified);
    // Closed forms: count 3(p−1)p^{N−1}/2, genus 1+(p−1)(p^{2N−1}−6p^{N−1}−1)/8.
    CHECK(cert.rows[0].count == 6);
    CHECK(cert.rows[0].genus == 0);
    CHECK(cert.rows[1].count == 30);
    CHECK(cert.rows[1].genus == 48);
    CHECK(cert.rows[2].count == 150);
    CHECK(cert.rows[2].genus == 1488);
    for (const CertificateRow& row : cert.rows) CHECK(row.bound_check == TriBool::Pass);
}

TEST_CASE("the radius chain of the all-1-digits labels at p=11 breaks at level 2") {
    // λ_N = (11^N−1)/10 has every digit 1, so membership in the slack-1 class
    // holds at every level; the corresponding radius chain (2λ+1)/2 = 2/5
    // nevertheless evaluates to a non-integral genus from level 2 on, so the
    // certificate stops there.  This pins the level-2 behavior of that family
    // honestly rather than extrapolating the level-1 pattern.
    PadicRadiusSpec spec = PadicRadiusSpec::rational(11, rat4(2, 5));
    RadiiTuple4 r1 = truncate_radii(spec, 1);
    CHECK(r1.rho[0].rep == delta(PrimeLevel(11, 1), 1).rep);
    RadiiTuple4 r2 = truncate_radii(spec, 2);
    CHECK(r2.rho[0].rep == delta(PrimeLevel(11, 2), 12).rep);

    GoodnessCertificate cert = alpha_goodness_certificate(spec, 1, 3);
    CHECK_FALSE(cert.certified);
    REQUIRE(cert.failed_level.has_value());
    CHECK(*cert.failed_level == 2);
    REQUIRE(cert.rows.size() == 1);
    CHECK(cert.rows[0].count == 9);
    CHECK(cert.rows[0].genus == 1);
}

TEST_CASE("certificate reports a genus integrality break as a failed level") {
    // The unit 73 = 7 + 6·11 folds to the class chain (4, 48): level 1 is the
    // stable genus-1 tuple, level 2 evaluates to a non-integral genus.  The
    // digit labels stay inside the slack-1 class (digits (1,1)), so the
    // failure is the genus integrality itself, reported softly with the
    // level-1 row retained.
    PadicRadiusSpec spec = PadicRadiusSpec::digit_stream(11, digits4({7, 6}));
    GoodnessCertificate cert = alpha_goodness_certificate(spec, 1, 2);
    CHECK_FALSE(cert.certified);
    REQUIRE(cert.failed_level.has_value());
    CHECK(*cert.failed_level == 2);
    CHECK_FALSE(cert.failure_reason.empty());
    REQUIRE(cert.rows.size() == 1);
    CHECK(cert.rows[0].genus == 1);
    CHECK(cert.rows[0].count == 9);
}

TEST_CASE("tower report on the p=13 chain") {
    PadicRadiusSpec spec = PadicRadiusSpec::rational(13, rat4(-1, 4));
    TowerReport rep = tower_report(spec, 3, {Rat(1, 2)});
    REQUIRE(rep.rows.size() == 3);
    CHECK_FALSE(rep.non_tower);
    CHECK_FALSE(rep.failed_level.has_value());
    CHECK(rep.rows[0].count == 18);
    CHECK(rep.rows[0].genus == 10);
    CHECK(rep.rows[0].p_lower == rep.rows[0].count);
    CHECK(rep.rows[1].count == 234);
    CHECK(rep.rows[1].genus == 3178);
    CHECK(rep.rows[2].count == 3042);
    CHECK(rep.rows[2].genus == 555418);

    REQUIRE(rep.rows[0].ratios.size() == 1);
    CHECK_FALSE(rep.rows[0].ratios[0].infinite);
    CHECK(rep.rows[0].ratios[0].lo.substr(0, 4) == "5.69");
    CHECK(rep.rows[1].ratios[0].lo.substr(0, 4) == "4.15");
    CHECK(rep.rows[2].ratios[0].lo.substr(0, 4) == "4.08");

    // The ratio sequence dips below its first term (5.69 → 4.15), so the
    // α = 1/2 trend is not certified over this range; the certified grid
    // estimate settles at 28/64 = 7/16.
    REQUIRE(rep.alpha_verdicts.size() == 1);
    CHECK_FALSE(rep.alpha_verdicts[0]);
    REQUIRE(rep.delta_lower.has_value());
    CHECK(*rep.delta_lower == Rat(7, 16));
}

TEST_CASE("tower report flags constant genus as non-tower") {
    PadicRadiusSpec spec = PadicRadiusSpec::constant_lambda(11, int4(1));
    TowerReport rep = tower_report(spec, 3, {Rat(1, 2), Rat(0)});
    REQUIRE(rep.rows.size() == 3);
    CHECK(rep.non_tower);
    CHECK_FALSE(rep.delta_lower.has_value());
    for (const TowerRow& row : rep.rows) {
        CHECK(row.genus == 1);
        CHECK(row.count == 9);
        CHECK(row.ratios[0].lo == "9");
        CHECK(row.ratios[0].hi == "9");
    }
    // Constant sequences still satisfy the "never below the first term"
    // trend — the non_tower flag is what marks them as degenerate.
    CHECK(rep.alpha_verdicts[0]);
    CHECK(rep.alpha_verdicts[1]);
}

TEST_CASE("tower report propagates hard failures") {
    // Empty moduli at the very first level.
    PadicRadiusSpec empty = PadicRadiusSpec::digit_stream(5, {std::vector<unsigned>{1},
                                                             std::vector<unsigned>{2},
                                                             std::vector<unsigned>{2},
                                                             std::vector<unsigned>{2}});
    CHECK_THROWS_AS(tower_report(empty, 1, {Rat(1, 2)}), EmptyModuli);

    // Genus integrality break at level 2: soft-reported, level 1 retained.
    PadicRadiusSpec broken = PadicRadiusSpec::digit_stream(11, digits4({7, 6}));
    TowerReport rep = tower_report(broken, 2, {Rat(1, 2)});
    REQUIRE(rep.failed_level.has_value());
    CHECK(*rep.failed_level == 2);
    REQUIRE(rep.rows.size() == 1);
    CHECK(rep.rows[0].genus == 1);

    CHECK_THROWS_AS(tower_report(broken, 0, {}), ValidationError);
    CHECK_THROWS_AS(tower_report(broken, 1, {Rat(-1, 2)}), ValidationError);
}
