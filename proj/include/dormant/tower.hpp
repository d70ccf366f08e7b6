#pragma once

// Level towers: p-adic radius specifications truncated level by level, the
// per-level rational-place lower bound, and goodness certificates for the
// growth exponent.
//
// The analytic claims are kept rigorous by construction:
//   * every inequality that can be decided in exact integer/rational
//     arithmetic is decided exactly;
//   * everything else is decided through directed-rounding interval
//     arithmetic (MPFR, default 128 bits) and reported as Pass, Fail or
//     Undecided — never through nearest-rounding floats;
//   * certificates speak only about the computed levels ("certified for
//     N ≤ N_max"), never about asymptotics.

#include <mpfr.h>

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dormant/arith.hpp"
#include "dormant/csets.hpp"
#include "dormant/errors.hpp"
#include "dormant/invariants.hpp"

namespace dormant {

enum class TriBool { Pass, Fail, Undecided };

inline const char* to_string(TriBool v) {
    switch (v) {
        case TriBool::Pass: return "pass";
        case TriBool::Fail: return "fail";
        default: return "undecided";
    }
}

// ---------------------------------------------------------------------------
// Directed-rounding big floats
// ---------------------------------------------------------------------------

// RAII wrapper around mpfr_t; all arithmetic on it goes through explicit
// rounding modes at call sites.
class BigFloat {
public:
    explicit BigFloat(mpfr_prec_t prec = 128) {
        mpfr_init2(x_, prec);
        mpfr_set_zero(x_, 1);
    }
    BigFloat(const BigFloat& o) {
        mpfr_init2(x_, mpfr_get_prec(o.x_));
        mpfr_set(x_, o.x_, MPFR_RNDN); // same precision: exact copy
    }
    BigFloat(BigFloat&& o) noexcept {
        mpfr_init2(x_, mpfr_get_prec(o.x_));
        mpfr_swap(x_, o.x_);
    }
    BigFloat& operator=(const BigFloat& o) {
        if (this != &o) {
            mpfr_set_prec(x_, mpfr_get_prec(o.x_));
            mpfr_set(x_, o.x_, MPFR_RNDN);
        }
        return *this;
    }
    BigFloat& operator=(BigFloat&& o) noexcept {
        mpfr_swap(x_, o.x_);
        return *this;
    }
    ~BigFloat() { mpfr_clear(x_); }

    mpfr_ptr get() { return x_; }
    mpfr_srcptr get() const { return x_; }

private:
    mpfr_t x_;
};

namespace detail {

// out = log(v) rounded in direction r (v ≥ 1 integer; rounding the integer
// embedding and the log in the same direction preserves the bound because
// log is increasing).
inline void log_int(BigFloat& out, const Int& v, mpfr_rnd_t r) {
    BigFloat t(mpfr_get_prec(out.get()));
    mpfr_set_z(t.get(), v.get_mpz_t(), r);
    mpfr_log(out.get(), t.get(), r);
}

// out = log(q) rounded in direction r (q > 0 rational).
inline void log_rat(BigFloat& out, const Rat& q, mpfr_rnd_t r) {
    BigFloat t(mpfr_get_prec(out.get()));
    mpfr_set_q(t.get(), q.get_mpq_t(), r);
    mpfr_log(out.get(), t.get(), r);
}

// [lo, hi] ⊇ [alo, ahi] · [blo, bhi] via the four directed corner products.
inline void interval_mul(const BigFloat& alo, const BigFloat& ahi, const BigFloat& blo,
                         const BigFloat& bhi, BigFloat& lo, BigFloat& hi) {
    mpfr_prec_t prec = mpfr_get_prec(lo.get());
    BigFloat c(prec);
    bool first = true;
    for (const BigFloat* a : {&alo, &ahi})
        for (const BigFloat* b : {&blo, &bhi}) {
            mpfr_mul(c.get(), a->get(), b->get(), MPFR_RNDD);
            if (first || mpfr_cmp(c.get(), lo.get()) < 0) mpfr_set(lo.get(), c.get(), MPFR_RNDD);
            mpfr_mul(c.get(), a->get(), b->get(), MPFR_RNDU);
            if (first || mpfr_cmp(c.get(), hi.get()) > 0) mpfr_set(hi.get(), c.get(), MPFR_RNDU);
            first = false;
        }
}

// Enclosure of count / genus^alpha (count ≥ 1, genus ≥ 0, alpha ≥ 0 exact).
// genus = 0 with alpha > 0 yields [+inf, +inf].
inline void ratio_interval(const Int& count, const Int& genus, const Rat& alpha,
                           mpfr_prec_t prec, BigFloat& lo, BigFloat& hi) {
    lo = BigFloat(prec);
    hi = BigFloat(prec);
    if (alpha == 0 || genus == 1) {
        mpfr_set_z(lo.get(), count.get_mpz_t(), MPFR_RNDD);
        mpfr_set_z(hi.get(), count.get_mpz_t(), MPFR_RNDU);
        return;
    }
    if (genus == 0) {
        mpfr_set_inf(lo.get(), 1);
        mpfr_set_inf(hi.get(), 1);
        return;
    }
    // log-space: log(count) − alpha·log(genus), then exp, all directed.
    BigFloat lp(prec), lg(prec), t(prec);
    log_int(lp, count, MPFR_RNDD);
    log_int(lg, genus, MPFR_RNDU);
    mpfr_mul_q(t.get(), lg.get(), alpha.get_mpq_t(), MPFR_RNDU); // both ≥ 0
    mpfr_sub(lp.get(), lp.get(), t.get(), MPFR_RNDD);
    mpfr_exp(lo.get(), lp.get(), MPFR_RNDD);
    log_int(lp, count, MPFR_RNDU);
    log_int(lg, genus, MPFR_RNDD);
    mpfr_mul_q(t.get(), lg.get(), alpha.get_mpq_t(), MPFR_RNDD);
    mpfr_sub(lp.get(), lp.get(), t.get(), MPFR_RNDU);
    mpfr_exp(hi.get(), lp.get(), MPFR_RNDU);
}

// Decides count ≥ 3·(4p/((p−1)·genus))^θ with θ = log(s)/(2·log(p)).
// Equivalent log form, brought to products of rational logs:
//   2·log(p)·log(count/3)  ≥  log(s)·log(4p/((p−1)·genus)).
// Exact fast paths first; otherwise a directed-interval comparison that
// returns Undecided when the enclosures overlap.
inline TriBool growth_bound_check(const Int& count, const Int& genus, const Int& p, const Int& s,
                                  mpfr_prec_t prec) {
    if (s == 1) return count >= 3 ? TriBool::Pass : TriBool::Fail; // θ = 0: bound is exactly 3
    if (genus == 0) return TriBool::Fail; // bound degenerates to +∞
    if (count >= 3 && 4 * p <= (p - 1) * genus)
        return TriBool::Pass; // bracket ≤ 1, θ > 0 ⇒ bound ≤ 3 ≤ count, exactly

    BigFloat alo(prec), ahi(prec), blo(prec), bhi(prec);
    // a = 2 log p ≥ 0
    log_int(alo, p, MPFR_RNDD);
    mpfr_mul_ui(alo.get(), alo.get(), 2, MPFR_RNDD);
    log_int(ahi, p, MPFR_RNDU);
    mpfr_mul_ui(ahi.get(), ahi.get(), 2, MPFR_RNDU);
    // b = log(count/3)
    Rat c3(count);
    c3 /= 3;
    log_rat(blo, c3, MPFR_RNDD);
    log_rat(bhi, c3, MPFR_RNDU);
    BigFloat lhs_lo(prec), lhs_hi(prec);
    interval_mul(alo, ahi, blo, bhi, lhs_lo, lhs_hi);

    // c = log s ≥ 0, d = log(4p/((p−1)g))
    log_int(alo, s, MPFR_RNDD);
    log_int(ahi, s, MPFR_RNDU);
    Rat br(Int(4 * p));
    br /= Rat(Int((p - 1) * genus));
    log_rat(blo, br, MPFR_RNDD);
    log_rat(bhi, br, MPFR_RNDU);
    BigFloat rhs_lo(prec), rhs_hi(prec);
    interval_mul(alo, ahi, blo, bhi, rhs_lo, rhs_hi);

    if (mpfr_cmp(lhs_lo.get(), rhs_hi.get()) >= 0) return TriBool::Pass;
    if (mpfr_cmp(lhs_hi.get(), rhs_lo.get()) < 0) return TriBool::Fail;
    return TriBool::Undecided;
}

// Fixed-notation decimal of a bound, rounded in the direction that keeps it
// a bound (RNDD for lower ends, RNDU for upper ends).
inline std::string decimal_of(const BigFloat& v, mpfr_rnd_t r) {
    if (mpfr_inf_p(v.get())) return mpfr_sgn(v.get()) > 0 ? "inf" : "-inf";
    char* s = nullptr;
    mpfr_asprintf(&s, "%.12R*g", r, v.get());
    std::string out(s);
    mpfr_free_str(s);
    return out;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Radius specifications and truncation
// ---------------------------------------------------------------------------

// A compatible family of radius tuples across all levels: either a fixed
// integer label quadruple (level-N radii are its level-N classes), a rational
// quadruple a/b with b coprime to p (level-N radii are the classes of
// a·b^{-1} mod p^N), or explicit base-p digit streams of the unit itself.
struct PadicRadiusSpec {
    enum class Kind { ConstantLambda, Rational, DigitStream };

    Kind kind;
    Int p;
    std::array<Int, 4> lambdas{};               // ConstantLambda
    std::array<Rat, 4> values{};                // Rational
    std::array<std::vector<unsigned>, 4> digits{}; // DigitStream, little-endian

    static PadicRadiusSpec constant_lambda(const Int& p, const std::array<Int, 4>& lambdas) {
        PrimeLevel check(p, 1);
        PadicRadiusSpec spec;
        spec.kind = Kind::ConstantLambda;
        spec.p = p;
        spec.lambdas = lambdas;
        for (const Int& l : lambdas) {
            if (l < 0) throw ValidationError("label " + l.get_str() + " is negative");
            if (mod_floor(2 * l + 1, p) == 0)
                throw ValidationError("label " + l.get_str() +
                                      " is excluded at every level (2λ+1 ≡ 0 mod p)");
        }
        (void)check;
        return spec;
    }

    static PadicRadiusSpec rational(const Int& p, const std::array<Rat, 4>& values) {
        PrimeLevel check(p, 1);
        (void)check;
        PadicRadiusSpec spec;
        spec.kind = Kind::Rational;
        spec.p = p;
        for (size_t i = 0; i < 4; ++i) {
            Rat v = values[i];
            v.canonicalize();
            if (mod_floor(Int(v.get_den()), p) == 0)
                throw ValidationError("denominator of " + v.get_str() + " is divisible by p");
            if (mod_floor(Int(v.get_num()), p) == 0)
                throw NonUnitRadius("value " + v.get_str() + " is not a p-adic unit");
            spec.values[i] = v;
        }
        return spec;
    }

    static PadicRadiusSpec digit_stream(const Int& p,
                                        const std::array<std::vector<unsigned>, 4>& digits) {
        PrimeLevel check(p, 1);
        (void)check;
        PadicRadiusSpec spec;
        spec.kind = Kind::DigitStream;
        spec.p = p;
        for (const auto& d : digits) {
            if (d.empty()) throw ValidationError("empty digit stream");
            if (d[0] == 0) throw NonUnitRadius("digit stream starts with 0 — not a p-adic unit");
            for (unsigned dig : d)
                if (Int(dig) >= p)
                    throw ValidationError("digit " + std::to_string(dig) + " not below p");
        }
        spec.digits = digits;
        return spec;
    }

    std::string str() const {
        std::string s = "p=" + p.get_str() + " ";
        switch (kind) {
            case Kind::ConstantLambda:
                s += "labels(";
                for (size_t i = 0; i < 4; ++i) s += (i ? "," : "") + lambdas[i].get_str();
                return s + ")";
            case Kind::Rational:
                s += "rational(";
                for (size_t i = 0; i < 4; ++i) s += (i ? "," : "") + values[i].get_str();
                return s + ")";
            default:
                s += "digits(";
                for (size_t i = 0; i < 4; ++i) {
                    if (i) s += ",";
                    for (size_t j = 0; j < digits[i].size(); ++j)
                        s += (j ? "." : "") + std::to_string(digits[i][j]);
                }
                return s + ")";
        }
    }
};

// The level-N radius tuple of the specification.  Constant labels must lie in
// the level-N label set; digit streams must carry at least N digits.
inline RadiiTuple4 truncate_radii(const PadicRadiusSpec& spec, unsigned N) {
    PrimeLevel ctx(spec.p, N);
    std::array<std::optional<RadiusClass>, 4> out;
    for (size_t i = 0; i < 4; ++i) {
        switch (spec.kind) {
            case PadicRadiusSpec::Kind::ConstantLambda:
                out[i].emplace(delta(EdgeLabel(ctx, spec.lambdas[i])));
                break;
            case PadicRadiusSpec::Kind::Rational: {
                const Rat& v = spec.values[i];
                Int den(v.get_den());
                if (mod_floor(den, spec.p) == 0)
                    throw ValidationError("denominator of " + v.get_str() + " is divisible by p");
                Int rep = mod_floor(Int(v.get_num()) * mod_inverse(den, ctx.pn), ctx.pn);
                if (mod_floor(rep, spec.p) == 0)
                    throw NonUnitRadius("value " + v.get_str() + " is not a p-adic unit");
                out[i].emplace(ctx, rep);
                break;
            }
            case PadicRadiusSpec::Kind::DigitStream: {
                const auto& d = spec.digits[i];
                if (d.size() < N)
                    throw ValidationError("digit stream has " + std::to_string(d.size()) +
                                          " digits, level " + std::to_string(N) + " needs more");
                Int v = 0;
                for (size_t j = N; j-- > 0;) v = v * spec.p + long(d[j]);
                out[i].emplace(ctx, v);
                break;
            }
        }
    }
    return RadiiTuple4(ctx, {*out[0], *out[1], *out[2], *out[3]});
}

// ---------------------------------------------------------------------------
// Rational-place lower bound
// ---------------------------------------------------------------------------

// The certified lower bound for the number of rational places of the level's
// function field: the full count of the three channels.  Empty moduli carry
// no bound.
inline Int p_lower_bound(const RadiiTuple4& rho, long max_enum = kDefaultMaxEnum) {
    CSetReport rep = csets_04(rho, max_enum);
    if (rep.total == 0)
        throw EmptyModuli("no rational-place bound: moduli empty at " + rho.str());
    return rep.total;
}

// ---------------------------------------------------------------------------
// Goodness certificate
// ---------------------------------------------------------------------------

struct CertificateRow {
    unsigned N;
    Int degree;
    Int count;  // also the rational-place lower bound for the level
    Int genus;
    TriBool bound_check; // count ≥ 3·(4p/((p−1)·genus))^θ, θ = log s/(2 log p)
};

struct GoodnessCertificate {
    PadicRadiusSpec spec;
    Int s;
    unsigned requested_levels;
    mpfr_prec_t precision;
    std::vector<CertificateRow> rows;
    std::optional<unsigned> failed_level; // genus integrality broke here
    std::string failure_reason;
    bool certified; // every requested level present and every check passed
};

// Certifies, level by level up to N_max, that the truncated radii stay in the
// slack-s digit class, that the degree and count dominate s^N and 3·s^N, and
// that the growth inequality count ≥ 3·(4p/((p−1)g))^θ holds.  Membership
// failure is a hard error; a genus integrality failure is reported in the
// certificate (failed_level + reason) with the completed rows retained, since
// a partial certificate is still evidence about the levels it covers.
inline GoodnessCertificate alpha_goodness_certificate(const PadicRadiusSpec& spec, const Int& s,
                                                      unsigned N_max,
                                                      mpfr_prec_t precision = 128,
                                                      long max_enum = kDefaultMaxEnum) {
    if (N_max < 1) throw ValidationError("certificate needs at least one level");
    if (s < 1 || 2 * s > spec.p - 3)
        throw ValidationError("slack parameter s = " + s.get_str() + " outside [1, (p−3)/2] for p = " +
                              spec.p.get_str());
    GoodnessCertificate cert{spec, s, N_max, precision, {}, std::nullopt, "", false};
    bool all_pass = true;
    for (unsigned N = 1; N <= N_max; ++N) {
        RadiiTuple4 rho = truncate_radii(spec, N);
        std::array<Int, 4> lams;
        for (size_t i = 0; i < 4; ++i) lams[i] = delta_inv(rho.rho[i]).value;
        if (!dsn_membership(rho.ctx, s, lams))
            throw MembershipFailure("level " + std::to_string(N) +
                                    ": radii leave the slack-" + s.get_str() + " digit class at " +
                                    rho.str());
        std::optional<GenusReport> gr;
        try {
            gr.emplace(genus_04(rho, max_enum));
        } catch (const IntegralityViolation& e) {
            cert.failed_level = N;
            cert.failure_reason = e.what();
            all_pass = false;
            break;
        }
        Int sN = pow_int(s, N);
        if (gr->degree < sN || gr->cset.total < 3 * sN)
            throw ConsistencyError("slack-derived floor violated at level " + std::to_string(N) +
                                   ": degree " + gr->degree.get_str() + ", count " +
                                   gr->cset.total.get_str() + ", floor " + sN.get_str());
        TriBool check = detail::growth_bound_check(gr->cset.total, gr->genus, spec.p, s, precision);
        cert.rows.push_back({N, gr->degree, gr->cset.total, gr->genus, check});
        if (check != TriBool::Pass) all_pass = false;
    }
    cert.certified = all_pass && !cert.failed_level && cert.rows.size() == N_max;
    return cert;
}

// ---------------------------------------------------------------------------
// Tower report
// ---------------------------------------------------------------------------

struct RatioCell {
    Rat alpha;
    bool infinite;       // genus 0 under a positive exponent
    std::string lo, hi;  // decimal enclosure of count / genus^alpha
};

struct TowerRow {
    unsigned N;
    Int degree;
    Int count;
    Int genus;
    Int p_lower; // equals count: the certified rational-place lower bound
    std::vector<RatioCell> ratios;
};

struct TowerReport {
    PadicRadiusSpec spec;
    unsigned requested_levels;
    mpfr_prec_t precision;
    std::vector<Rat> alphas;
    std::vector<TowerRow> rows;
    // Per requested alpha: certified "the ratio sequence never drops below
    // its first term" over the computed range (directed bounds, so true is
    // rigorous; false may mean merely undecidable at this precision).
    std::vector<bool> alpha_verdicts;
    bool non_tower; // some level failed to increase the genus
    // Largest grid multiple of 1/64 whose ratio sequence is certified
    // bounded below by its first term; absent when non_tower or < 2 levels.
    std::optional<Rat> delta_lower;
    std::optional<unsigned> failed_level; // genus integrality broke here
    std::string failure_reason;
};

namespace detail {

// Ratio intervals of one alpha across all levels.
inline std::vector<std::pair<BigFloat, BigFloat>> ratio_track(const std::vector<TowerRow>& rows,
                                                              const Rat& alpha,
                                                              mpfr_prec_t prec) {
    std::vector<std::pair<BigFloat, BigFloat>> track;
    track.reserve(rows.size());
    for (const TowerRow& r : rows) {
        BigFloat lo(prec), hi(prec);
        ratio_interval(r.count, r.genus, alpha, prec, lo, hi);
        track.emplace_back(std::move(lo), std::move(hi));
    }
    return track;
}

inline bool certified_trend(const std::vector<std::pair<BigFloat, BigFloat>>& track) {
    for (size_t i = 1; i < track.size(); ++i)
        if (mpfr_cmp(track[i].first.get(), track[0].second.get()) < 0) return false;
    return true;
}

} // namespace detail

// Per-level rows with high-precision enclosures of count / genus^alpha for
// each requested alpha, plus trend verdicts over the computed range.  A level
// with empty moduli raises EmptyModuli; levels with non-increasing genus set
// the non_tower flag and suppress the growth-exponent estimate instead of
// reporting a meaningless one.
inline TowerReport tower_report(const PadicRadiusSpec& spec, unsigned N_max,
                                const std::vector<Rat>& alphas, mpfr_prec_t precision = 128,
                                long max_enum = kDefaultMaxEnum) {
    if (N_max < 1) throw ValidationError("tower report needs at least one level");
    for (const Rat& a : alphas)
        if (a < 0) throw ValidationError("exponent " + a.get_str() + " is negative");
    TowerReport rep{spec, N_max, precision, alphas, {}, {}, false, std::nullopt, std::nullopt, ""};
    for (unsigned N = 1; N <= N_max; ++N) {
        RadiiTuple4 rho = truncate_radii(spec, N);
        std::optional<GenusReport> gr;
        try {
            gr.emplace(genus_04(rho, max_enum)); // EmptyModuli propagates: no bound here
        } catch (const IntegralityViolation& e) {
            rep.failed_level = N;
            rep.failure_reason = e.what();
            break;
        }
        TowerRow row{N, gr->degree, gr->cset.total, gr->genus, gr->cset.total, {}};
        for (const Rat& a : alphas) {
            BigFloat lo(precision), hi(precision);
            detail::ratio_interval(row.count, row.genus, a, precision, lo, hi);
            bool inf = mpfr_inf_p(lo.get()) != 0;
            row.ratios.push_back({a, inf,
                                  inf ? "inf" : detail::decimal_of(lo, MPFR_RNDD),
                                  inf ? "inf" : detail::decimal_of(hi, MPFR_RNDU)});
        }
        rep.rows.push_back(std::move(row));
    }
    for (size_t i = 1; i < rep.rows.size(); ++i)
        if (rep.rows[i].genus <= rep.rows[i - 1].genus) rep.non_tower = true;
    for (const Rat& a : alphas)
        rep.alpha_verdicts.push_back(
            detail::certified_trend(detail::ratio_track(rep.rows, a, precision)));
    if (!rep.non_tower && rep.rows.size() >= 2) {
        for (long k = 64; k >= 0; --k) {
            Rat a(k, 64);
            a.canonicalize();
            if (detail::certified_trend(detail::ratio_track(rep.rows, a, precision))) {
                rep.delta_lower = a;
                break;
            }
        }
    }
    return rep;
}

} // namespace dormant
