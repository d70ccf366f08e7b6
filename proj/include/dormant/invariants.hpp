#ifndef DORMANT_INVARIANTS_HPP
#define DORMANT_INVARIANTS_HPP

// Exact evaluation of the closed genus/degree/critical-point formulas.
//
// For a nonempty classifying set C with star sums as in CSetReport, the
// level-N genus of the classified curve family is
//
//   g = 1 + (−3p^N + 1 + Σᵢ ρᵢ^⊛(p^N − ρᵢ^⊛)) / (6 p^N) · ♯C
//         − Σ_{λ∈C} λ^⊛(p^N − λ^⊛) / (2 p^N)                      (exact form)
//
// with a simplified variant, valid under the smallness hypothesis
// 2·δ⁻¹(ρᵢ)+1 ≤ (p^N−3)/4 for all i:
//
//   g = 1 + (−3 + Σᵢ ρᵢ^⊛) / 6 · ♯C − (1/2)·Σ_{λ∈C} λ^⊛           (simplified)
//
// plus an upper bound for the count of critical points, two a-priori upper
// bounds (genus ≤ (p−1)p^{2N−1}/4, degree ≤ (p−1)p^{N−1}/2), and the
// quadratic-sum identity ♯C·(1 − Σρᵢ^{⊛2}) + 3·Σλ^{⊛2} = 0 that the
// simplified derivation forces under the same hypothesis.
//
// Everything here is exact big-rational arithmetic; there is no floating
// point in this module. Integrality of the genus is itself a checked
// invariant: a fractional value proves the enumerated counts and the
// closed formula disagree, and raises IntegralityViolation.

#include <optional>

#include "dormant/csets.hpp"

namespace dormant {

using Rat = mpq_class;

namespace detail {

inline Rat make_rat(const Int& num, const Int& den) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Int sum_rho_star(const RadiiTuple4& rho) {
    Int s = 0;
    for (const auto& r : rho.rho) s += rho_star(r);
    return s;
}

inline Int sum_rho_star_prod(const RadiiTuple4& rho) {
    Int s = 0;
    for (const auto& r : rho.rho) {
        Int u = rho_star(r);
        s += u * (rho.ctx.pn - u);
    }
    return s;
}

inline Int sum_rho_star_sq(const RadiiTuple4& rho) {
    Int s = 0;
    for (const auto& r : rho.rho) {
        Int u = rho_star(r);
        s += u * u;
    }
    return s;
}

} // namespace detail

// The smallness hypothesis gating the simplified genus formula:
// 2·δ⁻¹(ρᵢ)+1 ≤ (p^N−3)/4 for every i, compared exactly.
inline bool simplified_hypothesis_holds(const RadiiTuple4& rho) {
    for (const auto& r : rho.rho) {
        Int s = delta_inv(r).value;
        if (4 * (2 * s + 1) > rho.ctx.pn - 3) return false;
    }
    return true;
}

inline Rat genus_upper_bound(const PrimeLevel& ctx) {
    return detail::make_rat((ctx.p - 1) * pow_int(ctx.p, 2 * ctx.N - 1), 4);
}

inline Int degree_upper_bound(const PrimeLevel& ctx) {
    return ctx.label_count(); // (p−1) p^{N−1} / 2
}

struct GenusReport {
    PrimeLevel ctx;
    RadiiTuple4 rho;
    CSetReport cset;
    Int genus;
    Rat genus_raw;
    Int degree;
    Rat genus_upper;
    Int degree_upper;
    Rat crit_bound;
    bool simplified_applicable;
    std::optional<bool> pair_identity_holds; // nullopt when the hypothesis fails
};

// Exact-form critical point bound from an already-computed report.
inline Rat critical_points_bound(const CSetReport& cset) {
    if (cset.total == 0)
        throw EmptyModuli("critical point bound undefined for empty moduli at " + cset.rho.str());
    const Int& pn = cset.ctx.pn;
    Int a12 = -pn + 1 + detail::sum_rho_star_prod(cset.rho);
    return detail::make_rat(a12 * cset.total, 3 * pn) - detail::make_rat(cset.sum_star_prod, pn);
}

inline Rat critical_points_bound(const RadiiTuple4& rho, long max_enum = kDefaultMaxEnum) {
    return critical_points_bound(csets_04(rho, max_enum));
}

// Simplified critical point bound (−1 + Σρᵢ^⊛)/3 · ♯C − Σλ^⊛. It follows
// from the exact form by the quadratic-sum identity, so it is gated on the
// same hypothesis; where that identity fails the two bounds differ.
inline Rat critical_points_bound_simplified(const RadiiTuple4& rho,
                                            long max_enum = kDefaultMaxEnum) {
    if (!simplified_hypothesis_holds(rho))
        throw HypothesisViolation("simplified critical point bound does not apply at " + rho.str());
    CSetReport cset = csets_04(rho, max_enum);
    if (cset.total == 0)
        throw EmptyModuli("critical point bound undefined for empty moduli at " + rho.str());
    Rat coeff = detail::make_rat(-1 + detail::sum_rho_star(rho), 3);
    return coeff * Rat(cset.total) - Rat(cset.sum_star);
}

// The quadratic-sum identity, evaluated exactly. Precondition: the
// simplified-formula hypothesis holds for rho.
inline bool pair_identity_check(const RadiiTuple4& rho, long max_enum = kDefaultMaxEnum) {
    if (!simplified_hypothesis_holds(rho))
        throw HypothesisViolation("quadratic-sum identity requires the simplified-formula hypothesis at " +
                                  rho.str());
    CSetReport cset = csets_04(rho, max_enum);
    Int lhs = cset.total * (1 - detail::sum_rho_star_sq(rho)) + 3 * cset.sum_star_sq;
    return lhs == 0;
}

// Exact genus evaluation with all bounds attached.
inline GenusReport genus_04(const RadiiTuple4& rho, long max_enum = kDefaultMaxEnum) {
    CSetReport cset = csets_04(rho, max_enum);
    if (cset.total == 0)
        throw EmptyModuli("genus undefined for empty moduli at " + rho.str());

    const Int& pn = rho.ctx.pn;
    Int a = -3 * pn + 1 + detail::sum_rho_star_prod(rho);
    Rat raw = 1 + detail::make_rat(a * cset.total, 6 * pn) -
              detail::make_rat(cset.sum_star_prod, 2 * pn);

    if (raw.get_den() != 1 || raw < 0)
        throw IntegralityViolation("genus evaluated to the non-integral or negative value " +
                                   raw.get_str() + " at " + rho.str());

    GenusReport rep{rho.ctx,
                    rho,
                    cset,
                    raw.get_num(),
                    raw,
                    cset.n0,
                    genus_upper_bound(rho.ctx),
                    degree_upper_bound(rho.ctx),
                    critical_points_bound(cset),
                    simplified_hypothesis_holds(rho),
                    std::nullopt};

    if (rep.simplified_applicable) {
        Int lhs = cset.total * (1 - detail::sum_rho_star_sq(rho)) + 3 * cset.sum_star_sq;
        rep.pair_identity_holds = (lhs == 0);
    }

    if (rep.genus > rep.genus_upper)
        throw ConsistencyError("genus " + rep.genus.get_str() + " exceeds its a-priori bound at " +
                               rho.str());
    if (rep.degree > rep.degree_upper)
        throw ConsistencyError("degree " + rep.degree.get_str() + " exceeds its a-priori bound at " +
                               rho.str());
    return rep;
}

// The simplified formula without its applicability gate. Exposed because the
// gate's failure mode is itself informative: on the golden level-1 example
// the ungated evaluation produces the non-integral 7/2.
inline Rat genus_04_simplified_raw(const RadiiTuple4& rho, long max_enum = kDefaultMaxEnum) {
    CSetReport cset = csets_04(rho, max_enum);
    if (cset.total == 0)
        throw EmptyModuli("genus undefined for empty moduli at " + rho.str());
    Rat coeff = detail::make_rat(-3 + detail::sum_rho_star(rho), 6);
    return 1 + coeff * Rat(cset.total) - detail::make_rat(cset.sum_star, 2);
}

inline Int genus_04_simplified(const RadiiTuple4& rho, long max_enum = kDefaultMaxEnum) {
    if (!simplified_hypothesis_holds(rho))
        throw HypothesisViolation("simplified genus formula does not apply at " + rho.str());
    Rat value = genus_04_simplified_raw(rho, max_enum);
    if (value.get_den() != 1 || value < 0)
        throw IntegralityViolation("simplified genus evaluated to " + value.get_str() + " at " +
                                   rho.str());
    return value.get_num();
}

// Closed forms of the two worked families, each gated independently:
//   * the constant-label family λᵢ = m(p^N−1)/(p−1), valid for m < (p−1)/8;
//   * the quarter-point family ρᵢ = δ((p^N−1)/4), valid when 4 | p^N−1.
struct ExampleClosedForms {
    std::optional<Int> genus99, count99;
    std::optional<Int> genus30, count30;
};

inline ExampleClosedForms example_closed_forms(const Int& p, unsigned N, const Int& m) {
    PrimeLevel ctx(p, N); // validates p, N
    if (m < 0) throw ValidationError("m must be nonnegative");
    ExampleClosedForms out;

    if (8 * m < p - 1) {
        Int reps = (ctx.pn - 1) / (p - 1); // 1 + p + … + p^{N−1}
        Int cnt = pow_int(2 * m + 1, N);
        out.count99 = cnt;
        out.genus99 = 1 + (m * reps - 1) * cnt;
    }
    if (mod_floor(ctx.pn - 1, Int(4)) == 0) {
        Int inner = pow_int(p, 2 * N - 1) - 6 * pow_int(p, N - 1) - 1;
        Rat g = detail::make_rat((p - 1) * inner, 8);
        if (g.get_den() != 1)
            throw ConsistencyError("quarter-point closed form came out non-integral for p = " +
                                   p.get_str());
        out.genus30 = 1 + g.get_num();
        out.count30 = ctx.label_count();
    }
    return out;
}

} // namespace dormant

#endif // DORMANT_INVARIANTS_HPP
