#ifndef DORMANT_CSETS_HPP
#define DORMANT_CSETS_HPP

// Enumeration of the classifying sets attached to a radii 4-tuple.
//
// For a tuple λ = (λ₁,λ₂,λ₃,λ₄) of edge labels, the base set
// B_{N,λ,0,4} ⊆ B_N consists of the η satisfying, for every 1 ≤ M ≤ N,
//
//     |[λ₁]_M − [λ₂]_M| ≤ [η]_M ≤ min{[λ₁]_M+[λ₂]_M, p^M−2−[λ₁]_M−[λ₂]_M}
//
// together with the same condition for the pair (λ₃,λ₄). (The level-N
// condition is the M = N case: [a]_N = a on B_N.) The three classifying
// sets C⁰, C¹, C^∞ are δ-images of the base sets of the three pairings
// (λ₁,λ₄|λ₂,λ₃), (λ₁,λ₃|λ₂,λ₄), (λ₁,λ₂|λ₃,λ₄).
//
// Two evaluation paths compute identical aggregates:
//   * explicit enumeration (the correctness reference, mandatory below the
//     max_enum cutoff, default 10⁶), and
//   * an interval dynamic program over the per-level fold windows
//     (count_B04_dp), which runs in O(N²) big-integer steps and scales to
//     levels far beyond enumeration.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dormant/arith.hpp"
#include "dormant/errors.hpp"

namespace dormant {

inline constexpr long kDefaultMaxEnum = 1000000;

struct RadiiTuple4 {
    PrimeLevel ctx;
    std::array<RadiusClass, 4> rho;

    RadiiTuple4(PrimeLevel c, std::array<RadiusClass, 4> r)
        : ctx(std::move(c)), rho(std::move(r)) {
        for (const auto& cls : rho)
            if (cls.ctx != ctx)
                throw ValidationError("radii tuple mixes (p, N) contexts");
    }

    std::string str() const {
        std::string s = ctx.str() + " rho=(";
        for (int i = 0; i < 4; ++i)
            s += rho[size_t(i)].rep.get_str() + (i < 3 ? "," : ")");
        return s;
    }
};

// Aggregates of one base set B_{N,λ,0,4}; star abbreviates (2η+1)^⊛.
struct B04Aggregates {
    Int count{0};
    Int sum_eta{0};
    Int sum_star{0};
    Int sum_star_sq{0};
    Int sum_star_prod{0}; // Σ star·(p^N − star)
};

// The three classifying sets and the sums consumed by the genus formulas.
// The sorted class lists are materialized only on the enumeration path;
// aggregate fields are filled on both paths.
struct CSetReport {
    PrimeLevel ctx;
    RadiiTuple4 rho;
    std::vector<RadiusClass> c0, c1, cinf;
    bool lists_present{false};
    Int n0{0}, n1{0}, ninf{0};
    Int total{0};
    Int sum_star{0};
    Int sum_star_prod{0};
    Int sum_star_sq{0};
};

// A slack-class element: quadruple of level-1 labels with slack at least s.
struct DsQuadruple {
    Int p;
    Int s;
    std::array<Int, 4> lambdas;

    DsQuadruple(Int prime, Int slack, std::array<Int, 4> lams);
};

namespace detail {

// Per-level fold windows of a base set. Level M occupies index M−1.
struct FoldWindows {
    bool infeasible{false};
    std::vector<Int> lo, hi;
};

inline FoldWindows b04_windows(const PrimeLevel& ctx, const std::array<Int, 4>& lam) {
    FoldWindows w;
    for (unsigned M = 1; M <= ctx.N; ++M) {
        Int pm = pow_int(ctx.p, M);
        Int b1 = bracket(lam[0], M, ctx.p);
        Int b2 = bracket(lam[1], M, ctx.p);
        Int b3 = bracket(lam[2], M, ctx.p);
        Int b4 = bracket(lam[3], M, ctx.p);
        Int lo = std::max(Int(abs(b1 - b2)), Int(abs(b3 - b4)));
        Int hi = std::min(std::min(Int(b1 + b2), Int(pm - 2 - b1 - b2)),
                          std::min(Int(b3 + b4), Int(pm - 2 - b3 - b4)));
        if (lo > hi) {
            w.infeasible = true;
            return w;
        }
        w.lo.push_back(lo);
        w.hi.push_back(hi);
    }
    return w;
}

inline FoldWindows b11_windows(const PrimeLevel& ctx, const Int& lam) {
    FoldWindows w;
    for (unsigned M = 1; M <= ctx.N; ++M) {
        Int pm = pow_int(ctx.p, M);
        Int b = bracket(lam, M, ctx.p);
        Int hi = std::min(Int(2 * b), Int(pm - 2 * b - 2));
        if (hi < 0) {
            w.infeasible = true;
            return w;
        }
        w.lo.push_back(0);
        w.hi.push_back(hi);
    }
    return w;
}

// Explicit enumeration over η ∈ [0, (p^N−3)/2] against the fold windows.
// The level-1 window caps at (p−3)/2, so residues ≡ (p−1)/2 (mod p) — the
// complement of B_N — are excluded without a separate test. Machine words
// suffice: callers gate on p^N below the enumeration cutoff.
inline std::vector<std::uint64_t> enumerate_values(const PrimeLevel& ctx,
                                                   const FoldWindows& w) {
    std::vector<std::uint64_t> out;
    if (w.infeasible) return out;
    if (!ctx.pn.fits_slong_p())
        throw ValidationError("enumeration requested above the machine-word range at " + ctx.str());
    const unsigned n = ctx.N;
    std::vector<std::uint64_t> pm(n + 1), lo(n + 1), hi(n + 1);
    pm[0] = 1;
    std::uint64_t p = mpz_get_ui(ctx.p.get_mpz_t());
    for (unsigned j = 1; j <= n; ++j) {
        pm[j] = pm[j - 1] * p;
        lo[j] = mpz_get_ui(w.lo[j - 1].get_mpz_t());
        hi[j] = mpz_get_ui(w.hi[j - 1].get_mpz_t());
    }
    std::uint64_t label_max = (pm[n] - 3) / 2;
    for (std::uint64_t eta = 0; eta <= label_max; ++eta) {
        bool ok = true;
        for (unsigned j = 1; j <= n; ++j) {
            std::uint64_t r = eta % pm[j];
            std::uint64_t fold = std::min(r, pm[j] - 1 - r);
            if (fold < lo[j] || fold > hi[j]) {
                ok = false;
                break;
            }
        }
        if (ok) out.push_back(eta);
    }
    return out;
}

inline B04Aggregates aggregates_from_values(const PrimeLevel& ctx,
                                            const std::vector<std::uint64_t>& values) {
    B04Aggregates agg;
    agg.count = long(values.size());
    Int star;
    for (std::uint64_t eta : values) {
        agg.sum_eta += static_cast<unsigned long>(eta);
        star = unit_fold(Int(2 * eta + 1), ctx);
        agg.sum_star += star;
        agg.sum_star_sq += star * star;
        agg.sum_star_prod += star * (ctx.pn - star);
    }
    return agg;
}

// ---- interval dynamic program ---------------------------------------------
//
// upto(j, y) returns (count, Ση, Ση²) over residues r ∈ [0, y] subject to the
// fold-window constraints at levels 1..j, where the level-M constraint reads
// "r mod p^M lands in [lo_M, hi_M] ∪ [p^M−1−hi_M, p^M−1−lo_M]". Constraints
// at levels < j are periodic with period p^{j−1}, so a prefix decomposes into
// full periods plus one partial period; memoization keeps the number of
// distinct evaluations O(N²).

struct DpAgg {
    Int cnt{0}, s1{0}, s2{0};
    void add(const DpAgg& o) { cnt += o.cnt; s1 += o.s1; s2 += o.s2; }
    void sub(const DpAgg& o) { cnt -= o.cnt; s1 -= o.s1; s2 -= o.s2; }
};

// Σ over k = 0..K−1 of the same block shifted by k·P.
inline DpAgg dp_blocks(const DpAgg& a, const Int& K, const Int& P) {
    DpAgg out;
    if (K <= 0) return out;
    Int t1 = K * (K - 1) / 2;
    Int t2 = (K - 1) * K * (2 * K - 1) / 6;
    out.cnt = a.cnt * K;
    out.s1 = a.s1 * K + a.cnt * P * t1;
    out.s2 = a.s2 * K + 2 * P * a.s1 * t1 + P * P * a.cnt * t2;
    return out;
}

inline DpAgg dp_shift(const DpAgg& a, const Int& c) {
    DpAgg out;
    out.cnt = a.cnt;
    out.s1 = a.s1 + c * a.cnt;
    out.s2 = a.s2 + 2 * c * a.s1 + c * c * a.cnt;
    return out;
}

class B04Dp {
public:
    B04Dp(const PrimeLevel& ctx, const FoldWindows& w) : w_(w), memo_(ctx.N + 1) {
        pw_.resize(ctx.N + 1);
        pw_[0] = 1;
        for (unsigned j = 1; j <= ctx.N; ++j) pw_[j] = pw_[j - 1] * ctx.p;
    }

    DpAgg upto(unsigned j, const Int& y) {
        if (y < 0) return {};
        if (j == 0) {
            DpAgg base;
            base.cnt = 1; // the single residue r = 0 (mod 1)
            return base;
        }
        Int yy = std::min(y, Int(pw_[j] - 1));
        auto it = memo_[j].find(yy);
        if (it != memo_[j].end()) return it->second;

        DpAgg out;
        const Int& lo = w_.lo[j - 1];
        const Int& hi = w_.hi[j - 1];
        const std::array<std::pair<Int, Int>, 2> targets{
            std::pair<Int, Int>{lo, hi},
            std::pair<Int, Int>{pw_[j] - 1 - hi, pw_[j] - 1 - lo}};
        for (const auto& [a, b] : targets) {
            if (a > yy) continue;
            Int bb = std::min(b, yy);
            if (bb < a) continue;
            out.add(prefix(j - 1, bb));
            out.sub(prefix(j - 1, a - 1));
        }
        memo_[j].emplace(yy, out);
        return out;
    }

private:
    // Aggregates over r ∈ [0, z] with the level ≤ jm1 constraints applied to
    // r mod p^{jm1}.
    DpAgg prefix(unsigned jm1, const Int& z) {
        if (z < 0) return {};
        const Int& P = pw_[jm1];
        Int K = (z + 1) / P;
        DpAgg out = dp_blocks(upto(jm1, P - 1), K, P);
        Int rem = z - K * P;
        if (rem >= 0) out.add(dp_shift(upto(jm1, rem), K * P));
        return out;
    }

    FoldWindows w_;
    std::vector<Int> pw_;
    std::vector<std::map<Int, DpAgg>> memo_;
};

// The star coordinate (2η+1)^⊛ is 2η+1 up to η = θ := ⌊(p^N−3)/4⌋ and
// p^N−1−2η beyond it, so two prefix queries assemble every aggregate.
inline B04Aggregates dp_aggregates(const PrimeLevel& ctx, const FoldWindows& w) {
    B04Aggregates agg;
    if (w.infeasible) return agg;
    B04Dp dp(ctx, w);
    Int bmax = ctx.label_max();
    Int theta = (ctx.pn - 3) / 4;
    DpAgg all = dp.upto(ctx.N, bmax);
    DpAgg low = dp.upto(ctx.N, theta);
    DpAgg high = all;
    high.sub(low);

    const Int c = ctx.pn - 1;
    agg.count = all.cnt;
    agg.sum_eta = all.s1;
    agg.sum_star = (2 * low.s1 + low.cnt) + (c * high.cnt - 2 * high.s1);
    agg.sum_star_sq = (4 * low.s2 + 4 * low.s1 + low.cnt) +
                      (c * c * high.cnt - 4 * c * high.s1 + 4 * high.s2);
    agg.sum_star_prod = ctx.pn * agg.sum_star - agg.sum_star_sq;
    return agg;
}

inline bool below_enum_cutoff(const PrimeLevel& ctx, long max_enum) {
    return ctx.pn <= max_enum && ctx.pn.fits_slong_p();
}

inline std::array<Int, 4> label_values(const std::array<EdgeLabel, 4>& lam) {
    return {lam[0].value, lam[1].value, lam[2].value, lam[3].value};
}

} // namespace detail

// ---- public operations ------------------------------------------------------

inline std::vector<EdgeLabel> enumerate_B04(const PrimeLevel& ctx,
                                            const std::array<EdgeLabel, 4>& lam,
                                            long max_enum = kDefaultMaxEnum) {
    for (const auto& l : lam)
        if (l.ctx != ctx) throw ValidationError("label tuple mixes (p, N) contexts");
    if (!detail::below_enum_cutoff(ctx, max_enum))
        throw ValidationError("p^N exceeds the enumeration cutoff at " + ctx.str() +
                              "; use count_B04_dp");
    auto values = detail::enumerate_values(ctx, detail::b04_windows(ctx, detail::label_values(lam)));
    std::vector<EdgeLabel> out;
    out.reserve(values.size());
    for (std::uint64_t v : values) out.emplace_back(ctx, Int(static_cast<unsigned long>(v)));
    return out;
}

inline std::vector<EdgeLabel> enumerate_B11(const PrimeLevel& ctx, const EdgeLabel& lam,
                                            long max_enum = kDefaultMaxEnum) {
    if (lam.ctx != ctx) throw ValidationError("label context mismatch");
    if (!detail::below_enum_cutoff(ctx, max_enum))
        throw ValidationError("p^N exceeds the enumeration cutoff at " + ctx.str());
    auto values = detail::enumerate_values(ctx, detail::b11_windows(ctx, lam.value));
    std::vector<EdgeLabel> out;
    out.reserve(values.size());
    for (std::uint64_t v : values) out.emplace_back(ctx, Int(static_cast<unsigned long>(v)));
    return out;
}

inline B04Aggregates count_B04_dp(const PrimeLevel& ctx, const std::array<Int, 4>& lambdas) {
    for (const auto& l : lambdas)
        if (!is_edge_label_value(ctx, l))
            throw ValidationError("label " + l.get_str() + " outside B_N at " + ctx.str());
    return detail::dp_aggregates(ctx, detail::b04_windows(ctx, lambdas));
}

inline CSetReport csets_04(const RadiiTuple4& rho, long max_enum = kDefaultMaxEnum) {
    const PrimeLevel& ctx = rho.ctx;
    std::array<Int, 4> lam;
    for (size_t i = 0; i < 4; ++i) lam[i] = delta_inv(rho.rho[i]).value;

    // Pairings that define C⁰, C¹, C^∞ in that order.
    const std::array<std::array<Int, 4>, 3> tuples{
        std::array<Int, 4>{lam[0], lam[3], lam[1], lam[2]},
        std::array<Int, 4>{lam[0], lam[2], lam[1], lam[3]},
        std::array<Int, 4>{lam[0], lam[1], lam[2], lam[3]}};

    CSetReport rep{ctx, rho, {}, {}, {}, false, 0, 0, 0, 0, 0, 0, 0};
    std::array<Int, 3> counts;
    bool enumerable = detail::below_enum_cutoff(ctx, max_enum);
    rep.lists_present = enumerable;

    for (size_t q = 0; q < 3; ++q) {
        B04Aggregates agg;
        if (enumerable) {
            auto values = detail::enumerate_values(ctx, detail::b04_windows(ctx, tuples[q]));
            agg = detail::aggregates_from_values(ctx, values);
            std::vector<RadiusClass>& list = (q == 0 ? rep.c0 : q == 1 ? rep.c1 : rep.cinf);
            list.reserve(values.size());
            for (std::uint64_t v : values)
                list.push_back(delta(ctx, Int(static_cast<unsigned long>(v))));
            std::sort(list.begin(), list.end());
        } else {
            agg = detail::dp_aggregates(ctx, detail::b04_windows(ctx, tuples[q]));
        }
        counts[q] = agg.count;
        rep.total += agg.count;
        rep.sum_star += agg.sum_star;
        rep.sum_star_sq += agg.sum_star_sq;
        rep.sum_star_prod += agg.sum_star_prod;
    }
    rep.n0 = counts[0];
    rep.n1 = counts[1];
    rep.ninf = counts[2];

    if (!(rep.n0 == rep.n1 && rep.n1 == rep.ninf))
        throw ConsistencyError("classifying-set cardinalities differ (" + rep.n0.get_str() +
                               ", " + rep.n1.get_str() + ", " + rep.ninf.get_str() + ") at " +
                               rho.str());
    return rep;
}

inline std::vector<RadiusClass> cset_11(const PrimeLevel& ctx, const RadiusClass& rho,
                                        long max_enum = kDefaultMaxEnum) {
    auto base = enumerate_B11(ctx, delta_inv(rho), max_enum);
    std::vector<RadiusClass> out;
    out.reserve(base.size());
    for (const auto& eta : base) out.push_back(delta(eta));
    std::sort(out.begin(), out.end());
    return out;
}

inline Int degree_04(const RadiiTuple4& rho, long max_enum = kDefaultMaxEnum) {
    return csets_04(rho, max_enum).n0; // tri-equality asserted by csets_04
}

namespace detail {

// Shared core of the slack test; digits must already be valid level-1 labels.
inline Int slack_of(const Int& p, const std::array<Int, 4>& lam) {
    Int min_rhs, max_diff;
    bool first = true;
    for (size_t i = 0; i < 4; ++i) {
        for (size_t j = i + 1; j < 4; ++j) {
            Int sum = lam[i] + lam[j];
            Int co = p - 2 - sum;
            Int diff = abs(lam[i] - lam[j]);
            if (first) {
                min_rhs = std::min(sum, co);
                max_diff = diff;
                first = false;
            } else {
                min_rhs = std::min(min_rhs, std::min(sum, co));
                max_diff = std::max(max_diff, diff);
            }
        }
    }
    return min_rhs - max_diff;
}

inline void validate_slack_arg(const Int& p, const Int& s) {
    if (s < 0 || 2 * s > p - 3)
        throw ValidationError("slack parameter s = " + s.get_str() +
                              " outside [0, (p−3)/2] for p = " + p.get_str());
}

} // namespace detail

inline bool ds_membership(const Int& p, const Int& s, const std::array<Int, 4>& lambdas) {
    PrimeLevel ctx(p, 1);
    detail::validate_slack_arg(p, s);
    for (const auto& l : lambdas)
        if (!is_edge_label_value(ctx, l))
            throw ValidationError("label " + l.get_str() + " outside B_1 for p = " + p.get_str());
    return s <= detail::slack_of(p, lambdas);
}

inline bool dsn_membership(const PrimeLevel& ctx, const Int& s,
                           const std::array<Int, 4>& lambdas) {
    detail::validate_slack_arg(ctx.p, s);
    std::array<std::vector<Int>, 4> digits;
    for (size_t i = 0; i < 4; ++i) {
        if (!is_edge_label_value(ctx, lambdas[i]))
            throw ValidationError("label " + lambdas[i].get_str() + " outside B_N at " + ctx.str());
        digits[i] = base_p_digits(lambdas[i], ctx.p, ctx.N);
    }
    for (unsigned j = 0; j < ctx.N; ++j) {
        std::array<Int, 4> quad;
        for (size_t i = 0; i < 4; ++i) {
            quad[i] = digits[i][j];
            if (2 * quad[i] > ctx.p - 3) return false; // digit outside B_1
        }
        if (s > detail::slack_of(ctx.p, quad)) return false;
    }
    return true;
}

inline DsQuadruple::DsQuadruple(Int prime, Int slack, std::array<Int, 4> lams)
    : p(std::move(prime)), s(std::move(slack)), lambdas(std::move(lams)) {
    if (!ds_membership(p, s, lambdas))
        throw ValidationError("quadruple does not meet the slack inequality for s = " + s.get_str());
}

} // namespace dormant

#endif // DORMANT_CSETS_HPP
