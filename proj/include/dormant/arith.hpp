#ifndef DORMANT_ARITH_HPP
#define DORMANT_ARITH_HPP

// Residue bookkeeping for level-N radius classes.
//
// Everything downstream speaks three closely related coordinate systems:
//   * edge labels  a ∈ B_N = { 0 ≤ a ≤ (p^N−3)/2 : a ≢ (p−1)/2 (mod p) },
//   * radius classes ρ ∈ (Z/p^N)^× / {±1}, stored by their canonical
//     representative in {1, …, (p^N−1)/2},
//   * the star value ρ^⊛ ∈ {1, …, (p^N−1)/2}, the odd-numerator coordinate
//     with class(ρ^⊛ / 2) = ρ.
// This header provides the three coordinate types and the conversions
// (delta, delta_inv, rho_star) plus the two folding primitives (bracket,
// unit_fold) used by every other module. All arithmetic is arbitrary
// precision: tower analysis evaluates these at p^N far beyond 2^64.

#include <gmpxx.h>

#include <string>
#include <utility>
#include <vector>

#include "dormant/errors.hpp"

namespace dormant {

using Int = mpz_class;

// p^e for machine exponents (the only exponent sizes this library needs).
inline Int pow_int(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

// Floor-mod: result in [0, m) for any sign of a.
inline Int mod_floor(const Int& a, const Int& m) {
    Int r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

// Modular inverse; throws if gcd(a, m) != 1.
inline Int mod_inverse(const Int& a, const Int& m) {
    Int r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        throw ValidationError("no inverse of " + a.get_str() + " modulo " + m.get_str());
    return r;
}

// The context (p, N): an odd prime and a level. Construction validates and
// caches p^N so the hot paths never recompute it.
struct PrimeLevel {
    Int p;
    unsigned N;
    Int pn; // p^N

    PrimeLevel(Int prime, unsigned level) : p(std::move(prime)), N(level) {
        if (N < 1)
            throw ValidationError("level N must be >= 1");
        if (p < 3 || mpz_probab_prime_p(p.get_mpz_t(), 32) == 0)
            throw ValidationError("p must be an odd prime, got " + p.get_str());
        pn = pow_int(p, N);
    }

    Int half() const { return (pn - 1) / 2; }        // (p^N−1)/2
    Int label_max() const { return (pn - 3) / 2; }   // largest edge label
    Int inv2() const { return (pn + 1) / 2; }        // inverse of 2 mod p^N
    Int label_count() const {                        // #B_N = (p−1) p^{N−1} / 2
        return (p - 1) * pow_int(p, N - 1) / 2;
    }

    bool operator==(const PrimeLevel& o) const { return p == o.p && N == o.N; }
    bool operator!=(const PrimeLevel& o) const { return !(*this == o); }

    std::string str() const { return "(p=" + p.get_str() + ", N=" + std::to_string(N) + ")"; }
};

// [a]_M: reduce mod p^M, then fold around (p^M−1)/2. Total on a >= 0.
inline Int bracket(const Int& a, unsigned M, const Int& p) {
    Int pm = pow_int(p, M);
    Int r = mod_floor(a, pm);
    Int mirror = pm - 1 - r;
    return r <= mirror ? r : mirror;
}

// Fold a unit mod p^N into the canonical half {1, …, (p^N−1)/2}.
inline Int unit_fold(const Int& a, const PrimeLevel& ctx) {
    if (mod_floor(a, ctx.p) == 0)
        throw ValidationError("unit_fold: " + a.get_str() + " is divisible by p = " + ctx.p.get_str());
    Int r = mod_floor(a, ctx.pn);
    Int mirror = ctx.pn - r;
    return r <= mirror ? r : mirror;
}

inline bool is_edge_label_value(const PrimeLevel& ctx, const Int& a) {
    return a >= 0 && a <= ctx.label_max() && mod_floor(a, ctx.p) != (ctx.p - 1) / 2;
}

// An element of B_N.
struct EdgeLabel {
    PrimeLevel ctx;
    Int value;

    EdgeLabel(PrimeLevel c, Int v) : ctx(std::move(c)), value(std::move(v)) {
        if (!is_edge_label_value(ctx, value))
            throw ValidationError("edge label " + value.get_str() + " outside B_N at " + ctx.str());
    }

    bool operator==(const EdgeLabel& o) const { return ctx == o.ctx && value == o.value; }
    bool operator<(const EdgeLabel& o) const { return value < o.value; }
};

// An element of (Z/p^N)^× / {±1}; normalized on construction.
struct RadiusClass {
    PrimeLevel ctx;
    Int rep; // canonical representative, 1 <= rep <= (p^N−1)/2, coprime to p

    RadiusClass(PrimeLevel c, const Int& a) : ctx(std::move(c)), rep(unit_fold(a, ctx)) {}

    bool operator==(const RadiusClass& o) const { return ctx == o.ctx && rep == o.rep; }
    bool operator!=(const RadiusClass& o) const { return !(*this == o); }
    bool operator<(const RadiusClass& o) const { return rep < o.rep; }
};

// δ: B_N → (Z/p^N)^×/{±1}, s ↦ class((2s+1)/2). A bijection.
inline RadiusClass delta(const EdgeLabel& s) {
    Int numer = 2 * s.value + 1;
    return RadiusClass(s.ctx, mod_floor(numer * s.ctx.inv2(), s.ctx.pn));
}

// Convenience overload: δ_N applied to a raw integer label.
inline RadiusClass delta(const PrimeLevel& ctx, const Int& s) {
    return delta(EdgeLabel(ctx, s));
}

// ρ^⊛: the unique u in {1, …, (p^N−1)/2} with class(u/2) = ρ.
inline Int rho_star(const RadiusClass& rho) {
    return unit_fold(2 * rho.rep, rho.ctx);
}

// δ^{-1}: recover the label from the star value. 2s+1 is the odd element of
// {u, p^N−u}, so no search is needed.
inline EdgeLabel delta_inv(const RadiusClass& rho) {
    Int u = rho_star(rho);
    Int twice_plus_one = mpz_odd_p(u.get_mpz_t()) ? u : rho.ctx.pn - u;
    return EdgeLabel(rho.ctx, (twice_plus_one - 1) / 2);
}

// Base-p digits of a, least significant first, padded to exactly n digits.
inline std::vector<Int> base_p_digits(const Int& a, const Int& p, unsigned n) {
    std::vector<Int> out;
    out.reserve(n);
    Int rest = a;
    for (unsigned i = 0; i < n; ++i) {
        out.push_back(mod_floor(rest, p));
        rest /= p;
    }
    return out;
}

} // namespace dormant

#endif // DORMANT_ARITH_HPP
