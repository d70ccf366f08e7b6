#pragma once

// Level-1 dormancy oracle: Heun operators over finite fields, p-curvature of
// their companion systems, and dormant-oper counting per radii tuple.
//
// The pipeline, bottom to top:
//   * FqContext / Fq — arithmetic in F_{p^e} with a deterministic, recorded
//     monic irreducible modulus (e = 1 is the prime field);
//   * Poly<K> — dense univariate polynomials over any coefficient ring with
//     +, −, ×, is_zero and small-integer scaling; nesting Poly<Poly<…>> gives
//     the two-variable (x, q) arithmetic used by the dormancy polynomial;
//   * pcurvature — for a first-order system written as M(x)/m(x)^1, iterates
//     N_{k+1} = N_k′·m − k·N_k·m′ + N_k·M up to N_p.  N_k/m^k is the k-fold
//     image of the identity under F ↦ F′ + F·(M/m), so N_p/m^p vanishes
//     exactly when the system Y′ = (M/m)·Y is spanned by solutions rational
//     over the p-th-power subfield — the dormancy criterion;
//   * Heun parameter handling — radii at the four singular points, the
//     five-quantity invariant that classifies operators up to giving the
//     same projective connection, dormancy testing for a fixed accessory
//     parameter q, the dormancy polynomial in an indeterminate q for a fixed
//     sign family, and the dormant-oper count for a radii tuple (union over
//     sign families, deduplicated through the invariant, counted in the
//     algebraic closure as the degree of a squarefree part).

#include <algorithm>
#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dormant/arith.hpp"
#include "dormant/csets.hpp"
#include "dormant/errors.hpp"

namespace dormant {

// ---------------------------------------------------------------------------
// Finite-field contexts
// ---------------------------------------------------------------------------

// A fixed realization of F_{p^e}: elements are coordinate vectors in the basis
// {1, z, …, z^{e−1}} modulo the recorded monic irreducible modulus(z).  The
// modulus is chosen deterministically (smallest non-leading coefficient vector
// read as a base-p integer), so reports are reproducible across runs.
struct FqContext {
    std::uint32_t p;
    unsigned e;
    std::vector<std::uint32_t> modulus; // little-endian, degree e, monic

    std::string str() const {
        std::string s = "F_" + std::to_string(p);
        if (e > 1) {
            s += "^" + std::to_string(e) + " mod ";
            bool first = true;
            for (unsigned i = e + 1; i-- > 0;) {
                if (i >= modulus.size() || modulus[i] == 0) continue;
                if (!first) s += "+";
                first = false;
                if (i == 0 || modulus[i] != 1) s += std::to_string(modulus[i]);
                if (i >= 1) s += "z";
                if (i >= 2) s += "^" + std::to_string(i);
            }
        }
        return s;
    }
};

using FieldPtr = std::shared_ptr<const FqContext>;

namespace detail {

// Raw little-endian coefficient vectors over F_p (plumbing for the modulus
// search only; element arithmetic lives in Fq).
namespace raw {

using Vec = std::vector<std::uint32_t>;

inline void trim(Vec& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline std::uint32_t powmod_u32(std::uint64_t b, std::uint64_t e, std::uint32_t p) {
    std::uint64_t r = 1 % p;
    b %= p;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return std::uint32_t(r);
}

inline Vec mul(const Vec& a, const Vec& b, std::uint32_t p) {
    if (a.empty() || b.empty()) return {};
    std::vector<std::uint64_t> acc(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (size_t j = 0; j < b.size(); ++j) acc[i + j] = (acc[i + j] + std::uint64_t(a[i]) * b[j]) % p;
    }
    Vec out(acc.begin(), acc.end());
    trim(out);
    return out;
}

// Remainder of f by the monic polynomial g.
inline Vec mod(Vec f, const Vec& g, std::uint32_t p) {
    trim(f);
    while (f.size() >= g.size()) {
        std::uint64_t c = f.back();
        size_t d = f.size() - g.size();
        for (size_t i = 0; i < g.size(); ++i)
            f[d + i] = std::uint32_t((f[d + i] + std::uint64_t(p) * p - c * g[i] % p) % p);
        trim(f);
    }
    return f;
}

inline Vec powmod(Vec base, const Int& e, const Vec& g, std::uint32_t p) {
    Vec r = {1};
    base = mod(std::move(base), g, p);
    for (long bit = long(mpz_sizeinbase(e.get_mpz_t(), 2)) - 1; bit >= 0; --bit) {
        r = mod(mul(r, r, p), g, p);
        if (mpz_tstbit(e.get_mpz_t(), static_cast<mp_bitcnt_t>(bit))) r = mod(mul(r, base, p), g, p);
    }
    return r;
}

inline Vec gcd(Vec f, Vec g, std::uint32_t p) {
    trim(f);
    trim(g);
    while (!g.empty()) {
        // make g monic, then reduce
        std::uint32_t inv = powmod_u32(g.back(), p - 2, p);
        for (auto& c : g) c = std::uint32_t(std::uint64_t(c) * inv % p);
        Vec r = mod(std::move(f), g, p);
        f = std::move(g);
        g = std::move(r);
    }
    return f;
}

inline Vec sub(Vec a, const Vec& b, std::uint32_t p) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
    trim(a);
    return a;
}

inline bool irreducible(const Vec& f, std::uint32_t p) {
    unsigned e = unsigned(f.size()) - 1;
    Vec x = {0, 1};
    // h_k = z^{p^k} mod f, built by h_{k+1} = h_k^p mod f.
    std::vector<Vec> h(e + 1);
    h[0] = x;
    for (unsigned k = 1; k <= e; ++k) h[k] = powmod(h[k - 1], Int(p), f, p);
    if (sub(h[e], x, p) != Vec{}) return false;
    for (unsigned r = 2; r <= e; ++r) {
        if (e % r != 0) continue;
        bool r_prime = true;
        for (unsigned d = 2; d * d <= r; ++d)
            if (r % d == 0) { r_prime = false; break; }
        if (!r_prime) continue;
        Vec g = gcd(f, sub(h[e / r], x, p), p);
        if (g.size() != 1) return false;
    }
    return true;
}

} // namespace raw
} // namespace detail

// Builds F_{p^e}.  p must be an odd machine-word prime; the modulus is the
// first monic irreducible of degree e when the non-leading coefficients are
// read as a base-p integer (so F_25 is realized as F_5[z]/(z^2+2), etc.).
inline FieldPtr make_field(const Int& p, unsigned e = 1) {
    PrimeLevel check(p, 1); // validates primality and oddness
    (void)check;
    if (!p.fits_uint_p() || p.get_ui() > (1u << 20))
        throw ValidationError("field characteristic " + p.get_str() + " exceeds the machine-word oracle range");
    std::uint32_t pu = std::uint32_t(p.get_ui());
    if (e < 1) throw ValidationError("extension degree must be >= 1");
    if (e > 8) throw ValidationError("extension degree " + std::to_string(e) + " exceeds the supported range (8)");
    auto ctx = std::make_shared<FqContext>();
    ctx->p = pu;
    ctx->e = e;
    if (e == 1) {
        ctx->modulus = {0, 1}; // z
        return ctx;
    }
    for (std::uint64_t tail = 0;; ++tail) {
        detail::raw::Vec f(e + 1, 0);
        std::uint64_t v = tail;
        for (unsigned i = 0; i < e; ++i) {
            f[i] = std::uint32_t(v % pu);
            v /= pu;
        }
        if (v != 0) throw ConsistencyError("no irreducible modulus found below the search bound");
        f[e] = 1;
        if (detail::raw::irreducible(f, pu)) {
            ctx->modulus = std::move(f);
            return ctx;
        }
    }
}

// ---------------------------------------------------------------------------
// Field elements
// ---------------------------------------------------------------------------

// An element of F_{p^e}.  A default-constructed Fq is a context-free zero:
// it behaves as the additive identity and the multiplicative annihilator, so
// polynomial templates can seed accumulators without threading a context.
class Fq {
public:
    Fq() = default;

    Fq(FieldPtr F, const Int& scalar) : F_(std::move(F)), c_(F_->e, 0) {
        c_[0] = std::uint32_t(mod_floor(scalar, Int(F_->p)).get_ui());
        normalize();
    }

    Fq(FieldPtr F, std::vector<std::uint32_t> coords) : F_(std::move(F)), c_(std::move(coords)) {
        if (c_.size() > F_->e) throw ValidationError("coordinate vector longer than the extension degree");
        c_.resize(F_->e, 0);
        for (auto& x : c_) x %= F_->p;
        normalize();
    }

    static Fq zero(const FieldPtr& F) { return Fq(F, Int(0)); }
    static Fq one(const FieldPtr& F) { return Fq(F, Int(1)); }

    const FieldPtr& field() const { return F_; }
    bool is_zero() const { return F_ == nullptr; }

    bool in_prime_field() const {
        if (is_zero()) return true;
        for (size_t i = 1; i < c_.size(); ++i)
            if (c_[i]) return false;
        return true;
    }

    // The value as an element of F_p; requires in_prime_field().
    std::uint32_t prime_value() const {
        if (is_zero()) return 0;
        if (!in_prime_field())
            throw ValidationError("field element " + str() + " lies outside the prime field");
        return c_[0];
    }

    const std::vector<std::uint32_t>& coords() const {
        static const std::vector<std::uint32_t> empty;
        return is_zero() ? empty : c_;
    }

    Fq mul_small(std::uint64_t s) const {
        if (is_zero()) return {};
        Fq r = *this;
        std::uint64_t sm = s % F_->p;
        for (auto& x : r.c_) x = std::uint32_t(x * sm % F_->p);
        r.normalize();
        return r;
    }

    friend Fq operator+(const Fq& a, const Fq& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        check_same(a, b);
        Fq r = a;
        for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = (r.c_[i] + b.c_[i]) % r.F_->p;
        r.normalize();
        return r;
    }

    friend Fq operator-(const Fq& a, const Fq& b) { return a + (-b); }

    Fq operator-() const {
        if (is_zero()) return {};
        Fq r = *this;
        for (auto& x : r.c_) x = (F_->p - x) % F_->p;
        r.normalize();
        return r;
    }

    friend Fq operator*(const Fq& a, const Fq& b) {
        if (a.is_zero() || b.is_zero()) return {};
        check_same(a, b);
        std::uint32_t p = a.F_->p;
        unsigned e = a.F_->e;
        std::vector<std::uint64_t> acc(2 * e - 1, 0);
        for (unsigned i = 0; i < e; ++i) {
            if (!a.c_[i]) continue;
            for (unsigned j = 0; j < e; ++j) acc[i + j] = (acc[i + j] + std::uint64_t(a.c_[i]) * b.c_[j]) % p;
        }
        // reduce by the monic modulus: z^e = -(modulus tail)
        for (unsigned i = 2 * e - 2; i >= e && i < 2 * e; --i) {
            std::uint64_t c = acc[i] % p;
            if (c) {
                for (unsigned j = 0; j < e; ++j)
                    acc[i - e + j] = (acc[i - e + j] + std::uint64_t(p) * p - c * a.F_->modulus[j] % p) % p;
            }
            acc[i] = 0;
            if (i == e) break;
        }
        Fq r;
        r.F_ = a.F_;
        r.c_.assign(e, 0);
        for (unsigned i = 0; i < e; ++i) r.c_[i] = std::uint32_t(acc[i] % p);
        r.normalize();
        return r;
    }

    Fq pow(Int k) const {
        if (k < 0) return inverse().pow(-k);
        if (is_zero()) return {};
        Fq r = one(F_);
        Fq b = *this;
        for (long bit = long(mpz_sizeinbase(k.get_mpz_t(), 2)) - 1; bit >= 0; --bit) {
            r = r * r;
            if (mpz_tstbit(k.get_mpz_t(), static_cast<mp_bitcnt_t>(bit))) r = r * b;
        }
        return k == 0 ? one(F_) : r;
    }

    Fq inverse() const {
        if (is_zero()) throw ValidationError("zero field element has no inverse");
        return pow(pow_int(Int(F_->p), F_->e) - 2);
    }

    // The p-th root (Frobenius is bijective: c^{1/p} = c^{p^{e−1}}).
    Fq pth_root() const {
        if (is_zero()) return {};
        return pow(pow_int(Int(F_->p), F_->e - 1));
    }

    std::uint32_t characteristic() const { return is_zero() ? 0 : F_->p; }

    friend bool operator==(const Fq& a, const Fq& b) {
        if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
        check_same(a, b);
        return a.c_ == b.c_;
    }
    friend bool operator!=(const Fq& a, const Fq& b) { return !(a == b); }

    std::string str() const {
        if (is_zero()) return "0";
        std::string s;
        for (unsigned i = 0; i < c_.size(); ++i) {
            if (!c_[i] && !(c_.size() == 1 && i == 0)) continue;
            if (!s.empty()) s += "+";
            if (i == 0 || c_[i] != 1) s += std::to_string(c_[i]);
            if (i >= 1) s += "z";
            if (i >= 2) s += "^" + std::to_string(i);
        }
        return s.empty() ? "0" : s;
    }

private:
    FieldPtr F_;
    std::vector<std::uint32_t> c_;

    void normalize() {
        for (auto x : c_)
            if (x) return;
        F_.reset();
        c_.clear();
    }

    static void check_same(const Fq& a, const Fq& b) {
        if (a.F_ == b.F_) return;
        if (a.F_->p != b.F_->p || a.F_->e != b.F_->e || a.F_->modulus != b.F_->modulus)
            throw ValidationError("mixed field contexts: " + a.F_->str() + " vs " + b.F_->str());
    }
};

namespace detail {

// Prime-field scalar with inline storage — the hot counting path runs the
// bivariate recursion over these instead of heap-backed Fq.  Same null-zero
// convention: p == 0 marks the context-free zero.
struct Zp {
    std::uint32_t v{0};
    std::uint32_t p{0};

    bool is_zero() const { return p == 0 || v == 0; }
    std::uint32_t characteristic() const { return p; }

    static Zp make(std::uint32_t value, std::uint32_t prime) {
        value %= prime;
        return value ? Zp{value, prime} : Zp{};
    }

    Zp mul_small(std::uint64_t s) const {
        if (is_zero()) return {};
        return make(std::uint32_t(std::uint64_t(v) * (s % p) % p), p);
    }

    friend Zp operator+(const Zp& a, const Zp& b) {
        if (a.is_zero()) return b.is_zero() ? Zp{} : b;
        if (b.is_zero()) return a;
        return make((a.v + b.v) % a.p, a.p);
    }
    Zp operator-() const { return is_zero() ? Zp{} : Zp{p - v, p}; }
    friend Zp operator-(const Zp& a, const Zp& b) { return a + (-b); }
    friend Zp operator*(const Zp& a, const Zp& b) {
        if (a.is_zero() || b.is_zero()) return {};
        return make(std::uint32_t(std::uint64_t(a.v) * b.v % a.p), a.p);
    }
    friend bool operator==(const Zp& a, const Zp& b) {
        if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
        return a.v == b.v;
    }
    friend bool operator!=(const Zp& a, const Zp& b) { return !(a == b); }

    Zp pow(std::uint64_t k) const {
        if (is_zero()) return {};
        return make(raw::powmod_u32(v, k, p), p);
    }
    Zp inverse() const {
        if (is_zero()) throw ValidationError("zero field element has no inverse");
        return pow(p - 2);
    }
    Zp pth_root() const { return *this; } // Frobenius is the identity on F_p
};

} // namespace detail

// ---------------------------------------------------------------------------
// Dense univariate polynomials over a coefficient ring
// ---------------------------------------------------------------------------

// Coefficients little-endian; the empty vector is the zero polynomial.  K must
// provide +, −, ×, unary −, ==, is_zero(), mul_small(); a default-constructed
// K must be the (context-free) zero.  Poly<K> itself satisfies the same
// contract, so Poly<Poly<K>> is the two-variable ring.
template <class K>
struct Poly {
    std::vector<K> c;

    Poly() = default;
    explicit Poly(std::vector<K> coeffs) : c(std::move(coeffs)) { trim(); }

    bool is_zero() const { return c.empty(); }
    long degree() const { return long(c.size()) - 1; }
    std::uint32_t characteristic() const {
        return c.empty() ? 0 : c.back().characteristic();
    }

    void trim() {
        while (!c.empty() && c.back().is_zero()) c.pop_back();
    }

    const K& lead() const { return c.back(); }

    Poly mul_small(std::uint64_t s) const {
        Poly r = *this;
        for (auto& x : r.c) x = x.mul_small(s);
        r.trim();
        return r;
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        Poly r;
        r.c.resize(std::max(a.c.size(), b.c.size()));
        for (size_t i = 0; i < r.c.size(); ++i) {
            if (i < a.c.size()) r.c[i] = r.c[i] + a.c[i];
            if (i < b.c.size()) r.c[i] = r.c[i] + b.c[i];
        }
        r.trim();
        return r;
    }

    Poly operator-() const {
        Poly r = *this;
        for (auto& x : r.c) x = -x;
        return r;
    }

    friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        Poly r;
        r.c.resize(a.c.size() + b.c.size() - 1);
        for (size_t i = 0; i < a.c.size(); ++i) {
            if (a.c[i].is_zero()) continue;
            for (size_t j = 0; j < b.c.size(); ++j) {
                if (b.c[j].is_zero()) continue;
                r.c[i + j] = r.c[i + j] + a.c[i] * b.c[j];
            }
        }
        r.trim();
        return r;
    }

    friend bool operator==(const Poly& a, const Poly& b) {
        if (a.c.size() != b.c.size()) return false;
        for (size_t i = 0; i < a.c.size(); ++i)
            if (!(a.c[i] == b.c[i])) return false;
        return true;
    }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }
};

// d/dx; coefficient indices reduce modulo the characteristic via mul_small.
template <class K>
Poly<K> poly_deriv(const Poly<K>& f) {
    Poly<K> r;
    if (f.c.size() <= 1) return r;
    r.c.resize(f.c.size() - 1);
    for (size_t i = 1; i < f.c.size(); ++i) r.c[i - 1] = f.c[i].mul_small(i);
    r.trim();
    return r;
}

// The remaining algorithms need K to be a field (inverse()).

template <class K>
Poly<K> poly_monic(const Poly<K>& f) {
    if (f.is_zero()) return f;
    K inv = f.lead().inverse();
    Poly<K> r = f;
    for (auto& x : r.c) x = x * inv;
    r.trim();
    return r;
}

template <class K>
std::pair<Poly<K>, Poly<K>> poly_divmod(const Poly<K>& num, const Poly<K>& den) {
    if (den.is_zero()) throw ValidationError("polynomial division by zero");
    Poly<K> r = num, q;
    if (num.c.size() >= den.c.size()) q.c.resize(num.c.size() - den.c.size() + 1);
    K dinv = den.lead().inverse();
    while (!r.is_zero() && r.c.size() >= den.c.size()) {
        K coef = r.lead() * dinv;
        size_t shift = r.c.size() - den.c.size();
        q.c[shift] = q.c[shift] + coef;
        for (size_t i = 0; i < den.c.size(); ++i)
            r.c[shift + i] = r.c[shift + i] - coef * den.c[i];
        r.trim();
    }
    q.trim();
    return {q, r};
}

template <class K>
Poly<K> poly_gcd(Poly<K> f, Poly<K> g) {
    while (!g.is_zero()) {
        Poly<K> r = poly_divmod(f, g).second;
        f = std::move(g);
        g = std::move(r);
    }
    return poly_monic(f);
}

// f(u·X + v) by Horner — reparameterizes the indeterminate affinely.
template <class K>
Poly<K> poly_subst_affine(const Poly<K>& f, const K& u, const K& v) {
    Poly<K> arg(std::vector<K>{v, u});
    Poly<K> out;
    for (size_t i = f.c.size(); i-- > 0;) out = out * arg + Poly<K>(std::vector<K>{f.c[i]});
    return out;
}

template <class K>
K poly_eval(const Poly<K>& f, const K& x) {
    K out{};
    for (size_t i = f.c.size(); i-- > 0;) out = out * x + f.c[i];
    return out;
}

// Product of the distinct monic irreducible factors.  Characteristic-p aware:
// when f′ = 0, f = g(X^p) and the recursion descends to g with p-th roots of
// the coefficients; otherwise the multiplicity-not-divisible-by-p part
// v = f / gcd(f, f′) splits off and the stripped remainder recurses.
template <class K>
Poly<K> poly_radical(const Poly<K>& f0) {
    Poly<K> f = poly_monic(f0);
    if (f.is_zero()) return f;
    if (f.c.size() == 1) return f; // the constant 1
    std::uint32_t p = f.characteristic();
    Poly<K> df = poly_deriv(f);
    if (df.is_zero()) {
        Poly<K> g;
        g.c.resize((f.c.size() - 1) / p + 1);
        for (size_t i = 0; i < g.c.size(); ++i) g.c[i] = f.c[p * i].pth_root();
        g.trim();
        return poly_radical(g);
    }
    Poly<K> gc = poly_gcd(f, df);
    Poly<K> v = poly_divmod(f, gc).first;
    Poly<K> w = f;
    Poly<K> d = poly_gcd(w, v);
    while (d.c.size() > 1) {
        w = poly_divmod(w, d).first;
        d = poly_gcd(w, v);
    }
    return v * poly_radical(w); // w is coprime to v
}

// ---------------------------------------------------------------------------
// p-curvature of first-order systems
// ---------------------------------------------------------------------------

// A 2×2 matrix of polynomials divided by m(x)^k (row-major entries).
template <class K>
struct PolyMatrix {
    std::array<Poly<K>, 4> entry;
    Poly<K> m;
    unsigned k{1};
};

namespace detail {

template <class K>
std::array<Poly<K>, 4> pcurvature_iterate(const std::array<Poly<K>, 4>& M, const Poly<K>& m,
                                          std::uint32_t p) {
    Poly<K> dm = poly_deriv(m);
    std::array<Poly<K>, 4> N = M;
    for (std::uint32_t k = 1; k < p; ++k) {
        std::array<Poly<K>, 4> next;
        std::array<Poly<K>, 4> prod = {
            N[0] * M[0] + N[1] * M[2], N[0] * M[1] + N[1] * M[3],
            N[2] * M[0] + N[3] * M[2], N[2] * M[1] + N[3] * M[3]};
        for (int i = 0; i < 4; ++i)
            next[size_t(i)] = poly_deriv(N[size_t(i)]) * m - (N[size_t(i)] * dm).mul_small(k) +
                              prod[size_t(i)];
        N = next;
    }
    return N;
}

} // namespace detail

// Iterates the system A = M/m (k must be 1) to N_p/m^p.  N_p/m^p is the
// p-fold image of the identity under F ↦ F′ + F·A; it vanishes identically
// exactly when Y′ = A·Y has a full basis of solutions with rational ratio to
// p-th powers, i.e. when the p-curvature of the system vanishes.
inline PolyMatrix<Fq> pcurvature(const PolyMatrix<Fq>& A) {
    if (A.k != 1)
        throw ValidationError("pcurvature expects a denominator exponent of 1, got " +
                              std::to_string(A.k));
    if (A.m.is_zero()) throw ValidationError("pcurvature denominator polynomial is zero");
    std::uint32_t p = A.m.lead().field()->p;
    PolyMatrix<Fq> out;
    out.entry = detail::pcurvature_iterate(A.entry, A.m, p);
    out.m = A.m;
    out.k = p;
    return out;
}

// ---------------------------------------------------------------------------
// Heun operators
// ---------------------------------------------------------------------------

// Parameters (α, β, γ, δ, ε, q; t) of the second-order operator
//   d²/dx² + (γ/x + δ/(x−1) + ε/(x−t)) d/dx + (αβx − q)/(x(x−1)(x−t)),
// subject to α + β + 1 = γ + δ + ε, with t outside {0, 1}.
struct HeunParams {
    Fq alpha, beta, gamma, delta, epsilon, q, t;

    HeunParams(Fq a, Fq b, Fq g, Fq d, Fq e, Fq q_, Fq t_)
        : alpha(std::move(a)), beta(std::move(b)), gamma(std::move(g)), delta(std::move(d)),
          epsilon(std::move(e)), q(std::move(q_)), t(std::move(t_)) {
        const Fq* any = nullptr;
        for (const Fq* x : {&alpha, &beta, &gamma, &delta, &epsilon, &q, &t})
            if (!x->is_zero()) { any = x; break; }
        if (any == nullptr) throw DegenerateT("t must avoid {0, 1}");
        const FieldPtr& F = any->field();
        Fq one = Fq::one(F);
        if (t.is_zero() || t == one) throw DegenerateT("t must avoid {0, 1}");
        if (alpha + beta + one != gamma + delta + epsilon)
            throw ValidationError("Heun constraint alpha + beta + 1 = gamma + delta + epsilon violated");
    }

    const FieldPtr& field() const { return t.field(); }
};

// The five quantities constant on the fibers of "same projective connection":
// the four squared exponent differences and I.
struct OperInvariant {
    Fq A2, C2, D2, E2, I;

    friend bool operator==(const OperInvariant& a, const OperInvariant& b) {
        return a.A2 == b.A2 && a.C2 == b.C2 && a.D2 == b.D2 && a.E2 == b.E2 && a.I == b.I;
    }
    friend bool operator!=(const OperInvariant& a, const OperInvariant& b) { return !(a == b); }
};

// I = tγδ + γε − 2q.  Pinned by expanding the x-coefficient of the normalized
// single-entry form of the companion connection; it is constant under the
// index-two parameter flips composed with their accessory shifts,
//   (γ, q) ↦ (2−γ, q + (1−γ)(tδ+ε)),
//   (δ, q) ↦ (2−δ, q + (1−δ)tγ),
//   (ε, q) ↦ (2−ε, q + (1−ε)γ),
// and under swapping (α, β) — exactly the substitutions y ↦ x^{1−γ}·y etc.
// that preserve the operator family.
inline OperInvariant oper_invariant(const HeunParams& hp) {
    const FieldPtr& F = hp.field();
    Fq one = Fq::one(F);
    OperInvariant inv;
    Fq ab = hp.alpha - hp.beta;
    Fq cg = one - hp.gamma;
    Fq cd = one - hp.delta;
    Fq ce = one - hp.epsilon;
    inv.A2 = ab * ab;
    inv.C2 = cg * cg;
    inv.D2 = cd * cd;
    inv.E2 = ce * ce;
    inv.I = hp.t * hp.gamma * hp.delta + hp.gamma * hp.epsilon - hp.q.mul_small(2);
    return inv;
}

// Radius classes at the four singular points, in the order (0, 1, t, ∞):
// classes of (1−γ)/2, (1−δ)/2, (1−ε)/2, (α−β)/2 at level 1.  The exponent
// parameters must lie in the prime field.
inline std::array<RadiusClass, 4> heun_radii(const HeunParams& hp) {
    const FieldPtr& F = hp.field();
    PrimeLevel ctx(Int(F->p), 1);
    Fq one = Fq::one(F);
    std::array<std::pair<const char*, Fq>, 4> numer = {{{"0", one - hp.gamma},
                                                        {"1", one - hp.delta},
                                                        {"t", one - hp.epsilon},
                                                        {"infinity", hp.alpha - hp.beta}}};
    std::array<std::optional<RadiusClass>, 4> out;
    for (size_t i = 0; i < 4; ++i) {
        if (!numer[i].second.in_prime_field())
            throw ValidationError("radii extraction requires prime-field exponent parameters");
        Int v(numer[i].second.prime_value());
        if (mod_floor(v, ctx.p) == 0)
            throw NonUnitRadius(std::string("exponent difference at ") + numer[i].first +
                                " is divisible by p — no radius class");
        out[i].emplace(ctx, mod_floor(v * ctx.inv2(), ctx.p));
    }
    return {*out[0], *out[1], *out[2], *out[3]};
}

// Two parameter packs give the same projective connection exactly when their
// five invariants agree (same field, same t required).
inline bool heun_equiv(const HeunParams& a, const HeunParams& b) {
    if (a.field()->p != b.field()->p || a.field()->e != b.field()->e ||
        a.field()->modulus != b.field()->modulus || a.t != b.t)
        throw ValidationError("heun_equiv requires matching t and field context");
    return oper_invariant(a) == oper_invariant(b);
}

// The companion system of the operator: Y = (f, f′) satisfies Y′ = (M/m)·Y
// with m = x(x−1)(x−t) and M = [[0, m], [q − αβx, −Pm]], where P is the
// first-order coefficient.
inline PolyMatrix<Fq> companion_system(const HeunParams& hp) {
    const FieldPtr& F = hp.field();
    Fq one = Fq::one(F);
    Fq t = hp.t;
    PolyMatrix<Fq> A;
    A.m = Poly<Fq>({Fq::zero(F), t, -(t + one), one});
    Fq s = hp.gamma + hp.delta + hp.epsilon;
    Poly<Fq> Pm({hp.gamma * t, -(hp.gamma * (t + one) + hp.delta * t + hp.epsilon), s});
    A.entry[0] = {};
    A.entry[1] = A.m;
    A.entry[2] = Poly<Fq>({hp.q, -(hp.alpha * hp.beta)});
    A.entry[3] = -Pm;
    A.k = 1;
    return A;
}

// Strict dormancy: the p-curvature of the companion system vanishes, i.e. the
// operator has a full basis of root functions.
inline bool is_dormant_heun(const HeunParams& hp) {
    PolyMatrix<Fq> psi = pcurvature(companion_system(hp));
    for (const auto& ent : psi.entry)
        if (!ent.is_zero()) return false;
    return true;
}

// Secondary diagnostic: the p-curvature is scalar (off-diagonal zero, equal
// diagonal), which suffices for the projectivized connection.
inline bool is_dormant_projective(const HeunParams& hp) {
    PolyMatrix<Fq> psi = pcurvature(companion_system(hp));
    return psi.entry[1].is_zero() && psi.entry[2].is_zero() && psi.entry[0] == psi.entry[3];
}

// ---------------------------------------------------------------------------
// Dormancy polynomials and counting
// ---------------------------------------------------------------------------

namespace detail {

// Exponent parameters of one sign family attached to a radii tuple: the
// doubled canonical representatives 2·rep are the candidate exponent
// differences up to sign, and the family fixes each of the four signs.
struct FamilyParams {
    std::uint32_t p;
    std::uint32_t gamma, delta, epsilon; // exponent parameters in F_p
    std::uint32_t diff;                  // α − β
    std::uint32_t prod;                  // α·β
    std::uint32_t i_offset;              // tγδ + γε, the q-free part of I
};

inline void validate_level1_radii(const RadiiTuple4& radii) {
    if (radii.ctx.N != 1)
        throw ValidationError("the dormancy oracle runs at level 1 only, got N = " +
                              std::to_string(radii.ctx.N));
}

inline std::uint32_t validate_t(const Int& t, const RadiiTuple4& radii) {
    std::uint32_t tv = std::uint32_t(mod_floor(t, radii.ctx.p).get_ui());
    if (tv == 0 || tv == 1)
        throw DegenerateT("t = " + std::to_string(tv) + " collides with a fixed singular point");
    return tv;
}

inline FamilyParams family_from_radii(const RadiiTuple4& radii, const std::array<int, 4>& signs,
                                      std::uint32_t tv) {
    for (int s : signs)
        if (s != 1 && s != -1) throw ValidationError("sign choices must be +1 or -1");
    std::uint32_t p = std::uint32_t(radii.ctx.p.get_ui());
    auto signed_diff = [&](int i) {
        std::uint32_t c = std::uint32_t(Int(2 * radii.rho[size_t(i)].rep).get_ui() % p);
        return signs[size_t(i)] == 1 ? c : (p - c) % p;
    };
    FamilyParams fam;
    fam.p = p;
    fam.gamma = (1 + p - signed_diff(0)) % p;
    fam.delta = (1 + p - signed_diff(1)) % p;
    fam.epsilon = (1 + p - signed_diff(2)) % p;
    fam.diff = signed_diff(3);
    std::uint32_t s1 = (fam.gamma + fam.delta + fam.epsilon + p - 1) % p; // α + β
    std::uint32_t inv4 = raw::powmod_u32(4, p - 2, p);
    std::uint64_t d2 = std::uint64_t(fam.diff) * fam.diff % p;
    fam.prod = std::uint32_t((std::uint64_t(s1) * s1 % p + p - d2) % p * inv4 % p);
    fam.i_offset = std::uint32_t((std::uint64_t(tv) * fam.gamma % p * fam.delta +
                                  std::uint64_t(fam.gamma) * fam.epsilon) %
                                 p);
    return fam;
}

// The sign-family dormancy polynomial over the lightweight prime-field
// scalar: gcd over F_p[q] of every x-coefficient of every entry of N_p.
inline Poly<Zp> dormancy_polynomial_zp(const FamilyParams& fam, std::uint32_t tv) {
    using QP = Poly<Zp>;
    using XP = Poly<QP>;
    std::uint32_t p = fam.p;
    auto zs = [&](std::uint32_t v) { return Zp::make(v, p); };
    auto qconst = [&](std::uint32_t v) { return QP(std::vector<Zp>{zs(v)}); };
    XP m(std::vector<QP>{QP{}, qconst(tv), qconst((2 * p - tv - 1) % p), qconst(1)});
    std::uint32_t s = (fam.gamma + fam.delta + fam.epsilon) % p;
    std::uint32_t pm1 = std::uint32_t((std::uint64_t(fam.gamma) * (tv + 1) +
                                       std::uint64_t(fam.delta) * tv + fam.epsilon) %
                                      p);
    XP Pm(std::vector<QP>{qconst(std::uint32_t(std::uint64_t(fam.gamma) * tv % p)),
                          qconst((p - pm1) % p), qconst(s)});
    QP qvar(std::vector<Zp>{Zp{}, zs(1)});
    std::array<XP, 4> M = {XP{}, m, XP(std::vector<QP>{qvar, qconst((p - fam.prod) % p)}), -Pm};
    auto N = pcurvature_iterate(M, m, p);
    Poly<Zp> g;
    for (const auto& ent : N)
        for (const auto& qc : ent.c) {
            if (qc.is_zero()) continue;
            g = g.is_zero() ? poly_monic(qc) : poly_gcd(g, qc);
        }
    return g; // zero only if N_p vanished identically for every q
}

} // namespace detail

// Dormancy polynomial of one sign family: a monic polynomial in the accessory
// parameter q over F_p whose roots (in the algebraic closure) are exactly the
// dormant members of the family.  The zero polynomial signals that every q is
// dormant (not expected on this family; callers treat it as a flag).
inline Poly<Fq> dormancy_polynomial(const Int& t, const RadiiTuple4& radii,
                                    const std::array<int, 4>& signs) {
    detail::validate_level1_radii(radii);
    std::uint32_t tv = detail::validate_t(t, radii);
    auto fam = detail::family_from_radii(radii, signs, tv);
    Poly<detail::Zp> g = detail::dormancy_polynomial_zp(fam, tv);
    FieldPtr F = make_field(radii.ctx.p, 1);
    Poly<Fq> out;
    out.c.reserve(g.c.size());
    for (const auto& zc : g.c) out.c.push_back(zc.is_zero() ? Fq() : Fq(F, Int(zc.v)));
    out.trim();
    return out;
}

// Number of dormant projective connections with the given level-1 radii on
// the four-pointed line with cross-ratio parameter t, counted geometrically:
// every sign family's dormancy polynomial is rewritten in the invariant
// coordinate I = tγδ + γε − 2q, the products are combined, and the degree of
// the squarefree part counts distinct I-values in the algebraic closure.
inline Int count_dormant_opers(const Int& t, const RadiiTuple4& radii) {
    detail::validate_level1_radii(radii);
    std::uint32_t tv = detail::validate_t(t, radii);
    std::uint32_t p = std::uint32_t(radii.ctx.p.get_ui());
    std::uint32_t inv2 = detail::raw::powmod_u32(2, p - 2, p);
    Poly<detail::Zp> prod(std::vector<detail::Zp>{detail::Zp::make(1, p)});
    for (int mask = 0; mask < 16; ++mask) {
        std::array<int, 4> signs;
        for (int i = 0; i < 4; ++i) signs[size_t(i)] = (mask >> i) & 1 ? -1 : 1;
        auto fam = detail::family_from_radii(radii, signs, tv);
        Poly<detail::Zp> f = detail::dormancy_polynomial_zp(fam, tv);
        if (f.is_zero())
            throw ConsistencyError("dormancy polynomial vanished identically — every q dormant");
        if (f.c.size() == 1) continue; // no dormant member in this family
        // q = (i_offset − I)/2: rewrite in the invariant coordinate.
        detail::Zp u = detail::Zp::make(p - inv2, p);
        detail::Zp v = detail::Zp::make(std::uint32_t(std::uint64_t(fam.i_offset) * inv2 % p), p);
        prod = prod * poly_subst_affine(f, u, v);
    }
    return Int(long(poly_radical(prod).degree()));
}

// Explicit scan cross-check: all accessory parameters q in F_{p^e} making the
// fixed sign family dormant, in counter order of the coordinate vectors.
inline std::vector<Fq> scan_dormant_q(const FieldPtr& F, const Int& t, const RadiiTuple4& radii,
                                      const std::array<int, 4>& signs) {
    detail::validate_level1_radii(radii);
    if (Int(F->p) != radii.ctx.p)
        throw ValidationError("scan field characteristic differs from the radii context");
    std::uint32_t tv = detail::validate_t(t, radii);
    auto fam = detail::family_from_radii(radii, signs, tv);
    std::uint32_t p = fam.p;
    std::uint32_t inv2 = detail::raw::powmod_u32(2, p - 2, p);
    std::uint32_t s1 = (fam.gamma + fam.delta + fam.epsilon + p - 1) % p; // α + β
    Fq alpha(F, Int(std::uint64_t(s1 + fam.diff) % p * inv2 % p));
    Fq beta(F, Int(std::uint64_t(s1 + p - fam.diff) % p * inv2 % p));
    Fq gamma(F, Int(fam.gamma)), delta(F, Int(fam.delta)), epsilon(F, Int(fam.epsilon));
    Fq tf(F, Int(tv));
    std::vector<Fq> out;
    std::vector<std::uint32_t> coords(F->e, 0);
    for (;;) {
        Fq q(F, coords);
        HeunParams hp(alpha, beta, gamma, delta, epsilon, q, tf);
        if (is_dormant_heun(hp)) out.push_back(q);
        unsigned i = 0;
        for (; i < F->e; ++i) {
            if (++coords[i] < F->p) break;
            coords[i] = 0;
        }
        if (i == F->e) break;
    }
    return out;
}

// One-stop cross-validation of the combinatorial degree against the oracle:
// runs count_dormant_opers at every admissible t and compares with degree_04.
struct DormancyValidation {
    Int degree;
    Int max_count;
    std::vector<std::pair<Int, Int>> per_t; // (t, count)
    bool match; // max == degree and every count <= degree
};

inline DormancyValidation validate_dormant_counts(const RadiiTuple4& radii,
                                                  long max_enum = kDefaultMaxEnum) {
    detail::validate_level1_radii(radii);
    DormancyValidation rep;
    rep.degree = degree_04(radii, max_enum);
    rep.max_count = 0;
    bool bounded = true;
    for (Int t = 2; t < radii.ctx.p; ++t) {
        Int c = count_dormant_opers(t, radii);
        rep.per_t.emplace_back(t, c);
        rep.max_count = std::max(rep.max_count, c);
        if (c > rep.degree) bounded = false;
    }
    rep.match = bounded && rep.max_count == rep.degree;
    return rep;
}

} // namespace dormant
