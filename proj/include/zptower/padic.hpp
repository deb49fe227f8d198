#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "zptower/ff.hpp"
#include "zptower/rational.hpp"

namespace zptower::padic {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

/// Error for values that vanish to working precision where a nonzero value
/// is required (valuations, degree detection, preparation).
struct PrecisionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline u64 pow_u64(u64 base, int e) {
    u64 r = 1;
    while (e-- > 0) {
        if (r > UINT64_MAX / base) throw std::overflow_error("p^a exceeds 64 bits");
        r *= base;
    }
    return r;
}

inline u64 mulmod(u64 a, u64 b, u64 m) { return (u64)((u128)a * b % m); }

inline u64 powmod(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

/// Inverse of a unit mod p^a via inverse mod p plus Hensel doubling.
inline u64 invmod_pk(u64 x, u64 p, u64 mod) {
    u64 x0 = x % p;
    if (x0 == 0) throw std::domain_error("invmod_pk: not a unit");
    u64 inv = powmod(x0, p - 2, p);  // Fermat in F_p
    // Each step doubles the number of correct digits.
    u64 reach = p;
    while (reach < mod) {
        inv = mulmod(inv, (2 + mod - mulmod(x % mod, inv, mod)) % mod, mod);
        u128 r2 = (u128)reach * reach;
        reach = r2 >= (u128)mod ? mod : (u64)r2;
    }
    return inv % mod;
}

/// Element of Z_p known mod p^a. The precision a travels with the value;
/// mixed-precision arithmetic narrows to the weaker operand.
struct PadicInt {
    std::int64_t p = 2;
    int a = 1;       // precision in p-adic digits
    u64 mod = 2;     // p^a
    u64 residue = 0;

    PadicInt() = default;
    PadicInt(std::int64_t p_, int a_, std::int64_t value) : p(p_), a(a_) {
        mod = pow_u64((u64)p_, a_);
        std::int64_t v = value % (std::int64_t)mod;
        if (v < 0) v += (std::int64_t)mod;
        residue = (u64)v;
    }

    static PadicInt from_residue(std::int64_t p, int a, u64 r) {
        PadicInt x(p, a, 0);
        x.residue = r % x.mod;
        return x;
    }

    PadicInt narrowed(int a2) const {
        if (a2 >= a) return *this;
        PadicInt x(p, a2, 0);
        x.residue = residue % x.mod;
        return x;
    }

    friend int common_prec(const PadicInt& x, const PadicInt& y) {
        if (x.p != y.p) throw std::invalid_argument("PadicInt: mixed primes");
        return std::min(x.a, y.a);
    }
    friend PadicInt operator+(const PadicInt& x, const PadicInt& y) {
        int a = common_prec(x, y);
        PadicInt r(x.p, a, 0);
        r.residue = (x.residue % r.mod + y.residue % r.mod) % r.mod;
        return r;
    }
    friend PadicInt operator-(const PadicInt& x, const PadicInt& y) {
        int a = common_prec(x, y);
        PadicInt r(x.p, a, 0);
        r.residue = (x.residue % r.mod + r.mod - y.residue % r.mod) % r.mod;
        return r;
    }
    friend PadicInt operator*(const PadicInt& x, const PadicInt& y) {
        int a = common_prec(x, y);
        PadicInt r(x.p, a, 0);
        r.residue = mulmod(x.residue % r.mod, y.residue % r.mod, r.mod);
        return r;
    }

    bool is_unit() const { return residue % (u64)p != 0; }

    PadicInt inverse() const {
        if (!is_unit()) throw std::domain_error("PadicInt: inverse of non-unit");
        PadicInt r(p, a, 0);
        r.residue = invmod_pk(residue, (u64)p, mod);
        return r;
    }

    /// v_p of the residue; the flag marks "zero to precision" (v >= a).
    struct Val {
        int v;
        bool at_floor;
    };
    Val valuation() const {
        if (residue == 0) return {a, true};
        int v = 0;
        u64 r = residue;
        while (r % (u64)p == 0) {
            r /= (u64)p;
            ++v;
        }
        return {v, false};
    }

    /// Exact division by p^k; the quotient is only known mod p^{a-k}.
    PadicInt shift_down(int k) const {
        if (k == 0) return *this;
        u64 pk = pow_u64((u64)p, k);
        if (residue % pk != 0) throw std::domain_error("PadicInt: inexact division by p^k");
        PadicInt r(p, a - k, 0);
        r.residue = (residue / pk) % r.mod;
        return r;
    }

    std::string str() const { return std::to_string(residue); }
};

// ---------------------------------------------------------------------------
// Unramified rings Z_{p^n} at fixed precision.
// ---------------------------------------------------------------------------

/// W(F_{p^n}) truncated mod p^a, realized as Z/p^a [y] / (modulus) for a
/// monic lift of an irreducible polynomial of degree n over F_p. Elements are
/// coefficient vectors of length n in the power basis.
struct UnramRing {
    std::int64_t p = 2;
    int a = 1;
    u64 mod = 2;  // p^a
    int n = 1;    // absolute degree over Z_p
    std::vector<u64> modulus;  // length n+1, monic
    u64 residue_size = 2;      // p^n

    using Elem = std::vector<u64>;

    static UnramRing make(std::int64_t p, int a, const std::vector<u64>& monic_modulus) {
        UnramRing R;
        R.p = p;
        R.a = a;
        R.mod = pow_u64((u64)p, a);
        R.n = (int)monic_modulus.size() - 1;
        R.modulus = monic_modulus;
        for (u64& c : R.modulus) c %= R.mod;
        R.modulus.back() = 1;
        R.residue_size = 1;
        for (int i = 0; i < R.n; ++i) R.residue_size *= (u64)p;
        return R;
    }

    /// Ring over the naive lift of an irreducible F_p-polynomial.
    static UnramRing from_fp_modulus(std::int64_t p, int a, const ff::FpVec& m) {
        std::vector<u64> lift(m.begin(), m.end());
        return make(p, a, lift);
    }

    Elem zero() const { return Elem(n, 0); }
    Elem one() const {
        Elem e(n, 0);
        e[0] = 1 % mod;
        return e;
    }
    Elem scalar(u64 c) const {
        Elem e(n, 0);
        e[0] = c % mod;
        return e;
    }
    Elem gen() const {
        Elem e(n, 0);
        if (n > 1) e[1] = 1;
        else e[0] = modulus[0] ? mod - modulus[0] % mod : 0;  // degenerate n=1: y = -m0
        return e;
    }

    bool is_zero(const Elem& x) const {
        return std::all_of(x.begin(), x.end(), [](u64 c) { return c == 0; });
    }

    Elem add(const Elem& x, const Elem& y) const {
        Elem z(n);
        for (int i = 0; i < n; ++i) z[i] = (x[i] + y[i]) % mod;
        return z;
    }
    Elem sub(const Elem& x, const Elem& y) const {
        Elem z(n);
        for (int i = 0; i < n; ++i) z[i] = (x[i] + mod - y[i]) % mod;
        return z;
    }
    Elem scalar_mul(u64 c, const Elem& x) const {
        Elem z(n);
        c %= mod;
        for (int i = 0; i < n; ++i) z[i] = mulmod(c, x[i], mod);
        return z;
    }

    Elem mul(const Elem& x, const Elem& y) const {
        std::vector<u64> prod(2 * n - 1, 0);
        for (int i = 0; i < n; ++i) {
            if (!x[i]) continue;
            for (int j = 0; j < n; ++j) {
                if (!y[j]) continue;
                prod[i + j] = (u64)(((u128)x[i] * y[j] + prod[i + j]) % mod);
            }
        }
        reduce(prod);
        prod.resize(n);
        return prod;
    }

    /// In-place reduction of a raw product by the monic modulus.
    void reduce(std::vector<u64>& v) const {
        for (int i = (int)v.size() - 1; i >= n; --i) {
            u64 lead = v[i];
            if (!lead) continue;
            v[i] = 0;
            for (int j = 0; j < n; ++j) {
                u64 t = mulmod(lead, modulus[j], mod);
                v[i - n + j] = (v[i - n + j] + mod - t) % mod;
            }
        }
    }

    Elem pow(Elem base, u64 e) const {
        Elem r = one();
        while (e) {
            if (e & 1) r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }

    /// z^(p^n), the Witt-ring Frobenius power on residues.
    Elem frobenius_power(Elem z) const {
        for (int i = 0; i < n; ++i) z = pow(z, (u64)p);
        return z;
    }

    /// [OP] teichmuller: the unique lift t of the residue of x with t^Q = t,
    /// Q = p^n, obtained by iterating y -> y^Q exactly a times. Each
    /// iteration gains one digit of agreement.
    Elem teichmuller(const Elem& x) const {
        Elem t = x;
        for (int i = 0; i < a; ++i) t = frobenius_power(t);
        return t;
    }

    /// [OP] trace_to_zp: trace of the multiplication-by-x matrix in the
    /// power basis, i.e. the trace of Z_{p^n}/Z_p applied mod p^a.
    PadicInt trace_to_zp(const Elem& x) const {
        u64 tr = 0;
        Elem col = x;  // x * y^i, built incrementally
        for (int i = 0; i < n; ++i) {
            tr = (tr + col[i]) % mod;
            if (i + 1 < n) {
                // multiply by y: shift up and reduce the overflow coefficient
                u64 lead = col[n - 1];
                for (int j = n - 1; j > 0; --j) col[j] = col[j - 1];
                col[0] = 0;
                if (lead) {
                    for (int j = 0; j < n; ++j) {
                        u64 t = mulmod(lead, modulus[j], mod);
                        col[j] = (col[j] + mod - t) % mod;
                    }
                }
            }
        }
        return PadicInt::from_residue(p, a, tr);
    }

    /// Reduction of an element to its residue-field coordinates mod p.
    ff::FpVec reduce_mod_p(const Elem& x) const {
        ff::FpVec v(n);
        for (int i = 0; i < n; ++i) v[i] = (std::uint8_t)(x[i] % (u64)p);
        return v;
    }
};

}  // namespace zptower::padic
