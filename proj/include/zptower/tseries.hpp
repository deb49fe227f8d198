#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "zptower/padic.hpp"

namespace zptower::tseries {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
using padic::PadicInt;
using padic::PrecisionError;

inline int ceil_log_base(u64 base, u64 x) {
    int g = 0;
    u64 reach = 1;
    while (reach < x) {
        ++g;
        if (reach > UINT64_MAX / base) break;
        reach *= base;
    }
    return g;
}

/// Truncated element of Z_p[[T]]: exactly b_T coefficients mod p^a. The
/// truncation pair (a, b_T) travels with the value; operations on mismatched
/// operands narrow to the weaker truncation and set the `narrowed` flag on
/// the result.
struct TSeries {
    std::int64_t p = 2;
    int a = 1;
    u64 mod = 2;  // p^a
    bool narrowed = false;
    std::vector<u64> c;  // length b_T

    int b_T() const { return (int)c.size(); }

    static TSeries zero(std::int64_t p, int a, int b_T) {
        TSeries t;
        t.p = p;
        t.a = a;
        t.mod = padic::pow_u64((u64)p, a);
        if (2 * (64 - __builtin_clzll(t.mod | 1)) + (64 - __builtin_clzll((u64)b_T | 1)) > 120)
            throw std::invalid_argument("TSeries: p^a too large for this truncation");
        t.c.assign(b_T, 0);
        return t;
    }

    static TSeries constant(std::int64_t p, int a, int b_T, std::int64_t value) {
        TSeries t = zero(p, a, b_T);
        std::int64_t v = value % (std::int64_t)t.mod;
        if (v < 0) v += (std::int64_t)t.mod;
        t.c[0] = (u64)v;
        return t;
    }

    static TSeries one_plus_T(std::int64_t p, int a, int b_T) {
        TSeries t = constant(p, a, b_T, 1);
        if (b_T > 1) t.c[1] = 1;
        return t;
    }

    TSeries narrowed_to(int a2, int bT2) const {
        TSeries t = zero(p, std::min(a, a2), std::min(b_T(), bT2));
        for (int j = 0; j < t.b_T(); ++j) t.c[j] = c[j] % t.mod;
        t.narrowed = narrowed || t.a < a || t.b_T() < b_T();
        return t;
    }

    bool is_zero() const {
        return std::all_of(c.begin(), c.end(), [](u64 x) { return x == 0; });
    }

    PadicInt coeff(int j) const { return PadicInt::from_residue(p, a, c[j]); }
};

inline void align(const TSeries& x, const TSeries& y, TSeries& xa, TSeries& ya) {
    if (x.p != y.p) throw std::invalid_argument("TSeries: mixed primes");
    int a = std::min(x.a, y.a);
    int bT = std::min(x.b_T(), y.b_T());
    xa = x.narrowed_to(a, bT);
    ya = y.narrowed_to(a, bT);
}

inline TSeries operator+(const TSeries& x, const TSeries& y) {
    TSeries xa, ya;
    align(x, y, xa, ya);
    xa.narrowed = xa.narrowed || ya.narrowed;
    for (int j = 0; j < xa.b_T(); ++j) xa.c[j] = (xa.c[j] + ya.c[j]) % xa.mod;
    return xa;
}

inline TSeries operator-(const TSeries& x, const TSeries& y) {
    TSeries xa, ya;
    align(x, y, xa, ya);
    xa.narrowed = xa.narrowed || ya.narrowed;
    for (int j = 0; j < xa.b_T(); ++j) xa.c[j] = (xa.c[j] + xa.mod - ya.c[j]) % xa.mod;
    return xa;
}

inline TSeries operator*(const TSeries& x, const TSeries& y) {
    TSeries xa, ya;
    align(x, y, xa, ya);
    TSeries z = TSeries::zero(xa.p, xa.a, xa.b_T());
    z.narrowed = xa.narrowed || ya.narrowed;
    int bT = xa.b_T();
    for (int k = 0; k < bT; ++k) {
        u128 acc = 0;
        for (int i = 0; i <= k; ++i) acc += (u128)xa.c[i] * ya.c[k - i];
        z.c[k] = (u64)(acc % xa.mod);
    }
    return z;
}

inline TSeries scalar_mul(u64 s, const TSeries& x) {
    TSeries z = x;
    s %= x.mod;
    for (u64& v : z.c) v = padic::mulmod(v, s, x.mod);
    return z;
}

/// [OP] ts_inverse: multiplicative inverse when the constant term is a unit.
inline TSeries ts_inverse(const TSeries& x) {
    if (x.c.empty() || x.c[0] % (u64)x.p == 0)
        throw std::domain_error("ts_inverse: non-unit constant term");
    u64 inv0 = padic::invmod_pk(x.c[0], (u64)x.p, x.mod);
    TSeries y = TSeries::zero(x.p, x.a, x.b_T());
    y.narrowed = x.narrowed;
    y.c[0] = inv0;
    for (int k = 1; k < x.b_T(); ++k) {
        u128 acc = 0;
        for (int j = 1; j <= k; ++j) acc += (u128)x.c[j] * y.c[k - j];
        u64 s = (u64)(acc % x.mod);
        y.c[k] = padic::mulmod((x.mod - s) % x.mod, inv0, x.mod);
    }
    return y;
}

// ---------------------------------------------------------------------------
// Binomial characters (1+T)^c.
// ---------------------------------------------------------------------------

/// Precomputed powers (1+T)^(p^i) for a fixed truncation. The per-character
/// cost then reduces to one series product per nonzero base-p digit.
struct BinomialTable {
    std::int64_t p;
    int a;
    int b_T;
    std::vector<TSeries> pow_pi;  // pow_pi[i] = (1+T)^(p^i)

    BinomialTable(std::int64_t p_, int a_, int bT, int digits) : p(p_), a(a_), b_T(bT) {
        TSeries cur = TSeries::one_plus_T(p, a, bT);
        pow_pi.reserve(digits);
        for (int i = 0; i < digits; ++i) {
            pow_pi.push_back(cur);
            TSeries next = cur;
            for (std::int64_t k = 1; k < p; ++k) next = next * cur;
            cur = next;
        }
    }
};

/// [OP] binomial_power: (1+T)^c through the base-p digit factorization of c,
/// using only ring multiplications. c must carry ceil(log_p b_T) guard
/// digits beyond the output precision so every retained coefficient is
/// exact mod p^a.
inline TSeries binomial_power(const PadicInt& c, const BinomialTable& table) {
    if (c.p != table.p) throw std::invalid_argument("binomial_power: mixed primes");
    int guard = ceil_log_base((u64)table.p, (u64)table.b_T);
    if (c.a < table.a + guard)
        throw PrecisionError("binomial_power: insufficient guard digits");
    TSeries result = TSeries::constant(table.p, table.a, table.b_T, 1);
    u64 rem = c.residue;
    for (int i = 0; i < c.a && rem != 0; ++i) {
        int digit = (int)(rem % (u64)table.p);
        rem /= (u64)table.p;
        if (digit == 0) continue;
        if (i >= (int)table.pow_pi.size())
            throw std::invalid_argument("binomial_power: table too short for this exponent");
        for (int k = 0; k < digit; ++k) result = result * table.pow_pi[i];
    }
    return result;
}

inline TSeries binomial_power(const PadicInt& c, int a_out, int b_T) {
    BinomialTable table(c.p, a_out, b_T, c.a);
    return binomial_power(c, table);
}

// ---------------------------------------------------------------------------
// Bivariate truncations: elements of Z_p[[T]][[s]] mod (p^a, T^{b_T}, s^{b_s+1}).
// ---------------------------------------------------------------------------

struct BiSeries {
    std::vector<TSeries> sc;  // sc[k] = coefficient of s^k; length b_s + 1

    int b_s() const { return (int)sc.size() - 1; }

    static BiSeries one(std::int64_t p, int a, int b_T, int b_s) {
        BiSeries B;
        B.sc.assign(b_s + 1, TSeries::zero(p, a, b_T));
        B.sc[0] = TSeries::constant(p, a, b_T, 1);
        return B;
    }
};

inline BiSeries operator*(const BiSeries& x, const BiSeries& y) {
    int b_s = std::min(x.b_s(), y.b_s());
    const TSeries& probe = x.sc[0];
    BiSeries z;
    z.sc.assign(b_s + 1, TSeries::zero(probe.p, probe.a, probe.b_T()));
    for (int i = 0; i <= b_s; ++i) {
        if (x.sc[i].is_zero()) continue;
        for (int j = 0; i + j <= b_s; ++j) {
            if (y.sc[j].is_zero()) continue;
            z.sc[i + j] = z.sc[i + j] + x.sc[i] * y.sc[j];
        }
    }
    return z;
}

/// [OP] euler_expand: expansion of the reciprocal Euler factor
/// 1 / (1 - (1+T)^c s^d) = sum_j (1+T)^{c j} s^{d j}, truncated at s^{b_s}.
inline BiSeries euler_expand(const PadicInt& c, int d, int b_s, int b_T,
                             const BinomialTable& table) {
    if (d < 1) throw std::invalid_argument("euler_expand: d must be >= 1");
    BiSeries B = BiSeries::one(table.p, table.a, b_T, b_s);
    if (d <= b_s) {
        TSeries u = binomial_power(c, table);
        TSeries uj = u;
        for (int j = 1; d * j <= b_s; ++j) {
            B.sc[d * j] = uj;
            if (d * (j + 1) <= b_s) uj = uj * u;
        }
    }
    return B;
}

inline BiSeries euler_expand(const PadicInt& c, int d, int b_s, int b_T, int a_out) {
    BinomialTable table(c.p, a_out, b_T, c.a);
    return euler_expand(c, d, b_s, b_T, table);
}

/// In-place multiplication by 1/(1 - u s^d); cheaper than a full product
/// when accumulating many Euler factors.
inline void mul_euler_factor_inplace(BiSeries& acc, const TSeries& u, int d) {
    int b_s = acc.b_s();
    if (d > b_s) return;
    std::vector<TSeries> upow;  // u^1, u^2, ...
    upow.push_back(u);
    while ((int)(upow.size() + 1) * d <= b_s) upow.push_back(upow.back() * u);
    for (int k = b_s; k >= d; --k) {
        TSeries add = acc.sc[k - d] * upow[0];
        for (int j = 2; j * d <= k; ++j) add = add + acc.sc[k - j * d] * upow[j - 1];
        acc.sc[k] = acc.sc[k] + add;
    }
}

/// s d/ds of a bivariate series: coefficient k becomes k * L_k.
inline BiSeries s_dlog_numerator(const BiSeries& L) {
    BiSeries D = L;
    for (int k = 0; k <= L.b_s(); ++k) D.sc[k] = scalar_mul((u64)k, L.sc[k]);
    return D;
}

/// Inverse in the s-direction for series with constant s-coefficient a unit;
/// division-free back-substitution when sc[0] = 1.
inline BiSeries s_inverse(const BiSeries& L) {
    const TSeries& L0 = L.sc[0];
    TSeries inv0 = ts_inverse(L0);
    BiSeries M;
    M.sc.assign(L.b_s() + 1, TSeries::zero(L0.p, L0.a, L0.b_T()));
    M.sc[0] = inv0;
    for (int k = 1; k <= L.b_s(); ++k) {
        TSeries acc = TSeries::zero(L0.p, L0.a, L0.b_T());
        for (int j = 1; j <= k; ++j) acc = acc + L.sc[j] * M.sc[k - j];
        M.sc[k] = scalar_mul(L0.mod - 1, acc * inv0);  // -acc * inv0
    }
    return M;
}

// ---------------------------------------------------------------------------
// p-adic Weierstrass preparation.
// ---------------------------------------------------------------------------

/// Factorization data x = p^mu * (T^lambda + p a_1 T^{lambda-1} + ... +
/// p a_lambda) * unit. The unit is certified on the T-window b_T - lambda.
struct PrepResult {
    int mu = 0;
    int lambda = 0;
    std::vector<PadicInt> dist_a;  // a_1 ... a_lambda
    TSeries unit;
    int certified_b_T = 0;  // reconstruction window in T
};

/// [OP] weierstrass_prepare. mu is the minimal coefficient valuation and
/// lambda the first index attaining it; the distinguished factor and unit
/// are solved by p-adically convergent sweeps of the triangular system
/// (x * V)_k = 0 for k > lambda, V = unit^{-1}, whose diagonal is the unit
/// coefficient x_lambda / p^mu.
inline PrepResult weierstrass_prepare(const TSeries& x) {
    const int bT = x.b_T();
    int mu = x.a, lambda = -1;
    for (int j = 0; j < bT; ++j) {
        if (x.c[j] == 0) continue;
        int v = 0;
        u64 r = x.c[j];
        while (r % (u64)x.p == 0) {
            r /= (u64)x.p;
            ++v;
        }
        if (v < mu) {
            mu = v;
            lambda = j;
        }
    }
    if (lambda < 0)
        throw PrecisionError("weierstrass_prepare: insufficient precision (series is 0 mod p^a)");
    if (2 * lambda > bT)
        throw PrecisionError("weierstrass_prepare: truncation too short for detected lambda");

    int ap = x.a - mu;  // precision of the prepared data
    u64 mod = padic::pow_u64((u64)x.p, ap);
    u64 pdivisor = padic::pow_u64((u64)x.p, mu);
    std::vector<u64> y(bT);
    for (int j = 0; j < bT; ++j) y[j] = (x.c[j] / pdivisor) % mod;

    // Solve for V on the window W = bT - lambda: (y V)_lambda = 1 and
    // (y V)_k = 0 for lambda < k < bT. Each sweep contracts the error by p.
    const int W = bT - lambda;
    u64 ylam_inv = padic::invmod_pk(y[lambda], (u64)x.p, mod);
    std::vector<u64> V(W, 0);
    V[0] = ylam_inv;
    for (int sweep = 0; sweep < ap + 1; ++sweep) {
        for (int k = lambda; k < bT; ++k) {
            u128 acc = 0;
            for (int j = std::max(0, k - bT + 1); j < W; ++j) {
                if (j == k - lambda) continue;
                if (k - j < 0 || k - j >= bT) continue;
                acc += (u128)y[k - j] * V[j];
            }
            u64 rhs = (k == lambda) ? 1 : 0;
            u64 s = (u64)(acc % mod);
            V[k - lambda] = padic::mulmod((rhs + mod - s) % mod, ylam_inv, mod);
        }
    }
    // Residual check: the defining equations must hold exactly mod p^ap.
    for (int k = lambda; k < bT; ++k) {
        u128 acc = 0;
        for (int j = 0; j < W && k - j >= 0; ++j)
            if (k - j < bT) acc += (u128)y[k - j] * V[j];
        u64 s = (u64)(acc % mod);
        u64 rhs = (k == lambda) ? 1 : 0;
        if (s != rhs)
            throw std::logic_error("weierstrass_prepare: division sweeps did not converge");
    }

    // Distinguished polynomial D = (y V) truncated below lambda, monic.
    std::vector<u64> D(lambda + 1, 0);
    D[lambda] = 1;
    for (int k = 0; k < lambda; ++k) {
        u128 acc = 0;
        for (int j = 0; j <= k && j < W; ++j) acc += (u128)y[k - j] * V[j];
        D[k] = (u64)(acc % mod);
        if (D[k] % (u64)x.p != 0)
            throw std::logic_error("weierstrass_prepare: distinguished part not divisible by p");
    }

    PrepResult out;
    out.mu = mu;
    out.lambda = lambda;
    out.certified_b_T = W;
    for (int i = 1; i <= lambda; ++i) {
        u64 ai = (D[lambda - i] / (u64)x.p) % (mod / (u64)x.p);
        out.dist_a.push_back(PadicInt::from_residue(x.p, std::max(1, ap - 1), ai));
    }
    TSeries Vser = TSeries::zero(x.p, ap, bT);
    for (int j = 0; j < W; ++j) Vser.c[j] = V[j];
    out.unit = ts_inverse(Vser).narrowed_to(ap, W);
    return out;
}

/// Rebuild p^mu * distinguished * unit, for round-trip checks. The product
/// is formed at the prepared precision a - mu and the residues then scaled
/// by p^mu, which is exact mod p^a.
inline TSeries prep_reconstruct(const PrepResult& r, std::int64_t p, int a, int bT) {
    int ap = std::min(a - r.mu, r.unit.a);
    TSeries dist = TSeries::zero(p, ap, bT);
    u64 mod = dist.mod;
    dist.c[r.lambda] = 1;
    for (int i = 1; i <= r.lambda; ++i)
        dist.c[r.lambda - i] = padic::mulmod((u64)p, r.dist_a[i - 1].residue % mod, mod);
    TSeries prod = dist * r.unit.narrowed_to(ap, bT);
    u64 pmu = padic::pow_u64((u64)p, r.mu);
    TSeries out = TSeries::zero(p, std::min(a, ap + r.mu), bT);
    for (int j = 0; j < std::min(bT, prod.b_T()); ++j) out.c[j] = prod.c[j] * pmu;
    return out;
}

}  // namespace zptower::tseries
