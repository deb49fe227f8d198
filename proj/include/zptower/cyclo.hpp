#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "zptower/padic.hpp"
#include "zptower/rational.hpp"
#include "zptower/tseries.hpp"

namespace zptower::padic {

using tseries::TSeries;

/// Binomial coefficients C(m, j) mod `mod` by Pascal's triangle (no division,
/// so exact at any precision).
inline std::vector<std::vector<u64>> pascal_mod(int rows, u64 mod) {
    std::vector<std::vector<u64>> C(rows + 1);
    for (int m = 0; m <= rows; ++m) {
        C[m].assign(m + 1, 1);
        for (int j = 1; j < m; ++j) C[m][j] = (C[m - 1][j - 1] + C[m - 1][j]) % mod;
    }
    return C;
}

/// Z_p[zeta_{p^n}] at precision a, in the power basis of the uniformizer
/// pi = zeta - 1 with the Eisenstein relation Phi_{p^n}(1 + pi) = 0. The
/// ramification index is e = p^{n-1}(p-1); level 0 degenerates to Z_p itself
/// (pi = 0). Valuations of elements are exact rationals with denominator
/// dividing e, read off the pi-adic expansion by inspection.
struct CycloRing {
    std::int64_t p = 2;
    int n = 1;
    int e = 1;    // ramification index
    int a = 1;    // precision in p-adic digits
    u64 mod = 2;  // p^a
    std::vector<u64> rel;  // monic relation of degree e: pi^e = -sum rel[j] pi^j

    static CycloRing make(std::int64_t p, int n, int a) {
        if (n < 0) throw std::invalid_argument("CycloRing: n must be >= 0");
        CycloRing R;
        R.p = p;
        R.n = n;
        R.a = a;
        R.mod = pow_u64((u64)p, a);
        if (n == 0) {
            R.e = 1;
            R.rel = {0, 1};  // pi = 0
            return R;
        }
        u64 pn1 = pow_u64((u64)p, n - 1);
        u64 pn = pn1 * (u64)p;
        if (pn > 4096) throw std::invalid_argument("CycloRing: p^n too large for 64-bit coefficient arithmetic");
        R.e = (int)(pn1 * (u64)(p - 1));
        // Phi_{p^n}(1+pi) = sum_{i<p} (1+pi)^{i p^{n-1}}
        auto C = pascal_mod((int)pn, R.mod);
        std::vector<u64> rel(R.e + 1, 0);
        for (int i = 0; i < (int)p; ++i) {
            int m = i * (int)pn1;
            for (int j = 0; j <= m; ++j) rel[j] = (rel[j] + C[m][j]) % R.mod;
        }
        if (rel[R.e] != 1) throw std::logic_error("CycloRing: relation not monic");
        if (rel[0] % (u64)p != 0 || (rel[0] / (u64)p) % (u64)p == 0)
            throw std::logic_error("CycloRing: relation not Eisenstein at p");
        for (int j = 1; j < R.e; ++j)
            if (rel[j] % (u64)p != 0)
                throw std::logic_error("CycloRing: relation not Eisenstein at p");
        R.rel = rel;
        return R;
    }

    bool same_as(const CycloRing& o) const {
        return p == o.p && n == o.n && a == o.a;
    }
};

/// Element of a cyclotomic ring: pi-adic coefficient vector of length e.
struct CycloElem {
    CycloRing ring;
    std::vector<u64> c;

    static CycloElem zero(const CycloRing& R) {
        CycloElem x;
        x.ring = R;
        x.c.assign(R.e, 0);
        return x;
    }
    static CycloElem from_scalar(const CycloRing& R, u64 value) {
        CycloElem x = zero(R);
        x.c[0] = value % R.mod;
        return x;
    }
    static CycloElem pi(const CycloRing& R) {
        CycloElem x = zero(R);
        if (R.e > 1) x.c[1] = 1;
        else x.c[0] = (R.mod - R.rel[0] % R.mod) % R.mod;  // degree-1 relation
        return x;
    }

    bool is_zero() const {
        return std::all_of(c.begin(), c.end(), [](u64 v) { return v == 0; });
    }
};

inline CycloElem cyclo_narrow(const CycloElem& x, int a) {
    if (x.ring.a <= a) return x;
    CycloElem y;
    y.ring = CycloRing::make(x.ring.p, x.ring.n, a);
    y.c = x.c;
    for (auto& v : y.c) v %= y.ring.mod;
    return y;
}

/// Operands at different precisions narrow to the weaker one; mixed primes
/// or levels are errors.
inline void cyclo_align(CycloElem& x, CycloElem& y) {
    if (x.ring.p != y.ring.p || x.ring.n != y.ring.n)
        throw std::invalid_argument("CycloElem: mixed rings");
    int a = std::min(x.ring.a, y.ring.a);
    x = cyclo_narrow(x, a);
    y = cyclo_narrow(y, a);
}

inline CycloElem operator+(CycloElem x, CycloElem y) {
    cyclo_align(x, y);
    CycloElem z = x;
    for (int i = 0; i < x.ring.e; ++i) z.c[i] = (x.c[i] + y.c[i]) % x.ring.mod;
    return z;
}

inline CycloElem operator-(CycloElem x, CycloElem y) {
    cyclo_align(x, y);
    CycloElem z = x;
    for (int i = 0; i < x.ring.e; ++i) z.c[i] = (x.c[i] + x.ring.mod - y.c[i]) % x.ring.mod;
    return z;
}

inline CycloElem operator*(CycloElem x, CycloElem y) {
    cyclo_align(x, y);
    const CycloRing& R = x.ring;
    std::vector<u64> prod(2 * R.e - 1, 0);
    for (int i = 0; i < R.e; ++i) {
        if (!x.c[i]) continue;
        for (int j = 0; j < R.e; ++j) {
            if (!y.c[j]) continue;
            prod[i + j] = (u64)(((u128)x.c[i] * y.c[j] + prod[i + j]) % R.mod);
        }
    }
    for (int i = (int)prod.size() - 1; i >= R.e; --i) {
        u64 lead = prod[i];
        if (!lead) continue;
        prod[i] = 0;
        for (int j = 0; j < R.e; ++j) {
            u64 t = mulmod(lead, R.rel[j], R.mod);
            prod[i - R.e + j] = (prod[i - R.e + j] + R.mod - t) % R.mod;
        }
    }
    CycloElem z = CycloElem::zero(R);
    for (int i = 0; i < R.e; ++i) z.c[i] = prod[i];
    return z;
}

inline CycloElem cyclo_pow(CycloElem base, u64 exp) {
    CycloElem r = CycloElem::from_scalar(base.ring, 1);
    while (exp) {
        if (exp & 1) r = r * base;
        base = base * base;
        exp >>= 1;
    }
    return r;
}

/// zeta^u = (1 + pi)^u, the image of the root of unity under exponent u.
inline CycloElem one_plus_pi_pow(const CycloRing& R, u64 u) {
    CycloElem z = CycloElem::from_scalar(R, 1) + CycloElem::pi(R);
    return cyclo_pow(z, u);
}

/// [OP] cyclo_substitute: evaluate a truncated T-series at T = pi. Requires
/// b_T >= e*a so the discarded tail has valuation >= a.
inline CycloElem cyclo_substitute(const TSeries& ts, const CycloRing& ring) {
    if (ts.p != ring.p) throw std::invalid_argument("cyclo_substitute: mixed primes");
    if (ts.b_T() < ring.e * ring.a)
        throw PrecisionError(
            "cyclo_substitute: insufficient T-truncation (need b_T >= e*a)");
    CycloRing R = ring;
    R.a = std::min(ring.a, ts.a);
    if (R.a < ring.a) R = CycloRing::make(ring.p, ring.n, R.a);
    CycloElem piv = CycloElem::pi(R);
    CycloElem acc = CycloElem::zero(R);
    for (int j = ts.b_T() - 1; j >= 0; --j) {
        acc = acc * piv;
        acc.c[0] = (acc.c[0] + ts.c[j] % R.mod) % R.mod;
    }
    return acc;
}

/// [OP] cyclo_valuation: min over the pi-adic expansion of
/// v_p(c_j) + j/e, exact because the candidates for distinct j never tie.
inline Rational cyclo_valuation(const CycloElem& x) {
    const CycloRing& R = x.ring;
    bool found = false;
    Rational best;
    for (int j = 0; j < R.e; ++j) {
        if (!x.c[j]) continue;
        int v = 0;
        u64 r = x.c[j];
        while (r % (u64)R.p == 0) {
            r /= (u64)R.p;
            ++v;
        }
        Rational cand((std::int64_t)v * R.e + j, R.e);
        if (!found || cand < best) {
            best = cand;
            found = true;
        }
    }
    if (!found)
        throw PrecisionError("cyclo_valuation: valuation below precision floor");
    return best;
}

/// Valuation with the precision floor reported instead of thrown; used by
/// degree detection where "zero to precision" is an expected outcome.
struct CycloVal {
    Rational v;
    bool at_floor;
};
inline CycloVal cyclo_valuation_or_floor(const CycloElem& x) {
    if (x.is_zero()) return {Rational(x.ring.a), true};
    return {cyclo_valuation(x), false};
}

/// [OP] galois_conjugate: the automorphism zeta -> zeta^u, gcd(u, p) = 1,
/// applied through 1 + pi -> (1 + pi)^u.
inline CycloElem galois_conjugate(const CycloElem& x, u64 u) {
    const CycloRing& R = x.ring;
    if (u % (u64)R.p == 0)
        throw std::invalid_argument("galois_conjugate: u not coprime to p");
    u64 pn = pow_u64((u64)R.p, R.n);
    CycloElem image = one_plus_pi_pow(R, u % pn) - CycloElem::from_scalar(R, 1);
    CycloElem acc = CycloElem::zero(R);
    for (int j = R.e - 1; j >= 0; --j) {
        acc = acc * image;
        acc.c[0] = (acc.c[0] + x.c[j]) % R.mod;
    }
    return acc;
}

}  // namespace zptower::padic
