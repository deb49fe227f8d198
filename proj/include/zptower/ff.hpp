#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace zptower::ff {

using u64 = std::uint64_t;

/// Coefficient vector over Z/p, lowest degree first. Used both for elements
/// of F_{p^r} (fixed length r) and for polynomials over F_p.
using FpVec = std::vector<std::uint8_t>;

inline bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Polynomials over F_p (prime field), used for field moduli.
// ---------------------------------------------------------------------------

inline void fp_trim(FpVec& v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
}

inline int fp_deg(const FpVec& v) { return (int)v.size() - 1; }

inline FpVec fp_mul(const FpVec& a, const FpVec& b, int p) {
    if (a.empty() || b.empty()) return {};
    FpVec c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (size_t j = 0; j < b.size(); ++j)
            c[i + j] = (std::uint8_t)((c[i + j] + a[i] * b[j]) % p);
    }
    fp_trim(c);
    return c;
}

/// Remainder of a by monic m.
inline FpVec fp_rem(FpVec a, const FpVec& m, int p) {
    fp_trim(a);
    int dm = fp_deg(m);
    while (fp_deg(a) >= dm) {
        int shift = fp_deg(a) - dm;
        int lead = a.back();
        for (int i = 0; i <= dm; ++i) {
            int v = a[shift + i] - lead * m[i] % p;
            a[shift + i] = (std::uint8_t)((v % p + p) % p);
        }
        fp_trim(a);
    }
    return a;
}

inline FpVec fp_mulmod(const FpVec& a, const FpVec& b, const FpVec& m, int p) {
    return fp_rem(fp_mul(a, b, p), m, p);
}

inline FpVec fp_powmod(FpVec base, u64 e, const FpVec& m, int p) {
    FpVec r{1};
    while (e) {
        if (e & 1) r = fp_mulmod(r, base, m, p);
        base = fp_mulmod(base, base, m, p);
        e >>= 1;
    }
    return r;
}

/// Decode the integer form sum c_i p^i of a monic degree-d polynomial's
/// non-leading coefficients; this is the enumeration (and "lex-least") order
/// used everywhere for reproducibility.
inline FpVec fp_monic_from_code(u64 code, int d, int p) {
    FpVec v(d + 1, 0);
    for (int i = 0; i < d; ++i) {
        v[i] = (std::uint8_t)(code % p);
        code /= p;
    }
    v[d] = 1;
    return v;
}

inline bool fp_is_irreducible(const FpVec& f, int p) {
    int d = fp_deg(f);
    if (d <= 0) return false;
    if (d == 1) return true;
    // Trial division by all monic polynomials of degree <= d/2.
    for (int e = 1; 2 * e <= d; ++e) {
        u64 count = 1;
        for (int i = 0; i < e; ++i) count *= (u64)p;
        for (u64 code = 0; code < count; ++code) {
            FpVec g = fp_monic_from_code(code, e, p);
            if (fp_rem(f, g, p).empty()) return false;
        }
    }
    return true;
}

inline FpVec fp_lex_least_irreducible(int p, int d) {
    if (d == 1) return FpVec{0, 1};  // x
    u64 count = 1;
    for (int i = 0; i < d; ++i) count *= (u64)p;
    for (u64 code = 0; code < count; ++code) {
        FpVec f = fp_monic_from_code(code, d, p);
        if (fp_is_irreducible(f, p)) return f;
    }
    throw std::logic_error("no irreducible polynomial found");  // unreachable
}

inline std::vector<u64> prime_factors_u64(u64 n) {
    std::vector<u64> fs;
    for (u64 d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            fs.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) fs.push_back(n);
    return fs;
}

/// Lex-least monic irreducible of degree d over F_p whose root generates the
/// multiplicative group of F_{p^d}.
inline FpVec fp_lex_least_primitive(int p, int d) {
    u64 order = 1;
    for (int i = 0; i < d; ++i) order *= (u64)p;
    --order;  // |F_{p^d}^x|
    auto factors = prime_factors_u64(order);
    u64 count = order + 1;
    for (u64 code = 0; code < count; ++code) {
        FpVec f = fp_monic_from_code(code, d, p);
        if (!fp_is_irreducible(f, p)) continue;
        if (f[0] == 0) continue;  // root 0 is never a generator
        FpVec y{0, 1};
        bool primitive = true;
        for (u64 q : factors) {
            FpVec t = fp_powmod(y, order / q, f, p);
            if (t.size() == 1 && t[0] == 1) { primitive = false; break; }
        }
        if (primitive) return f;
    }
    throw std::logic_error("no primitive polynomial found");  // unreachable
}

// ---------------------------------------------------------------------------
// F_q = F_{p^r} and polynomials over it.
// ---------------------------------------------------------------------------

/// Element of F_{p^r}: coefficient vector of length r over Z/p in the power
/// basis of the field modulus.
using FqElem = FpVec;

struct FieldCtx;
using FqPoly = std::vector<FqElem>;  // lowest degree first, trimmed

/// Arithmetic context for F_q = F_{p^r} = F_p[t]/(modulus).
struct FieldCtx {
    int p = 2;
    int r = 1;
    FpVec modulus;  // monic, degree r over F_p; x itself when r == 1
    u64 q = 2;      // p^r

    FqElem zero() const { return FqElem(r, 0); }
    FqElem one() const {
        FqElem e(r, 0);
        e[0] = 1;
        return e;
    }
    bool is_zero(const FqElem& a) const {
        return std::all_of(a.begin(), a.end(), [](std::uint8_t c) { return c == 0; });
    }

    FqElem add(const FqElem& a, const FqElem& b) const {
        FqElem c(r);
        for (int i = 0; i < r; ++i) c[i] = (std::uint8_t)((a[i] + b[i]) % p);
        return c;
    }
    FqElem sub(const FqElem& a, const FqElem& b) const {
        FqElem c(r);
        for (int i = 0; i < r; ++i) c[i] = (std::uint8_t)((a[i] - b[i] + p) % p);
        return c;
    }
    FqElem neg(const FqElem& a) const { return sub(zero(), a); }
    FqElem mul(const FqElem& a, const FqElem& b) const {
        FpVec prod = fp_mul(a, b, p);
        FpVec red = fp_rem(prod, modulus, p);
        red.resize(r, 0);
        return red;
    }
    FqElem pow(FqElem a, u64 e) const {
        FqElem res = one();
        while (e) {
            if (e & 1) res = mul(res, a);
            a = mul(a, a);
            e >>= 1;
        }
        return res;
    }
    FqElem inv(const FqElem& a) const {
        if (is_zero(a)) throw std::domain_error("F_q: inverse of zero");
        return pow(a, q - 2);
    }

    /// Absolute trace to F_p: sum of the p-power Frobenius iterates.
    int abs_trace(const FqElem& a) const {
        FqElem acc = zero();
        FqElem t = a;
        for (int i = 0; i < r; ++i) {
            acc = add(acc, t);
            t = pow(t, (u64)p);
        }
        return acc[0];
    }

    u64 encode(const FqElem& a) const {
        u64 code = 0;
        for (int i = r - 1; i >= 0; --i) code = code * p + a[i];
        return code;
    }
    FqElem decode(u64 code) const {
        FqElem a(r);
        for (int i = 0; i < r; ++i) {
            a[i] = (std::uint8_t)(code % p);
            code /= p;
        }
        return a;
    }
};

/// [OP] build_field: context for F_{p^r}; the modulus defaults to the
/// lex-least monic irreducible of degree r so results are reproducible.
inline FieldCtx build_field(int p, int r, const FpVec* modulus = nullptr) {
    if (!is_prime_u64((u64)p)) throw std::invalid_argument("build_field: p is not prime");
    if (r < 1) throw std::invalid_argument("build_field: r must be >= 1");
    FieldCtx ctx;
    ctx.p = p;
    ctx.r = r;
    if (modulus) {
        FpVec m = *modulus;
        fp_trim(m);
        if (fp_deg(m) != r || m.back() != 1)
            throw std::invalid_argument("build_field: modulus must be monic of degree r");
        if (!fp_is_irreducible(m, p))
            throw std::invalid_argument("build_field: modulus is reducible");
        ctx.modulus = m;
    } else {
        ctx.modulus = fp_lex_least_irreducible(p, r);
    }
    ctx.q = 1;
    for (int i = 0; i < r; ++i) ctx.q *= (u64)p;
    return ctx;
}

// --- polynomials over F_q ---

inline void fq_trim(const FieldCtx& ctx, FqPoly& f) {
    while (!f.empty() && ctx.is_zero(f.back())) f.pop_back();
}

inline int fq_deg(const FqPoly& f) { return (int)f.size() - 1; }

inline FqPoly fq_mul(const FieldCtx& ctx, const FqPoly& a, const FqPoly& b) {
    if (a.empty() || b.empty()) return {};
    FqPoly c(a.size() + b.size() - 1, ctx.zero());
    for (size_t i = 0; i < a.size(); ++i) {
        if (ctx.is_zero(a[i])) continue;
        for (size_t j = 0; j < b.size(); ++j)
            c[i + j] = ctx.add(c[i + j], ctx.mul(a[i], b[j]));
    }
    fq_trim(ctx, c);
    return c;
}

/// Remainder of a by monic m over F_q.
inline FqPoly fq_rem(const FieldCtx& ctx, FqPoly a, const FqPoly& m) {
    fq_trim(ctx, a);
    int dm = fq_deg(m);
    while (fq_deg(a) >= dm) {
        int shift = fq_deg(a) - dm;
        FqElem lead = a.back();
        for (int i = 0; i <= dm; ++i)
            a[shift + i] = ctx.sub(a[shift + i], ctx.mul(lead, m[i]));
        fq_trim(ctx, a);
    }
    return a;
}

inline FqElem fq_eval(const FieldCtx& ctx, const FqPoly& f, const FqElem& x) {
    FqElem acc = ctx.zero();
    for (int i = fq_deg(f); i >= 0; --i) acc = ctx.add(ctx.mul(acc, x), f[i]);
    return acc;
}

inline u64 fq_poly_code(const FieldCtx& ctx, const FqPoly& f, int d) {
    u64 code = 0;
    for (int i = d - 1; i >= 0; --i)
        code = code * ctx.q + ctx.encode(i < (int)f.size() ? f[i] : ctx.zero());
    return code;
}

inline FqPoly fq_monic_from_code(const FieldCtx& ctx, u64 code, int d) {
    FqPoly f(d + 1, ctx.zero());
    for (int i = 0; i < d; ++i) {
        f[i] = ctx.decode(code % ctx.q);
        code /= ctx.q;
    }
    f[d] = ctx.one();
    return f;
}

inline bool fq_is_irreducible(const FieldCtx& ctx, const FqPoly& f) {
    int d = fq_deg(f);
    if (d <= 0) return false;
    if (d == 1) return true;
    for (int e = 1; 2 * e <= d; ++e) {
        u64 count = 1;
        for (int i = 0; i < e; ++i) count *= ctx.q;
        for (u64 code = 0; code < count; ++code) {
            FqPoly g = fq_monic_from_code(ctx, code, e);
            if (fq_rem(ctx, f, g).empty()) return false;
        }
    }
    return true;
}

/// [OP] monic_irreducibles: all monic irreducibles of degree d over F_q, in
/// coefficient-code order (deterministic across runs).
inline std::vector<FqPoly> monic_irreducibles(const FieldCtx& ctx, int d) {
    if (d < 1) throw std::invalid_argument("monic_irreducibles: d must be >= 1");
    std::vector<FqPoly> out;
    u64 count = 1;
    for (int i = 0; i < d; ++i) count *= ctx.q;
    for (u64 code = 0; code < count; ++code) {
        FqPoly f = fq_monic_from_code(ctx, code, d);
        if (fq_is_irreducible(ctx, f)) out.push_back(f);
    }
    return out;
}

/// Where the tower lives: the affine line (ramified at infinity only) or the
/// torus G_m (ramified at 0 and infinity).
enum class Domain { AffineLine, Torus };

/// Closed point of the unramified locus U, identified with a monic
/// irreducible polynomial over F_q.
struct ClosedPoint {
    FqPoly minpoly;
    int degree = 1;
};

/// [OP] closed_points: all closed points of U of degree <= max_degree,
/// degree-major then code order. The point x is excluded on the torus.
inline std::vector<ClosedPoint> closed_points(const FieldCtx& ctx, Domain domain,
                                              int max_degree) {
    if (max_degree < 1) throw std::invalid_argument("closed_points: max_degree must be >= 1");
    std::vector<ClosedPoint> pts;
    for (int d = 1; d <= max_degree; ++d) {
        for (const FqPoly& f : monic_irreducibles(ctx, d)) {
            if (domain == Domain::Torus && d == 1 && ctx.is_zero(f[0])) continue;
            pts.push_back(ClosedPoint{f, d});
        }
    }
    return pts;
}

/// Count of monic irreducibles without enumerating, for cross-checks:
/// (1/d) sum_{e|d} mu(e) q^{d/e}.
inline u64 irreducible_count_necklace(u64 q, int d) {
    auto moebius = [](int n) {
        int m = 1;
        for (int f = 2; f * f <= n; ++f) {
            if (n % f == 0) {
                n /= f;
                if (n % f == 0) return 0;
                m = -m;
            }
        }
        if (n > 1) m = -m;
        return m;
    };
    std::int64_t total = 0;
    for (int e = 1; e <= d; ++e) {
        if (d % e) continue;
        int mu = moebius(e);
        if (!mu) continue;
        u64 power = 1;
        for (int i = 0; i < d / e; ++i) power *= q;
        total += mu * (std::int64_t)power;
    }
    return (u64)(total / d);
}

inline std::string fq_poly_str(const FieldCtx& ctx, const FqPoly& f, char var = 'x') {
    if (f.empty()) return "0";
    std::string s;
    for (int i = fq_deg(f); i >= 0; --i) {
        if (ctx.is_zero(f[i])) continue;
        if (!s.empty()) s += "+";
        std::string coeff;
        if (ctx.r == 1) {
            if (f[i][0] != 1 || i == 0) coeff = std::to_string((int)f[i][0]);
        } else {
            coeff = "[";
            for (int j = 0; j < ctx.r; ++j) {
                if (j) coeff += ",";
                coeff += std::to_string((int)f[i][j]);
            }
            coeff += "]";
        }
        if (i == 0) {
            s += coeff.empty() ? "1" : coeff;
        } else {
            s += coeff;
            s += var;
            if (i > 1) s += "^" + std::to_string(i);
        }
    }
    return s.empty() ? "0" : s;
}

}  // namespace zptower::ff
