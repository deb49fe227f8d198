#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "zptower/cyclo.hpp"
#include "zptower/ff.hpp"
#include "zptower/rational.hpp"
#include "zptower/tower.hpp"
#include "zptower/tseries.hpp"

namespace zptower::lfun {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using padic::CycloElem;
using padic::CycloRing;
using padic::PadicInt;
using padic::PrecisionError;
using tower::TowerSpec;
using tseries::BiSeries;
using tseries::TSeries;

/// The T-adic L-function of a tower, exact mod (p^a, T^{b_T}, s^{b_s+1}).
struct TadicL {
    BiSeries series;
    TowerSpec spec;
    int D = 0;  // Euler factors of degree <= D included
};

/// [OP] tadic_l: product of the reciprocal Euler factors over all closed
/// points of degree <= b_s (factors of higher degree are 1 mod s^{b_s+1}).
inline TadicL tadic_l(const TowerSpec& spec, std::optional<int> D_override = {}) {
    const auto& pr = spec.prec;
    int D = D_override.value_or(pr.b_s);
    tseries::BinomialTable table(spec.p(), pr.a, pr.b_T, pr.a + pr.guard);
    BiSeries acc = BiSeries::one(spec.p(), pr.a, pr.b_T, pr.b_s);
    tower::for_each_point_frobenius(spec, std::min(D, pr.b_s),
                                    [&](int d, const PadicInt& c) {
                                        TSeries u = tseries::binomial_power(c, table);
                                        tseries::mul_euler_factor_inplace(acc, u, d);
                                    });
    return TadicL{std::move(acc), spec, D};
}

/// Literal per-point product through frobenius_value and euler_expand; the
/// reference route for small truncations.
inline TadicL tadic_l_reference(const TowerSpec& spec) {
    const auto& pr = spec.prec;
    tseries::BinomialTable table(spec.p(), pr.a, pr.b_T, pr.a + pr.guard);
    BiSeries acc = BiSeries::one(spec.p(), pr.a, pr.b_T, pr.b_s);
    for (const auto& pt : ff::closed_points(spec.ctx, spec.domain, pr.b_s)) {
        PadicInt c = tower::frobenius_value(spec, pt);
        acc = acc * tseries::euler_expand(c, pt.degree, pr.b_s, pr.b_T, table);
    }
    return TadicL{std::move(acc), spec, pr.b_s};
}

/// L(chi_n, s) with cyclotomic coefficients: the specialization of the
/// T-adic L-function at the classical point t_n. For n >= 1 the polynomial
/// degree ell(n) is detected by the valuation-margin rule; for n = 0 (the
/// trivial character, the zeta of U) no degree is detected and ell = -1.
struct ClassicalL {
    int n = 0;
    CycloRing ring;
    std::vector<CycloElem> coeffs;
    int ell = -1;

    int retained() const { return ell >= 0 ? ell : (int)coeffs.size() - 1; }
};

/// Polynomial-degree detection by the valuation-margin rule: the degree is
/// the largest index whose coefficient does not vanish to precision, and
/// every tail coefficient must sit at least a/2 above it. A thin margin
/// raises a precision error instead of committing to a degree.
inline int detect_degree(const std::vector<CycloElem>& coeffs, int a) {
    int b_s = (int)coeffs.size() - 1;
    Rational half(a, 2);
    std::vector<padic::CycloVal> vals;
    for (const auto& c : coeffs) vals.push_back(padic::cyclo_valuation_or_floor(c));

    int ell = -1;
    for (int k = b_s; k >= 0; --k) {
        if (!vals[k].at_floor && vals[k].v < half) {
            ell = k;
            break;
        }
    }
    if (ell < 0 || ell == b_s)
        throw PrecisionError("detect_degree: degree detection inconclusive; raise b_s or a");
    for (int k = ell + 1; k <= b_s; ++k) {
        if (vals[k].v - vals[ell].v < half)
            throw PrecisionError(
                "detect_degree: degree detection inconclusive; raise b_s or a");
    }
    return ell;
}

/// [OP] specialize. Tail coefficients past the detected degree must sit at
/// least a/2 above the leading retained coefficient's valuation; anything
/// closer raises a precision error.
inline ClassicalL specialize(const TadicL& L, int n) {
    const auto& pr = L.spec.prec;
    if (n < 0) throw std::invalid_argument("specialize: n must be >= 0");
    if (n > pr.n_max)
        throw PrecisionError(
            "specialize: n exceeds the profile's n_max (b_T is sized for n_max); "
            "rerun with n_max >= " +
            std::to_string(n));
    ClassicalL C;
    C.n = n;
    C.ring = CycloRing::make(L.spec.p(), n, pr.a);
    for (const TSeries& ts : L.series.sc)
        C.coeffs.push_back(padic::cyclo_substitute(ts, C.ring));
    if (n == 0) return C;
    C.ell = detect_degree(C.coeffs, pr.a);
    return C;
}

/// [OP] l_at_one: the value L(chi_n, 1), the sum of the retained
/// coefficients.
inline CycloElem l_at_one(const ClassicalL& C) {
    CycloElem acc = CycloElem::zero(C.ring);
    for (int k = 0; k <= C.retained(); ++k) acc = acc + C.coeffs[k];
    return acc;
}

/// [OP] l_rho_at_one: sum_{k <= b_s} L_k(T). The contract is agreement with
/// the finite sums at every classical point t_n, n <= n_max, which requires
/// b_s to exceed the detected ell(n_max).
inline TSeries l_rho_at_one(const TadicL& L) {
    ClassicalL top = specialize(L, L.spec.prec.n_max);  // throws if b_s <= ell(n_max)
    TSeries sum = L.series.sc[0];
    for (size_t k = 1; k < L.series.sc.size(); ++k) sum = sum + L.series.sc[k];
    (void)top;
    return sum;
}

/// [OP] conjugate_product: product over all primitive characters of level n,
/// i.e. over u in (Z/p^n)^x of the conjugated polynomials. Coefficients are
/// Galois-fixed, hence in Z_p to precision; violating that is an internal
/// error, not a data condition.
inline std::vector<PadicInt> conjugate_product(const ClassicalL& C) {
    if (C.n < 1) throw std::invalid_argument("conjugate_product: level must be >= 1");
    if (C.ell < 0) throw std::invalid_argument("conjugate_product: degree not detected");
    const CycloRing& R = C.ring;
    u64 pn = padic::pow_u64((u64)R.p, C.n);

    std::vector<CycloElem> prod{CycloElem::from_scalar(R, 1)};
    for (u64 u = 1; u < pn; ++u) {
        if (u % (u64)R.p == 0) continue;
        std::vector<CycloElem> factor;
        for (int k = 0; k <= C.ell; ++k)
            factor.push_back(padic::galois_conjugate(C.coeffs[k], u));
        std::vector<CycloElem> next(prod.size() + factor.size() - 1,
                                    CycloElem::zero(R));
        for (size_t i = 0; i < prod.size(); ++i)
            for (size_t j = 0; j < factor.size(); ++j)
                next[i + j] = next[i + j] + prod[i] * factor[j];
        prod = std::move(next);
    }

    Rational half(R.a, 2);
    std::vector<PadicInt> out;
    for (const auto& c : prod) {
        for (int j = 1; j < R.e; ++j) {
            if (!c.c[j]) continue;
            int v = 0;
            u64 r = c.c[j];
            while (r % (u64)R.p == 0) {
                r /= (u64)R.p;
                ++v;
            }
            if (Rational(v) < half)
                throw std::logic_error(
                    "conjugate_product: coefficients not Galois-fixed to precision");
        }
        out.push_back(PadicInt::from_residue(R.p, R.a, c.c[0]));
    }
    return out;
}

/// [OP] layer_zeta: P(X_n, s) mod p^a as the product of the primitive parts
/// of levels 1..n (P(X_0, s) = 1 over the base P^1).
inline std::vector<PadicInt> layer_zeta(const TadicL& L, int n) {
    std::vector<PadicInt> P{PadicInt(L.spec.p(), L.spec.prec.a, 1)};
    for (int j = 1; j <= n; ++j) {
        auto Q = conjugate_product(specialize(L, j));
        std::vector<PadicInt> next(P.size() + Q.size() - 1,
                                   PadicInt(L.spec.p(), L.spec.prec.a, 0));
        for (size_t i = 0; i < P.size(); ++i)
            for (size_t k = 0; k < Q.size(); ++k) next[i + k] = next[i + k] + P[i] * Q[k];
        P = std::move(next);
    }
    return P;
}

/// [OP] class_number_valuation: v_p(h_n) by the telescoping identity
/// sum_{k<=n} p^{k-1}(p-1) v_p(L(chi_k, 1)), with v_p(h_0) = 0 over P^1.
inline Rational class_number_valuation(const TadicL& L, int n) {
    Rational acc(0);
    for (int k = 1; k <= n; ++k) {
        CycloElem v = l_at_one(specialize(L, k));
        Rational val;
        try {
            val = padic::cyclo_valuation(v);
        } catch (const PrecisionError&) {
            throw PrecisionError(
                "class_number_valuation: L(chi_k,1) below the precision floor; raise precision");
        }
        acc += Rational(L.spec.e_of(k)) * val;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Newton polygons.
// ---------------------------------------------------------------------------

struct NewtonPolygon {
    std::vector<std::pair<i64, Rational>> vertices;
    std::vector<Rational> slopes;  // with multiplicity; size = degree
};

namespace detail {

struct HullPoint {
    i64 x;
    Rational y;
    bool at_floor;
};

inline bool turns_up(const HullPoint& a, const HullPoint& b, const HullPoint& c) {
    // true when b lies on or above the segment a-c (so b is not a vertex)
    Rational lhs = (b.y - a.y) * Rational(c.x - b.x);
    Rational rhs = (c.y - b.y) * Rational(b.x - a.x);
    return lhs >= rhs;
}

inline NewtonPolygon hull_from_points(std::vector<HullPoint> pts) {
    if (pts.empty() || pts[0].y != Rational(0) || pts[0].at_floor)
        throw std::invalid_argument("newton_polygon: constant term must be 1");
    std::vector<HullPoint> stack;
    for (const auto& p : pts) {
        while (stack.size() >= 2 &&
               turns_up(stack[stack.size() - 2], stack[stack.size() - 1], p))
            stack.pop_back();
        stack.push_back(p);
    }
    for (const auto& v : stack) {
        if (v.at_floor)
            throw PrecisionError(
                "newton_polygon: hull vertex at the precision floor; raise precision");
    }
    NewtonPolygon np;
    for (const auto& v : stack) np.vertices.push_back({v.x, v.y});
    for (size_t i = 1; i < stack.size(); ++i) {
        Rational slope = (stack[i].y - stack[i - 1].y) / Rational(stack[i].x - stack[i - 1].x);
        for (i64 k = 0; k < stack[i].x - stack[i - 1].x; ++k) np.slopes.push_back(slope);
    }
    return np;
}

}  // namespace detail

/// [OP] newton_polygon of a classical L-function: lower hull of
/// (i, v(a_i)) in the value group (1/e) Z.
inline NewtonPolygon newton_polygon(const ClassicalL& C) {
    if (C.ell < 0) throw std::invalid_argument("newton_polygon: degree not detected");
    std::vector<detail::HullPoint> pts;
    for (int k = 0; k <= C.ell; ++k) {
        auto v = padic::cyclo_valuation_or_floor(C.coeffs[k]);
        pts.push_back({k, v.v, v.at_floor});
    }
    return detail::hull_from_points(std::move(pts));
}

/// Newton polygon of a polynomial over Z_p (integer valuations).
inline NewtonPolygon newton_polygon(const std::vector<PadicInt>& poly) {
    std::vector<detail::HullPoint> pts;
    for (size_t k = 0; k < poly.size(); ++k) {
        auto v = poly[k].valuation();
        pts.push_back({(i64)k, Rational(v.v), v.at_floor});
    }
    return detail::hull_from_points(std::move(pts));
}

/// [OP] ramification_lower_bound: any field containing an element of
/// valuation a/b in lowest terms has ramification index divisible by b, so
/// the lcm of the slope denominators (and of the denominator of v(L(chi,1)),
/// when supplied) bounds [Q_{p,n} : Q_p]^ram from below.
inline i64 ramification_lower_bound(const NewtonPolygon& np,
                                    const std::optional<Rational>& v1 = {}) {
    i64 l = 1;
    for (const auto& s : np.slopes) l = lcm_i64(l, s.den());
    if (v1) l = std::max(l, v1->den());
    return l;
}

// ---------------------------------------------------------------------------
// The division-free dlog / character-sum identity.
// ---------------------------------------------------------------------------

/// Coefficients of s L'/L in s, computed without division (L has constant
/// coefficient 1).
inline std::vector<TSeries> dlog_coefficients(const TadicL& L) {
    BiSeries num = tseries::s_dlog_numerator(L.series);
    BiSeries inv = tseries::s_inverse(L.series);
    BiSeries quot = num * inv;
    return quot.sc;
}

/// S_k(T) = sum over alpha in U(F_{q^k}) of (1+T)^{c_k(alpha)}, by direct
/// enumeration; the independent side of the dlog identity.
inline std::vector<TSeries> character_power_sums(const TowerSpec& spec, int kmax) {
    const auto& pr = spec.prec;
    tseries::BinomialTable table(spec.p(), pr.a, pr.b_T, pr.a + pr.guard);
    std::vector<TSeries> S;
    S.push_back(TSeries::zero(spec.p(), pr.a, pr.b_T));  // index 0 unused
    for (int k = 1; k <= kmax; ++k) {
        TSeries acc = TSeries::zero(spec.p(), pr.a, pr.b_T);
        tower::for_each_element_frobenius(spec, k, [&](const PadicInt& c) {
            acc = acc + tseries::binomial_power(c, table);
        });
        S.push_back(acc);
    }
    return S;
}

}  // namespace zptower::lfun
