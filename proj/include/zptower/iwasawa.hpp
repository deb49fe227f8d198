#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "zptower/lfun.hpp"
#include "zptower/rational.hpp"
#include "zptower/tseries.hpp"

namespace zptower::iwasawa {

using i64 = std::int64_t;
using lfun::ClassicalL;
using lfun::TadicL;
using padic::PrecisionError;
using tower::TowerSpec;
using tseries::TSeries;

struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// (mu, lambda, nu) with provenance. The preparation route never produces
/// nu; the fit route marks `stable` when the difference equation holds for
/// at least two consecutive n beyond the ones used to solve.
struct IwasawaInvariants {
    int mu = 0;
    int lambda = 0;
    std::optional<i64> nu;
    enum class Source { prep, fit } source = Source::prep;
    bool stable = false;
};

/// [OP] invariants_from_prep: mu and lambda of the Weierstrass form of
/// L_rho(T, 1).
inline IwasawaInvariants invariants_from_prep(const TSeries& L1) {
    auto prep = tseries::weierstrass_prepare(L1);
    IwasawaInvariants inv;
    inv.mu = prep.mu;
    inv.lambda = prep.lambda;
    inv.source = IwasawaInvariants::Source::prep;
    inv.stable = true;
    return inv;
}

/// [OP] invariants_from_fit: solve v_p(h_n) = mu p^n + lambda n + nu from
/// consecutive differences Delta_n = mu p^n (p-1) + lambda, starting at
/// n = n_start. Requires >= 4 consecutive values; every further difference
/// must confirm the solution.
inline IwasawaInvariants invariants_from_fit(const std::vector<Rational>& vals, i64 p,
                                             int n_start = 0) {
    if (vals.size() < 4)
        throw FitError("invariants_from_fit: need at least 4 consecutive values");
    std::vector<Rational> delta;
    for (size_t i = 0; i + 1 < vals.size(); ++i) delta.push_back(vals[i + 1] - vals[i]);

    i64 pn0 = 1;
    for (int i = 0; i < n_start; ++i) pn0 *= p;
    // Delta_{n0+1} - Delta_{n0} = mu p^{n0} (p-1)^2
    Rational mu_r = (delta[1] - delta[0]) / Rational(pn0 * (p - 1) * (p - 1));
    Rational lam_r = delta[0] - mu_r * Rational(pn0 * (p - 1));
    if (!mu_r.is_integer() || !lam_r.is_integer() || mu_r < Rational(0) ||
        lam_r < Rational(0))
        throw FitError("invariants_from_fit: not yet in the stable range");
    IwasawaInvariants inv;
    inv.mu = (int)mu_r.num();
    inv.lambda = (int)lam_r.num();
    inv.source = IwasawaInvariants::Source::fit;

    // confirm on the remaining differences
    i64 pn = pn0;
    for (size_t i = 0; i < delta.size(); ++i) {
        Rational expect = mu_r * Rational(pn * (p - 1)) + lam_r;
        if (delta[i] != expect)
            throw FitError("invariants_from_fit: not yet in the stable range");
        pn *= p;
    }
    inv.stable = delta.size() >= 3;

    Rational nu_r = vals[0] - mu_r * Rational(pn0) - lam_r * Rational(n_start);
    if (!nu_r.is_integer())
        throw FitError("invariants_from_fit: not yet in the stable range");
    inv.nu = nu_r.num();
    return inv;
}

/// Per-level record of the verification run. identity_ok and conj4_ok are
/// unset when the theorem's hypothesis p^{n-1}(p-1) > lambda (resp.
/// lambda != 0) does not hold at this level: vacuous, not failed.
struct PerLevel {
    int n = 0;
    int ell = 0;
    std::vector<Rational> slopes;
    bool slopes_symmetric = false;  // under s -> r - s; observed, never asserted
    Rational v_L1;  // v_p(L(chi_n, 1))
    std::optional<bool> identity_ok;
    bool cross_route_ok = true;
    bool galois_ok = true;
    i64 ram_lower_bound = 1;
    std::optional<i64> conj4_threshold;
    std::optional<bool> conj4_ok;
    Rational v_h;  // v_p(h_n), telescoping route
    bool telescoping_ok = true;
};

struct VerificationReport {
    int mu = 0;
    int lambda = 0;
    bool lambda_nonzero = false;
    std::optional<Rational> c;  // (1 - 1/p) / lambda when lambda != 0
    std::optional<i64> nu;      // fit route only
    std::vector<PerLevel> per_n;
    bool telescoping_ok = true;
    std::optional<bool> routes_agree;  // unset when the fit is unavailable
    bool all_ok = true;

    std::vector<std::string> failures;  // human-readable failed checks
};

/// Test-only hooks: corrupt one coefficient of L_rho(T,1) by p^{floor(a/2)}
/// before preparation and the per-level checks (negative control).
struct VerifyOptions {
    std::optional<int> corrupt_l1_index;
};

/// [OP] verify_theorem: run the full pipeline and check, per level n with
/// p^{n-1}(p-1) > lambda, the valuation identity
///   v_p(L(chi_n,1)) = mu + lambda / (p^{n-1}(p-1))
/// as exact rationals; the telescoping class-number identity against the
/// layer-zeta route; Galois invariance of slopes; and, when lambda != 0, the
/// ramification lower bound against ceil((1 - 1/p) p^n / lambda).
inline VerificationReport verify_theorem(const TadicL& L, const VerifyOptions& opt = {}) {
    VerificationReport rep;
    const TowerSpec& spec = L.spec;
    const auto& pr = spec.prec;

    std::vector<ClassicalL> levels;  // index n-1 for n = 1..n_max
    for (int n = 1; n <= pr.n_max; ++n) levels.push_back(lfun::specialize(L, n));

    // L_rho(T, 1) = sum of the s-coefficients; b_s > ell(n_max) is already
    // certified by the successful degree detection at n_max.
    TSeries L1 = L.series.sc[0];
    for (size_t k = 1; k < L.series.sc.size(); ++k) L1 = L1 + L.series.sc[k];
    if (opt.corrupt_l1_index) {
        int j = *opt.corrupt_l1_index;
        padic::u64 bump = padic::pow_u64((padic::u64)spec.p(), pr.a / 2);
        L1.c[j] = (L1.c[j] + bump) % L1.mod;
    }

    auto prep = tseries::weierstrass_prepare(L1);
    rep.mu = prep.mu;
    rep.lambda = prep.lambda;
    rep.lambda_nonzero = prep.lambda != 0;
    if (rep.lambda_nonzero)
        rep.c = Rational(spec.p() - 1, spec.p() * (i64)rep.lambda);

    auto fail = [&rep](const std::string& what) {
        rep.all_ok = false;
        rep.failures.push_back(what);
    };

    std::vector<padic::PadicInt> zeta_poly{padic::PadicInt(spec.p(), pr.a, 1)};
    Rational telescope(0);
    i64 prev_bound = 0;

    for (int n = 1; n <= pr.n_max; ++n) {
        const ClassicalL& C = levels[n - 1];
        PerLevel lvl;
        lvl.n = n;
        lvl.ell = C.ell;
        i64 e_n = spec.e_of(n);

        auto np = lfun::newton_polygon(C);
        lvl.slopes = np.slopes;
        lvl.slopes_symmetric = true;
        for (size_t i = 0; i < np.slopes.size(); ++i)
            if (np.slopes[i] + np.slopes[np.slopes.size() - 1 - i] != Rational(spec.ctx.r))
                lvl.slopes_symmetric = false;

        padic::CycloElem value = lfun::l_at_one(C);
        lvl.v_L1 = padic::cyclo_valuation(value);

        // valuation identity, exact rationals, when e(n) > lambda
        if (e_n > rep.lambda) {
            Rational expect = Rational(rep.mu) + Rational(rep.lambda, e_n);
            lvl.identity_ok = (lvl.v_L1 == expect);
            if (!*lvl.identity_ok)
                fail("valuation identity at n=" + std::to_string(n) + ": got " +
                     lvl.v_L1.str() + ", expected " + expect.str());
        }

        // cross-route: L_rho(T,1)|_{T=t_n} must agree with L(chi_n, 1)
        {
            auto through = padic::cyclo_substitute(L1, C.ring);
            auto dv = padic::cyclo_valuation_or_floor(value - through);
            lvl.cross_route_ok = dv.at_floor || dv.v >= Rational(3 * pr.a, 4);
            if (!lvl.cross_route_ok)
                fail("cross-route disagreement at s=1, n=" + std::to_string(n));
        }

        // Galois invariance: identical polygon and degree for every
        // primitive character of level n
        {
            padic::u64 pn = padic::pow_u64((padic::u64)spec.p(), n);
            for (padic::u64 u = 2; u < pn && lvl.galois_ok; ++u) {
                if (u % (padic::u64)spec.p() == 0) continue;
                ClassicalL conj = C;
                for (auto& cf : conj.coeffs) cf = padic::galois_conjugate(cf, u);
                auto np2 = lfun::newton_polygon(conj);
                lvl.galois_ok = np2.slopes == np.slopes && np2.vertices == np.vertices;
            }
            if (!lvl.galois_ok)
                fail("Galois invariance of slopes fails at n=" + std::to_string(n));
        }

        lvl.ram_lower_bound = lfun::ramification_lower_bound(np, lvl.v_L1);

        if (rep.lambda_nonzero && e_n > rep.lambda) {
            // ceil(c p^n) with c = (1 - 1/p)/lambda, i.e. ceil(e(n)/lambda)
            i64 thr = (e_n + rep.lambda - 1) / rep.lambda;
            lvl.conj4_threshold = thr;
            lvl.conj4_ok = lvl.ram_lower_bound >= thr;
            if (!*lvl.conj4_ok)
                fail("ramification bound below c*p^n at n=" + std::to_string(n));
            if (lvl.ram_lower_bound < prev_bound)
                fail("ramification bounds not monotone at n=" + std::to_string(n));
            prev_bound = lvl.ram_lower_bound;
        }

        // telescoping class-number identity against the layer-zeta route
        telescope += Rational(e_n) * lvl.v_L1;
        lvl.v_h = telescope;
        {
            auto Q = lfun::conjugate_product(C);
            std::vector<padic::PadicInt> next(zeta_poly.size() + Q.size() - 1,
                                              padic::PadicInt(spec.p(), pr.a, 0));
            for (size_t i = 0; i < zeta_poly.size(); ++i)
                for (size_t k = 0; k < Q.size(); ++k)
                    next[i + k] = next[i + k] + zeta_poly[i] * Q[k];
            zeta_poly = std::move(next);

            padic::PadicInt at1(spec.p(), pr.a, 0);
            for (const auto& cf : zeta_poly) at1 = at1 + cf;
            auto v = at1.valuation();
            bool ok = !v.at_floor && Rational(v.v) == telescope &&
                      telescope.is_integer() && telescope >= Rational(0);
            lvl.telescoping_ok = ok;
            if (!ok) {
                rep.telescoping_ok = false;
                fail("telescoping class-number identity fails at n=" + std::to_string(n));
            }
        }

        rep.per_n.push_back(std::move(lvl));
    }

    // fit route needs v_p(h_n) for n = 0..n_max with n_max >= 3
    if (pr.n_max >= 3) {
        std::vector<Rational> vals{Rational(0)};
        for (const auto& lvl : rep.per_n) vals.push_back(lvl.v_h);
        try {
            auto fit = invariants_from_fit(vals, spec.p(), 0);
            rep.nu = fit.nu;
            rep.routes_agree = fit.mu == rep.mu && fit.lambda == rep.lambda;
            if (!*rep.routes_agree) fail("prep and fit routes disagree on (mu, lambda)");
        } catch (const FitError&) {
            rep.routes_agree = std::nullopt;  // not yet in the stable range
        }
    }

    return rep;
}

inline VerificationReport verify_theorem(const TowerSpec& spec,
                                         const VerifyOptions& opt = {}) {
    return verify_theorem(lfun::tadic_l(spec), opt);
}

}  // namespace zptower::iwasawa
