#include <catch2/catch_amalgamated.hpp>

#include "zptower/lfun.hpp"

using namespace zptower;
using lfun::ClassicalL;
using lfun::TadicL;
using tower::TowerSpec;

namespace {

ff::FqPoly poly(const ff::FieldCtx& ctx, std::initializer_list<int> coeffs) {
    ff::FqPoly f;
    for (int c : coeffs) {
        auto e = ctx.zero();
        e[0] = (std::uint8_t)(c % ctx.p);
        f.push_back(e);
    }
    ff::fq_trim(ctx, f);
    return f;
}

TowerSpec flagship(int a = 8, int n_max = 2, int b_s = 0) {
    ff::FieldCtx f2 = ff::build_field(2, 1);
    tower::Precision prec;
    prec.a = a;
    prec.n_max = n_max;
    prec.b_s = b_s;
    return tower::make_tower_spec(f2, ff::Domain::AffineLine, poly(f2, {0, 0, 0, 1}), {},
                                  prec);
}

TowerSpec p3_square(int a = 8, int n_max = 2) {
    ff::FieldCtx f3 = ff::build_field(3, 1);
    tower::Precision prec;
    prec.a = a;
    prec.n_max = n_max;
    return tower::make_tower_spec(f3, ff::Domain::AffineLine, poly(f3, {0, 0, 1}), {},
                                  prec);
}

}  // namespace

TEST_CASE("tadic_l low-order coefficients of the running tower") {
    TadicL L = lfun::tadic_l(flagship());
    // s^0 coefficient is 1
    CHECK(L.series.sc[0].c[0] == 1);
    for (int j = 1; j < L.series.sc[0].b_T(); ++j) CHECK(L.series.sc[0].c[j] == 0);
    // s^1 coefficient is (1+T)^0 + (1+T)^1 = 2 + T
    CHECK(L.series.sc[1].c[0] == 2);
    CHECK(L.series.sc[1].c[1] == 1);
    for (int j = 2; j < L.series.sc[1].b_T(); ++j) CHECK(L.series.sc[1].c[j] == 0);
}

TEST_CASE("tadic_l at T=0 collapses to the zeta of U") {
    TadicL L = lfun::tadic_l(flagship());
    padic::u64 mod = L.series.sc[0].mod;
    padic::u64 qk = 1;
    for (int k = 0; k <= L.series.b_s(); ++k) {
        CHECK(L.series.sc[k].c[0] == qk % mod);  // coefficient of s^k is q^k
        qk = qk * 2 % mod;
    }
}

TEST_CASE("batch product equals the literal per-point reference product") {
    tower::Precision prec;
    prec.a = 6;
    prec.n_max = 1;
    prec.b_s = 4;
    ff::FieldCtx f2 = ff::build_field(2, 1);
    for (auto dom : {ff::Domain::AffineLine, ff::Domain::Torus}) {
        TowerSpec s = tower::make_tower_spec(
            f2, dom, poly(f2, {0, 1}), dom == ff::Domain::Torus ? poly(f2, {1}) : ff::FqPoly{},
            prec);
        TadicL fast = lfun::tadic_l(s);
        TadicL ref = lfun::tadic_l_reference(s);
        for (int k = 0; k <= fast.series.b_s(); ++k)
            CHECK(fast.series.sc[k].c == ref.series.sc[k].c);
    }
}

TEST_CASE("specialization at level 1 matches the layer-1 oracle") {
    TadicL L = lfun::tadic_l(flagship());
    ClassicalL C = lfun::specialize(L, 1);
    CHECK(C.ell == 2);
    // 1 + 0 s + 2 s^2: level-1 ring for p=2 is Z_2 itself (e = 1)
    CHECK(C.coeffs[0].c[0] == 1);
    CHECK(C.coeffs[1].c[0] == 0);
    CHECK(C.coeffs[2].c[0] == 2);

    auto Z = tower::layer_one_zeta_oracle(L.spec);
    REQUIRE((int)Z.coeffs.size() == C.ell + 1);
    padic::u64 mod = C.ring.mod;
    for (int k = 0; k <= C.ell; ++k) {
        padic::u64 expect = (padic::u64)(((Z.coeffs[k]) % (tower::i64)mod + (tower::i64)mod) %
                                         (tower::i64)mod);
        CHECK(C.coeffs[k].c[0] == expect);
    }
}

TEST_CASE("specialization at level 0 is the geometric zeta series") {
    TadicL L = lfun::tadic_l(flagship());
    ClassicalL C = lfun::specialize(L, 0);
    CHECK(C.ell == -1);
    padic::u64 qk = 1;
    for (int k = 0; k < (int)C.coeffs.size(); ++k) {
        CHECK(C.coeffs[k].c[0] == qk % C.ring.mod);
        qk = qk * 2 % C.ring.mod;
    }
}

TEST_CASE("degree detection refuses a too-small b_s") {
    TadicL L = lfun::tadic_l(flagship(8, 2, 2));  // b_s = 2 = ell(1)
    CHECK_THROWS_AS(lfun::specialize(L, 1), padic::PrecisionError);
}

TEST_CASE("l_at_one") {
    TadicL L = lfun::tadic_l(flagship());
    auto v1 = lfun::l_at_one(lfun::specialize(L, 1));
    CHECK(v1.c[0] == 3);
    CHECK(padic::cyclo_valuation(v1) == Rational(0));

    // trivial character on A^1: partial sums of 2^k converge to -1 in Z_2;
    // here b_s + 1 = 15 exceeds a = 8, so the sum is -1 mod 2^8
    TadicL L2 = lfun::tadic_l(flagship(8, 2, 14));
    auto v0 = lfun::l_at_one(lfun::specialize(L2, 0));
    CHECK(v0.c[0] == v0.ring.mod - 1);
}

TEST_CASE("cross-route agreement of the two evaluation orders at s=1") {
    for (TowerSpec s : {flagship(), p3_square()}) {
        TadicL L = lfun::tadic_l(s);
        tseries::TSeries L1 = lfun::l_rho_at_one(L);
        for (int n = 1; n <= s.prec.n_max; ++n) {
            ClassicalL C = lfun::specialize(L, n);
            auto direct = lfun::l_at_one(C);
            auto through_series = padic::cyclo_substitute(L1, C.ring);
            auto diff = direct - through_series;
            // agreement to working precision
            auto dv = padic::cyclo_valuation_or_floor(diff);
            CHECK((dv.at_floor || dv.v >= Rational(3 * s.prec.a, 4)));
        }
    }
}

TEST_CASE("conjugate products") {
    // p=2, n=1: a single primitive character, the product is L itself
    TadicL L = lfun::tadic_l(flagship());
    ClassicalL C = lfun::specialize(L, 1);
    auto P = lfun::conjugate_product(C);
    REQUIRE((int)P.size() == C.ell + 1);
    CHECK(P[0].residue == 1);
    CHECK(P[1].residue == 0);
    CHECK(P[2].residue == 2);

    // p=3, n=1: two conjugates, coefficients land in Z_3, degree phi * ell
    TadicL L3 = lfun::tadic_l(p3_square());
    ClassicalL C3 = lfun::specialize(L3, 1);
    CHECK(C3.ell == 1);
    auto P3 = lfun::conjugate_product(C3);
    CHECK((int)P3.size() == 2 * C3.ell + 1);
}

TEST_CASE("layer zeta matches the brute-force oracle at n=1") {
    for (TowerSpec s : {flagship(), p3_square()}) {
        TadicL L = lfun::tadic_l(s);
        auto P = lfun::layer_zeta(L, 1);
        auto Z = tower::layer_one_zeta_oracle(s);
        REQUIRE(P.size() == Z.coeffs.size());
        for (size_t k = 0; k < P.size(); ++k) {
            padic::u64 mod = P[k].mod;
            tower::i64 e = Z.coeffs[k] % (tower::i64)mod;
            if (e < 0) e += (tower::i64)mod;
            CHECK(P[k].residue == (padic::u64)e);
        }
        CHECK(lfun::layer_zeta(L, 0).size() == 1);  // P(X_0, s) = 1
    }
}

TEST_CASE("consecutive divisibility of layer zetas") {
    TadicL L = lfun::tadic_l(flagship());
    auto P1 = lfun::layer_zeta(L, 1);
    auto P2 = lfun::layer_zeta(L, 2);
    // P1 has unit constant term 1; divide from the bottom as power series.
    // Divisibility means the quotient is a polynomial of degree d2 - d1 and
    // multiplies back to P2 exactly mod p^a.
    size_t d1 = P1.size() - 1, d2 = P2.size() - 1;
    REQUIRE(P1[0].residue == 1);
    std::vector<padic::PadicInt> q(d2 + 1, padic::PadicInt(2, P1[0].a, 0));
    for (size_t k = 0; k <= d2; ++k) {
        padic::PadicInt acc = k < P2.size() ? P2[k] : padic::PadicInt(2, P1[0].a, 0);
        for (size_t j = 1; j <= std::min(k, d1); ++j) acc = acc - P1[j] * q[k - j];
        q[k] = acc;  // times inverse of P1[0] = 1
    }
    for (size_t k = d2 - d1 + 1; k <= d2; ++k) CHECK(q[k].residue == 0);
    for (size_t k = 0; k <= d2; ++k) {
        padic::PadicInt back(2, P1[0].a, 0);
        for (size_t j = 0; j <= std::min(k, d1); ++j)
            if (k - j <= d2 - d1) back = back + P1[j] * q[k - j];
        CHECK(back.residue == P2[k].residue);
    }
}

TEST_CASE("class number valuations") {
    TadicL L = lfun::tadic_l(flagship());
    CHECK(lfun::class_number_valuation(L, 0) == Rational(0));
    CHECK(lfun::class_number_valuation(L, 1) == Rational(0));  // h_1 = 3, v_2 = 0
    auto v2 = lfun::class_number_valuation(L, 2);
    CHECK(v2.is_integer());
    CHECK(v2 >= Rational(0));
}

TEST_CASE("newton polygon examples") {
    // 1 + 2 s^2 over Q_2: hull (0,0)-(2,1), slopes {1/2, 1/2}
    std::vector<padic::PadicInt> p1{{2, 8, 1}, {2, 8, 0}, {2, 8, 2}};
    auto np1 = lfun::newton_polygon(p1);
    REQUIRE(np1.slopes.size() == 2);
    CHECK(np1.slopes[0] == Rational(1, 2));
    CHECK(np1.slopes[1] == Rational(1, 2));
    REQUIRE(np1.vertices.size() == 2);
    CHECK(np1.vertices[0] == std::make_pair((tower::i64)0, Rational(0)));
    CHECK(np1.vertices[1] == std::make_pair((tower::i64)2, Rational(1)));

    // 1 - s: slopes {0}
    std::vector<padic::PadicInt> p2{{2, 8, 1}, {2, 8, -1}};
    auto np2 = lfun::newton_polygon(p2);
    REQUIRE(np2.slopes.size() == 1);
    CHECK(np2.slopes[0] == Rational(0));

    // 1 - 3s + 2s^2 over Q_2: slopes {0, 1}
    std::vector<padic::PadicInt> p3{{2, 8, 1}, {2, 8, -3}, {2, 8, 2}};
    auto np3 = lfun::newton_polygon(p3);
    REQUIRE(np3.slopes.size() == 2);
    CHECK(np3.slopes[0] == Rational(0));
    CHECK(np3.slopes[1] == Rational(1));

    // nonunit constant term is rejected
    std::vector<padic::PadicInt> bad{{2, 8, 2}, {2, 8, 1}};
    CHECK_THROWS_AS(lfun::newton_polygon(bad), std::invalid_argument);
}

TEST_CASE("newton polygon of the flagship level-1 L-function") {
    TadicL L = lfun::tadic_l(flagship());
    auto np = lfun::newton_polygon(lfun::specialize(L, 1));
    REQUIRE(np.slopes.size() == 2);
    CHECK(np.slopes[0] == Rational(1, 2));
    CHECK(np.slopes[1] == Rational(1, 2));
    CHECK(lfun::ramification_lower_bound(np) == 2);
}

TEST_CASE("ramification lower bound") {
    lfun::NewtonPolygon np;
    np.slopes = {Rational(1, 2), Rational(1, 2)};
    CHECK(lfun::ramification_lower_bound(np) == 2);
    np.slopes = {Rational(0), Rational(1)};
    CHECK(lfun::ramification_lower_bound(np) == 1);
    // second witness: v(L(chi_n,1)) = mu + lambda/e
    CHECK(lfun::ramification_lower_bound(np, Rational(1, 6)) == 6);
}

TEST_CASE("dlog identity: s L'/L equals the character power sums") {
    for (TowerSpec s : {flagship(8, 2, 7), p3_square(6, 1)}) {
        TadicL L = lfun::tadic_l(s);
        auto lhs = lfun::dlog_coefficients(L);
        int kmax = std::min(6, L.series.b_s());
        auto rhs = lfun::character_power_sums(s, kmax);
        for (int k = 1; k <= kmax; ++k) CHECK(lhs[k].c == rhs[k].c);
    }
}

TEST_CASE("truncation stability") {
    // increasing b_s leaves previously retained coefficients unchanged
    TadicL small = lfun::tadic_l(flagship(8, 2, 6));
    TadicL large = lfun::tadic_l(flagship(8, 2, 12));
    for (int k = 0; k <= 6; ++k) CHECK(small.series.sc[k].c == large.series.sc[k].c);

    // factors of degree beyond b_s cannot affect retained coefficients
    TadicL same = lfun::tadic_l(flagship(8, 2, 6), 11);
    for (int k = 0; k <= 6; ++k) CHECK(same.series.sc[k].c == small.series.sc[k].c);
}

TEST_CASE("weil range of slopes") {
    for (TowerSpec s : {flagship(), p3_square()}) {
        TadicL L = lfun::tadic_l(s);
        for (int n = 1; n <= s.prec.n_max; ++n) {
            auto np = lfun::newton_polygon(lfun::specialize(L, n));
            for (const auto& sl : np.slopes) {
                CHECK(sl >= Rational(0));
                CHECK(sl <= Rational(s.ctx.r));
            }
        }
    }
}

TEST_CASE("the layer-1 oracle polynomial has the weil shape") {
    for (TowerSpec s : {flagship(), p3_square()}) {
        auto Z = tower::layer_one_zeta_oracle(s);
        REQUIRE((int)Z.coeffs.size() == Z.genus2 + 1);
        CHECK(Z.coeffs[0] == 1);
        std::vector<padic::PadicInt> P;
        for (auto c : Z.coeffs) P.emplace_back(s.ctx.p, s.prec.a, c);
        auto np = lfun::newton_polygon(P);
        CHECK((int)np.slopes.size() == Z.genus2);
        for (const auto& sl : np.slopes) {
            CHECK(sl >= Rational(0));
            CHECK(sl <= Rational(s.ctx.r));
        }
    }
}
