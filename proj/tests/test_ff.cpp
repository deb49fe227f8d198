#include <catch2/catch_amalgamated.hpp>

#include "zptower/ff.hpp"

using namespace zptower;
using ff::FieldCtx;
using ff::FqPoly;

namespace {

ff::FqPoly parse_poly(const FieldCtx& ctx, std::initializer_list<int> coeffs) {
    FqPoly f;
    for (int c : coeffs) {
        auto e = ctx.zero();
        e[0] = (std::uint8_t)(c % ctx.p);
        f.push_back(e);
    }
    ff::fq_trim(ctx, f);
    return f;
}

// x^{q^e} mod g via repeated q-th powering in F_q[x]/(g); independent of the
// trial-division test used by the library.
FqPoly frob_power_x(const FieldCtx& ctx, const FqPoly& g, int e) {
    FqPoly x{ctx.zero(), ctx.one()};
    FqPoly acc = x;
    for (int i = 0; i < e; ++i) {
        FqPoly next{ctx.one()};  // acc^q by repeated squaring on the exponent q
        ff::u64 exp = ctx.q;
        FqPoly base = acc;
        while (exp) {
            if (exp & 1) next = ff::fq_rem(ctx, ff::fq_mul(ctx, next, base), g);
            base = ff::fq_rem(ctx, ff::fq_mul(ctx, base, base), g);
            exp >>= 1;
        }
        acc = next;
    }
    return acc;
}

}  // namespace

TEST_CASE("build_field basics") {
    FieldCtx f2 = ff::build_field(2, 1);
    CHECK(f2.q == 2);
    CHECK(f2.modulus == ff::FpVec{0, 1});

    ff::FpVec m{1, 1, 1};  // x^2 + x + 1
    FieldCtx f4 = ff::build_field(2, 2, &m);
    CHECK(f4.q == 4);
    // omega^2 = omega + 1
    auto omega = f4.decode(2);  // the class of x
    auto sq = f4.mul(omega, omega);
    CHECK(sq == f4.add(omega, f4.one()));
    // the default modulus for degree 2 over F_2 is the same polynomial
    FieldCtx f4d = ff::build_field(2, 2);
    CHECK(f4d.modulus == m);

    CHECK_THROWS_AS(ff::build_field(4, 1), std::invalid_argument);
    ff::FpVec red{1, 0, 1};  // x^2 + 1 = (x+1)^2 over F_2
    CHECK_THROWS_AS(ff::build_field(2, 2, &red), std::invalid_argument);
}

TEST_CASE("monic irreducibles over F_2") {
    FieldCtx f2 = ff::build_field(2, 1);
    auto d1 = ff::monic_irreducibles(f2, 1);
    REQUIRE(d1.size() == 2);  // x, x+1
    CHECK(d1[0] == parse_poly(f2, {0, 1}));
    CHECK(d1[1] == parse_poly(f2, {1, 1}));

    auto d2 = ff::monic_irreducibles(f2, 2);
    REQUIRE(d2.size() == 1);
    CHECK(d2[0] == parse_poly(f2, {1, 1, 1}));

    auto d4 = ff::monic_irreducibles(f2, 4);
    CHECK(d4.size() == 3);  // (16 - 4)/4 by the necklace formula
    CHECK(ff::irreducible_count_necklace(2, 4) == 3);
}

TEST_CASE("degree accounting: sum over e|d of e*N(e) equals q^d") {
    for (int q_spec : {2, 3, 4}) {
        FieldCtx ctx = q_spec == 4 ? ff::build_field(2, 2) : ff::build_field(q_spec, 1);
        for (int d = 1; d <= 6; ++d) {
            ff::u64 total = 0;
            for (int e = 1; e <= d; ++e) {
                if (d % e) continue;
                auto irr = ff::monic_irreducibles(ctx, e);
                CHECK(irr.size() == ff::irreducible_count_necklace(ctx.q, e));
                total += (ff::u64)e * irr.size();
            }
            ff::u64 qd = 1;
            for (int i = 0; i < d; ++i) qd *= ctx.q;
            CHECK(total == qd);
        }
    }
}

TEST_CASE("closed points") {
    FieldCtx f2 = ff::build_field(2, 1);
    auto a1 = ff::closed_points(f2, ff::Domain::AffineLine, 1);
    REQUIRE(a1.size() == 2);
    CHECK(a1[0].minpoly == parse_poly(f2, {0, 1}));
    CHECK(a1[1].minpoly == parse_poly(f2, {1, 1}));

    auto gm = ff::closed_points(f2, ff::Domain::Torus, 2);
    REQUIRE(gm.size() == 2);
    CHECK(gm[0].minpoly == parse_poly(f2, {1, 1}));
    CHECK(gm[1].minpoly == parse_poly(f2, {1, 1, 1}));

    FieldCtx f3 = ff::build_field(3, 1);
    auto a13 = ff::closed_points(f3, ff::Domain::AffineLine, 1);
    CHECK(a13.size() == 3);
}

TEST_CASE("closed points pass an independent irreducibility check") {
    // g irreducible of degree d over F_q iff x^{q^d} = x mod g and
    // x^{q^e} != x mod g for every proper divisor e of d.
    for (int q_spec : {2, 3}) {
        FieldCtx ctx = ff::build_field(q_spec, 1);
        for (const auto& pt : ff::closed_points(ctx, ff::Domain::AffineLine, 5)) {
            FqPoly x{ctx.zero(), ctx.one()};
            FqPoly xred = ff::fq_rem(ctx, x, pt.minpoly);
            CHECK(frob_power_x(ctx, pt.minpoly, pt.degree) == xred);
            for (int e = 1; e < pt.degree; ++e) {
                if (pt.degree % e) continue;
                CHECK(frob_power_x(ctx, pt.minpoly, e) != xred);
            }
        }
    }
}

TEST_CASE("enumeration order is deterministic") {
    FieldCtx f3 = ff::build_field(3, 1);
    auto run1 = ff::closed_points(f3, ff::Domain::Torus, 3);
    auto run2 = ff::closed_points(f3, ff::Domain::Torus, 3);
    REQUIRE(run1.size() == run2.size());
    for (size_t i = 0; i < run1.size(); ++i) CHECK(run1[i].minpoly == run2[i].minpoly);
}

TEST_CASE("primitive modulus search") {
    auto m = ff::fp_lex_least_primitive(2, 4);
    CHECK(ff::fp_is_irreducible(m, 2));
    // x^4+x+1 is primitive; x^4+x^3+x^2+x+1 is irreducible but has order 5.
    CHECK(m == ff::FpVec{1, 1, 0, 0, 1});
}
