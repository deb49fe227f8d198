#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "zptower/cyclo.hpp"

using namespace zptower;
using padic::CycloElem;
using padic::CycloRing;
using tseries::TSeries;

TEST_CASE("cyclotomic ring construction") {
    // level 1, p = 2: relation 2 + pi, so pi = -2
    CycloRing r21 = CycloRing::make(2, 1, 8);
    CHECK(r21.e == 1);
    CHECK(r21.rel == std::vector<padic::u64>{2, 1});

    // level 2, p = 2: Phi_4(1+pi) = pi^2 + 2 pi + 2
    CycloRing r22 = CycloRing::make(2, 2, 8);
    CHECK(r22.e == 2);
    CHECK(r22.rel == std::vector<padic::u64>{2, 2, 1});

    CycloRing r31 = CycloRing::make(3, 1, 4);
    CHECK(r31.e == 2);
    CHECK(r31.rel == std::vector<padic::u64>{3, 3, 1});
}

TEST_CASE("cyclo_substitute examples") {
    int a = 8;
    // series 1 + T at p=2, n=1: pi = -2, so the value is -1
    TSeries s = TSeries::one_plus_T(2, a, a);
    CycloRing r21 = CycloRing::make(2, 1, a);
    auto v = padic::cyclo_substitute(s, r21);
    CHECK(v.c[0] == r21.mod - 1);

    // series T at p=3, n=1: the image is pi, of valuation 1/2
    TSeries t = TSeries::zero(3, 4, 8);
    t.c[1] = 1;
    auto w = padic::cyclo_substitute(t, CycloRing::make(3, 1, 4));
    CHECK(w.c == CycloElem::pi(CycloRing::make(3, 1, 4)).c);
    CHECK(padic::cyclo_valuation(w) == Rational(1, 2));

    // constants pass through
    TSeries c = TSeries::constant(2, a, a, 5);
    CHECK(padic::cyclo_substitute(c, r21).c[0] == 5);

    // insufficient T-truncation is an error
    TSeries tiny = TSeries::one_plus_T(2, 8, 4);
    CHECK_THROWS_AS(padic::cyclo_substitute(tiny, CycloRing::make(2, 2, 8)),
                    padic::PrecisionError);
}

TEST_CASE("cyclo_valuation examples") {
    CycloRing r = CycloRing::make(2, 2, 8);  // e = 2
    CHECK(padic::cyclo_valuation(CycloElem::pi(r)) == Rational(1, 2));
    CHECK(padic::cyclo_valuation(CycloElem::from_scalar(r, 2)) == Rational(1));

    // pi^2 + 2 pi: min(2/2, 1 + 1/2) = 1
    CycloElem x = CycloElem::pi(r) * CycloElem::pi(r) +
                  CycloElem::from_scalar(r, 2) * CycloElem::pi(r);
    CHECK(padic::cyclo_valuation(x) == Rational(1));

    CHECK_THROWS_AS(padic::cyclo_valuation(CycloElem::zero(r)), padic::PrecisionError);
}

TEST_CASE("galois conjugation") {
    CycloRing r = CycloRing::make(3, 1, 6);
    CycloElem pi = CycloElem::pi(r);

    CHECK(padic::galois_conjugate(pi, 1).c == pi.c);

    // u = 2: pi -> (1+pi)^2 - 1 = pi^2 + 2 pi
    CycloElem img = padic::galois_conjugate(pi, 2);
    CycloElem expect = pi * pi + CycloElem::from_scalar(r, 2) * pi;
    CHECK(img.c == expect.c);

    CHECK_THROWS_AS(padic::galois_conjugate(pi, 3), std::invalid_argument);
}

TEST_CASE("galois conjugation preserves valuation and composes") {
    CycloRing r = CycloRing::make(3, 2, 6);  // e = 6, group (Z/9)^x
    std::mt19937_64 rng(7);
    for (int iter = 0; iter < 50; ++iter) {
        CycloElem x = CycloElem::zero(r);
        for (int j = 0; j < r.e; ++j) x.c[j] = rng() % r.mod;
        if (x.is_zero()) continue;
        for (padic::u64 u : {2, 4, 5, 7, 8}) {
            CHECK(padic::cyclo_valuation(padic::galois_conjugate(x, u)) ==
                  padic::cyclo_valuation(x));
        }
        auto lhs = padic::galois_conjugate(padic::galois_conjugate(x, 2), 5);
        auto rhs = padic::galois_conjugate(x, 10 % 9);
        CHECK(lhs.c == rhs.c);
    }
}

TEST_CASE("mixed precisions narrow to the weaker operand") {
    CycloRing wide = CycloRing::make(3, 1, 8);
    CycloRing narrow = CycloRing::make(3, 1, 3);
    CycloElem x = CycloElem::from_scalar(wide, 1000);
    CycloElem y = CycloElem::pi(narrow);
    auto z = x * y;
    CHECK(z.ring.a == 3);
    CHECK(z.ring.mod == 27);
}

TEST_CASE("valuation is a discrete valuation on samples") {
    CycloRing r = CycloRing::make(2, 2, 10);
    std::mt19937_64 rng(11);
    int checked = 0;
    for (int iter = 0; iter < 200 && checked < 60; ++iter) {
        CycloElem x = CycloElem::zero(r), y = CycloElem::zero(r);
        for (int j = 0; j < r.e; ++j) {
            x.c[j] = rng() % 64;  // keep valuations well above the floor
            y.c[j] = rng() % 64;
        }
        if (x.is_zero() || y.is_zero()) continue;
        auto vx = padic::cyclo_valuation(x);
        auto vy = padic::cyclo_valuation(y);
        if (vx + vy >= Rational(r.a - 2)) continue;
        ++checked;
        CHECK(padic::cyclo_valuation(x * y) == vx + vy);
        auto sum = x + y;
        if (!sum.is_zero()) {
            auto vs = padic::cyclo_valuation(sum);
            CHECK(vs >= std::min(vx, vy));
            if (vx != vy) CHECK(vs == std::min(vx, vy));
        }
    }
    CHECK(checked >= 50);
}
