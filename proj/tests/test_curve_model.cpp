#include "oracles.hpp"

#include "selmer/curve_model.hpp"
#include "selmer/error.hpp"

#include <doctest.h>

using namespace selmer;

namespace {

Rational q(long n, long d = 1) {
    Rational r(n, d);
    r.canonicalize();
    return r;
}

}  // namespace

TEST_CASE("invariants of small curves") {
    const auto e = parse_curve("0,0,0,-1,0");
    CHECK(e.delta() == 64);
    CHECK(e.c4() == 48);
    CHECK(e.c6() == 0);

    const auto e11 = parse_curve("0,-1,1,-10,-20");
    CHECK(e11.b2() == -4);
    CHECK(e11.b4() == -20);
    CHECK(e11.b6() == -79);
    CHECK(e11.b8() == -21);
    CHECK(e11.delta() == -161051);
    CHECK(e11.c4() == 496);
}

TEST_CASE("discriminant agrees with the 128-bit oracle on random curves") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 300; ++i) {
        const auto a = oracle::random_curve(rng, 1000);
        const auto c = parse_curve(oracle::text(a));
        CHECK(c.delta() == Rational(Integer(oracle::decimal(oracle::discriminant(a)))));
    }
}

TEST_CASE("singular and malformed input") {
    CHECK_THROWS_AS(parse_curve("0,0,0,0,0"), Error);
    try {
        parse_curve("0,0,0,0,0");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::SingularModel);
    }
    for (const char* bad : {"", "1,2,3", "1,2,3,4,5,6", "a,0,0,0,1", "1/0,0,0,-1,0", "0,0,0,-1,0.5", "0,,0,-1,0"}) {
        CAPTURE(bad);
        try {
            parse_curve(bad);
            FAIL("accepted malformed curve");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::NonRational);
        }
    }
    CHECK(parse_curve(" 0, 0 ,0,-1/4, 0").a4() == q(-1, 4));
    CHECK(parse_curve("0,0,0,2/4,1").a4() == q(1, 2));
}

TEST_CASE("model transforms scale invariants and compose") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long> small(-5, 5), pos(1, 4);
    for (int i = 0; i < 200; ++i) {
        const auto c = parse_curve(oracle::text(oracle::random_curve(rng)));
        ModelTransform t{q(small(rng) == 0 ? 3 : small(rng), pos(rng)), q(small(rng), pos(rng)),
                         q(small(rng), pos(rng)), q(small(rng), pos(rng))};
        if (t.u == 0) t.u = 1;
        const auto d = apply(t, c);
        Rational u2 = t.u * t.u, u4 = u2 * u2, u6 = u4 * u2, u12 = u6 * u6;
        CHECK(d.delta() * u12 == c.delta());
        CHECK(d.c4() * u4 == c.c4());
        CHECK(d.c6() * u6 == c.c6());
        CHECK(t.then(t.inverse()).is_identity());
        CHECK(t.inverse().then(t).is_identity());
        CHECK(apply(t.inverse(), d) == c);

        ModelTransform t2{q(pos(rng)), q(small(rng)), q(small(rng)), q(small(rng))};
        CHECK(apply(t.then(t2), c) == apply(t2, apply(t, c)));
    }
}

TEST_CASE("minimal models") {
    SUBCASE("scaled y^2 = x^3 - x") {
        const auto m = minimal_model(parse_curve("0,0,0,-16,0"));
        CHECK(m.curve == parse_curve("0,0,0,-1,0"));
        CHECK(abs(m.transform.u) == 2);
    }
    SUBCASE("already minimal") {
        const auto e = parse_curve("0,-1,1,-10,-20");
        const auto m = minimal_model(e);
        CHECK(m.curve == e);
        CHECK(m.transform.is_identity());
    }
    SUBCASE("rational coefficients") {
        const auto e = parse_curve("0,0,0,-1/4,0");
        const auto m = minimal_model(e);
        CHECK(m.curve.is_integral());
        Rational u = abs(m.transform.u);
        while (u.get_den() == 1 && u.get_num() % 2 == 0) u /= 2;
        while (u.get_num() == 1 && u.get_den() % 2 == 0) u *= 2;
        CHECK(u == 1);
        const Rational u2 = m.transform.u * m.transform.u, u12 = u2 * u2 * u2 * u2 * u2 * u2;
        CHECK(e.delta() / m.curve.delta() == u12);
    }
    SUBCASE("random curves: integral, idempotent, twelfth-power quotient") {
        std::mt19937_64 rng(3);
        std::uniform_int_distribution<long> s(-3, 3), k(1, 3);
        for (int i = 0; i < 150; ++i) {
            const auto base = parse_curve(oracle::text(oracle::random_curve(rng)));
            const ModelTransform t{q(1, k(rng) * k(rng)), q(s(rng), k(rng)), q(s(rng)), q(s(rng), k(rng))};
            const auto e = apply(t, base);
            const auto m = minimal_model(e);
            CHECK(m.curve.is_integral());
            CHECK(apply(m.transform, e) == m.curve);
            CHECK(minimal_model(m.curve).transform.is_identity());
            // The minimal discriminant never exceeds that of the integral start.
            CHECK(abs(m.curve.delta()) <= abs(minimal_model(base).curve.delta()));
            CHECK(m.curve.delta() == minimal_model(base).curve.delta());
        }
    }
}

TEST_CASE("reduction modulo a prime") {
    CHECK_FALSE(reduce_mod(parse_curve("0,0,0,-1,0"), 7).singular);
    CHECK(reduce_mod(parse_curve("0,-1,1,-10,-20"), 11).singular);
    try {
        reduce_mod(parse_curve("0,0,0,-1/2,0"), 2);
        FAIL("expected NotIntegralAt");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NotIntegralAt);
    }
    std::mt19937_64 rng(5);
    for (int i = 0; i < 100; ++i) {
        const auto a = oracle::random_curve(rng);
        const auto m = minimal_model(parse_curve(oracle::text(a))).curve;
        for (long p : {3L, 5L, 7L, 11L, 13L}) {
            const bool divides = mpz_divisible_ui_p(m.delta().get_num().get_mpz_t(), p) != 0;
            CHECK(reduce_mod(m, p).singular == divides);
        }
    }
}
