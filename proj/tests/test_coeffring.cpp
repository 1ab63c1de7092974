// Unit tests for the scalar layer: Laurent/rational arithmetic, the
// idempotent-split pi-scalars, bar and dagger, and (v,pi)-combinatorics.

#include "doctest.h"

#include "coverquant/scalar.hpp"

using namespace coverquant;

TEST_CASE("laurent basic arithmetic and canonical fractions") {
    Laurent v = Laurent::v();
    Laurent p = v * v - Laurent::one();              // v^2 - 1
    Laurent q = v - Laurent::one();                  // v - 1
    CHECK(p.div_exact(q) == v + Laurent::one());
    CHECK_THROWS(p.div_exact(v + v));

    RatFunc f(p, q);  // reduces to v + 1
    CHECK(f == RatFunc(v + Laurent::one()));
    CHECK(f.is_laurent());

    RatFunc g = RatFunc::one() / RatFunc(v - Laurent::one());
    CHECK((g * RatFunc(v - Laurent::one())) == RatFunc::one());
    // Denominator normalized to positive leading coefficient.
    RatFunc h(Laurent::one(), Laurent::one() - v);
    CHECK(h == -g);
}

TEST_CASE("series expansion") {
    // 1/(1-v) = 1 + v + v^2 + ...
    RatFunc f = RatFunc::one() / (RatFunc::one() - RatFunc::v());
    auto s = f.series(4);
    for (int k = 0; k <= 4; ++k) CHECK(s[k] == 1);
    // v^{-1}/(1+v): starts at v^{-1}.
    RatFunc g = RatFunc::v(-1) / (RatFunc::one() + RatFunc::v());
    auto s2 = g.series(2);
    CHECK(s2[-1] == 1);
    CHECK(s2[0] == -1);
    CHECK(s2[1] == 1);
}

TEST_CASE("pi arithmetic and idempotent splitting") {
    PiScalar pi = PiScalar::pi();
    CHECK(pi * pi == PiScalar::one());
    // eps_+- = (1 +- pi)/2 are idempotent and orthogonal.
    PiScalar half(Rat(1, 2));
    PiScalar ep = half * (PiScalar::one() + pi);
    PiScalar em = half * (PiScalar::one() - pi);
    CHECK(ep * ep == ep);
    CHECK(em * em == em);
    CHECK((ep * em).is_zero());
    CHECK(ep + em == PiScalar::one());
    // split/reassemble round-trip
    PiScalar x(RatFunc::v(2), RatFunc::v(-3));
    CHECK(ep * x + em * x == x);
    CHECK(x.specialize(+1) == RatFunc::v(2));
    CHECK(x.specialize(-1) == RatFunc::v(-3));
}

TEST_CASE("bar and dagger on scalars") {
    PiScalar v = PiScalar::v();
    PiScalar pi = PiScalar::pi();
    CHECK(v.bar() == pi * PiScalar::v(-1));
    CHECK(pi.bar() == pi);
    CHECK(v.dagger() == pi * v);
    CHECK(PiScalar::one().dagger() == PiScalar::one());
    // bar(v - pi v^{-1}) = -(v - pi v^{-1})
    PiScalar y = v - pi * PiScalar::v(-1);
    CHECK(y.bar() == -y);

    std::mt19937 rng(7);
    for (int k = 0; k < 100; ++k) {
        PiScalar x = random_scalar(rng);
        CHECK(x.bar().bar() == x);
        CHECK(x.dagger().dagger() == x);
        CHECK(x.bar().dagger() == x.dagger().bar());
    }
}

TEST_CASE("(v,pi)-integers") {
    CHECK(qint(0, 1).is_zero());
    CHECK(qint(1, 1) == PiScalar::one());
    // [2] = pi v + v^{-1}
    CHECK(qint(2, 1) == PiScalar::pi() * PiScalar::v() + PiScalar::v(-1));
    CHECK(qbinom(2, 1, 1) == qint(2, 1));
    CHECK(qbinom(5, 0, 2) == PiScalar::one());
    // classical specializations of [2]
    CHECK(qint(2, 1).specialize(+1) == (RatFunc::v() + RatFunc::v(-1)));
    CHECK(qint(2, 1).specialize(-1) == (-RatFunc::v() + RatFunc::v(-1)));
    // negative arguments: [-n] = -pi^? [n] stays Laurent
    CHECK(qint(-3, 1).is_laurent());
    CHECK(qbinom(-2, 2, 1).is_laurent());
}

TEST_CASE("bar/dagger identities for (v,pi)-combinatorics") {
    for (int d = 1; d <= 3; ++d) {
        for (long long n = 0; n <= 8; ++n) {
            CHECK(qint(n, d).bar() == qint(n, d));
            CHECK(qint(n, d).dagger() ==
                  PiScalar::pi_pow(static_cast<long long>(d) * (n - 1)) * qint(n, d));
            CHECK(qfact(n, d).dagger() ==
                  PiScalar::pi_pow(static_cast<long long>(d) * n * (n - 1) / 2) *
                      qfact(n, d));
            for (long long k = 0; k <= n; ++k) {
                CHECK(qbinom(n, k, d).bar() == qbinom(n, k, d));
                CHECK(qbinom(n, k, d).dagger() ==
                      PiScalar::pi_pow(static_cast<long long>(d) * k * (n - k)) *
                          qbinom(n, k, d));
            }
        }
    }
}

TEST_CASE("gauss scalars and the twistor substitution") {
    GaussPi t = GaussPi::t();
    CHECK(t * t == GaussPi(-PiScalar::one()));
    CHECK(GaussPi::t_pow(4) == GaussPi::one());
    CHECK(GaussPi::t_pow(-1) == GaussPi::t_pow(3));

    // v -> t^{-1} v, pi -> -pi
    GaussPi tv = twist_scalar(PiScalar::v());
    CHECK(tv == GaussPi::t_pow(-1) * GaussPi(PiScalar::v()));
    CHECK(twist_scalar(PiScalar::pi()) == GaussPi(-PiScalar::pi()));
    // Multiplicativity on a sample.
    std::mt19937 rng(11);
    for (int k = 0; k < 25; ++k) {
        PiScalar a = random_scalar(rng, 3, 3, 5);
        PiScalar b = random_scalar(rng, 3, 3, 5);
        CHECK(twist_scalar(a * b) == twist_scalar(a) * twist_scalar(b));
        CHECK(twist_scalar(a + b) == twist_scalar(a) + twist_scalar(b));
    }
}

TEST_CASE("series integrality predicate") {
    // v/(1-v) is in v Z[[v]]
    PiScalar x = PiScalar::v() / (PiScalar::one() - PiScalar::v());
    CHECK(x.series_integral_from(1, 12));
    CHECK_FALSE(x.series_integral_from(2, 12));
    // 1/(2-v) has non-integral series
    PiScalar y = PiScalar::one() / (PiScalar(Int(2)) - PiScalar::v());
    CHECK_FALSE(y.series_integral_from(0, 4));
}
