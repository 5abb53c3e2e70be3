#include "doctest.h"

#include <cmath>
#include <random>

#include "maxprod/dd.hpp"

using namespace maxprod;

TEST_CASE("dd arithmetic keeps sub-double precision") {
    dd a = dd(1.0) / 3.0;
    dd b = a * 3.0 - 1.0;
    CHECK(std::abs(b.to_double()) < 1e-31);

    // (1 + 1e-20) - 1 survives
    dd c = dd(1.0) + dd(1e-20);
    CHECK((c - dd(1.0)).to_double() == doctest::Approx(1e-20).epsilon(1e-10));
}

TEST_CASE("dd exp/log round-trip to ~1e-30") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-600.0, 600.0);
    for (int i = 0; i < 200; ++i) {
        double x = u(rng);
        dd back = dd_log(dd_exp(dd(x)));
        CHECK(std::abs((back - dd(x)).to_double()) < 1e-28 * std::max(1.0, std::abs(x)));
    }
    CHECK(dd_exp(dd(0.0)).to_double() == 1.0);
    CHECK(std::abs(dd_log(dd(2.0)).to_double() - 0.6931471805599453) < 1e-16);
    CHECK(std::abs((dd_log(dd(2.0)) - dd_ln2).to_double()) < 1e-31);
}

TEST_CASE("dd log handles denormal-range arguments") {
    dd tiny(1e-300);
    dd l = dd_log(tiny);
    CHECK(l.to_double() == doctest::Approx(-690.7755278982137).epsilon(1e-14));
    CHECK(std::abs((dd_exp(l) / tiny - dd(1.0)).to_double()) < 1e-28);
}

TEST_CASE("dd log1p/expm1 avoid cancellation") {
    dd x(1e-18);
    CHECK(std::abs((dd_log1p(x) - x).to_double() + 0.5e-36) < 1e-37); // log1p ~ x - x^2/2
    CHECK(std::abs((dd_expm1(x) - x).to_double() - 0.5e-36) < 1e-37);
    // consistency on moderate values
    for (double v : {0.3, -0.3, 0.49, -0.49, 1.7, 4.0}) {
        dd r = dd_expm1(dd_log1p(dd(v)));
        CHECK(std::abs((r - dd(v)).to_double()) < 1e-28 * std::max(1.0, std::abs(v)));
    }
}

TEST_CASE("dd sqrt and floor") {
    dd s = dd_sqrt(dd(2.0));
    CHECK(std::abs((s * s - dd(2.0)).to_double()) < 1e-31);

    CHECK(dd_floor(dd(3.7)).to_double() == 3.0);
    CHECK(dd_floor(dd(-0.2)).to_double() == -1.0);
    CHECK(dd_floor(dd(5.0)).to_double() == 5.0);
    // the low word decides when hi is an exact integer
    dd just_below = dd(1024.0, -1e-20);
    CHECK(dd_floor(just_below).to_double() == 1023.0);
    dd just_above = dd(1024.0, 1e-20);
    CHECK(dd_floor(just_above).to_double() == 1024.0);
}

TEST_CASE("dd string output") {
    CHECK(dd_to_sci(dd(1.5), 5) == "1.5000e+0");
    CHECK(dd_to_sci(dd(0.0), 10) == "0");
    CHECK(dd_to_sci(dd(-2.5e-7), 3) == "-2.50e-7");
    // 30 digits of 1/3 in dd
    std::string third = dd_to_sci(dd(1.0) / 3.0, 30);
    CHECK(third.substr(0, 10) == "3.33333333");
}

TEST_CASE("dd hex round-trip is bit-exact") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1e10, 1e10);
    for (int i = 0; i < 50; ++i) {
        dd v = dd(u(rng)) / 3.0 + dd(u(rng));
        dd back = dd_from_hex(dd_to_hex(v));
        CHECK(back.hi == v.hi);
        CHECK(back.lo == v.lo);
    }
}
