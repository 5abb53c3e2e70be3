#include "doctest.h"

#include <random>

#include "maxprod/bigint.hpp"

using namespace maxprod;

TEST_CASE("BigUint decimal round-trip and comparison") {
    const char* s = "123456789012345678901234567890123456789";
    BigUint a = BigUint::from_decimal(s);
    CHECK(a.to_decimal() == s);
    CHECK(BigUint(0).to_decimal() == "0");
    CHECK(BigUint(18446744073709551615ull).to_decimal() == "18446744073709551615");
    CHECK(BigUint(5) < BigUint(7));
    CHECK(BigUint::from_decimal("99999999999999999999") <
          BigUint::from_decimal("100000000000000000000"));
}

TEST_CASE("BigUint add/sub/mul/shift against 128-bit arithmetic") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        uint64_t x = rng() >> 1, y = rng() >> 1;
        BigUint a(x), b(y);
        CHECK((a + b).to_decimal() == std::to_string((unsigned long long)(x + y)));
        if (x >= y) CHECK((a - b).to_decimal() == std::to_string((unsigned long long)(x - y)));
        unsigned __int128 p = (unsigned __int128)x * y;
        BigUint m(x);
        m.mul_u64(y);
        BigUint expect(uint64_t(p >> 64));
        expect.shl(64);
        expect += uint64_t(p);
        CHECK(m == expect);
    }
    BigUint t(1);
    t.shl(200);
    t.shr(137);
    BigUint e(1);
    e.shl(63);
    CHECK(t == e);
}

TEST_CASE("BigUint mod_u64 matches native arithmetic") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 100; ++i) {
        uint64_t x = rng(), m = (rng() % 1000000) + 3;
        CHECK(BigUint(x).mod_u64(m) == x % m);
    }
    // 2^200 mod primes, checked against modular exponentiation
    auto powmod = [](unsigned __int128 b, int e, uint64_t m) {
        unsigned __int128 r = 1;
        b %= m;
        for (int i = 0; i < e; ++i) r = (r * b) % m;
        return uint64_t(r);
    };
    BigUint big(1);
    big.shl(200);
    for (uint64_t m : {1000003ull, 998244353ull, 4097ull}) {
        CHECK(big.mod_u64(m) == powmod(2, 200, m));
    }
}

TEST_CASE("BigUint floor_dd is exact at power-of-two boundaries") {
    // 2^56 as a dd, tiny low-word perturbations decide the floor
    dd v = ldexp(dd(1.0), 56);
    CHECK(BigUint::floor_dd(v).to_decimal() == "72057594037927936");
    CHECK(BigUint::floor_dd(v + dd(0.0, -1e-10)).to_decimal() == "72057594037927935");
    CHECK(BigUint::floor_dd(dd(3.75)).to_decimal() == "3");
    CHECK(BigUint::floor_dd(dd(1e300)).bit_length() == 997);
}

TEST_CASE("BigUint floor_exp_dd matches exp for exact powers") {
    dd x = dd_ln2 * 56.0;
    CHECK(BigUint::floor_exp_dd(x).to_decimal() == "72057594037927936");
    // deep value: e^900 has 391 digits
    BigUint big = BigUint::floor_exp_dd(dd(900.0));
    CHECK(big.to_decimal().size() == 391);
    // and log_dd inverts to ~1e-28
    CHECK(std::abs((big.log_dd() - dd(900.0)).to_double()) < 1e-25);
}

TEST_CASE("BigUint log_dd precision") {
    BigUint a = BigUint::from_decimal("72057594037927936"); // 2^56
    dd l = a.log_dd();
    dd expect = dd_ln2 * 56.0;
    CHECK(std::abs((l - expect).to_double()) < 1e-28);
}

TEST_CASE("gcd_u64") {
    CHECK(gcd_u64(12, 18) == 6);
    CHECK(gcd_u64(0, 5) == 5);
    CHECK(gcd_u64(7, 0) == 7);
    CHECK(gcd_u64(1, 1) == 1);
}
