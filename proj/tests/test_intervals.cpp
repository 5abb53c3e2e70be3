#include "doctest.h"

#include <cmath>

#include "maxprod/analysis.hpp"
#include "maxprod/intervals.hpp"

using namespace maxprod;

namespace {

Construction dyadic_construction(std::size_t K = 12) {
    Weight w = Weight::pow(1.0);
    auto cert = certify_doubling(w);
    return build_sequence(w, cert, dd(5.0), K);
}

} // namespace

TEST_CASE("interval endpoints match the closed forms (dyadic case)") {
    auto c = dyadic_construction(12);
    double la = std::log(1024.0);
    // j = 0, m = 1: indices n_2 = 64, n_3 = 2048, n_4 = 65536; delta = 0.09
    Interval I = interval(c, 0, 1, 0.09);
    double lo_expect = -la * (0.91 / 64.0 + 0.09 / 65536.0);
    double hi_expect = -la * (0.09 * (64.0 / 2048.0) / 64.0 +
                              (1.0 - 0.09 * 64.0 / 2048.0) / 65536.0);
    CHECK(I.lo_log.to_double() == doctest::Approx(lo_expect).epsilon(1e-12));
    CHECK(I.hi_log.to_double() == doctest::Approx(hi_expect).epsilon(1e-12));
}

TEST_CASE("delta -> 0 pushes the endpoints to the zero circles") {
    auto c = dyadic_construction(12);
    double la = std::log(1024.0);
    Interval I = interval(c, 0, 1, 1e-12);
    CHECK(I.lo_log.to_double() == doctest::Approx(-la / 64.0).epsilon(1e-9));
    CHECK(I.hi_log.to_double() == doctest::Approx(-la / 65536.0).epsilon(1e-6));
}

TEST_CASE("nesting inside (s_{2m+j}, s_{2(m+1)+j})") {
    auto c = dyadic_construction(16);
    for (int j : {0, 1}) {
        for (std::size_t m = 1; m <= max_interval_index(c, j); ++m) {
            Interval I = interval(c, j, m, delta_bound(c));
            double la = std::log(1024.0);
            double s_lo = -la / std::pow(32.0, double(2 * m + std::size_t(j)) - 1.0) / 2.0;
            double s_hi = s_lo / 1024.0;
            CHECK(I.lo_log.to_double() > s_lo);
            CHECK(I.lo_log.to_double() < I.hi_log.to_double());
            CHECK(I.hi_log.to_double() < s_hi);
        }
    }
    CHECK_THROWS_AS(interval(c, 0, 99, 0.05), std::domain_error);
    CHECK_THROWS_AS(interval(c, 2, 1, 0.05), std::domain_error);
}

TEST_CASE("same-parity intervals are pairwise disjoint") {
    auto c = dyadic_construction(16);
    for (int j : {0, 1}) {
        auto ints = interval_system(c, j, delta_bound(c));
        for (std::size_t i = 0; i + 1 < ints.size(); ++i)
            CHECK(ints[i].hi_log < ints[i + 1].lo_log);
    }
}

TEST_CASE("covering holds at delta_bound and fails at delta = 0.5") {
    auto c = dyadic_construction(16);
    std::size_t M = std::min(max_interval_index(c, 0) - 1, max_interval_index(c, 1));
    auto good = covering_check(c, delta_bound(c), M);
    CHECK(good.pass);
    for (const auto& row : good.rows) {
        CHECK(row.margin1 >= 0.0);
        CHECK(row.margin2 >= 0.0);
    }
    auto bad = covering_check(c, 0.5, M);
    CHECK_FALSE(bad.pass);
    CHECK(bad.first_failing_m >= 1);
    CHECK(bad.first_failing_m <= 2); // fails already at small m
}

TEST_CASE("M = 1 report has one row with both margins") {
    auto c = dyadic_construction(12);
    auto rep = covering_check(c, delta_bound(c), 1);
    REQUIRE(rep.rows.size() == 1);
    CHECK(rep.rows[0].ok1);
    CHECK(rep.rows[0].ok2);
}

TEST_CASE("covering at delta_bound for all catalog weights") {
    for (const char* spec : {"pow:beta=1", "log", "exploglog", "prod:pow:0.5,log"}) {
        Weight w = Weight::parse(spec);
        auto cert = certify_doubling(w);
        auto c = build_sequence(w, cert, select_gamma(cert), 20);
        std::size_t M = std::min(max_interval_index(c, 0) - 1, max_interval_index(c, 1));
        REQUIRE(M >= 1);
        CHECK(covering_check(c, delta_bound(c), M).pass);
    }
}

TEST_CASE("delta_bound degenerates to (1-d)/2 when lambda = mu") {
    auto c = dyadic_construction(12);
    Construction degenerate = c;
    degenerate.log_mu = degenerate.log_lambda;
    double d = degenerate.d_const.to_double();
    CHECK(delta_bound(degenerate) == doctest::Approx((1.0 - d) / 2.0).epsilon(1e-14));
}

TEST_CASE("lower density: degenerate cases") {
    CHECK(lower_density_estimate({}, dd(0.5)) == 0.0);
    // one interval covering [r, 1_cov) completely
    Interval I;
    I.m = 1;
    I.j = 0;
    I.lo_log = dd(-0.5);
    I.hi_log = dd(-0.01);
    double full = lower_density_estimate({I}, dd(0.5)); // r at min I
    CHECK(full == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("density profile of the dyadic system is positive and tail-stable") {
    auto c = dyadic_construction(20);
    for (int j : {0, 1}) {
        auto ints = interval_system(c, j, delta_bound(c));
        auto rep = density_profile(ints);
        CHECK(rep.positive);
        CHECK(rep.tail_stable);
        for (const auto& row : rep.rows) {
            CHECK(row.ratio > 0.0);
            CHECK(row.ratio <= 1.0 + 1e-12);
        }
    }
}
