#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

#include "maxprod/construction.hpp"

using namespace maxprod;

namespace {

// independent double-precision scan of the gamma ladder
double gamma_scan_oracle(double alpha, double C) {
    double base = alpha + std::log2(C);
    for (int m = 1; m < 40000; ++m) {
        double g = base + 0.25 * m;
        double lhs = (2 * g + alpha + std::log2(C)) / (2 * g - alpha - std::log2(C));
        double tau = std::pow(2.0, g / alpha) / std::pow(C, 1.0 / alpha) - 1.0;
        double rhs = std::pow(2.0, -1.0 / alpha) * tau;
        if (lhs < rhs) return g;
    }
    return -1.0;
}

// a certificate with exact dyadic constants (B = 2, alpha = 1, C = 4)
DoublingCertificate exact_pow_cert() {
    DoublingCertificate cert;
    cert.B = 2.0;
    cert.alpha = 1.0;
    cert.C = 4.0;
    cert.log_B = dd_ln2;
    cert.alpha_dd = dd(1.0);
    cert.log_C = ldexp(dd_ln2, 1);
    cert.probe_count = 0;
    return cert;
}

} // namespace

TEST_CASE("select_gamma agrees with an independent ladder scan") {
    for (const char* spec : {"pow:beta=1", "pow:beta=0.5", "log", "exploglog",
                             "prod:pow:0.5,log"}) {
        Weight w = Weight::parse(spec);
        auto cert = certify_doubling(w);
        dd g = select_gamma(cert);
        double oracle = gamma_scan_oracle(cert.alpha, cert.C);
        CHECK(g.to_double() == doctest::Approx(oracle).epsilon(1e-9));
        CHECK(gamma_admissible(cert, g));
        // the postcondition 2^{gamma-alpha} C^{-1} > 1 restated
        CHECK(std::pow(2.0, g.to_double() - cert.alpha) / cert.C > 1.0);
        // and the previous ladder step must fail
        CHECK(!gamma_admissible(cert, g - dd(0.25)));
    }
}

TEST_CASE("dyadic construction: closed-form recursion n_k = 2*32^(k-1)") {
    Weight w = Weight::pow(1.0);
    auto c = build_sequence(w, exact_pow_cert(), dd(5.0), 12);
    REQUIRE(c.K() == 12);
    CHECK_FALSE(c.truncated);

    BigUint expect(2);
    for (std::size_t k = 1; k <= 12; ++k) {
        REQUIRE(c.term(k).n_materialized);
        CHECK(c.term(k).n.to_decimal() == expect.to_decimal());
        expect.mul_u64(32);
    }
    // a_k = n_{k+2}/n_k = 1024 exactly at double precision
    for (std::size_t k = 1; k <= 10; ++k) {
        CHECK(dd_exp(c.term(k).log_a).to_double() == 1024.0);
    }
    // lambda, mu, d, tau bit-match their closed forms
    CHECK(c.lambda() == 128.0);
    CHECK(c.mu() == 8192.0);
    CHECK(c.d_const.to_double() == 0.5);
    CHECK(c.tau.to_double() == 7.0);
}

TEST_CASE("dyadic recursion stays exact through the deep-materialization path") {
    // K = 24 reaches n_24 = 2*32^23 ~ 8.3e34, past the point where dd can
    // separate adjacent integers; the boundary still lands exactly
    Weight w = Weight::pow(1.0);
    auto c = build_sequence(w, exact_pow_cert(), dd(5.0), 24);
    BigUint expect(2);
    for (std::size_t k = 1; k <= 24; ++k) {
        CHECK(c.term(k).n.to_decimal() == expect.to_decimal());
        expect.mul_u64(32);
    }
    // same for beta = 1/2, where the step is 1024 per index
    auto cert05 = certify_doubling(Weight::pow(0.5));
    auto c05 = build_sequence(Weight::pow(0.5), cert05, dd(5.0), 10);
    BigUint e2(2);
    for (std::size_t k = 1; k <= 10; ++k) {
        CHECK(c05.term(k).n.to_decimal() == e2.to_decimal());
        e2.mul_u64(1024);
    }
}

TEST_CASE("dyadic construction with the empirical certificate") {
    Weight w = Weight::pow(1.0);
    auto cert = certify_doubling(w);
    auto c = build_sequence(w, cert, dd(5.0), 12);
    // n_k unchanged by the 1e-9 certificate inflation
    BigUint expect(2);
    for (std::size_t k = 1; k <= 12; ++k) {
        CHECK(c.term(k).n.to_decimal() == expect.to_decimal());
        expect.mul_u64(32);
    }
    CHECK(c.lambda() == doctest::Approx(128.0).epsilon(1e-7));
    CHECK(c.mu() == doctest::Approx(8192.0).epsilon(1e-7));
}

TEST_CASE("t_1 = 1/2 and the growth step is exact") {
    for (const char* spec : {"pow:beta=1", "log", "exploglog", "prod:pow:0.5,log"}) {
        Weight w = Weight::parse(spec);
        auto cert = certify_doubling(w);
        dd gamma = select_gamma(cert);
        auto c = build_sequence(w, cert, gamma, 8);
        CHECK(std::abs((c.term(1).x - dd_ln2).to_double()) < 1e-30);
        // omega(t_2)/omega(t_1) = 2^gamma to 1e-12 relative
        dd lhs = w.log_eval_x(c.term(2).x) - w.log_eval_x(c.term(1).x);
        dd rhs = gamma * dd_ln2;
        CHECK(std::abs((lhs - rhs).to_double()) < 1e-12 * std::abs(rhs.to_double()));
    }
}

TEST_CASE("validate_sequence passes for every catalog weight") {
    for (const char* spec : {"pow:beta=1", "log", "exploglog", "prod:pow:0.5,log"}) {
        Weight w = Weight::parse(spec);
        auto cert = certify_doubling(w);
        auto c = build_sequence(w, cert, select_gamma(cert), 16);
        auto rep = validate_sequence(c);
        CHECK(rep.pass);
        CHECK(rep.lambda_gt_1);
        CHECK(rep.tau_gt_1);
    }
}

TEST_CASE("chain-2 margins of the gamma = 5 dyadic construction") {
    Weight w = Weight::pow(1.0);
    auto c = build_sequence(w, certify_doubling(w), dd(5.0), 12);
    auto rep = validate_sequence(c);
    CHECK(rep.pass);
    // log a_{k+1}/log a_k = 1 < d n_{k+1}/n_k = 16
    for (const auto& row : rep.rows) {
        if (!row.chain2_checked) continue;
        CHECK(std::exp(row.chain2_lhs) == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(std::exp(row.chain2_rhs) == doctest::Approx(16.0).epsilon(1e-4));
    }
}

TEST_CASE("deliberately small gamma is caught by validation") {
    Weight w = Weight::pow(1.0);
    auto cert = certify_doubling(w);
    // gamma = alpha is inadmissible; detection is via lambda <= 1 (the per-k
    // chain sits exactly on its boundary for the dyadic weight at this gamma)
    auto c = build_sequence(w, cert, cert.alpha_dd, 10);
    auto rep = validate_sequence(c);
    CHECK_FALSE(rep.pass);
    CHECK_FALSE(rep.lambda_gt_1); // lambda = 2^{2-1}/4 < 1
    CHECK_FALSE(rep.tau_gt_1);

    // pushing gamma further down breaks the second chain at a concrete k
    auto c2 = build_sequence(w, cert, dd(0.53), 10);
    auto rep2 = validate_sequence(c2);
    CHECK_FALSE(rep2.pass);
    CHECK(rep2.first_failing_k > 0);
    bool chain2_broken = false;
    for (const auto& row : rep2.rows)
        if (row.chain2_checked && !row.chain2_ok) chain2_broken = true;
    CHECK(chain2_broken);
}

TEST_CASE("s_k = a_k^(-1/n_k) is strictly increasing") {
    for (const char* spec : {"pow:beta=1", "log", "prod:pow:0.5,log"}) {
        Weight w = Weight::parse(spec);
        auto cert = certify_doubling(w);
        auto c = build_sequence(w, cert, select_gamma(cert), 14);
        // compare log(-log s_k): finite at any constructed depth
        dd prev(1e300);
        for (std::size_t k = 1; k + 2 <= c.K(); ++k) {
            dd log_ell = dd_log(c.term(k).log_a) - c.term(k).log_n;
            CHECK(log_ell < prev);
            prev = log_ell;
        }
    }
}

TEST_CASE("slow weights truncate gracefully at the trusted depth") {
    Weight w = Weight::log();
    auto cert = certify_doubling(w);
    auto c = build_sequence(w, cert, select_gamma(cert), 60);
    CHECK(c.truncated);
    CHECK(c.K() >= 5);
    CHECK(c.K() < 60);
    CHECK(validate_sequence(c).pass);
}

TEST_CASE("construction error when the weight cannot reach the first targets") {
    // certificate from the full weight, construction on a copy whose trusted
    // range stops almost immediately
    auto cert = certify_doubling(Weight::pow(1.0));
    Weight w = Weight::pow(1.0).with_x_max(dd(2.0));
    CHECK_THROWS_AS(build_sequence(w, cert, dd(5.0), 8), ConstructionError);
    try {
        build_sequence(w, cert, dd(5.0), 8);
    } catch (const ConstructionError& e) {
        CHECK(e.k == 2);
    }
}

TEST_CASE("delta_bound closed form") {
    Weight w = Weight::pow(1.0);
    auto c = build_sequence(w, exact_pow_cert(), dd(5.0), 12);
    // (1-d)(log lambda / log mu)/(1 + log mu / log lambda) = 49/520
    CHECK(delta_bound(c) == doctest::Approx(49.0 / 520.0).epsilon(1e-14));
    auto c2 = build_sequence(w, certify_doubling(w), dd(5.0), 12);
    CHECK(delta_bound(c2) == doctest::Approx(49.0 / 520.0).epsilon(1e-6));
    CHECK(delta_bound(c2) > 0.0);
    CHECK(delta_bound(c2) < 1.0);
}

TEST_CASE("serialization round-trips bit-exactly") {
    for (const char* spec : {"pow:beta=1", "log"}) {
        Weight w = Weight::parse(spec);
        auto cert = certify_doubling(w);
        auto c = build_sequence(w, cert, select_gamma(cert), 12);
        std::stringstream ss;
        save_construction(c, ss);
        auto c2 = load_construction(ss);
        CHECK(c2.weight_spec == c.weight_spec);
        CHECK(c2.gamma == c.gamma);
        CHECK(c2.alpha == c.alpha);
        CHECK(c2.log_C == c.log_C);
        CHECK(c2.B == c.B);
        CHECK(c2.log_lambda == c.log_lambda);
        CHECK(c2.log_mu == c.log_mu);
        CHECK(c2.tau == c.tau);
        REQUIRE(c2.K() == c.K());
        for (std::size_t k = 1; k <= c.K(); ++k) {
            CHECK(c2.term(k).x == c.term(k).x);
            CHECK(c2.term(k).log_n == c.term(k).log_n);
            CHECK(c2.term(k).has_a == c.term(k).has_a);
            if (c.term(k).has_a) CHECK(c2.term(k).log_a == c.term(k).log_a);
            CHECK(c2.term(k).n_materialized == c.term(k).n_materialized);
            if (c.term(k).n_materialized)
                CHECK(c2.term(k).n.to_decimal() == c.term(k).n.to_decimal());
        }
        // serialized form itself is deterministic
        std::stringstream ss2;
        save_construction(c2, ss2);
        std::stringstream ss3;
        save_construction(c, ss3);
        CHECK(ss2.str() == ss3.str());
    }
}

TEST_CASE("t_k is strictly increasing") {
    for (const char* spec : {"pow:beta=1", "log", "exploglog", "prod:pow:0.5,log"}) {
        Weight w = Weight::parse(spec);
        auto cert = certify_doubling(w);
        auto c = build_sequence(w, cert, select_gamma(cert), 16);
        for (std::size_t k = 1; k < c.K(); ++k)
            CHECK(c.term(k).x < c.term(k + 1).x);
    }
}

TEST_CASE("randomized product weights certify, build and validate") {
    // small fuzz across the catalog's closure under products; exercises the
    // integer-floor tie-break away from dyadic boundaries
    std::mt19937_64 rng(2026);
    for (int trial = 0; trial < 12; ++trial) {
        std::vector<Weight> parts;
        int nparts = 1 + int(rng() % 3);
        for (int i = 0; i < nparts; ++i) {
            switch (rng() % 3) {
            case 0: parts.push_back(Weight::pow(0.25 + double(rng() % 1000) / 400.0)); break;
            case 1: parts.push_back(Weight::log()); break;
            default: parts.push_back(Weight::exploglog()); break;
            }
        }
        Weight w = Weight::product(parts);
        auto cert = certify_doubling(w);
        CHECK(cert.B > 1.0);
        dd gamma = select_gamma(cert);
        auto c = build_sequence(w, cert, gamma, 10);
        CAPTURE(w.name());
        CHECK(validate_sequence(c).pass);
        // integer stability: a rebuild reproduces every n_k bit-exactly
        auto c2 = build_sequence(w, cert, gamma, 10);
        for (std::size_t k = 1; k <= c.K(); ++k) {
            CHECK(c.term(k).n_materialized == c2.term(k).n_materialized);
            if (c.term(k).n_materialized)
                CHECK(c.term(k).n == c2.term(k).n);
        }
    }
}

TEST_CASE("floor-adjusted gap bound holds for every k") {
    for (const char* spec : {"pow:beta=1", "exploglog"}) {
        Weight w = Weight::parse(spec);
        auto cert = certify_doubling(w);
        auto c = build_sequence(w, cert, select_gamma(cert), 16);
        for (std::size_t k = 1; k < c.K(); ++k) {
            dd dlog = c.term(k + 1).log_n - c.term(k).log_n;
            dd inv_n = dd_exp(-c.term(k).log_n);
            CHECK(dlog >= dd_log(c.tau) - dd_log1p(inv_n));
        }
    }
}
