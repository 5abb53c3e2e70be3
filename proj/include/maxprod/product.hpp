// product.hpp — the infinite products
//
//   f_j(z) = prod_k (1 + a_{2k+j} z^{n_{2k+j}}) / (1 + a_{2k+j}^{-1} z^{n_{2k+j}}),
//
// evaluated with a certified truncation bound.  Points live on rational
// angles theta = 2 pi num/den; the argument of z^n is reduced by exact
// big-integer arithmetic because float reduction of n*theta is meaningless
// once n exceeds 2^53.

#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "maxprod/bigint.hpp"
#include "maxprod/construction.hpp"
#include "maxprod/dd.hpp"

namespace maxprod {

class TruncationError : public std::runtime_error {
public:
    TruncationError(const std::string& msg, double min_eps)
        : std::runtime_error(msg), min_eps(min_eps) {}
    double min_eps; // smallest complement-radius the construction can certify
};

// Radius kept as both the complement eps = 1-r (double, possibly denormal)
// and ell = -log r in dd.  eps = 1 (the disc center) carries ell = 1e300.
struct Radius {
    double eps = 0.5;
    dd ell{dd_ln2};

    static Radius from_eps(double eps);
    static Radius from_ell(dd ell);
};

// Point on a rational angle: theta = 2 pi num / den, reduced so that
// 0 <= num < den and gcd(num, den) = 1.
struct DiscPoint {
    Radius rad;
    std::int64_t num = 0;
    std::int64_t den = 1;

    DiscPoint(Radius r, std::int64_t num, std::int64_t den);
};

struct Factor {
    dd log_a;
    double a = 0.0;
    dd log_n;
    BigUint n;
    bool n_materialized = false;
    std::size_t construction_index = 0; // the 2k+j it came from
};

struct TruncationResult {
    std::size_t k_used = 0;      // factors 1..k_used participate
    double tail_log_bound = 0.0; // |log| of the omitted subproduct
};

struct ZeroCircle {
    dd ell;               // -log s_m = log(a_m) / n_m
    double eps;           // 1 - s_m
    double s;             // radius (display; rounds to 1 when eps < 1e-16)
    BigUint n;            // number of simple zeros on the circle
    std::size_t construction_index = 0;
};

class Product {
public:
    int parity = 0;
    std::vector<Factor> factors;
    dd log_mu;
    double mu = 0.0;
    dd tau;

    static Product from_construction(const Construction& c, int parity);

    TruncationResult truncation_index(Radius r, double tol) const;

    // log |f_j(z)|; -inf exactly when a factor numerator vanishes
    double log_modulus(const DiscPoint& z, double tol) const;

    std::complex<double> eval(const DiscPoint& z, double tol) const;

    // all zero circles with s_m <= r, shallow first
    std::vector<ZeroCircle> zeros_up_to(Radius r) const;

    // ell of the first (shallowest) zero circle; +inf when there are none
    double first_zero_ell() const;

    // smallest ell at which truncation can certify tolerance `tol`
    double min_certified_ell(double tol) const;
};

// Internal evaluation plan shared by the point API and the circle kernels:
// everything that depends only on (product, radius, tol).
//
// A factor's log-modulus is evaluated as
//   log|1 + a w| = 0.5 log((1-u)^2 + 4 u cos^2(phi/2)),  u = a|w|,
// whose two terms are nonnegative, so nothing cancels even on top of a zero
// circle; 1-u comes from the dd quantity -expm1(log a - n ell).
struct PreparedCircle {
    std::size_t k_used = 0;
    double tail_log_bound = 0.0;
    struct PF {
        double rho;          // |z|^n = exp(-n ell)
        double u;            // a * rho
        double v;            // rho / a
        double one_minus_u;  // -expm1(log a - n ell)
        double one_minus_v;  // -expm1(-(log a + n ell))
        bool on_circle;      // n*ell within snap window of log a
        uint64_t n_mod_den;  // filled by prepare_angles
        bool dead;           // rho underflowed to 0
    };
    std::vector<PF> pf;
    std::vector<const Factor*> src;

    void prepare_angles(std::int64_t den);
};

PreparedCircle prepare_circle(const Product& p, Radius r, double tol);

// log-modulus of the prepared product at angle 2 pi num / den
double eval_prepared(const PreparedCircle& pc, std::int64_t num, std::int64_t den);

// complex value of the prepared product (finite while |log f| <= ~700)
std::complex<double> eval_prepared_complex(const PreparedCircle& pc,
                                           std::int64_t num, std::int64_t den);

} // namespace maxprod
