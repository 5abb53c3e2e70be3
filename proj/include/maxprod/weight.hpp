// weight.hpp — doubling weights in log-domain.
//
// A weight is evaluated as x = log(1/eps) -> log omega(1-eps).  Keeping the
// abscissa in log form is what lets the construction walk to radii like
// 1 - exp(-1e20) that no floating-point eps can represent.

#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "maxprod/dd.hpp"

namespace maxprod {

class CertificationError : public std::runtime_error {
public:
    CertificationError(const std::string& msg, double offending_eps)
        : std::runtime_error(msg), offending_eps(offending_eps) {}
    double offending_eps;
};

class Weight {
public:
    // log omega(1 - e^{-x}) for x = log(1/eps) in [0, x_max]
    dd log_eval_x(dd x) const;

    // convenience wrapper for eps in [eps_floor, 1]
    double eval_log_weight(double eps) const;

    const std::string& name() const { return name_; }
    dd x_max() const { return x_max_; } // trusted depth: eps >= exp(-x_max)

    static Weight parse(const std::string& spec); // CLI DSL, case-insensitive

    // copy with a tighter trusted depth (x_max = log(1/eps_floor))
    Weight with_x_max(dd x_max) const {
        Weight w = *this;
        w.x_max_ = x_max;
        return w;
    }

    static Weight pow(double beta);
    static Weight log();
    static Weight exploglog();
    static Weight product(std::vector<Weight> parts);
    static Weight exp_inverse(); // omega = exp(1/(1-r)): non-doubling, test paths

private:
    enum class Kind { Pow, Log, ExpSqrtLog, Prod, ExpInv };
    Kind kind_ = Kind::Pow;
    double beta_ = 1.0;
    std::vector<Weight> parts_;
    std::string name_;
    dd x_max_{1e30};
};

struct DoublingCertificate {
    double B = 0.0;       // doubling constant, inflated by 1+1e-9
    double alpha = 0.0;   // log2 B
    double C = 0.0;       // max{B omega(1/2)/omega(0), B^2}
    std::size_t probe_count = 0;
    dd log_B;             // high-precision internals used by the construction
    dd alpha_dd;
    dd log_C;
};

// Default probe grid: eps = 2^-i, i = 0..60 (dyadic, matching the doubling
// condition itself).
std::vector<double> default_probe_grid();

DoublingCertificate certify_doubling(const Weight& w, std::span<const double> probe_eps);
DoublingCertificate certify_doubling(const Weight& w);

// Growth envelope omega(t) <= C ((1-r)/(1-t))^alpha omega(r) implied by doubling.
bool check_envelope(const DoublingCertificate& cert, const Weight& w, double r, double t);

} // namespace maxprod
