// construction.hpp — the sequences {t_k}, {n_k}, {a_k} and derived constants.
//
// t_1 = 1/2 and omega(t_{k+1}) = 2^gamma omega(t_k); n_k = floor(1/(1-t_k));
// a_k = omega(1-1/n_{k+2}) / omega(1-1/n_k).  Radii are carried as
// x_k = log(1/(1-t_k)) in dd.  n_k is materialized as an exact integer while
// it stays below ~400 digits; deeper terms only ever enter through log n_k.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "maxprod/bigint.hpp"
#include "maxprod/dd.hpp"
#include "maxprod/weight.hpp"

namespace maxprod {

class ConstructionError : public std::runtime_error {
public:
    ConstructionError(const std::string& msg, std::size_t k)
        : std::runtime_error(msg), k(k) {}
    std::size_t k;
};

struct ConstructionTerm {
    dd x;                 // log(1/(1-t_k))
    dd log_n;             // log n_k
    BigUint n;            // exact n_k when materialized
    bool n_materialized = false;
    dd log_a{0.0};        // log a_k; valid for k <= K-2
    bool has_a = false;
};

class Construction {
public:
    std::string weight_spec;
    dd gamma;
    dd alpha;             // from the certificate
    dd log_C;
    double B = 0.0;
    std::vector<ConstructionTerm> terms; // terms[k-1] holds index k
    bool truncated = false;
    std::size_t requested_K = 0;

    // closed-form comparison constants
    dd log_lambda;        // log(2^{2g-a} / C)
    dd log_mu;            // log(2^{2g+a} C)
    dd d_const;           // 2^{-1/alpha}
    dd tau;               // 2^{gamma/alpha} C^{-1/alpha} - 1

    std::size_t K() const { return terms.size(); }
    double lambda() const { return dd_exp(log_lambda).to_double(); }
    double mu() const { return dd_exp(log_mu).to_double(); }
    const ConstructionTerm& term(std::size_t k) const { return terms.at(k - 1); } // 1-based
};

// Both inequalities that a usable gamma must satisfy.
bool gamma_admissible(const DoublingCertificate& cert, dd gamma);

// Smallest gamma on the quarter-step ladder above alpha + log2 C that is
// admissible.
dd select_gamma(const DoublingCertificate& cert);

Construction build_sequence(const Weight& w, const DoublingCertificate& cert,
                            dd gamma, std::size_t K);

struct ValidationRow {
    std::size_t k = 0;
    double a_k = 0.0;
    bool lambda_ok = true;   // a_k >= lambda
    bool mu_ok = true;       // a_k <= mu
    bool marginal = false;   // within 1% of a closed-form bound
    bool chain2_ok = true;   // log a_{k+1} / log a_k < d n_{k+1}/n_k
    bool chain2_checked = false;
    bool gap_ok = true;      // n_{k+1}/n_k above the floor-adjusted tau bound
    bool gap_checked = false;
    double chain2_lhs = 0.0; // log-domain margin data
    double chain2_rhs = 0.0;
    double gap_ratio_log = 0.0;
};

struct ValidationReport {
    std::vector<ValidationRow> rows;
    bool lambda_gt_1 = false;
    bool tau_gt_1 = false;
    bool pass = false;
    std::size_t first_failing_k = 0;
};

ValidationReport validate_sequence(const Construction& c);

// Admissible covering parameter (1-d) log_mu(lambda) / (1 + log_lambda(mu)).
double delta_bound(const Construction& c);

void save_construction(const Construction& c, std::ostream& os);
Construction load_construction(std::istream& is);
void save_construction_file(const Construction& c, const std::string& path);
Construction load_construction_file(const std::string& path);

} // namespace maxprod
