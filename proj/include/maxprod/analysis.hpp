// analysis.hpp — growth and value-distribution functionals of the products
// (circle means, maximum modulus, counting functions, Nevanlinna
// characteristic) and the numeric verification of the comparability claims
//   |f0| + |f1| ~ omega,   M_p(r) ~ omega(r),   T(r) ~ N(r,a) ~ log omega(r),
// rendered as per-decade inf/sup bands whose secular drift must stay below a
// factor 2 per decade.

#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "maxprod/intervals.hpp"
#include "maxprod/kernels.hpp"
#include "maxprod/product.hpp"
#include "maxprod/weight.hpp"

namespace maxprod {

enum class MeanMode { Log, LogPlus, Power };

struct MeanResult {
    double value = 0.0;      // the trapezoidal mean (Power: mean of |f|^p)
    double log_value = 0.0;  // log of the mean, finite even when value overflows
    std::uint64_t q_used = 0;
    std::int64_t den_used = 0;
    bool converged = false;
    double prev_value = 0.0; // estimate one level down (non-convergence report)
};

MeanResult circle_mean(const Product& p, Radius r, std::uint64_t q0, MeanMode mode,
                       double p_exp = 1.0, double quad_tol = 1e-6, double trunc_tol = 1e-9);

struct MaxModulusResult {
    double log_max = 0.0;
    double max = 0.0;
    std::int64_t base_den = 0;
};

MaxModulusResult max_modulus(const Product& p, Radius r, double trunc_tol = 1e-9);

// zeros with |z| <= r, counted with multiplicity (exact)
BigUint counting_function(const Product& p, Radius r);

// tabulated zero statistics over a radii list (shallow to deep)
struct CountingData {
    std::vector<Radius> radii;
    std::vector<BigUint> n_values; // exact counts from the zero circles
    std::vector<double> N_values;  // integrated counting, a = 0
};

CountingData counting_data(const Product& p, std::vector<Radius> radii);

// N(r, f, a): exact zero sum for a = 0, Jensen-numeric otherwise
double integrated_counting(const Product& p, Radius r, std::complex<double> a,
                           double trunc_tol = 1e-9);

// T(r, f) = circle mean of log+ |f| (analytic, no pole term)
double characteristic(const Product& p, Radius r, double trunc_tol = 1e-9);

// ---- theorem verification ----

struct RatioReport {
    std::string name;
    double inf = 0.0, sup = 0.0;
    std::map<int, std::pair<double, double>> per_decade; // decade -> {inf, sup}
    bool positive_finite = false;
    double drift_inf = 0.0;  // least-squares log2 slope per decade on the band
    double drift_sup = 0.0;
    bool drift_ok = false;
    bool checked = true;     // false: product inactive on the band, not probeable
    std::string note;
    bool pass() const { return !checked || (positive_finite && drift_ok); }
};

struct ChainRow {
    double ell = 0.0;
    int j = 0;
    double N0 = 0.0, T = 0.0, logM = 0.0;
    bool ok = false;
};

struct GridSpec {
    int decades = 8;          // radii at ell = 10^-1 .. 10^-decades
    int band_lo = 3;          // band verdicts judged on decades band_lo..decades
    std::int64_t angles = 4096;
    double trunc_tol = 1e-9;
    bool include_endpoints = true;
    double delta = 0.0;       // 0 => delta_bound(c)
    bool keep_samples = true; // retain raw R1 rows for CSV output
    bool with_means = true;   // M_p/omega reports (p = 1/2, 1, 2, inf)
    bool with_tn = true;      // T/log omega, N/log omega reports + the chain
};

struct SampleRow {
    double eps = 0.0;
    std::int64_t num = 0, den = 1;
    double value = 0.0;
};

struct TheoremReport {
    GridSpec grid;
    double delta_used = 0.0;
    std::vector<double> grid_ells;
    RatioReport r1;                           // (|f0|+|f1|)/omega
    std::map<std::string, RatioReport> r2;    // M_p/omega per (p, j)
    std::map<std::string, RatioReport> r3;    // T/log omega, N/log omega per j
    std::vector<ChainRow> chain;
    bool chain_ok = false;
    double ej_inf[2] = {0.0, 0.0};            // min of log|f_j| - log omega on E_j
    double sup_log_ratio = 0.0;               // sup of log|f_j| - log omega anywhere
    double first_zero_decade[2] = {0.0, 0.0};
    std::vector<SampleRow> r1_samples;
    bool pass = false;
    std::string fail_reason;
};

TheoremReport verify_theorem(const Construction& c, const Product& f0, const Product& f1,
                             const Weight& w, const GridSpec& gs);

// ---- zero counting bound ----

struct CountingBoundRow {
    std::size_t construction_index = 0;
    double ell_s = 0.0;          // may underflow to 0 for deep circles (display)
    double log10_inv_ell = 0.0;  // depth in decades
    double nns = 0.0;            // n(s_m, f_j, 0) * (1 - s_m)
    double own = 0.0;            // n_m * (1 - s_m)
    bool single_checked = false; // s_m > 1/4
    bool single_ok = true;       // log(a)/2 <= own <= log(a)
};

struct CountingBoundReport {
    std::vector<CountingBoundRow> rows;
    double min_nns = 0.0, max_nns = 0.0;
    bool bounded_ok = false; // max/min < 10
    bool single_ok = false;
};

CountingBoundReport counting_bound_check(const Construction& c, const Product& p);

// ---- Jensen consistency oracle ----

struct JensenRow {
    double ell = 0.0;
    double quad = 0.0;
    double exact = 0.0;
    double err = 0.0;
    bool converged = false;
};

struct JensenReport {
    std::vector<JensenRow> rows;
    double max_err = 0.0;
    bool pass = false;
};

JensenReport jensen_identity_check(const Product& p, std::size_t count = 20,
                                   double assert_tol = 1e-5, double trunc_tol = 1e-9);

// ---- density tabulation ----

struct DensityRow {
    std::size_t m = 0;
    double ell_r = 0.0;
    double ratio = 0.0;
};

struct DensityReport {
    std::vector<DensityRow> rows;
    bool positive = false;
    bool tail_stable = false; // within factor 2 across the deepest three rows
};

DensityReport density_profile(const std::vector<Interval>& intervals);

// ---- CSV output (columns eps, theta_num, theta_den, value) ----

void write_samples_csv(const std::vector<SampleRow>& rows, const std::string& path);

int decade_of_ell(double ell);

} // namespace maxprod
