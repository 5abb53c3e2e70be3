// intervals.hpp — the maximality intervals I_{2m+j}, their covering of a tail
// of [0,1), and lower-density estimates for E_j.
//
// Endpoints are kept as log-radius (negative dd); the deep endpoints differ
// by quantities like log(a)/n that underflow doubles long before the
// construction runs out.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "maxprod/construction.hpp"
#include "maxprod/dd.hpp"

namespace maxprod {

// Endpoints carry both the log-radius (which underflows past ell ~ 1e-300;
// slow weights reach such depths within a handful of terms) and log(ell),
// which stays finite at any constructed depth and is what the covering
// comparisons use.
struct Interval {
    std::size_t m = 0;
    int j = 0;
    dd lo_log;      // log(min I_{2m+j}), 0 when deeper than double range
    dd hi_log;      // log(max I_{2m+j})
    dd log_ell_lo;  // log(-log(min I)); the min-radius endpoint has larger ell
    dd log_ell_hi;  // log(-log(max I))
    bool representable = true; // false once ell underflows doubles
};

// Largest m for which I_{2m+j} is computable from a K-term construction.
std::size_t max_interval_index(const Construction& c, int j);

Interval interval(const Construction& c, int j, std::size_t m, double delta);

std::vector<Interval> interval_system(const Construction& c, int j, double delta);

struct CoverRow {
    std::size_t m = 0;
    double lo0 = 0.0, hi0 = 0.0, lo1 = 0.0, hi1 = 0.0; // log-radius
    // overlap margins as logs of ell-ratios (>= 0 means the chain holds);
    // stated this way they stay finite at depths where log-radius underflows
    double margin1 = 0.0; // min I_{2m+1} <= max I_{2m}
    double margin2 = 0.0; // min I_{2(m+1)} <= max I_{2m+1}
    bool ok1 = false, ok2 = false;
};

struct CoverReport {
    std::vector<CoverRow> rows;
    bool pass = false;
    std::size_t first_failing_m = 0;
};

CoverReport covering_check(const Construction& c, double delta, std::size_t M);

void write_cover_csv(const CoverReport& rep, const std::string& path);

// Lebesgue-measure ratio m(E_j cap [r, 1_cov)) / (1_cov - r), endpoints taken
// in complement coordinates.  `r_ell` is -log r of the left end.
double lower_density_estimate(const std::vector<Interval>& intervals, dd r_ell);

} // namespace maxprod
