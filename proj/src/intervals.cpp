#include "maxprod/intervals.hpp"

#include <cmath>
#include <fstream>

namespace maxprod {

namespace {

// log(-log s_i) = log(log(a_i) / n_i) for a construction index i
dd log_ell_s(const Construction& c, std::size_t i) {
    const auto& t = c.term(i);
    if (!t.has_a) throw std::domain_error("interval: index " + std::to_string(i) + " has no a_k");
    if (!(t.log_a > dd(0.0)))
        throw std::domain_error("interval: a_k <= 1 at index " + std::to_string(i));
    return dd_log(t.log_a) - t.log_n;
}

// log(e^a + e^b)
dd log_sum(dd a, dd b) {
    if (a < b) std::swap(a, b);
    dd diff = b - a;
    if (diff.hi < -80.0) return a;
    return a + dd_log1p(dd_exp(diff));
}

dd radius_log_from_log_ell(dd log_ell) {
    if (log_ell.hi < -700.0) return dd(0.0); // deeper than doubles can say
    return -dd_exp(log_ell);
}

} // namespace

std::size_t max_interval_index(const Construction& c, int j) {
    std::size_t need = 4 + std::size_t(j);
    if (c.K() < need + 2) return 0;
    return (c.K() - need) / 2;
}

Interval interval(const Construction& c, int j, std::size_t m, double delta) {
    if (j != 0 && j != 1) throw std::domain_error("interval: parity must be 0 or 1");
    if (!(delta > 0.0) || !(delta < 1.0)) throw std::domain_error("interval: delta must lie in (0,1)");
    if (m < 1 || m > max_interval_index(c, j))
        throw std::domain_error("interval: m out of constructed range");

    std::size_t i0 = 2 * m + std::size_t(j);
    std::size_t imid = i0 + 1;
    std::size_t i1 = i0 + 2;
    dd L0 = log_ell_s(c, i0); // log ell of s_{2m+j}
    dd L1 = log_ell_s(c, i1);
    // n_{2m+j} / n_{2m+1+j} < 1; the product delta * ratio can underflow any
    // float, so it is only ever handled through its log
    dd log_ratio = c.term(i0).log_n - c.term(imid).log_n;
    dd del(delta);
    dd log_dr = dd_log(del) + log_ratio;
    if (!(log_dr < dd(0.0)))
        throw std::domain_error("interval: delta n_{2m+j}/n_{2m+1+j} >= 1");
    dd dr = dd_exp(log_dr);

    Interval I;
    I.m = m;
    I.j = j;
    // ell(min I) = (1-delta) ell(s_{2m+j}) + delta ell(s_{2(m+1)+j})
    I.log_ell_lo = log_sum(dd_log(dd(1.0) - del) + L0, dd_log(del) + L1);
    // ell(max I) = dr * ell(s_{2m+j}) + (1 - dr) ell(s_{2(m+1)+j})
    I.log_ell_hi = log_sum(log_dr + L0, dd_log1p(-dr) + L1);
    if (!(I.log_ell_hi < I.log_ell_lo) || !(I.log_ell_lo < L0) || !(I.log_ell_hi > L1))
        throw std::domain_error("interval: endpoints escaped (s_{2m+j}, s_{2(m+1)+j})");
    I.lo_log = radius_log_from_log_ell(I.log_ell_lo);
    I.hi_log = radius_log_from_log_ell(I.log_ell_hi);
    I.representable = I.log_ell_hi.hi >= -700.0 && I.log_ell_lo.hi >= -700.0;
    return I;
}

std::vector<Interval> interval_system(const Construction& c, int j, double delta) {
    std::vector<Interval> out;
    for (std::size_t m = 1; m <= max_interval_index(c, j); ++m)
        out.push_back(interval(c, j, m, delta));
    return out;
}

CoverReport covering_check(const Construction& c, double delta, std::size_t M) {
    std::size_t m0 = max_interval_index(c, 0);
    std::size_t m1 = max_interval_index(c, 1);
    std::size_t cap = std::min(m0 > 0 ? m0 - 1 : 0, m1);
    if (M < 1 || M > cap)
        throw std::domain_error("covering_check: M out of constructed range (max " +
                                std::to_string(cap) + ")");
    CoverReport rep;
    rep.pass = true;
    for (std::size_t m = 1; m <= M; ++m) {
        Interval I0 = interval(c, 0, m, delta);
        Interval I1 = interval(c, 1, m, delta);
        Interval I0n = interval(c, 0, m + 1, delta);
        CoverRow row;
        row.m = m;
        row.lo0 = I0.lo_log.to_double();
        row.hi0 = I0.hi_log.to_double();
        row.lo1 = I1.lo_log.to_double();
        row.hi1 = I1.hi_log.to_double();
        // min I_{2m+1} <= max I_{2m}  <=>  ell(min I_{2m+1}) >= ell(max I_{2m})
        row.margin1 = (I1.log_ell_lo - I0.log_ell_hi).to_double();
        row.margin2 = (I0n.log_ell_lo - I1.log_ell_hi).to_double();
        row.ok1 = row.margin1 >= 0.0;
        row.ok2 = row.margin2 >= 0.0;
        if (!(row.ok1 && row.ok2)) {
            rep.pass = false;
            if (rep.first_failing_m == 0) rep.first_failing_m = m;
        }
        rep.rows.push_back(row);
    }
    return rep;
}

void write_cover_csv(const CoverReport& rep, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open '" + path + "'");
    os << "m,lo0,hi0,lo1,hi1,margin1,margin2\n";
    char buf[256];
    for (const auto& r : rep.rows) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      r.m, r.lo0, r.hi0, r.lo1, r.hi1, r.margin1, r.margin2);
        os << buf;
    }
}

double lower_density_estimate(const std::vector<Interval>& intervals, dd r_ell) {
    if (intervals.empty()) return 0.0;
    // complement coordinates: interval [lo, hi] in radius covers
    // eps in [eps(hi), eps(lo)]; sub-double tails contribute exact zeros
    double eps_r = (-dd_expm1(-r_ell)).to_double();
    double eps_cov = 1.0;
    for (const auto& I : intervals)
        eps_cov = std::min(eps_cov, -std::expm1(I.hi_log.to_double()));
    if (!(eps_r > eps_cov))
        throw std::domain_error("lower_density_estimate: r beyond covered range");
    double covered = 0.0;
    for (const auto& I : intervals) {
        double lo_eps = -std::expm1(I.lo_log.to_double()); // bigger eps
        double hi_eps = -std::expm1(I.hi_log.to_double()); // smaller eps
        double a = std::min(lo_eps, eps_r);
        double b = std::max(hi_eps, eps_cov);
        if (a > b) covered += a - b;
    }
    return covered / (eps_r - eps_cov);
}

} // namespace maxprod
