#include "maxprod/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace maxprod {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kQMax = 1u << 20;

dd log_omega(const Weight& w, const Radius& r) {
    dd x = (r.eps >= 1.0) ? dd(0.0) : -dd_log(dd(r.eps));
    return w.log_eval_x(x);
}

// quadrature radii are pushed off zero circles by ell -> ell (1 + 1e-9);
// log|f| has its integrable singularities exactly on them
Radius nudged(const Product& p, Radius r) {
    for (const auto& f : p.factors) {
        if (!(f.log_a.hi > 0.0)) continue;
        dd log_ls = dd_log(f.log_a) - f.log_n;
        if (log_ls.hi < -740.0) break;
        double rel = ((r.ell - dd_exp(log_ls)) / r.ell).to_double();
        if (std::abs(rel) < 1e-12) return Radius::from_ell(r.ell * dd(1.0 + 1e-9));
    }
    return r;
}

struct LevelEstimate {
    double value;
    double log_value;
};

LevelEstimate reduce_samples(const std::vector<double>& s, MeanMode mode, double p_exp) {
    const std::size_t n = s.size();
    switch (mode) {
    case MeanMode::Log: {
        double sum = 0.0;
        for (double v : s) sum += std::max(v, -800.0); // off-circle -inf cannot occur
        return {sum / double(n), 0.0};
    }
    case MeanMode::LogPlus: {
        double sum = 0.0;
        for (double v : s) sum += std::max(0.0, v);
        return {sum / double(n), 0.0};
    }
    case MeanMode::Power: {
        double m = -kInf;
        for (double v : s) m = std::max(m, p_exp * v);
        if (m == -kInf) return {0.0, -kInf};
        double acc = 0.0;
        for (double v : s) acc += std::exp(p_exp * v - m);
        double log_mean = m + std::log(acc / double(n));
        return {std::exp(log_mean), log_mean};
    }
    }
    return {0.0, 0.0};
}

} // namespace

int decade_of_ell(double ell) {
    return int(std::floor(std::log10(1.0 / ell) + 1e-9));
}

MeanResult circle_mean(const Product& p, Radius r, std::uint64_t q0, MeanMode mode,
                       double p_exp, double quad_tol, double trunc_tol) {
    if (q0 < 64 || (q0 & (q0 - 1)) != 0)
        throw std::domain_error("circle_mean: q must be a power of two >= 64");
    if (mode == MeanMode::Power && !(p_exp > 0.0))
        throw std::domain_error("circle_mean: p_exp must be positive");

    Radius rr = nudged(p, r);
    PreparedCircle pc = prepare_circle(p, rr, trunc_tol);

    MeanResult res;
    LevelEstimate prev{0.0, 0.0};
    bool have_prev = false;
    std::vector<double> buf;
    for (std::uint64_t q = q0; q <= kQMax; q <<= 1) {
        std::int64_t den = coprime_denominator(p, rr, std::int64_t(q), trunc_tol);
        pc.prepare_angles(den);
        buf.resize(std::size_t(den));
        sample_circle(pc, den, buf);
        LevelEstimate est = reduce_samples(buf, mode, p_exp);
        res.q_used = q;
        res.den_used = den;
        if (have_prev) {
            bool conv;
            if (mode == MeanMode::Power) {
                conv = (est.log_value == -kInf && prev.log_value == -kInf) ||
                       std::abs(est.log_value - prev.log_value) <= quad_tol;
            } else {
                conv = std::abs(est.value - prev.value) <=
                       quad_tol * std::max(std::abs(est.value), 1.0);
            }
            if (conv) {
                res.value = est.value;
                res.log_value = est.log_value;
                res.prev_value = prev.value;
                res.converged = true;
                return res;
            }
        }
        prev = est;
        have_prev = true;
        res.value = est.value;
        res.log_value = est.log_value;
    }
    res.converged = false; // reported with the last two estimates
    res.prev_value = prev.value;
    return res;
}

MaxModulusResult max_modulus(const Product& p, Radius r, double trunc_tol) {
    Radius rr = nudged(p, r);
    PreparedCircle pc = prepare_circle(p, rr, trunc_tol);
    std::int64_t den = coprime_denominator(p, rr, 1024, trunc_tol);
    pc.prepare_angles(den);
    std::vector<double> buf(static_cast<std::size_t>(den), 0.0);
    sample_circle(pc, den, buf);

    // top 8 coarse cells, refined independently
    std::vector<std::size_t> idx(buf.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::partial_sort(idx.begin(), idx.begin() + std::min<std::size_t>(8, idx.size()),
                      idx.end(), [&](std::size_t a, std::size_t b) { return buf[a] > buf[b]; });

    double best = -kInf;
    for (std::size_t t = 0; t < std::min<std::size_t>(8, idx.size()); ++t) {
        std::int64_t cnum = std::int64_t(idx[t]);
        std::int64_t cden = den;
        double cur = buf[idx[t]];
        for (int depth = 0; depth < 18 && cden < (std::int64_t(1) << 55); ++depth) {
            std::int64_t nden = cden * 8;
            pc.prepare_angles(nden);
            std::int64_t base = cnum * 8;
            double lbest = cur;
            std::int64_t lnum = base;
            for (std::int64_t d = -8; d <= 8; ++d) {
                std::int64_t num = ((base + d) % nden + nden) % nden;
                double v = eval_prepared(pc, num, nden);
                if (v > lbest) { lbest = v; lnum = num; }
            }
            double gain = lbest - cur;
            cnum = lnum;
            cden = nden;
            cur = lbest;
            if (gain < 1e-9) break;
        }
        best = std::max(best, cur);
    }
    MaxModulusResult res;
    res.log_max = best;
    res.max = std::exp(best);
    res.base_den = den;
    return res;
}

BigUint counting_function(const Product& p, Radius r) {
    BigUint total;
    for (const auto& zc : p.zeros_up_to(r)) total += zc.n;
    return total;
}

CountingData counting_data(const Product& p, std::vector<Radius> radii) {
    std::sort(radii.begin(), radii.end(),
              [](const Radius& a, const Radius& b) { return b.ell < a.ell; });
    CountingData data;
    data.radii = std::move(radii);
    for (const auto& r : data.radii) {
        data.n_values.push_back(counting_function(p, r));
        data.N_values.push_back(integrated_counting(p, r, {0.0, 0.0}));
    }
    return data;
}

double integrated_counting(const Product& p, Radius r, std::complex<double> a,
                           double trunc_tol) {
    if (a == std::complex<double>(0.0, 0.0)) {
        // N(r,0) = sum n_m log(r/s_m) = sum n_m (ell_s - ell), exact; the
        // products n (ell_s - ell) go through logs so huge n never overflows
        double total = 0.0;
        for (const auto& f : p.factors) {
            if (!(f.log_a.hi > 0.0)) continue;
            dd log_ls = dd_log(f.log_a) - f.log_n;
            if (log_ls.hi < -740.0) break;
            dd ls = dd_exp(log_ls);
            if (!(ls >= r.ell)) break;
            dd gap = ls - r.ell;
            if (!(gap.hi > 0.0)) continue;
            total += dd_exp(f.log_n + dd_log(gap)).to_double();
        }
        return total;
    }

    // Jensen-numeric route; base point shifts off 0 when a = f(0) = 1
    double base;
    if (std::abs(a - std::complex<double>(1.0, 0.0)) < 1e-14) {
        base = 0.0;
        bool found = false;
        for (double eps0 : {0.5, 0.375, 0.25, 0.125, 0.0625}) {
            DiscPoint z0(Radius::from_eps(eps0), 1, 7);
            std::complex<double> f0 = p.eval(z0, trunc_tol);
            if (std::abs(f0 - a) > 1e-6) { base = std::log(std::abs(f0 - a)); found = true; break; }
        }
        if (!found)
            throw std::domain_error("integrated_counting: cannot recenter away from a = f(0)");
    } else {
        base = std::log(std::abs(std::complex<double>(1.0, 0.0) - a));
    }

    Radius rr = nudged(p, r);
    PreparedCircle pc = prepare_circle(p, rr, trunc_tol);
    double prev = 0.0;
    bool have_prev = false;
    double est = 0.0;
    for (std::uint64_t q = 256; q <= kQMax; q <<= 1) {
        std::int64_t den = coprime_denominator(p, rr, std::int64_t(q), trunc_tol);
        pc.prepare_angles(den);
        double sum = 0.0;
        for (std::int64_t i = 0; i < den; ++i) {
            double L = eval_prepared(pc, i, den);
            double sample;
            if (L > 230.0) {
                sample = L; // |a| is negligible against |f|
            } else {
                std::complex<double> f = eval_prepared_complex(pc, i, den);
                double d = std::abs(f - a);
                sample = d == 0.0 ? -800.0 : std::log(d);
            }
            sum += sample;
        }
        est = sum / double(den);
        if (have_prev && std::abs(est - prev) <= 1e-6 * std::max(std::abs(est), 1.0)) break;
        prev = est;
        have_prev = true;
    }
    return est - base;
}

double characteristic(const Product& p, Radius r, double trunc_tol) {
    return circle_mean(p, r, 256, MeanMode::LogPlus, 1.0, 1e-8, trunc_tol).value;
}

// ---- theorem verification ----

namespace {

struct BandAccumulator {
    std::map<int, std::pair<double, double>> per_decade;
    void add(int decade, double v) {
        auto it = per_decade.find(decade);
        if (it == per_decade.end()) per_decade.emplace(decade, std::make_pair(v, v));
        else {
            it->second.first = std::min(it->second.first, v);
            it->second.second = std::max(it->second.second, v);
        }
    }
};

double ls_slope(const std::vector<std::pair<double, double>>& pts) {
    if (pts.size() < 2) return 0.0;
    double sx = 0, sy = 0;
    for (auto& q : pts) { sx += q.first; sy += q.second; }
    double mx = sx / double(pts.size()), my = sy / double(pts.size());
    double num = 0, den = 0;
    for (auto& q : pts) {
        num += (q.first - mx) * (q.second - my);
        den += (q.first - mx) * (q.first - mx);
    }
    return den == 0.0 ? 0.0 : num / den;
}

RatioReport finalize_report(std::string name, const BandAccumulator& acc,
                            int band_lo, int band_hi, bool checked,
                            std::string note = "") {
    RatioReport rep;
    rep.name = std::move(name);
    rep.per_decade = acc.per_decade;
    rep.checked = checked;
    rep.note = std::move(note);
    rep.inf = kInf;
    rep.sup = -kInf;
    for (auto& [d, iv] : rep.per_decade) {
        rep.inf = std::min(rep.inf, iv.first);
        rep.sup = std::max(rep.sup, iv.second);
    }
    if (!checked) return rep;

    bool pos = true;
    std::vector<std::pair<double, double>> lo_pts, hi_pts;
    for (auto& [d, iv] : rep.per_decade) {
        if (d < band_lo || d > band_hi) continue;
        if (!(iv.first > 0.0) || !std::isfinite(iv.second)) pos = false;
        else {
            lo_pts.push_back({double(d), std::log2(iv.first)});
            hi_pts.push_back({double(d), std::log2(iv.second)});
        }
    }
    rep.positive_finite = pos && !lo_pts.empty();
    rep.drift_inf = ls_slope(lo_pts);
    rep.drift_sup = ls_slope(hi_pts);
    // The bands of a valid construction oscillate with the construction's own
    // period (3 decades for the dyadic weight); a secular-drift fit needs a
    // window long enough to average that out.  Below six decades the slopes
    // are reported but not judged.
    if (lo_pts.size() >= 6) {
        rep.drift_ok = std::abs(rep.drift_inf) < 1.0 && std::abs(rep.drift_sup) < 1.0;
    } else {
        rep.drift_ok = true;
        if (!rep.note.empty()) rep.note += "; ";
        rep.note += "window below 6 decades: drift reported, not judged";
    }
    return rep;
}

std::int64_t coprime_denominator_two(const Product& p0, const Product& p1, Radius r,
                                     std::int64_t q, double tol) {
    TruncationResult t0 = p0.truncation_index(r, tol);
    TruncationResult t1 = p1.truncation_index(r, tol);
    std::int64_t den = q + 1;
    if (den % 2 == 0) ++den;
    auto clean = [&](const Product& p, const TruncationResult& t, std::int64_t d) {
        for (std::size_t k = 0; k < t.k_used; ++k) {
            const Factor& f = p.factors[k];
            if (!f.n_materialized) continue;
            if (gcd_u64(f.n.mod_u64(uint64_t(d)), uint64_t(d)) != 1) return false;
        }
        return true;
    };
    for (;; den += 2)
        if (clean(p0, t0, den) && clean(p1, t1, den)) return den;
}

} // namespace

TheoremReport verify_theorem(const Construction& c, const Product& f0, const Product& f1,
                             const Weight& w, const GridSpec& gs) {
    TheoremReport rep;
    rep.grid = gs;
    rep.delta_used = gs.delta > 0.0 ? gs.delta : delta_bound(c);
    const int band_lo = std::min(gs.band_lo, gs.decades);
    const int band_hi = gs.decades;
    const double slack = 1e-4 + 0.6931471805599453;

    // certified range: every grid radius must pass truncation at the tolerance
    double min_ell = std::max(f0.min_certified_ell(gs.trunc_tol),
                              f1.min_certified_ell(gs.trunc_tol));
    double deepest = std::pow(10.0, -double(gs.decades));
    if (deepest < min_ell) {
        int usable = decade_of_ell(min_ell);
        throw TruncationError("verify_theorem: construction depth certifies only " +
                                  std::to_string(usable) + " decades; requested " +
                                  std::to_string(gs.decades),
                              min_ell);
    }

    const Product* prods[2] = {&f0, &f1};
    for (int j = 0; j < 2; ++j) {
        double fz = prods[j]->first_zero_ell();
        rep.first_zero_decade[j] = std::isfinite(fz) && fz > 0.0
                                       ? std::log10(1.0 / fz)
                                       : 999.0;
    }

    // ---- grid radii: decade points + interval endpoints + E_j log-midpoints
    auto ints0 = interval_system(c, 0, rep.delta_used);
    auto ints1 = interval_system(c, 1, rep.delta_used);
    std::vector<dd> ell_list;
    for (int d = 1; d <= gs.decades; ++d) ell_list.push_back(dd_exp(dd_ln10 * double(-d)));
    if (gs.include_endpoints) {
        auto push_interval_radii = [&](const std::vector<Interval>& ints) {
            for (const auto& I : ints) {
                if (I.log_ell_lo.hi < -700.0) continue; // fully below double range
                dd hi_ell = -I.lo_log;
                if (I.representable) {
                    dd lo_ell = -I.hi_log;
                    dd mid = dd_exp(ldexp(dd_log(lo_ell) + dd_log(hi_ell), -1));
                    for (dd e : {hi_ell, lo_ell, mid}) {
                        if (e.hi >= deepest * (1.0 - 1e-12) && e.hi <= 0.11)
                            ell_list.push_back(e);
                    }
                } else {
                    // deep end off the double scale: probe the shallow endpoint
                    // and one decade into the interval
                    for (dd e : {hi_ell, hi_ell / 10.0}) {
                        if (e.hi >= deepest * (1.0 - 1e-12) && e.hi <= 0.11)
                            ell_list.push_back(e);
                    }
                }
            }
        };
        push_interval_radii(ints0);
        push_interval_radii(ints1);
    }
    std::sort(ell_list.begin(), ell_list.end(), [](dd a, dd b) { return b < a; });
    ell_list.erase(std::unique(ell_list.begin(), ell_list.end(),
                               [](dd a, dd b) { return std::abs((a - b).to_double()) <
                                                       1e-14 * std::abs(a.hi); }),
                   ell_list.end());

    // ---- accumulators
    BandAccumulator acc_r1;
    std::map<std::string, BandAccumulator> acc_r2;
    std::map<std::string, BandAccumulator> acc_r3;
    rep.ej_inf[0] = rep.ej_inf[1] = kInf;
    rep.sup_log_ratio = -kInf;
    bool ej_seen[2] = {false, false};
    rep.chain_ok = true;

    const char* pnames[4] = {"p=1/2", "p=1", "p=2", "p=inf"};
    const double pvals[3] = {0.5, 1.0, 2.0};

    std::vector<double> buf0, buf1;
    for (const dd& ell : ell_list) {
        Radius r0 = Radius::from_ell(ell);
        Radius r = nudged(f1, nudged(f0, r0));
        int dec = decade_of_ell(r.ell.hi);
        double W = log_omega(w, r).to_double();
        rep.grid_ells.push_back(r.ell.hi);

        // pointwise samples for R1, shared angle grid
        std::int64_t den = coprime_denominator_two(f0, f1, r, gs.angles, gs.trunc_tol);
        PreparedCircle pc0 = prepare_circle(f0, r, gs.trunc_tol);
        PreparedCircle pc1 = prepare_circle(f1, r, gs.trunc_tol);
        pc0.prepare_angles(den);
        pc1.prepare_angles(den);
        buf0.resize(std::size_t(den));
        buf1.resize(std::size_t(den));
        sample_circle(pc0, den, buf0);
        sample_circle(pc1, den, buf1);

        double min_l[2] = {kInf, kInf};
        for (std::int64_t i = 0; i < den; ++i) {
            double L0 = buf0[std::size_t(i)], L1 = buf1[std::size_t(i)];
            double v = std::exp(L0 - W) + std::exp(L1 - W);
            acc_r1.add(dec, v);
            min_l[0] = std::min(min_l[0], L0);
            min_l[1] = std::min(min_l[1], L1);
            rep.sup_log_ratio = std::max({rep.sup_log_ratio, L0 - W, L1 - W});
            if (gs.keep_samples)
                rep.r1_samples.push_back({r.eps, i, den, v});
        }

        // E_j membership and the minimum-modulus data
        double logr = -r.ell.to_double();
        for (int j = 0; j < 2; ++j) {
            const auto& ints = j == 0 ? ints0 : ints1;
            for (const auto& I : ints) {
                if (I.log_ell_lo.hi < -700.0) continue;
                // an unrepresentable deep end means every deeper double radius
                // is inside the interval
                bool member = I.representable
                                  ? (logr >= I.lo_log.to_double() &&
                                     logr <= I.hi_log.to_double())
                                  : (logr >= I.lo_log.to_double());
                if (member) {
                    if (min_l[j] > -kInf) {
                        rep.ej_inf[j] = std::min(rep.ej_inf[j], min_l[j] - W);
                        ej_seen[j] = true;
                    }
                    break;
                }
            }
        }

        // means, maximum modulus, characteristic, counting
        for (int j = 0; j < 2; ++j) {
            const Product& p = *prods[j];
            double logM = 0.0;
            bool have_logM = false;
            if (gs.with_means) {
                for (int pi = 0; pi < 3; ++pi) {
                    MeanResult mr = circle_mean(p, r, 256, MeanMode::Power, pvals[pi], 1e-6,
                                                gs.trunc_tol);
                    double log_mp = mr.log_value / pvals[pi];
                    acc_r2[std::string(pnames[pi]) + ",j=" + std::to_string(j)].add(
                        dec, std::exp(log_mp - W));
                }
                MaxModulusResult mm = max_modulus(p, r, gs.trunc_tol);
                logM = mm.log_max;
                have_logM = true;
                acc_r2[std::string(pnames[3]) + ",j=" + std::to_string(j)].add(
                    dec, std::exp(logM - W));
            }
            if (gs.with_tn) {
                double T = circle_mean(p, r, 256, MeanMode::LogPlus, 1.0, 1e-8, gs.trunc_tol).value;
                double N0 = integrated_counting(p, r, {0.0, 0.0}, gs.trunc_tol);
                acc_r3["T,j=" + std::to_string(j)].add(dec, T / W);
                acc_r3["N,j=" + std::to_string(j)].add(dec, N0 / W);

                if (!have_logM) logM = max_modulus(p, r, gs.trunc_tol).log_max;
                ChainRow row;
                row.ell = r.ell.hi;
                row.j = j;
                row.N0 = N0;
                row.T = T;
                row.logM = logM;
                row.ok = (N0 <= T + slack) && (T <= std::max(logM, 0.0) + slack);
                rep.chain.push_back(row);
                rep.chain_ok = rep.chain_ok && row.ok;
            }
        }
    }

    // joint-maximality probes at constructed zero points: |f_j| vanishes there
    // and the other parity must carry the bound
    for (int j = 0; j < 2; ++j) {
        const Product& self = *prods[j];
        const Product& other = *prods[1 - j];
        for (const auto& zc : self.zeros_up_to(Radius::from_ell(dd(deepest)))) {
            if (zc.ell.hi > 0.11) continue;
            if (!zc.n.fits_u64() || zc.n.as_u64() > (uint64_t(1) << 62)) continue;
            uint64_t n = zc.n.as_u64();
            Radius r = Radius::from_ell(zc.ell);
            double W = log_omega(w, r).to_double();
            int dec = decade_of_ell(r.ell.hi);
            for (uint64_t l : {uint64_t(0), n / 3, (2 * n) / 5}) {
                if (l >= n) continue;
                DiscPoint pt(r, std::int64_t(2 * l + 1), std::int64_t(2 * n));
                double Lo = other.log_modulus(pt, gs.trunc_tol);
                double v = std::exp(Lo - W); // self contributes exactly 0
                acc_r1.add(dec, v);
                if (gs.keep_samples) rep.r1_samples.push_back({r.eps, pt.num, pt.den, v});
            }
        }
    }

    // ---- verdicts
    rep.r1 = finalize_report("(|f0|+|f1|)/omega", acc_r1, band_lo, band_hi, true);
    for (auto& [key, acc] : acc_r2)
        rep.r2[key] = finalize_report("M_" + key, acc, band_lo, band_hi, true);
    for (auto& [key, acc] : acc_r3) {
        int j = key.back() - '0';
        bool active = rep.first_zero_decade[j] <= double(band_lo);
        rep.r3[key] = finalize_report(key + "/log omega", acc, band_lo, band_hi, active,
                                      active ? "" : "inactive on the probed decades; first zero circle at decade " +
                                                        std::to_string(rep.first_zero_decade[j]));
    }

    rep.pass = rep.r1.pass() && rep.chain_ok;
    for (auto& [k, v] : rep.r2) rep.pass = rep.pass && v.pass();
    for (auto& [k, v] : rep.r3) rep.pass = rep.pass && v.pass();
    for (int j = 0; j < 2; ++j)
        if (ej_seen[j] && !std::isfinite(rep.ej_inf[j])) rep.pass = false;

    if (!rep.pass) {
        std::string why;
        if (!rep.r1.pass()) why += "R1 band; ";
        for (auto& [k, v] : rep.r2) if (!v.pass()) why += "R2 " + k + "; ";
        for (auto& [k, v] : rep.r3) if (!v.pass()) why += "R3 " + k + "; ";
        if (!rep.chain_ok) why += "N<=T<=logM chain; ";
        rep.fail_reason = why;
    }
    return rep;
}

CountingBoundReport counting_bound_check(const Construction& c, const Product& p) {
    CountingBoundReport rep;
    rep.min_nns = kInf;
    rep.max_nns = -kInf;
    rep.single_ok = true;
    const double log4 = 1.3862943611198906;
    for (std::size_t m = 0; m < p.factors.size(); ++m) {
        const Factor& f = p.factors[m];
        if (!(f.log_a.hi > 0.0)) continue;
        dd log_ls = dd_log(f.log_a) - f.log_n;
        dd ls = log_ls.hi < -700.0 ? dd(0.0) : dd_exp(log_ls);
        // n_m (1 - s_m) = log(a_m) * (1 - e^-ell)/ell, stable at any depth
        dd phi = ls.hi > 0.0 ? -dd_expm1(-ls) / ls : dd(1.0);
        double own = (f.log_a * phi).to_double();
        double cum = 0.0;
        for (std::size_t k = 0; k <= m; ++k)
            cum += dd_exp(p.factors[k].log_n - f.log_n).to_double();
        CountingBoundRow row;
        row.construction_index = f.construction_index;
        row.ell_s = ls.to_double();
        row.log10_inv_ell = (-log_ls / dd_ln10).to_double();
        row.own = own;
        row.nns = own * cum;
        if (ls.hi < log4 && ls.hi > 0.0) { // s_m > 1/4
            row.single_checked = true;
            double la = f.log_a.to_double();
            row.single_ok = own >= la / 2.0 - 1e-12 && own <= la + 1e-12;
            rep.single_ok = rep.single_ok && row.single_ok;
        }
        rep.min_nns = std::min(rep.min_nns, row.nns);
        rep.max_nns = std::max(rep.max_nns, row.nns);
        rep.rows.push_back(row);
    }
    rep.bounded_ok = !rep.rows.empty() && rep.min_nns > 0.0 &&
                     rep.max_nns / rep.min_nns < 10.0;
    (void)c;
    return rep;
}

JensenReport jensen_identity_check(const Product& p, std::size_t count,
                                   double assert_tol, double trunc_tol) {
    JensenReport rep;
    std::vector<double> log_ells; // log(ell) of candidate radii, off-circle
    std::vector<double> circle_log_ells;
    for (const auto& f : p.factors) {
        if (!(f.log_a.hi > 0.0)) continue;
        dd lls = dd_log(f.log_a) - f.log_n;
        if (lls.hi < std::log(1e-250)) break;
        circle_log_ells.push_back(lls.to_double());
    }
    if (circle_log_ells.empty())
        throw std::domain_error("jensen_identity_check: no zero circles in range");
    double min_cert = p.min_certified_ell(trunc_tol);
    double floor_log = std::log(std::max(2.0 * min_cert, 1e-250));

    log_ells.push_back(circle_log_ells.front() + std::log(4.0)); // below the first circle
    log_ells.push_back(circle_log_ells.front() + std::log(2.0));
    for (std::size_t i = 0; i + 1 < circle_log_ells.size(); ++i) {
        double a = circle_log_ells[i], b = circle_log_ells[i + 1];
        for (int t = 1; t <= 5; ++t) log_ells.push_back(a + (t / 6.0) * (b - a));
    }
    // descend past the last circle in whole decades
    double last = circle_log_ells.back();
    for (int k = 1; log_ells.size() < 4 * count; ++k) {
        double cand = last - double(k) * dd_ln10.hi;
        if (cand < floor_log) break;
        log_ells.push_back(cand);
    }
    if (log_ells.size() > count) {
        std::vector<double> pick;
        double stride = double(log_ells.size()) / double(count);
        for (std::size_t i = 0; i < count; ++i)
            pick.push_back(log_ells[std::size_t(double(i) * stride)]);
        log_ells = pick;
    }

    rep.pass = true;
    for (double le : log_ells) {
        Radius r = Radius::from_ell(dd_exp(dd(le)));
        MeanResult mr = circle_mean(p, r, 256, MeanMode::Log, 1.0, 1e-8, trunc_tol);
        double exact = integrated_counting(p, r, {0.0, 0.0}, trunc_tol);
        JensenRow row;
        row.ell = r.ell.hi;
        row.quad = mr.value;
        row.exact = exact;
        row.err = std::abs(mr.value - exact);
        row.converged = mr.converged;
        rep.max_err = std::max(rep.max_err, row.err);
        rep.pass = rep.pass && row.converged && row.err < assert_tol;
        rep.rows.push_back(row);
    }
    return rep;
}

DensityReport density_profile(const std::vector<Interval>& all) {
    DensityReport rep;
    // rows need a representable lo endpoint; a hi endpoint beyond double range
    // just means the interval runs off to the boundary as far as doubles care
    std::vector<Interval> usable;
    for (const auto& I : all)
        if (I.log_ell_lo.hi >= -700.0) usable.push_back(I);
    if (usable.empty()) return rep;

    bool last_hi_real = -std::expm1(usable.back().hi_log.to_double()) > 0.0;
    rep.positive = true;
    for (std::size_t i = 0; i < usable.size(); ++i) {
        // at the deepest lo endpoint the window [r, 1_cov) collapses to the
        // interval itself and the ratio is trivially 1; skip it when there is
        // anything else to tabulate
        if (i + 1 == usable.size() && last_hi_real && usable.size() > 1) break;
        const auto& I = usable[i];
        DensityRow row;
        row.m = I.m;
        row.ell_r = -I.lo_log.to_double();
        row.ratio = lower_density_estimate(all, -I.lo_log);
        rep.positive = rep.positive && row.ratio > 0.0;
        rep.rows.push_back(row);
    }
    if (rep.rows.empty()) { rep.positive = false; return rep; }
    std::size_t n = rep.rows.size();
    if (n >= 2) {
        double mn = kInf, mx = -kInf;
        for (std::size_t i = n >= 3 ? n - 3 : 0; i < n; ++i) {
            mn = std::min(mn, rep.rows[i].ratio);
            mx = std::max(mx, rep.rows[i].ratio);
        }
        rep.tail_stable = mn > 0.0 && mx / mn < 2.0;
    } else {
        rep.tail_stable = rep.positive;
    }
    return rep;
}

void write_samples_csv(const std::vector<SampleRow>& rows, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open '" + path + "'");
    os << "eps,theta_num,theta_den,value\n";
    char buf[160];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%lld,%lld,%.17g\n", r.eps,
                      (long long)r.num, (long long)r.den, r.value);
        os << buf;
    }
}

} // namespace maxprod
