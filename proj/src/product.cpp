#include "maxprod/product.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace maxprod {

using u128 = unsigned __int128;

namespace {

// Relative half-width of the "exactly on the zero circle" snap window.  Wide
// enough that a zero radius reconstructed through a double eps still lands on
// the circle, narrow enough that approach probes at 1e-12 stay finite.
constexpr double kCircleSnapRel = 1e-13;

constexpr double kInf = std::numeric_limits<double>::infinity();

} // namespace

Radius Radius::from_eps(double eps) {
    if (!(eps > 0.0) || eps > 1.0)
        throw std::domain_error("Radius: eps must lie in (0, 1]");
    Radius r;
    r.eps = eps;
    if (eps == 1.0) r.ell = dd(1e300); // z = 0
    else if (eps >= 0.5) r.ell = -dd_log(dd(1.0) - dd(eps));
    else r.ell = -dd_log1p(dd(-eps));
    return r;
}

Radius Radius::from_ell(dd ell) {
    if (!(ell.hi > 0.0))
        throw std::domain_error("Radius: ell must be positive");
    Radius r;
    r.ell = ell;
    r.eps = ell.hi > 0.7 ? 1.0 - std::exp(-ell.to_double())
                         : (-dd_expm1(-ell)).to_double();
    if (r.eps > 1.0) r.eps = 1.0;
    if (r.eps <= 0.0) r.eps = ell.hi; // sub-denormal ell: eps == ell to all bits
    return r;
}

DiscPoint::DiscPoint(Radius r, std::int64_t n, std::int64_t d) : rad(r) {
    if (d == 0) throw std::domain_error("DiscPoint: zero angle denominator");
    if (d < 0) { d = -d; n = -n; }
    n %= d;
    if (n < 0) n += d;
    std::int64_t g = std::gcd(n, d);
    if (g == 0) g = 1;
    num = n / g;
    den = d / g;
    if (num == 0) den = 1;
}

Product Product::from_construction(const Construction& c, int parity) {
    if (parity != 0 && parity != 1)
        throw std::domain_error("Product: parity must be 0 or 1");
    Product p;
    p.parity = parity;
    p.log_mu = c.log_mu;
    p.mu = c.mu();
    p.tau = c.tau;
    for (std::size_t i = 2 + std::size_t(parity); i + 2 <= c.K(); i += 2) {
        const auto& t = c.term(i);
        if (!t.has_a) break;
        if (!(t.log_a > dd(0.0)))
            throw std::domain_error("Product: factor with a <= 1 (construction invalid)");
        Factor f;
        f.log_a = t.log_a;
        f.a = dd_exp(t.log_a).to_double();
        f.log_n = t.log_n;
        f.n = t.n;
        f.n_materialized = t.n_materialized;
        f.construction_index = i;
        p.factors.push_back(std::move(f));
    }
    return p;
}

namespace {

// n * ell in dd, computed in log form so unmaterialized n never overflows
dd n_times_ell(const Factor& f, const Radius& r) {
    dd log_nl = f.log_n + dd_log(r.ell);
    if (log_nl.hi > 7.0) {
        // value > ~1100: only its order of magnitude matters
        return dd(std::min(log_nl.hi > 700.0 ? 1e300 : std::exp(log_nl.to_double()), 1e300));
    }
    return dd_exp(log_nl);
}

} // namespace

TruncationResult Product::truncation_index(Radius r, double tol) const {
    if (!(tol > 0.0) || !(tol < 0.5))
        throw std::domain_error("truncation_index: tol must lie in (0, 1/2)");
    if (factors.empty())
        throw std::domain_error("truncation_index: product has no factors");

    const double one_plus_mu = 1.0 + mu;
    const std::size_t M = factors.size();
    std::vector<double> term(M);
    for (std::size_t k = 0; k < M; ++k) {
        dd nl = n_times_ell(factors[k], r);
        term[k] = nl.hi > 745.0 ? 0.0 : std::exp(-nl.to_double());
    }

    // Bound on everything past the constructed list: the first omitted factor
    // has n >= tau^2 n_last, the ones after shrink by at least
    // exp(-(tau-1) tau^2 n_last ell) each.
    dd nl_last_dd = n_times_ell(factors[M - 1], r);
    double nl_last = std::min(nl_last_dd.to_double(), 1e6);
    double tau_d = tau.to_double();
    double first_beyond_exp = tau_d * tau_d * nl_last;
    double beyond;
    if (first_beyond_exp > 700.0) beyond = 0.0;
    else {
        double t1 = std::exp(-first_beyond_exp);
        double ratio = std::exp(-std::min((tau_d - 1.0) * first_beyond_exp, 700.0));
        beyond = ratio >= 1.0 ? kInf : t1 / (1.0 - ratio);
    }

    std::vector<double> suffix(M + 1);
    suffix[M] = beyond;
    for (std::size_t k = M; k-- > 0;) suffix[k] = suffix[k + 1] + term[k];

    for (std::size_t j = 0; j <= M; ++j) {
        double s = one_plus_mu * suffix[j];
        if (s < tol) {
            TruncationResult res;
            res.k_used = j;
            res.tail_log_bound = s / (1.0 - s);
            return res;
        }
    }

    // even the full list is not enough: name the smallest usable eps
    double nl_req = std::max(std::log(2.0 * one_plus_mu / tol) / (tau_d * tau_d),
                             0.694 / ((tau_d - 1.0) * tau_d * tau_d));
    dd log_ell_min = dd(std::log(nl_req)) - factors[M - 1].log_n;
    double ell_min = log_ell_min.hi < -700.0 ? 0.0 : std::exp(log_ell_min.to_double());
    double min_eps = ell_min > 1e-3 ? -std::expm1(-ell_min) : ell_min;
    throw TruncationError(
        "insufficient construction depth at this radius; need eps >= about " +
            std::to_string(min_eps),
        min_eps);
}

PreparedCircle prepare_circle(const Product& p, Radius r, double tol) {
    TruncationResult tr = p.truncation_index(r, tol);
    PreparedCircle pc;
    pc.k_used = tr.k_used;
    pc.tail_log_bound = tr.tail_log_bound;
    pc.pf.resize(tr.k_used);
    pc.src.resize(tr.k_used);
    for (std::size_t k = 0; k < tr.k_used; ++k) {
        const Factor& f = p.factors[k];
        pc.src[k] = &f;
        auto& pf = pc.pf[k];
        dd nl = n_times_ell(f, r);
        pf.dead = nl.hi > 745.0;
        pf.rho = pf.dead ? 0.0 : dd_exp(-nl).to_double();
        dd gap = f.log_a - nl; // log(a rho)
        pf.u = gap.hi > 700.0 ? 1e300 : std::exp(gap.to_double());
        dd gap_v0 = -(f.log_a + nl); // log(rho/a)
        pf.v = gap_v0.hi < -745.0 ? 0.0 : std::exp(gap_v0.to_double());
        pf.one_minus_u = std::abs(gap.hi) < 0.5 ? -dd_expm1(gap).to_double()
                                                : 1.0 - pf.u;
        pf.one_minus_v = std::abs(gap_v0.hi) < 0.5 ? -dd_expm1(gap_v0).to_double()
                                                   : 1.0 - pf.v;
        double window = kCircleSnapRel * std::max(1.0, f.log_a.hi);
        pf.on_circle = f.log_a.hi > 0.0 && std::abs(gap.to_double()) <= window;
        pf.n_mod_den = 0;
    }
    return pc;
}

void PreparedCircle::prepare_angles(std::int64_t den) {
    if (den <= 0) throw std::domain_error("prepare_angles: bad denominator");
    for (std::size_t k = 0; k < pf.size(); ++k) {
        if (pf[k].dead) { pf[k].n_mod_den = 0; continue; }
        const Factor& f = *src[k];
        // unmaterialized n means the factor is dead at any representable radius
        pf[k].n_mod_den = f.n_materialized ? f.n.mod_u64(uint64_t(den)) : 0;
    }
}

double eval_prepared(const PreparedCircle& pc, std::int64_t num, std::int64_t den) {
    double sum = 0.0;
    uint64_t uden = uint64_t(den);
    uint64_t unum = uint64_t(num % den);
    for (const auto& pf : pc.pf) {
        if (pf.dead) continue;
        uint64_t idx = uint64_t((u128(pf.n_mod_den) * unum) % uden);
        if (pf.on_circle && 2 * idx == uden) return -kInf;
        // cos^2(phi/2) = sin^2(pi (den - 2 idx)/(2 den)), sign squared away
        double half = std::sin(3.14159265358979323846 *
                               (double(den) - 2.0 * double(idx)) / (2.0 * double(den)));
        double s2 = half * half;
        double num_sq = pf.one_minus_u * pf.one_minus_u + 4.0 * pf.u * s2;
        double den_sq = pf.one_minus_v * pf.one_minus_v + 4.0 * pf.v * s2;
        if (num_sq == den_sq) continue; // a = 1: the factor is identically 1
        if (num_sq == 0.0) return -kInf;
        sum += 0.5 * (std::log(num_sq) - std::log(den_sq));
    }
    return sum;
}

std::complex<double> eval_prepared_complex(const PreparedCircle& pc,
                                           std::int64_t num, std::int64_t den) {
    std::complex<double> acc(1.0, 0.0);
    double log_scale = 0.0;
    uint64_t uden = uint64_t(den);
    uint64_t unum = uint64_t(((num % den) + den) % den);
    for (std::size_t k = 0; k < pc.pf.size(); ++k) {
        const auto& pf = pc.pf[k];
        if (pf.dead) continue;
        double a = pc.src[k]->a;
        uint64_t idx = uint64_t((u128(pf.n_mod_den) * unum) % uden);
        double phi = 6.283185307179586477 * (double(idx) / double(uden));
        std::complex<double> w = std::polar(pf.rho, phi);
        std::complex<double> numv = 1.0 + a * w;
        if (pf.on_circle && 2 * idx == uden) numv = 0.0;
        acc *= numv / (1.0 + w / a);
        double m = std::abs(acc);
        if (m > 1e150) { acc *= 1e-150; log_scale += 150.0 * 2.302585092994045684; }
        else if (m != 0.0 && m < 1e-150) { acc *= 1e150; log_scale -= 150.0 * 2.302585092994045684; }
    }
    return acc * std::exp(log_scale);
}

double Product::log_modulus(const DiscPoint& z, double tol) const {
    PreparedCircle pc = prepare_circle(*this, z.rad, tol);
    pc.prepare_angles(z.den);
    return eval_prepared(pc, z.num, z.den);
}

double Product::min_certified_ell(double tol) const {
    if (factors.empty()) return std::numeric_limits<double>::infinity();
    double tau_d = tau.to_double();
    double nl_req = std::max(std::log(2.0 * (1.0 + mu) / tol) / (tau_d * tau_d),
                             0.694 / ((tau_d - 1.0) * tau_d * tau_d));
    dd log_ell = dd(std::log(nl_req)) - factors.back().log_n;
    if (log_ell.hi < -740.0) return 0.0;
    return std::exp(log_ell.to_double());
}

std::complex<double> Product::eval(const DiscPoint& z, double tol) const {
    PreparedCircle pc = prepare_circle(*this, z.rad, tol);
    pc.prepare_angles(z.den);
    return eval_prepared_complex(pc, z.num, z.den);
}

std::vector<ZeroCircle> Product::zeros_up_to(Radius r) const {
    std::vector<ZeroCircle> out;
    for (const auto& f : factors) {
        if (!(f.log_a.hi > 0.0)) continue; // a = 1: no zeros
        dd log_ls = dd_log(f.log_a) - f.log_n;
        if (log_ls.hi < -740.0) break; // deeper than any representable radius
        dd ls = dd_exp(log_ls);
        // inclusive boundary s_m <= r, robust to the eps <-> ell round-trip
        if (!(ls >= r.ell * dd(1.0 - 1e-12))) break;
        ZeroCircle zc;
        zc.ell = ls;
        zc.eps = (-dd_expm1(-ls)).to_double();
        zc.s = std::exp(-ls.to_double());
        zc.n = f.n;
        zc.construction_index = f.construction_index;
        out.push_back(std::move(zc));
    }
    return out;
}

double Product::first_zero_ell() const {
    for (const auto& f : factors) {
        if (!(f.log_a.hi > 0.0)) continue;
        dd log_ls = dd_log(f.log_a) - f.log_n;
        if (log_ls.hi < -740.0) return 0.0;
        return std::exp(log_ls.to_double());
    }
    return kInf;
}

} // namespace maxprod
