#include "maxprod/construction.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace maxprod {

namespace {

// n_k stays an exact integer while log n <= this (~400 decimal digits).
// Beyond it a factor can never influence any evaluation point whose radius is
// representable, so only log n survives.
constexpr double kMaterializeXMax = 921.0;

// Below e^x ~ 1e26 the dd mantissa still resolves unit spacing, so the floor
// can be pinned down exactly (with a weight comparison at integer boundaries).
constexpr double kUnambiguousXMax = 59.8;

bool floor_predicate(const Weight& w, const BigUint& m, dd target) {
    // true iff 1/m >= eps_true, i.e. log omega(1-1/m) <= target (+ slack for
    // dd roundoff so that exact boundaries, like the dyadic weight's, land on
    // the integer)
    dd eta = dd(1e-25) * std::max(1.0, std::abs(target.hi));
    return w.log_eval_x(m.log_dd()) <= target + eta;
}

// floor(1/(1-t_k)) where x solves log_eval(x) = target.
BigUint floor_from_x(const Weight& w, dd x, dd target) {
    if (x.hi <= kUnambiguousXMax) {
        dd y = dd_exp(x);
        dd f = dd_floor(y);
        BigUint n = BigUint::floor_dd(y);
        dd frac = y - f;
        double window = std::max(y.hi * 3e-29, 1e-21);
        if (1.0 - frac.to_double() <= window) {
            BigUint up = n; up += 1;
            if (floor_predicate(w, up, target)) return up;
        } else if (frac.to_double() <= window && !n.is_zero()) {
            if (!floor_predicate(w, n, target)) { BigUint dn = n; dn -= 1; return dn; }
        }
        return n;
    }
    return BigUint::floor_exp_dd(x);
}

} // namespace

bool gamma_admissible(const DoublingCertificate& cert, dd gamma) {
    dd a = cert.alpha_dd;
    dd log2C = cert.log_C / dd_ln2;
    // 2^{gamma - alpha} / C > 1
    if (!(gamma > a + log2C)) return false;
    // (2g + a + log2 C)/(2g - a - log2 C) < 2^{-1/a} (2^{g/a} / C^{1/a} - 1)
    dd lhs = (gamma * 2.0 + a + log2C) / (gamma * 2.0 - a - log2C);
    dd tau = dd_exp((gamma * dd_ln2 - cert.log_C) / a) - 1.0;
    dd rhs = dd_exp2(dd(-1.0) / a) * tau;
    return lhs < rhs;
}

dd select_gamma(const DoublingCertificate& cert) {
    dd base = cert.alpha_dd + cert.log_C / dd_ln2;
    for (int m = 1;; ++m) {
        dd gamma = base + double(m) * 0.25;
        if (gamma.hi > 1e4)
            throw std::runtime_error("select_gamma: no admissible gamma below 1e4");
        if (gamma_admissible(cert, gamma)) return gamma;
    }
}

Construction build_sequence(const Weight& w, const DoublingCertificate& cert,
                            dd gamma, std::size_t K) {
    if (K < 5) throw std::domain_error("build_sequence: K must be at least 5");

    Construction c;
    c.weight_spec = w.name();
    c.gamma = gamma;
    c.alpha = cert.alpha_dd;
    c.log_C = cert.log_C;
    c.B = cert.B;
    c.requested_K = K;

    dd a = cert.alpha_dd;
    c.log_lambda = (gamma * 2.0 - a) * dd_ln2 - cert.log_C;
    c.log_mu = (gamma * 2.0 + a) * dd_ln2 + cert.log_C;
    c.d_const = dd_exp2(dd(-1.0) / a);
    c.tau = dd_exp((gamma * dd_ln2 - cert.log_C) / a) - 1.0;

    const dd x_max = w.x_max();
    const dd step = gamma * dd_ln2;

    dd x = dd_ln2; // t_1 = 1/2
    const dd target0 = w.log_eval_x(x);
    dd target = target0;
    for (std::size_t k = 1; k <= K; ++k) {
        ConstructionTerm t;
        t.x = x;
        if (x.hi <= kMaterializeXMax) {
            t.n = floor_from_x(w, x, target);
            t.n_materialized = true;
            t.log_n = t.n.log_dd();
        } else {
            // floor correction is below dd resolution out here
            t.log_n = x;
        }
        c.terms.push_back(std::move(t));
        if (k == K) break;

        // solve log_eval(x') = target + gamma log 2 on [x, x_max]
        // fused form target0 + step*k keeps the deep targets at one unit of
        // dd roundoff rather than an accumulated one
        dd next_target = target0 + step * double(k);
        if (w.log_eval_x(x_max) < next_target) {
            if (c.terms.size() >= 5) { c.truncated = true; break; }
            throw ConstructionError(
                "build_sequence: weight '" + w.name() +
                    "' cannot reach the next growth target inside its trusted range",
                k + 1);
        }
        dd lo = x, hi = x_max;
        // bisect to the dd fixed point; tolerance-independent by design so the
        // integer floors cannot wobble with solver settings
        for (int it = 0; it < 400; ++it) {
            dd mid = ldexp(lo + hi, -1);
            if (!(lo < mid) || !(mid < hi)) break;
            if (w.log_eval_x(mid) < next_target) lo = mid;
            else hi = mid;
        }
        x = ldexp(lo + hi, -1);
        target = next_target;
    }

    // a_k = omega(1 - 1/n_{k+2}) / omega(1 - 1/n_k)
    for (std::size_t k = 0; k + 2 < c.terms.size(); ++k) {
        c.terms[k].log_a = w.log_eval_x(c.terms[k + 2].log_n) - w.log_eval_x(c.terms[k].log_n);
        c.terms[k].has_a = true;
    }
    return c;
}

ValidationReport validate_sequence(const Construction& c) {
    if (c.K() < 5) throw std::domain_error("validate_sequence: needs K >= 5");
    ValidationReport rep;
    rep.lambda_gt_1 = c.log_lambda > dd(0.0);
    rep.tau_gt_1 = c.tau > dd(1.0);
    bool all_ok = rep.lambda_gt_1 && rep.tau_gt_1;

    const dd log_099 = dd_log(dd(0.99));
    const std::size_t K = c.K();
    for (std::size_t k = 1; k <= K; ++k) {
        ValidationRow row;
        row.k = k;
        const auto& t = c.term(k);
        if (t.has_a) {
            row.a_k = dd_exp(t.log_a).to_double();
            row.lambda_ok = t.log_a >= c.log_lambda;
            row.mu_ok = t.log_a <= c.log_mu;
            if (!row.lambda_ok && t.log_a >= c.log_lambda + log_099) {
                row.lambda_ok = true;
                row.marginal = true;
            }
            if (!row.mu_ok && t.log_a <= c.log_mu - log_099) {
                row.mu_ok = true;
                row.marginal = true;
            }
        }
        if (k + 3 <= K && t.has_a && c.term(k + 1).has_a) {
            // log a_{k+1}/log a_k < d n_{k+1}/n_k, compared in log form since
            // the ratio n_{k+1}/n_k overflows doubles for slow weights
            row.chain2_checked = true;
            dd lhs = dd_log(c.term(k + 1).log_a) - dd_log(t.log_a);
            dd rhs = dd_log(c.d_const) + (c.term(k + 1).log_n - t.log_n);
            row.chain2_lhs = lhs.to_double();
            row.chain2_rhs = rhs.to_double();
            row.chain2_ok = lhs < rhs;
        }
        if (k < K) {
            // floor-adjusted gap: log n_{k+1} - log n_k >= log tau - log(1 + 1/n_k);
            // vacuous when tau <= 0 (inadmissible gamma, reported elsewhere)
            row.gap_checked = true;
            dd dlog = c.term(k + 1).log_n - t.log_n;
            row.gap_ratio_log = dlog.to_double();
            if (c.tau > dd(0.0)) {
                dd inv_n = dd_exp(-t.log_n);
                dd bound = dd_log(c.tau) - dd_log1p(inv_n);
                row.gap_ok = dlog >= bound;
            }
        }
        if ((!row.lambda_ok || !row.mu_ok || (row.chain2_checked && !row.chain2_ok) ||
             (row.gap_checked && !row.gap_ok)) && rep.first_failing_k == 0) {
            rep.first_failing_k = k;
        }
        all_ok = all_ok && row.lambda_ok && row.mu_ok &&
                 (!row.chain2_checked || row.chain2_ok) &&
                 (!row.gap_checked || row.gap_ok);
        rep.rows.push_back(row);
    }
    rep.pass = all_ok;
    return rep;
}

double delta_bound(const Construction& c) {
    dd ll = c.log_lambda, lm = c.log_mu;
    dd delta = (dd(1.0) - c.d_const) * (ll / lm) / (dd(1.0) + lm / ll);
    return delta.to_double();
}

// ---- cache format ----
//
// Versioned text; hexfloat pairs are normative, decimal columns informational.

namespace {

std::string eps_display(dd x) {
    // eps = e^{-x}; decimal exponent floor(-x/ln10) may exceed any integer type
    if (x.hi > 700.0) {
        return "~10^-" + dd_to_sci(x / dd_ln10, 20);
    }
    dd eps = dd_exp(-x);
    return dd_to_sci(eps, 30);
}

} // namespace

void save_construction(const Construction& c, std::ostream& os) {
    os << "maxprod-construction v1\n";
    os << "weight " << c.weight_spec << "\n";
    os << "gamma " << dd_to_hex(c.gamma) << "\n";
    os << "alpha " << dd_to_hex(c.alpha) << "\n";
    os << "logC " << dd_to_hex(c.log_C) << "\n";
    char bbuf[40];
    std::snprintf(bbuf, sizeof bbuf, "%a", c.B);
    os << "B " << bbuf << "\n";
    os << "K " << c.K() << " truncated " << (c.truncated ? 1 : 0)
       << " requested " << c.requested_K << "\n";
    for (std::size_t k = 1; k <= c.K(); ++k) {
        const auto& t = c.term(k);
        os << "term " << k
           << " x " << dd_to_hex(t.x)
           << " logn " << dd_to_hex(t.log_n)
           << " loga " << (t.has_a ? dd_to_hex(t.log_a) : std::string("."))
           << " n " << (t.n_materialized ? t.n.to_decimal() : std::string("."))
           << " eps " << eps_display(t.x) << "\n";
    }
    os << "end\n";
}

Construction load_construction(std::istream& is) {
    auto fail = [](const std::string& what) -> void {
        throw std::runtime_error("load_construction: malformed file (" + what + ")");
    };
    std::string line;
    if (!std::getline(is, line) || line != "maxprod-construction v1") fail("header");

    Construction c;
    auto read_hex_pair = [&](std::istringstream& ss) {
        std::string h1, h2;
        if (!(ss >> h1 >> h2)) fail("hex pair");
        return dd_from_hex(h1 + " " + h2);
    };
    std::size_t K = 0;
    while (std::getline(is, line)) {
        if (line == "end") break;
        std::istringstream ss(line);
        std::string key;
        ss >> key;
        if (key == "weight") { ss >> std::ws; std::getline(ss, c.weight_spec); }
        else if (key == "gamma") c.gamma = read_hex_pair(ss);
        else if (key == "alpha") c.alpha = read_hex_pair(ss);
        else if (key == "logC") c.log_C = read_hex_pair(ss);
        else if (key == "B") { std::string h; ss >> h; c.B = std::strtod(h.c_str(), nullptr); }
        else if (key == "K") {
            std::string kw;
            int trunc = 0;
            ss >> K >> kw >> trunc >> kw >> c.requested_K;
            c.truncated = trunc != 0;
        } else if (key == "term") {
            ConstructionTerm t;
            std::size_t k;
            std::string kw;
            ss >> k >> kw;
            t.x = read_hex_pair(ss);
            ss >> kw;
            t.log_n = read_hex_pair(ss);
            ss >> kw;
            std::string first;
            ss >> first;
            if (first == ".") { t.has_a = false; }
            else {
                std::string second;
                ss >> second;
                t.log_a = dd_from_hex(first + " " + second);
                t.has_a = true;
            }
            ss >> kw; // "n"
            std::string ndec;
            ss >> ndec;
            if (ndec != ".") { t.n = BigUint::from_decimal(ndec); t.n_materialized = true; }
            c.terms.push_back(std::move(t));
        }
    }
    if (c.terms.size() != K) fail("term count");

    dd a = c.alpha;
    c.log_lambda = (c.gamma * 2.0 - a) * dd_ln2 - c.log_C;
    c.log_mu = (c.gamma * 2.0 + a) * dd_ln2 + c.log_C;
    c.d_const = dd_exp2(dd(-1.0) / a);
    c.tau = dd_exp((c.gamma * dd_ln2 - c.log_C) / a) - 1.0;
    return c;
}

void save_construction_file(const Construction& c, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    save_construction(c, os);
}

Construction load_construction_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open '" + path + "'");
    return load_construction(is);
}

} // namespace maxprod
