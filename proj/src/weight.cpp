#include "maxprod/weight.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace maxprod {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return char(std::tolower(c)); });
    return s;
}

} // namespace

dd Weight::log_eval_x(dd x) const {
    if (x.hi < 0.0) throw std::domain_error("Weight: eps > 1 is outside the domain");
    if (x > x_max_) throw std::domain_error("Weight '" + name_ + "': eps below trusted floor");
    switch (kind_) {
    case Kind::Pow:
        return x * beta_;
    case Kind::Log:
        // omega = 1 + log(1/eps)
        return dd_log1p(x);
    case Kind::ExpSqrtLog:
        return dd_sqrt(dd(1.0) + x);
    case Kind::Prod: {
        dd s(0.0);
        for (const auto& p : parts_) s += p.log_eval_x(x);
        return s;
    }
    case Kind::ExpInv:
        return dd_exp(x);
    }
    return dd(0.0);
}

double Weight::eval_log_weight(double eps) const {
    if (!(eps > 0.0) || eps > 1.0) throw std::domain_error("Weight: eps must lie in (0, 1]");
    dd x = -dd_log(dd(eps));
    return log_eval_x(x).to_double();
}

Weight Weight::pow(double beta) {
    if (!(beta > 0.0)) throw std::domain_error("pow weight: beta must be positive");
    Weight w;
    w.kind_ = Kind::Pow;
    w.beta_ = beta;
    char buf[64];
    std::snprintf(buf, sizeof buf, "pow:beta=%.17g", beta);
    w.name_ = buf;
    return w;
}

Weight Weight::log() {
    Weight w;
    w.kind_ = Kind::Log;
    w.name_ = "log";
    return w;
}

Weight Weight::exploglog() {
    Weight w;
    w.kind_ = Kind::ExpSqrtLog;
    w.name_ = "exploglog";
    return w;
}

Weight Weight::product(std::vector<Weight> parts) {
    if (parts.empty()) throw std::domain_error("prod weight: needs at least one part");
    Weight w;
    w.kind_ = Kind::Prod;
    w.name_ = "prod:";
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) w.name_ += ",";
        w.name_ += parts[i].name_;
    }
    w.parts_ = std::move(parts);
    return w;
}

Weight Weight::exp_inverse() {
    Weight w;
    w.kind_ = Kind::ExpInv;
    w.name_ = "expinv";
    w.x_max_ = dd(700.0);
    return w;
}

namespace {

Weight parse_atom(const std::string& atom) {
    std::string a = lower(atom);
    if (a == "log") return Weight::log();
    if (a == "exploglog") return Weight::exploglog();
    if (a.rfind("pow", 0) == 0) {
        double beta = 1.0;
        if (a.size() > 3) {
            if (a[3] != ':') throw std::invalid_argument("bad weight spec '" + atom + "'");
            std::string arg = a.substr(4);
            if (arg.rfind("beta=", 0) == 0) arg = arg.substr(5);
            char* end = nullptr;
            beta = std::strtod(arg.c_str(), &end);
            if (end == arg.c_str() || *end != '\0')
                throw std::invalid_argument("bad pow parameter in '" + atom + "'");
        }
        return Weight::pow(beta);
    }
    throw std::invalid_argument("unknown weight '" + atom + "'");
}

} // namespace

Weight Weight::parse(const std::string& spec) {
    std::string s = lower(spec);
    if (s.rfind("prod:", 0) == 0) {
        std::string rest = s.substr(5);
        std::vector<Weight> parts;
        // split on commas; "pow:0.5,log" -> {"pow:0.5", "log"}
        std::size_t pos = 0;
        while (pos < rest.size()) {
            std::size_t comma = rest.find(',', pos);
            std::string atom = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            if (atom.empty()) throw std::invalid_argument("bad prod weight '" + spec + "'");
            parts.push_back(parse_atom(atom));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (parts.empty()) throw std::invalid_argument("bad prod weight '" + spec + "'");
        return product(std::move(parts));
    }
    return parse_atom(s);
}

std::vector<double> default_probe_grid() {
    std::vector<double> g;
    for (int i = 0; i <= 60; ++i) g.push_back(std::ldexp(1.0, -i));
    return g;
}

DoublingCertificate certify_doubling(const Weight& w, std::span<const double> probe_eps) {
    if (probe_eps.empty()) throw std::domain_error("certify_doubling: empty probe grid");

    dd max_ratio(-1.0);
    double argmax_eps = 1.0;
    // per-decade maxima of the doubling log-ratio, keyed by floor(log10(1/eps))
    std::map<int, double> decade_max;
    std::map<int, double> decade_argmax;

    for (double eps : probe_eps) {
        if (!(eps > 0.0) || eps > 1.0)
            throw std::domain_error("certify_doubling: probe eps outside (0, 1]");
        dd x = (eps == 1.0) ? dd(0.0) : -dd_log(dd(eps));
        dd ratio = w.log_eval_x(x + dd_ln2) - w.log_eval_x(x);
        if (ratio > max_ratio) { max_ratio = ratio; argmax_eps = eps; }
        int dec = int(std::floor(std::log10(1.0 / eps) + 1e-12));
        auto it = decade_max.find(dec);
        if (it == decade_max.end() || ratio.to_double() > it->second) {
            decade_max[dec] = ratio.to_double();
            decade_argmax[dec] = eps;
        }
    }

    // Divergence screen: a non-doubling weight shows the per-decade maximum
    // still climbing at the deep end of the grid.
    if (decade_max.size() >= 3) {
        auto it = decade_max.rbegin();
        double d0 = it->second; ++it;
        double d1 = it->second; ++it;
        double d2 = it->second;
        if (d0 > d1 && d1 > d2 && d0 > d2 * 1.01) {
            throw CertificationError(
                "certify_doubling: doubling ratio keeps growing with depth (weight '" +
                    w.name() + "' does not look doubling)",
                decade_argmax.rbegin()->second);
        }
    }

    DoublingCertificate cert;
    cert.probe_count = probe_eps.size();
    // empirical max inflated to guard against the true max falling between probes
    cert.log_B = max_ratio + dd_log1p(dd(1e-9));
    cert.B = dd_exp(cert.log_B).to_double();
    cert.alpha_dd = cert.log_B / dd_ln2;
    cert.alpha = cert.alpha_dd.to_double();
    dd log_half_ratio = w.log_eval_x(dd_ln2) - w.log_eval_x(dd(0.0)); // log(omega(1/2)/omega(0))
    dd c1 = cert.log_B + log_half_ratio;
    dd c2 = cert.log_B * 2.0;
    cert.log_C = dd_max(c1, c2);
    cert.C = dd_exp(cert.log_C).to_double();
    (void)argmax_eps;
    return cert;
}

DoublingCertificate certify_doubling(const Weight& w) {
    // dyadic probes, capped so eps/2 stays inside the trusted range
    auto g = default_probe_grid();
    double max_x = w.x_max().hi - dd_ln2.hi;
    std::vector<double> capped;
    for (double eps : g)
        if (std::log(1.0 / eps) <= max_x) capped.push_back(eps);
    return certify_doubling(w, capped);
}

bool check_envelope(const DoublingCertificate& cert, const Weight& w, double r, double t) {
    if (!(r >= 0.0) || !(t >= r) || !(t < 1.0))
        throw std::domain_error("check_envelope: need 0 <= r <= t < 1");
    dd xr = (r == 0.0) ? dd(0.0) : -dd_log1p(dd(-r));
    dd xt = (t == 0.0) ? dd(0.0) : -dd_log1p(dd(-t));
    dd lhs = w.log_eval_x(xt);
    dd rhs = cert.log_C + cert.alpha_dd * (xt - xr) + w.log_eval_x(xr);
    return lhs <= rhs;
}

} // namespace maxprod
