#include "maxprod/dd.hpp"

#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace maxprod {

namespace {

// e^r - 1 for |r| <= ~0.0217 (post range-reduction), Taylor to dd precision.
dd expm1_small(dd r) {
    dd term = r;
    dd sum = r;
    for (int k = 2; k <= 16; ++k) {
        term = term * r / double(k);
        sum += term;
        if (std::abs(term.hi) < 1e-36) break;
    }
    return sum;
}

} // namespace

dd dd_exp(dd a) {
    if (a.hi > 709.0) return dd(std::numeric_limits<double>::infinity());
    if (a.hi < -745.0) return dd(0.0);
    // a = m*ln2 + 16*r
    double m = std::round(a.hi / dd_ln2.hi);
    dd r = ldexp(a - dd_ln2 * m, -4);
    dd f = expm1_small(r);
    // undo the /16: (1+f)^16 - 1, tracked in f to preserve relative accuracy
    for (int i = 0; i < 4; ++i) f = ldexp(f, 1) + f * f;
    dd res = ldexp(dd(1.0) + f, int(m));
    return res;
}

dd dd_expm1(dd a) {
    if (std::abs(a.hi) >= 0.5) return dd_exp(a) - 1.0;
    dd term = a;
    dd sum = a;
    for (int k = 2; k <= 40; ++k) {
        term = term * a / double(k);
        sum += term;
        if (std::abs(term.hi) < 1e-38) break;
    }
    return sum;
}

dd dd_log(dd a) {
    if (!(a.hi > 0.0)) throw std::domain_error("dd_log: argument must be positive");
    int e2 = std::ilogb(a.hi);
    dd m = ldexp(a, -e2); // in [1, 2)
    double y0 = std::log(m.hi);
    // one Newton step in dd doubles the accuracy of the double-precision seed
    dd y = dd(y0) + m * dd_exp(dd(-y0)) - 1.0;
    return y + dd_ln2 * double(e2);
}

dd dd_log1p(dd a) {
    if (std::abs(a.hi) >= 0.5) return dd_log(dd(1.0) + a);
    // atanh series: log1p(x) = 2 atanh(x/(2+x)), |s| <= 0.34 on this branch
    dd s = a / (dd(2.0) + a);
    dd s2 = s * s;
    dd term = s;
    dd sum = s;
    for (int k = 3; k <= 99; k += 2) {
        term = term * s2;
        sum += term / double(k);
        if (std::abs(term.hi) < 1e-36) break;
    }
    return ldexp(sum, 1);
}

dd dd_sqrt(dd a) {
    if (a.hi == 0.0 && a.lo == 0.0) return dd(0.0);
    if (a.hi < 0.0) throw std::domain_error("dd_sqrt: negative argument");
    double y0 = std::sqrt(a.hi);
    // Karp's trick: y0 + (a - y0^2) / (2 y0)
    dd r = a - two_prod(y0, y0);
    return dd(y0) + r / (2.0 * y0);
}

dd dd_floor(dd a) {
    double fh = std::floor(a.hi);
    if (fh != a.hi) {
        // a.hi has a fractional part; lo can still push across an integer
        dd frac = two_sum(a.hi - fh, a.lo);
        if (frac.hi < 0.0) { fh -= 1.0; }
        else if (frac.hi >= 1.0) { fh += 1.0; }
        return dd(fh);
    }
    // a.hi integral: floor lives in the low word
    double fl = std::floor(a.lo);
    return quick_two_sum(fh, fl);
}

dd dd_exp2(dd a) { return dd_exp(a * dd_ln2); }

namespace {

dd pow10_dd(long e) {
    bool neg = e < 0;
    unsigned long n = neg ? -(unsigned long)e : (unsigned long)e;
    dd base(10.0);
    dd acc(1.0);
    while (n) {
        if (n & 1) acc = acc * base;
        base = base * base;
        n >>= 1;
    }
    return neg ? dd(1.0) / acc : acc;
}

} // namespace

std::string dd_to_sci(dd v, int digits) {
    if (digits < 1) digits = 1;
    if (v.hi == 0.0 && v.lo == 0.0) return "0";
    std::string out;
    if (v.hi < 0.0) { out += '-'; v = -v; }
    long e10 = long(std::floor(std::log10(v.hi)));
    dd scale = pow10_dd(e10);
    dd m = v / scale;
    while (m.hi >= 10.0) { m = m / 10.0; ++e10; }
    while (m.hi < 1.0) { m = m * 10.0; --e10; }
    std::vector<int> ds;
    for (int i = 0; i < digits + 1; ++i) {
        int d = int(m.hi);
        if (d < 0) d = 0;
        if (d > 9) d = 9;
        ds.push_back(d);
        m = (m - double(d)) * 10.0;
    }
    // round at `digits`
    if (ds[digits] >= 5) {
        int i = digits - 1;
        while (i >= 0 && ++ds[i] == 10) { ds[i] = 0; --i; }
        if (i < 0) { ds.insert(ds.begin(), 1); ++e10; }
    }
    out += char('0' + ds[0]);
    if (digits > 1) {
        out += '.';
        for (int i = 1; i < digits; ++i) out += char('0' + ds[i]);
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "e%+ld", e10);
    out += buf;
    return out;
}

std::string dd_to_hex(dd v) {
    char buf[80];
    std::snprintf(buf, sizeof buf, "%a %a", v.hi, v.lo);
    return buf;
}

dd dd_from_hex(const std::string& s) {
    const char* p = s.c_str();
    char* end = nullptr;
    double hi = std::strtod(p, &end);
    if (end == p) throw std::invalid_argument("dd_from_hex: bad input '" + s + "'");
    p = end;
    double lo = std::strtod(p, &end);
    if (end == p) throw std::invalid_argument("dd_from_hex: bad input '" + s + "'");
    return {hi, lo};
}

} // namespace maxprod
