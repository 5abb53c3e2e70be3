// dd.hpp — double-double arithmetic (~106-bit mantissa).
//
// Radii near the unit circle are kept as x = log(1/(1-r)); for slow weights x
// reaches 1e20 and beyond, where plain doubles cannot resolve the increments
// gamma*log(2) the construction is built from. Everything here assumes strict
// IEEE doubles (no -ffast-math) and an FMA-correct std::fma.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace maxprod {

struct dd {
    double hi = 0.0;
    double lo = 0.0;

    constexpr dd() = default;
    constexpr dd(double h) : hi(h), lo(0.0) {}
    constexpr dd(double h, double l) : hi(h), lo(l) {}

    double to_double() const { return hi + lo; }
    bool is_finite() const { return std::isfinite(hi) && std::isfinite(lo); }
};

// ---- error-free transforms ----

inline dd two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

// requires |a| >= |b|
inline dd quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
}

inline dd two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

// ---- basic arithmetic ----

inline dd operator+(dd a, dd b) {
    dd s = two_sum(a.hi, b.hi);
    dd t = two_sum(a.lo, b.lo);
    dd r = quick_two_sum(s.hi, s.lo + t.hi);
    return quick_two_sum(r.hi, r.lo + t.lo);
}

inline dd operator-(dd a) { return {-a.hi, -a.lo}; }
inline dd operator-(dd a, dd b) { return a + (-b); }

inline dd operator*(dd a, dd b) {
    dd p = two_prod(a.hi, b.hi);
    double lo = p.lo + a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, lo);
}

inline dd operator/(dd a, dd b) {
    double q1 = a.hi / b.hi;
    dd r = a - b * dd(q1);
    double q2 = r.hi / b.hi;
    r = r - b * dd(q2);
    double q3 = r.hi / b.hi;
    dd q = quick_two_sum(q1, q2);
    return q + dd(q3);
}

inline dd& operator+=(dd& a, dd b) { a = a + b; return a; }
inline dd& operator-=(dd& a, dd b) { a = a - b; return a; }
inline dd& operator*=(dd& a, dd b) { a = a * b; return a; }
inline dd& operator/=(dd& a, dd b) { a = a / b; return a; }

inline dd operator+(dd a, double b) { return a + dd(b); }
inline dd operator+(double a, dd b) { return dd(a) + b; }
inline dd operator-(dd a, double b) { return a - dd(b); }
inline dd operator-(double a, dd b) { return dd(a) - b; }
inline dd operator*(dd a, double b) { return a * dd(b); }
inline dd operator*(double a, dd b) { return dd(a) * b; }
inline dd operator/(dd a, double b) { return a / dd(b); }
inline dd operator/(double a, dd b) { return dd(a) / b; }

inline bool operator==(dd a, dd b) { return a.hi == b.hi && a.lo == b.lo; }
inline bool operator!=(dd a, dd b) { return !(a == b); }
inline bool operator<(dd a, dd b) { return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo); }
inline bool operator>(dd a, dd b) { return b < a; }
inline bool operator<=(dd a, dd b) { return !(b < a); }
inline bool operator>=(dd a, dd b) { return !(a < b); }

inline dd fabs(dd a) { return (a.hi < 0.0 || (a.hi == 0.0 && a.lo < 0.0)) ? -a : a; }

// exact scaling by 2^n
inline dd ldexp(dd a, int n) { return {std::ldexp(a.hi, n), std::ldexp(a.lo, n)}; }

inline dd dd_max(dd a, dd b) { return a < b ? b : a; }
inline dd dd_min(dd a, dd b) { return a < b ? a : b; }

// ---- constants (hi/lo pairs from the QD library tables) ----

inline constexpr dd dd_ln2{6.931471805599452862e-01, 2.319046813846299558e-17};
inline constexpr dd dd_ln10{2.302585092994045901e+00, -2.170756223382249351e-16};
inline constexpr dd dd_pi{3.141592653589793116e+00, 1.224646799147353207e-16};
inline constexpr dd dd_2pi{6.283185307179586232e+00, 2.449293598294706414e-16};

// ---- elementary functions ----

dd dd_exp(dd a);                 // |a| <= ~709; saturates outside
dd dd_expm1(dd a);
dd dd_log(dd a);                 // a > 0, full double range incl. denormals
dd dd_log1p(dd a);               // a > -1
dd dd_sqrt(dd a);                // a >= 0
dd dd_floor(dd a);
dd dd_exp2(dd a);
inline dd dd_log2(dd a) { return dd_log(a) / dd_ln2; }

// Scientific-notation rendering with `digits` significant digits.  Only valid
// while the decimal exponent fits a double comfortably (|e10| < ~300).
std::string dd_to_sci(dd v, int digits);

// Exact textual round-trip as a pair of hex floats.
std::string dd_to_hex(dd v);
dd dd_from_hex(const std::string& s);

} // namespace maxprod
