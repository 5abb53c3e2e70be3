#include "maxprod/bigint.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace maxprod {

using u128 = unsigned __int128;

void BigUint::trim() {
    while (!w_.empty() && w_.back() == 0) w_.pop_back();
}

std::size_t BigUint::bit_length() const {
    if (w_.empty()) return 0;
    uint64_t top = w_.back();
    std::size_t b = 64 - std::size_t(__builtin_clzll(top));
    return b + 64 * (w_.size() - 1);
}

int BigUint::compare(const BigUint& o) const {
    if (w_.size() != o.w_.size()) return w_.size() < o.w_.size() ? -1 : 1;
    for (std::size_t i = w_.size(); i-- > 0;) {
        if (w_[i] != o.w_[i]) return w_[i] < o.w_[i] ? -1 : 1;
    }
    return 0;
}

BigUint& BigUint::operator+=(const BigUint& o) {
    if (o.w_.size() > w_.size()) w_.resize(o.w_.size(), 0);
    unsigned carry = 0;
    for (std::size_t i = 0; i < w_.size(); ++i) {
        u128 s = u128(w_[i]) + (i < o.w_.size() ? o.w_[i] : 0) + carry;
        w_[i] = uint64_t(s);
        carry = unsigned(s >> 64);
    }
    if (carry) w_.push_back(carry);
    return *this;
}

BigUint& BigUint::operator-=(const BigUint& o) {
    if (compare(o) < 0) throw std::invalid_argument("BigUint: negative subtraction");
    unsigned borrow = 0;
    for (std::size_t i = 0; i < w_.size(); ++i) {
        u128 rhs = u128(i < o.w_.size() ? o.w_[i] : 0) + borrow;
        u128 lhs = u128(w_[i]);
        if (lhs >= rhs) { w_[i] = uint64_t(lhs - rhs); borrow = 0; }
        else { w_[i] = uint64_t((u128(1) << 64) + lhs - rhs); borrow = 1; }
    }
    trim();
    return *this;
}

BigUint& BigUint::shl(unsigned bits) {
    if (is_zero() || bits == 0) return *this;
    unsigned words = bits / 64, rem = bits % 64;
    if (rem) {
        uint64_t carry = 0;
        for (auto& w : w_) {
            uint64_t nw = (w << rem) | carry;
            carry = w >> (64 - rem);
            w = nw;
        }
        if (carry) w_.push_back(carry);
    }
    w_.insert(w_.begin(), words, 0);
    return *this;
}

BigUint& BigUint::shr(unsigned bits) {
    unsigned words = bits / 64, rem = bits % 64;
    if (words >= w_.size()) { w_.clear(); return *this; }
    w_.erase(w_.begin(), w_.begin() + words);
    if (rem) {
        for (std::size_t i = 0; i < w_.size(); ++i) {
            uint64_t lo = w_[i] >> rem;
            uint64_t hipart = (i + 1 < w_.size()) ? (w_[i + 1] << (64 - rem)) : 0;
            w_[i] = lo | hipart;
        }
        trim();
    }
    return *this;
}

BigUint& BigUint::mul_u64(uint64_t m) {
    if (m == 0) { w_.clear(); return *this; }
    uint64_t carry = 0;
    for (auto& w : w_) {
        u128 p = u128(w) * m + carry;
        w = uint64_t(p);
        carry = uint64_t(p >> 64);
    }
    if (carry) w_.push_back(carry);
    return *this;
}

uint64_t BigUint::mod_u64(uint64_t m) const {
    if (m == 0) throw std::invalid_argument("BigUint::mod_u64: zero modulus");
    u128 r = 0;
    for (std::size_t i = w_.size(); i-- > 0;) {
        r = ((r << 64) | w_[i]) % m;
    }
    return uint64_t(r);
}

BigUint BigUint::from_decimal(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("BigUint::from_decimal: empty");
    BigUint r;
    for (char c : s) {
        if (c < '0' || c > '9') throw std::invalid_argument("BigUint::from_decimal: bad digit");
        r.mul_u64(10);
        r += uint64_t(c - '0');
    }
    return r;
}

std::string BigUint::to_decimal() const {
    if (is_zero()) return "0";
    std::vector<uint64_t> tmp = w_;
    std::string out;
    auto divmod_small = [&tmp](uint64_t d) -> uint64_t {
        u128 r = 0;
        for (std::size_t i = tmp.size(); i-- > 0;) {
            u128 cur = (r << 64) | tmp[i];
            tmp[i] = uint64_t(cur / d);
            r = cur % d;
        }
        while (!tmp.empty() && tmp.back() == 0) tmp.pop_back();
        return uint64_t(r);
    };
    const uint64_t chunk = 10000000000000000000ull; // 10^19
    std::vector<uint64_t> parts;
    while (!tmp.empty()) parts.push_back(divmod_small(chunk));
    for (std::size_t i = parts.size(); i-- > 0;) {
        char buf[24];
        if (i + 1 == parts.size()) std::snprintf(buf, sizeof buf, "%llu", (unsigned long long)parts[i]);
        else std::snprintf(buf, sizeof buf, "%019llu", (unsigned long long)parts[i]);
        out += buf;
    }
    return out;
}

dd BigUint::log_dd() const {
    if (is_zero()) throw std::domain_error("BigUint::log_dd: log of zero");
    std::size_t bl = bit_length();
    // top 128 bits as a dd mantissa in [1, 2)
    double hi = 0.0, lo = 0.0;
    if (bl <= 53) {
        hi = double(w_[0]);
        return dd_log(dd(hi));
    }
    // extract bits [bl-53, bl) and the next 53 below
    auto get_bit = [this](std::size_t i) -> int {
        return int((w_[i / 64] >> (i % 64)) & 1u);
    };
    uint64_t top = 0, next = 0;
    for (int i = 0; i < 53; ++i) {
        std::size_t b1 = bl - 1 - std::size_t(i);
        top = (top << 1) | uint64_t(get_bit(b1));
    }
    for (int i = 53; i < 106; ++i) {
        long b2 = long(bl) - 1 - i;
        int bit = (b2 >= 0) ? get_bit(std::size_t(b2)) : 0;
        next = (next << 1) | uint64_t(bit);
    }
    hi = std::ldexp(double(top), -52);           // in [1, 2)
    lo = std::ldexp(double(next), -(52 + 53));
    dd mant = two_sum(hi, lo);
    return dd_log(mant) + dd_ln2 * double(bl - 1);
}

BigUint BigUint::floor_dd(dd v) {
    if (v.hi < 0.0) throw std::domain_error("BigUint::floor_dd: negative value");
    if (v.hi < 9.007199254740992e15) { // < 2^53: exact in dd directly
        dd f = maxprod::dd_floor(v);
        long long n = (long long)f.hi + (long long)f.lo;
        if (n < 0) n = 0;
        return BigUint(uint64_t(n));
    }
    // fixed point with 64 fractional bits; |lo| < ulp(hi) so no borrow issues
    auto push_double = [](double d, BigUint& acc, bool& neg) {
        neg = d < 0.0;
        double ad = std::abs(d);
        int e;
        double m = std::frexp(ad, &e); // ad = m * 2^e, m in [0.5,1)
        uint64_t mi = uint64_t(std::ldexp(m, 53));
        long shift = long(e) - 53 + 64;
        BigUint t(mi);
        if (shift >= 0) t.shl(unsigned(shift));
        else t.shr(unsigned(-shift));
        acc = t;
    };
    BigUint a, b;
    bool na = false, nb = false;
    push_double(v.hi, a, na);
    if (v.lo != 0.0) {
        push_double(v.lo, b, nb);
        if (nb) a -= b; else a += b;
    }
    a.shr(64);
    return a;
}

BigUint BigUint::floor_exp_dd(dd x) {
    if (x.hi < 0.0) return BigUint(0);
    // e^x = f * 2^m with f in [~0.7, 1.42]
    double m = std::round(x.hi / dd_ln2.hi);
    dd f = dd_exp(x - dd_ln2 * m);
    long mi = long(m);
    // Round the mantissa to nearest at 96 bits: the argument carries a few
    // units of dd roundoff, so f*2^96 is still good to well under 1/2 and
    // integer boundaries (e.g. the dyadic weight's n_k = 2^(5k-4)) land
    // exactly at any depth.  Bits past 96 are below resolution, zeros.
    long bits = std::min(mi, 96l);
    BigUint big = floor_dd(ldexp(f, int(bits)) + dd(0.5));
    if (mi > bits) big.shl(unsigned(mi - bits));
    return big;
}

uint64_t gcd_u64(uint64_t a, uint64_t b) {
    while (b) { uint64_t t = a % b; a = b; b = t; }
    return a;
}

} // namespace maxprod
