// bigint.hpp — minimal unsigned big integers.
//
// The construction exponents n_k overflow 64 bits within ~12 terms for the
// dyadic weight and grow to hundreds of digits for slow weights.  The two
// operations that genuinely need exactness are the modular reduction of the
// argument of z^n at rational angles (n mod q) and cumulative zero counts.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "maxprod/dd.hpp"

namespace maxprod {

class BigUint {
public:
    BigUint() = default;
    explicit BigUint(uint64_t v) { if (v) w_.push_back(v); }
    static BigUint from_decimal(const std::string& s);

    bool is_zero() const { return w_.empty(); }
    std::size_t bit_length() const;
    bool fits_u64() const { return w_.size() <= 1; }
    uint64_t as_u64() const { return w_.empty() ? 0 : w_[0]; } // valid when fits_u64()

    int compare(const BigUint& o) const;
    bool operator==(const BigUint& o) const { return w_ == o.w_; }
    bool operator<(const BigUint& o) const { return compare(o) < 0; }
    bool operator<=(const BigUint& o) const { return compare(o) <= 0; }

    BigUint& operator+=(const BigUint& o);
    BigUint& operator-=(const BigUint& o); // requires *this >= o
    BigUint& operator+=(uint64_t v) { return *this += BigUint(v); }
    BigUint& operator-=(uint64_t v) { return *this -= BigUint(v); }
    friend BigUint operator+(BigUint a, const BigUint& b) { a += b; return a; }
    friend BigUint operator-(BigUint a, const BigUint& b) { a -= b; return a; }

    BigUint& shl(unsigned bits);
    BigUint& shr(unsigned bits);
    BigUint& mul_u64(uint64_t m);

    uint64_t mod_u64(uint64_t m) const; // m > 0

    std::string to_decimal() const;

    // log(n) to dd precision, any magnitude; n > 0
    dd log_dd() const;

    // floor of a nonnegative dd value, exact in the dd's own bits
    static BigUint floor_dd(dd v);

    // floor(e^x) assembled from the dd mantissa of e^x; x may exceed the
    // double exp range (caller caps the magnitude)
    static BigUint floor_exp_dd(dd x);

private:
    // little-endian 64-bit limbs, no trailing zero limbs
    std::vector<uint64_t> w_;
    void trim();
};

uint64_t gcd_u64(uint64_t a, uint64_t b);

} // namespace maxprod
