#pragma once

#include <cstdint>
#include <string>

#include "ivalkit/detail/bignat.hpp"
#include "ivalkit/format.hpp"
#include "ivalkit/rounding.hpp"

namespace ivalkit {

/// Software binary floating point with unbounded significand: the value is
/// sign * mant * 2^exp, canonicalized so the significand is odd (or empty for
/// zero). Signed infinities are representable so that closure endpoints such
/// as atanh(1) flow through the same channels as finite bounds. No NaN.
///
/// Exact operations never round; precision is shed only through explicit
/// round_to_bits / to_format calls, both directed.
class BigFloat {
public:
    BigFloat() = default;  // zero

    static BigFloat from_double(double d);  // exact; throws on NaN
    static BigFloat from_int(std::int64_t v);
    static BigFloat from_parts(int sign, detail::BigNat mant, std::int64_t exp);
    static BigFloat infinity(int sign);

    bool is_zero() const { return sign_ == 0; }
    bool is_inf() const { return inf_; }
    bool is_finite() const { return !inf_; }
    int sign() const { return sign_; }
    bool is_integer() const;

    /// MSB exponent: nonzero finite values lie in [2^e, 2^(e+1)).
    std::int64_t exponent() const;
    std::size_t precision_bits() const { return mant_.bit_length(); }

    static int cmp(const BigFloat& a, const BigFloat& b);
    bool operator==(const BigFloat& o) const { return cmp(*this, o) == 0; }

    BigFloat negated() const;
    BigFloat abs() const;
    static BigFloat add(const BigFloat& a, const BigFloat& b);  // exact
    static BigFloat sub(const BigFloat& a, const BigFloat& b);  // exact
    static BigFloat mul(const BigFloat& a, const BigFloat& b);  // exact
    BigFloat mul_pow2(std::int64_t k) const;

    /// Quotient with at least q significant bits, rounded in the given
    /// direction. b must be nonzero; finite / inf is exact zero.
    static BigFloat div(const BigFloat& a, const BigFloat& b, unsigned q,
                        Direction dir);

    /// Keep q significant bits, directed; sticky_extra marks already-dropped
    /// information below the lsb.
    BigFloat round_to_bits(unsigned q, Direction dir, bool sticky_extra = false) const;

    /// Directed rounding into an IEEE format, saturating at the outward
    /// infinity on overflow.
    double to_format(const Format& fmt, Direction dir) const;

    static BigFloat floor(const BigFloat& v);
    static BigFloat round_nearest_int(const BigFloat& v);
    /// v mod 4 for integer v, result in [0, 3].
    static unsigned mod4(const BigFloat& v);

    std::string debug_string() const;

    const detail::BigNat& mantissa() const { return mant_; }
    std::int64_t raw_exp() const { return exp_; }

private:
    int sign_ = 0;  // -1, 0, +1
    bool inf_ = false;
    detail::BigNat mant_;
    std::int64_t exp_ = 0;
    void canonicalize();
    static int cmp_mag(const BigFloat& a, const BigFloat& b);
};

} // namespace ivalkit
