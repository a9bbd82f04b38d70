#include "ivalkit/bigfloat.hpp"

#include <bit>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace ivalkit {

using detail::BigNat;

void BigFloat::canonicalize() {
    if (inf_) {
        mant_ = BigNat{};
        exp_ = 0;
        return;
    }
    if (mant_.is_zero()) {
        sign_ = 0;
        exp_ = 0;
        return;
    }
    const std::size_t tz = mant_.trailing_zeros();
    if (tz) {
        mant_ = mant_.shifted_right(tz);
        exp_ += static_cast<std::int64_t>(tz);
    }
}

BigFloat BigFloat::from_double(double d) {
    if (std::isnan(d)) throw std::invalid_argument("BigFloat: NaN");
    BigFloat r;
    if (std::isinf(d)) {
        r.inf_ = true;
        r.sign_ = d > 0 ? 1 : -1;
        return r;
    }
    if (d == 0.0) return r;
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(d);
    const std::uint64_t frac = bits & ((1ull << 52) - 1);
    const int biased = static_cast<int>((bits >> 52) & 0x7FF);
    std::uint64_t mant;
    std::int64_t exp;
    if (biased == 0) {
        mant = frac;  // subnormal
        exp = -1074;
    } else {
        mant = frac | (1ull << 52);
        exp = biased - 1075;
    }
    r.sign_ = (bits >> 63) ? -1 : 1;
    r.mant_ = BigNat::from_u64(mant);
    r.exp_ = exp;
    r.canonicalize();
    return r;
}

BigFloat BigFloat::from_int(std::int64_t v) {
    BigFloat r;
    if (v == 0) return r;
    r.sign_ = v < 0 ? -1 : 1;
    const std::uint64_t mag =
        v < 0 ? ~static_cast<std::uint64_t>(v) + 1 : static_cast<std::uint64_t>(v);
    r.mant_ = BigNat::from_u64(mag);
    r.canonicalize();
    return r;
}

BigFloat BigFloat::from_parts(int sign, BigNat mant, std::int64_t exp) {
    BigFloat r;
    if (sign == 0 || mant.is_zero()) return r;
    r.sign_ = sign < 0 ? -1 : 1;
    r.mant_ = std::move(mant);
    r.exp_ = exp;
    r.canonicalize();
    return r;
}

BigFloat BigFloat::infinity(int sign) {
    assert(sign != 0);
    BigFloat r;
    r.inf_ = true;
    r.sign_ = sign < 0 ? -1 : 1;
    return r;
}

bool BigFloat::is_integer() const {
    if (inf_) return false;
    return sign_ == 0 || exp_ >= 0;
}

std::int64_t BigFloat::exponent() const {
    assert(sign_ != 0 && !inf_);
    return exp_ + static_cast<std::int64_t>(mant_.bit_length()) - 1;
}

int BigFloat::cmp_mag(const BigFloat& a, const BigFloat& b) {
    // Magnitudes of nonzero finite values.
    const std::int64_t ea = a.exponent(), eb = b.exponent();
    if (ea != eb) return ea < eb ? -1 : 1;
    // Same MSB position: align lsbs and compare.
    if (a.exp_ == b.exp_) return BigNat::cmp(a.mant_, b.mant_);
    if (a.exp_ < b.exp_) {
        return BigNat::cmp(a.mant_,
                           b.mant_.shifted_left(static_cast<std::size_t>(b.exp_ - a.exp_)));
    }
    return -cmp_mag(b, a);
}

int BigFloat::cmp(const BigFloat& a, const BigFloat& b) {
    if (a.sign_ != b.sign_) return a.sign_ < b.sign_ ? -1 : 1;
    if (a.sign_ == 0) return 0;
    if (a.inf_ || b.inf_) {
        if (a.inf_ && b.inf_) return 0;
        const int mag = a.inf_ ? 1 : -1;  // infinite magnitude dominates
        return a.sign_ > 0 ? mag : -mag;
    }
    const int m = cmp_mag(a, b);
    return a.sign_ > 0 ? m : -m;
}

BigFloat BigFloat::negated() const {
    BigFloat r = *this;
    r.sign_ = -r.sign_;
    return r;
}

BigFloat BigFloat::abs() const {
    BigFloat r = *this;
    if (r.sign_ < 0) r.sign_ = 1;
    return r;
}

BigFloat BigFloat::add(const BigFloat& a, const BigFloat& b) {
    if (a.inf_ || b.inf_) {
        if (a.inf_ && b.inf_) {
            assert(a.sign_ == b.sign_ && "conflicting infinities in exact add");
            return a;
        }
        return a.inf_ ? a : b;
    }
    if (a.sign_ == 0) return b;
    if (b.sign_ == 0) return a;
    const std::int64_t e = std::min(a.exp_, b.exp_);
    const BigNat am = a.mant_.shifted_left(static_cast<std::size_t>(a.exp_ - e));
    const BigNat bm = b.mant_.shifted_left(static_cast<std::size_t>(b.exp_ - e));
    BigFloat r;
    r.exp_ = e;
    if (a.sign_ == b.sign_) {
        r.sign_ = a.sign_;
        r.mant_ = BigNat::add(am, bm);
    } else {
        const int c = BigNat::cmp(am, bm);
        if (c == 0) return r;  // exact zero
        if (c > 0) {
            r.sign_ = a.sign_;
            r.mant_ = BigNat::sub(am, bm);
        } else {
            r.sign_ = b.sign_;
            r.mant_ = BigNat::sub(bm, am);
        }
    }
    r.canonicalize();
    return r;
}

BigFloat BigFloat::sub(const BigFloat& a, const BigFloat& b) {
    return add(a, b.negated());
}

BigFloat BigFloat::mul(const BigFloat& a, const BigFloat& b) {
    if (a.inf_ || b.inf_) {
        assert(a.sign_ != 0 && b.sign_ != 0 && "0 * inf in exact mul");
        return infinity(a.sign_ * b.sign_);
    }
    if (a.sign_ == 0 || b.sign_ == 0) return {};
    BigFloat r;
    r.sign_ = a.sign_ * b.sign_;
    r.mant_ = BigNat::mul(a.mant_, b.mant_);
    r.exp_ = a.exp_ + b.exp_;
    r.canonicalize();
    return r;
}

BigFloat BigFloat::mul_pow2(std::int64_t k) const {
    if (sign_ == 0 || inf_) return *this;
    BigFloat r = *this;
    r.exp_ += k;
    return r;
}

BigFloat BigFloat::round_to_bits(unsigned q, Direction dir, bool sticky_extra) const {
    assert(q > 0);
    if (inf_ || sign_ == 0) return *this;
    const std::size_t bits = mant_.bit_length();
    const bool outward =
        (dir == Direction::Up && sign_ > 0) || (dir == Direction::Down && sign_ < 0);
    if (bits <= q) {
        if (!sticky_extra || !outward) return *this;
        // Value carries dropped information below its lsb: widen by one ulp
        // at the q-bit granularity.
        BigFloat r = *this;
        const std::size_t pad = q - bits;
        r.mant_ = r.mant_.shifted_left(pad);
        r.exp_ -= static_cast<std::int64_t>(pad);
        r.mant_.inc();
        r.canonicalize();
        return r;
    }
    const std::size_t drop = bits - q;
    const bool sticky = sticky_extra || mant_.any_below(drop);
    BigFloat r;
    r.sign_ = sign_;
    r.mant_ = mant_.shifted_right(drop);
    r.exp_ = exp_ + static_cast<std::int64_t>(drop);
    if (sticky && outward) r.mant_.inc();
    r.canonicalize();
    return r;
}

BigFloat BigFloat::div(const BigFloat& a, const BigFloat& b, unsigned q, Direction dir) {
    if (b.is_zero()) throw std::logic_error("BigFloat: division by zero");
    if (a.is_zero()) return {};
    if (b.inf_) {
        assert(!a.inf_);
        return {};  // exact zero in the extended-real sense used here
    }
    if (a.inf_) return infinity(a.sign_ * b.sign_);
    const std::int64_t la = static_cast<std::int64_t>(a.mant_.bit_length());
    const std::int64_t lb = static_cast<std::int64_t>(b.mant_.bit_length());
    std::int64_t s = static_cast<std::int64_t>(q) + 2 + lb - la;
    if (s < 0) s = 0;
    BigNat num = a.mant_.shifted_left(static_cast<std::size_t>(s));
    BigNat quo, rem;
    BigNat::divmod(num, b.mant_, quo, rem);
    BigFloat r;
    r.sign_ = a.sign_ * b.sign_;
    r.mant_ = std::move(quo);
    r.exp_ = a.exp_ - s - b.exp_;
    r.canonicalize();
    return r.round_to_bits(q, dir, !rem.is_zero());
}

BigFloat BigFloat::floor(const BigFloat& v) {
    assert(!v.inf_);
    if (v.sign_ == 0 || v.exp_ >= 0) return v;
    const std::size_t k = static_cast<std::size_t>(-v.exp_);
    BigNat ip = v.mant_.shifted_right(k);
    const bool frac = v.mant_.any_below(k);
    if (v.sign_ < 0 && frac) ip.inc();
    return from_parts(v.sign_, std::move(ip), 0);
}

BigFloat BigFloat::round_nearest_int(const BigFloat& v) {
    const BigFloat half = from_int(1).mul_pow2(-1);
    return floor(add(v, half));
}

unsigned BigFloat::mod4(const BigFloat& v) {
    assert(v.is_integer());
    if (v.sign_ == 0) return 0;
    unsigned low;
    if (v.exp_ >= 2) {
        low = 0;
    } else {
        low = static_cast<unsigned>((v.mant_.low_u64() << v.exp_) & 3u);
    }
    if (v.sign_ < 0) low = (4u - low) & 3u;
    return low;
}

double BigFloat::to_format(const Format& fmt, Direction dir) const {
    if (inf_) return sign_ > 0 ? HUGE_VAL : -HUGE_VAL;
    if (sign_ == 0) return 0.0;
    const bool outward =
        (dir == Direction::Up && sign_ > 0) || (dir == Direction::Down && sign_ < 0);
    const int p = fmt.precision;
    const std::int64_t grid_min = fmt.emin - (p - 1);
    const std::int64_t e = exponent();
    if (e > fmt.emax) {
        // |v| >= 2^(emax+1) > max_finite.
        const double mag = outward ? HUGE_VAL : fmt.max_finite;
        return sign_ > 0 ? mag : -mag;
    }
    const std::int64_t g = std::max(e - (p - 1), grid_min);
    std::uint64_t n;
    bool sticky;
    if (exp_ >= g) {
        const std::int64_t sh = exp_ - g;
        assert(mant_.bit_length() + static_cast<std::size_t>(sh) <= 63);
        n = mant_.low_u64() << sh;
        sticky = false;
    } else {
        const std::size_t k = static_cast<std::size_t>(g - exp_);
        n = mant_.shifted_right(k).low_u64();
        sticky = mant_.any_below(k);
    }
    if (sticky && outward) ++n;
    std::int64_t gg = g;
    if (n == (1ull << p)) {
        // Carried into the next binade.
        if (g == e - (p - 1) && e + 1 > fmt.emax)
            return sign_ > 0 ? HUGE_VAL : -HUGE_VAL;
        n >>= 1;
        ++gg;
    }
    const double mag = std::ldexp(static_cast<double>(n), static_cast<int>(gg));
    assert(std::isfinite(mag) || e >= fmt.emax);
    return sign_ > 0 ? mag : -mag;
}

std::string BigFloat::debug_string() const {
    if (inf_) return sign_ > 0 ? "+inf" : "-inf";
    if (sign_ == 0) return "0";
    std::string s = sign_ < 0 ? "-" : "";
    s += mant_.to_decimal();
    s += " * 2^";
    s += std::to_string(exp_);
    return s;
}

} // namespace ivalkit
