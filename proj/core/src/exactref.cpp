#include "ivalkit/refcheck/exactref.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace ivalkit::refcheck {

namespace {
constexpr double kInf = __builtin_huge_val();
}

void Mag::trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
}

Mag Mag::from_u64(std::uint64_t v) {
    Mag m;
    if (v) m.limbs_.push_back(static_cast<std::uint32_t>(v));
    if (v >> 32) m.limbs_.push_back(static_cast<std::uint32_t>(v >> 32));
    return m;
}

int Mag::cmp(const Mag& a, const Mag& b) {
    if (a.limbs_.size() != b.limbs_.size())
        return a.limbs_.size() < b.limbs_.size() ? -1 : 1;
    for (std::size_t i = a.limbs_.size(); i-- > 0;)
        if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] < b.limbs_[i] ? -1 : 1;
    return 0;
}

Mag Mag::add(const Mag& a, const Mag& b) {
    Mag r;
    const std::size_t n = std::max(a.limbs_.size(), b.limbs_.size());
    r.limbs_.resize(n + 1, 0);
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t s = carry;
        if (i < a.limbs_.size()) s += a.limbs_[i];
        if (i < b.limbs_.size()) s += b.limbs_[i];
        r.limbs_[i] = static_cast<std::uint32_t>(s);
        carry = s >> 32;
    }
    r.limbs_[n] = static_cast<std::uint32_t>(carry);
    r.trim();
    return r;
}

Mag Mag::sub(const Mag& a, const Mag& b) {
    assert(cmp(a, b) >= 0);
    Mag r;
    r.limbs_.resize(a.limbs_.size(), 0);
    std::int64_t borrow = 0;
    for (std::size_t i = 0; i < a.limbs_.size(); ++i) {
        std::int64_t d = static_cast<std::int64_t>(a.limbs_[i]) - borrow -
                         (i < b.limbs_.size() ? b.limbs_[i] : 0);
        borrow = d < 0;
        if (d < 0) d += (1ll << 32);
        r.limbs_[i] = static_cast<std::uint32_t>(d);
    }
    r.trim();
    return r;
}

Mag Mag::mul(const Mag& a, const Mag& b) {
    if (a.zero() || b.zero()) return {};
    Mag r;
    r.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
    for (std::size_t i = 0; i < a.limbs_.size(); ++i) {
        std::uint64_t carry = 0;
        for (std::size_t j = 0; j < b.limbs_.size(); ++j) {
            const std::uint64_t t = static_cast<std::uint64_t>(a.limbs_[i]) * b.limbs_[j] +
                                    r.limbs_[i + j] + carry;
            r.limbs_[i + j] = static_cast<std::uint32_t>(t);
            carry = t >> 32;
        }
        r.limbs_[i + b.limbs_.size()] += static_cast<std::uint32_t>(carry);
    }
    r.trim();
    return r;
}

Mag Mag::shl(std::size_t k) const {
    if (zero()) return {};
    Mag r;
    const std::size_t ls = k / 32, bs = k % 32;
    r.limbs_.assign(limbs_.size() + ls + 1, 0);
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        const std::uint64_t v = static_cast<std::uint64_t>(limbs_[i]) << bs;
        r.limbs_[i + ls] |= static_cast<std::uint32_t>(v);
        r.limbs_[i + ls + 1] |= static_cast<std::uint32_t>(v >> 32);
    }
    r.trim();
    return r;
}

Mag Mag::shr(std::size_t k) const {
    const std::size_t ls = k / 32, bs = k % 32;
    if (ls >= limbs_.size()) return {};
    Mag r;
    r.limbs_.assign(limbs_.size() - ls, 0);
    for (std::size_t i = 0; i < r.limbs_.size(); ++i) {
        std::uint64_t v = limbs_[i + ls] >> bs;
        if (bs && i + ls + 1 < limbs_.size())
            v |= static_cast<std::uint64_t>(limbs_[i + ls + 1]) << (32 - bs);
        r.limbs_[i] = static_cast<std::uint32_t>(v);
    }
    r.trim();
    return r;
}

bool Mag::low_bits_set(std::size_t k) const {
    const std::size_t full = k / 32, rest = k % 32;
    for (std::size_t i = 0; i < full && i < limbs_.size(); ++i)
        if (limbs_[i]) return true;
    if (rest && full < limbs_.size() && (limbs_[full] & ((1u << rest) - 1u)))
        return true;
    return false;
}

std::size_t Mag::bits() const {
    if (limbs_.empty()) return 0;
    return 32 * (limbs_.size() - 1) +
           (32 - static_cast<std::size_t>(std::countl_zero(limbs_.back())));
}

std::uint64_t Mag::to_u64() const {
    assert(bits() <= 64);
    std::uint64_t v = limbs_.empty() ? 0 : limbs_[0];
    if (limbs_.size() > 1) v |= static_cast<std::uint64_t>(limbs_[1]) << 32;
    return v;
}

void Mag::divmod(const Mag& a, const Mag& b, Mag& q, Mag& r) {
    if (b.zero()) throw std::logic_error("refcheck: divide by zero");
    q = Mag{};
    r = Mag{};
    if (a.zero()) return;
    const std::size_t n = a.bits();
    std::vector<std::uint32_t> qbits((n + 31) / 32, 0);
    for (std::size_t i = n; i-- > 0;) {
        r = r.shl(1);
        if ((a.limbs_[i / 32] >> (i % 32)) & 1u) r = add(r, from_u64(1));
        if (cmp(r, b) >= 0) {
            r = sub(r, b);
            qbits[i / 32] |= (1u << (i % 32));
        }
    }
    q.limbs_ = std::move(qbits);
    q.trim();
}

// ---------------------------------------------------------------------------

Dyadic Dyadic::of(double d) {
    assert(std::isfinite(d));
    Dyadic r;
    if (d == 0) return r;
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(d);
    const std::uint64_t frac = bits & ((1ull << 52) - 1);
    const int be = static_cast<int>((bits >> 52) & 0x7FF);
    r.sign = (bits >> 63) ? -1 : 1;
    if (be == 0) {
        r.mag = Mag::from_u64(frac);
        r.exp = -1074;
    } else {
        r.mag = Mag::from_u64(frac | (1ull << 52));
        r.exp = be - 1075;
    }
    return r;
}

Dyadic Dyadic::neg() const {
    Dyadic r = *this;
    r.sign = -r.sign;
    return r;
}

Dyadic Dyadic::add(const Dyadic& a, const Dyadic& b) {
    if (a.sign == 0) return b;
    if (b.sign == 0) return a;
    const std::int64_t e = std::min(a.exp, b.exp);
    const Mag am = a.mag.shl(static_cast<std::size_t>(a.exp - e));
    const Mag bm = b.mag.shl(static_cast<std::size_t>(b.exp - e));
    Dyadic r;
    r.exp = e;
    if (a.sign == b.sign) {
        r.sign = a.sign;
        r.mag = Mag::add(am, bm);
    } else {
        const int c = Mag::cmp(am, bm);
        if (c == 0) return {};
        r.sign = c > 0 ? a.sign : b.sign;
        r.mag = c > 0 ? Mag::sub(am, bm) : Mag::sub(bm, am);
    }
    return r;
}

Dyadic Dyadic::mul(const Dyadic& a, const Dyadic& b) {
    if (a.sign == 0 || b.sign == 0) return {};
    Dyadic r;
    r.sign = a.sign * b.sign;
    r.mag = Mag::mul(a.mag, b.mag);
    r.exp = a.exp + b.exp;
    return r;
}

int Dyadic::cmp(const Dyadic& a, const Dyadic& b) {
    if (a.sign != b.sign) return a.sign < b.sign ? -1 : 1;
    if (a.sign == 0) return 0;
    const std::int64_t e = std::min(a.exp, b.exp);
    const int c = Mag::cmp(a.mag.shl(static_cast<std::size_t>(a.exp - e)),
                           b.mag.shl(static_cast<std::size_t>(b.exp - e)));
    return a.sign > 0 ? c : -c;
}

namespace {

double saturate(int sign, const Format& fmt, Direction dir) {
    const bool outward =
        (dir == Direction::Up && sign > 0) || (dir == Direction::Down && sign < 0);
    const double mag = outward ? kInf : fmt.max_finite;
    return sign > 0 ? mag : -mag;
}

// Directed rounding of sign * (mag * 2^exp + theta * 2^exp) with theta in
// [0, 1), theta > 0 signalled by sticky_in. The top exponent of the floor
// already equals the top exponent of the true value, so grid selection from
// `mag` alone is sound.
double finish_round(int sign, const Mag& mag, std::int64_t exp, bool sticky_in,
                    const Format& fmt, Direction dir) {
    assert(sign != 0 && !mag.zero());
    const std::int64_t top = exp + static_cast<std::int64_t>(mag.bits()) - 1;
    const std::int64_t grid_min = fmt.emin - (fmt.precision - 1);
    std::int64_t grid = std::max(top - (fmt.precision - 1), grid_min);
    Mag units;
    bool sticky = sticky_in;
    if (exp >= grid) {
        units = mag.shl(static_cast<std::size_t>(exp - grid));
    } else {
        const auto k = static_cast<std::size_t>(grid - exp);
        units = mag.shr(k);
        sticky = sticky || mag.low_bits_set(k);
    }
    const bool outward =
        (dir == Direction::Up && sign > 0) || (dir == Direction::Down && sign < 0);
    if (sticky && outward) units = Mag::add(units, Mag::from_u64(1));
    if (units.bits() > static_cast<std::size_t>(fmt.precision)) {
        // Increment carried into the next binade; the new unit count is an
        // exact power of two, nothing is dropped.
        units = units.shr(1);
        grid += 1;
    }
    if (units.zero()) return 0.0;
    const std::int64_t final_top = grid + static_cast<std::int64_t>(units.bits()) - 1;
    if (final_top > fmt.emax) return saturate(sign, fmt, dir);
    const double mag_val =
        std::ldexp(static_cast<double>(units.to_u64()), static_cast<int>(grid));
    assert(std::isfinite(mag_val));
    return sign > 0 ? mag_val : -mag_val;
}

} // namespace

double dyadic_to_format(const Dyadic& v, const Format& fmt, Direction dir) {
    if (v.sign == 0) return 0.0;
    return finish_round(v.sign, v.mag, v.exp, false, fmt, dir);
}

double rational_to_format(const Dyadic& num, const Dyadic& den, const Format& fmt,
                          Direction dir) {
    assert(den.sign > 0);
    if (num.sign == 0) return 0.0;
    // Take the quotient to a scale at least three bits below any possible
    // format grid slot, then grid-round the floor with the remainder as
    // stickiness.
    const std::int64_t rough =
        (static_cast<std::int64_t>(num.mag.bits()) + num.exp) -
        (static_cast<std::int64_t>(den.mag.bits()) + den.exp);
    const std::int64_t grid_min = fmt.emin - (fmt.precision - 1);
    const std::int64_t g0 =
        std::min(rough - (fmt.precision + 4), grid_min - 3);
    const std::int64_t shift = num.exp - den.exp - g0;
    Mag n = num.mag, d = den.mag;
    if (shift >= 0)
        n = n.shl(static_cast<std::size_t>(shift));
    else
        d = d.shl(static_cast<std::size_t>(-shift));
    Mag q, r;
    Mag::divmod(n, d, q, r);
    if (q.zero()) {
        // Quotient magnitude below even the deepest grid slot.
        const bool outward = (dir == Direction::Up && num.sign > 0) ||
                             (dir == Direction::Down && num.sign < 0);
        if (!outward) return 0.0;
        return num.sign > 0 ? fmt.min_subnormal : -fmt.min_subnormal;
    }
    return finish_round(num.sign, q, g0, !r.zero(), fmt, dir);
}

// ---------------------------------------------------------------------------
// Expected interval results.

namespace {

struct XEnd {
    // Extended endpoint: finite dyadic or +-inf.
    bool infinite = false;
    int inf_sign = 0;
    Dyadic v;

    static XEnd of(double d) {
        XEnd e;
        if (std::isinf(d)) {
            e.infinite = true;
            e.inf_sign = d > 0 ? 1 : -1;
        } else {
            e.v = Dyadic::of(d);
        }
        return e;
    }
    int sgn() const { return infinite ? inf_sign : v.sign; }
};

int xend_cmp(const XEnd& a, const XEnd& b) {
    if (a.infinite || b.infinite) {
        const int sa = a.infinite ? (a.inf_sign > 0 ? 2 : -2) : 0;
        const int sb = b.infinite ? (b.inf_sign > 0 ? 2 : -2) : 0;
        if (sa != sb) return sa < sb ? -1 : 1;
        if (a.infinite) return 0;
    }
    return Dyadic::cmp(a.v, b.v);
}

XEnd xend_add(const XEnd& a, const XEnd& b) {
    if (a.infinite) return a;
    if (b.infinite) return b;
    XEnd r;
    r.v = Dyadic::add(a.v, b.v);
    return r;
}

XEnd xend_mul(const XEnd& a, const XEnd& b) {
    if (a.sgn() == 0 || b.sgn() == 0) return XEnd{};  // 0 * inf = 0 here
    if (a.infinite || b.infinite) {
        XEnd r;
        r.infinite = true;
        r.inf_sign = a.sgn() * b.sgn();
        return r;
    }
    XEnd r;
    r.v = Dyadic::mul(a.v, b.v);
    return r;
}

double xend_round(const XEnd& e, const Format& fmt, Direction dir) {
    if (e.infinite) return e.inf_sign > 0 ? kInf : -kInf;
    return dyadic_to_format(e.v, fmt, dir);
}

Interval minmax_round(std::span<const XEnd> cands, const Format& fmt) {
    const XEnd* lo = &cands[0];
    const XEnd* hi = &cands[0];
    for (const XEnd& c : cands) {
        if (xend_cmp(c, *lo) < 0) lo = &c;
        if (xend_cmp(c, *hi) > 0) hi = &c;
    }
    return Interval::make(xend_round(*lo, fmt, Direction::Down),
                          xend_round(*hi, fmt, Direction::Up), fmt);
}

Interval expected_div(const Interval& x, const Interval& y) {
    const Format& fmt = x.format();
    if (y.inf() == 0 && y.sup() == 0) return Interval::empty(fmt);
    if (y.inf() < 0 && y.sup() > 0) {
        if (x.inf() == 0 && x.sup() == 0) return Interval::point(0.0, fmt);
        return Interval::entire(fmt);
    }
    if (y.sup() <= 0) return neg(expected_div(x, neg(y)));  // x/y = -(x/(-y))
    // Positive divisor class [c, d], zero excluded from the divisor set.
    const auto quotient = [&](double u, double w, Direction dir) -> double {
        if (u == 0) return 0.0;
        if (std::isinf(u)) return u;
        if (std::isinf(w)) return 0.0;
        if (w == 0) return u > 0 ? kInf : -kInf;
        const Dyadic nu = Dyadic::of(u);
        Dyadic de = Dyadic::of(w);
        Dyadic num = nu;
        if (de.sign < 0) {
            de = de.neg();
            num = num.neg();
        }
        return rational_to_format(num, de, fmt, dir);
    };
    const double a = x.inf(), b = x.sup(), c = y.inf(), d = y.sup();
    const double lo =
        a >= 0 ? quotient(a, d, Direction::Down) : quotient(a, c, Direction::Down);
    const double hi =
        b <= 0 ? quotient(b, d, Direction::Up) : quotient(b, c, Direction::Up);
    return Interval::make(lo, hi, fmt);
}

} // namespace

std::optional<Interval> expected_basic(Fn f, std::span<const Interval> args) {
    const Format& fmt = args[0].format();
    for (const Interval& a : args)
        if (a.is_empty()) return Interval::empty(fmt);
    switch (f) {
        case Fn::Neg:
            return Interval::make(-args[0].sup(), -args[0].inf(), fmt);
        case Fn::Add:
        case Fn::Sub: {
            const Interval& x = args[0];
            const Interval y = f == Fn::Sub ? neg(args[1]) : args[1];
            const XEnd lo = xend_add(XEnd::of(x.inf()), XEnd::of(y.inf()));
            const XEnd hi = xend_add(XEnd::of(x.sup()), XEnd::of(y.sup()));
            return Interval::make(xend_round(lo, fmt, Direction::Down),
                                  xend_round(hi, fmt, Direction::Up), fmt);
        }
        case Fn::Mul: {
            const XEnd xs[2] = {XEnd::of(args[0].inf()), XEnd::of(args[0].sup())};
            const XEnd ys[2] = {XEnd::of(args[1].inf()), XEnd::of(args[1].sup())};
            XEnd cands[4];
            int n = 0;
            for (const XEnd& u : xs)
                for (const XEnd& v : ys) cands[n++] = xend_mul(u, v);
            return minmax_round(std::span<const XEnd>(cands, 4), fmt);
        }
        case Fn::Sqr: {
            const XEnd a = XEnd::of(args[0].inf()), b = XEnd::of(args[0].sup());
            const XEnd s1 = xend_mul(a, a), s2 = xend_mul(b, b);
            XEnd hi = xend_cmp(s1, s2) >= 0 ? s1 : s2;
            XEnd lo;
            if (!(args[0].inf() <= 0 && 0 <= args[0].sup()))
                lo = xend_cmp(s1, s2) <= 0 ? s1 : s2;
            return Interval::make(xend_round(lo, fmt, Direction::Down),
                                  xend_round(hi, fmt, Direction::Up), fmt);
        }
        case Fn::Fma: {
            const XEnd xs[2] = {XEnd::of(args[0].inf()), XEnd::of(args[0].sup())};
            const XEnd ys[2] = {XEnd::of(args[1].inf()), XEnd::of(args[1].sup())};
            XEnd lo, hi;
            bool first = true;
            for (const XEnd& u : xs) {
                for (const XEnd& v : ys) {
                    const XEnd p = xend_mul(u, v);
                    if (first || xend_cmp(p, lo) < 0) lo = p;
                    if (first || xend_cmp(p, hi) > 0) hi = p;
                    first = false;
                }
            }
            const XEnd rl = xend_add(lo, XEnd::of(args[2].inf()));
            const XEnd rh = xend_add(hi, XEnd::of(args[2].sup()));
            return Interval::make(xend_round(rl, fmt, Direction::Down),
                                  xend_round(rh, fmt, Direction::Up), fmt);
        }
        case Fn::Div:
            return expected_div(args[0], args[1]);
        case Fn::Recip:
            return expected_div(Interval::point(1.0, fmt), args[0]);
        default:
            return std::nullopt;
    }
}

} // namespace ivalkit::refcheck
