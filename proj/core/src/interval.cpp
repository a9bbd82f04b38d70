#include "ivalkit/interval.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>
#include <stdexcept>

#include "ivalkit/detail/kernels.hpp"
#include "ivalkit/errors.hpp"
#include "ivalkit/oracle.hpp"
#include "ivalkit/rounding.hpp"

namespace ivalkit {

using detail::add_dir;
using detail::div_dir;
using detail::fma_dir;
using detail::mul_dir;
using detail::sqrt_dir;
using detail::sub_dir;

namespace {
double norm_zero(double v) { return v == 0.0 ? 0.0 : v; }
constexpr double kInf = __builtin_huge_val();
} // namespace

Interval Interval::make(double inf, double sup, const Format& fmt) {
    if (std::isnan(inf) || std::isnan(sup))
        throw InvalidIntervalError("interval endpoint is NaN");
    if (inf == kInf) throw InvalidIntervalError("inf endpoint is +inf");
    if (sup == -kInf) throw InvalidIntervalError("sup endpoint is -inf");
    if (inf > sup) throw InvalidIntervalError("inf > sup");
    if (!representable_in(inf, fmt) || !representable_in(sup, fmt))
        throw InvalidIntervalError("endpoint not representable in format");
    return Interval(norm_zero(inf), norm_zero(sup), fmt, /*empty=*/false);
}

Interval Interval::empty(const Format& fmt) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return Interval(nan, nan, fmt, /*empty=*/true);
}

Interval Interval::entire(const Format& fmt) { return make(-kInf, kInf, fmt); }

Interval Interval::point(double v, const Format& fmt) { return make(v, v, fmt); }

bool Interval::is_entire() const {
    return !empty_ && inf_ == -kInf && sup_ == kInf;
}

double Interval::inf() const {
    assert(!empty_ && "endpoint of the empty set read");
    return inf_;
}

double Interval::sup() const {
    assert(!empty_ && "endpoint of the empty set read");
    return sup_;
}

bool Interval::bounded() const {
    return !empty_ && std::isfinite(inf_) && std::isfinite(sup_);
}

bool Interval::contains(double v) const {
    return !empty_ && inf_ <= v && v <= sup_;
}

bool Interval::contains(const Interval& other) const {
    if (other.empty_) return true;
    if (empty_) return false;
    return inf_ <= other.inf_ && other.sup_ <= sup_;
}

bool Interval::is_point() const { return !empty_ && inf_ == sup_; }

bool Interval::operator==(const Interval& o) const {
    if (fmt_ != o.fmt_) return false;
    if (empty_ || o.empty_) return empty_ == o.empty_;
    return std::bit_cast<std::uint64_t>(inf_) == std::bit_cast<std::uint64_t>(o.inf_) &&
           std::bit_cast<std::uint64_t>(sup_) == std::bit_cast<std::uint64_t>(o.sup_);
}

Interval Interval::intersect(const Interval& o) const {
    assert(fmt_ == o.fmt_);
    if (empty_ || o.empty_) return empty(fmt_);
    const double lo = std::max(inf_, o.inf_);
    const double hi = std::min(sup_, o.sup_);
    if (lo > hi) return empty(fmt_);
    return make(lo, hi, fmt_);
}

Interval Interval::hull_with(const Interval& o) const {
    assert(fmt_ == o.fmt_);
    if (empty_) return o;
    if (o.empty_) return *this;
    return make(std::min(inf_, o.inf_), std::max(sup_, o.sup_), fmt_);
}

Relation relate(const Interval& a, const Interval& b) {
    if (a.is_empty() && b.is_empty()) return Relation::Equal;
    if (a.is_empty()) return Relation::ProperSubset;
    if (b.is_empty()) return Relation::ProperSuperset;
    if (a == b) return Relation::Equal;
    if (b.contains(a)) return Relation::ProperSubset;
    if (a.contains(b)) return Relation::ProperSuperset;
    if (a.sup() < b.inf() || b.sup() < a.inf()) return Relation::Disjoint;
    return Relation::Overlapping;
}

const char* relation_name(Relation r) {
    switch (r) {
        case Relation::Equal: return "equal";
        case Relation::ProperSubset: return "proper-subset";
        case Relation::ProperSuperset: return "proper-superset";
        case Relation::Overlapping: return "overlapping";
        case Relation::Disjoint: return "disjoint";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Tightest arithmetic. Each operation is computed per format: binary32
// intervals run the float kernels natively rather than double kernels plus a
// narrowing step, so binary32 results carry no double-rounding artifacts.

namespace {

template <typename T>
Interval add_impl(const Interval& x, const Interval& y) {
    return Interval::make(
        add_dir(static_cast<T>(x.inf()), static_cast<T>(y.inf()), Direction::Down),
        add_dir(static_cast<T>(x.sup()), static_cast<T>(y.sup()), Direction::Up),
        x.format());
}

template <typename T>
Interval sub_impl(const Interval& x, const Interval& y) {
    return Interval::make(
        sub_dir(static_cast<T>(x.inf()), static_cast<T>(y.sup()), Direction::Down),
        sub_dir(static_cast<T>(x.sup()), static_cast<T>(y.inf()), Direction::Up),
        x.format());
}

template <typename T>
Interval mul_impl(const Interval& x, const Interval& y) {
    const T a = static_cast<T>(x.inf()), b = static_cast<T>(x.sup());
    const T c = static_cast<T>(y.inf()), d = static_cast<T>(y.sup());
    const T lo = std::min(std::min(mul_dir(a, c, Direction::Down),
                                   mul_dir(a, d, Direction::Down)),
                          std::min(mul_dir(b, c, Direction::Down),
                                   mul_dir(b, d, Direction::Down)));
    const T hi = std::max(std::max(mul_dir(a, c, Direction::Up),
                                   mul_dir(a, d, Direction::Up)),
                          std::max(mul_dir(b, c, Direction::Up),
                                   mul_dir(b, d, Direction::Up)));
    return Interval::make(lo, hi, x.format());
}

// Corner quotient for a positive divisor class; u may be infinite, v may be
// +inf or 0 (the open end of the divisor after excluding zero itself).
template <typename T>
T div_corner(T u, T v, Direction dir) {
    if (u == 0) return T{0};
    if (std::isinf(u)) return u;
    if (std::isinf(v)) return T{0};
    if (v == 0) return u > 0 ? kInf : -kInf;
    return div_dir(u, v, dir);
}

template <typename T>
Interval div_pos_den(const Interval& x, const Interval& y) {
    // y = [c, d] with 0 <= c, 0 < d; zero is excluded from the divisor set.
    const T a = static_cast<T>(x.inf()), b = static_cast<T>(x.sup());
    const T c = static_cast<T>(y.inf()), d = static_cast<T>(y.sup());
    const T lo = a >= 0 ? div_corner(a, d, Direction::Down)
                        : div_corner(a, c, Direction::Down);
    const T hi = b <= 0 ? div_corner(b, d, Direction::Up)
                        : div_corner(b, c, Direction::Up);
    return Interval::make(lo, hi, x.format());
}

template <typename T>
Interval div_impl(const Interval& x, const Interval& y) {
    const Format& fmt = x.format();
    if (y.inf() == 0 && y.sup() == 0) return Interval::empty(fmt);
    if (y.inf() < 0 && y.sup() > 0) {
        // Divisors on both sides of zero: any nonzero dividend blows up.
        if (x.inf() == 0 && x.sup() == 0) return Interval::point(0.0, fmt);
        return Interval::entire(fmt);
    }
    if (y.sup() <= 0) return neg(div_pos_den<T>(x, neg(y)));  // x/y = -(x/(-y))
    return div_pos_den<T>(x, y);
}

template <typename T>
Interval sqr_impl(const Interval& x) {
    const T a = static_cast<T>(x.inf()), b = static_cast<T>(x.sup());
    const T big = std::max(static_cast<T>(std::fabs(a)), static_cast<T>(std::fabs(b)));
    const T hi = mul_dir(big, big, Direction::Up);
    T lo;
    if (a <= 0 && 0 <= b) {
        lo = 0;
    } else {
        const T small = a > 0 ? a : b;  // endpoint of least magnitude
        lo = mul_dir(small, small, Direction::Down);
    }
    return Interval::make(lo, hi, x.format());
}

template <typename T>
Interval sqrt_impl(const Interval& x) {
    if (x.sup() < 0) return Interval::empty(x.format());
    const T lo =
        x.inf() <= 0 ? T{0} : sqrt_dir(static_cast<T>(x.inf()), Direction::Down);
    const T hi = sqrt_dir(static_cast<T>(x.sup()), Direction::Up);
    return Interval::make(lo, hi, x.format());
}

template <typename T>
Interval fma_impl(const Interval& x, const Interval& y, const Interval& z) {
    const T a = static_cast<T>(x.inf()), b = static_cast<T>(x.sup());
    const T c = static_cast<T>(y.inf()), d = static_cast<T>(y.sup());
    const T zl = static_cast<T>(z.inf()), zh = static_cast<T>(z.sup());
    const T lo = std::min(std::min(fma_dir(a, c, zl, Direction::Down),
                                   fma_dir(a, d, zl, Direction::Down)),
                          std::min(fma_dir(b, c, zl, Direction::Down),
                                   fma_dir(b, d, zl, Direction::Down)));
    const T hi = std::max(std::max(fma_dir(a, c, zh, Direction::Up),
                                   fma_dir(a, d, zh, Direction::Up)),
                          std::max(fma_dir(b, c, zh, Direction::Up),
                                   fma_dir(b, d, zh, Direction::Up)));
    return Interval::make(lo, hi, x.format());
}

bool is32(const Interval& x) { return x.format().kind == FormatKind::Binary32; }

} // namespace

Interval neg(const Interval& x) {
    if (x.is_empty()) return x;
    return Interval::make(-x.sup(), -x.inf(), x.format());
}

Interval add(const Interval& x, const Interval& y) {
    assert(x.format() == y.format());
    if (x.is_empty() || y.is_empty()) return Interval::empty(x.format());
    return is32(x) ? add_impl<float>(x, y) : add_impl<double>(x, y);
}

Interval sub(const Interval& x, const Interval& y) {
    assert(x.format() == y.format());
    if (x.is_empty() || y.is_empty()) return Interval::empty(x.format());
    return is32(x) ? sub_impl<float>(x, y) : sub_impl<double>(x, y);
}

Interval mul(const Interval& x, const Interval& y) {
    assert(x.format() == y.format());
    if (x.is_empty() || y.is_empty()) return Interval::empty(x.format());
    return is32(x) ? mul_impl<float>(x, y) : mul_impl<double>(x, y);
}

Interval div(const Interval& x, const Interval& y) {
    assert(x.format() == y.format());
    if (x.is_empty() || y.is_empty()) return Interval::empty(x.format());
    return is32(x) ? div_impl<float>(x, y) : div_impl<double>(x, y);
}

Interval recip(const Interval& x) {
    if (x.is_empty()) return x;
    return div(Interval::point(1.0, x.format()), x);
}

Interval sqrt(const Interval& x) {
    if (x.is_empty()) return x;
    return is32(x) ? sqrt_impl<float>(x) : sqrt_impl<double>(x);
}

Interval sqr(const Interval& x) {
    if (x.is_empty()) return x;
    return is32(x) ? sqr_impl<float>(x) : sqr_impl<double>(x);
}

Interval fma(const Interval& x, const Interval& y, const Interval& z) {
    assert(x.format() == y.format() && x.format() == z.format());
    if (x.is_empty() || y.is_empty() || z.is_empty())
        return Interval::empty(x.format());
    return is32(x) ? fma_impl<float>(x, y, z) : fma_impl<double>(x, y, z);
}

// The elementary functions run through the adaptive-precision engine at the
// format's precision, which makes the kernel's achieved mode tightest.

Interval cbrt(const Interval& x) { return tightest_hull(Fn::Cbrt, x); }
Interval exp(const Interval& x) { return tightest_hull(Fn::Exp, x); }
Interval sin(const Interval& x) { return tightest_hull(Fn::Sin, x); }
Interval atanh(const Interval& x) { return tightest_hull(Fn::Atanh, x); }

Interval apply_op(Fn f, std::span<const Interval> args) {
    if (args.size() != static_cast<std::size_t>(fn_info(f).arity))
        throw std::invalid_argument("apply: arity mismatch");
    switch (f) {
        case Fn::Neg: return neg(args[0]);
        case Fn::Add: return add(args[0], args[1]);
        case Fn::Sub: return sub(args[0], args[1]);
        case Fn::Mul: return mul(args[0], args[1]);
        case Fn::Div: return div(args[0], args[1]);
        case Fn::Recip: return recip(args[0]);
        case Fn::Sqrt: return sqrt(args[0]);
        case Fn::Sqr: return sqr(args[0]);
        case Fn::Fma: return fma(args[0], args[1], args[2]);
        case Fn::Cbrt: return cbrt(args[0]);
        case Fn::Exp: return exp(args[0]);
        case Fn::Sin: return sin(args[0]);
        case Fn::Atanh: return atanh(args[0]);
    }
    throw std::invalid_argument("apply: unknown function");
}

} // namespace ivalkit
