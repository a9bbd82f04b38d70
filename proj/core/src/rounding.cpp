#include "ivalkit/rounding.hpp"

#include <bit>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ivalkit/bigfloat.hpp"
#include "ivalkit/errors.hpp"
#include "ivalkit/interval.hpp"

namespace ivalkit {

namespace {

// Successor on the format's bit encoding: the sign-magnitude pattern maps
// monotonically onto the number line, so stepping is an integer increment
// on positives and a decrement on negatives. This is deliberately a
// different mechanism from the arithmetic characterization the test suites
// check it against.
template <typename F, typename U>
F next_up_bits(F x) {
    if (std::isnan(x)) throw std::invalid_argument("next_up: NaN input");
    if (std::isinf(x)) {
        if (x > 0) return x;
        return -std::numeric_limits<F>::max();
    }
    if (x == 0) return std::numeric_limits<F>::denorm_min();
    U bits = std::bit_cast<U>(x);
    if (x > 0) {
        ++bits;  // max_finite rolls over to +inf
    } else {
        --bits;
    }
    F r = std::bit_cast<F>(bits);
    return r == 0 ? F{0} : r;  // -denorm_min steps to a normalized zero
}

} // namespace

double next_up(double x, const Format& fmt) {
    if (fmt.kind == FormatKind::Binary64) return next_up_bits<double, std::uint64_t>(x);
    assert(representable_in(x, fmt));
    return static_cast<double>(
        next_up_bits<float, std::uint32_t>(static_cast<float>(x)));
}

double next_down(double x, const Format& fmt) {
    return -next_up(-x, fmt);
}

Interval next_out(const Interval& x) {
    if (x.is_empty()) return x;
    return Interval::make(next_down(x.inf(), x.format()),
                          next_up(x.sup(), x.format()), x.format());
}

double round_to_format(const BigFloat& v, const Format& fmt, Direction dir) {
    return v.to_format(fmt, dir);
}

} // namespace ivalkit
