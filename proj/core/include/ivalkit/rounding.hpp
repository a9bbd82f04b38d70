#pragma once

#include "ivalkit/format.hpp"

namespace ivalkit {

class Interval;
class BigFloat;

/// Directed rounding target: Down is RD (toward -oo), Up is RU (toward +oo).
enum class Direction : std::uint8_t { Down, Up };

/// Least format member strictly greater than x; +oo is a fixed point,
/// next_up(-oo) is -max_finite, next_up(max_finite) is +oo.
/// Zero results are normalized to +0. NaN input throws.
double next_up(double x, const Format& fmt);

/// Exactly -next_up(-x).
double next_down(double x, const Format& fmt);

/// Interval widened one format step outward at each finite endpoint;
/// identity on the empty set and on infinite endpoints.
Interval next_out(const Interval& x);

/// Round a high-precision value into the format with the given direction.
/// Overflow saturates to the outward infinity, underflow to zero or the
/// minimum subnormal depending on direction.
double round_to_format(const BigFloat& v, const Format& fmt, Direction dir);

} // namespace ivalkit
