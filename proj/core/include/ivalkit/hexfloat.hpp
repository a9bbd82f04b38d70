#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "ivalkit/format.hpp"
#include "ivalkit/interval.hpp"

namespace ivalkit {

/// Canonical hex-float rendering: normalized significand ("0x1.<nibbles>p<e>"
/// with trailing zero nibbles trimmed), "0x0p+0" for zero, "inf"/"-inf" for
/// infinities. Subnormals print normalized (e.g. "0x1p-1074"). Lossless for
/// every format value.
std::string format_hex(double v, const Format& fmt);

/// Exact parse: accepts any hex-float spelling plus inf tokens; rejects
/// values not exactly representable in the format. Returns nullopt with a
/// reason on failure.
std::optional<double> parse_hex(std::string_view text, const Format& fmt,
                                std::string* error = nullptr);

/// "[empty]", "[entire]" or "[<hex>,<hex>]"; no spaces.
std::string format_interval_hex(const Interval& iv);
std::optional<Interval> parse_interval_hex(std::string_view text, const Format& fmt,
                                           std::string* error = nullptr);

/// 17 significant digits rounded away from zero, exponent rendered bare
/// ("e0", "e-324"); the widest-magnitude decimal a reader can trust.
std::string format_decimal_away(double v);
std::string format_interval_decimal(const Interval& iv);

} // namespace ivalkit
