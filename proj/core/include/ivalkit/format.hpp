#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace ivalkit {

enum class FormatKind : std::uint8_t { Binary32, Binary64 };

/// Descriptor of an IEEE 754 binary interchange format. Only binary32 and
/// binary64 are wired up; the fields are kept explicit so that code relying
/// on them (grid granularity, overflow thresholds) stays self-describing.
struct Format {
    FormatKind kind;
    int precision;         // significand bits, including the implicit one
    int emin;              // minimum normal exponent
    int emax;              // maximum exponent
    double min_subnormal;  // smallest positive value
    double min_normal;     // smallest positive normal value
    double max_finite;     // largest finite value

    static constexpr Format binary32() {
        return {FormatKind::Binary32, 24, -126, 127,
                0x1p-149, 0x1p-126, 0x1.fffffep+127};
    }
    static constexpr Format binary64() {
        return {FormatKind::Binary64, 53, -1022, 1023,
                0x1p-1074, 0x1p-1022, 0x1.fffffffffffffp+1023};
    }

    constexpr bool operator==(const Format& o) const { return kind == o.kind; }
    constexpr bool operator!=(const Format& o) const { return kind != o.kind; }

    const char* name() const {
        return kind == FormatKind::Binary32 ? "b32" : "b64";
    }
};

/// Accepts the short tokens used by pair files and the CLI ("b32"/"b64")
/// plus the long IEEE names.
std::optional<Format> parse_format(std::string_view token);

/// True when the double holds a value exactly representable in the format
/// (always true for binary64 inputs).
bool representable_in(double v, const Format& fmt);

} // namespace ivalkit
