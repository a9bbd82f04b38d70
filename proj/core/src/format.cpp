#include "ivalkit/format.hpp"

#include <cmath>

namespace ivalkit {

std::optional<Format> parse_format(std::string_view token) {
    if (token == "b32" || token == "binary32") return Format::binary32();
    if (token == "b64" || token == "binary64") return Format::binary64();
    return std::nullopt;
}

bool representable_in(double v, const Format& fmt) {
    if (fmt.kind == FormatKind::Binary64) return true;
    if (std::isnan(v)) return false;
    if (std::isinf(v)) return true;
    return static_cast<double>(static_cast<float>(v)) == v;
}

} // namespace ivalkit
