#pragma once

namespace ivalkit {

inline constexpr const char* version_string = "0.1.0";

// Embedded in pair-file headers so regenerated suites can be told apart.
inline constexpr const char* generator_string = "ivalkit 0.1.0";

} // namespace ivalkit
