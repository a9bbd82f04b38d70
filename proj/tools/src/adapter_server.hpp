#pragma once

#include <iosfwd>
#include <string>

#include "ivalkit/interval.hpp"

namespace ivalkit::cli {

enum class AdapterKind { Builtin, Naive32 };

/// Serve the line protocol on the given streams until BYE or EOF.
/// Returns the process exit code.
int run_adapter(AdapterKind kind, std::istream& in, std::ostream& out);

/// The naive32 evaluation: every operation is computed on the binary64
/// grid and only then taken down to binary32 (outward). Basic arithmetic
/// survives this unharmed; the elementary functions lose tightness one
/// binary32 ulp at a time, which is exactly the double-rounding failure
/// pattern the harness exists to expose.
Interval naive32_eval(Fn f, std::span<const Interval> args_b32);

} // namespace ivalkit::cli
