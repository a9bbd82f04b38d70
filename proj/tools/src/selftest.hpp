#pragma once

#include <iosfwd>

#include "ivalkit/oracle.hpp"

namespace ivalkit::cli {

/// Turn the tester on itself: the next_out suite against the stepping
/// module, kernel and reference-engine arithmetic against exact rationals,
/// and the two published accurate-envelope reproductions. Prints one line
/// per item; returns 0 iff everything passes.
int run_selftest(std::ostream& out, const OracleConfig& cfg, std::size_t n_random);

} // namespace ivalkit::cli
