#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ivalkit/conformance.hpp"
#include "ivalkit/format.hpp"
#include "ivalkit/function.hpp"
#include "ivalkit/oracle.hpp"

namespace ivalkit {

/// Recipe for one generated suite. Random endpoints are drawn uniformly over
/// the format's finite bit patterns, filtered to the function's domain; the
/// stream is a pure function of (seed, pair index), so generation order and
/// worker count cannot change the output.
struct SuiteSpec {
    Fn f = Fn::Exp;
    Format fmt = Format::binary64();
    std::size_t n_random = 100;
    std::uint64_t seed = 1;
    bool include_specials = true;
    bool include_extrema = true;   // sin only: straddles of pi/2 + 2k pi
    bool include_symmetry = true;  // mirrored copies of a few random pairs
};

/// Generate the suite; every pair carries both the tightest expected output
/// and the accurate-mode envelope, both produced by the adaptive engine.
std::vector<TestingPair> gen_function_suite(const SuiteSpec& spec,
                                            const OracleConfig& cfg = {});

/// One next_out test case. Invalid-constructor cases carry the raw endpoint
/// payload instead of an interval and expect rejection.
struct NextOutCase {
    Format fmt = Format::binary64();
    bool expect_invalid = false;
    std::optional<Interval> x;         // set unless expect_invalid
    std::optional<Interval> expected;  // set unless expect_invalid
    double raw_inf = 0, raw_sup = 0;   // payload for invalid cases
    std::optional<std::size_t> mirror_of;  // index of the case this mirrors
    std::string tag;
};

/// The four case categories: special endpoint values, seeded random
/// endpoints, the interval specials (empty, entire, invalid), and mirrored
/// symmetry cases. Expected outputs come from an arithmetic successor
/// characterization independent of the bit-stepping implementation.
std::vector<NextOutCase> gen_nextout_suite(const Format& fmt, std::size_t n_random,
                                           std::uint64_t seed);

/// Arithmetic successor oracle backing gen_nextout_suite (exposed for the
/// cross-implementation tests).
double arith_next_up(double x, const Format& fmt);

/// Pair-file container: self-describing header plus records.
struct PairFile {
    std::string function = "mixed";  // informational
    std::string format = "b64";
    std::uint64_t seed = 0;
    std::string generator;
    std::vector<TestingPair> pairs;
};

PairFile pair_file_for(const SuiteSpec& spec, std::vector<TestingPair> pairs);

/// Line-oriented text with hex-float endpoints; read(write(x)) is
/// bit-exact on the pair list. Throws ParseError with a line number.
void write_pairs(const PairFile& file, std::ostream& out);
PairFile read_pairs(std::istream& in);

void write_pairs_file(const PairFile& file, const std::string& path);
PairFile read_pairs_file(const std::string& path);

} // namespace ivalkit
