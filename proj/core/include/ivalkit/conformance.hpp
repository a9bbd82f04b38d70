#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ivalkit/format.hpp"
#include "ivalkit/function.hpp"
#include "ivalkit/interval.hpp"

namespace ivalkit {

/// Accuracy-mode lattice, totally ordered by strength.
enum class Level : std::uint8_t { Nonconforming = 0, Valid = 1, Accurate = 2, Tightest = 3 };

const char* level_name(Level l);
std::optional<Level> parse_level(std::string_view token);

/// The accuracy mode the built-in kernel achieves, a documented constant of
/// the build: tightest for every operation, because basic arithmetic rounds
/// endpoints exactly and the elementary functions run through the adaptive
/// engine at the format's precision.
Level kernel_mode(Fn f);

/// A reference case: inputs, the tightest expected output, and (usually) the
/// accurate-mode envelope. y is regenerable from the inputs; y_prime, when
/// present, contains y.
struct TestingPair {
    Fn f;
    Format fmt;
    std::vector<Interval> args;
    Interval y;
    std::optional<Interval> y_prime;
    std::string tag;  // free-form provenance; never starts with '['

    TestingPair(Fn f_, Format fmt_, std::vector<Interval> args_, Interval y_,
                std::optional<Interval> yp = std::nullopt, std::string tag_ = {})
        : f(f_), fmt(fmt_), args(std::move(args_)), y(std::move(y_)),
          y_prime(std::move(yp)), tag(std::move(tag_)) {}

    bool operator==(const TestingPair& o) const;
};

struct Verdict {
    Level level;
    Interval z;
};

/// Strongest level whose predicate holds: Tightest iff z = y (bit equality
/// after zero normalization), else Accurate iff y <= z <= y', else Valid iff
/// z >= y, else Nonconforming. Throws MissingEnvelopeError when the envelope
/// is needed but absent.
Verdict classify(const Interval& z, const TestingPair& pair);

/// Diagnostic only: messages when the envelope escapes the closure of the
/// function's mathematical range (sin beyond [-1,1], a negative exp bound).
std::vector<std::string> range_sanity(const TestingPair& pair);

/// Evaluation outcome for one pair: either an interval or a fault note
/// (adapter crash, protocol garbage). Faults classify as Nonconforming.
struct EvalResult {
    std::optional<Interval> z;
    std::string fault;

    static EvalResult ok(Interval v) { return {std::move(v), {}}; }
    static EvalResult failed(std::string why) { return {std::nullopt, std::move(why)}; }
};

using Evaluator = std::function<EvalResult(const TestingPair&)>;

struct PairOutcome {
    std::size_t index = 0;
    Level level = Level::Nonconforming;
    std::optional<Interval> z;
    std::string note;  // fault text or classification caveat
};

struct RangeWarning {
    std::size_t index;
    std::string message;
};

struct RunOptions {
    Level claimed = Level::Tightest;
    std::size_t fault_budget = 5;  // faults tolerated before the suite aborts
};

struct Report {
    Level claimed = Level::Tightest;
    bool claim_upheld = true;
    bool aborted_on_faults = false;
    std::size_t executed = 0;
    std::uint64_t faults = 0;
    std::map<Fn, std::array<std::uint64_t, 4>> counts;  // per function x level
    std::vector<PairOutcome> outcomes;                  // index-ordered
    std::vector<std::size_t> failing;                   // indices below the claim
    std::vector<RangeWarning> range_warnings;
};

/// Evaluate every pair, classify, aggregate. Deterministic output order; a
/// fault is data, not an exception. With several evaluators the pairs fan
/// out across one worker thread per evaluator (use one adapter instance per
/// evaluator; results are merged back in index order).
Report run_suite(std::span<const TestingPair> pairs, const Evaluator& eval,
                 const RunOptions& opts = {});
Report run_suite(std::span<const TestingPair> pairs,
                 std::span<const Evaluator> evals, const RunOptions& opts = {});

/// True iff the weakest verdict in the report is at least `claimed`.
bool check_claim(const Report& report, Level claimed);

/// Human-readable summary table.
std::string render_table(const Report& report, std::span<const TestingPair> pairs);
/// Machine-readable key=value records, one line per pair outcome.
std::string render_records(const Report& report, std::span<const TestingPair> pairs);

} // namespace ivalkit
