#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ivalkit/bigfloat.hpp"
#include "ivalkit/format.hpp"
#include "ivalkit/function.hpp"
#include "ivalkit/interval.hpp"

namespace ivalkit {

/// Telemetry sink; safe to share across concurrent hull evaluations.
struct OracleStats {
    std::atomic<std::uint64_t> point_evals{0};
    std::atomic<std::uint32_t> max_q{0};

    void note(unsigned q) {
        point_evals.fetch_add(1, std::memory_order_relaxed);
        std::uint32_t cur = max_q.load(std::memory_order_relaxed);
        while (cur < q && !max_q.compare_exchange_weak(cur, q)) {
        }
    }
};

/// Working-precision schedule for the adaptive loop. q_start = 0 selects the
/// default 2*p + 10 for the format at hand.
struct OracleConfig {
    unsigned q_start = 0;
    unsigned q_growth = 2;
    unsigned q_max = 4096;
    unsigned pi_guard = 32;
    OracleStats* stats = nullptr;

    unsigned resolved_q_start(const Format& fmt) const;
    void validate(const Format& fmt) const;  // throws std::invalid_argument
};

/// Two-sided enclosure of an exact real value: lo <= value <= hi, both ends
/// carrying about q significant bits. Either end may be a signed infinity
/// when the exact value is one (closure endpoints such as atanh(1)).
struct HPBound {
    BigFloat lo, hi;
    unsigned q = 0;
};

/// Bracket f(xs...) at working precision q. xs are exact format values; the
/// bracket width is a few units in the last place of precision q, except for
/// exp arguments so large that the result exponent leaves the supported
/// range, where the bracket saturates to a coarse but still valid enclosure.
/// Throws DomainError outside the closed natural domain.
HPBound point_enclosure(Fn f, std::span<const double> xs, unsigned q);
HPBound point_enclosure(Fn f, double x, unsigned q);

/// Tightest representable enclosure of the exact range of f over
/// x (intersected with the natural domain). Per endpoint the loop raises q
/// until both bracket ends round, in the endpoint's outward direction, to
/// the same format value; throws PrecisionExhaustedError at q_max.
Interval tightest_hull(Fn f, const Interval& x, const OracleConfig& cfg = {});
Interval tightest_hull(Fn f, std::span<const Interval> args,
                       const OracleConfig& cfg = {});

/// next_out(tightest_hull(f, next_out(x))): the widest result the accurate
/// mode admits for this input.
Interval accurate_envelope(Fn f, const Interval& x, const OracleConfig& cfg = {});
Interval accurate_envelope(Fn f, std::span<const Interval> args,
                           const OracleConfig& cfg = {});

/// Locations of sine's critical points relative to a bounded input interval.
/// piece_endpoints lists the format endpoints delimiting the monotonic runs
/// that matter for the hull (the input endpoints); `increasing` is set when
/// no critical point lies inside.
struct SinScan {
    bool contains_max = false;
    bool contains_min = false;
    std::optional<bool> increasing;
    std::vector<double> piece_endpoints;
};

SinScan sin_extrema_scan(const Interval& x, const OracleConfig& cfg = {});

namespace detail {
/// Enclosure of pi with at least `bits` correct bits (suite generation uses
/// it to place extremum-straddling intervals).
HPBound pi_enclosure(unsigned bits);
} // namespace detail

} // namespace ivalkit
