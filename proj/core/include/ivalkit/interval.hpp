#pragma once

#include <span>
#include <vector>

#include "ivalkit/format.hpp"
#include "ivalkit/function.hpp"

namespace ivalkit {

/// Set-based inf-sup interval over one of the two wired formats, or the
/// empty set. Invariants enforced at construction: inf <= sup, no NaN,
/// inf != +oo, sup != -oo, zero endpoints normalized to +0, binary32
/// endpoints exactly representable. Endpoints of the empty set carry no
/// meaning and must not be read.
class Interval {
public:
    /// Validating constructor; throws InvalidIntervalError on malformed input.
    static Interval make(double inf, double sup, const Format& fmt);
    static Interval empty(const Format& fmt);
    static Interval entire(const Format& fmt);
    /// Degenerate point interval [v, v].
    static Interval point(double v, const Format& fmt);

    bool is_empty() const { return empty_; }
    bool is_entire() const;
    double inf() const;
    double sup() const;
    const Format& format() const { return fmt_; }

    bool bounded() const;
    bool contains(double v) const;
    bool contains(const Interval& other) const;  // other subseteq *this
    bool is_point() const;

    /// Bit-level equality after the constructor's zero normalization;
    /// empty equals empty. Intervals of different formats never compare equal.
    bool operator==(const Interval& o) const;
    bool operator!=(const Interval& o) const { return !(*this == o); }

    Interval intersect(const Interval& o) const;
    Interval hull_with(const Interval& o) const;

private:
    Interval(double inf, double sup, Format fmt, bool empty)
        : inf_(inf), sup_(sup), fmt_(fmt), empty_(empty) {}
    double inf_, sup_;
    Format fmt_;
    bool empty_;
};

enum class Relation : std::uint8_t {
    Equal, ProperSubset, ProperSuperset, Overlapping, Disjoint
};

/// Set relation of a versus b; the empty set is a subset of everything.
Relation relate(const Interval& a, const Interval& b);
const char* relation_name(Relation r);

// Tightest interval arithmetic. Any empty argument yields empty; inputs are
// intersected with the operation's natural domain before range evaluation,
// so e.g. sqrt([-1,2]) = [0, RU(sqrt 2)] and atanh([1,2]) is empty.
Interval neg(const Interval& x);
Interval add(const Interval& x, const Interval& y);
Interval sub(const Interval& x, const Interval& y);
Interval mul(const Interval& x, const Interval& y);
Interval div(const Interval& x, const Interval& y);
Interval recip(const Interval& x);
Interval sqrt(const Interval& x);
Interval sqr(const Interval& x);
Interval fma(const Interval& x, const Interval& y, const Interval& z);

// Elementary functions; computed through the adaptive-precision engine at
// the format's precision, so the achieved mode is tightest.
Interval cbrt(const Interval& x);
Interval exp(const Interval& x);
Interval sin(const Interval& x);
Interval atanh(const Interval& x);

/// Uniform dispatch used by suite runners and adapters.
/// args.size() must equal fn_info(f).arity and all formats must agree.
Interval apply_op(Fn f, std::span<const Interval> args);

} // namespace ivalkit
