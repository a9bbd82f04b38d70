#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ivalkit/format.hpp"
#include "ivalkit/function.hpp"
#include "ivalkit/interval.hpp"
#include "ivalkit/rounding.hpp"

// Exact-arithmetic reference for the basic operations, used to cross-check
// the kernel from the self-test and the acceptance suite. Everything here is
// implemented from scratch on its own integer type: it shares no code with
// the kernel's error-free transformations, the software floats behind the
// adaptive engine, or the bit-stepping successor functions, which is the
// point of keeping it around.

namespace ivalkit::refcheck {

/// Magnitude integer on 32-bit limbs; just enough surface for exact dyadic
/// and small-rational endpoint arithmetic.
class Mag {
public:
    Mag() = default;
    static Mag from_u64(std::uint64_t v);
    bool zero() const { return limbs_.empty(); }
    static int cmp(const Mag& a, const Mag& b);
    static Mag add(const Mag& a, const Mag& b);
    static Mag sub(const Mag& a, const Mag& b);  // a >= b
    static Mag mul(const Mag& a, const Mag& b);
    Mag shl(std::size_t k) const;
    Mag shr(std::size_t k) const;
    bool low_bits_set(std::size_t k) const;
    std::size_t bits() const;
    std::uint64_t to_u64() const;  // requires bits() <= 64
    /// Restoring division, quotient and remainder; word-at-a-time, which is
    /// slow but obviously correct and fast enough for checking.
    static void divmod(const Mag& a, const Mag& b, Mag& q, Mag& r);

private:
    std::vector<std::uint32_t> limbs_;
    void trim();
};

/// sign * mag * 2^exp; every double is exactly one of these.
struct Dyadic {
    int sign = 0;
    Mag mag;
    std::int64_t exp = 0;

    static Dyadic of(double d);  // finite d
    static Dyadic zero() { return {}; }
    Dyadic neg() const;
    static Dyadic add(const Dyadic& a, const Dyadic& b);
    static Dyadic mul(const Dyadic& a, const Dyadic& b);
    static int cmp(const Dyadic& a, const Dyadic& b);
};

/// Directed rounding of an exact dyadic into the format, by grid arithmetic.
double dyadic_to_format(const Dyadic& v, const Format& fmt, Direction dir);

/// Directed rounding of the exact rational num/den (den > 0, num any sign).
double rational_to_format(const Dyadic& num, const Dyadic& den, const Format& fmt,
                          Direction dir);

/// Expected tightest interval result of a basic operation, derived from the
/// mathematical range definition with exact endpoint arithmetic. Supported:
/// neg, add, sub, mul, div, recip, sqr, fma.
std::optional<Interval> expected_basic(Fn f, std::span<const Interval> args);

} // namespace ivalkit::refcheck
