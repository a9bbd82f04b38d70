#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "ivalkit/errors.hpp"
#include "ivalkit/hexfloat.hpp"
#include "ivalkit/oracle.hpp"
#include "ivalkit/rounding.hpp"
#include "support/testrng.hpp"

using namespace ivalkit;

namespace {
const Format b64 = Format::binary64();
const Format b32 = Format::binary32();
constexpr double inf = std::numeric_limits<double>::infinity();

// Second-method reference brackets at a fixed working precision: plain
// series with exact powers and factorials, no argument reduction, no shared
// bracket machinery. Only valid on moderate arguments, which is all the
// cross-check needs.
struct RefBound {
    BigFloat lo, hi;
};

RefBound ref_series(double v, unsigned bits, bool sine) {
    const BigFloat bv = BigFloat::from_double(v);
    BigFloat sum_lo, sum_hi, power = BigFloat::from_int(1), fact = BigFloat::from_int(1);
    if (sine) {
        power = bv;
        fact = BigFloat::from_int(1);
    }
    std::uint32_t n = sine ? 1 : 0;
    BigFloat term_mag;
    for (;;) {
        const BigFloat t_lo = BigFloat::div(power, fact, bits + 30, Direction::Down);
        const BigFloat t_hi = BigFloat::div(power, fact, bits + 30, Direction::Up);
        sum_lo = BigFloat::add(sum_lo, t_lo);
        sum_hi = BigFloat::add(sum_hi, t_hi);
        term_mag = t_lo.abs();
        if (sine) {
            power = BigFloat::mul(BigFloat::mul(power, bv), bv).negated();
            fact = BigFloat::mul(fact, BigFloat::from_int(static_cast<std::int64_t>(n + 1) *
                                                          static_cast<std::int64_t>(n + 2)));
            n += 2;
        } else {
            power = BigFloat::mul(power, bv);
            fact = BigFloat::mul(fact, BigFloat::from_int(static_cast<std::int64_t>(n + 1)));
            n += 1;
        }
        if (n > 2 * std::abs(v) + 8 &&
            (term_mag.is_zero() || term_mag.exponent() < -static_cast<std::int64_t>(bits + 20)))
            break;
        REQUIRE(n < 4000);
    }
    // Tail below twice the last term once the ratio is under 1/2.
    const BigFloat pad = term_mag.mul_pow2(2);
    return {BigFloat::sub(sum_lo, pad), BigFloat::add(sum_hi, pad)};
}

RefBound ref_exp(double v, unsigned bits) { return ref_series(v, bits, false); }
RefBound ref_sin(double v, unsigned bits) { return ref_series(v, bits, true); }

RefBound ref_atanh(double v, unsigned bits) {
    const BigFloat bv = BigFloat::from_double(v);
    const BigFloat v2 = BigFloat::mul(bv, bv);
    BigFloat sum_lo, sum_hi, power = bv;
    BigFloat term_mag;
    for (std::uint32_t n = 1;; n += 2) {
        const BigFloat den = BigFloat::from_int(n);
        const BigFloat t_lo = BigFloat::div(power, den, bits + 30, Direction::Down);
        const BigFloat t_hi = BigFloat::div(power, den, bits + 30, Direction::Up);
        sum_lo = BigFloat::add(sum_lo, t_lo);
        sum_hi = BigFloat::add(sum_hi, t_hi);
        term_mag = t_lo.abs();
        power = BigFloat::mul(power, v2);
        if (term_mag.is_zero() ||
            term_mag.exponent() < -static_cast<std::int64_t>(bits + 20))
            break;
        REQUIRE(n < 8000);
        // Keep exact powers from growing without bound.
        power = power.round_to_bits(bits + 60, v > 0 ? Direction::Down : Direction::Up);
    }
    const BigFloat pad = term_mag.mul_pow2(2);
    return {BigFloat::sub(sum_lo, pad), BigFloat::add(sum_hi, pad)};
}

bool contains_bracket(const HPBound& outer, const RefBound& inner) {
    return BigFloat::cmp(outer.lo, inner.lo) <= 0 &&
           BigFloat::cmp(inner.hi, outer.hi) <= 0;
}

} // namespace

TEST_CASE("point enclosures are exact where the value is representable") {
    const HPBound e0 = point_enclosure(Fn::Exp, 0.0, 64);
    CHECK(BigFloat::cmp(e0.lo, BigFloat::from_int(1)) == 0);
    CHECK(BigFloat::cmp(e0.hi, BigFloat::from_int(1)) == 0);
    const HPBound c8 = point_enclosure(Fn::Cbrt, 8.0, 100);
    CHECK(BigFloat::cmp(c8.lo, BigFloat::from_int(2)) == 0);
    CHECK(BigFloat::cmp(c8.hi, BigFloat::from_int(2)) == 0);
    const HPBound cm8 = point_enclosure(Fn::Cbrt, -8.0, 100);
    CHECK(BigFloat::cmp(cm8.lo, BigFloat::from_int(-2)) == 0);
    CHECK(BigFloat::cmp(cm8.hi, BigFloat::from_int(-2)) == 0);
    const HPBound s4 = point_enclosure(Fn::Sqrt, 4.0, 100);
    CHECK(BigFloat::cmp(s4.lo, BigFloat::from_int(2)) == 0);
    const HPBound a0 = point_enclosure(Fn::Atanh, 0.0, 64);
    CHECK(a0.lo.is_zero());
    CHECK(a0.hi.is_zero());
    const HPBound a1 = point_enclosure(Fn::Atanh, 1.0, 64);
    CHECK(a1.lo.is_inf());
    CHECK(a1.lo.sign() > 0);
    CHECK_THROWS_AS(point_enclosure(Fn::Atanh, 1.5, 64), DomainError);
    CHECK_THROWS_AS(point_enclosure(Fn::Sqrt, -1.0, 64), DomainError);
}

TEST_CASE("sin(1) bracket is tight and encloses the second-method value") {
    const HPBound pe = point_enclosure(Fn::Sin, 1.0, 100);
    const RefBound ref = ref_sin(1.0, 220);
    CHECK(contains_bracket(pe, ref));
    const BigFloat width = BigFloat::sub(pe.hi, pe.lo);
    if (!width.is_zero())
        CHECK(width.exponent() <= pe.lo.exponent() - 97);  // a couple of ulps at q=100
}

TEST_CASE("elementary point brackets agree with the independent series") {
    TestRng rng(41);
    for (int i = 0; i < 120; ++i) {
        const double v = rng.uniform(-30, 30);
        CHECK(contains_bracket(point_enclosure(Fn::Exp, v, 96), ref_exp(v, 220)));
        CHECK(contains_bracket(point_enclosure(Fn::Sin, v, 96), ref_sin(v, 220)));
    }
    for (int i = 0; i < 120; ++i) {
        const double v = rng.uniform(-0.75, 0.75);
        CHECK(contains_bracket(point_enclosure(Fn::Atanh, v, 96), ref_atanh(v, 220)));
    }
}

TEST_CASE("cbrt brackets verify by exact cubing") {
    TestRng rng(42);
    for (int i = 0; i < 4000; ++i) {
        const double v = rng.finite64();
        const HPBound b = point_enclosure(Fn::Cbrt, v, 80);
        const auto cube = [](const BigFloat& x) {
            return BigFloat::mul(BigFloat::mul(x, x), x);
        };
        CHECK(BigFloat::cmp(cube(b.lo), BigFloat::from_double(v)) <= 0);
        CHECK(BigFloat::cmp(BigFloat::from_double(v), cube(b.hi)) <= 0);
        const BigFloat width = BigFloat::sub(b.hi, b.lo);
        if (!width.is_zero() && !b.lo.is_zero())
            CHECK(width.exponent() <= b.lo.exponent() - 78);
    }
}

TEST_CASE("hulls of degenerate and showcase inputs") {
    CHECK(tightest_hull(Fn::Exp, Interval::point(0.0, b64)) ==
          Interval::point(1.0, b64));
    CHECK(tightest_hull(Fn::Sin, Interval::make(0.0, 10.0, b64)) ==
          Interval::make(-1.0, 1.0, b64));
    CHECK(tightest_hull(Fn::Cbrt, Interval::make(-8.0, 27.0, b64)) ==
          Interval::make(-2.0, 3.0, b64));
    CHECK(tightest_hull(Fn::Exp, Interval::empty(b64)).is_empty());
}

TEST_CASE("atanh set-based domain handling") {
    CHECK(tightest_hull(Fn::Atanh, Interval::make(1.0, 2.0, b64)).is_empty());
    CHECK(tightest_hull(Fn::Atanh, Interval::point(1.0, b64)).is_empty());
    CHECK(tightest_hull(Fn::Atanh, Interval::make(-2.0, 2.0, b64)) ==
          Interval::entire(b64));
    const Interval half = tightest_hull(Fn::Atanh, Interval::make(0.5, 1.0, b64));
    CHECK(half.sup() == inf);
    // atanh(0.5) = 0.549306144334054845697622618461...
    CHECK(half.inf() == 0x1.193ea7aad030ap-1);
}

TEST_CASE("exp saturation far outside the format range") {
    CHECK(tightest_hull(Fn::Exp, Interval::make(710.0, 800.0, b64)) ==
          Interval::make(b64.max_finite, inf, b64));
    CHECK(tightest_hull(Fn::Exp, Interval::make(-900.0, -746.0, b64)) ==
          Interval::make(0.0, b64.min_subnormal, b64));
    CHECK(tightest_hull(Fn::Exp, Interval::entire(b64)) ==
          Interval::make(0.0, inf, b64));
    // Binary32 thresholds are format-specific.
    CHECK(tightest_hull(Fn::Exp, Interval::make(89.0, 96.0, b32)) ==
          Interval::make(static_cast<double>(b32.max_finite), inf, b32));
}

TEST_CASE("monotone hulls reduce to directed endpoint images") {
    TestRng rng(43);
    for (int i = 0; i < 150; ++i) {
        double a = rng.uniform(-40, 40), b = rng.uniform(-40, 40);
        if (a > b) std::swap(a, b);
        const Interval h = tightest_hull(Fn::Exp, Interval::make(a, b, b64));
        const HPBound pa = point_enclosure(Fn::Exp, a, 200);
        const HPBound pb = point_enclosure(Fn::Exp, b, 200);
        CHECK(h.inf() == round_to_format(pa.lo, b64, Direction::Down));
        CHECK(h.sup() == round_to_format(pb.hi, b64, Direction::Up));
    }
}

TEST_CASE("extrema scan on the three canonical windows") {
    const SinScan s1 = sin_extrema_scan(Interval::make(0.0, 1.0, b64));
    CHECK(!s1.contains_max);
    CHECK(!s1.contains_min);
    REQUIRE(s1.increasing.has_value());
    CHECK(*s1.increasing);
    CHECK(s1.piece_endpoints == std::vector<double>{0.0, 1.0});

    const SinScan s2 = sin_extrema_scan(Interval::make(0.0, 10.0, b64));
    CHECK(s2.contains_max);
    CHECK(s2.contains_min);

    // The two binary64 neighbors of pi/2 straddle the true maximum.
    const double lo = 0x1.921fb54442d18p+0;
    const SinScan s3 = sin_extrema_scan(Interval::make(lo, next_up(lo, b64), b64));
    CHECK(s3.contains_max);
    CHECK(!s3.contains_min);

    const SinScan s4 = sin_extrema_scan(Interval::make(2.0, 4.0, b64));
    CHECK(!s4.contains_max);
    CHECK(!s4.contains_min);
    REQUIRE(s4.increasing.has_value());
    CHECK(!*s4.increasing);  // decreasing between pi/2 and 3pi/2

    const SinScan s5 = sin_extrema_scan(Interval::make(-1e9, inf, b64));
    CHECK(s5.contains_max);
    CHECK(s5.contains_min);
}

TEST_CASE("sine hulls on monotone pieces and huge arguments") {
    // sin([2, 4]) is decreasing; endpoints are the images.
    const Interval h = tightest_hull(Fn::Sin, Interval::make(2.0, 4.0, b64));
    const HPBound p2 = point_enclosure(Fn::Sin, 2.0, 200);
    const HPBound p4 = point_enclosure(Fn::Sin, 4.0, 200);
    CHECK(h.sup() == round_to_format(p2.hi, b64, Direction::Up));
    CHECK(h.inf() == round_to_format(p4.lo, b64, Direction::Down));
    // One-ulp window at 2^100: reduction against a long pi.
    const Interval tiny = Interval::make(0x1p+100, 0x1.0000000000001p+100, b64);
    const Interval ht = tightest_hull(Fn::Sin, tiny);
    CHECK(ht.sup() >= ht.inf());
    CHECK(ht.sup() <= 1.0);
    CHECK(ht.inf() >= -1.0);
    // Sampled containment.
    TestRng rng(44);
    for (int i = 0; i < 200; ++i) {
        double a = rng.uniform(-50, 50), b = rng.uniform(-50, 50);
        if (a > b) std::swap(a, b);
        const Interval hull = tightest_hull(Fn::Sin, Interval::make(a, b, b64));
        for (int s = 0; s < 6; ++s)
            CHECK(hull.contains(std::sin(rng.uniform(a, b)) * (1 - 1e-15)));
    }
}

TEST_CASE("accurate envelopes reproduce the published showcase values") {
    const Interval sin_env =
        accurate_envelope(Fn::Sin, Interval::make(0.0, 10.0, b64));
    CHECK(sin_env.inf() == -(1.0 + 0x1p-52));
    CHECK(sin_env.sup() == 1.0 + 0x1p-52);
    CHECK(format_interval_decimal(sin_env) ==
          "[-1.0000000000000003e0,1.0000000000000003e0]");

    const Interval exp_env =
        accurate_envelope(Fn::Exp, Interval::make(-1e9, 0.0, b64));
    CHECK(exp_env.inf() == -0x1p-1074);
    CHECK(exp_env.sup() == 0x1.0000000000002p+0);
    CHECK(format_interval_decimal(exp_env) ==
          "[-4.9406564584124655e-324,1.0000000000000005e0]");

    CHECK(accurate_envelope(Fn::Exp, Interval::empty(b64)).is_empty());
}

TEST_CASE("containment chain hull subset envelope") {
    TestRng rng(45);
    for (int i = 0; i < 60; ++i) {
        double a = rng.uniform(-5, 5), b = rng.uniform(-5, 5);
        if (a > b) std::swap(a, b);
        const Interval x = Interval::make(a, b, b64);
        for (Fn f : elementary_fns) {
            const Interval hull = tightest_hull(f, x);
            const Interval env = accurate_envelope(f, x);
            if (hull.is_empty()) {
                CHECK(env.is_empty() == (f == Fn::Atanh && env.is_empty()));
                continue;
            }
            CHECK(env.contains(hull));
        }
    }
}

TEST_CASE("odd functions have odd hulls") {
    TestRng rng(46);
    for (int i = 0; i < 80; ++i) {
        double a = rng.uniform(-20, 20), b = rng.uniform(-20, 20);
        if (a > b) std::swap(a, b);
        const Interval x = Interval::make(a, b, b64);
        for (Fn f : {Fn::Sin, Fn::Cbrt}) {
            CHECK(tightest_hull(f, neg(x)) == neg(tightest_hull(f, x)));
        }
        const double c = rng.uniform(-0.999, 0.999), d = rng.uniform(-0.999, 0.999);
        const Interval y = Interval::make(std::min(c, d), std::max(c, d), b64);
        CHECK(tightest_hull(Fn::Atanh, neg(y)) == neg(tightest_hull(Fn::Atanh, y)));
    }
}

TEST_CASE("hull results are independent of the starting precision") {
    TestRng rng(47);
    for (int i = 0; i < 40; ++i) {
        double a = rng.uniform(-30, 30), b = rng.uniform(-30, 30);
        if (a > b) std::swap(a, b);
        const Interval x = Interval::make(a, b, b64);
        for (Fn f : {Fn::Exp, Fn::Sin, Fn::Cbrt}) {
            OracleConfig c1{.q_start = 54};
            OracleConfig c2{.q_start = 116};
            OracleConfig c3{.q_start = 256};
            const Interval h1 = tightest_hull(f, x, c1);
            CHECK(h1 == tightest_hull(f, x, c2));
            CHECK(h1 == tightest_hull(f, x, c3));
        }
    }
}

TEST_CASE("precision exhaustion fails loudly instead of widening") {
    // atanh(min_subnormal) differs from its argument only near the 3200-bit
    // scale; a capped loop must refuse rather than widen.
    OracleConfig starved{.q_start = 54, .q_max = 54};
    const Interval hard = Interval::point(b64.min_subnormal, b64);
    CHECK_THROWS_AS(tightest_hull(Fn::Atanh, hard, starved), PrecisionExhaustedError);
    // The default cap resolves it: the hull is one ulp wide around the input.
    const Interval h = tightest_hull(Fn::Atanh, hard);
    CHECK(h.inf() == b64.min_subnormal);
    CHECK(h.sup() == next_up(b64.min_subnormal, b64));
    // Argument-reduction stress stays within the default cap too.
    CHECK_NOTHROW(tightest_hull(Fn::Sin, Interval::point(0x1.8p+1023, b64)));
}

TEST_CASE("config validation") {
    OracleConfig bad1{.q_start = 53};  // not above the precision
    CHECK_THROWS_AS(bad1.validate(b64), std::invalid_argument);
    OracleConfig bad2{.q_growth = 1};
    CHECK_THROWS_AS(bad2.validate(b64), std::invalid_argument);
    OracleConfig bad3{.q_start = 256, .q_max = 128};
    CHECK_THROWS_AS(bad3.validate(b64), std::invalid_argument);
    OracleConfig fine{.q_start = 54, .q_max = 54};
    CHECK_NOTHROW(fine.validate(b64));
}

TEST_CASE("oracle statistics accumulate") {
    OracleStats stats;
    OracleConfig cfg;
    cfg.stats = &stats;
    (void)tightest_hull(Fn::Sin, Interval::make(0.0, 10.0, b64), cfg);
    CHECK(stats.point_evals.load() > 0);
    CHECK(stats.max_q.load() >= 116);
}

TEST_CASE("oracle basic-operation hulls agree with the kernel route") {
    TestRng rng(48);
    for (int i = 0; i < 2500; ++i) {
        double a = rng.finite64(), b = rng.finite64();
        if (a > b) std::swap(a, b);
        double c = rng.finite64(), d = rng.finite64();
        if (c > d) std::swap(c, d);
        const Interval x = Interval::make(a, b, b64), y = Interval::make(c, d, b64);
        for (Fn f : {Fn::Add, Fn::Sub, Fn::Mul, Fn::Div}) {
            const std::vector<Interval> args{x, y};
            CHECK(tightest_hull(f, args) == apply_op(f, args));
        }
        for (Fn f : {Fn::Neg, Fn::Recip, Fn::Sqr, Fn::Sqrt}) {
            const std::vector<Interval> args{x};
            CHECK(tightest_hull(f, args) == apply_op(f, args));
        }
        const std::vector<Interval> t{x, y, Interval::make(std::min(a, c), std::max(b, d), b64)};
        CHECK(tightest_hull(Fn::Fma, t) == apply_op(Fn::Fma, t));
    }
}

TEST_CASE("binary32 elementary hulls") {
    CHECK(tightest_hull(Fn::Exp, Interval::point(0.0, b32)) ==
          Interval::point(1.0, b32));
    CHECK(tightest_hull(Fn::Sin, Interval::make(0.0, 10.0, b32)) ==
          Interval::make(-1.0, 1.0, b32));
    CHECK(tightest_hull(Fn::Cbrt, Interval::point(8.0, b32)) ==
          Interval::point(2.0, b32));
    // Endpoint image at binary32 granularity: exp(1) = 2.718281828...
    const Interval e1 = tightest_hull(Fn::Exp, Interval::point(1.0, b32));
    CHECK(e1.inf() == static_cast<double>(0x1.5bf0a8p+1f));
    CHECK(e1.sup() == static_cast<double>(0x1.5bf0aap+1f));
}
