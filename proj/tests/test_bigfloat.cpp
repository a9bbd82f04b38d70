#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ivalkit/bigfloat.hpp"
#include "support/testrng.hpp"

using ivalkit::BigFloat;
using ivalkit::Direction;
using ivalkit::Format;

namespace {
const Format b64 = Format::binary64();
const Format b32 = Format::binary32();
} // namespace

TEST_CASE("from_double round-trips exactly through to_format") {
    TestRng rng(1);
    for (int i = 0; i < 5000; ++i) {
        const double d = rng.finite64();
        const BigFloat b = BigFloat::from_double(d);
        CHECK(b.to_format(b64, Direction::Down) == d);
        CHECK(b.to_format(b64, Direction::Up) == d);
        CHECK(BigFloat::cmp(b, BigFloat::from_double(d)) == 0);
    }
    for (int i = 0; i < 2000; ++i) {
        const double d = static_cast<double>(rng.finite32());
        const BigFloat b = BigFloat::from_double(d);
        CHECK(b.to_format(b32, Direction::Down) == d);
        CHECK(b.to_format(b32, Direction::Up) == d);
    }
}

TEST_CASE("exact add/mul match double arithmetic where double is exact") {
    TestRng rng(2);
    for (int i = 0; i < 3000; ++i) {
        // Products of 26-bit values are exact in double.
        const auto a = static_cast<double>(rng.next() >> 38) - (1ull << 25);
        const auto b = static_cast<double>(rng.next() >> 38) - (1ull << 25);
        const BigFloat bf =
            BigFloat::mul(BigFloat::from_double(a), BigFloat::from_double(b));
        CHECK(bf.to_format(b64, Direction::Down) == a * b);
        const BigFloat sf =
            BigFloat::add(BigFloat::from_double(a), BigFloat::from_double(b));
        CHECK(sf.to_format(b64, Direction::Down) == a + b);
        const BigFloat df =
            BigFloat::sub(BigFloat::from_double(a), BigFloat::from_double(b));
        CHECK(df.to_format(b64, Direction::Down) == a - b);
    }
}

TEST_CASE("cmp is a total order consistent with doubles") {
    TestRng rng(3);
    for (int i = 0; i < 4000; ++i) {
        const double x = rng.finite64(), y = rng.finite64();
        const int c = BigFloat::cmp(BigFloat::from_double(x), BigFloat::from_double(y));
        if (x < y) CHECK(c < 0);
        if (x > y) CHECK(c > 0);
        if (x == y) CHECK(c == 0);
    }
}

TEST_CASE("directed to_format brackets unrepresentable values") {
    // 1 + 2^-80 sits strictly between 1 and nextUp(1).
    const BigFloat v = BigFloat::add(BigFloat::from_int(1),
                                     BigFloat::from_int(1).mul_pow2(-80));
    CHECK(v.to_format(b64, Direction::Down) == 1.0);
    CHECK(v.to_format(b64, Direction::Up) == std::nextafter(1.0, 2.0));
    // Overflow saturates outward only.
    const BigFloat huge = BigFloat::from_int(1).mul_pow2(1025);
    CHECK(v.to_format(b64, Direction::Down) == 1.0);
    CHECK(huge.to_format(b64, Direction::Up) == HUGE_VAL);
    CHECK(huge.to_format(b64, Direction::Down) == b64.max_finite);
    CHECK(huge.negated().to_format(b64, Direction::Down) == -HUGE_VAL);
    CHECK(huge.negated().to_format(b64, Direction::Up) == -b64.max_finite);
    // Deep underflow rounds to zero or the minimum subnormal.
    const BigFloat tiny = BigFloat::from_int(1).mul_pow2(-1100);
    CHECK(tiny.to_format(b64, Direction::Down) == 0.0);
    CHECK(tiny.to_format(b64, Direction::Up) == b64.min_subnormal);
    CHECK(tiny.negated().to_format(b64, Direction::Down) == -b64.min_subnormal);
    CHECK(tiny.negated().to_format(b64, Direction::Up) == 0.0);
}

TEST_CASE("to_format respects the subnormal grid") {
    TestRng rng(4);
    for (int i = 0; i < 2000; ++i) {
        // Random values a hair above a subnormal: down gives the subnormal,
        // up gives its successor.
        const std::uint64_t k = rng.below(1000000) + 1;
        const double sub = static_cast<double>(k) * 0x1p-1074;
        BigFloat v = BigFloat::from_double(sub);
        v = BigFloat::add(v, BigFloat::from_int(1).mul_pow2(-1200));
        CHECK(v.to_format(b64, Direction::Down) == sub);
        CHECK(v.to_format(b64, Direction::Up) == std::nextafter(sub, 1.0));
    }
}

TEST_CASE("round_to_bits is directed and idempotent") {
    TestRng rng(5);
    for (int i = 0; i < 2000; ++i) {
        const double a = rng.finite64(), b = rng.finite64();
        const BigFloat p =
            BigFloat::mul(BigFloat::from_double(a), BigFloat::from_double(b));
        if (p.is_zero()) continue;
        const unsigned q = 24 + static_cast<unsigned>(rng.below(80));
        const BigFloat down = p.round_to_bits(q, Direction::Down);
        const BigFloat up = p.round_to_bits(q, Direction::Up);
        CHECK(BigFloat::cmp(down, p) <= 0);
        CHECK(BigFloat::cmp(p, up) <= 0);
        CHECK(down.precision_bits() <= q);
        CHECK(up.precision_bits() <= q + 1);
        CHECK(BigFloat::cmp(down.round_to_bits(q, Direction::Down), down) == 0);
    }
}

TEST_CASE("division produces a directed quotient with sticky awareness") {
    TestRng rng(6);
    for (int i = 0; i < 1500; ++i) {
        double a = rng.finite64(), b = rng.finite64();
        if (b == 0) b = 3.0;
        const BigFloat ba = BigFloat::from_double(a), bb = BigFloat::from_double(b);
        const BigFloat qd = BigFloat::div(ba, bb, 80, Direction::Down);
        const BigFloat qu = BigFloat::div(ba, bb, 80, Direction::Up);
        // qd <= a/b <= qu, checked by cross multiplication (sign-aware).
        const BigFloat lo_prod = BigFloat::mul(qd, bb);
        const BigFloat hi_prod = BigFloat::mul(qu, bb);
        if (b > 0) {
            CHECK(BigFloat::cmp(lo_prod, ba) <= 0);
            CHECK(BigFloat::cmp(ba, hi_prod) <= 0);
        } else {
            CHECK(BigFloat::cmp(lo_prod, ba) >= 0);
            CHECK(BigFloat::cmp(ba, hi_prod) >= 0);
        }
        // The bracket is at most 2 ulps at 80 bits wide.
        const BigFloat width = BigFloat::sub(qu, qd);
        if (!width.is_zero() && !qd.is_zero())
            CHECK(width.exponent() <= qu.exponent() - 78);
    }
}

TEST_CASE("floor, nearest int and mod4") {
    const auto bf = [](double d) { return BigFloat::from_double(d); };
    CHECK(BigFloat::cmp(BigFloat::floor(bf(2.75)), bf(2.0)) == 0);
    CHECK(BigFloat::cmp(BigFloat::floor(bf(-2.25)), bf(-3.0)) == 0);
    CHECK(BigFloat::cmp(BigFloat::floor(bf(5.0)), bf(5.0)) == 0);
    CHECK(BigFloat::cmp(BigFloat::round_nearest_int(bf(2.4)), bf(2.0)) == 0);
    CHECK(BigFloat::cmp(BigFloat::round_nearest_int(bf(2.6)), bf(3.0)) == 0);
    CHECK(BigFloat::cmp(BigFloat::round_nearest_int(bf(-2.6)), bf(-3.0)) == 0);
    CHECK(BigFloat::mod4(bf(0.0)) == 0);
    CHECK(BigFloat::mod4(bf(5.0)) == 1);
    CHECK(BigFloat::mod4(bf(6.0)) == 2);
    CHECK(BigFloat::mod4(bf(7.0)) == 3);
    CHECK(BigFloat::mod4(bf(8.0)) == 0);
    CHECK(BigFloat::mod4(bf(-1.0)) == 3);
    CHECK(BigFloat::mod4(bf(-6.0)) == 2);
    CHECK(BigFloat::mod4(bf(-8.0)) == 0);
}

TEST_CASE("binary32 grid rounding") {
    TestRng rng(7);
    for (int i = 0; i < 2000; ++i) {
        const float f = rng.finite32();
        BigFloat v = BigFloat::from_double(static_cast<double>(f));
        v = BigFloat::add(v, BigFloat::from_int(1).mul_pow2(-200));
        const auto down = static_cast<float>(v.to_format(b32, Direction::Down));
        const auto up = static_cast<float>(v.to_format(b32, Direction::Up));
        CHECK(down == f);
        CHECK(up == std::nextafterf(f, HUGE_VALF));
    }
}
