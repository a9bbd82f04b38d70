#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ivalkit/detail/bignat.hpp"
#include "support/testrng.hpp"

using ivalkit::detail::BigNat;

namespace {

BigNat from_u128(unsigned __int128 v) {
    BigNat hi = BigNat::from_u64(static_cast<std::uint64_t>(v >> 64));
    BigNat lo = BigNat::from_u64(static_cast<std::uint64_t>(v));
    return BigNat::add(hi.shifted_left(64), lo);
}

unsigned __int128 to_u128(const BigNat& n) {
    REQUIRE(n.bit_length() <= 128);
    unsigned __int128 v = 0;
    const auto& limbs = n.limbs();
    for (std::size_t i = limbs.size(); i-- > 0;) v = (v << 32) | limbs[i];
    return v;
}

} // namespace

TEST_CASE("add/sub/mul agree with 128-bit integers") {
    TestRng rng(101);
    for (int i = 0; i < 2000; ++i) {
        const std::uint64_t a = rng.next(), b = rng.next();
        const auto na = BigNat::from_u64(a), nb = BigNat::from_u64(b);
        CHECK(to_u128(BigNat::add(na, nb)) ==
              static_cast<unsigned __int128>(a) + b);
        CHECK(to_u128(BigNat::mul(na, nb)) ==
              static_cast<unsigned __int128>(a) * b);
        const std::uint64_t big = a > b ? a : b, small = a > b ? b : a;
        CHECK(to_u128(BigNat::sub(BigNat::from_u64(big), BigNat::from_u64(small))) ==
              static_cast<unsigned __int128>(big - small));
    }
}

TEST_CASE("shifts round-trip and compare") {
    TestRng rng(102);
    for (int i = 0; i < 500; ++i) {
        const std::uint64_t a = rng.next() | 1;
        const auto k = static_cast<std::size_t>(rng.below(200));
        const BigNat n = BigNat::from_u64(a);
        const BigNat up = n.shifted_left(k);
        CHECK(up.bit_length() == n.bit_length() + k);
        CHECK(BigNat::cmp(up.shifted_right(k), n) == 0);
        CHECK(up.any_below(k) == false);
        CHECK((k == 0 || up.bit(k) == n.bit(0)));
    }
}

TEST_CASE("divmod reconstructs the dividend") {
    TestRng rng(103);
    for (int i = 0; i < 1500; ++i) {
        // Mixed sizes, including multi-limb divisors that exercise the
        // add-back branch.
        BigNat a = BigNat::from_u64(rng.next());
        for (int j = 0; j < static_cast<int>(rng.below(4)); ++j)
            a = BigNat::add(BigNat::mul(a, BigNat::from_u64(rng.next() | 1)),
                            BigNat::from_u64(rng.next()));
        BigNat b = BigNat::from_u64(rng.next() | 1);
        if (rng.below(2)) b = BigNat::mul(b, BigNat::from_u64(rng.next() | 1));
        BigNat q, r;
        BigNat::divmod(a, b, q, r);
        CHECK(BigNat::cmp(r, b) < 0);
        CHECK(BigNat::cmp(BigNat::add(BigNat::mul(q, b), r), a) == 0);
    }
}

TEST_CASE("divmod against 128-bit division") {
    TestRng rng(104);
    for (int i = 0; i < 2000; ++i) {
        unsigned __int128 a =
            (static_cast<unsigned __int128>(rng.next()) << 64) | rng.next();
        std::uint64_t b64 = rng.next();
        if (b64 == 0) b64 = 7;
        BigNat q, r;
        BigNat::divmod(from_u128(a), BigNat::from_u64(b64), q, r);
        CHECK(to_u128(q) == a / b64);
        CHECK(to_u128(r) == a % b64);
    }
}

TEST_CASE("isqrt and icbrt are floor roots") {
    TestRng rng(105);
    for (int i = 0; i < 300; ++i) {
        BigNat n = BigNat::from_u64(rng.next());
        n = BigNat::mul(n, BigNat::from_u64(rng.next() | 1));
        n = n.shifted_left(static_cast<std::size_t>(rng.below(64)));
        bool exact = false;
        const BigNat r = BigNat::isqrt(n, exact);
        const BigNat r2 = BigNat::mul(r, r);
        CHECK(BigNat::cmp(r2, n) <= 0);
        BigNat r1 = r;
        r1.inc();
        CHECK(BigNat::cmp(BigNat::mul(r1, r1), n) > 0);
        CHECK(exact == (BigNat::cmp(r2, n) == 0));

        const BigNat c = BigNat::icbrt(n, exact);
        const BigNat c3 = BigNat::mul(BigNat::mul(c, c), c);
        CHECK(BigNat::cmp(c3, n) <= 0);
        BigNat c1 = c;
        c1.inc();
        CHECK(BigNat::cmp(BigNat::mul(BigNat::mul(c1, c1), c1), n) > 0);
        CHECK(exact == (BigNat::cmp(c3, n) == 0));
    }
    bool exact = false;
    CHECK(BigNat::isqrt(BigNat::from_u64(0), exact).is_zero());
    CHECK(exact);
    // Perfect powers land exactly.
    CHECK(BigNat::cmp(BigNat::isqrt(BigNat::from_u64(1 << 20), exact),
                      BigNat::from_u64(1 << 10)) == 0);
    CHECK(exact);
    CHECK(BigNat::cmp(BigNat::icbrt(BigNat::from_u64(27000), exact),
                      BigNat::from_u64(30)) == 0);
    CHECK(exact);
}

TEST_CASE("decimal rendering") {
    CHECK(BigNat::from_u64(0).to_decimal() == "0");
    CHECK(BigNat::from_u64(1234567890123456789ull).to_decimal() ==
          "1234567890123456789");
    // 2^96
    const BigNat big = BigNat::from_u64(1).shifted_left(96);
    CHECK(big.to_decimal() == "79228162514264337593543950336");
}
