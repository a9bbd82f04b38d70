#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "ivalkit/errors.hpp"
#include "ivalkit/hexfloat.hpp"
#include "ivalkit/pairgen.hpp"
#include "ivalkit/rounding.hpp"

using namespace ivalkit;

namespace {
const Format b64 = Format::binary64();
const Format b32 = Format::binary32();
} // namespace

TEST_CASE("suites are deterministic in the seed") {
    SuiteSpec spec;
    spec.f = Fn::Cbrt;
    spec.n_random = 30;
    spec.seed = 42;
    const auto a = gen_function_suite(spec);
    const auto b = gen_function_suite(spec);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
    spec.seed = 43;
    const auto c = gen_function_suite(spec);
    bool differs = c.size() != a.size();
    for (std::size_t i = 0; !differs && i < a.size(); ++i)
        differs = !(a[i] == c[i]);
    CHECK(differs);
}

TEST_CASE("every generated pair satisfies its own invariants") {
    for (Fn f : elementary_fns) {
        SuiteSpec spec;
        spec.f = f;
        spec.n_random = 12;
        spec.seed = 5;
        for (const TestingPair& p : gen_function_suite(spec)) {
            REQUIRE(p.y_prime.has_value());
            CHECK(p.y_prime->contains(p.y));
            CHECK(tightest_hull(p.f, p.args) == p.y);
            CHECK(accurate_envelope(p.f, p.args) == *p.y_prime);
        }
    }
}

TEST_CASE("exp suite carries the deep-underflow showcase pair") {
    SuiteSpec spec;
    spec.f = Fn::Exp;
    spec.n_random = 0;
    bool found = false;
    for (const TestingPair& p : gen_function_suite(spec)) {
        if (!p.args[0].is_empty() && p.args[0] == Interval::make(-1e9, 0.0, b64)) {
            found = true;
            CHECK(format_interval_decimal(*p.y_prime) ==
                  "[-4.9406564584124655e-324,1.0000000000000005e0]");
        }
    }
    CHECK(found);
}

TEST_CASE("sin suite straddles extrema tightly") {
    SuiteSpec spec;
    spec.f = Fn::Sin;
    spec.n_random = 0;
    const auto pairs = gen_function_suite(spec);
    // At least one extremum-tagged pair within 10 ulps of the critical point
    // on both sides, with the maximum attained.
    std::size_t snug = 0;
    for (const TestingPair& p : pairs) {
        if (p.tag != "extremum") continue;
        const Interval& x = p.args[0];
        CHECK(p.y.sup() >= p.y.inf());
        if (x.sup() - x.inf() < 1e-14) {
            if (p.y.sup() == 1.0 || p.y.inf() == -1.0) ++snug;
        }
    }
    CHECK(snug >= 6);
}

TEST_CASE("suite sizes reach the contract floor with default randoms") {
    for (Fn f : elementary_fns) {
        SuiteSpec spec;
        spec.f = f;
        const auto pairs = gen_function_suite(spec);
        CHECK(pairs.size() >= 100);
    }
}

TEST_CASE("binary32 suites generate and validate") {
    SuiteSpec spec;
    spec.f = Fn::Atanh;
    spec.fmt = b32;
    spec.n_random = 10;
    for (const TestingPair& p : gen_function_suite(spec)) {
        CHECK(p.fmt == b32);
        if (!p.y.is_empty()) {
            CHECK(representable_in(p.y.inf(), b32));
            CHECK(representable_in(p.y.sup(), b32));
        }
        CHECK(tightest_hull(p.f, p.args) == p.y);
    }
}

TEST_CASE("basic-operation suites cover all thirteen functions") {
    for (Fn f : all_fns) {
        SuiteSpec spec;
        spec.f = f;
        spec.n_random = 6;
        spec.seed = 11;
        const auto pairs = gen_function_suite(spec);
        CHECK(!pairs.empty());
        for (const TestingPair& p : pairs) {
            CHECK(p.args.size() == static_cast<std::size_t>(fn_info(f).arity));
            CHECK(tightest_hull(p.f, p.args) == p.y);
        }
    }
}

TEST_CASE("next_out suite covers the four categories and checks out") {
    const auto cases = gen_nextout_suite(b64, 40, 9);
    std::set<std::string> tags;
    std::size_t invalid = 0, mirrors = 0;
    for (const NextOutCase& c : cases) {
        tags.insert(c.tag.substr(0, c.tag.find('-')));
        if (c.expect_invalid) {
            ++invalid;
            CHECK_THROWS_AS(Interval::make(c.raw_inf, c.raw_sup, c.fmt),
                            InvalidIntervalError);
            continue;
        }
        REQUIRE(c.x.has_value());
        REQUIRE(c.expected.has_value());
        // The arithmetic expectation must match the bit-stepping module.
        CHECK(next_out(*c.x) == *c.expected);
        if (c.mirror_of) {
            ++mirrors;
            const NextOutCase& base = cases[*c.mirror_of];
            REQUIRE(base.x.has_value());
            CHECK(*c.x == neg(*base.x));
            CHECK(*c.expected == neg(*base.expected));
        }
    }
    CHECK(invalid >= 4);
    CHECK(mirrors >= 16);
    CHECK(tags.count("empty"));
    CHECK(tags.count("entire"));
    CHECK(tags.count("random"));
    CHECK(tags.count("special"));

    // The empty and entire fixed points are present and correct.
    bool saw_empty = false, saw_entire = false;
    for (const NextOutCase& c : cases) {
        if (c.expect_invalid) continue;
        if (c.x->is_empty()) {
            saw_empty = true;
            CHECK(c.expected->is_empty());
        }
        if (c.x->is_entire()) {
            saw_entire = true;
            CHECK(c.expected->is_entire());
        }
    }
    CHECK(saw_empty);
    CHECK(saw_entire);
}

TEST_CASE("next_out suite at binary32") {
    for (const NextOutCase& c : gen_nextout_suite(b32, 20, 3)) {
        if (c.expect_invalid) continue;
        CHECK(next_out(*c.x) == *c.expected);
    }
}
