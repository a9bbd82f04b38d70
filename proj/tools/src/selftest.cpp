#include "selftest.hpp"

#include <algorithm>
#include <bit>
#include <ostream>
#include <vector>

#include "ivalkit/errors.hpp"
#include "ivalkit/hexfloat.hpp"
#include "ivalkit/interval.hpp"
#include "ivalkit/pairgen.hpp"
#include "ivalkit/refcheck/exactref.hpp"
#include "ivalkit/rounding.hpp"

namespace ivalkit::cli {

namespace {

struct Tally {
    std::ostream& out;
    int failures = 0;

    void item(const std::string& name, std::size_t checked, std::size_t bad,
              const std::string& first_detail) {
        out << (bad == 0 ? "PASS" : "FAIL") << "  " << name << "  (" << checked
            << " checks";
        if (bad) out << ", " << bad << " failing, first: " << first_detail;
        out << ")\n";
        if (bad) ++failures;
    }
};

std::uint64_t mix(std::uint64_t s) {
    s ^= s >> 33;
    s *= 0xFF51AFD7ED558CCDull;
    s ^= s >> 33;
    return s;
}

double draw_finite(std::uint64_t& state, const Format& fmt) {
    for (;;) {
        state = mix(state + 0x9E3779B97F4A7C15ull);
        if (fmt.kind == FormatKind::Binary64) {
            if (((state >> 52) & 0x7FF) != 0x7FF)
                return std::bit_cast<double>(state);
        } else {
            const auto b = static_cast<std::uint32_t>(state);
            if (((b >> 23) & 0xFF) != 0xFF)
                return static_cast<double>(std::bit_cast<float>(b));
        }
    }
}

Interval draw_interval(std::uint64_t& state, const Format& fmt) {
    double a = draw_finite(state, fmt), b = draw_finite(state, fmt);
    if (a > b) std::swap(a, b);
    return Interval::make(a, b, fmt);
}

void check_nextout(Tally& t, const Format& fmt, std::size_t n_random) {
    std::size_t checked = 0, bad = 0;
    std::string first;
    for (const NextOutCase& c : gen_nextout_suite(fmt, n_random, 2024)) {
        ++checked;
        if (c.expect_invalid) {
            try {
                (void)Interval::make(c.raw_inf, c.raw_sup, fmt);
                if (!bad++) first = "constructor accepted an invalid interval";
            } catch (const InvalidIntervalError&) {
            }
            continue;
        }
        bool ok = next_out(*c.x) == *c.expected;
        if (ok && c.mirror_of)
            ok = next_out(*c.x) == neg(next_out(neg(*c.x)));
        if (!ok && !bad++)
            first = "x = " + format_interval_hex(*c.x);
    }
    t.item(std::string("next_out suite, ") + fmt.name(), checked, bad, first);
}

void check_basic_vs_rational(Tally& t, const Format& fmt, std::size_t n,
                             const OracleConfig& cfg) {
    const Fn ops[] = {Fn::Add, Fn::Sub, Fn::Mul, Fn::Div,
                      Fn::Recip, Fn::Sqr, Fn::Fma};
    std::size_t checked = 0, bad = 0;
    std::string first;
    std::uint64_t state = 77;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Interval> pool{draw_interval(state, fmt),
                                   draw_interval(state, fmt),
                                   draw_interval(state, fmt)};
        for (Fn f : ops) {
            const auto arity = static_cast<std::size_t>(fn_info(f).arity);
            const std::vector<Interval> args(pool.begin(),
                                             pool.begin() + static_cast<long>(arity));
            const auto expected = refcheck::expected_basic(f, args);
            ++checked;
            const bool kernel_ok = apply_op(f, args) == *expected;
            const bool oracle_ok = tightest_hull(f, args, cfg) == *expected;
            if ((!kernel_ok || !oracle_ok) && !bad++) {
                first = std::string(fn_name(f)) + " " + format_interval_hex(args[0]) +
                        (kernel_ok ? " (engine route)" : " (kernel route)");
            }
        }
    }
    t.item(std::string("basic arithmetic vs exact rationals, ") + fmt.name(), checked,
           bad, first);
}

void check_envelopes(Tally& t, const OracleConfig& cfg) {
    const Format b64 = Format::binary64();
    std::size_t bad = 0;
    std::string first;
    const Interval sin_env =
        accurate_envelope(Fn::Sin, Interval::make(0.0, 10.0, b64), cfg);
    if (format_interval_decimal(sin_env) !=
        "[-1.0000000000000003e0,1.0000000000000003e0]") {
        ++bad;
        first = "sin envelope printed as " + format_interval_decimal(sin_env);
    }
    const Interval exp_env =
        accurate_envelope(Fn::Exp, Interval::make(-1e9, 0.0, b64), cfg);
    if (format_interval_decimal(exp_env) !=
        "[-4.9406564584124655e-324,1.0000000000000005e0]") {
        if (!bad++) first = "exp envelope printed as " + format_interval_decimal(exp_env);
    }
    t.item("accurate-envelope reproductions (sin [0,10], exp [-1e9,0])", 2, bad, first);
}

} // namespace

int run_selftest(std::ostream& out, const OracleConfig& cfg, std::size_t n_random) {
    Tally t{out};
    check_nextout(t, Format::binary64(), n_random);
    check_nextout(t, Format::binary32(), n_random);
    check_basic_vs_rational(t, Format::binary64(), n_random, cfg);
    check_basic_vs_rational(t, Format::binary32(), n_random / 4 + 1, cfg);
    check_envelopes(t, cfg);
    out << (t.failures == 0 ? "self-test: all items passed\n"
                            : "self-test: FAILURES present\n");
    return t.failures == 0 ? 0 : 1;
}

} // namespace ivalkit::cli
