// Acceptance suite: one pass/fail line per shipped guarantee, each with its
// runtime budget enforced. Run via ctest (-R acceptance) or directly; the
// exit status is nonzero if any line fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>
#include <vector>

#include "adapter_client.hpp"
#include "ivalkit/conformance.hpp"
#include "ivalkit/hexfloat.hpp"
#include "ivalkit/oracle.hpp"
#include "ivalkit/pairgen.hpp"
#include "ivalkit/refcheck/exactref.hpp"
#include "ivalkit/rounding.hpp"
#include "support/testrng.hpp"

using namespace ivalkit;
using ivalkit::cli::AdapterHandle;

namespace {

const Format b64 = Format::binary64();
const Format b32 = Format::binary32();
constexpr double inf = __builtin_huge_val();

struct Outcome {
    int id = 0;
    std::string title;
    bool pass = false;
    double seconds = 0;
    double budget = 0;  // 0 = no stated budget
    std::string detail;
};

class Acceptance {
public:
    template <typename Body>
    void criterion(int id, std::string title, double budget_s, Body&& body) {
        Outcome o;
        o.id = id;
        o.title = std::move(title);
        o.budget = budget_s;
        std::cerr << "criterion " << id << ": running...\n";
        const auto t0 = std::chrono::steady_clock::now();
        try {
            o.detail = body();
            o.pass = o.detail.empty();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                        .count();
        if (o.pass && o.budget > 0 && o.seconds >= o.budget) {
            o.pass = false;
            o.detail = "over the runtime budget";
        }
        results_[id] = std::move(o);
    }

    int report() const {
        bool all = true;
        for (const auto& [id, o] : results_) {
            std::printf("criterion %2d: %s  (%6.2f s%s)  %s%s%s\n", id,
                        o.pass ? "PASS" : "FAIL", o.seconds,
                        o.budget > 0 ? (" / " + format_budget(o.budget)).c_str() : "",
                        o.title.c_str(), o.detail.empty() ? "" : " -- ",
                        o.detail.c_str());
            all = all && o.pass;
        }
        std::printf("acceptance: %s\n", all ? "all criteria passed" : "FAILURES present");
        return all ? 0 : 1;
    }

private:
    static std::string format_budget(double b) {
        std::ostringstream os;
        os << b << " s budget";
        return os.str();
    }
    std::map<int, Outcome> results_;
};

std::string check_envelope(Fn f, const Interval& x, double want_lo, double want_hi,
                           const std::string& want_str) {
    const Interval env = accurate_envelope(f, x);
    if (env.inf() != want_lo || env.sup() != want_hi)
        return "endpoints " + format_interval_hex(env);
    const std::string s = format_interval_decimal(env);
    if (s != want_str) return "rendered '" + s + "'";
    return {};
}

Interval rand_interval(TestRng& rng, const Format& fmt, const RealSet& dom) {
    const auto draw = [&]() {
        for (;;) {
            const double v = fmt.kind == FormatKind::Binary64
                                 ? rng.finite64()
                                 : static_cast<double>(rng.finite32());
            if (v < dom.lo || v > dom.hi) continue;
            if (dom.lo_open && v == dom.lo) continue;
            if (dom.hi_open && v == dom.hi) continue;
            return v;
        }
    };
    double a = draw(), b = draw();
    if (a > b) std::swap(a, b);
    return Interval::make(a, b, fmt);
}

// Suites for all functions and formats, generated once and shared by the
// pair-driven criteria; generation is timed under criterion 6.
struct SuiteSet {
    std::map<std::pair<Fn, FormatKind>, std::vector<TestingPair>> suites;

    const std::vector<TestingPair>& of(Fn f, const Format& fmt) const {
        return suites.at({f, fmt.kind});
    }
};

} // namespace

int main() {
    Acceptance acc;
    SuiteSet set;

    // --- 1. The accurate-mode sine envelope, bit-exact and as printed.
    acc.criterion(1, "sin accurate envelope over [0, 10]", 1.0, [] {
        return check_envelope(Fn::Sin, Interval::make(0.0, 10.0, b64),
                              -(1.0 + 0x1p-52), 1.0 + 0x1p-52,
                              "[-1.0000000000000003e0,1.0000000000000003e0]");
    });

    // --- 2. The accurate-mode exp envelope with its subnormal lower bound.
    acc.criterion(2, "exp accurate envelope over [-1e9, 0]", 1.0, [] {
        return check_envelope(Fn::Exp, Interval::make(-1e9, 0.0, b64), -0x1p-1074,
                              0x1.0000000000002p+0,
                              "[-4.9406564584124655e-324,1.0000000000000005e0]");
    });

    // --- 3. Basic arithmetic against exact rationals, bit-exact.
    acc.criterion(3, "10^4 random pairs: basic arithmetic = exact rationals", 30.0, [] {
        TestRng rng(20240101);
        const Fn ops[] = {Fn::Add, Fn::Sub, Fn::Mul, Fn::Div,
                          Fn::Recip, Fn::Sqr, Fn::Fma};
        std::size_t failures = 0;
        std::string first;
        for (int i = 0; i < 10000; ++i) {
            std::vector<Interval> pool;
            for (int k = 0; k < 3; ++k) {
                double a = rng.finite64(), b = rng.finite64();
                if (a > b) std::swap(a, b);
                pool.push_back(Interval::make(a, b, b64));
            }
            for (Fn f : ops) {
                const auto arity = static_cast<std::size_t>(fn_info(f).arity);
                const std::vector<Interval> args(pool.begin(),
                                                 pool.begin() + static_cast<long>(arity));
                const auto expect = refcheck::expected_basic(f, args);
                if (!(apply_op(f, args) == *expect)) {
                    if (!failures++)
                        first = std::string(fn_name(f)) + " on " +
                                format_interval_hex(args[0]);
                }
            }
        }
        if (failures)
            return std::to_string(failures) + " mismatches, first: " + first;
        return std::string{};
    });

    // --- 4. next_out properties on 10^5 random endpoints plus the specials.
    acc.criterion(4, "next_out symmetry/widening/involution, 10^5 endpoints", 10.0, [] {
        TestRng rng(424242);
        std::size_t bad = 0;
        const auto check_endpoint = [&](double e) {
            if (next_down(next_up(e, b64), b64) != e) ++bad;
        };
        const auto check_interval = [&](const Interval& x) {
            const Interval w = next_out(x);
            if (!(next_out(neg(x)) == neg(w))) ++bad;
            if (x.is_empty()) {
                if (!w.is_empty()) ++bad;
                return;
            }
            if (!w.contains(x)) ++bad;
            if (std::isfinite(x.inf()) && !(w.inf() < x.inf())) ++bad;
            if (std::isfinite(x.sup()) && !(w.sup() > x.sup())) ++bad;
        };
        for (int i = 0; i < 100000; ++i) {
            const double e = rng.finite64();
            check_endpoint(e);
            double a = e, b = rng.finite64();
            if (a > b) std::swap(a, b);
            check_interval(Interval::make(a, b, b64));
        }
        std::vector<double> specials{0.0, -0.0, b64.min_subnormal, -b64.min_subnormal,
                                     b64.max_finite, -b64.max_finite};
        for (int k : {-1074, -1022, -100, -1, 0, 1, 100, 1023})
            specials.push_back(std::ldexp(1.0, k));
        for (double s : specials) {
            check_endpoint(s);
            check_interval(Interval::point(s, b64));
        }
        check_interval(Interval::empty(b64));
        check_interval(Interval::entire(b64));
        check_interval(Interval::make(-inf, 0.0, b64));
        check_interval(Interval::make(0.0, inf, b64));
        return bad ? std::to_string(bad) + " property violations" : std::string{};
    });

    // --- 6. Suite scale and self-consistency of every generated pair.
    // (Runs before 5/7/8/9/10, which reuse the generated suites.)
    acc.criterion(6, "suites >= 100 pairs per function/format, invariants regenerate",
                  300.0, [&set] {
                      std::string problem;
                      for (const Format& fmt : {b64, b32}) {
                          for (Fn f : all_fns) {
                              SuiteSpec spec;
                              spec.f = f;
                              spec.fmt = fmt;
                              spec.n_random = 100;
                              spec.seed = 1788;
                              auto pairs = gen_function_suite(spec);
                              const bool named =
                                  f == Fn::Cbrt || f == Fn::Exp || f == Fn::Sin ||
                                  f == Fn::Atanh;
                              if (named && pairs.size() < 100)
                                  problem += std::string(fn_name(f)) + "/" + fmt.name() +
                                             " too small; ";
                              if (named) {
                                  for (const TestingPair& p : pairs) {
                                      if (!(tightest_hull(p.f, p.args) == p.y) ||
                                          !p.y_prime ||
                                          !(accurate_envelope(p.f, p.args) == *p.y_prime) ||
                                          !p.y_prime->contains(p.y)) {
                                          problem += std::string(fn_name(f)) +
                                                     " invariant break; ";
                                          break;
                                      }
                                  }
                              }
                              set.suites[{f, fmt.kind}] = std::move(pairs);
                          }
                      }
                      return problem;
                  });

    // --- 5. The verdict lattice on constructed observations.
    acc.criterion(5, "mode lattice on >= 10^4 constructed observations", 10.0, [&set] {
        std::size_t instances = 0, bad = 0;
        std::string first;
        const auto expect = [&](const Interval& z, const TestingPair& p, Level want,
                                const char* what) {
            ++instances;
            Level got;
            try {
                got = classify(z, p).level;
            } catch (const std::exception& e) {
                ++bad;
                if (first.empty()) first = std::string(what) + ": " + e.what();
                return;
            }
            if (got != want) {
                ++bad;
                if (first.empty())
                    first = std::string(what) + ": got " + level_name(got) +
                            ", wanted " + level_name(want);
            }
            // Lattice coherence: re-evaluate the three predicates directly.
            const bool valid_p = z.contains(p.y);
            const bool acc_p = valid_p && p.y_prime->contains(z);
            const bool tight_p = z == p.y;
            const Level by_pred = tight_p  ? Level::Tightest
                                  : acc_p  ? Level::Accurate
                                  : valid_p ? Level::Valid
                                            : Level::Nonconforming;
            if (by_pred != got) {
                ++bad;
                if (first.empty()) first = std::string(what) + ": predicate mismatch";
            }
        };
        for (const auto& [key, pairs] : set.suites) {
            for (const TestingPair& p : pairs) {
                if (!p.y_prime) continue;
                const Format& fmt = p.fmt;
                const Interval& y = p.y;
                const Interval& yp = *p.y_prime;
                expect(y, p, Level::Tightest, "at y");
                if (y.is_empty()) {
                    if (yp.is_empty()) {
                        // With an empty envelope nothing nonempty can reach
                        // accurate; any observation is at best valid.
                        expect(Interval::point(0.0, fmt), p, Level::Valid,
                               "nonempty vs empty envelope");
                    } else {
                        expect(yp, p, Level::Accurate, "at y-prime (empty y)");
                        if (std::isfinite(yp.inf()))
                            expect(Interval::make(next_down(yp.inf(), fmt), yp.sup(), fmt),
                                   p, Level::Valid, "one past y-prime (empty y)");
                        else if (std::isfinite(yp.sup()))
                            expect(Interval::make(yp.inf(), next_up(yp.sup(), fmt), fmt),
                                   p, Level::Valid, "one past y-prime (empty y)");
                    }
                    continue;
                }
                // Strictly between y and y': widen one side one step.
                if (std::isfinite(y.inf())) {
                    const Interval left =
                        Interval::make(next_down(y.inf(), fmt), y.sup(), fmt);
                    if (!(left == y) && !(left == yp) && yp.contains(left))
                        expect(left, p, Level::Accurate, "between, left");
                }
                if (std::isfinite(y.sup())) {
                    const Interval right =
                        Interval::make(y.inf(), next_up(y.sup(), fmt), fmt);
                    if (!(right == y) && !(right == yp) && yp.contains(right))
                        expect(right, p, Level::Accurate, "between, right");
                }
                if (!(yp == y)) expect(yp, p, Level::Accurate, "at y-prime");
                // One past the envelope.
                if (std::isfinite(yp.inf()))
                    expect(Interval::make(next_down(yp.inf(), fmt), yp.sup(), fmt), p,
                           Level::Valid, "one past y-prime");
                else if (std::isfinite(yp.sup()))
                    expect(Interval::make(yp.inf(), next_up(yp.sup(), fmt), fmt), p,
                           Level::Valid, "one past y-prime");
                // Enclosure violations: a proper subset (or miss) of y.
                const double shaved =
                    std::isfinite(y.inf()) ? next_up(y.inf(), fmt) : y.inf();
                if (y.is_point() || std::isinf(shaved) || shaved > y.sup()) {
                    expect(Interval::empty(fmt), p, Level::Nonconforming, "empty vs y");
                } else {
                    expect(Interval::make(shaved, y.sup(), fmt), p,
                           Level::Nonconforming, "proper subset");
                }
            }
        }
        if (bad) return std::to_string(bad) + " of " + std::to_string(instances) +
                        " misclassified; first: " + first;
        if (instances < 10000)
            return "only " + std::to_string(instances) + " instances constructed";
        return std::string{};
    });

    // --- 7. The double-rounding reproduction over the real wire protocol.
    acc.criterion(7, "naive32 on cbrt/b32: accurate but not tightest", 30.0, [&set] {
        const auto& pairs = set.of(Fn::Cbrt, b32);
        AdapterHandle h(std::string(IVALKIT_BIN) + " adapter --kind naive32");
        const Evaluator remote = [&h](const TestingPair& p) { return h.eval(p); };
        const Report rep = run_suite(pairs, remote, {.claimed = Level::Tightest});
        std::size_t accurate = 0, nonconf = 0;
        for (const auto& o : rep.outcomes) {
            if (o.level == Level::Accurate) ++accurate;
            if (o.level == Level::Nonconforming) ++nonconf;
        }
        if (nonconf) return std::to_string(nonconf) + " nonconforming verdicts";
        if (accurate == 0) return std::string("no accurate-not-tightest verdict seen");
        if (check_claim(rep, Level::Tightest))
            return std::string("tightest claim unexpectedly upheld");
        if (!check_claim(rep, Level::Accurate))
            return std::string("accurate claim unexpectedly failed");
        return std::string{};
    });

    // --- 8. The kernel itself passes every suite at tightest.
    acc.criterion(8, "builtin kernel at tightest on all 13 functions, both formats",
                  300.0, [&set] {
                      const Evaluator local = [](const TestingPair& p) {
                          try {
                              return EvalResult::ok(apply_op(p.f, p.args));
                          } catch (const std::exception& e) {
                              return EvalResult::failed(e.what());
                          }
                      };
                      for (const auto& [key, pairs] : set.suites) {
                          const Report rep =
                              run_suite(pairs, local, {.claimed = Level::Tightest});
                          if (!rep.claim_upheld) {
                              const std::size_t idx = rep.failing.front();
                              return std::string(fn_name(key.first)) + "/" +
                                     (key.second == FormatKind::Binary64 ? "b64" : "b32") +
                                     " pair " + std::to_string(idx) + " verdict " +
                                     level_name(rep.outcomes[idx].level);
                          }
                      }
                      return std::string{};
                  });

    // --- 9. Range sanity fires exactly where the envelope escapes the range.
    acc.criterion(9, "range-sanity diagnostics fire only out of range", 0.0, [] {
        const Interval xs = Interval::make(0.0, 10.0, b64);
        const TestingPair sp(Fn::Sin, b64, {xs}, tightest_hull(Fn::Sin, xs),
                             accurate_envelope(Fn::Sin, xs));
        if (range_sanity(sp).empty()) return std::string("sin showcase did not warn");
        const Interval xe = Interval::make(-1e9, 0.0, b64);
        const TestingPair ep(Fn::Exp, b64, {xe}, tightest_hull(Fn::Exp, xe),
                             accurate_envelope(Fn::Exp, xe));
        if (range_sanity(ep).empty()) return std::string("exp showcase did not warn");
        // 100 exp pairs with inputs bounded away from underflow: no warnings.
        TestRng rng(99);
        for (int i = 0; i < 100; ++i) {
            double a = rng.uniform(-700.0, 709.0), b = rng.uniform(-700.0, 709.0);
            if (a > b) std::swap(a, b);
            const Interval x = Interval::make(a, b, b64);
            const TestingPair p(Fn::Exp, b64, {x}, tightest_hull(Fn::Exp, x),
                                accurate_envelope(Fn::Exp, x));
            if (!range_sanity(p).empty())
                return "spurious warning on exp " + format_interval_hex(x);
        }
        return std::string{};
    });

    // --- 10. Hulls do not depend on the starting precision.
    acc.criterion(10, "tightest hulls identical for q_start in {p+1, 2p+10, 256}",
                  0.0, [] {
                      std::size_t bad = 0;
                      std::string first;
                      for (const Format& fmt : {b64, b32}) {
                          TestRng rng(fmt.kind == FormatKind::Binary64 ? 1001 : 1002);
                          const unsigned p1 =
                              static_cast<unsigned>(fmt.precision) + 1;
                          const unsigned p2 =
                              2u * static_cast<unsigned>(fmt.precision) + 10;
                          for (Fn f : elementary_fns) {
                              const RealSet& dom = fn_info(f).domain;
                              for (int i = 0; i < 1000; ++i) {
                                  const Interval x = rand_interval(rng, fmt, dom);
                                  OracleConfig c1{.q_start = p1};
                                  OracleConfig c2{.q_start = p2};
                                  OracleConfig c3{.q_start = 256};
                                  const Interval h1 = tightest_hull(f, x, c1);
                                  if (!(h1 == tightest_hull(f, x, c2)) ||
                                      !(h1 == tightest_hull(f, x, c3))) {
                                      if (!bad++)
                                          first = std::string(fn_name(f)) + " on " +
                                                  format_interval_hex(x);
                                  }
                              }
                          }
                      }
                      if (bad)
                          return std::to_string(bad) + " divergences, first: " + first;
                      return std::string{};
                  });

    return acc.report();
}
