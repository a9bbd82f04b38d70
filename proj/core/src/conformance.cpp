#include "ivalkit/conformance.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <thread>

#include "ivalkit/errors.hpp"
#include "ivalkit/hexfloat.hpp"

namespace ivalkit {

const char* level_name(Level l) {
    switch (l) {
        case Level::Tightest: return "tightest";
        case Level::Accurate: return "accurate";
        case Level::Valid: return "valid";
        case Level::Nonconforming: return "nonconforming";
    }
    return "?";
}

std::optional<Level> parse_level(std::string_view token) {
    if (token == "tightest") return Level::Tightest;
    if (token == "accurate") return Level::Accurate;
    if (token == "valid") return Level::Valid;
    if (token == "nonconforming") return Level::Nonconforming;
    return std::nullopt;
}

Level kernel_mode(Fn f) {
    (void)f;
    return Level::Tightest;
}

bool TestingPair::operator==(const TestingPair& o) const {
    return f == o.f && fmt == o.fmt && args == o.args && y == o.y &&
           y_prime == o.y_prime && tag == o.tag;
}

Verdict classify(const Interval& z, const TestingPair& pair) {
    if (z == pair.y) return {Level::Tightest, z};
    if (!z.contains(pair.y)) return {Level::Nonconforming, z};
    // Here z is a strict superset of y.
    if (!pair.y_prime) {
        throw MissingEnvelopeError(
            "pair lacks an accurate-mode envelope; cannot separate accurate from valid");
    }
    if (pair.y_prime->contains(z)) return {Level::Accurate, z};
    return {Level::Valid, z};
}

std::vector<std::string> range_sanity(const TestingPair& pair) {
    std::vector<std::string> out;
    if (!pair.y_prime || pair.y_prime->is_empty()) return out;
    const RealSet& range = fn_info(pair.f).range;
    if (range.is_reals()) return out;
    const Interval& yp = *pair.y_prime;
    std::ostringstream os;
    if (yp.inf() < range.lo) {
        os << fn_name(pair.f) << " envelope lower bound "
           << format_decimal_away(yp.inf()) << " falls below the range bound "
           << format_decimal_away(range.lo);
        out.push_back(os.str());
        os.str({});
    }
    if (yp.sup() > range.hi) {
        os << fn_name(pair.f) << " envelope upper bound "
           << format_decimal_away(yp.sup()) << " exceeds the range bound "
           << format_decimal_away(range.hi);
        out.push_back(os.str());
    }
    return out;
}

namespace {

PairOutcome judge(std::size_t index, const TestingPair& pair, EvalResult res,
                  Level claimed) {
    PairOutcome out;
    out.index = index;
    if (!res.z) {
        out.level = Level::Nonconforming;
        out.note = "fault: " + res.fault;
        return out;
    }
    out.z = res.z;
    try {
        out.level = classify(*res.z, pair).level;
    } catch (const MissingEnvelopeError&) {
        if (claimed == Level::Accurate) throw;
        // The claim does not distinguish accurate from valid; record the
        // weaker level with a caveat.
        out.level = Level::Valid;
        out.note = "envelope missing; accurate not distinguishable from valid";
    }
    return out;
}

} // namespace

Report run_suite(std::span<const TestingPair> pairs, std::span<const Evaluator> evals,
                 const RunOptions& opts) {
    assert(!evals.empty());
    Report rep;
    rep.claimed = opts.claimed;
    std::vector<PairOutcome> outcomes(pairs.size());

    if (evals.size() <= 1 || pairs.size() < 2) {
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            outcomes[i] = judge(i, pairs[i], evals[0](pairs[i]), opts.claimed);
            outcomes[i].index = i;
            rep.executed = i + 1;
            if (!outcomes[i].z) {
                if (++rep.faults > opts.fault_budget) {
                    rep.aborted_on_faults = true;
                    outcomes.resize(i + 1);
                    break;
                }
            }
        }
    } else {
        // One worker per evaluator, striped by index; merge preserves order,
        // so the report never depends on the worker count. The fault budget
        // is enforced on the merged stream.
        const std::size_t n = evals.size();
        std::vector<std::thread> workers;
        std::vector<std::exception_ptr> errors(n);
        workers.reserve(n);
        for (std::size_t t = 0; t < n; ++t) {
            workers.emplace_back([&, t] {
                try {
                    for (std::size_t i = t; i < pairs.size(); i += n)
                        outcomes[i] = judge(i, pairs[i], evals[t](pairs[i]), opts.claimed);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
        for (auto& w : workers) w.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
        rep.executed = pairs.size();
        std::size_t cut = pairs.size();
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            if (!outcomes[i].z && ++rep.faults > opts.fault_budget) {
                rep.aborted_on_faults = true;
                cut = i + 1;
                rep.executed = cut;
                break;
            }
        }
        outcomes.resize(cut);
    }

    for (const PairOutcome& o : outcomes) {
        const TestingPair& p = pairs[o.index];
        rep.counts[p.f][static_cast<std::size_t>(o.level)] += 1;
        if (static_cast<int>(o.level) < static_cast<int>(opts.claimed))
            rep.failing.push_back(o.index);
        for (auto& w : range_sanity(p))
            rep.range_warnings.push_back({o.index, std::move(w)});
    }
    rep.outcomes = std::move(outcomes);
    rep.claim_upheld = rep.failing.empty() && !rep.aborted_on_faults;
    return rep;
}

Report run_suite(std::span<const TestingPair> pairs, const Evaluator& eval,
                 const RunOptions& opts) {
    return run_suite(pairs, std::span<const Evaluator>(&eval, 1), opts);
}

bool check_claim(const Report& report, Level claimed) {
    if (report.aborted_on_faults) return false;
    for (const PairOutcome& o : report.outcomes) {
        if (static_cast<int>(o.level) < static_cast<int>(claimed)) return false;
    }
    return true;
}

namespace {

std::string iv_or(const std::optional<Interval>& iv) {
    return iv ? format_interval_hex(*iv) : std::string("none");
}

} // namespace

std::string render_table(const Report& rep, std::span<const TestingPair> pairs) {
    std::ostringstream os;
    os << "pairs executed: " << rep.executed << "\n";
    os << "claimed mode:   " << level_name(rep.claimed)
       << "   upheld: " << (rep.claim_upheld ? "yes" : "no") << "\n";
    os << "faults: " << rep.faults;
    if (rep.aborted_on_faults) os << "  (fault budget exceeded, suite aborted)";
    os << "\n";
    os << "verdicts per function:\n";
    for (const auto& [fn, counts] : rep.counts) {
        os << "  " << fn_name(fn) << ": tightest=" << counts[3]
           << " accurate=" << counts[2] << " valid=" << counts[1]
           << " nonconforming=" << counts[0] << "\n";
    }
    if (!rep.range_warnings.empty()) {
        constexpr std::size_t kShown = 12;
        os << "range warnings (" << rep.range_warnings.size() << "):\n";
        for (std::size_t i = 0; i < rep.range_warnings.size() && i < kShown; ++i) {
            const auto& w = rep.range_warnings[i];
            os << "  pair " << w.index << ": " << w.message << "\n";
        }
        if (rep.range_warnings.size() > kShown)
            os << "  ... " << rep.range_warnings.size() - kShown << " more\n";
    }
    if (rep.failing.empty()) {
        os << "failing pairs: none\n";
    } else {
        os << "failing pairs (" << rep.failing.size() << "):\n";
        for (std::size_t idx : rep.failing) {
            const TestingPair& p = pairs[idx];
            const PairOutcome& o = rep.outcomes[idx];
            os << "  #" << idx << " " << fn_name(p.f) << " " << p.fmt.name();
            for (const Interval& a : p.args) os << " " << format_interval_hex(a);
            os << "\n    expected " << format_interval_hex(p.y);
            if (p.y_prime) os << "  envelope " << format_interval_hex(*p.y_prime);
            os << "\n    observed " << iv_or(o.z) << "  -> " << level_name(o.level);
            if (!o.note.empty()) os << "  (" << o.note << ")";
            os << "\n";
        }
    }
    return os.str();
}

std::string render_records(const Report& rep, std::span<const TestingPair> pairs) {
    std::ostringstream os;
    for (const PairOutcome& o : rep.outcomes) {
        const TestingPair& p = pairs[o.index];
        os << "pair=" << o.index << " fn=" << fn_name(p.f)
           << " format=" << p.fmt.name() << " args=";
        for (std::size_t i = 0; i < p.args.size(); ++i) {
            if (i) os << ";";
            os << format_interval_hex(p.args[i]);
        }
        os << " y=" << format_interval_hex(p.y) << " yprime="
           << (p.y_prime ? format_interval_hex(*p.y_prime) : "none")
           << " z=" << iv_or(o.z) << " verdict=" << level_name(o.level)
           << " note=" << (o.note.empty() ? "-" : o.note) << "\n";
    }
    return os.str();
}

} // namespace ivalkit
