#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>

#include "adapter_client.hpp"
#include "adapter_server.hpp"
#include "ivalkit/errors.hpp"
#include "ivalkit/hexfloat.hpp"
#include "ivalkit/pairgen.hpp"
#include "ivalkit/version.hpp"
#include "selftest.hpp"

using namespace ivalkit;
using namespace ivalkit::cli;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitClaimFailed = 1;
constexpr int kExitUsageOrIo = 2;
constexpr int kExitFaultBudget = 3;

// The environment may cap the working precision (useful for pinning down
// precision-exhaustion behavior without rebuilding).
OracleConfig env_oracle_config() {
    OracleConfig cfg;
    if (const char* cap = std::getenv("IVALKIT_ORACLE_QMAX")) {
        const long v = std::strtol(cap, nullptr, 10);
        if (v > 0) cfg.q_max = static_cast<unsigned>(v);
    }
    return cfg;
}

int cmd_gen(const std::string& fn_tok, const std::string& fmt_tok, std::size_t n,
            std::uint64_t seed, const std::string& out_path, bool specials,
            bool extrema, bool symmetry, unsigned q_start, unsigned q_max) {
    const auto fn = parse_fn(fn_tok);
    if (!fn) {
        std::cerr << "unsupported function '" << fn_tok << "'\n";
        return kExitUsageOrIo;
    }
    const auto fmt = parse_format(fmt_tok);
    if (!fmt) {
        std::cerr << "unsupported format '" << fmt_tok << "'\n";
        return kExitUsageOrIo;
    }
    SuiteSpec spec;
    spec.f = *fn;
    spec.fmt = *fmt;
    spec.n_random = n;
    spec.seed = seed;
    spec.include_specials = specials;
    spec.include_extrema = extrema;
    spec.include_symmetry = symmetry;
    OracleStats stats;
    OracleConfig cfg = env_oracle_config();
    if (q_start) cfg.q_start = q_start;
    if (q_max) cfg.q_max = q_max;
    cfg.stats = &stats;
    try {
        const auto pairs = gen_function_suite(spec, cfg);
        const PairFile file = pair_file_for(spec, pairs);
        write_pairs_file(file, out_path);
        std::cout << "wrote " << pairs.size() << " pairs to " << out_path << "\n";
        std::cout << "reference evaluations: " << stats.point_evals.load()
                  << ", highest working precision: " << stats.max_q.load()
                  << " bits\n";
        return kExitOk;
    } catch (const PrecisionExhaustedError& e) {
        std::cerr << "generation failed: " << e.what() << "\n";
        return kExitUsageOrIo;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return kExitUsageOrIo;
    }
}

int cmd_check(const std::string& pairs_path, const std::string& target,
              const std::string& adapter_cmd, const std::string& claim_tok,
              double timeout_s, std::size_t fault_budget, unsigned jobs,
              const std::string& records_path) {
    PairFile file;
    try {
        file = read_pairs_file(pairs_path);
    } catch (const ParseError& e) {
        std::cerr << "parse error in " << pairs_path << ": " << e.what() << "\n";
        return kExitUsageOrIo;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return kExitUsageOrIo;
    }
    if (target != "builtin" && adapter_cmd.empty()) {
        std::cerr << "check needs --target builtin or --adapter '<command>'\n";
        return kExitUsageOrIo;
    }

    std::set<Fn> fns;
    for (const TestingPair& p : file.pairs) fns.insert(p.f);

    std::optional<Level> claimed;
    if (!claim_tok.empty()) {
        claimed = parse_level(claim_tok);
        if (!claimed) {
            std::cerr << "unknown claim level '" << claim_tok << "'\n";
            return kExitUsageOrIo;
        }
    }

    const auto timeout = std::chrono::milliseconds(
        static_cast<long>(timeout_s * 1000.0));

    std::vector<Evaluator> evals;
    std::vector<std::unique_ptr<AdapterHandle>> handles;
    try {
        if (target == "builtin") {
            if (!claimed) claimed = Level::Tightest;  // the kernel's documented mode
            const Evaluator e = [](const TestingPair& p) {
                try {
                    return EvalResult::ok(apply_op(p.f, p.args));
                } catch (const std::exception& ex) {
                    return EvalResult::failed(ex.what());
                }
            };
            evals.assign(std::max(1u, jobs), e);
        } else {
            const unsigned n_handles = std::max(1u, jobs);
            handles.push_back(std::make_unique<AdapterHandle>(adapter_cmd, timeout));
            const AdapterInfo& info = handles.front()->info();
            if (!claimed) {
                claimed = info.claim_floor(fns);
                if (!claimed) {
                    std::cerr << "adapter does not declare all functions in the "
                                 "suite; pass --claim explicitly\n";
                    return kExitUsageOrIo;
                }
            }
            if (info.reentrant) {
                for (unsigned i = 1; i < n_handles; ++i)
                    handles.push_back(
                        std::make_unique<AdapterHandle>(adapter_cmd, timeout));
            }
            for (auto& h : handles) {
                AdapterHandle* raw = h.get();
                evals.emplace_back(
                    [raw](const TestingPair& p) { return raw->eval(p); });
            }
        }
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return kExitUsageOrIo;
    }

    RunOptions opts;
    opts.claimed = *claimed;
    opts.fault_budget = fault_budget;
    Report rep;
    try {
        rep = run_suite(file.pairs, evals, opts);
    } catch (const MissingEnvelopeError& e) {
        std::cerr << "pair file is underspecified for an accurate-mode check: "
                  << e.what() << "\n";
        return kExitUsageOrIo;
    }
    std::cout << render_table(rep, file.pairs);
    if (!records_path.empty()) {
        const std::string records = render_records(rep, file.pairs);
        if (records_path == "-") {
            std::cout << records;
        } else {
            std::ofstream out(records_path);
            if (!out) {
                std::cerr << "cannot write records to " << records_path << "\n";
                return kExitUsageOrIo;
            }
            out << records;
        }
    }
    if (rep.aborted_on_faults) return kExitFaultBudget;
    return rep.claim_upheld ? kExitOk : kExitClaimFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"interval arithmetic kernel and accuracy-mode conformance harness"};
    app.set_version_flag("--version", version_string);
    app.require_subcommand(1);

    // gen
    std::string g_fn = "exp", g_fmt = "b64", g_out = "pairs.txt";
    std::size_t g_n = 100;
    std::uint64_t g_seed = 1;
    bool g_no_specials = false, g_no_extrema = false, g_no_symmetry = false;
    unsigned g_qstart = 0, g_qmax = 0;
    auto* gen = app.add_subcommand("gen", "generate a testing-pair suite");
    gen->add_option("--fn", g_fn, "function name (neg add sub mul div recip sqrt sqr fma cbrt exp sin atanh)");
    gen->add_option("--format", g_fmt, "b32 or b64");
    gen->add_option("--n", g_n, "number of random pairs");
    gen->add_option("--seed", g_seed, "random seed");
    gen->add_option("--out", g_out, "output pair file")->required();
    gen->add_flag("--no-specials", g_no_specials, "skip the special-case pairs");
    gen->add_flag("--no-extrema", g_no_extrema, "skip extremum straddles (sin)");
    gen->add_flag("--no-symmetry", g_no_symmetry, "skip mirrored pairs");
    gen->add_option("--q-start", g_qstart, "starting working precision in bits");
    gen->add_option("--q-max", g_qmax, "working precision cap in bits");

    // check
    std::string c_pairs, c_target = "builtin", c_adapter, c_claim, c_records;
    double c_timeout = 10.0;
    std::size_t c_budget = 5;
    unsigned c_jobs = 1;
    auto* check = app.add_subcommand("check", "run a pair file against a target");
    check->add_option("--pairs", c_pairs, "pair file to run")->required();
    check->add_option("--target", c_target, "'builtin' or 'adapter'");
    check->add_option("--adapter", c_adapter, "adapter shell command");
    check->add_option("--claim", c_claim,
                      "claimed mode to verify (default: adapter's declaration)");
    check->add_option("--timeout", c_timeout, "per-request timeout, seconds");
    check->add_option("--fault-budget", c_budget, "faults tolerated before aborting");
    check->add_option("--jobs", c_jobs, "parallel evaluators (reentrant adapters)");
    check->add_option("--records", c_records, "write per-pair records ('-' = stdout)");

    // selftest
    std::size_t s_n = 2000;
    auto* selftest = app.add_subcommand("selftest", "run the tester's own checks");
    selftest->add_option("--n", s_n, "random cases per item");

    // adapter
    std::string a_kind = "builtin";
    auto* adapter =
        app.add_subcommand("adapter", "serve the wire protocol on stdin/stdout");
    adapter->add_option("--kind", a_kind, "'builtin' or 'naive32'");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsageOrIo;
    }

    try {
        if (gen->parsed())
            return cmd_gen(g_fn, g_fmt, g_n, g_seed, g_out, !g_no_specials,
                           !g_no_extrema, !g_no_symmetry, g_qstart, g_qmax);
        if (check->parsed()) {
            if (!c_adapter.empty()) c_target = "adapter";
            return cmd_check(c_pairs, c_target, c_adapter, c_claim, c_timeout,
                             c_budget, c_jobs, c_records);
        }
        if (selftest->parsed())
            return run_selftest(std::cout, env_oracle_config(), s_n);
        if (adapter->parsed()) {
            if (a_kind != "builtin" && a_kind != "naive32") {
                std::cerr << "unknown adapter kind '" << a_kind << "'\n";
                return kExitUsageOrIo;
            }
            return run_adapter(a_kind == "naive32" ? AdapterKind::Naive32
                                                   : AdapterKind::Builtin,
                               std::cin, std::cout);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsageOrIo;
    }
    return kExitUsageOrIo;
}
