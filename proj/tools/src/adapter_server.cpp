#include "adapter_server.hpp"

#include <cmath>
#include <iostream>
#include <sstream>
#include <vector>

#include "ivalkit/conformance.hpp"
#include "ivalkit/errors.hpp"
#include "ivalkit/hexfloat.hpp"
#include "ivalkit/oracle.hpp"
#include "ivalkit/rounding.hpp"
#include "ivalkit/version.hpp"

namespace ivalkit::cli {

namespace {

double narrow32(double v, Direction dir) {
    if (std::isinf(v)) return v;
    const Format b32 = Format::binary32();
    const auto c = static_cast<double>(static_cast<float>(v));  // to nearest
    if (c == v) return c;
    if (dir == Direction::Down) return c < v ? c : next_down(c, b32);
    return c > v ? c : next_up(c, b32);
}

Interval narrow_outward(const Interval& x64) {
    if (x64.is_empty()) return Interval::empty(Format::binary32());
    return Interval::make(narrow32(x64.inf(), Direction::Down),
                          narrow32(x64.sup(), Direction::Up), Format::binary32());
}

Interval widen_to_b64(const Interval& x32) {
    if (x32.is_empty()) return Interval::empty(Format::binary64());
    return Interval::make(x32.inf(), x32.sup(), Format::binary64());
}

bool is_elementary(Fn f) {
    return f == Fn::Cbrt || f == Fn::Exp || f == Fn::Sin || f == Fn::Atanh;
}

} // namespace

Interval naive32_eval(Fn f, std::span<const Interval> args_b32) {
    std::vector<Interval> as64;
    as64.reserve(args_b32.size());
    for (const Interval& a : args_b32) as64.push_back(widen_to_b64(a));
    Interval r64 = apply_op(f, as64);
    if (is_elementary(f)) r64 = next_out(r64);  // the sloppy unit-last-place slack
    return narrow_outward(r64);
}

int run_adapter(AdapterKind kind, std::istream& in, std::ostream& out) {
    const bool naive = kind == AdapterKind::Naive32;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream is(line);
        std::string key;
        is >> key;
        if (key == "BYE") return 0;
        if (key == "HELLO") {
            out << "ADAPTER " << (naive ? "naive32" : "builtin") << " "
                << version_string << "\n";
            if (!naive) out << "FORMAT b64\n";
            out << "FORMAT b32\n";
            for (Fn f : all_fns) {
                // naive32 overclaims on purpose; that mismatch is its job.
                const Level claim = naive ? Level::Tightest : kernel_mode(f);
                out << "FUNCTION " << fn_name(f) << " " << level_name(claim) << "\n";
            }
            out << "REENTRANT yes\n";
            out << "READY\n";
            out.flush();
            continue;
        }
        if (key != "EVAL") {
            out << "ERR unknown request '" << key << "'\n";
            out.flush();
            continue;
        }
        std::string fn_tok, fmt_tok;
        is >> fn_tok >> fmt_tok;
        const auto fn = parse_fn(fn_tok);
        const auto fmt = parse_format(fmt_tok);
        if (!fn || !fmt) {
            out << "ERR bad function or format\n";
            out.flush();
            continue;
        }
        if (naive && fmt->kind != FormatKind::Binary32) {
            out << "ERR naive32 serves only b32\n";
            out.flush();
            continue;
        }
        std::vector<Interval> args;
        std::string tok;
        bool parse_ok = true;
        std::string err;
        while (is >> tok) {
            const auto iv = parse_interval_hex(tok, *fmt, &err);
            if (!iv) {
                parse_ok = false;
                break;
            }
            args.push_back(*iv);
        }
        if (!parse_ok || args.size() != static_cast<std::size_t>(fn_info(*fn).arity)) {
            out << "ERR bad arguments: " << (parse_ok ? "arity mismatch" : err) << "\n";
            out.flush();
            continue;
        }
        try {
            const Interval r =
                naive ? naive32_eval(*fn, args) : apply_op(*fn, args);
            out << "RES " << format_interval_hex(r) << "\n";
        } catch (const std::exception& e) {
            out << "ERR evaluation failed: " << e.what() << "\n";
        }
        out.flush();
    }
    return 0;
}

} // namespace ivalkit::cli
