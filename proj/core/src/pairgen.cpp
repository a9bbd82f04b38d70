#include "ivalkit/pairgen.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "ivalkit/errors.hpp"
#include "ivalkit/hexfloat.hpp"
#include "ivalkit/rounding.hpp"
#include "ivalkit/version.hpp"

namespace ivalkit {

namespace {

constexpr double kInf = __builtin_huge_val();

std::uint64_t splitmix64(std::uint64_t& s) {
    s += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Per-pair generator: a pure function of (seed, index), so suites are
// reproducible no matter how generation is scheduled.
struct Rng {
    std::uint64_t state;
    Rng(std::uint64_t seed, std::uint64_t index)
        : state(seed ^ (index * 0x632BE59BD9B4E019ull + 0x9E3779B97F4A7C15ull)) {
        next();
        next();
    }
    std::uint64_t next() { return splitmix64(state); }
    double unit() {  // [0, 1)
        return static_cast<double>(next() >> 11) * 0x1p-53;
    }
};

// Uniform over the format's finite bit patterns.
double random_finite(Rng& rng, const Format& fmt) {
    if (fmt.kind == FormatKind::Binary64) {
        for (;;) {
            const std::uint64_t bits = rng.next();
            if (((bits >> 52) & 0x7FF) == 0x7FF) continue;
            return std::bit_cast<double>(bits);
        }
    }
    for (;;) {
        const auto bits = static_cast<std::uint32_t>(rng.next());
        if (((bits >> 23) & 0xFF) == 0xFF) continue;
        return static_cast<double>(std::bit_cast<float>(bits));
    }
}

double random_in_domain(Rng& rng, const Format& fmt, const RealSet& dom) {
    for (;;) {
        const double v = random_finite(rng, fmt);
        if (v < dom.lo || v > dom.hi) continue;
        if (dom.lo_open && v == dom.lo) continue;
        if (dom.hi_open && v == dom.hi) continue;
        return v;
    }
}

Interval random_interval(Rng& rng, const Format& fmt, const RealSet& dom) {
    const double roll = rng.unit();
    double a = random_in_domain(rng, fmt, dom);
    if (roll < 0.10) return Interval::point(a, fmt);
    double b = random_in_domain(rng, fmt, dom);
    if (a > b) std::swap(a, b);
    if (dom.is_reals()) {
        if (roll >= 0.90 && roll < 0.95) a = -kInf;
        if (roll >= 0.95) b = kInf;
    }
    return Interval::make(a, b, fmt);
}

// ---------------------------------------------------------------------------
// Specials.

using Args = std::vector<Interval>;

void push_unary(std::vector<Args>& out, Interval iv) {
    out.push_back(Args{std::move(iv)});
}

std::vector<Interval> shared_unary_specials(const Format& fmt) {
    std::vector<Interval> v;
    v.push_back(Interval::empty(fmt));
    v.push_back(Interval::entire(fmt));
    v.push_back(Interval::point(0.0, fmt));
    v.push_back(Interval::point(1.0, fmt));
    v.push_back(Interval::point(-1.0, fmt));
    v.push_back(Interval::make(-1.0, 1.0, fmt));
    v.push_back(Interval::point(fmt.min_subnormal, fmt));
    v.push_back(Interval::make(-fmt.min_subnormal, fmt.min_subnormal, fmt));
    v.push_back(Interval::point(fmt.min_normal, fmt));
    v.push_back(Interval::point(fmt.max_finite, fmt));
    v.push_back(Interval::make(-fmt.max_finite, fmt.max_finite, fmt));
    v.push_back(Interval::make(0.0, kInf, fmt));
    v.push_back(Interval::make(-kInf, 0.0, fmt));
    return v;
}

std::vector<Args> specials_for(Fn f, const Format& fmt) {
    const bool b64 = fmt.kind == FormatKind::Binary64;
    std::vector<Args> out;
    const auto iv = [&](double a, double b) { return Interval::make(a, b, fmt); };
    const auto pt = [&](double a) { return Interval::point(a, fmt); };
    switch (f) {
        case Fn::Cbrt: {
            for (auto& s : shared_unary_specials(fmt)) push_unary(out, std::move(s));
            push_unary(out, pt(8.0));
            push_unary(out, pt(27.0));
            push_unary(out, pt(-8.0));
            push_unary(out, iv(-8.0, 27.0));
            push_unary(out, iv(-27.0, -8.0));
            push_unary(out, pt(b64 ? 0x1p+300 : 0x1p+90));  // exact cube
            push_unary(out, pt(b64 ? 0x1p-300 : 0x1p-90));
            push_unary(out, iv(b64 ? 0x1p+300 : 0x1p+90, b64 ? 0x1.8p+301 : 0x1.8p+91));
            break;
        }
        case Fn::Exp: {
            for (auto& s : shared_unary_specials(fmt)) push_unary(out, std::move(s));
            push_unary(out, iv(-1000000000.0, 0.0));  // deep-underflow showcase
            if (b64) {
                push_unary(out, pt(709.782712893384));  // near ln(max_finite)
                push_unary(out, iv(709.0, 710.0));
                push_unary(out, iv(710.0, 720.0));
                push_unary(out, iv(-746.0, -745.0));
                push_unary(out, iv(-800.0, -600.0));
                push_unary(out, iv(-0x1p-30, 0x1p-30));
            } else {
                push_unary(out, pt(88.72283935546875));
                push_unary(out, iv(88.0, 89.0));
                push_unary(out, iv(89.0, 95.0));
                push_unary(out, iv(-104.0, -103.0));
                push_unary(out, iv(-110.0, -90.0));
                push_unary(out, iv(-0x1p-10, 0x1p-10));
            }
            break;
        }
        case Fn::Sin: {
            for (auto& s : shared_unary_specials(fmt)) push_unary(out, std::move(s));
            push_unary(out, iv(0.0, 10.0));  // the classic two-extrema showcase
            push_unary(out, iv(0.0, 1.0));
            push_unary(out, iv(1.0, 2.0));
            push_unary(out, iv(3.0, 5.0));
            push_unary(out, iv(0.0, 7.0));
            if (b64) {
                push_unary(out, pt(0x1.921fb54442d18p+0));  // nearest double to pi/2
                push_unary(out, pt(0x1.921fb54442d18p+1));  // nearest double to pi
                push_unary(out, iv(0x1p+52, 0x1.0000000000001p+52));
                push_unary(out, iv(0x1p+100, 0x1.0000000000001p+100));
                push_unary(out, pt(0x1.8p+1023));  // argument-reduction stress
            } else {
                push_unary(out, pt(0x1.921fb6p+0));
                push_unary(out, pt(0x1.921fb6p+1));
                push_unary(out, iv(0x1p+20, 0x1.000002p+20));
                push_unary(out, pt(0x1.8p+126));
            }
            break;
        }
        case Fn::Atanh: {
            push_unary(out, Interval::empty(fmt));
            push_unary(out, Interval::entire(fmt));
            push_unary(out, pt(0.0));
            push_unary(out, pt(1.0));    // degenerate on the open bound: empty
            push_unary(out, pt(-1.0));
            push_unary(out, iv(-1.0, 1.0));  // full domain: entire
            push_unary(out, iv(0.5, 1.0));
            push_unary(out, iv(-1.0, -0.5));
            push_unary(out, pt(next_down(1.0, fmt)));
            push_unary(out, pt(next_up(-1.0, fmt)));
            push_unary(out, pt(fmt.min_subnormal));
            push_unary(out, iv(-fmt.min_subnormal, fmt.min_subnormal));
            push_unary(out, iv(-2.0, 2.0));  // clips to the full domain
            push_unary(out, iv(2.0, 3.0));   // disjoint from the domain: empty
            push_unary(out, iv(-0.5, 0.5));
            break;
        }
        case Fn::Sqrt: {
            for (auto& s : shared_unary_specials(fmt)) push_unary(out, std::move(s));
            push_unary(out, iv(-1.0, 2.0));  // the settled cornercase
            push_unary(out, iv(-2.0, -1.0));
            push_unary(out, pt(4.0));
            push_unary(out, pt(2.0));
            break;
        }
        case Fn::Neg:
        case Fn::Sqr:
        case Fn::Recip: {
            for (auto& s : shared_unary_specials(fmt)) push_unary(out, std::move(s));
            push_unary(out, iv(0.0, 1.0));
            push_unary(out, iv(-2.0, 3.0));
            break;
        }
        case Fn::Add:
        case Fn::Sub:
        case Fn::Mul:
        case Fn::Div: {
            const std::vector<Interval> base = {
                Interval::empty(fmt),
                Interval::entire(fmt),
                Interval::point(0.0, fmt),
                Interval::make(1.0, 2.0, fmt),
                Interval::make(-1.0, 1.0, fmt),
                Interval::make(-3.0, -2.0, fmt),
                Interval::make(0.0, kInf, fmt),
                Interval::point(fmt.max_finite, fmt),
                Interval::make(0.0, 1.0, fmt),
                Interval::point(fmt.min_subnormal, fmt),
            };
            for (const Interval& a : base)
                for (const Interval& b : base) out.push_back(Args{a, b});
            break;
        }
        case Fn::Fma: {
            const std::vector<Interval> base = {
                Interval::empty(fmt),
                Interval::entire(fmt),
                Interval::point(0.0, fmt),
                Interval::make(1.0, 2.0, fmt),
                Interval::make(-1.0, 1.0, fmt),
                Interval::point(fmt.max_finite, fmt),
            };
            for (std::size_t i = 0; i < base.size(); ++i)
                for (std::size_t j = 0; j < base.size(); ++j)
                    out.push_back(Args{base[i], base[j], base[(i + j) % base.size()]});
            break;
        }
    }
    return out;
}

// Intervals straddling (or hugging) sine's critical points, built from
// directed roundings of pi/2 + k pi.
std::vector<Args> sin_extrema_specials(const Format& fmt) {
    std::vector<Args> out;
    const HPBound pi = detail::pi_enclosure(160);
    for (int k : {0, 1, 2, -1, -2, 5}) {
        // critical point m = pi/2 + k pi = pi (2k + 1) / 2
        const BigFloat lo_b =
            BigFloat::mul(pi.lo, BigFloat::from_int(2 * k + 1)).mul_pow2(-1);
        const BigFloat hi_b =
            BigFloat::mul(pi.hi, BigFloat::from_int(2 * k + 1)).mul_pow2(-1);
        const BigFloat& mlo = (2 * k + 1) >= 0 ? lo_b : hi_b;
        const BigFloat& mhi = (2 * k + 1) >= 0 ? hi_b : lo_b;
        const double rd = round_to_format(mlo, fmt, Direction::Down);
        const double ru = round_to_format(mhi, fmt, Direction::Up);
        assert(rd == round_to_format(mhi, fmt, Direction::Down));
        double a = rd, b = ru;
        for (int widen : {0, 1, 2, 5, 9}) {
            double aa = a, bb = b;
            for (int i = 0; i < widen; ++i) {
                aa = next_down(aa, fmt);
                bb = next_up(bb, fmt);
            }
            out.push_back(Args{Interval::make(aa, bb, fmt)});
        }
        // One-sided hugs: entirely below / above the critical point.
        out.push_back(Args{Interval::make(next_down(rd, fmt), rd, fmt)});
        out.push_back(Args{Interval::make(ru, next_up(ru, fmt), fmt)});
    }
    return out;
}

TestingPair build_pair(Fn f, const Format& fmt, Args args, const OracleConfig& cfg,
                       std::string tag) {
    Interval y = tightest_hull(f, args, cfg);
    Interval yp = accurate_envelope(f, args, cfg);
    return TestingPair(f, fmt, std::move(args), std::move(y), std::move(yp),
                       std::move(tag));
}

} // namespace

std::vector<TestingPair> gen_function_suite(const SuiteSpec& spec,
                                            const OracleConfig& cfg) {
    const FnInfo& info = fn_info(spec.f);
    std::vector<TestingPair> out;

    if (spec.include_specials) {
        for (Args& a : specials_for(spec.f, spec.fmt))
            out.push_back(build_pair(spec.f, spec.fmt, std::move(a), cfg, "special"));
    }
    if (spec.f == Fn::Sin && spec.include_extrema) {
        for (Args& a : sin_extrema_specials(spec.fmt))
            out.push_back(build_pair(spec.f, spec.fmt, std::move(a), cfg, "extremum"));
    }
    const RealSet& dom = info.domain;
    std::vector<Args> randoms;
    randoms.reserve(spec.n_random);
    for (std::size_t i = 0; i < spec.n_random; ++i) {
        Rng rng(spec.seed, i);
        Args args;
        args.reserve(static_cast<std::size_t>(info.arity));
        for (int k = 0; k < info.arity; ++k)
            args.push_back(random_interval(rng, spec.fmt, dom));
        randoms.push_back(args);
        out.push_back(build_pair(spec.f, spec.fmt, std::move(args), cfg, "random"));
    }
    if (spec.include_symmetry && info.arity == 1 &&
        (spec.f == Fn::Neg || spec.f == Fn::Cbrt || spec.f == Fn::Sin ||
         spec.f == Fn::Atanh)) {
        const std::size_t n = std::min<std::size_t>(randoms.size(), 8);
        for (std::size_t i = 0; i < n; ++i) {
            Args mirrored{neg(randoms[i][0])};
            out.push_back(
                build_pair(spec.f, spec.fmt, std::move(mirrored), cfg, "symmetry"));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// next_out cases.

namespace {

template <typename T>
T arith_next_up_t(T x, const Format& fmt) {
    if (x == 0) return static_cast<T>(fmt.min_subnormal);
    if (std::isinf(x)) return x > 0 ? x : static_cast<T>(-fmt.max_finite);
    if (std::abs(static_cast<double>(x)) < fmt.min_normal) {
        // Uniform subnormal grid (and the crossing out of it).
        return static_cast<T>(x + static_cast<T>(fmt.min_subnormal));
    }
    const int e = std::ilogb(x);
    T step = static_cast<T>(std::ldexp(1.0, e - (fmt.precision - 1)));
    if (x < 0 && x == static_cast<T>(-std::ldexp(1.0, e)) && e > fmt.emin)
        step /= 2;  // stepping up out of a binade bottom
    return static_cast<T>(x + step);
}

} // namespace

double arith_next_up(double x, const Format& fmt) {
    if (fmt.kind == FormatKind::Binary64) return arith_next_up_t<double>(x, fmt);
    const double r =
        static_cast<double>(arith_next_up_t<float>(static_cast<float>(x), fmt));
    return r == 0 ? 0.0 : r;
}

std::vector<NextOutCase> gen_nextout_suite(const Format& fmt, std::size_t n_random,
                                           std::uint64_t seed) {
    std::vector<NextOutCase> out;
    const auto arith_down = [&](double v) { return -arith_next_up(-v, fmt); };
    const auto expected_for = [&](const Interval& x) {
        if (x.is_empty()) return x;
        return Interval::make(arith_down(x.inf()), arith_next_up(x.sup(), fmt), fmt);
    };
    const auto add_case = [&](Interval x, std::string tag) {
        NextOutCase c;
        c.fmt = fmt;
        c.x = x;
        c.expected = expected_for(x);
        c.tag = std::move(tag);
        out.push_back(std::move(c));
        return out.size() - 1;
    };
    const auto add_invalid = [&](double a, double b, std::string tag) {
        NextOutCase c;
        c.fmt = fmt;
        c.expect_invalid = true;
        c.raw_inf = a;
        c.raw_sup = b;
        c.tag = std::move(tag);
        out.push_back(std::move(c));
    };

    // Special and exceptional endpoint values.
    std::vector<double> sp = {0.0,
                              fmt.min_subnormal,
                              -fmt.min_subnormal,
                              2 * fmt.min_subnormal,
                              fmt.min_normal,
                              -fmt.min_normal,
                              1.0,
                              -1.0,
                              1.5,
                              fmt.max_finite,
                              -fmt.max_finite};
    for (int k : {-10, -1, 1, 10, fmt.kind == FormatKind::Binary64 ? 100 : 50})
        sp.push_back(std::ldexp(1.0, k));
    for (double v : sp) add_case(Interval::point(v, fmt), "special-point");
    for (std::size_t i = 0; i + 1 < sp.size(); i += 2) {
        const double a = std::min(sp[i], sp[i + 1]);
        const double b = std::max(sp[i], sp[i + 1]);
        add_case(Interval::make(a, b, fmt), "special-pair");
    }
    add_case(Interval::make(-kInf, 0.0, fmt), "special-halfline");
    add_case(Interval::make(fmt.max_finite, kInf, fmt), "special-halfline");

    // Interval specials.
    add_case(Interval::empty(fmt), "empty");
    add_case(Interval::entire(fmt), "entire");

    // Invalid constructor payloads; next_out is unreachable for these, the
    // expectation is rejection at construction.
    add_invalid(3.0, 2.0, "invalid-swapped");
    add_invalid(std::numeric_limits<double>::quiet_NaN(), 0.0, "invalid-nan");
    add_invalid(0.0, std::numeric_limits<double>::quiet_NaN(), "invalid-nan");
    add_invalid(kInf, kInf, "invalid-inf-as-inf");
    add_invalid(0.0, -kInf, "invalid-neginf-as-sup");

    // Random endpoints.
    std::vector<std::size_t> mirror_targets;
    for (std::size_t i = 0; i < n_random; ++i) {
        Rng rng(seed, i);
        double a = random_finite(rng, fmt);
        double b = random_finite(rng, fmt);
        if (a > b) std::swap(a, b);
        const std::size_t idx = add_case(Interval::make(a, b, fmt), "random");
        if (i < 16) mirror_targets.push_back(idx);
    }

    // Symmetry cases: next_out([-b, -a]) must equal -next_out([a, b]).
    for (std::size_t idx : mirror_targets) {
        const Interval& x = *out[idx].x;
        NextOutCase c;
        c.fmt = fmt;
        c.x = neg(x);
        c.expected = expected_for(*c.x);
        c.mirror_of = idx;
        c.tag = "symmetry";
        out.push_back(std::move(c));
    }
    for (std::size_t idx = 0; idx < sp.size() && idx < out.size(); ++idx) {
        if (!out[idx].x || out[idx].x->is_empty()) continue;
        NextOutCase c;
        c.fmt = fmt;
        c.x = neg(*out[idx].x);
        c.expected = expected_for(*c.x);
        c.mirror_of = idx;
        c.tag = "symmetry-special";
        out.push_back(std::move(c));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Pair files.

PairFile pair_file_for(const SuiteSpec& spec, std::vector<TestingPair> pairs) {
    PairFile f;
    f.function = fn_name(spec.f);
    f.format = spec.fmt.name();
    f.seed = spec.seed;
    f.generator = generator_string;
    f.pairs = std::move(pairs);
    return f;
}

void write_pairs(const PairFile& file, std::ostream& out) {
    out << "# ivalkit pairs v1\n";
    out << "# generator: " << (file.generator.empty() ? generator_string : file.generator)
        << "\n";
    out << "# function: " << file.function << "\n";
    out << "# format: " << file.format << "\n";
    out << "# seed: " << file.seed << "\n";
    out << "# count: " << file.pairs.size() << "\n";
    for (const TestingPair& p : file.pairs) {
        out << fn_name(p.f) << " " << p.fmt.name();
        for (const Interval& a : p.args) out << " " << format_interval_hex(a);
        out << " " << format_interval_hex(p.y);
        if (p.y_prime) out << " " << format_interval_hex(*p.y_prime);
        if (!p.tag.empty()) out << " " << p.tag;
        out << "\n";
    }
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

} // namespace

PairFile read_pairs(std::istream& in) {
    PairFile file;
    file.generator.clear();
    std::string line;
    std::size_t lineno = 0;
    const auto header_value = [&](const std::string& l, const char* key) {
        const std::string pat = std::string("# ") + key + ":";
        if (l.rfind(pat, 0) != 0) return std::optional<std::string>{};
        std::string v = l.substr(pat.size());
        const std::size_t b = v.find_first_not_of(' ');
        return std::optional<std::string>{b == std::string::npos ? "" : v.substr(b)};
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (auto v = header_value(line, "generator")) file.generator = *v;
            if (auto v = header_value(line, "function")) file.function = *v;
            if (auto v = header_value(line, "format")) file.format = *v;
            if (auto v = header_value(line, "seed")) {
                try {
                    file.seed = std::stoull(*v);
                } catch (...) {
                    throw ParseError(lineno, "bad seed header");
                }
            }
            continue;
        }
        const std::vector<std::string> toks = split_ws(line);
        if (toks.size() < 4) throw ParseError(lineno, "record needs fn, format, inputs, y");
        const auto fn = parse_fn(toks[0]);
        if (!fn) throw ParseError(lineno, "unknown function '" + toks[0] + "'");
        const auto fmt = parse_format(toks[1]);
        if (!fmt) throw ParseError(lineno, "unknown format '" + toks[1] + "'");
        const int arity = fn_info(*fn).arity;
        if (toks.size() < static_cast<std::size_t>(2 + arity + 1))
            throw ParseError(lineno, "record too short for arity");
        std::string err;
        std::vector<Interval> args;
        for (int k = 0; k < arity; ++k) {
            const auto iv = parse_interval_hex(toks[static_cast<std::size_t>(2 + k)], *fmt, &err);
            if (!iv) throw ParseError(lineno, "argument " + std::to_string(k) + ": " + err);
            args.push_back(*iv);
        }
        std::size_t pos = static_cast<std::size_t>(2 + arity);
        const auto y = parse_interval_hex(toks[pos], *fmt, &err);
        if (!y) throw ParseError(lineno, "expected output: " + err);
        ++pos;
        std::optional<Interval> yp;
        if (pos < toks.size() && !toks[pos].empty() && toks[pos][0] == '[') {
            const auto ypp = parse_interval_hex(toks[pos], *fmt, &err);
            if (!ypp) throw ParseError(lineno, "envelope: " + err);
            yp = *ypp;
            ++pos;
        }
        std::string tag;
        for (; pos < toks.size(); ++pos) {
            if (!tag.empty()) tag += " ";
            tag += toks[pos];
        }
        file.pairs.emplace_back(*fn, *fmt, std::move(args), *y, yp, std::move(tag));
    }
    return file;
}

void write_pairs_file(const PairFile& file, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path);
    write_pairs(file, out);
    if (!out.good()) throw Error("write failed: " + path);
}

PairFile read_pairs_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open: " + path);
    return read_pairs(in);
}

} // namespace ivalkit
