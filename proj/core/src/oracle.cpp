#include "ivalkit/oracle.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include "ivalkit/errors.hpp"
#include "ivalkit/rounding.hpp"

namespace ivalkit {

using detail::BigNat;

unsigned OracleConfig::resolved_q_start(const Format& fmt) const {
    return q_start ? q_start : 2u * static_cast<unsigned>(fmt.precision) + 10u;
}

void OracleConfig::validate(const Format& fmt) const {
    const unsigned q0 = resolved_q_start(fmt);
    if (q0 <= static_cast<unsigned>(fmt.precision))
        throw std::invalid_argument("OracleConfig: q_start must exceed the format precision");
    if (q_growth < 2) throw std::invalid_argument("OracleConfig: q_growth must be >= 2");
    if (q_max < q0) throw std::invalid_argument("OracleConfig: q_max below q_start");
}

namespace {

constexpr double kInf = __builtin_huge_val();

// ---------------------------------------------------------------------------
// Bracket arithmetic: [lo, hi] encloses the exact value, every operation
// rounds outward at w working bits. All rigor in the oracle reduces to these
// few primitives staying outward.

struct BF2 {
    BigFloat lo, hi;
};

BF2 exact(const BigFloat& v) { return {v, v}; }
BF2 exact_d(double v) { return exact(BigFloat::from_double(v)); }

BF2 b_neg(const BF2& a) { return {a.hi.negated(), a.lo.negated()}; }

BF2 b_add(const BF2& a, const BF2& b, unsigned w) {
    return {BigFloat::add(a.lo, b.lo).round_to_bits(w, Direction::Down),
            BigFloat::add(a.hi, b.hi).round_to_bits(w, Direction::Up)};
}

BF2 b_sub(const BF2& a, const BF2& b, unsigned w) { return b_add(a, b_neg(b), w); }

BF2 b_mul(const BF2& a, const BF2& b, unsigned w) {
    const BigFloat p1 = BigFloat::mul(a.lo, b.lo);
    const BigFloat p2 = BigFloat::mul(a.lo, b.hi);
    const BigFloat p3 = BigFloat::mul(a.hi, b.lo);
    const BigFloat p4 = BigFloat::mul(a.hi, b.hi);
    const BigFloat* lo = &p1;
    const BigFloat* hi = &p1;
    for (const BigFloat* p : {&p2, &p3, &p4}) {
        if (BigFloat::cmp(*p, *lo) < 0) lo = p;
        if (BigFloat::cmp(*p, *hi) > 0) hi = p;
    }
    return {lo->round_to_bits(w, Direction::Down), hi->round_to_bits(w, Direction::Up)};
}

BF2 b_mul_pow2(const BF2& a, std::int64_t k) {
    return {a.lo.mul_pow2(k), a.hi.mul_pow2(k)};
}

// Bracket times an exact integer (sign handled by swapping ends).
BF2 b_mul_int(const BF2& a, const BigFloat& k) {
    if (k.is_zero()) return exact(BigFloat{});
    BigFloat p1 = BigFloat::mul(a.lo, k);
    BigFloat p2 = BigFloat::mul(a.hi, k);
    if (k.sign() > 0) return {std::move(p1), std::move(p2)};
    return {std::move(p2), std::move(p1)};
}

BF2 b_div_u32(const BF2& a, std::uint32_t n, unsigned w) {
    const BigFloat d = BigFloat::from_int(static_cast<std::int64_t>(n));
    return {BigFloat::div(a.lo, d, w, Direction::Down),
            BigFloat::div(a.hi, d, w, Direction::Up)};
}

// Full bracket division; the divisor bracket must not straddle zero.
BF2 b_div(const BF2& a, const BF2& b, unsigned w) {
    assert(b.lo.sign() == b.hi.sign() && b.lo.sign() != 0);
    BF2 r;
    bool first = true;
    for (const BigFloat* n : {&a.lo, &a.hi}) {
        for (const BigFloat* d : {&b.lo, &b.hi}) {
            BigFloat qd = BigFloat::div(*n, *d, w, Direction::Down);
            BigFloat qu = BigFloat::div(*n, *d, w, Direction::Up);
            if (first || BigFloat::cmp(qd, r.lo) < 0) r.lo = qd;
            if (first || BigFloat::cmp(qu, r.hi) > 0) r.hi = qu;
            first = false;
        }
    }
    return r;
}

BigFloat bf_abs_max(const BF2& a) {
    const BigFloat l = a.lo.abs(), h = a.hi.abs();
    return BigFloat::cmp(l, h) >= 0 ? l : h;
}

BF2 b_widen(const BF2& a, const BigFloat& eps_abs) {
    return {BigFloat::sub(a.lo, eps_abs), BigFloat::add(a.hi, eps_abs)};
}

bool below_threshold(const BigFloat& v, std::int64_t thr_exp) {
    return v.is_zero() || v.exponent() < thr_exp;
}

// ---------------------------------------------------------------------------
// pi and ln 2 via integer spigots with one-sided floor error accounting.
// Terms are computed as u_k = floor(u_{k-1} / m^2) so each u_k undershoots
// its true value by less than 2 units, giving the rigorous +-T windows below.

struct SpigotSum {
    BigNat value;  // positive by construction
    std::size_t terms;
};

// sum_k (-1)^k 2^Q / ((2k+1) m^(2k+1)), floored termwise.
SpigotSum atan_inv_spigot(std::uint32_t m, unsigned Q) {
    BigNat pos, negs;
    BigNat u;  // floor(2^Q / m^(2k+1))
    {
        std::uint32_t rem = 0;
        u = BigNat::div_u32(BigNat::from_u64(1).shifted_left(Q), m, rem);
    }
    const std::uint64_t m2_64 = static_cast<std::uint64_t>(m) * m;
    assert(m2_64 <= 0xFFFFFFFFull);
    const auto m2 = static_cast<std::uint32_t>(m2_64);
    std::size_t k = 0;
    while (!u.is_zero()) {
        std::uint32_t rem = 0;
        BigNat term = BigNat::div_u32(u, static_cast<std::uint32_t>(2 * k + 1), rem);
        if (k % 2 == 0)
            pos = BigNat::add(pos, term);
        else
            negs = BigNat::add(negs, term);
        u = BigNat::div_u32(u, m2, rem);
        ++k;
    }
    assert(BigNat::cmp(pos, negs) > 0);
    return {BigNat::sub(pos, negs), k};
}

// sum_k 2^Q / ((2k+1) m^(2k+1)), floored termwise (atanh(1/m)).
SpigotSum atanh_inv_spigot(std::uint32_t m, unsigned Q) {
    BigNat acc;
    BigNat u;
    {
        std::uint32_t rem = 0;
        u = BigNat::div_u32(BigNat::from_u64(1).shifted_left(Q), m, rem);
    }
    const auto m2 = static_cast<std::uint32_t>(m * m);
    std::size_t k = 0;
    while (!u.is_zero()) {
        std::uint32_t rem = 0;
        acc = BigNat::add(acc, BigNat::div_u32(u, static_cast<std::uint32_t>(2 * k + 1), rem));
        u = BigNat::div_u32(u, m2, rem);
        ++k;
    }
    return {acc, k};
}

BigFloat nat_times_pow2(const BigNat& n, std::int64_t e) {
    return BigFloat::from_parts(1, n, e);
}

struct ConstCache {
    std::mutex m;
    unsigned bits = 0;
    BF2 val;
};

// pi = 16 atan(1/5) - 4 atan(1/239).
BF2 pi_bracket(unsigned bits) {
    static ConstCache cache;
    std::lock_guard lock(cache.m);
    if (cache.bits >= bits) return cache.val;
    const unsigned Q = bits + 24;
    const SpigotSum a5 = atan_inv_spigot(5, Q);
    const SpigotSum a239 = atan_inv_spigot(239, Q);
    const auto t5 = BigFloat::from_int(static_cast<std::int64_t>(2 * a5.terms + 4));
    const auto t239 = BigFloat::from_int(static_cast<std::int64_t>(2 * a239.terms + 4));
    const BigFloat s5 = nat_times_pow2(a5.value, 0);
    const BigFloat s239 = nat_times_pow2(a239.value, 0);
    const BigFloat lo = BigFloat::sub(BigFloat::sub(s5, t5).mul_pow2(4),
                                      BigFloat::add(s239, t239).mul_pow2(2));
    const BigFloat hi = BigFloat::sub(BigFloat::add(s5, t5).mul_pow2(4),
                                      BigFloat::sub(s239, t239).mul_pow2(2));
    cache.val = {lo.mul_pow2(-static_cast<std::int64_t>(Q)),
                 hi.mul_pow2(-static_cast<std::int64_t>(Q))};
    cache.bits = bits;
    assert(BigFloat::cmp(cache.val.lo, cache.val.hi) <= 0);
    return cache.val;
}

// ln 2 = 2 atanh(1/3).
BF2 ln2_bracket(unsigned bits) {
    static ConstCache cache;
    std::lock_guard lock(cache.m);
    if (cache.bits >= bits) return cache.val;
    const unsigned Q = bits + 24;
    const SpigotSum s = atanh_inv_spigot(3, Q);
    const auto t = BigFloat::from_int(static_cast<std::int64_t>(2 * s.terms + 6));
    const BigFloat sv = nat_times_pow2(s.value, 0);
    cache.val = {sv.mul_pow2(1 - static_cast<std::int64_t>(Q)),
                 BigFloat::add(sv, t).mul_pow2(1 - static_cast<std::int64_t>(Q))};
    cache.bits = bits;
    return cache.val;
}

// ---------------------------------------------------------------------------
// Power series with explicit truncation widening.

// exp over a bracket with |r| <= 0.4: sum r^n / n!.
BF2 series_exp(const BF2& r, unsigned w) {
    BF2 term = exact(BigFloat::from_int(1));
    BF2 acc = term;
    const std::int64_t thr = -static_cast<std::int64_t>(w) - 2;
    for (std::uint32_t n = 1; n < 100000; ++n) {
        term = b_div_u32(b_mul(term, r, w), n, w);
        acc = b_add(acc, term, w);
        const BigFloat t = bf_abs_max(term);
        if (below_threshold(t, thr)) {
            // Remaining tail is dominated by a geometric series with ratio
            // |r|/(n+1) < 1/2, so it is below |term|.
            return b_widen(acc, t);
        }
    }
    throw PrecisionExhaustedError("exp series failed to converge");
}

// sin over a bracket with |r| <= 0.9.
BF2 series_sin(const BF2& r, unsigned w) {
    const BF2 r2 = b_mul(r, r, w);
    BF2 term = r;
    BF2 acc = r;
    const std::int64_t thr = -static_cast<std::int64_t>(w) - 2;
    for (std::uint32_t n = 1; n < 100000; ++n) {
        term = b_div_u32(b_mul(term, r2, w), (2 * n) * (2 * n + 1), w);
        term = b_neg(term);
        acc = b_add(acc, term, w);
        const BigFloat t = bf_abs_max(term);
        if (below_threshold(t, thr)) return b_widen(acc, t);
    }
    throw PrecisionExhaustedError("sin series failed to converge");
}

BF2 series_cos(const BF2& r, unsigned w) {
    const BF2 r2 = b_mul(r, r, w);
    BF2 term = exact(BigFloat::from_int(1));
    BF2 acc = term;
    const std::int64_t thr = -static_cast<std::int64_t>(w) - 2;
    for (std::uint32_t n = 1; n < 100000; ++n) {
        term = b_div_u32(b_mul(term, r2, w), (2 * n - 1) * (2 * n), w);
        term = b_neg(term);
        acc = b_add(acc, term, w);
        const BigFloat t = bf_abs_max(term);
        if (below_threshold(t, thr)) return b_widen(acc, t);
    }
    throw PrecisionExhaustedError("cos series failed to converge");
}

// atanh over a bracket with |y| < 0.36: sum y^(2j+1) / (2j+1).
BF2 series_atanh(const BF2& y, unsigned w) {
    const BF2 y2 = b_mul(y, y, w);
    BF2 pow = y;
    BF2 acc = y;
    const std::int64_t thr = -static_cast<std::int64_t>(w) - 2;
    for (std::uint32_t j = 1; j < 100000; ++j) {
        pow = b_mul(pow, y2, w);
        const BF2 term = b_div_u32(pow, 2 * j + 1, w);
        acc = b_add(acc, term, w);
        const BigFloat t = bf_abs_max(term);
        // Tail ratio y^2 < 0.13, so the tail is below term / 4; one term of
        // widening is comfortably enough.
        if (below_threshold(t, thr)) return b_widen(acc, t);
    }
    throw PrecisionExhaustedError("atanh series failed to converge");
}

// ---------------------------------------------------------------------------
// Point evaluations.

BF2 exp_point(double v, unsigned q) {
    if (v == 0.0) return exact(BigFloat::from_int(1));
    if (std::abs(v) > 4.0e18) {
        // Result exponent would not fit the software float; return a coarse
        // but valid saturating bracket.
        if (v > 0)
            return {BigFloat::from_parts(1, BigNat::from_u64(1), 4600),
                    BigFloat::infinity(1)};
        return {BigFloat{}, BigFloat::from_parts(1, BigNat::from_u64(1), -4600)};
    }
    const unsigned w = q + 24;
    const auto k = static_cast<std::int64_t>(std::llround(v * 1.4426950408889634));
    const unsigned ln2_bits = w + 70;  // absorbs |k| up to 2^63 in k*ln2
    const BF2 kln2 = b_mul_int(ln2_bracket(ln2_bits), BigFloat::from_int(k));
    const BF2 r = b_sub(exact_d(v), kln2, ln2_bits);
    return b_mul_pow2(series_exp(r, w), k);
}

BF2 sin_point(double v, unsigned q, unsigned pi_guard) {
    if (v == 0.0) return exact(BigFloat{});
    const int ev = std::ilogb(std::abs(v));
    const unsigned w = q + static_cast<unsigned>(std::max(0, ev)) + pi_guard + 8;
    const BF2 pi2 = b_mul_pow2(pi_bracket(w + 8), -1);
    // The reduction count k needs |exponent of u| + slack quotient bits, or
    // huge arguments land on a wildly wrong period.
    const unsigned u_bits = static_cast<unsigned>(std::max(0, ev)) + 16;
    const BigFloat u =
        BigFloat::div(BigFloat::from_double(v), pi2.lo, u_bits, Direction::Down);
    const BigFloat k = BigFloat::round_nearest_int(u);
    const BF2 r = b_sub(exact_d(v), b_mul_int(pi2, k), w);
    switch (BigFloat::mod4(k)) {
        case 0: return series_sin(r, w);
        case 1: return series_cos(r, w);
        case 2: return b_neg(series_sin(r, w));
        default: return b_neg(series_cos(r, w));
    }
}

// ln over a positive bracket; evaluated per end since ln is increasing.
BF2 ln_point(const BigFloat& y, unsigned w) {
    assert(y.sign() > 0 && y.is_finite());
    const std::int64_t t = y.exponent();
    const BigFloat m = y.mul_pow2(-t);  // in [1, 2)
    const BigFloat num = BigFloat::sub(m, BigFloat::from_int(1));
    const BigFloat den = BigFloat::add(m, BigFloat::from_int(1));
    BF2 yb;
    if (num.is_zero()) {
        yb = exact(BigFloat{});
    } else {
        yb = {BigFloat::div(num, den, w + 4, Direction::Down),
              BigFloat::div(num, den, w + 4, Direction::Up)};
    }
    const BF2 lnm = b_mul_pow2(series_atanh(yb, w), 1);
    if (t == 0) return lnm;
    return b_add(b_mul_int(ln2_bracket(w + 16), BigFloat::from_int(t)), lnm, w);
}

BF2 ln_bracket_eval(const BF2& z, unsigned w) {
    return {ln_point(z.lo, w).lo, ln_point(z.hi, w).hi};
}

BF2 atanh_point(double v, unsigned q) {
    assert(std::abs(v) < 1.0);
    if (v == 0.0) return exact(BigFloat{});
    const double a = std::abs(v);
    const unsigned w =
        q + 24 + static_cast<unsigned>(std::max(0, -std::ilogb(a)));
    const BigFloat one = BigFloat::from_int(1);
    const BigFloat av = BigFloat::from_double(a);
    const BigFloat num = BigFloat::add(one, av);  // exact
    const BigFloat den = BigFloat::sub(one, av);  // exact, positive
    const BF2 z = {BigFloat::div(num, den, w, Direction::Down),
                   BigFloat::div(num, den, w, Direction::Up)};
    BF2 r = b_mul_pow2(ln_bracket_eval(z, w), -1);
    if (v < 0) r = b_neg(r);
    return r;
}

// cbrt and sqrt reduce to integer roots with exact remainders.
BF2 cbrt_point(double v, unsigned q) {
    if (v == 0.0) return exact(BigFloat{});
    const BigFloat b = BigFloat::from_double(std::abs(v));
    std::int64_t e = b.raw_exp();
    BigNat m = b.mantissa();
    const auto delta = static_cast<std::size_t>(((e % 3) + 3) % 3);
    m = m.shifted_left(delta);
    e -= static_cast<std::int64_t>(delta);
    const std::size_t t = q + 2;
    m = m.shifted_left(3 * t);
    bool exact_root = false;
    BigNat r = BigNat::icbrt(m, exact_root);
    const std::int64_t re = e / 3 - static_cast<std::int64_t>(t);
    BigFloat lo = BigFloat::from_parts(1, r, re);
    BigFloat hi;
    if (exact_root) {
        hi = lo;
    } else {
        r.inc();
        hi = BigFloat::from_parts(1, r, re);
    }
    if (v < 0) return {hi.negated(), lo.negated()};
    return {lo, hi};
}

BF2 sqrt_point(double v, unsigned q) {
    assert(v >= 0);
    if (v == 0.0) return exact(BigFloat{});
    const BigFloat b = BigFloat::from_double(v);
    std::int64_t e = b.raw_exp();
    BigNat m = b.mantissa();
    if (e % 2 != 0) {
        m = m.shifted_left(1);
        e -= 1;
    }
    const std::size_t t = q + 2;
    m = m.shifted_left(2 * t);
    bool exact_root = false;
    BigNat r = BigNat::isqrt(m, exact_root);
    const std::int64_t re = e / 2 - static_cast<std::int64_t>(t);
    BigFloat lo = BigFloat::from_parts(1, r, re);
    BigFloat hi;
    if (exact_root) {
        hi = lo;
    } else {
        r.inc();
        hi = BigFloat::from_parts(1, r, re);
    }
    return {lo, hi};
}

HPBound make_hp(BF2 b, unsigned q) {
    assert(BigFloat::cmp(b.lo, b.hi) <= 0);
    return HPBound{std::move(b.lo), std::move(b.hi), q};
}

} // namespace

HPBound point_enclosure(Fn f, std::span<const double> xs, unsigned q) {
    const FnInfo& info = fn_info(f);
    if (xs.size() != static_cast<std::size_t>(info.arity))
        throw std::invalid_argument("point_enclosure: arity mismatch");
    if (q < 8) q = 8;
    for (double v : xs) {
        if (std::isnan(v)) throw std::invalid_argument("point_enclosure: NaN");
    }
    const auto bf = [](double v) { return BigFloat::from_double(v); };
    switch (f) {
        case Fn::Neg:
            return make_hp(exact(bf(xs[0]).negated()), q);
        case Fn::Add:
            return make_hp(exact(BigFloat::add(bf(xs[0]), bf(xs[1]))), q);
        case Fn::Sub:
            return make_hp(exact(BigFloat::sub(bf(xs[0]), bf(xs[1]))), q);
        case Fn::Mul:
            return make_hp(exact(BigFloat::mul(bf(xs[0]), bf(xs[1]))), q);
        case Fn::Sqr:
            return make_hp(exact(BigFloat::mul(bf(xs[0]), bf(xs[0]))), q);
        case Fn::Fma:
            return make_hp(
                exact(BigFloat::add(BigFloat::mul(bf(xs[0]), bf(xs[1])), bf(xs[2]))), q);
        case Fn::Div: {
            if (xs[1] == 0) throw DomainError("division by zero point");
            const BigFloat a = bf(xs[0]), b = bf(xs[1]);
            return make_hp({BigFloat::div(a, b, q + 2, Direction::Down),
                            BigFloat::div(a, b, q + 2, Direction::Up)},
                           q);
        }
        case Fn::Recip: {
            if (xs[0] == 0) throw DomainError("recip of zero");
            const BigFloat one = BigFloat::from_int(1), b = bf(xs[0]);
            return make_hp({BigFloat::div(one, b, q + 2, Direction::Down),
                            BigFloat::div(one, b, q + 2, Direction::Up)},
                           q);
        }
        case Fn::Sqrt:
            if (xs[0] < 0) throw DomainError("sqrt of negative point");
            return make_hp(sqrt_point(xs[0], q), q);
        case Fn::Cbrt:
            return make_hp(cbrt_point(xs[0], q), q);
        case Fn::Exp:
            return make_hp(exp_point(xs[0], q), q);
        case Fn::Sin:
            return make_hp(sin_point(xs[0], q, 32), q);
        case Fn::Atanh: {
            const double v = xs[0];
            if (std::abs(v) > 1) throw DomainError("atanh outside [-1, 1]");
            if (v == 1.0) return make_hp(exact(BigFloat::infinity(1)), q);
            if (v == -1.0) return make_hp(exact(BigFloat::infinity(-1)), q);
            return make_hp(atanh_point(v, q), q);
        }
    }
    throw std::invalid_argument("point_enclosure: unknown function");
}

HPBound point_enclosure(Fn f, double x, unsigned q) {
    return point_enclosure(f, std::span<const double>(&x, 1), q);
}

// ---------------------------------------------------------------------------
// Hull machinery.

namespace {

void note_stats(const OracleConfig& cfg, unsigned q) {
    if (cfg.stats) cfg.stats->note(q);
}

template <typename Body>
auto adaptive(const Format& fmt, const OracleConfig& cfg, Body&& body) {
    unsigned q = cfg.resolved_q_start(fmt);
    for (;;) {
        auto r = body(q);
        if (r) return *r;
        if (q >= cfg.q_max)
            throw PrecisionExhaustedError("adaptive loop hit q_max = " +
                                          std::to_string(cfg.q_max));
        const std::uint64_t nq = static_cast<std::uint64_t>(q) * cfg.q_growth;
        q = static_cast<unsigned>(std::min<std::uint64_t>(nq, cfg.q_max));
    }
}

double exp_overflow_cut(const Format& fmt) {
    // exp(cut) provably exceeds max_finite: 710 > ln(2^1024), 89 > ln(2^128).
    return fmt.kind == FormatKind::Binary64 ? 710.0 : 89.0;
}
double exp_underflow_cut(const Format& fmt) {
    // exp(cut) provably sits below min_subnormal.
    return fmt.kind == FormatKind::Binary64 ? -745.0 : -104.0;
}

// Directed image of one endpoint under a monotone increasing f.
double hull_endpoint(Fn f, double v, const Format& fmt, Direction dir,
                     const OracleConfig& cfg) {
    if (std::isinf(v)) {
        switch (f) {
            case Fn::Exp: return v > 0 ? kInf : 0.0;
            case Fn::Cbrt: return v;
            case Fn::Sqrt: return v;  // only +inf reaches here
            default: assert(false && "unexpected infinite endpoint"); return v;
        }
    }
    if (f == Fn::Exp) {
        if (v >= exp_overflow_cut(fmt))
            return dir == Direction::Up ? kInf : fmt.max_finite;
        if (v <= exp_underflow_cut(fmt))
            return dir == Direction::Up ? fmt.min_subnormal : 0.0;
    }
    if (f == Fn::Atanh) {
        if (v == 1.0) return kInf;
        if (v == -1.0) return -kInf;
    }
    return adaptive(fmt, cfg, [&](unsigned q) -> std::optional<double> {
        const HPBound hb = point_enclosure(f, v, q);
        note_stats(cfg, q);
        const double dl = round_to_format(hb.lo, fmt, dir);
        const double dh = round_to_format(hb.hi, fmt, dir);
        if (dl == dh) return dl;
        return std::nullopt;
    });
}

Interval hull_monotone(Fn f, const Interval& x, const OracleConfig& cfg) {
    return Interval::make(hull_endpoint(f, x.inf(), x.format(), Direction::Down, cfg),
                          hull_endpoint(f, x.sup(), x.format(), Direction::Up, cfg),
                          x.format());
}

// Clip to the function's natural domain, honoring open bounds: a clipped
// degenerate point sitting on an open bound is outside the domain.
std::optional<Interval> clip_domain(Fn f, const Interval& x) {
    const RealSet& dom = fn_info(f).domain;
    if (dom.is_reals()) return x;
    const Format& fmt = x.format();
    const Interval domain_iv = Interval::make(dom.lo, dom.hi, fmt);
    const Interval c = x.intersect(domain_iv);
    if (c.is_empty()) return std::nullopt;
    if (c.is_point()) {
        if ((dom.lo_open && c.inf() == dom.lo) || (dom.hi_open && c.sup() == dom.hi))
            return std::nullopt;
    }
    return c;
}

Interval hull_sin(const Interval& x, const OracleConfig& cfg) {
    const Format& fmt = x.format();
    if (!x.bounded()) return Interval::make(-1.0, 1.0, fmt);
    const SinScan scan = sin_extrema_scan(x, cfg);
    const double a = x.inf(), b = x.sup();
    double hi;
    if (scan.contains_max) {
        hi = 1.0;
    } else {
        hi = adaptive(fmt, cfg, [&](unsigned q) -> std::optional<double> {
            const BF2 ba = sin_point(a, q, cfg.pi_guard);
            const BF2 bb = sin_point(b, q, cfg.pi_guard);
            note_stats(cfg, q);
            const BigFloat& lo =
                BigFloat::cmp(ba.lo, bb.lo) >= 0 ? ba.lo : bb.lo;
            const BigFloat& hi2 =
                BigFloat::cmp(ba.hi, bb.hi) >= 0 ? ba.hi : bb.hi;
            const double du = round_to_format(lo, fmt, Direction::Up);
            const double dv = round_to_format(hi2, fmt, Direction::Up);
            if (du == dv) return du;
            return std::nullopt;
        });
    }
    double lo;
    if (scan.contains_min) {
        lo = -1.0;
    } else {
        lo = adaptive(fmt, cfg, [&](unsigned q) -> std::optional<double> {
            const BF2 ba = sin_point(a, q, cfg.pi_guard);
            const BF2 bb = sin_point(b, q, cfg.pi_guard);
            note_stats(cfg, q);
            const BigFloat& lo2 =
                BigFloat::cmp(ba.lo, bb.lo) <= 0 ? ba.lo : bb.lo;
            const BigFloat& hi2 =
                BigFloat::cmp(ba.hi, bb.hi) <= 0 ? ba.hi : bb.hi;
            const double du = round_to_format(lo2, fmt, Direction::Down);
            const double dv = round_to_format(hi2, fmt, Direction::Down);
            if (du == dv) return du;
            return std::nullopt;
        });
    }
    return Interval::make(lo, hi, fmt);
}

// ---------------------------------------------------------------------------
// Basic operations: endpoints are exact software-float values (or directed
// divisions with exact sticky information), so no adaptive loop is needed.
// This is deliberately a different computational route from the kernel's
// error-free-transformation endpoints.

struct XR {
    // Extended real: finite BigFloat or a signed infinity.
    BigFloat v;
    static XR of(double d) { return {BigFloat::from_double(d)}; }
    bool inf() const { return v.is_inf(); }
    int sgn() const { return v.sign(); }
};

XR xr_mul(const XR& a, const XR& b) {
    if (a.v.is_zero() || b.v.is_zero()) return {BigFloat{}};  // 0 * inf = 0
    return {BigFloat::mul(a.v, b.v)};
}

double dir_round(const BigFloat& v, const Format& fmt, Direction dir) {
    return round_to_format(v, fmt, dir);
}

Interval hull_add(const Interval& x, const Interval& y, bool subtract) {
    const Format& fmt = x.format();
    const Interval& yy = subtract ? neg(y) : y;
    const BigFloat lo =
        BigFloat::add(XR::of(x.inf()).v, XR::of(yy.inf()).v);
    const BigFloat hi =
        BigFloat::add(XR::of(x.sup()).v, XR::of(yy.sup()).v);
    return Interval::make(dir_round(lo, fmt, Direction::Down),
                          dir_round(hi, fmt, Direction::Up), fmt);
}

Interval hull_mul(const Interval& x, const Interval& y) {
    const Format& fmt = x.format();
    const XR xs[2] = {XR::of(x.inf()), XR::of(x.sup())};
    const XR ys[2] = {XR::of(y.inf()), XR::of(y.sup())};
    BigFloat lo, hi;
    bool first = true;
    for (const XR& u : xs) {
        for (const XR& v : ys) {
            BigFloat p = xr_mul(u, v).v;
            if (first || BigFloat::cmp(p, lo) < 0) lo = p;
            if (first || BigFloat::cmp(p, hi) > 0) {
                hi = p;
            }
            first = false;
        }
    }
    return Interval::make(dir_round(lo, fmt, Direction::Down),
                          dir_round(hi, fmt, Direction::Up), fmt);
}

Interval hull_sqr(const Interval& x) {
    const Format& fmt = x.format();
    const XR a = XR::of(x.inf()), b = XR::of(x.sup());
    const BigFloat p1 = xr_mul(a, a).v, p2 = xr_mul(b, b).v;
    const BigFloat hi = BigFloat::cmp(p1, p2) >= 0 ? p1 : p2;
    BigFloat lo;
    if (!(x.inf() <= 0 && 0 <= x.sup()))
        lo = BigFloat::cmp(p1, p2) <= 0 ? p1 : p2;
    return Interval::make(dir_round(lo, fmt, Direction::Down),
                          dir_round(hi, fmt, Direction::Up), fmt);
}

Interval hull_fma(const Interval& x, const Interval& y, const Interval& z) {
    const Format& fmt = x.format();
    const XR xs[2] = {XR::of(x.inf()), XR::of(x.sup())};
    const XR ys[2] = {XR::of(y.inf()), XR::of(y.sup())};
    BigFloat plo, phi;
    bool first = true;
    for (const XR& u : xs) {
        for (const XR& v : ys) {
            BigFloat p = xr_mul(u, v).v;
            if (first || BigFloat::cmp(p, plo) < 0) plo = p;
            if (first || BigFloat::cmp(p, phi) > 0) phi = p;
            first = false;
        }
    }
    const BigFloat zl = BigFloat::from_double(z.inf());
    const BigFloat zh = BigFloat::from_double(z.sup());
    // Conflicting infinities cannot arise: plo pairs with zl (never +inf)
    // and phi with zh (never -inf), and a -inf plo or +inf phi dominates.
    BigFloat lo = (plo.is_inf() && plo.sign() < 0) || (zl.is_inf())
                      ? (plo.is_inf() ? plo : zl)
                      : BigFloat::add(plo, zl);
    BigFloat hi = (phi.is_inf() && phi.sign() > 0) || (zh.is_inf())
                      ? (phi.is_inf() ? phi : zh)
                      : BigFloat::add(phi, zh);
    const Format& f2 = fmt;
    return Interval::make(dir_round(lo, f2, Direction::Down),
                          dir_round(hi, f2, Direction::Up), f2);
}

// Directed division endpoint: round_to_format of a q-bit directed quotient
// composes exactly because the roundings share a direction and the grids nest.
double div_endpoint(double u, double v, const Format& fmt, Direction dir) {
    if (u == 0) return 0.0;
    if (std::isinf(u)) return u;
    if (std::isinf(v)) return 0.0;
    if (v == 0) return u > 0 ? kInf : -kInf;  // divisor class boundary
    const BigFloat q = BigFloat::div(BigFloat::from_double(u), BigFloat::from_double(v),
                                     static_cast<unsigned>(fmt.precision) + 8, dir);
    return dir_round(q, fmt, dir);
}

Interval hull_div(const Interval& x, const Interval& y) {
    const Format& fmt = x.format();
    if (y.inf() == 0 && y.sup() == 0) return Interval::empty(fmt);
    if (y.inf() < 0 && y.sup() > 0) {
        if (x.inf() == 0 && x.sup() == 0) return Interval::point(0.0, fmt);
        return Interval::entire(fmt);
    }
    if (y.sup() <= 0) return neg(hull_div(x, neg(y)));  // x/y = -(x/(-y))
    const double a = x.inf(), b = x.sup();
    const double c = y.inf(), d = y.sup();
    const double lo = a >= 0 ? div_endpoint(a, d, fmt, Direction::Down)
                             : div_endpoint(a, c, fmt, Direction::Down);
    const double hi = b <= 0 ? div_endpoint(b, d, fmt, Direction::Up)
                             : div_endpoint(b, c, fmt, Direction::Up);
    return Interval::make(lo, hi, fmt);
}

} // namespace

SinScan sin_extrema_scan(const Interval& x, const OracleConfig& cfg) {
    SinScan out;
    if (x.is_empty()) return out;
    const Format& fmt = x.format();
    cfg.validate(fmt);
    if (!x.bounded()) {
        out.contains_max = out.contains_min = true;
        if (std::isfinite(x.inf())) out.piece_endpoints.push_back(x.inf());
        if (std::isfinite(x.sup())) out.piece_endpoints.push_back(x.sup());
        return out;
    }
    const double a = x.inf(), b = x.sup();
    out.piece_endpoints = {a, b};
    const int emax_in = std::max(a == 0 ? 0 : std::ilogb(std::abs(a)),
                                 b == 0 ? 0 : std::ilogb(std::abs(b)));

    // Integer floor of a bracket, when both ends agree.
    const auto settled_floor = [](const BF2& t) -> std::optional<BigFloat> {
        const BigFloat f1 = BigFloat::floor(t.lo);
        const BigFloat f2 = BigFloat::floor(t.hi);
        if (BigFloat::cmp(f1, f2) == 0) return f1;
        return std::nullopt;
    };

    return adaptive(fmt, cfg, [&](unsigned q) -> std::optional<SinScan> {
        const unsigned w =
            q + static_cast<unsigned>(std::max(0, emax_in)) + cfg.pi_guard + 8;
        note_stats(cfg, q);
        const BF2 pi = pi_bracket(w);
        const BF2 two_pi = b_mul_pow2(pi, 1);
        const BF2 half_pi = b_mul_pow2(pi, -1);

        // Maxima at pi/2 + 2k pi, minima at -pi/2 + 2k pi.
        const auto count_window = [&](double v, bool maxima) -> BF2 {
            const BF2 shift = maxima ? half_pi : b_neg(half_pi);
            return b_div(b_sub(exact_d(v), shift, w), two_pi, w);
        };
        const auto fa_max = settled_floor(count_window(a, true));
        const auto fb_max = settled_floor(count_window(b, true));
        const auto fa_min = settled_floor(count_window(a, false));
        const auto fb_min = settled_floor(count_window(b, false));
        if (!fa_max || !fb_max || !fa_min || !fb_min) return std::nullopt;
        SinScan r = out;
        r.contains_max = BigFloat::cmp(*fa_max, *fb_max) < 0;
        r.contains_min = BigFloat::cmp(*fa_min, *fb_min) < 0;
        if (!r.contains_max && !r.contains_min) {
            // Monotone: direction from the parity of the critical-point
            // index below a (sin decreases on (pi/2 + 2k pi, 3pi/2 + 2k pi)).
            const BF2 idx = b_div(b_sub(exact_d(a), half_pi, w), pi, w);
            const auto fi = settled_floor(idx);
            if (!fi) return std::nullopt;
            const bool odd = fi->is_zero() ? false : (fi->raw_exp() == 0);
            r.increasing = odd;
        }
        return r;
    });
}

Interval tightest_hull(Fn f, std::span<const Interval> args, const OracleConfig& cfg) {
    const FnInfo& info = fn_info(f);
    if (args.size() != static_cast<std::size_t>(info.arity))
        throw std::invalid_argument("tightest_hull: arity mismatch");
    const Format& fmt = args[0].format();
    cfg.validate(fmt);
    for (const Interval& a : args) {
        if (a.is_empty()) return Interval::empty(fmt);
        if (a.format() != fmt)
            throw std::invalid_argument("tightest_hull: mixed formats");
    }
    switch (f) {
        case Fn::Neg: return neg(args[0]);
        case Fn::Add: return hull_add(args[0], args[1], false);
        case Fn::Sub: return hull_add(args[0], args[1], true);
        case Fn::Mul: return hull_mul(args[0], args[1]);
        case Fn::Div: return hull_div(args[0], args[1]);
        case Fn::Recip: return hull_div(Interval::point(1.0, fmt), args[0]);
        case Fn::Sqr: return hull_sqr(args[0]);
        case Fn::Fma: return hull_fma(args[0], args[1], args[2]);
        case Fn::Sqrt:
        case Fn::Cbrt:
        case Fn::Exp:
        case Fn::Atanh: {
            const auto clipped = clip_domain(f, args[0]);
            if (!clipped) return Interval::empty(fmt);
            return hull_monotone(f, *clipped, cfg);
        }
        case Fn::Sin:
            return hull_sin(args[0], cfg);
    }
    throw std::invalid_argument("tightest_hull: unknown function");
}

Interval tightest_hull(Fn f, const Interval& x, const OracleConfig& cfg) {
    return tightest_hull(f, std::span<const Interval>(&x, 1), cfg);
}

Interval accurate_envelope(Fn f, std::span<const Interval> args,
                           const OracleConfig& cfg) {
    std::vector<Interval> widened;
    widened.reserve(args.size());
    for (const Interval& a : args) widened.push_back(next_out(a));
    return next_out(tightest_hull(f, widened, cfg));
}

Interval accurate_envelope(Fn f, const Interval& x, const OracleConfig& cfg) {
    return accurate_envelope(f, std::span<const Interval>(&x, 1), cfg);
}

namespace detail {

HPBound pi_enclosure(unsigned bits) {
    BF2 p = pi_bracket(bits);
    return HPBound{std::move(p.lo), std::move(p.hi), bits};
}

} // namespace detail

} // namespace ivalkit
