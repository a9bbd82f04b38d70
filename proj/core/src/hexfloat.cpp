#include "ivalkit/hexfloat.hpp"

#include <cassert>
#include <cctype>
#include <cmath>
#include <cstdlib>

#include "ivalkit/bigfloat.hpp"
#include "ivalkit/errors.hpp"
#include "ivalkit/rounding.hpp"

namespace ivalkit {

using detail::BigNat;

std::string format_hex(double v, const Format& fmt) {
    (void)fmt;
    assert(representable_in(v, fmt));
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0) return "0x0p+0";
    std::string out = v < 0 ? "-0x1" : "0x1";
    const BigFloat b = BigFloat::from_double(std::fabs(v));
    const std::int64_t e = b.exponent();
    // Fraction bits below the leading 1, most significant first.
    const BigNat& m = b.mantissa();
    const std::size_t nbits = m.bit_length();
    std::string nibbles;
    for (std::size_t pos = 1; pos < nbits; pos += 4) {
        unsigned nib = 0;
        for (unsigned k = 0; k < 4; ++k) {
            const std::size_t idx = pos + k;
            nib <<= 1;
            if (idx < nbits && m.bit(nbits - 1 - idx)) nib |= 1u;
        }
        nibbles.push_back("0123456789abcdef"[nib]);
    }
    while (!nibbles.empty() && nibbles.back() == '0') nibbles.pop_back();
    if (!nibbles.empty()) {
        out.push_back('.');
        out += nibbles;
    }
    out.push_back('p');
    if (e >= 0) out.push_back('+');
    out += std::to_string(e);
    return out;
}

namespace {

bool parse_hex_raw(std::string_view s, BigFloat& out, std::string* error) {
    const auto fail = [&](const char* why) {
        if (error) *error = why;
        return false;
    };
    std::size_t i = 0;
    int sign = 1;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        if (s[i] == '-') sign = -1;
        ++i;
    }
    if (s.substr(i) == "inf") {
        out = BigFloat::infinity(sign);
        return true;
    }
    if (i + 1 >= s.size() || s[i] != '0' || (s[i + 1] != 'x' && s[i + 1] != 'X'))
        return fail("expected 0x prefix or inf");
    i += 2;
    BigNat mant;
    std::int64_t frac_nibbles = 0;
    bool seen_point = false, seen_digit = false;
    for (; i < s.size(); ++i) {
        const char c = s[i];
        if (c == '.') {
            if (seen_point) return fail("duplicate point");
            seen_point = true;
            continue;
        }
        const int d = std::isdigit(static_cast<unsigned char>(c)) ? c - '0'
                      : (c >= 'a' && c <= 'f')                    ? c - 'a' + 10
                      : (c >= 'A' && c <= 'F')                    ? c - 'A' + 10
                                                                  : -1;
        if (d < 0) break;
        seen_digit = true;
        mant = BigNat::add(mant.shifted_left(4), BigNat::from_u64(static_cast<std::uint64_t>(d)));
        if (seen_point) ++frac_nibbles;
    }
    if (!seen_digit) return fail("no hex digits");
    if (i >= s.size() || (s[i] != 'p' && s[i] != 'P')) return fail("missing p exponent");
    ++i;
    std::int64_t esign = 1, evalue = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        if (s[i] == '-') esign = -1;
        ++i;
    }
    if (i >= s.size()) return fail("missing exponent digits");
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return fail("bad exponent digit");
        evalue = evalue * 10 + (s[i] - '0');
        if (evalue > (1ll << 40)) return fail("exponent out of range");
    }
    out = BigFloat::from_parts(sign, std::move(mant), esign * evalue - 4 * frac_nibbles);
    return true;
}

} // namespace

std::optional<double> parse_hex(std::string_view text, const Format& fmt,
                                std::string* error) {
    BigFloat v;
    if (!parse_hex_raw(text, v, error)) return std::nullopt;
    const double lo = round_to_format(v, fmt, Direction::Down);
    const double hi = round_to_format(v, fmt, Direction::Up);
    if (lo != hi) {
        if (error) *error = "value not exactly representable in " + std::string(fmt.name());
        return std::nullopt;
    }
    return lo;
}

std::string format_interval_hex(const Interval& iv) {
    if (iv.is_empty()) return "[empty]";
    if (iv.is_entire()) return "[entire]";
    return "[" + format_hex(iv.inf(), iv.format()) + "," +
           format_hex(iv.sup(), iv.format()) + "]";
}

std::optional<Interval> parse_interval_hex(std::string_view text, const Format& fmt,
                                           std::string* error) {
    const auto fail = [&](const std::string& why) {
        if (error) *error = why;
        return std::nullopt;
    };
    if (text.size() < 2 || text.front() != '[' || text.back() != ']')
        return fail("interval must be bracketed");
    const std::string_view body = text.substr(1, text.size() - 2);
    if (body == "empty") return Interval::empty(fmt);
    if (body == "entire") return Interval::entire(fmt);
    const std::size_t comma = body.find(',');
    if (comma == std::string_view::npos) return fail("missing comma");
    std::string err;
    const auto lo = parse_hex(body.substr(0, comma), fmt, &err);
    if (!lo) return fail("bad inf endpoint: " + err);
    const auto hi = parse_hex(body.substr(comma + 1), fmt, &err);
    if (!hi) return fail("bad sup endpoint: " + err);
    try {
        return Interval::make(*lo, *hi, fmt);
    } catch (const InvalidIntervalError& e) {
        return fail(e.what());
    }
}

namespace {

BigNat pow5(std::int64_t k) {
    assert(k >= 0);
    BigNat r = BigNat::from_u64(1);
    // 5^13 is the largest power fitting a 32-bit limb multiply.
    while (k >= 13) {
        r = BigNat::mul(r, BigNat::from_u64(1220703125ull));
        k -= 13;
    }
    std::uint64_t small = 1;
    for (; k > 0; --k) small *= 5;
    if (small > 1) r = BigNat::mul(r, BigNat::from_u64(small));
    return r;
}

} // namespace

std::string format_decimal_away(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0) return "0.0000000000000000e0";
    const std::string sign = v < 0 ? "-" : "";
    const BigFloat b = BigFloat::from_double(std::fabs(v));
    const std::int64_t e = b.raw_exp();
    // |v| * 10^k is an integer for k = max(0, -e): decimal expansions of
    // binary floats are finite.
    BigNat digits_int;
    std::int64_t dec_shift;  // value = digits_int * 10^(-dec_shift)
    if (e >= 0) {
        digits_int = b.mantissa().shifted_left(static_cast<std::size_t>(e));
        dec_shift = 0;
    } else {
        digits_int = BigNat::mul(b.mantissa(), pow5(-e));
        dec_shift = -e;
    }
    std::string digits = digits_int.to_decimal();
    std::int64_t dec_exp = static_cast<std::int64_t>(digits.size()) - 1 - dec_shift;
    constexpr std::size_t kSig = 17;
    std::string head;
    if (digits.size() <= kSig) {
        head = digits + std::string(kSig - digits.size(), '0');
    } else {
        head = digits.substr(0, kSig);
        const bool rest_nonzero =
            digits.find_first_not_of('0', kSig) != std::string::npos;
        if (rest_nonzero) {
            // Round away from zero: increment the 17-digit prefix.
            int i = static_cast<int>(kSig) - 1;
            for (; i >= 0; --i) {
                if (head[static_cast<std::size_t>(i)] != '9') {
                    ++head[static_cast<std::size_t>(i)];
                    break;
                }
                head[static_cast<std::size_t>(i)] = '0';
            }
            if (i < 0) {
                head = "1" + std::string(kSig - 1, '0');
                ++dec_exp;
            }
        }
    }
    std::string out = sign;
    out += head[0];
    out += '.';
    out += head.substr(1);
    out += 'e';
    out += std::to_string(dec_exp);
    return out;
}

std::string format_interval_decimal(const Interval& iv) {
    if (iv.is_empty()) return "[empty]";
    return "[" + format_decimal_away(iv.inf()) + "," +
           format_decimal_away(iv.sup()) + "]";
}

} // namespace ivalkit
