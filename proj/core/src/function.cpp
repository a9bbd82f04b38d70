#include "ivalkit/function.hpp"

#include <cmath>

namespace ivalkit {

namespace {

constexpr double kInf = __builtin_huge_val();

constexpr RealSet reals{-kInf, kInf};
constexpr RealSet nonneg{0.0, kInf};
constexpr RealSet positive{0.0, kInf, /*lo_open=*/true};
constexpr RealSet unit_open{-1.0, 1.0, /*lo_open=*/true, /*hi_open=*/true};
constexpr RealSet unit_closed{-1.0, 1.0};

constexpr FnInfo kTable[] = {
    {Fn::Neg, "neg", 1, reals, reals, true},
    {Fn::Add, "add", 2, reals, reals, false},
    {Fn::Sub, "sub", 2, reals, reals, false},
    {Fn::Mul, "mul", 2, reals, reals, false},
    {Fn::Div, "div", 2, reals, reals, false},
    // recip's range omits 0, whose closure adds it back; no warning value.
    {Fn::Recip, "recip", 1, reals, reals, false},
    {Fn::Sqrt, "sqrt", 1, nonneg, nonneg, true},
    {Fn::Sqr, "sqr", 1, reals, nonneg, false},
    {Fn::Fma, "fma", 3, reals, reals, false},
    {Fn::Cbrt, "cbrt", 1, reals, reals, true},
    {Fn::Exp, "exp", 1, reals, positive, true},
    {Fn::Sin, "sin", 1, reals, unit_closed, false},
    {Fn::Atanh, "atanh", 1, unit_open, reals, true},
};

} // namespace

const FnInfo& fn_info(Fn f) {
    return kTable[static_cast<std::size_t>(f)];
}

const char* fn_name(Fn f) { return fn_info(f).name; }

std::optional<Fn> parse_fn(std::string_view token) {
    for (const auto& e : kTable) {
        if (token == e.name) return e.id;
    }
    return std::nullopt;
}

} // namespace ivalkit
