#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace ivalkit {

/// The thirteen interval operations the kernel provides and the harness
/// can test: the required arithmetic set plus the four elementary
/// functions suites are shipped for.
enum class Fn : std::uint8_t {
    Neg, Add, Sub, Mul, Div, Recip, Sqrt, Sqr, Fma, Cbrt, Exp, Sin, Atanh
};

/// One-dimensional set with optionally open bounds; used for the natural
/// domain of unary functions and for closed-form mathematical ranges.
/// Bounds are exact doubles (-1, 0, 1, +-inf), never approximations.
struct RealSet {
    double lo, hi;
    bool lo_open = false, hi_open = false;

    static constexpr RealSet reals() {
        return {-__builtin_huge_val(), __builtin_huge_val()};
    }
    constexpr bool is_reals() const {
        return lo == -__builtin_huge_val() && hi == __builtin_huge_val() &&
               !lo_open && !hi_open;
    }
};

struct FnInfo {
    Fn id;
    const char* name;
    int arity;
    RealSet domain;               // natural domain of unary argument; reals for n-ary
    RealSet range;                // closed-form mathematical range where known
    bool monotone;                // unary and monotone over its domain
};

const FnInfo& fn_info(Fn f);
std::optional<Fn> parse_fn(std::string_view token);
const char* fn_name(Fn f);

inline constexpr Fn all_fns[] = {
    Fn::Neg, Fn::Add, Fn::Sub, Fn::Mul, Fn::Div, Fn::Recip, Fn::Sqrt,
    Fn::Sqr, Fn::Fma, Fn::Cbrt, Fn::Exp, Fn::Sin, Fn::Atanh,
};

inline constexpr Fn elementary_fns[] = {Fn::Cbrt, Fn::Exp, Fn::Sin, Fn::Atanh};

} // namespace ivalkit
