#include "ivalkit/detail/kernels.hpp"

#include <cassert>
#include <cmath>
#include <limits>

#include "ivalkit/bigfloat.hpp"

namespace ivalkit::detail {

namespace {

template <typename T>
struct fmt_of;
template <>
struct fmt_of<double> {
    static constexpr int min_scale = -1074;
    static const Format& fmt() {
        static const Format f = Format::binary64();
        return f;
    }
};
template <>
struct fmt_of<float> {
    static constexpr int min_scale = -149;
    static const Format& fmt() {
        static const Format f = Format::binary32();
        return f;
    }
};

template <typename T>
T step_up(T x) {
    return static_cast<T>(next_up(static_cast<double>(x), fmt_of<T>::fmt()));
}
template <typename T>
T step_down(T x) {
    return static_cast<T>(next_down(static_cast<double>(x), fmt_of<T>::fmt()));
}

// Conservative lower bound on the scale of x's least significant bit; a
// sum of two such scales >= min_scale guarantees the EFT residual is
// exactly representable.
template <typename T>
int scale_of(T x) {
    return std::ilogb(x) - (std::numeric_limits<T>::digits - 1);
}

template <typename T>
T saturate_overflow(T inf_result, Direction dir) {
    if (inf_result > 0)
        return dir == Direction::Up ? inf_result : std::numeric_limits<T>::max();
    return dir == Direction::Down ? inf_result : -std::numeric_limits<T>::max();
}

// r is the round-to-nearest result; cmp is the sign of (exact - r).
template <typename T>
T settle(T r, int cmp, Direction dir) {
    if (cmp == 0) return r;
    if (dir == Direction::Up) return cmp > 0 ? step_up(r) : r;
    return cmp < 0 ? step_down(r) : r;
}

template <typename T>
int sign_of(T v) {
    return v > 0 ? 1 : v < 0 ? -1 : 0;
}

// Knuth two-sum error term; exact whenever s = RN(a + b) is finite.
template <typename T>
T two_sum_err(T a, T b, T s) {
    T bp = s - a;
    T ap = s - bp;
    T db = b - bp;
    T da = a - ap;
    return da + db;
}

int exact_cmp_fma(double a, double b, double c, double r) {
    // sign of (a*b + c - r), computed exactly in software floats.
    BigFloat exact = BigFloat::add(
        BigFloat::mul(BigFloat::from_double(a), BigFloat::from_double(b)),
        BigFloat::from_double(c));
    return BigFloat::cmp(exact, BigFloat::from_double(r));
}

template <typename T>
T add_dir_impl(T a, T b, Direction dir) {
    if (std::isinf(a) || std::isinf(b)) {
        if (std::isinf(a) && std::isinf(b) && sign_of(a) != sign_of(b)) {
            // Range-endpoint semantics: sums over sets unbounded on both
            // sides are unbounded in the direction asked for.
            return dir == Direction::Up ? std::numeric_limits<T>::infinity()
                                        : -std::numeric_limits<T>::infinity();
        }
        return std::isinf(a) ? a : b;
    }
    T s = a + b;
    if (std::isinf(s)) return saturate_overflow(s, dir);
    return settle(s, sign_of(two_sum_err(a, b, s)), dir);
}

template <typename T>
T mul_dir_impl(T a, T b, Direction dir) {
    if (a == 0 || b == 0) return T{0};  // 0 * inf is an attained 0
    if (std::isinf(a) || std::isinf(b)) {
        return sign_of(a) * sign_of(b) > 0 ? std::numeric_limits<T>::infinity()
                                           : -std::numeric_limits<T>::infinity();
    }
    T p = a * b;
    if (std::isinf(p)) return saturate_overflow(p, dir);
    if (scale_of(a) + scale_of(b) >= fmt_of<T>::min_scale) {
        T r = std::fma(a, b, -p);
        return settle(p, sign_of(r), dir);
    }
    // Deep underflow: the fma residual itself may round; compare exactly.
    int cmp = exact_cmp_fma(static_cast<double>(a), static_cast<double>(b), 0.0,
                            static_cast<double>(p));
    return settle(p, cmp, dir);
}

template <typename T>
T div_dir_impl(T a, T b, Direction dir) {
    assert(std::isfinite(a) && std::isfinite(b) && b != 0);
    if (a == 0) return T{0};
    T q = a / b;
    if (std::isinf(q)) return saturate_overflow(q, dir);
    if (q == 0) {
        // Total underflow; the true quotient is nonzero with the signs' sign.
        return settle(q, sign_of(a) * sign_of(b), dir);
    }
    if (scale_of(q) + scale_of(b) >= fmt_of<T>::min_scale) {
        T r = std::fma(q, b, -a);  // q*b - a, exact
        return settle(q, -sign_of(r) * sign_of(b), dir);
    }
    int cmp = exact_cmp_fma(static_cast<double>(q), static_cast<double>(b),
                            -static_cast<double>(a), 0.0);
    return settle(q, -cmp * sign_of(b), dir);
}

template <typename T>
T sqrt_dir_impl(T a, Direction dir) {
    assert(!(a < 0));
    if (a == 0) return T{0};
    if (std::isinf(a)) return a;
    T s = std::sqrt(a);
    if (2 * scale_of(s) >= fmt_of<T>::min_scale) {
        T r = std::fma(s, s, -a);  // s*s - a, exact
        return settle(s, -sign_of(r), dir);
    }
    int cmp = exact_cmp_fma(static_cast<double>(s), static_cast<double>(s),
                            -static_cast<double>(a), 0.0);
    return settle(s, -cmp, dir);
}

template <typename T>
T fma_dir_impl(T a, T b, T c, Direction dir) {
    if (a == 0 || b == 0) return add_dir_impl(T{0}, c, dir);
    if (std::isinf(a) || std::isinf(b)) {
        T prod = sign_of(a) * sign_of(b) > 0 ? std::numeric_limits<T>::infinity()
                                             : -std::numeric_limits<T>::infinity();
        return add_dir_impl(prod, c, dir);
    }
    if (std::isinf(c)) return c;
    T f = std::fma(a, b, c);
    if (std::isinf(f)) return saturate_overflow(f, dir);
    // The fma rounding error is not a single T in general; compare exactly.
    int cmp = exact_cmp_fma(static_cast<double>(a), static_cast<double>(b),
                            static_cast<double>(c), static_cast<double>(f));
    return settle(f, cmp, dir);
}

} // namespace

double add_dir(double a, double b, Direction dir) { return add_dir_impl(a, b, dir); }
double sub_dir(double a, double b, Direction dir) { return add_dir_impl(a, -b, dir); }
double mul_dir(double a, double b, Direction dir) { return mul_dir_impl(a, b, dir); }
double div_dir(double a, double b, Direction dir) { return div_dir_impl(a, b, dir); }
double sqrt_dir(double a, Direction dir) { return sqrt_dir_impl(a, dir); }
double fma_dir(double a, double b, double c, Direction dir) {
    return fma_dir_impl(a, b, c, dir);
}

float add_dir(float a, float b, Direction dir) { return add_dir_impl(a, b, dir); }
float sub_dir(float a, float b, Direction dir) { return add_dir_impl(a, -b, dir); }
float mul_dir(float a, float b, Direction dir) { return mul_dir_impl(a, b, dir); }
float div_dir(float a, float b, Direction dir) { return div_dir_impl(a, b, dir); }
float sqrt_dir(float a, Direction dir) { return sqrt_dir_impl(a, dir); }
float fma_dir(float a, float b, float c, Direction dir) {
    return fma_dir_impl(a, b, c, dir);
}

} // namespace ivalkit::detail
