#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace ivalkit::detail {

/// Unsigned arbitrary-precision integer, little-endian 32-bit limbs with no
/// leading zero limb. Backs the oracle's software floating point; kept free
/// of platform intrinsics so results are identical everywhere.
class BigNat {
public:
    BigNat() = default;
    static BigNat from_u64(std::uint64_t v);

    bool is_zero() const { return limbs_.empty(); }
    std::size_t bit_length() const;
    bool bit(std::size_t i) const;
    /// True when any bit strictly below position i is set.
    bool any_below(std::size_t i) const;
    std::uint64_t low_u64() const;
    std::size_t trailing_zeros() const;  // undefined on zero

    static int cmp(const BigNat& a, const BigNat& b);
    static BigNat add(const BigNat& a, const BigNat& b);
    /// Requires a >= b.
    static BigNat sub(const BigNat& a, const BigNat& b);
    static BigNat mul(const BigNat& a, const BigNat& b);
    BigNat shifted_left(std::size_t k) const;
    BigNat shifted_right(std::size_t k) const;
    void inc();

    /// Schoolbook long division; q and r may alias nothing. b must be nonzero.
    static void divmod(const BigNat& a, const BigNat& b, BigNat& q, BigNat& r);
    static BigNat div_u32(const BigNat& a, std::uint32_t d, std::uint32_t& rem);

    /// floor square / cube root with an exactness flag; Newton iteration with
    /// a final verified adjustment, so the result is provably the floor root.
    static BigNat isqrt(const BigNat& n, bool& exact);
    static BigNat icbrt(const BigNat& n, bool& exact);

    std::string to_decimal() const;

    const std::vector<std::uint32_t>& limbs() const { return limbs_; }

private:
    std::vector<std::uint32_t> limbs_;
    void trim();
    friend class BigNatBuilder;
};

} // namespace ivalkit::detail
