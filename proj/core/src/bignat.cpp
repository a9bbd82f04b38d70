#include "ivalkit/detail/bignat.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <stdexcept>

namespace ivalkit::detail {

namespace {
constexpr std::uint64_t kBase = 1ull << 32;
}

void BigNat::trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
}

BigNat BigNat::from_u64(std::uint64_t v) {
    BigNat n;
    if (v) n.limbs_.push_back(static_cast<std::uint32_t>(v));
    if (v >> 32) n.limbs_.push_back(static_cast<std::uint32_t>(v >> 32));
    return n;
}

std::size_t BigNat::bit_length() const {
    if (limbs_.empty()) return 0;
    return 32 * (limbs_.size() - 1) +
           (32 - static_cast<std::size_t>(std::countl_zero(limbs_.back())));
}

bool BigNat::bit(std::size_t i) const {
    std::size_t limb = i / 32, off = i % 32;
    if (limb >= limbs_.size()) return false;
    return (limbs_[limb] >> off) & 1u;
}

bool BigNat::any_below(std::size_t i) const {
    std::size_t full = i / 32, off = i % 32;
    for (std::size_t k = 0; k < full && k < limbs_.size(); ++k)
        if (limbs_[k]) return true;
    if (off && full < limbs_.size())
        if (limbs_[full] & ((1u << off) - 1u)) return true;
    return false;
}

std::uint64_t BigNat::low_u64() const {
    std::uint64_t v = 0;
    if (!limbs_.empty()) v = limbs_[0];
    if (limbs_.size() > 1) v |= static_cast<std::uint64_t>(limbs_[1]) << 32;
    return v;
}

std::size_t BigNat::trailing_zeros() const {
    assert(!limbs_.empty());
    std::size_t k = 0;
    while (limbs_[k] == 0) ++k;
    return 32 * k + static_cast<std::size_t>(std::countr_zero(limbs_[k]));
}

int BigNat::cmp(const BigNat& a, const BigNat& b) {
    if (a.limbs_.size() != b.limbs_.size())
        return a.limbs_.size() < b.limbs_.size() ? -1 : 1;
    for (std::size_t i = a.limbs_.size(); i-- > 0;) {
        if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] < b.limbs_[i] ? -1 : 1;
    }
    return 0;
}

BigNat BigNat::add(const BigNat& a, const BigNat& b) {
    BigNat r;
    const std::size_t n = std::max(a.limbs_.size(), b.limbs_.size());
    r.limbs_.resize(n + 1, 0);
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t s = carry;
        if (i < a.limbs_.size()) s += a.limbs_[i];
        if (i < b.limbs_.size()) s += b.limbs_[i];
        r.limbs_[i] = static_cast<std::uint32_t>(s);
        carry = s >> 32;
    }
    r.limbs_[n] = static_cast<std::uint32_t>(carry);
    r.trim();
    return r;
}

BigNat BigNat::sub(const BigNat& a, const BigNat& b) {
    assert(cmp(a, b) >= 0);
    BigNat r;
    r.limbs_.resize(a.limbs_.size(), 0);
    std::int64_t borrow = 0;
    for (std::size_t i = 0; i < a.limbs_.size(); ++i) {
        std::int64_t d = static_cast<std::int64_t>(a.limbs_[i]) - borrow -
                         (i < b.limbs_.size() ? b.limbs_[i] : 0);
        if (d < 0) {
            d += static_cast<std::int64_t>(kBase);
            borrow = 1;
        } else {
            borrow = 0;
        }
        r.limbs_[i] = static_cast<std::uint32_t>(d);
    }
    assert(borrow == 0);
    r.trim();
    return r;
}

BigNat BigNat::mul(const BigNat& a, const BigNat& b) {
    if (a.is_zero() || b.is_zero()) return {};
    BigNat r;
    r.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
    // Schoolbook; operand sizes stay small enough in practice that an
    // asymptotically faster multiply has not been worth the complexity.
    for (std::size_t i = 0; i < a.limbs_.size(); ++i) {
        std::uint64_t carry = 0;
        const std::uint64_t ai = a.limbs_[i];
        for (std::size_t j = 0; j < b.limbs_.size(); ++j) {
            std::uint64_t t = ai * b.limbs_[j] + r.limbs_[i + j] + carry;
            r.limbs_[i + j] = static_cast<std::uint32_t>(t);
            carry = t >> 32;
        }
        std::size_t k = i + b.limbs_.size();
        while (carry) {
            std::uint64_t t = r.limbs_[k] + carry;
            r.limbs_[k] = static_cast<std::uint32_t>(t);
            carry = t >> 32;
            ++k;
        }
    }
    r.trim();
    return r;
}

BigNat BigNat::shifted_left(std::size_t k) const {
    if (is_zero() || k == 0) {
        BigNat r = *this;
        return r;
    }
    const std::size_t limb_shift = k / 32, bit_shift = k % 32;
    BigNat r;
    r.limbs_.assign(limbs_.size() + limb_shift + 1, 0);
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        std::uint64_t v = static_cast<std::uint64_t>(limbs_[i]) << bit_shift;
        r.limbs_[i + limb_shift] |= static_cast<std::uint32_t>(v);
        r.limbs_[i + limb_shift + 1] |= static_cast<std::uint32_t>(v >> 32);
    }
    r.trim();
    return r;
}

BigNat BigNat::shifted_right(std::size_t k) const {
    const std::size_t limb_shift = k / 32, bit_shift = k % 32;
    if (limb_shift >= limbs_.size()) return {};
    BigNat r;
    r.limbs_.assign(limbs_.size() - limb_shift, 0);
    for (std::size_t i = 0; i < r.limbs_.size(); ++i) {
        std::uint64_t v = limbs_[i + limb_shift] >> bit_shift;
        if (bit_shift && i + limb_shift + 1 < limbs_.size())
            v |= static_cast<std::uint64_t>(limbs_[i + limb_shift + 1])
                 << (32 - bit_shift);
        r.limbs_[i] = static_cast<std::uint32_t>(v);
    }
    r.trim();
    return r;
}

void BigNat::inc() {
    for (std::size_t i = 0; i < limbs_.size(); ++i) {
        if (++limbs_[i] != 0) return;
    }
    limbs_.push_back(1);
}

BigNat BigNat::div_u32(const BigNat& a, std::uint32_t d, std::uint32_t& rem) {
    if (d == 0) throw std::logic_error("BigNat: division by zero");
    BigNat q;
    q.limbs_.assign(a.limbs_.size(), 0);
    std::uint64_t r = 0;
    for (std::size_t i = a.limbs_.size(); i-- > 0;) {
        std::uint64_t cur = (r << 32) | a.limbs_[i];
        q.limbs_[i] = static_cast<std::uint32_t>(cur / d);
        r = cur % d;
    }
    rem = static_cast<std::uint32_t>(r);
    q.trim();
    return q;
}

// Knuth algorithm D.
void BigNat::divmod(const BigNat& a, const BigNat& b, BigNat& q, BigNat& r) {
    if (b.is_zero()) throw std::logic_error("BigNat: division by zero");
    if (cmp(a, b) < 0) {
        q = BigNat{};
        r = a;
        return;
    }
    if (b.limbs_.size() == 1) {
        std::uint32_t rem = 0;
        q = div_u32(a, b.limbs_[0], rem);
        r = from_u64(rem);
        return;
    }
    const unsigned s = static_cast<unsigned>(std::countl_zero(b.limbs_.back()));
    BigNat u = a.shifted_left(s);
    const BigNat v = b.shifted_left(s);
    const std::size_t n = v.limbs_.size();
    const std::size_t m = u.limbs_.size() - n;
    u.limbs_.resize(u.limbs_.size() + 1, 0);

    q.limbs_.assign(m + 1, 0);
    const std::uint64_t vtop = v.limbs_[n - 1];
    const std::uint64_t vsec = v.limbs_[n - 2];

    for (std::size_t jj = m + 1; jj-- > 0;) {
        const std::size_t j = jj;
        std::uint64_t num =
            (static_cast<std::uint64_t>(u.limbs_[j + n]) << 32) | u.limbs_[j + n - 1];
        std::uint64_t qhat = num / vtop;
        std::uint64_t rhat = num % vtop;
        if (qhat > 0xFFFFFFFFull) {
            qhat = 0xFFFFFFFFull;
            rhat = num - qhat * vtop;
        }
        while (rhat <= 0xFFFFFFFFull &&
               qhat * vsec > ((rhat << 32) | u.limbs_[j + n - 2])) {
            --qhat;
            rhat += vtop;
        }
        // Multiply and subtract: u[j..j+n] -= qhat * v.
        std::int64_t borrow = 0;
        std::uint64_t carry = 0;
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t p = qhat * v.limbs_[i] + carry;
            carry = p >> 32;
            std::int64_t t = static_cast<std::int64_t>(u.limbs_[i + j]) -
                             static_cast<std::int64_t>(p & 0xFFFFFFFFull) - borrow;
            if (t < 0) {
                t += static_cast<std::int64_t>(kBase);
                borrow = 1;
            } else {
                borrow = 0;
            }
            u.limbs_[i + j] = static_cast<std::uint32_t>(t);
        }
        std::int64_t t = static_cast<std::int64_t>(u.limbs_[j + n]) -
                         static_cast<std::int64_t>(carry) - borrow;
        if (t < 0) {
            // qhat was one too large; add v back.
            t += static_cast<std::int64_t>(kBase);
            --qhat;
            std::uint64_t c2 = 0;
            for (std::size_t i = 0; i < n; ++i) {
                std::uint64_t s2 = static_cast<std::uint64_t>(u.limbs_[i + j]) +
                                   v.limbs_[i] + c2;
                u.limbs_[i + j] = static_cast<std::uint32_t>(s2);
                c2 = s2 >> 32;
            }
            t += static_cast<std::int64_t>(c2);
        }
        u.limbs_[j + n] = static_cast<std::uint32_t>(t);
        q.limbs_[j] = static_cast<std::uint32_t>(qhat);
    }
    q.trim();
    u.limbs_.resize(n);
    r = u;
    r.trim();
    r = r.shifted_right(s);
}

BigNat BigNat::isqrt(const BigNat& n, bool& exact) {
    if (n.is_zero()) {
        exact = true;
        return {};
    }
    BigNat x = from_u64(1).shifted_left((n.bit_length() + 1) / 2);
    for (;;) {
        BigNat d, rem;
        divmod(n, x, d, rem);
        BigNat y = add(x, d).shifted_right(1);
        if (cmp(y, x) >= 0) break;
        x = y;
    }
    // Newton from above lands on floor(sqrt) or one past; verify and settle.
    while (cmp(mul(x, x), n) > 0) x = sub(x, from_u64(1));
    for (;;) {
        BigNat x1 = x;
        x1.inc();
        if (cmp(mul(x1, x1), n) > 0) break;
        x = x1;
    }
    exact = cmp(mul(x, x), n) == 0;
    return x;
}

BigNat BigNat::icbrt(const BigNat& n, bool& exact) {
    if (n.is_zero()) {
        exact = true;
        return {};
    }
    BigNat x = from_u64(1).shifted_left(n.bit_length() / 3 + 1);
    for (;;) {
        BigNat x2 = mul(x, x);
        BigNat d, rem;
        divmod(n, x2, d, rem);
        std::uint32_t r3 = 0;
        BigNat y = div_u32(add(add(x, x), d), 3, r3);
        if (cmp(y, x) >= 0) break;
        x = y;
    }
    while (cmp(mul(mul(x, x), x), n) > 0) x = sub(x, from_u64(1));
    for (;;) {
        BigNat x1 = x;
        x1.inc();
        if (cmp(mul(mul(x1, x1), x1), n) > 0) break;
        x = x1;
    }
    exact = cmp(mul(mul(x, x), x), n) == 0;
    return x;
}

std::string BigNat::to_decimal() const {
    if (is_zero()) return "0";
    std::string out;
    BigNat cur = *this;
    while (!cur.is_zero()) {
        std::uint32_t rem = 0;
        cur = div_u32(cur, 1000000000u, rem);
        for (int i = 0; i < 9; ++i) {
            out.push_back(static_cast<char>('0' + rem % 10));
            rem /= 10;
        }
    }
    while (out.size() > 1 && out.back() == '0') out.pop_back();
    std::reverse(out.begin(), out.end());
    return out;
}

} // namespace ivalkit::detail
