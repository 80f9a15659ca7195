#pragma once

// Prime-field arithmetic and the elementary number theory the rest of the
// library leans on: primality, Legendre symbols, prime and squarefree lists.

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace galsieve {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

inline constexpr u64 kMaxModulus = u64{1} << 62;

constexpr u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>((u128{a} * b) % m); }

constexpr u64 pow_mod(u64 base, u64 exp, u64 m) {
    u64 result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return result;
}

/// Canonical residue of a signed integer.
constexpr u64 reduce_signed(i64 v, u64 m) {
    const i64 r = v % static_cast<i64>(m);
    return static_cast<u64>(r < 0 ? r + static_cast<i64>(m) : r);
}

namespace detail {

constexpr bool miller_rabin_witness(u64 n, u64 a, u64 d, int s) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) return false;
    for (int r = 1; r < s; ++r) {
        x = mul_mod(x, x, n);
        if (x == n - 1) return false;
    }
    return true;
}

}  // namespace detail

/// Deterministic primality test: trial division below 2^32, Miller-Rabin
/// with the first twelve prime bases above (exact for all 64-bit inputs).
constexpr bool is_prime(u64 n) {
    if (n < 2) return false;
    if (n < (u64{1} << 32)) {
        if (n % 2 == 0) return n == 2;
        for (u64 d = 3; d * d <= n; d += 2)
            if (n % d == 0) return false;
        return true;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    constexpr std::array<u64, 12> bases{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (u64 a : bases)
        if (detail::miller_rabin_witness(n, a, d, s)) return false;
    return true;
}

/// Inverse of a modulo m by extended Euclid; throws ZeroInverse when gcd(a, m) != 1.
inline u64 inv_mod(u64 a, u64 m) {
    i64 old_r = static_cast<i64>(a % m), r = static_cast<i64>(m);
    i64 old_s = 1, s = 0;
    while (r != 0) {
        const i64 q = old_r / r;
        old_r -= q * r;
        std::swap(old_r, r);
        old_s -= q * s;
        std::swap(old_s, s);
    }
    if (old_r != 1) throw ZeroInverse();
    return reduce_signed(old_s, m);
}

class Field;

/// A residue in F_p with canonical representative 0 <= value < modulus.
class FieldElem {
public:
    constexpr FieldElem() = default;

    constexpr u64 value() const { return value_; }
    constexpr u64 modulus() const { return modulus_; }
    constexpr bool is_zero() const { return value_ == 0; }

    FieldElem operator+(FieldElem o) const {
        check(o);
        u64 s = value_ + o.value_;
        return {s >= modulus_ ? s - modulus_ : s, modulus_};
    }
    FieldElem operator-(FieldElem o) const {
        check(o);
        return {value_ >= o.value_ ? value_ - o.value_ : value_ + modulus_ - o.value_, modulus_};
    }
    FieldElem operator-() const { return {value_ == 0 ? 0 : modulus_ - value_, modulus_}; }
    FieldElem operator*(FieldElem o) const {
        check(o);
        return {mul_mod(value_, o.value_, modulus_), modulus_};
    }
    FieldElem operator/(FieldElem o) const { return *this * o.inv(); }
    FieldElem& operator+=(FieldElem o) { return *this = *this + o; }
    FieldElem& operator-=(FieldElem o) { return *this = *this - o; }
    FieldElem& operator*=(FieldElem o) { return *this = *this * o; }

    FieldElem inv() const { return {inv_mod(value_, modulus_), modulus_}; }
    FieldElem pow(u64 e) const { return {pow_mod(value_, e, modulus_), modulus_}; }

    friend constexpr bool operator==(FieldElem, FieldElem) = default;

private:
    friend class Field;
    constexpr FieldElem(u64 v, u64 m) : value_(v), modulus_(m) {}
    void check(FieldElem o) const {
        if (o.modulus_ != modulus_) throw ModulusMismatch();
    }

    u64 value_ = 0;
    u64 modulus_ = 0;
};

/// Descriptor of the prime field F_p. Construction validates primality.
class Field {
public:
    explicit Field(u64 p) : p_(p) {
        if (p < 2 || p >= kMaxModulus)
            throw ModulusOutOfRange("field modulus must lie in [2, 2^62)");
        if (!is_prime(p)) throw CompositeModulus(p);
    }

    u64 order() const { return p_; }
    u64 characteristic() const { return p_; }

    FieldElem operator()(i64 v) const { return {reduce_signed(v, p_), p_}; }
    FieldElem from_unsigned(u64 v) const { return {v % p_, p_}; }
    FieldElem zero() const { return {0, p_}; }
    FieldElem one() const { return {1 % p_, p_}; }

private:
    u64 p_;
};

inline Field field_new(u64 p) { return Field(p); }

/// Legendre symbol via Euler's criterion.
inline int legendre(FieldElem a) {
    if (a.is_zero()) return 0;
    if (a.modulus() == 2) return 1;
    const u64 e = pow_mod(a.value(), (a.modulus() - 1) / 2, a.modulus());
    return e == 1 ? 1 : -1;
}

/// Precomputed quadratic character of F_p for the O(p) inner loops of point counting.
class QuadraticCharacter {
public:
    explicit QuadraticCharacter(u64 p) : p_(p), chi_(p, -1) {
        chi_[0] = 0;
        for (u64 x = 1; x < p; ++x) chi_[mul_mod(x, x, p)] = 1;
    }
    u64 modulus() const { return p_; }
    int operator()(u64 residue) const { return chi_[residue]; }
    const std::vector<std::int8_t>& table() const { return chi_; }

private:
    u64 p_;
    std::vector<std::int8_t> chi_;
};

/// Sieve of Eratosthenes; flags[i] is true iff i is prime.
inline std::vector<bool> prime_flags(u64 hi) {
    std::vector<bool> flags(hi + 1, true);
    flags[0] = false;
    if (hi >= 1) flags[1] = false;
    for (u64 i = 2; i * i <= hi; ++i)
        if (flags[i])
            for (u64 j = i * i; j <= hi; j += i) flags[j] = false;
    return flags;
}

/// All primes in [lo, hi], ascending.
inline std::vector<u64> primes_in(u64 lo, u64 hi) {
    std::vector<u64> out;
    if (hi < 2 || lo > hi) return out;
    const auto flags = prime_flags(hi);
    for (u64 n = std::max<u64>(lo, 2); n <= hi; ++n)
        if (flags[n]) out.push_back(n);
    return out;
}

/// Squarefree integers in [1, Q], ascending.
inline std::vector<u64> squarefree_up_to(u64 Q) {
    std::vector<bool> keep(Q + 1, true);
    for (u64 d = 2; d * d <= Q; ++d)
        for (u64 m = d * d; m <= Q; m += d * d) keep[m] = false;
    std::vector<u64> out;
    for (u64 a = 1; a <= Q; ++a)
        if (keep[a]) out.push_back(a);
    return out;
}

/// Moebius function on [0, n] (mu[0] unused).
inline std::vector<int> mobius_table(u64 n) {
    std::vector<int> mu(n + 1, 1);
    std::vector<bool> composite(n + 1, false);
    for (u64 p = 2; p <= n; ++p) {
        if (composite[p]) continue;
        for (u64 m = p; m <= n; m += p) {
            if (m > p) composite[m] = true;
            mu[m] = -mu[m];
        }
        for (u64 m = p * p; m <= n; m += p * p) mu[m] = 0;
    }
    mu[0] = 0;
    return mu;
}

/// Distinct prime factors of n, ascending.
inline std::vector<u64> prime_factors(u64 n) {
    std::vector<u64> out;
    for (u64 d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

/// Smallest generator of (Z/p)^*.
inline u64 primitive_root(u64 p) {
    if (p == 2) return 1;
    const auto factors = prime_factors(p - 1);
    for (u64 g = 2; g < p; ++g) {
        bool ok = true;
        for (u64 q : factors)
            if (pow_mod(g, (p - 1) / q, p) == 1) {
                ok = false;
                break;
            }
        if (ok) return g;
    }
    return 1;
}

}  // namespace galsieve
