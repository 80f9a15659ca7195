#pragma once

// Elliptic curves y^2 = x^3 + a x + b over Q and their reductions mod p.

#include <cmath>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "modarith.hpp"

namespace galsieve {

using i128 = __int128;

/// Integral short Weierstrass curve with nonzero discriminant.
struct Curve {
    i64 a = 0;
    i64 b = 0;

    Curve() = default;
    Curve(i64 a_, i64 b_) : a(a_), b(b_) {
        if (discriminant_core() == 0) throw SingularCurve("4a^3 + 27b^2 = 0");
    }

    /// 4a^3 + 27b^2; the discriminant is -16 times this.
    i128 discriminant_core() const { return discriminant_core(a, b); }
    static i128 discriminant_core(i64 a, i64 b) {
        return i128{4} * a * a * a + i128{27} * b * b;
    }
    static bool nonsingular(i64 a, i64 b) { return discriminant_core(a, b) != 0; }

    friend bool operator==(const Curve&, const Curve&) = default;
};

struct CurveModP {
    FieldElem a;
    FieldElem b;
    u64 p = 0;
};

/// Good reduction at p. Primes 2 and 3 are always reported bad.
inline std::optional<CurveModP> reduce(const Curve& e, u64 p) {
    const Field f(p);
    if (p <= 3) return std::nullopt;
    const i128 core = e.discriminant_core() % static_cast<i128>(p);
    if (core == 0) return std::nullopt;
    return CurveModP{f(e.a), f(e.b), p};
}

/// Trace of Frobenius at p; construction enforces the Hasse bound a_p^2 <= 4p.
class FrobData {
public:
    FrobData(u64 p, i64 ap) : p_(p), ap_(ap) {
        if (static_cast<i128>(ap) * ap > i128{4} * p)
            throw HasseViolation("|a_p| exceeds 2 sqrt(p)");
    }
    u64 p() const { return p_; }
    i64 ap() const { return ap_; }
    i64 point_count() const { return static_cast<i64>(p_) + 1 - ap_; }

private:
    u64 p_;
    i64 ap_;
};

/// Sum over x in F_p of chi(x^3 + a x + b). The cubic is stepped by finite
/// differences so the loop body has no division.
inline i64 cubic_character_sum(u64 a, u64 b, const QuadraticCharacter& chi) {
    const u64 p = chi.modulus();
    const auto& tab = chi.table();
    // f(x) = x^3 + a x + b; d1 = f(x+1) - f(x) = 3x^2 + 3x + 1 + a; d2 = 6x + 6.
    u64 f = b % p;
    u64 d1 = (1 + a) % p;
    u64 d2 = 6 % p;
    const u64 six = 6 % p;
    i64 sum = 0;
    for (u64 x = 0; x < p; ++x) {
        sum += tab[f];
        f += d1;
        if (f >= p) f -= p;
        d1 += d2;
        if (d1 >= p) d1 -= p;
        d2 += six;
        if (d2 >= p) d2 -= p;
    }
    return sum;
}

inline i64 trace_from_character_sum(u64 a, u64 b, const QuadraticCharacter& chi) {
    return -cubic_character_sum(a, b, chi);
}

inline FrobData trace_of_frobenius(const CurveModP& e, const QuadraticCharacter& chi) {
    return FrobData(e.p, trace_from_character_sum(e.a.value(), e.b.value(), chi));
}

inline FrobData trace_of_frobenius(const CurveModP& e) {
    return trace_of_frobenius(e, QuadraticCharacter(e.p));
}

/// Trace/determinant class of Frobenius in GL_2(F_ell).
struct CharPolyClass {
    u64 t = 0;
    u64 d = 0;
    friend auto operator<=>(const CharPolyClass&, const CharPolyClass&) = default;
};

inline CharPolyClass frobenius_charpoly_mod(const FrobData& f, u64 ell) {
    if (f.p() == ell) throw EqualCharacteristic(ell);
    return {reduce_signed(f.ap(), ell), f.p() % ell};
}

/// Whether the Frobenius eigenvalues pi, conj(pi) generate a free abelian group
/// of rank 2. Since |pi| = |conj(pi)|, a relation forces pi/conj(pi) to be a root
/// of unity, which happens exactly when p | a_p or a_p^2 is in {0, p, 2p, 3p, 4p}.
inline bool phi_rank_is_free_rank2(const FrobData& f) {
    const i64 ap = f.ap();
    const i64 p = static_cast<i64>(f.p());
    if (ap % p == 0) return false;
    const i64 sq = ap * ap;
    return !(sq % p == 0 && sq / p <= 4);
}

/// Quadratic characters for every prime up to a bound, built once and shared read-only.
class CharacterCache {
public:
    explicit CharacterCache(u64 max_prime) {
        for (u64 p : primes_in(5, max_prime)) tables_.emplace(p, QuadraticCharacter(p));
    }
    const QuadraticCharacter& at(u64 p) const { return tables_.at(p); }
    bool contains(u64 p) const { return tables_.count(p) != 0; }

private:
    std::unordered_map<u64, QuadraticCharacter> tables_;
};

}  // namespace galsieve
