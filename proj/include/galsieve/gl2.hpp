#pragma once

// GL_2 and SL_2 over F_ell (and, for test use, over Z/n): packed matrices,
// the ambient group object, classical subgroups and conjugacy invariants.

#include <cstdint>
#include <vector>

#include "curves.hpp"
#include "errors.hpp"
#include "group.hpp"
#include "modarith.hpp"
#include "random.hpp"

namespace galsieve {

/// 2x2 matrix with entries < 2^16 packed row-major into one word:
/// bits 0-15 = a, 16-31 = b, 32-47 = c, 48-63 = d for [[a, b], [c, d]].
struct Mat2 {
    std::uint64_t packed = 0;

    static constexpr Mat2 from_entries(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                                       std::uint64_t d) {
        return {a | (b << 16) | (c << 32) | (d << 48)};
    }
    constexpr std::uint64_t a() const { return packed & 0xffff; }
    constexpr std::uint64_t b() const { return (packed >> 16) & 0xffff; }
    constexpr std::uint64_t c() const { return (packed >> 32) & 0xffff; }
    constexpr std::uint64_t d() const { return packed >> 48; }

    constexpr std::uint64_t hash() const { return mix64(packed); }
    friend constexpr auto operator<=>(const Mat2&, const Mat2&) = default;
};

inline constexpr std::uint64_t group_order_gl2(std::uint64_t ell) {
    return (ell * ell - 1) * (ell * ell - ell);
}

inline constexpr std::uint64_t group_order_sl2(std::uint64_t ell) {
    return ell * (ell * ell - 1);
}

/// GL_2(Z/nZ). Over a prime modulus this is GL_2(F_ell); composite moduli
/// are only constructible through `over_ring_for_testing`.
class Gl2 {
public:
    using element_type = Mat2;

    explicit Gl2(std::uint64_t ell) : n_(ell) {
        if (ell < 2 || ell >= (1u << 16))
            throw ModulusOutOfRange("GL_2 modulus must lie in [2, 2^16)");
        if (!is_prime(ell)) throw CompositeModulus(ell);
    }

    static Gl2 over_ring_for_testing(std::uint64_t n) {
        if (n < 2 || n >= (1u << 16))
            throw ModulusOutOfRange("GL_2 modulus must lie in [2, 2^16)");
        return Gl2(n, RingTag{});
    }

    std::uint64_t modulus() const { return n_; }
    bool is_field() const { return is_prime(n_); }

    Mat2 make(i64 a, i64 b, i64 c, i64 d) const {
        return Mat2::from_entries(reduce_signed(a, n_), reduce_signed(b, n_),
                                  reduce_signed(c, n_), reduce_signed(d, n_));
    }

    Mat2 identity() const { return Mat2::from_entries(1, 0, 0, 1); }
    Mat2 scalar(std::uint64_t s) const { return Mat2::from_entries(s % n_, 0, 0, s % n_); }

    Mat2 mul(const Mat2& x, const Mat2& y) const {
        const std::uint64_t n = n_;
        return Mat2::from_entries((x.a() * y.a() + x.b() * y.c()) % n,
                                  (x.a() * y.b() + x.b() * y.d()) % n,
                                  (x.c() * y.a() + x.d() * y.c()) % n,
                                  (x.c() * y.b() + x.d() * y.d()) % n);
    }

    std::uint64_t det(const Mat2& x) const {
        return (x.a() * x.d() % n_ + n_ - x.b() * x.c() % n_) % n_;
    }
    std::uint64_t trace(const Mat2& x) const { return (x.a() + x.d()) % n_; }

    bool invertible(const Mat2& x) const { return std::gcd(det(x), n_) == 1; }

    Mat2 inverse(const Mat2& x) const {
        const std::uint64_t di = inv_mod(det(x), n_);
        return Mat2::from_entries(x.d() * di % n_, (n_ - x.b()) % n_ * di % n_,
                                  (n_ - x.c()) % n_ * di % n_, x.a() * di % n_);
    }

    Mat2 negate(const Mat2& x) const {
        return Mat2::from_entries((n_ - x.a()) % n_, (n_ - x.b()) % n_, (n_ - x.c()) % n_,
                                  (n_ - x.d()) % n_);
    }

    /// |GL_2(Z/n)| = prod over p^k || n of p^{4(k-1)} (p^2 - 1)(p^2 - p).
    std::uint64_t order() const {
        std::uint64_t total = 1, m = n_;
        for (std::uint64_t p : prime_factors(n_)) {
            std::uint64_t pk = 1;
            while (m % p == 0) {
                m /= p;
                pk *= p;
            }
            const std::uint64_t lift = (pk / p) * (pk / p) * (pk / p) * (pk / p);
            total *= lift * group_order_gl2(p);
        }
        return total;
    }

    std::uint64_t unit_count() const {
        std::uint64_t phi = n_;
        for (std::uint64_t p : prime_factors(n_)) phi = phi / p * (p - 1);
        return phi;
    }

    std::uint64_t sl2_order() const { return order() / unit_count(); }

    /// Every invertible matrix, in packed order.
    std::vector<Mat2> all_elements() const {
        std::vector<Mat2> out;
        for (std::uint64_t d = 0; d < n_; ++d)
            for (std::uint64_t c = 0; c < n_; ++c)
                for (std::uint64_t b = 0; b < n_; ++b)
                    for (std::uint64_t a = 0; a < n_; ++a) {
                        Mat2 m = Mat2::from_entries(a, b, c, d);
                        if (invertible(m)) out.push_back(m);
                    }
        return out;
    }

    /// Generators of SL_2: the images of [[1,1],[0,1]] and [[0,-1],[1,0]] from SL_2(Z).
    std::vector<Mat2> sl2_generators() const { return {make(1, 1, 0, 1), make(0, -1, 1, 0)}; }

    /// SL_2 generators plus diag(u, 1) for u running over generators of the units.
    std::vector<Mat2> gl2_generators() const {
        auto gens = sl2_generators();
        if (is_field()) {
            const std::uint64_t g = primitive_root(n_);
            if (g != 1) gens.push_back(make(static_cast<i64>(g), 0, 0, 1));
        } else {
            for (std::uint64_t u = 2; u < n_; ++u)
                if (std::gcd(u, n_) == 1) gens.push_back(make(static_cast<i64>(u), 0, 0, 1));
        }
        return gens;
    }

    friend bool operator==(const Gl2& x, const Gl2& y) { return x.n_ == y.n_; }

private:
    struct RingTag {};
    Gl2(std::uint64_t n, RingTag) : n_(n) {}

    std::uint64_t n_;
};

using Gl2Subgroup = Subgroup<Gl2>;

inline Gl2Subgroup gl2_group(const Gl2& g) { return closure(g, g.gl2_generators()); }
inline Gl2Subgroup sl2_group(const Gl2& g) { return closure(g, g.sl2_generators()); }

/// Trace and determinant; they determine the characteristic polynomial x^2 - t x + d.
inline CharPolyClass conj_invariants(const Gl2& g, const Mat2& m) {
    return {g.trace(m), g.det(m)};
}

/// All invertible matrices with the given trace and determinant.
inline std::vector<Mat2> charpoly_fiber(const Gl2& g, std::uint64_t t, std::uint64_t d) {
    const std::uint64_t n = g.modulus();
    t %= n;
    d %= n;
    std::vector<Mat2> out;
    if (std::gcd(d, n) != 1) return out;
    for (std::uint64_t a = 0; a < n; ++a) {
        const std::uint64_t dd = (t + n - a) % n;
        for (std::uint64_t b = 0; b < n; ++b)
            for (std::uint64_t c = 0; c < n; ++c) {
                Mat2 m = Mat2::from_entries(a, b, c, dd);
                if (g.det(m) == d) out.push_back(m);
            }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Size of the char-poly fiber over F_ell, by eigenvalue type: a split pair of
/// distinct eigenvalues gives ell(ell+1), an irreducible polynomial ell(ell-1),
/// a repeated eigenvalue ell^2 (scalar plus the ell^2 - 1 non-semisimple ones).
inline std::uint64_t charpoly_fiber_size(std::uint64_t ell, std::uint64_t t, std::uint64_t d) {
    t %= ell;
    d %= ell;
    if (d == 0) return 0;
    if (ell == 2) {
        // x^2 + t x + 1 over F_2: t = 0 is (x+1)^2, t = 1 irreducible.
        return t == 0 ? 4 : 2;
    }
    const Field f(ell);
    const FieldElem disc = f.from_unsigned(t) * f.from_unsigned(t) - f(4) * f.from_unsigned(d);
    switch (legendre(disc)) {
        case 1: return ell * (ell + 1);
        case -1: return ell * (ell - 1);
        default: return ell * ell;
    }
}

/// The coset {m : det m = d} of SL_2(F_ell), held as a predicate.
class DetCoset {
public:
    DetCoset(const Gl2& g, std::uint64_t d) : g_(g), d_(d % g.modulus()) {
        if (std::gcd(d_, g.modulus()) != 1) throw ZeroInverse();
    }
    std::uint64_t det_value() const { return d_; }
    bool contains(const Mat2& m) const { return g_.det(m) == d_; }
    std::uint64_t cardinality() const { return g_.sl2_order(); }
    bool operator()(const Mat2& m) const { return contains(m); }

private:
    Gl2 g_;
    std::uint64_t d_;
};

inline DetCoset det_coset(const Gl2& g, std::uint64_t d) { return DetCoset(g, d); }

// Classical subgroups of GL_2(F_ell).

/// Upper-triangular Borel subgroup.
inline Gl2Subgroup borel(const Gl2& g) {
    return filter_subgroup(gl2_group(g), [](const Mat2& m) { return m.c() == 0; });
}

inline Gl2Subgroup split_cartan(const Gl2& g) {
    return filter_subgroup(gl2_group(g), [](const Mat2& m) { return m.b() == 0 && m.c() == 0; });
}

/// Normalizer of the diagonal torus: diagonal and anti-diagonal matrices.
inline Gl2Subgroup split_cartan_normalizer(const Gl2& g) {
    return filter_subgroup(gl2_group(g), [](const Mat2& m) {
        return (m.b() == 0 && m.c() == 0) || (m.a() == 0 && m.d() == 0);
    });
}

/// Smallest quadratic non-residue mod ell (ell odd).
inline std::uint64_t least_nonresidue(std::uint64_t ell) {
    const Field f(ell);
    for (std::uint64_t e = 2; e < ell; ++e)
        if (legendre(f.from_unsigned(e)) == -1) return e;
    throw InvariantViolation("no quadratic non-residue");
}

/// Nonsplit Cartan F_{ell^2}^* embedded as {[[x, eps y], [y, x]]} with eps a non-residue.
/// Over F_2 the field F_4 = F_2[w]/(w^2 + w + 1) is used instead.
inline Gl2Subgroup nonsplit_cartan(const Gl2& g) {
    const std::uint64_t ell = g.modulus();
    if (ell == 2) {
        // Multiplication by w on the basis {1, w}: [[0, 1], [1, 1]].
        return closure(g, std::vector<Mat2>{g.make(0, 1, 1, 1)});
    }
    const std::uint64_t eps = least_nonresidue(ell);
    return filter_subgroup(gl2_group(g), [&](const Mat2& m) {
        return m.a() == m.d() && m.b() == (eps * m.c()) % ell;
    });
}

/// Normalizer of the nonsplit Cartan: the Cartan and its Frobenius twist.
inline Gl2Subgroup nonsplit_cartan_normalizer(const Gl2& g) {
    const std::uint64_t ell = g.modulus();
    auto cartan = nonsplit_cartan(g);
    std::vector<Mat2> gens(cartan.generators().begin(), cartan.generators().end());
    if (ell == 2) {
        gens.push_back(g.make(1, 1, 0, 1));  // swaps w and w^2 = w + 1
    } else {
        gens.push_back(g.make(1, 0, 0, -1));  // conjugation x + y sqrt(eps) -> x - y sqrt(eps)
    }
    return closure(g, gens);
}

/// Binary tetrahedral group 2.A_4 inside SL_2(F_ell), ell odd, built from a
/// quaternion basis i, j with i^2 = j^2 = -1.
inline Gl2Subgroup binary_tetrahedral(const Gl2& g) {
    const std::uint64_t ell = g.modulus();
    const Field f(ell);
    // x^2 + y^2 = -1 always has a solution over F_ell.
    for (std::uint64_t x = 0; x < ell; ++x)
        for (std::uint64_t y = 0; y < ell; ++y) {
            if ((x * x + y * y + 1) % ell != 0) continue;
            const Mat2 i = g.make(0, 1, -1, 0);
            const Mat2 j = g.make(static_cast<i64>(x), static_cast<i64>(y), static_cast<i64>(y),
                                  -static_cast<i64>(x));
            const Mat2 k = g.mul(i, j);
            // omega = (-1 + i + j + k) / 2 has order 3.
            const std::uint64_t half = inv_mod(2, ell);
            auto entry = [&](std::uint64_t e1, std::uint64_t e2, std::uint64_t e3,
                             std::uint64_t e4) { return (e1 + e2 + e3 + e4) % ell * half % ell; };
            const Mat2 minus_one = g.scalar(ell - 1);
            const Mat2 omega = Mat2::from_entries(
                entry(minus_one.a(), i.a(), j.a(), k.a()), entry(minus_one.b(), i.b(), j.b(), k.b()),
                entry(minus_one.c(), i.c(), j.c(), k.c()), entry(minus_one.d(), i.d(), j.d(), k.d()));
            return closure(g, std::vector<Mat2>{i, j, omega});
        }
    throw InvariantViolation("no solution to x^2 + y^2 = -1");
}

/// Binary octahedral group 2.S_4 in SL_2(F_ell); needs sqrt(2) in F_ell (ell = +-1 mod 8).
inline Gl2Subgroup binary_octahedral(const Gl2& g) {
    const std::uint64_t ell = g.modulus();
    auto tetra = binary_tetrahedral(g);
    std::uint64_t root2 = 0;
    for (std::uint64_t r = 1; r < ell; ++r)
        if (r * r % ell == 2) root2 = r;
    if (root2 == 0) throw InvariantViolation("2 is not a square mod ell");
    const std::uint64_t inv_root2 = inv_mod(root2, ell);
    // (1 + i) / sqrt(2) with i = [[0, 1], [-1, 0]]
    const Mat2 eta = Mat2::from_entries(inv_root2, inv_root2, (ell - 1) * inv_root2 % ell,
                                        inv_root2);
    std::vector<Mat2> gens(tetra.generators().begin(), tetra.generators().end());
    gens.push_back(eta);
    return closure(g, gens);
}

/// Adds the scalar matrices to a subgroup.
inline Gl2Subgroup with_scalars(const Gl2Subgroup& h) {
    const Gl2& g = h.group();
    std::vector<Mat2> gens(h.generators().begin(), h.generators().end());
    if (g.is_field()) {
        const std::uint64_t r = primitive_root(g.modulus());
        gens.push_back(g.scalar(r));
    }
    return closure(g, gens);
}

/// GL_2 modulo {+-1}; elements are canonical representatives min(m, -m).
class CenterQuotient {
public:
    using element_type = Mat2;

    explicit CenterQuotient(Gl2 g) : g_(std::move(g)) {}

    const Gl2& base() const { return g_; }
    Mat2 canonical(const Mat2& m) const { return std::min(m, g_.negate(m)); }
    Mat2 identity() const { return canonical(g_.identity()); }
    Mat2 mul(const Mat2& x, const Mat2& y) const { return canonical(g_.mul(x, y)); }
    Mat2 inverse(const Mat2& x) const { return canonical(g_.inverse(x)); }
    std::uint64_t order() const { return g_.modulus() == 2 ? g_.order() : g_.order() / 2; }

private:
    Gl2 g_;
};

}  // namespace galsieve
