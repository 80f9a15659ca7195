#include <gtest/gtest.h>

#include <complex>
#include <cmath>

#include "galsieve/curves.hpp"
#include "galsieve/random.hpp"

using namespace galsieve;

namespace {

// #E(F_p) by enumerating all (x, y) plus the point at infinity.
i64 brute_trace(u64 a, u64 b, u64 p) {
    u64 points = 1;
    for (u64 x = 0; x < p; ++x) {
        const u64 rhs = (x * x % p * x + a * x + b) % p;
        for (u64 y = 0; y < p; ++y)
            if (y * y % p == rhs) ++points;
    }
    return static_cast<i64>(p + 1) - static_cast<i64>(points);
}

}  // namespace

TEST(Curve, SingularInputsRejected) {
    EXPECT_THROW(Curve(0, 0), SingularCurve);
    EXPECT_THROW(Curve(-3, 2), SingularCurve);
    EXPECT_THROW(Curve(-12, 16), SingularCurve);
    EXPECT_NO_THROW(Curve(1, 1));
    EXPECT_EQ(Curve(1, 1).discriminant_core(), 31);
}

TEST(Reduce, BadPrimes) {
    const Curve e(1, 1);  // 4 + 27 = 31
    EXPECT_FALSE(reduce(e, 2));
    EXPECT_FALSE(reduce(e, 3));
    EXPECT_FALSE(reduce(e, 31));
    EXPECT_TRUE(reduce(e, 5));
    EXPECT_THROW(reduce(e, 9), CompositeModulus);
}

TEST(Trace, KnownValues) {
    EXPECT_EQ(trace_of_frobenius(*reduce(Curve(1, 1), 5)).ap(), -3);
    EXPECT_EQ(trace_of_frobenius(*reduce(Curve(1, 1), 5)).point_count(), 9u);
    // j = 0: supersingular at p = 2 mod 3.
    for (u64 p : {5, 11, 17, 23, 29}) EXPECT_EQ(trace_of_frobenius(*reduce(Curve(0, 1), p)).ap(), 0);
    // j = 1728: supersingular at p = 3 mod 4.
    for (u64 p : {7, 11, 19, 23, 31}) EXPECT_EQ(trace_of_frobenius(*reduce(Curve(-1, 0), p)).ap(), 0);
}

TEST(Trace, MatchesBruteForceForAllCurvesSmallP) {
    for (u64 p : {5, 7, 11, 13}) {
        const QuadraticCharacter chi(p);
        for (u64 a = 0; a < p; ++a)
            for (u64 b = 0; b < p; ++b) {
                if ((4 * a * a * a + 27 * b * b) % p == 0) continue;
                ASSERT_EQ(trace_from_character_sum(a, b, chi), brute_trace(a, b, p)) << p << " " << a << " " << b;
            }
    }
}

TEST(Trace, HasseBoundOnRandomCurves) {
    SplitMix64 rng(3);
    for (u64 p : {101, 1009, 10007}) {
        const Field f(p);
        for (int i = 0; i < 40; ++i) {
            const i64 a = static_cast<i64>(rng.below(p)), b = static_cast<i64>(rng.below(p));
            if (!Curve::nonsingular(a, b)) continue;
            const auto red = reduce(Curve(a, b), p);
            if (!red) continue;
            const auto ap = trace_of_frobenius(*red).ap();
            ASSERT_LE(ap * ap, static_cast<i64>(4 * p));
        }
    }
}

TEST(FrobData, HasseViolationThrows) {
    EXPECT_THROW(FrobData(5, 5), HasseViolation);
    EXPECT_NO_THROW(FrobData(5, 4));
    EXPECT_NO_THROW(FrobData(5, -4));
}

TEST(CharPoly, ReductionAndEqualCharacteristic) {
    const FrobData f(5, -3);
    const auto c = frobenius_charpoly_mod(f, 7);
    EXPECT_EQ(c.t, 4u);
    EXPECT_EQ(c.d, 5u);
    EXPECT_THROW(frobenius_charpoly_mod(f, 5), EqualCharacteristic);
    EXPECT_EQ(frobenius_charpoly_mod(FrobData(13, 2), 2).d, 1u);
}

TEST(PhiRank, ExplicitCases) {
    EXPECT_FALSE(phi_rank_is_free_rank2(FrobData(5, 0)));
    EXPECT_FALSE(phi_rank_is_free_rank2(FrobData(7, 0)));
    EXPECT_FALSE(phi_rank_is_free_rank2(FrobData(3, 3)));   // a^2 = 3p
    EXPECT_FALSE(phi_rank_is_free_rank2(FrobData(2, 2)));   // a^2 = 2p
    EXPECT_TRUE(phi_rank_is_free_rank2(FrobData(5, -3)));
    EXPECT_TRUE(phi_rank_is_free_rank2(FrobData(7, 1)));
}

// Numerical oracle: the roots pi, conj(pi) of x^2 - a x + p generate a free
// rank-2 group exactly when pi / conj(pi) is not a root of unity. Root
// orders for an imaginary quadratic integer are at most 12.
TEST(PhiRank, AgreesWithRootOfUnityOracle) {
    auto oracle = [](i64 a, i64 p) {
        const std::complex<double> pi(a / 2.0, std::sqrt(4.0 * p - double(a) * a) / 2.0);
        const auto z = pi / std::conj(pi);
        for (int k = 1; k <= 12; ++k)
            if (std::abs(std::pow(z, k) - 1.0) < 1e-9) return false;
        return true;
    };
    for (u64 p : {2, 3, 5, 7, 11, 13, 17, 101, 1009}) {
        const i64 bound = static_cast<i64>(std::floor(2 * std::sqrt(double(p))));
        for (i64 a = -bound; a <= bound; ++a) {
            ASSERT_EQ(phi_rank_is_free_rank2(FrobData(p, a)), oracle(a, static_cast<i64>(p))) << p << " " << a;
        }
    }
}

TEST(CharacterCache, ServesSameTables) {
    const CharacterCache cache(200);
    EXPECT_TRUE(cache.contains(197));
    EXPECT_FALSE(cache.contains(3));
    const auto red = reduce(Curve(2, 3), 197);
    EXPECT_EQ(trace_of_frobenius(*red, cache.at(197)).ap(), trace_of_frobenius(*red).ap());
}
