#include <gtest/gtest.h>

#include "galsieve/galimage.hpp"
#include "galsieve/gl2.hpp"
#include "galsieve/random.hpp"

using namespace galsieve;

namespace {

// Feeds the classes of the given matrices, shuffled and repeated, the way a
// Frobenius stream landing in that subgroup would.
ImageVerdict run_stream(std::uint64_t ell, const Gl2& g, std::span<const Mat2> elems, std::uint64_t seed,
                        int rounds = 3) {
    ModEllClassifier c(ell);
    SplitMix64 rng(seed);
    for (int r = 0; r < rounds; ++r)
        for (std::size_t i = 0; i < elems.size(); ++i) c.observe(conj_invariants(g, elems[rng.below(elems.size())]));
    return c.verdict();
}

int count_roots_mod_p(i64 a, i64 b, u64 p) {
    int n = 0;
    for (u64 x = 0; x < p; ++x)
        if ((x * x % p * x + reduce_signed(a, p) * x + reduce_signed(b, p)) % p == 0) ++n;
    return n;
}

}  // namespace

TEST(Classifier, RejectsSmallEll) { EXPECT_THROW(ModEllClassifier(2), ModulusOutOfRange); }

TEST(Classifier, ExceptionalValues) {
    // ell = 5: u^2 - 3u + 1 = (u - 4)^2, so the set is {0, 1, 2, 4}.
    EXPECT_EQ(ModEllClassifier(5).exceptional_values(), (std::set<std::uint64_t>{0, 1, 2, 4}));
    // ell = 11: roots of u^2 - 3u + 1 are 5 and 9.
    EXPECT_EQ(ModEllClassifier(11).exceptional_values(), (std::set<std::uint64_t>{0, 1, 2, 4, 5, 9}));
}

TEST(Classifier, SoundOnMaximalSubgroups) {
    for (std::uint64_t ell : {5, 7, 11, 13}) {
        const Gl2 g(ell);
        const auto b = borel(g), ns = split_cartan_normalizer(g), nn = nonsplit_cartan_normalizer(g);
        EXPECT_TRUE(run_stream(ell, g, b.elements(), ell).has(Obstruction::Reducible)) << ell;
        EXPECT_TRUE(run_stream(ell, g, ns.elements(), ell).has(Obstruction::SplitCartanNorm)) << ell;
        EXPECT_TRUE(run_stream(ell, g, nn.elements(), ell).has(Obstruction::NonsplitCartanNorm)) << ell;
        const auto ex = with_scalars(binary_tetrahedral(g));
        EXPECT_TRUE(run_stream(ell, g, ex.elements(), ell).has(Obstruction::Exceptional)) << ell;
    }
    const Gl2 g7(7);
    const auto octa = with_scalars(binary_octahedral(g7));
    EXPECT_TRUE(run_stream(7, g7, octa.elements(), 1).has(Obstruction::Exceptional));
}

TEST(Classifier, SoundOnEveryElementOfTheSubgroup) {
    // Exhaustive rather than sampled: each element class alone never clears its own obstruction.
    const Gl2 g(7);
    const auto nn = nonsplit_cartan_normalizer(g);
    ModEllClassifier c(7);
    for (const auto& m : nn.elements()) c.observe(conj_invariants(g, m));
    EXPECT_TRUE(c.verdict().has(Obstruction::NonsplitCartanNorm));
    EXPECT_FALSE(c.verdict().has(Obstruction::Reducible));
}

TEST(Classifier, CompleteOnFullGroup) {
    for (std::uint64_t ell : {5, 7, 11, 13}) {
        const Gl2 g(ell);
        const auto gl = gl2_group(g);
        EXPECT_TRUE(run_stream(ell, g, gl.elements(), 99).contains_sl2()) << ell;
    }
}

TEST(Classifier, EllThreeStaysCandidate) {
    // Every class of GL_2(F_3) meets the nonsplit Cartan normalizer.
    const Gl2 g(3);
    const auto gl = gl2_group(g);
    const auto v = run_stream(3, g, gl.elements(), 3);
    EXPECT_FALSE(v.contains_sl2());
    EXPECT_TRUE(v.has(Obstruction::NonsplitCartanNorm));
    EXPECT_FALSE(v.has(Obstruction::Reducible));
}

TEST(Classifier, LabelFormat) {
    ImageVerdict v;
    v.open_reasons = static_cast<std::uint8_t>(Obstruction::SplitCartanNorm) |
                     static_cast<std::uint8_t>(Obstruction::Exceptional);
    EXPECT_EQ(v.label(), "Candidate(SplitCartanNorm+Exceptional)");
    v.open_reasons = 0;
    EXPECT_EQ(v.label(), "ContainsSL2");
}

TEST(ClassifyCurve, GenericCurveIsSurjective) {
    EXPECT_TRUE(classify_mod_ell(Curve(1, 1), 5, 100).contains_sl2());
    for (std::uint64_t ell : {7, 11, 13}) EXPECT_TRUE(classify_mod_ell(Curve(1, 1), ell, 1000).contains_sl2()) << ell;
}

TEST(ClassifyCurve, CmCurvesAreCandidates) {
    for (std::uint64_t ell : {5, 7, 11, 13}) {
        const auto j0 = classify_mod_ell(Curve(0, 1), ell, 1000);
        const auto j1728 = classify_mod_ell(Curve(-1, 0), ell, 1000);
        EXPECT_FALSE(j0.contains_sl2()) << ell;
        EXPECT_FALSE(j1728.contains_sl2()) << ell;
        // Q(sqrt -3) splits at ell = 1 mod 3, Q(i) at ell = 1 mod 4.
        EXPECT_TRUE(j0.has(ell % 3 == 1 ? Obstruction::SplitCartanNorm : Obstruction::NonsplitCartanNorm));
        EXPECT_TRUE(j1728.has(ell % 4 == 1 ? Obstruction::SplitCartanNorm : Obstruction::NonsplitCartanNorm));
    }
}

TEST(ClassifyCurve, RationalTorsionKeepsBorelOpen) {
    // (3, 8) is a point of order 7 on y^2 = x^3 - 43x + 166.
    EXPECT_TRUE(classify_mod_ell(Curve(-43, 166), 7, 1000).has(Obstruction::Reducible));
}

TEST(ClassifyCurve, BatchEqualsSingle) {
    const CharacterCache cache(500);
    SplitMix64 rng(2024);
    for (int i = 0; i < 30; ++i) {
        const i64 a = static_cast<i64>(rng.below(41)) - 20, b = static_cast<i64>(rng.below(41)) - 20;
        if (!Curve::nonsingular(a, b)) continue;
        const Curve e(a, b);
        const auto many = classify_many(e, {3, 5, 7, 11}, 500, &cache);
        for (std::uint64_t ell : {3, 5, 7, 11}) ASSERT_EQ(many.at(ell), classify_mod_ell(e, ell, 500));
    }
}

TEST(ClassifyCurve, TinyBudgetLeavesEverythingOpen) {
    const auto v = classify_mod_ell(Curve(1, 1), 5, 4);
    EXPECT_EQ(v.open_reasons, kAllObstructions);
    EXPECT_EQ(v.primes_used, 0u);
}

TEST(Mod2, KnownCubics) {
    EXPECT_EQ(mod2_image(Curve(1, 1)), Mod2Image::Full);
    EXPECT_EQ(mod2_image(Curve(0, 1)), Mod2Image::OrderLE2);
    EXPECT_EQ(mod2_image(Curve(-1, 0)), Mod2Image::OrderLE2);
    EXPECT_EQ(mod2_image(Curve(-3, 1)), Mod2Image::Cyclic3);
    EXPECT_EQ(mod2_image(Curve(-7, 6)), Mod2Image::OrderLE2);  // roots 1, 2, -3
}

// Frobenius cycle types of the 2-division cubic: Cyclic3 never has exactly one
// root mod p, OrderLE2 always has one, Full eventually shows all of 0, 1, 3.
TEST(Mod2, AgreesWithRootCountsModP) {
    for (i64 a = -8; a <= 8; ++a)
        for (i64 b = -8; b <= 8; ++b) {
            if (!Curve::nonsingular(a, b)) continue;
            const Curve e(a, b);
            std::set<int> counts;
            for (u64 p : primes_in(5, 400))
                if (reduce(e, p)) counts.insert(count_roots_mod_p(a, b, p));
            switch (mod2_image(e)) {
                case Mod2Image::Full: EXPECT_TRUE(counts.count(0) && counts.count(1)) << a << "," << b; break;
                case Mod2Image::Cyclic3: EXPECT_FALSE(counts.count(1)) << a << "," << b; break;
                case Mod2Image::OrderLE2: EXPECT_FALSE(counts.count(0)) << a << "," << b; break;
            }
        }
}

TEST(SurjectiveAllEll, MixesMod2AndOdd) {
    const auto r = surjective_all_ell(Curve(1, 1), {2, 3, 5, 7}, 1000);
    EXPECT_EQ(result_label(r.at(2)), "Full");
    EXPECT_FALSE(is_candidate(r.at(2)));
    EXPECT_TRUE(is_candidate(r.at(3)));
    EXPECT_FALSE(is_candidate(r.at(5)));
    EXPECT_FALSE(is_candidate(r.at(7)));
}

TEST(Mod2, FullImageGivesOddTraceDensityOneThird) {
    // Elements of GL_2(F_2) = S_3 with trace 1 are the two 3-cycles.
    for (const auto& e : {Curve(1, 1), Curve(1, 3), Curve(-2, 5)}) {
        ASSERT_EQ(mod2_image(e), Mod2Image::Full);
        std::uint64_t good = 0, odd = 0;
        for (auto p : primes_in(5, 10000)) {
            const auto red = reduce(e, p);
            if (!red) continue;
            ++good;
            odd += trace_of_frobenius(*red).ap() % 2 != 0;
        }
        EXPECT_NEAR(double(odd) / double(good), 1.0 / 3.0, 0.05) << e.a << " " << e.b;
    }
}
