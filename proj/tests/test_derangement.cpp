#include <gtest/gtest.h>

#include "galsieve/derangement.hpp"
#include "galsieve/random.hpp"

using namespace galsieve;

namespace {

bool reducible_charpoly(const Gl2& g, const Mat2& m) {
    const Field f(g.modulus());
    const auto c = conj_invariants(g, m);
    const auto disc = f.from_unsigned(c.t) * f.from_unsigned(c.t) - f(4) * f.from_unsigned(c.d);
    return legendre(disc) != -1;
}

// Fixed points on P^1(F_ell): count lines v with m v parallel to v.
bool fixes_a_line(const Gl2& g, const Mat2& m) {
    const std::uint64_t l = g.modulus();
    auto parallel = [&](std::uint64_t x, std::uint64_t y) {
        const std::uint64_t mx = (m.a() * x + m.b() * y) % l, my = (m.c() * x + m.d() * y) % l;
        return (mx * y + l * l - my * x) % l == 0;
    };
    if (parallel(1, 0)) return true;
    for (std::uint64_t u = 0; u < l; ++u)
        if (parallel(u, 1)) return true;
    return false;
}

std::vector<std::pair<std::string, Gl2Subgroup>> maximal_types(const Gl2& g, const Gl2Subgroup& H) {
    return {{"borel", intersect(borel(g), H)},
            {"split", intersect(split_cartan_normalizer(g), H)},
            {"nonsplit", intersect(nonsplit_cartan_normalizer(g), H)}};
}

}  // namespace

TEST(ConjugateUnion, TrivialCases) {
    const Gl2 g(5);
    const auto sl = sl2_group(g);
    const auto all = conjugate_union(sl, sl);
    EXPECT_EQ(all.size(), sl.order());
    EXPECT_EQ(conjugate_union(sl, trivial_subgroup(g)), std::vector<Mat2>{g.identity()});
    EXPECT_THROW(conjugate_union(sl, borel(g)), NotASubgroup);
}

TEST(ConjugateUnion, BorelConjugatesAreReducibleElements) {
    for (std::uint64_t ell : {5, 7, 11}) {
        const Gl2 g(ell);
        const auto sl = sl2_group(g);
        const auto C = conjugate_union(sl, intersect(borel(g), sl));
        std::vector<Mat2> expect;
        for (const auto& m : sl.elements())
            if (reducible_charpoly(g, m)) expect.push_back(m);
        EXPECT_EQ(C, expect) << ell;
        for (const auto& m : sl.elements()) ASSERT_EQ(fixes_a_line(g, m), reducible_charpoly(g, m));
    }
}

TEST(Derangement, FixedPointIffInConjugateUnion) {
    for (std::uint64_t ell : {3, 5, 7}) {
        const Gl2 g(ell);
        for (const auto& H : {sl2_group(g), gl2_group(g)}) {
            for (const auto& [name, M] : maximal_types(g, H)) {
                if (M.order() == H.order()) continue;
                const ActionTable act(H, M);
                EXPECT_EQ(act.point_count(), H.order() / M.order());
                const auto C = conjugate_union(H, M);
                for (const auto& x : H.elements())
                    ASSERT_EQ(act.has_fixed_point(x), std::binary_search(C.begin(), C.end(), x))
                        << ell << " " << name;
            }
        }
    }
}

TEST(Derangement, ActionIsAnAction) {
    const Gl2 g(5);
    const auto H = gl2_group(g);
    const ActionTable act(H, borel(g));
    SplitMix64 rng(8);
    for (int i = 0; i < 200; ++i) {
        const auto x = H.elements()[rng.below(H.order())], y = H.elements()[rng.below(H.order())];
        const std::size_t pt = rng.below(act.point_count());
        ASSERT_EQ(act.act(g, g.mul(x, y), pt), act.act(g, x, act.act(g, y, pt)));
    }
    EXPECT_EQ(act.point_count(), 6u);
}

TEST(Derangement, ProportionExamples) {
    const Gl2 g(5);
    const auto sl = sl2_group(g);
    const auto b = intersect(borel(g), sl);
    EXPECT_EQ(b.order(), 20u);
    std::uint64_t irreducible = 0;
    for (const auto& m : sl.elements()) irreducible += !reducible_charpoly(g, m);
    const auto d = derangement_proportion(sl, b);
    EXPECT_EQ(d, (Proportion{irreducible, 120}));
    EXPECT_THROW(derangement_proportion(sl, sl), NotASubgroup);
    // identity is never a derangement
    EXPECT_EQ(derangement_proportion(sl, b, [&](const Mat2& m) { return m == g.identity(); }).num, 0u);
}

TEST(Derangement, PerCosetDeltaPositiveForBorel) {
    const Gl2 g(5);
    const auto gl = gl2_group(g);
    for (std::uint64_t d = 1; d < 5; ++d) {
        const auto r = derangement_proportion(gl, borel(g), det_coset(g, d));
        EXPECT_EQ(r.den, 120u);
        EXPECT_GT(r.value(), 0.2);
    }
}

TEST(CosetTable, ConsistentWithDerangementProportion) {
    for (std::uint64_t ell : {5, 7}) {
        const Gl2 g(ell);
        const auto gl = gl2_group(g), sl = sl2_group(g);
        for (const auto& [name, M] : maximal_types(g, gl)) {
            const auto table = coset_delta_table(CosetProblem{gl, sl, M, std::nullopt, std::nullopt});
            EXPECT_EQ(table.rows.size(), ell - 1);
            for (const auto& row : table.rows) {
                const auto delta = derangement_proportion(gl, M, det_coset(g, row.det));
                EXPECT_NEAR(delta.value(), 1.0 - row.ratio, 1e-12) << name;
            }
            EXPECT_LT(table.max_ratio(), 1.0) << name;
        }
    }
}

TEST(CosetTable, Hypotheses) {
    const Gl2 g(7);
    const auto gl = gl2_group(g), sl = sl2_group(g);
    try {
        coset_delta_table(CosetProblem{gl, sl, gl, std::nullopt, std::nullopt});
        FAIL();
    } catch (const HypothesisFailed& e) {
        EXPECT_EQ(e.reason, "M_contains_S");
    }
    // Borel intersected with SL_2 does not surject onto GL_2 / SL_2.
    try {
        coset_delta_table(CosetProblem{gl, sl, intersect(borel(g), sl), std::nullopt, std::nullopt});
        FAIL();
    } catch (const HypothesisFailed& e) {
        EXPECT_EQ(e.reason, "M_not_onto_H_over_Hg");
    }
    try {
        coset_delta_table(CosetProblem{gl, trivial_subgroup(g), borel(g), std::nullopt, std::nullopt});
        FAIL();
    } catch (const HypothesisFailed& e) {
        EXPECT_EQ(e.reason, "M_not_onto_H_over_Hg");
    }
    try {
        coset_delta_table(CosetProblem{gl, gl, intersect(borel(g), sl), std::nullopt, sl});
        FAIL();
    } catch (const HypothesisFailed& e) {
        EXPECT_EQ(e.reason, "M_not_onto_H_over_H0");
    }
    EXPECT_THROW(coset_delta_table(CosetProblem{gl, borel(g), borel(g), std::nullopt, std::nullopt}), NotNormal);
}

TEST(CosetTable, TrivialMGivesOneOverS) {
    // H = H_g = S = SL_2, M trivial: C = {1}, ratio 1/|S|.
    const Gl2 g(5);
    const auto sl = sl2_group(g);
    const auto table = coset_delta_table(CosetProblem{sl, sl, trivial_subgroup(g), sl, std::nullopt});
    ASSERT_EQ(table.rows.size(), 1u);
    EXPECT_DOUBLE_EQ(table.rows[0].ratio, 1.0 / 120.0);
}

TEST(Centralizer, LowerBounds) {
    const Gl2 g(5);
    const auto gl = gl2_group(g);
    SplitMix64 rng(21);
    for (int i = 0; i < 20; ++i) {
        const auto beta = gl.elements()[rng.below(gl.order())];
        const auto n = centralizer_order(gl, beta);
        EXPECT_GE(n, 4u);
        const auto c = conj_invariants(g, beta);
        const bool scalar = beta.b() == 0 && beta.c() == 0 && beta.a() == beta.d();
        const bool repeated = (c.t * c.t + 4 * (5 - c.d)) % 5 == 0;
        if (repeated && !scalar) {
            EXPECT_GE(n, 20u);
        }
    }
    // an explicit unipotent
    EXPECT_EQ(centralizer_order(gl, g.make(1, 1, 0, 1)), 20u);
}

TEST(Goursat, DiagonalAndFull) {
    const Gl2 g(5);
    const auto gens = g.sl2_generators();
    std::vector<Sl2Pair::element_type> diag;
    for (const auto& x : gens) diag.push_back({x, x});
    EXPECT_EQ(classify_product_subgroup(g, diag), GoursatOutcome::Graph);

    // An outer automorphism composed with identity: still a graph.
    const Mat2 w = g.make(2, 0, 0, 1);
    std::vector<Sl2Pair::element_type> twisted;
    for (const auto& x : gens) twisted.push_back({x, conjugate(g, w, x)});
    EXPECT_EQ(classify_product_subgroup(g, twisted), GoursatOutcome::Graph);

    std::vector<Sl2Pair::element_type> full{{gens[0], g.identity()}, {gens[1], g.identity()},
                                            {g.identity(), gens[0]}, {g.identity(), gens[1]}};
    EXPECT_EQ(classify_product_subgroup(g, full), GoursatOutcome::Full);

    std::vector<Sl2Pair::element_type> central;
    const Mat2 minus = g.negate(g.identity());
    for (const auto& x : gens) central.push_back({x, x});
    central.push_back({minus, g.identity()});
    EXPECT_EQ(classify_product_subgroup(g, central), GoursatOutcome::CentralGraph);

    std::vector<Sl2Pair::element_type> partial{{gens[0], gens[0]}};
    EXPECT_EQ(classify_product_subgroup(g, partial), GoursatOutcome::NotBothSurjective);
}

TEST(Goursat, ProbeIsSeededAndHasNoAdjointViolations) {
    const auto a = goursat_probe(5, 60, 42), b = goursat_probe(5, 60, 42);
    EXPECT_EQ(a.counts, b.counts);
    EXPECT_EQ(a.count(GoursatOutcome::Violation), 0u);
    std::uint64_t total = 0;
    for (const auto& [o, n] : a.counts) total += n;
    EXPECT_EQ(total, 60u);
    EXPECT_THROW(goursat_probe(11, 1, 0), ModulusOutOfRange);
}
