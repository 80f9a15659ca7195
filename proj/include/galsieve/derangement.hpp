#pragma once

// Exhaustive derangement and coset computations in GL_2(F_ell) for small ell:
// the union of conjugates C of a subgroup M, derangement proportions on H/M,
// per-coset ratios |C n kappa| / |H_g|, and a Goursat probe on SL_2 x SL_2.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "errors.hpp"
#include "gl2.hpp"
#include "group.hpp"
#include "random.hpp"

namespace galsieve {

/// Sorted union of h M h^{-1} over h in H. Conjugates depend only on the coset
/// hM, so one representative per coset is used.
inline std::vector<Mat2> conjugate_union(const Gl2Subgroup& H, const Gl2Subgroup& M) {
    if (!M.is_subgroup_of(H)) throw NotASubgroup("M is not contained in H");
    const Gl2& g = H.group();
    std::unordered_map<std::uint64_t, bool> covered;
    covered.reserve(H.order() * 2);
    ElementSet<Gl2> C;
    for (const Mat2& h : H.elements()) {
        if (covered.count(h.packed)) continue;
        for (const Mat2& m : M.elements()) covered.emplace(g.mul(h, m).packed, true);
        const Mat2 hinv = g.inverse(h);
        for (const Mat2& m : M.elements()) C.insert(g.mul(g.mul(h, m), hinv));
    }
    std::vector<Mat2> out(C.begin(), C.end());
    std::sort(out.begin(), out.end());
    return out;
}

/// The action of H on the left cosets H/M, with a fixed-point flag per element.
class ActionTable {
public:
    ActionTable(const Gl2Subgroup& H, const Gl2Subgroup& M) {
        if (!M.is_subgroup_of(H)) throw NotASubgroup("M is not contained in H");
        const Gl2& g = H.group();
        for (const Mat2& h : H.elements()) {
            if (coset_of_.count(h.packed)) continue;
            const std::size_t id = reps_.size();
            reps_.push_back(h);
            for (const Mat2& m : M.elements()) coset_of_.emplace(g.mul(h, m).packed, id);
        }
        GALSIEVE_ASSERT(reps_.size() * M.order() == H.order(), "|H/M| = |H| / |M|");
        for (const Mat2& x : H.elements()) {
            bool fixed = false;
            for (std::size_t i = 0; i < reps_.size() && !fixed; ++i)
                fixed = coset_of_.at(g.mul(x, reps_[i]).packed) == i;
            has_fixed_point_.emplace(x.packed, fixed);
        }
    }

    std::size_t point_count() const { return reps_.size(); }
    bool has_fixed_point(const Mat2& x) const { return has_fixed_point_.at(x.packed); }

    /// Image of coset index i under left multiplication by x.
    std::size_t act(const Gl2& g, const Mat2& x, std::size_t i) const {
        return coset_of_.at(g.mul(x, reps_[i]).packed);
    }

private:
    std::vector<Mat2> reps_;
    std::unordered_map<std::uint64_t, std::size_t> coset_of_;
    std::unordered_map<std::uint64_t, bool> has_fixed_point_;
};

struct Proportion {
    std::uint64_t num = 0;
    std::uint64_t den = 0;
    double value() const { return den == 0 ? 0.0 : static_cast<double>(num) / den; }
    friend bool operator==(const Proportion& a, const Proportion& b) {
        return static_cast<unsigned __int128>(a.num) * b.den ==
               static_cast<unsigned __int128>(b.num) * a.den;
    }
};

/// delta(kappa, H/M): share of elements of H in kappa that lie in no conjugate of M.
template <class Kappa>
Proportion derangement_proportion(const Gl2Subgroup& H, const Gl2Subgroup& M, Kappa&& kappa) {
    if (M.order() == H.order()) throw NotASubgroup("M must be a proper subgroup of H");
    const auto C = conjugate_union(H, M);
    Proportion r;
    for (const Mat2& x : H.elements()) {
        if (!kappa(x)) continue;
        ++r.den;
        if (!std::binary_search(C.begin(), C.end(), x)) ++r.num;
    }
    return r;
}

inline Proportion derangement_proportion(const Gl2Subgroup& H, const Gl2Subgroup& M) {
    return derangement_proportion(H, M, [](const Mat2&) { return true; });
}

/// Inputs of the coset bound: S <= H, H_g normal in H, H_0 = H n G0(F_ell).
/// With G = GL_2 connected, H_0 defaults to H and S to GL_2(F_ell)'.
struct CosetProblem {
    Gl2Subgroup H;
    Gl2Subgroup H_g;
    Gl2Subgroup M;
    std::optional<Gl2Subgroup> S;
    std::optional<Gl2Subgroup> H_0;
};

struct CosetRow {
    Mat2 representative;
    std::uint64_t det = 0;
    std::uint64_t hits = 0;  ///< |C n kappa|
    double ratio = 0;        ///< |C n kappa| / |H_g|
};

struct CosetDeltaTable {
    std::vector<CosetRow> rows;
    double max_ratio() const {
        double m = 0;
        for (const auto& r : rows) m = std::max(m, r.ratio);
        return m;
    }
};

namespace detail {

inline std::uint64_t product_order(const Gl2Subgroup& a, const Gl2Subgroup& b) {
    return a.order() * b.order() / intersect(a, b).order();
}

}  // namespace detail

/// Per-coset ratios over the H_g-cosets of H_0 H_g. Throws HypothesisFailed
/// with reason M_contains_S, M_not_onto_H_over_Hg or M_not_onto_H_over_H0.
inline CosetDeltaTable coset_delta_table(const CosetProblem& P) {
    const Gl2Subgroup& H = P.H;
    const Gl2& g = H.group();
    const Gl2Subgroup S = P.S ? *P.S : commutator_subgroup(gl2_group(g));
    const Gl2Subgroup H0 = P.H_0 ? *P.H_0 : H;
    if (!P.M.is_subgroup_of(H)) throw NotASubgroup("M is not contained in H");
    if (!is_normal_in(P.H_g, H)) throw NotNormal("H_g is not a normal subgroup of H");
    if (!is_normal_in(H0, H)) throw NotNormal("H_0 is not a normal subgroup of H");
    if (S.is_subgroup_of(P.M)) throw HypothesisFailed("M_contains_S");
    if (detail::product_order(P.M, P.H_g) != H.order())
        throw HypothesisFailed("M_not_onto_H_over_Hg");
    if (detail::product_order(P.M, H0) != H.order()) throw HypothesisFailed("M_not_onto_H_over_H0");

    const auto C = conjugate_union(H, P.M);
    std::unordered_map<std::uint64_t, bool> seen;
    CosetDeltaTable table;
    for (const Mat2& x : H.elements()) {
        if (seen.count(x.packed)) continue;
        CosetRow row{x, g.det(x), 0, 0};
        bool in_h0hg = false;
        for (const Mat2& k : P.H_g.elements()) {
            const Mat2 y = g.mul(x, k);
            seen.emplace(y.packed, true);
            in_h0hg = in_h0hg || H0.contains(y);
            if (std::binary_search(C.begin(), C.end(), y)) ++row.hits;
        }
        if (!in_h0hg) continue;
        row.ratio = static_cast<double>(row.hits) / static_cast<double>(P.H_g.order());
        table.rows.push_back(row);
    }
    return table;
}

inline std::uint64_t centralizer_order(const Gl2Subgroup& G, const Mat2& beta) {
    const Gl2& g = G.group();
    std::uint64_t n = 0;
    for (const Mat2& x : G.elements())
        if (g.mul(x, beta) == g.mul(beta, x)) ++n;
    return n;
}

enum class GoursatOutcome {
    NotBothSurjective,
    Full,          ///< all of S x S
    Graph,         ///< {(s, f(s))} for an isomorphism f
    CentralGraph,  ///< graph modulo the centre {+-1}: order 2|S|, adjoint image a graph
    Violation,     ///< adjoint image neither full nor a graph
};

inline const char* goursat_name(GoursatOutcome o) {
    switch (o) {
        case GoursatOutcome::NotBothSurjective: return "not_both_surjective";
        case GoursatOutcome::Full: return "full_product";
        case GoursatOutcome::Graph: return "graph";
        case GoursatOutcome::CentralGraph: return "graph_mod_center";
        case GoursatOutcome::Violation: return "violation";
    }
    return "?";
}

using Sl2Pair = ProductGroup<Gl2, Gl2>;
using PslPair = ProductGroup<CenterQuotient, CenterQuotient>;

/// Classifies the subgroup of SL_2(F_ell)^2 generated by `gens`. Goursat's
/// lemma for the simple quotient PSL_2(F_ell) allows only a full product or a
/// graph there; SL_2 itself also admits the central fibre product of order 2|S|.
inline GoursatOutcome classify_product_subgroup(const Gl2& g, const std::vector<Sl2Pair::element_type>& gens,
                                                std::size_t cap = kDefaultClosureCap) {
    const std::uint64_t s = g.sl2_order();
    std::vector<Mat2> left, right;
    for (const auto& x : gens) {
        left.push_back(x.first);
        right.push_back(x.second);
    }
    if (closure(g, left, cap).order() != s || closure(g, right, cap).order() != s)
        return GoursatOutcome::NotBothSurjective;

    const Sl2Pair product(g, g);
    const auto k = closure(product, gens, cap);

    const CenterQuotient q(g);
    const PslPair adjoint(q, q);
    std::vector<PslPair::element_type> adj_gens;
    for (const auto& x : gens) adj_gens.push_back({q.canonical(x.first), q.canonical(x.second)});
    const auto k_adj = closure(adjoint, adj_gens, cap);
    const std::uint64_t ps = s / 2;  // |PSL_2(F_ell)|, ell odd
    const bool adj_ok = k_adj.order() == ps || k_adj.order() == ps * ps;
    if (!adj_ok) return GoursatOutcome::Violation;

    if (k.order() == s * s) return GoursatOutcome::Full;
    if (k.order() == s) {
        // Order |S| with surjective first projection: the projection is a bijection.
        std::vector<Mat2> firsts;
        for (const auto& x : k.elements()) firsts.push_back(x.first);
        std::sort(firsts.begin(), firsts.end());
        const bool injective = std::adjacent_find(firsts.begin(), firsts.end()) == firsts.end();
        return injective ? GoursatOutcome::Graph : GoursatOutcome::Violation;
    }
    if (k.order() == 2 * s && k_adj.order() == ps) return GoursatOutcome::CentralGraph;
    return GoursatOutcome::Violation;
}

struct GoursatReport {
    std::uint64_t ell = 0;
    std::uint64_t trials = 0;
    std::map<GoursatOutcome, std::uint64_t> counts;
    std::uint64_t count(GoursatOutcome o) const {
        auto it = counts.find(o);
        return it == counts.end() ? 0 : it->second;
    }
};

/// `trials` random pairs of generators of SL_2(F_ell) x SL_2(F_ell), seeded SplitMix64.
inline GoursatReport goursat_probe(std::uint64_t ell, std::uint64_t trials, std::uint64_t seed,
                                   std::size_t cap = kDefaultClosureCap) {
    if (ell != 5 && ell != 7) throw ModulusOutOfRange("Goursat probe runs at ell in {5, 7}");
    const Gl2 g(ell);
    const auto sl2 = sl2_group(g);
    const auto elems = sl2.elements();
    SplitMix64 rng(seed);
    GoursatReport rep{ell, trials, {}};
    for (std::uint64_t t = 0; t < trials; ++t) {
        std::vector<Sl2Pair::element_type> gens;
        for (int k = 0; k < 2; ++k)
            gens.push_back({elems[rng.below(elems.size())], elems[rng.below(elems.size())]});
        ++rep.counts[classify_product_subgroup(g, gens, cap)];
    }
    return rep;
}

}  // namespace galsieve
