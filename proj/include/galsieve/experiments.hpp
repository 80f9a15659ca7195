#pragma once

// The experiment drivers behind the CLI subcommands. Each returns a Table
// whose rows are ordered by work-item index, so the output does not depend
// on the shard count or on thread scheduling.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "curves.hpp"
#include "derangement.hpp"
#include "equidist.hpp"
#include "galimage.hpp"
#include "gl2.hpp"
#include "heights.hpp"
#include "parallel.hpp"
#include "report.hpp"
#include "sieve.hpp"

namespace galsieve {

inline const std::vector<std::uint64_t> kDefaultElls{2, 3, 5, 7, 11, 13};
inline constexpr std::uint64_t kDefaultBudget = 1000;
inline constexpr std::uint64_t kEquidistPrimeCap = 10000;

namespace detail {

inline std::int64_t as_i64(std::uint64_t v) { return static_cast<std::int64_t>(v); }

inline std::string ell_column(std::uint64_t ell) { return "ell_" + std::to_string(ell); }

inline void check_ells(const std::vector<std::uint64_t>& ells) {
    for (auto ell : ells)
        if (!is_prime(ell)) throw CompositeModulus(ell);
}

/// Per-curve results for every ell, computed over contiguous curve shards.
inline std::vector<std::map<std::uint64_t, EllResult>> classify_box(
    const std::vector<Curve>& curves, const std::vector<std::uint64_t>& ells, std::uint64_t budget,
    std::size_t shards) {
    check_ells(ells);
    const CharacterCache cache(budget);
    std::vector<std::map<std::uint64_t, EllResult>> out(curves.size());
    shards = std::max<std::size_t>(1, shards);
    parallel_shards(shards, [&](std::size_t s) {
        auto [lo, hi] = shard_range(curves.size(), shards, s);
        for (std::size_t i = lo; i < hi; ++i) out[i] = surjective_all_ell(curves[i], ells, budget, &cache);
    });
    return out;
}

}  // namespace detail

/// Per-curve mod-ell verdicts over the height box, with |B_ell(x)| and |B(x)|.
inline Table cmd_duke(std::int64_t x, const std::vector<std::uint64_t>& ells, std::uint64_t budget,
                      std::size_t shards = 1) {
    const auto curves = WeierstrassBox(x).collect();
    const auto results = detail::classify_box(curves, ells, budget, shards);

    Table t;
    t.columns = {"a", "b"};
    for (auto ell : ells) t.columns.push_back(detail::ell_column(ell));
    t.columns.push_back("in_B");

    std::map<std::uint64_t, std::uint64_t> per_ell;
    std::uint64_t in_union = 0;
    for (std::size_t i = 0; i < curves.size(); ++i) {
        std::vector<Cell> row{curves[i].a, curves[i].b};
        bool any = false;
        for (auto ell : ells) {
            const auto& r = results[i].at(ell);
            row.emplace_back(result_label(r));
            if (is_candidate(r)) {
                ++per_ell[ell];
                any = true;
            }
        }
        row.emplace_back(std::int64_t{any});
        in_union += any;
        t.add_row(std::move(row));
    }

    const double total = static_cast<double>(weierstrass_box_size(x));
    t.add_summary("curves", detail::as_i64(curves.size()));
    for (auto ell : ells) {
        t.add_summary("B_" + std::to_string(ell), detail::as_i64(per_ell[ell]));
        t.add_summary("B_" + std::to_string(ell) + "_proportion", per_ell[ell] / total);
    }
    t.add_summary("B_union", detail::as_i64(in_union));
    t.add_summary("B_union_proportion", in_union / total);
    return t;
}

/// (ell+1)^{9/2} x^{5/2} log x, the genus-1 shape of the |B_ell(x)| bound with constant 1.
inline double blcount_bound_shape(std::uint64_t ell, double x) {
    return std::pow(ell + 1.0, 4.5) * std::pow(x, 2.5) * std::log(x);
}

/// Measured |B_ell(x)| for each x, classified once over the largest box.
inline Table cmd_blcount(std::vector<std::int64_t> xs, const std::vector<std::uint64_t>& ells,
                         std::uint64_t budget, std::size_t shards = 1) {
    std::sort(xs.begin(), xs.end());
    Table t;
    t.columns = {"x", "ell", "measured", "bound_shape", "ratio"};
    if (xs.empty()) return t;
    const auto curves = WeierstrassBox(xs.back()).collect();
    const auto results = detail::classify_box(curves, ells, budget, shards);
    for (auto x : xs) {
        std::uint64_t in_box = 0;
        for (const auto& c : curves) in_box += std::max(std::abs(c.a), std::abs(c.b)) <= x;
        t.add_summary("curves_x" + std::to_string(x), detail::as_i64(in_box));
        for (auto ell : ells) {
            std::uint64_t measured = 0;
            for (std::size_t i = 0; i < curves.size(); ++i)
                if (std::max(std::abs(curves[i].a), std::abs(curves[i].b)) <= x &&
                    is_candidate(results[i].at(ell)))
                    ++measured;
            const double shape = blcount_bound_shape(ell, static_cast<double>(x));
            t.add_row({x, detail::as_i64(ell), detail::as_i64(measured), shape,
                       static_cast<double>(measured) / shape});
        }
    }
    return t;
}

/// Least good p <= p_budget at which Frobenius passes phi_rank_is_free_rank2, 0 if none.
inline std::uint64_t tx_witness(const Curve& e, std::uint64_t p_budget, const CharacterCache* cache = nullptr) {
    if (p_budget < 5) return 0;
    for (auto p : primes_in(5, p_budget)) {
        const auto red = reduce(e, p);
        if (!red) continue;
        const FrobData f(p, cache && cache->contains(p) ? trace_of_frobenius(*red, cache->at(p)).ap()
                                                          : trace_of_frobenius(*red).ap());
        if (phi_rank_is_free_rank2(f)) return p;
    }
    return 0;
}

/// T(x) proxy: curves with no witness prime up to the budget.
inline Table cmd_tx(std::int64_t x, std::uint64_t p_budget, std::size_t shards = 1) {
    const auto curves = WeierstrassBox(x).collect();
    const CharacterCache cache(p_budget);
    std::vector<std::uint64_t> witness(curves.size(), 0);
    shards = std::max<std::size_t>(1, shards);
    parallel_shards(shards, [&](std::size_t s) {
        auto [lo, hi] = shard_range(curves.size(), shards, s);
        for (std::size_t i = lo; i < hi; ++i) witness[i] = tx_witness(curves[i], p_budget, &cache);
    });
    Table t;
    t.columns = {"a", "b", "witness_p"};
    std::uint64_t none = 0;
    for (std::size_t i = 0; i < curves.size(); ++i) {
        t.add_row({curves[i].a, curves[i].b, detail::as_i64(witness[i])});
        none += witness[i] == 0;
    }
    t.add_summary("curves", detail::as_i64(curves.size()));
    t.add_summary("without_witness", detail::as_i64(none));
    t.add_summary("fraction_without_witness",
                  curves.empty() ? 0.0 : static_cast<double>(none) / static_cast<double>(curves.size()));
    return t;
}

/// Deviation tables for every (p, ell); the family traces are computed once per p.
inline Table cmd_equidist(const std::vector<std::uint64_t>& ps, const std::vector<std::uint64_t>& ells,
                          std::size_t shards = 1, std::uint64_t p_cap = kEquidistPrimeCap) {
    detail::check_ells(ells);
    Table t;
    t.columns = {"p", "ell", "t", "d", "fiber_size", "observed", "predicted", "normalized_deviation", "tame"};
    for (auto p : ps) {
        if (p > p_cap) throw ModulusOutOfRange("p = " + std::to_string(p) + " above the equidist cap");
        const auto dist = family_traces(p, shards);
        for (auto ell : ells) {
            if (ell == p) continue;
            const auto rep = deviation_report(histogram_from_traces(dist, ell));
            for (const auto& r : rep.rows)
                t.add_row({detail::as_i64(p), detail::as_i64(ell), detail::as_i64(r.cls.t),
                           detail::as_i64(r.cls.d), detail::as_i64(r.fiber_size),
                           detail::as_i64(r.observed), r.predicted, r.normalized,
                           std::int64_t{rep.tame}});
            const std::string key = "p" + std::to_string(p) + "_ell" + std::to_string(ell);
            t.add_summary(key + "_max_abs_deviation", rep.max_abs_normalized());
            if (ell == 2) {
                const double total = static_cast<double>(family_size(p));
                std::uint64_t even = 0;
                for (const auto& r : rep.rows)
                    if (r.cls.t == 0) even = r.observed;
                t.add_summary(key + "_even_trace_fraction", even / total);
                t.add_summary(key + "_odd_trace_fraction", (total - even) / total);
            }
        }
    }
    return t;
}

/// The maximal-type subgroups tabulated by cmd_derangement, intersected with H.
inline std::vector<std::pair<std::string, Gl2Subgroup>> derangement_subgroups(const Gl2& g,
                                                                              const Gl2Subgroup& H) {
    return {{"borel", intersect(borel(g), H)},
            {"split_cartan_normalizer", intersect(split_cartan_normalizer(g), H)},
            {"nonsplit_cartan_normalizer", intersect(nonsplit_cartan_normalizer(g), H)}};
}

/// Per-det-coset ratios |C n kappa| / |SL_2| and delta = 1 - ratio for
/// H in {SL_2, GL_2} and M Borel / Cartan normalizers. Pairs violating the
/// coset hypotheses are listed in the summary instead.
inline Table cmd_derangement(const std::vector<std::uint64_t>& ells, std::uint64_t seed = 0,
                             std::uint64_t goursat_trials = 200) {
    detail::check_ells(ells);
    Table t;
    t.columns = {"ell", "H", "M", "coset_det", "ratio", "delta"};
    for (auto ell : ells) {
        if (ell > 13) throw ModulusOutOfRange("derangement tables are exhaustive; ell <= 13");
        const Gl2 g(ell);
        const auto gl = gl2_group(g);
        const auto sl = sl2_group(g);
        for (const auto& [hname, H] : {std::pair<std::string, const Gl2Subgroup&>{"SL2", sl},
                                       std::pair<std::string, const Gl2Subgroup&>{"GL2", gl}}) {
            for (const auto& [mname, M] : derangement_subgroups(g, H)) {
                try {
                    const auto table = coset_delta_table(CosetProblem{H, sl, M, std::nullopt, std::nullopt});
                    for (const auto& r : table.rows)
                        t.add_row({detail::as_i64(ell), hname, mname, detail::as_i64(r.det), r.ratio,
                                   1.0 - r.ratio});
                    t.add_summary("ell" + std::to_string(ell) + "_" + hname + "_" + mname + "_max_ratio",
                                  table.max_ratio());
                } catch (const HypothesisFailed& e) {
                    t.add_summary("ell" + std::to_string(ell) + "_" + hname + "_" + mname + "_skipped",
                                  e.reason);
                }
            }
        }
        if ((ell == 5 || ell == 7) && goursat_trials > 0) {
            const auto rep = goursat_probe(ell, goursat_trials, seed);
            for (auto o : {GoursatOutcome::NotBothSurjective, GoursatOutcome::Full, GoursatOutcome::Graph,
                           GoursatOutcome::CentralGraph, GoursatOutcome::Violation})
                t.add_summary("goursat_ell" + std::to_string(ell) + "_" + goursat_name(o),
                              detail::as_i64(rep.count(o)));
        }
    }
    return t;
}

/// Reduction of a canonical point of P^1 to P^1(F_p), as an index in [0, p]:
/// [u : 1] -> u, [1 : 0] -> p.
inline std::uint64_t reduce_p1(const ProjPoint& u, std::uint64_t p) {
    const auto r0 = static_cast<std::uint64_t>(reduce_signed(u.coords[0], p));
    const auto r1 = static_cast<std::uint64_t>(reduce_signed(u.coords[1], p));
    if (r1 == 0) return p;
    return mul_mod(r0, inv_mod(r1, p), p);
}

/// Points of P^1(Q) whose canonical numerator is even.
inline bool even_numerator(const ProjPoint& u) { return u.coords[0] % 2 == 0; }

/// omega_p = 1 - |image of B in P^1(F_p)| / (p + 1), with the image found by
/// reducing every point of B up to height `scan_height`.
template <class Pred>
Rational brute_force_omega(Pred&& in_B, std::uint64_t p, std::int64_t scan_height) {
    std::vector<bool> hit(p + 1, false);
    std::uint64_t distinct = 0;
    ProjectiveStream s(1, scan_height);
    while (auto u = s.next()) {
        if (!in_B(*u)) continue;
        const auto r = reduce_p1(*u, p);
        if (!hit[r]) {
            hit[r] = true;
            ++distinct;
        }
    }
    return Rational(static_cast<std::int64_t>(p + 1 - distinct), static_cast<std::int64_t>(p + 1));
}

/// The even-numerator sieve problem at height x, Q = floor(sqrt x), omega brute-forced.
inline SieveProblem even_numerator_problem(double x) {
    SieveProblem P;
    P.n = 1;
    P.x = x;
    P.Q = default_sieve_modulus(x);
    for (auto p : primes_in(2, P.Q)) {
        // Every residue class of P^1(F_p) is met below height 2p + 2, so this scan is exhaustive.
        P.omega[p] = brute_force_omega(even_numerator, p, static_cast<std::int64_t>(2 * p + 2));
    }
    return P;
}

inline std::uint64_t count_even_numerator(std::int64_t x) {
    std::uint64_t n = 0;
    ProjectiveStream s(1, x);
    while (auto u = s.next()) n += even_numerator(*u);
    return n;
}

/// L(Q) and the sieve bound for two demos: omega = 0 (L = 1) and the
/// even-numerator set, each next to the brute-force count it bounds.
inline Table cmd_sieve(const std::vector<std::int64_t>& xs) {
    Table t;
    t.columns = {"demo", "x", "Q", "L", "bound", "measured"};
    for (auto x : xs) {
        SieveProblem trivial;
        trivial.n = 1;
        trivial.x = static_cast<double>(x);
        trivial.Q = default_sieve_modulus(trivial.x);
        const Rational L0 = L_of_Q(trivial);
        t.add_row({std::string("trivial"), x, detail::as_i64(trivial.Q), to_double(L0),
                   sieve_bound(trivial, L0), detail::as_i64(count_height(1, x))});

        const auto even = even_numerator_problem(static_cast<double>(x));
        const Rational L1 = L_of_Q(even);
        t.add_row({std::string("even_numerator"), x, detail::as_i64(even.Q), to_double(L1),
                   sieve_bound(even, L1), detail::as_i64(count_even_numerator(x))});
    }
    return t;
}

}  // namespace galsieve
