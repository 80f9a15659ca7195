#pragma once

// Frobenius classes across the whole Weierstrass family over F_p: histograms
// of (a_p mod ell, p mod ell), the main-term prediction |C|/|SL_2| (p^2 - p),
// and deviations normalized by p^{3/2}.

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "curves.hpp"
#include "gl2.hpp"
#include "modarith.hpp"
#include "parallel.hpp"

namespace galsieve {

/// Number of nonsingular (a, b) in F_p^2: the singular locus is {(-3t^2, 2t^3)}.
inline std::uint64_t family_size(std::uint64_t p) { return p * p - p; }

/// Multiplicities of each trace a_p over the nonsingular (a, b) in F_p^2.
struct TraceDistribution {
    std::uint64_t p = 0;
    i64 bound = 0;                     ///< floor(2 sqrt p); traces lie in [-bound, bound]
    std::vector<std::uint64_t> counts;  ///< counts[a_p + bound]

    explicit TraceDistribution(std::uint64_t prime = 0) : p(prime) {
        while ((bound + 1) * (bound + 1) <= 4 * static_cast<i64>(prime)) ++bound;
        counts.assign(2 * bound + 1, 0);
    }
    void add(i64 ap, std::uint64_t mult = 1) {
        GALSIEVE_ASSERT(ap >= -bound && ap <= bound, "Hasse bound");
        counts[ap + bound] += mult;
    }
    std::uint64_t at(i64 ap) const {
        return ap < -bound || ap > bound ? 0 : counts[ap + bound];
    }
    std::uint64_t total() const {
        std::uint64_t s = 0;
        for (auto c : counts) s += c;
        return s;
    }
    TraceDistribution& operator+=(const TraceDistribution& o) {
        for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += o.counts[i];
        return *this;
    }
    friend bool operator==(const TraceDistribution&, const TraceDistribution&) = default;
};

/// Reference route: point-count every nonsingular (a, b). O(p^3).
inline TraceDistribution family_traces_direct(std::uint64_t p) {
    const QuadraticCharacter chi(p);
    TraceDistribution dist(p);
    for (std::uint64_t a = 0; a < p; ++a)
        for (std::uint64_t b = 0; b < p; ++b) {
            const u64 core = (4 * pow_mod(a, 3, p) + 27 * mul_mod(b, b, p)) % p;
            if (core == 0) continue;
            dist.add(trace_from_character_sum(a, b, chi));
        }
    return dist;
}

/// Fast route. Substituting x -> lambda x shows a_p(lambda^2 a, lambda^3 b) =
/// chi(lambda) a_p(a, b). With lambda = a/b every (a, b), ab != 0, is a twist of
/// (c, c), c = a^3 / b^2, so a_p(a, b) = chi(ab) a_p(c, c). The axes a = 0 and
/// b = 0 are counted directly. O(p^2) total, sharded over a.
inline TraceDistribution family_traces(std::uint64_t p, std::size_t shards = 1) {
    if (p <= 3) throw ModulusOutOfRange("family histogram needs p > 3");
    (void)Field(p);
    const QuadraticCharacter chi(p);
    shards = std::max<std::size_t>(1, std::min<std::size_t>(shards, p));

    std::vector<u64> inv(p, 0);
    inv[1] = 1;
    for (u64 i = 2; i < p; ++i) inv[i] = (p - (p / i) * inv[p % i] % p) % p;

    // a_p(c, c) for every c; the singular value c = -27/4 is marked unused.
    const u64 bad_c = mul_mod(p - 27 % p, inv[4], p);
    std::vector<i64> diag(p, 0);
    std::vector<i64> axis_a0(p, 0), axis_b0(p, 0);
    parallel_shards(shards, [&](std::size_t s) {
        auto [lo, hi] = shard_range(p, shards, s);
        for (u64 c = std::max<u64>(lo, 1); c < hi; ++c) {
            if (c != bad_c) diag[c] = trace_from_character_sum(c, c, chi);
            axis_a0[c] = trace_from_character_sum(0, c, chi);
            axis_b0[c] = trace_from_character_sum(c, 0, chi);
        }
    });

    std::vector<TraceDistribution> partial(shards, TraceDistribution(p));
    parallel_shards(shards, [&](std::size_t s) {
        auto [lo, hi] = shard_range(p, shards, s);
        TraceDistribution& d = partial[s];
        for (u64 a = std::max<u64>(lo, 1); a < hi; ++a) {
            d.add(axis_b0[a]);
            const u64 a3 = mul_mod(mul_mod(a, a, p), a, p);
            for (u64 b = 1; b < p; ++b) {
                const u64 c = mul_mod(a3, mul_mod(inv[b], inv[b], p), p);
                if (c == bad_c) continue;
                const int sign = chi(mul_mod(a, b, p));
                d.add(sign * diag[c]);
            }
        }
        if (lo == 0)
            for (u64 b = 1; b < p; ++b) d.add(axis_a0[b]);
    });
    TraceDistribution total(p);
    for (const auto& d : partial) total += d;
    GALSIEVE_ASSERT(total.total() == family_size(p), "histogram total is p^2 - p");
    return total;
}

struct ClassHistogram {
    std::uint64_t ell = 0;
    std::uint64_t p = 0;
    std::map<CharPolyClass, std::uint64_t> counts;
    std::uint64_t total = 0;
};

inline ClassHistogram histogram_from_traces(const TraceDistribution& dist, std::uint64_t ell) {
    if (dist.p == ell) throw EqualCharacteristic(ell);
    ClassHistogram h{ell, dist.p, {}, 0};
    for (i64 ap = -dist.bound; ap <= dist.bound; ++ap) {
        const auto n = dist.at(ap);
        if (n == 0) continue;
        h.counts[CharPolyClass{reduce_signed(ap, ell), dist.p % ell}] += n;
        h.total += n;
    }
    GALSIEVE_ASSERT(h.total == family_size(dist.p), "histogram total is p^2 - p");
    for (const auto& [c, n] : h.counts)
        GALSIEVE_ASSERT(c.d == dist.p % ell, "all Frobenius classes lie in one det-coset");
    return h;
}

inline ClassHistogram family_histogram(std::uint64_t p, std::uint64_t ell, std::size_t shards = 1) {
    if (p == ell) throw EqualCharacteristic(ell);
    (void)Field(ell);
    return histogram_from_traces(family_traces(p, shards), ell);
}

/// Main term |C| / |SL_2(F_ell)| (p^2 - p) for a conjugation-stable C in the
/// det = p coset.
inline double prediction(std::uint64_t ell, std::uint64_t p, const std::vector<Mat2>& C) {
    const Gl2 g(ell);
    const std::uint64_t d = p % ell;
    std::vector<Mat2> sorted = C;
    std::sort(sorted.begin(), sorted.end());
    for (const Mat2& m : sorted)
        if (g.det(m) != d) throw NotInCoset("class set leaves the det = p mod ell coset");
    for (const Mat2& gen : g.gl2_generators())
        for (const Mat2& m : sorted)
            if (!std::binary_search(sorted.begin(), sorted.end(), conjugate(g, gen, m)))
                throw NotConjugationStable("class set is not stable under GL_2 conjugation");
    return static_cast<double>(sorted.size()) / static_cast<double>(group_order_sl2(ell)) *
           static_cast<double>(family_size(p));
}

struct DeviationRow {
    CharPolyClass cls;
    std::uint64_t fiber_size = 0;
    std::uint64_t observed = 0;
    double predicted = 0;
    double normalized = 0;  ///< (observed - predicted) / p^{3/2}
};

struct DeviationReport {
    std::uint64_t ell = 0;
    std::uint64_t p = 0;
    bool tame = true;  ///< p does not divide |SL_2(F_ell)|
    std::vector<DeviationRow> rows;

    double max_abs_normalized() const {
        double m = 0;
        for (const auto& r : rows) m = std::max(m, std::abs(r.normalized));
        return m;
    }
};

/// One row per char-poly fiber (t, p mod ell), t in F_ell.
inline DeviationReport deviation_report(const ClassHistogram& h) {
    DeviationReport rep{h.ell, h.p, group_order_sl2(h.ell) % h.p != 0, {}};
    const std::uint64_t d = h.p % h.ell;
    const double scale = std::pow(static_cast<double>(h.p), 1.5);
    const double sl2 = static_cast<double>(group_order_sl2(h.ell));
    for (std::uint64_t t = 0; t < h.ell; ++t) {
        DeviationRow r;
        r.cls = {t, d};
        r.fiber_size = charpoly_fiber_size(h.ell, t, d);
        auto it = h.counts.find(r.cls);
        r.observed = it == h.counts.end() ? 0 : it->second;
        r.predicted = static_cast<double>(r.fiber_size) / sl2 * static_cast<double>(h.total);
        r.normalized = (static_cast<double>(r.observed) - r.predicted) / scale;
        rep.rows.push_back(r);
    }
    return rep;
}

}  // namespace galsieve
