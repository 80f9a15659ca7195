#pragma once

// Large-sieve quantities: L(Q), the sieve bound max(x^{(n+1)deg}, Q^{2(n+1)}) / L(Q)
// and the packaged three-term count shape. Implicit constants are not
// effective; the shapes here use constant 1 and are diagnostics, not proofs.

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "errors.hpp"
#include "modarith.hpp"

namespace galsieve {

using Rational = boost::multiprecision::cpp_rational;

/// Constant used when asserting the sieve inequality against brute-force counts.
inline constexpr double kSieveDiagnosticConstant = 64.0;

struct SieveProblem {
    unsigned n = 1;       ///< projective dimension
    unsigned degree = 1;  ///< [K:Q], fixed to 1
    std::map<std::uint64_t, Rational> omega;  ///< excluded density per prime, in [0, 1)
    std::set<std::uint64_t> excluded;         ///< exceptional primes, contribute nothing
    double x = 2.0;                           ///< height bound
    std::uint64_t Q = 1;                      ///< sieve modulus bound

    /// omega_p, with missing and excluded primes read as 0.
    Rational omega_at(std::uint64_t p) const {
        if (excluded.count(p)) return Rational(0);
        auto it = omega.find(p);
        return it == omega.end() ? Rational(0) : it->second;
    }

    void validate() const {
        for (const auto& [p, w] : omega)
            if (w < 0 || w >= 1)
                throw OmegaOutOfRange("omega_" + std::to_string(p) + " outside [0, 1)");
        if (Q < 1) throw OmegaOutOfRange("Q must be at least 1");
    }
};

/// Default sieve modulus Q = floor(x^{deg/2}).
inline std::uint64_t default_sieve_modulus(double x, unsigned degree = 1) {
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::floor(
                                          std::pow(x, degree / 2.0) + 1e-9)));
}

namespace detail {

// Depth-first over squarefree a <= Q built from ascending primes; `acc` is
// the product of omega_p / (1 - omega_p) over the primes chosen so far.
inline void accumulate_squarefree(const std::vector<std::uint64_t>& primes,
                                  const std::vector<Rational>& weight, std::size_t start,
                                  std::uint64_t a, std::uint64_t Q, const Rational& acc,
                                  Rational& total) {
    total += acc;
    for (std::size_t i = start; i < primes.size(); ++i) {
        const std::uint64_t p = primes[i];
        if (a > Q / p) break;
        if (weight[i] == 0) continue;
        accumulate_squarefree(primes, weight, i + 1, a * p, Q, acc * weight[i], total);
    }
}

}  // namespace detail

/// L(Q) = sum over squarefree a <= Q of prod_{p | a} omega_p / (1 - omega_p), exactly.
inline Rational L_of_Q(const SieveProblem& P) {
    P.validate();
    const auto primes = primes_in(2, P.Q);
    std::vector<Rational> weight;
    weight.reserve(primes.size());
    for (std::uint64_t p : primes) {
        const Rational w = P.omega_at(p);
        weight.push_back(w / (1 - w));
    }
    Rational total(0);
    detail::accumulate_squarefree(primes, weight, 0, 1, P.Q, Rational(1), total);
    return total;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// max(x^{(n+1)deg}, Q^{2(n+1)}) / L(Q), +infinity when L(Q) = 0.
inline double sieve_bound(const SieveProblem& P, const Rational& L) {
    if (L == 0) return std::numeric_limits<double>::infinity();
    const double lhs = std::pow(P.x, static_cast<double>((P.n + 1) * P.degree));
    const double rhs = std::pow(static_cast<double>(P.Q), 2.0 * (P.n + 1));
    return std::max(lhs, rhs) / to_double(L);
}

inline double sieve_bound(const SieveProblem& P) { return sieve_bound(P, L_of_Q(P)); }

/// (1-delta)^{-1} x^{n+1/2} log x + |S|^{4n+4} + ((1-delta)^{-1} c)^{4n+4},
/// implicit constant 1.
inline double hit_count_bound(unsigned n, double delta, double c, std::uint64_t exceptional_count,
                              double x) {
    if (!(delta >= 0.0) || delta >= 1.0) throw DeltaOutOfRange("delta must lie in [0, 1)");
    const double inv = 1.0 / (1.0 - delta);
    const double e = 4.0 * n + 4.0;
    return inv * std::pow(x, n + 0.5) * std::log(x) +
           std::pow(static_cast<double>(exceptional_count), e) + std::pow(inv * c, e);
}

/// |S'| = |S| + ceil(log2 |G_g|), the enlarged exceptional set used for reporting.
inline std::uint64_t adjusted_exceptional_count(std::uint64_t s, std::uint64_t geometric_order) {
    std::uint64_t bits = 0;
    while ((std::uint64_t{1} << bits) < geometric_order) ++bits;
    return s + bits;
}

}  // namespace galsieve
