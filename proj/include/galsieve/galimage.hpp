#pragma once

// One-sided classification of the mod-ell image of an elliptic curve from
// Frobenius trace/determinant classes. A maximal subgroup of GL_2(F_ell) not
// containing SL_2 is a Borel, a Cartan normalizer or an exceptional group;
// each is ruled out by a class it cannot contain. Nothing ruled out means
// "Candidate", never a proof of non-surjectivity.

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "curves.hpp"
#include "modarith.hpp"

namespace galsieve {

enum class Obstruction : std::uint8_t {
    Reducible = 1,
    SplitCartanNorm = 2,
    NonsplitCartanNorm = 4,
    Exceptional = 8,
};

inline constexpr std::uint8_t kAllObstructions = 15;

inline const char* obstruction_name(Obstruction o) {
    switch (o) {
        case Obstruction::Reducible: return "Reducible";
        case Obstruction::SplitCartanNorm: return "SplitCartanNorm";
        case Obstruction::NonsplitCartanNorm: return "NonsplitCartanNorm";
        case Obstruction::Exceptional: return "Exceptional";
    }
    return "?";
}

struct ImageVerdict {
    std::uint8_t open_reasons = kAllObstructions;  ///< bitmask of Obstruction not yet ruled out
    std::uint64_t primes_used = 0;

    bool contains_sl2() const { return open_reasons == 0; }
    bool has(Obstruction o) const { return open_reasons & static_cast<std::uint8_t>(o); }

    std::vector<Obstruction> reasons() const {
        std::vector<Obstruction> out;
        for (auto o : {Obstruction::Reducible, Obstruction::SplitCartanNorm,
                       Obstruction::NonsplitCartanNorm, Obstruction::Exceptional})
            if (has(o)) out.push_back(o);
        return out;
    }

    std::string label() const {
        if (contains_sl2()) return "ContainsSL2";
        std::string s = "Candidate(";
        bool first = true;
        for (auto o : reasons()) {
            if (!first) s += '+';
            s += obstruction_name(o);
            first = false;
        }
        return s + ")";
    }

    friend bool operator==(const ImageVerdict&, const ImageVerdict&) = default;
};

/// Incremental elimination over a stream of (t, d) classes in GL_2(F_ell), ell odd.
class ModEllClassifier {
public:
    explicit ModEllClassifier(std::uint64_t ell) : ell_(ell), field_(ell) {
        if (ell < 3) throw ModulusOutOfRange("mod-ell classifier needs ell >= 3");
        // Projective order invariant t^2/d of elements of order 1, 2, 3, 4, 5 in PGL_2.
        for (std::uint64_t u : {4, 0, 1, 2}) exceptional_u_.insert(u % ell);
        for (std::uint64_t u = 0; u < ell; ++u)
            if ((u * u + 1 + 3 * (ell - u)) % ell == 0) exceptional_u_.insert(u);
    }

    std::uint64_t ell() const { return ell_; }
    const ImageVerdict& verdict() const { return verdict_; }
    bool decided() const { return verdict_.contains_sl2(); }

    void observe(CharPolyClass c) {
        ++verdict_.primes_used;
        const std::uint64_t t = c.t % ell_, d = c.d % ell_;
        if (d == 0) return;
        const FieldElem ft = field_.from_unsigned(t), fd = field_.from_unsigned(d);
        const int chi = legendre(ft * ft - field_(4) * fd);

        // A Borel fixes a line, so its characteristic polynomials split.
        if (chi == -1) clear(Obstruction::Reducible);
        // Split Cartan normalizer: diagonal (split char poly) or anti-diagonal (t = 0).
        if (t != 0 && chi == -1) {
            split_witnesses_.insert(c);
            if (split_witnesses_.size() >= 2) clear(Obstruction::SplitCartanNorm);
        }
        // Nonsplit Cartan normalizer: irreducible or scalar in the Cartan, t = 0 off it.
        if (t != 0 && chi == 1) {
            nonsplit_witnesses_.insert(c);
            if (nonsplit_witnesses_.size() >= 2) clear(Obstruction::NonsplitCartanNorm);
        }
        const std::uint64_t u = (ft * ft / fd).value();
        if (!exceptional_u_.count(u)) clear(Obstruction::Exceptional);
    }

    const std::set<std::uint64_t>& exceptional_values() const { return exceptional_u_; }

private:
    void clear(Obstruction o) { verdict_.open_reasons &= ~static_cast<std::uint8_t>(o); }

    std::uint64_t ell_;
    Field field_;
    std::set<std::uint64_t> exceptional_u_;
    std::set<CharPolyClass> split_witnesses_;
    std::set<CharPolyClass> nonsplit_witnesses_;
    ImageVerdict verdict_;
};

namespace detail {

inline i64 trace_at(const CurveModP& red, const CharacterCache* cache) {
    if (cache && cache->contains(red.p)) return trace_of_frobenius(red, cache->at(red.p)).ap();
    return trace_of_frobenius(red).ap();
}

}  // namespace detail

/// Classifies the mod-ell image for several odd ell at once, sharing the
/// point counts. Good primes 5 <= p <= budget are consumed in ascending
/// order; each classifier stops listening once it reaches ContainsSL2.
inline std::map<std::uint64_t, ImageVerdict> classify_many(const Curve& e,
                                                            const std::vector<std::uint64_t>& ells,
                                                            std::uint64_t budget,
                                                            const CharacterCache* cache = nullptr) {
    std::vector<ModEllClassifier> open;
    for (std::uint64_t ell : ells) open.emplace_back(ell);
    if (budget >= 5) {
        for (std::uint64_t p : primes_in(5, budget)) {
            bool any_open = false;
            for (const auto& c : open) any_open = any_open || !c.decided();
            if (!any_open) break;
            const auto red = reduce(e, p);
            if (!red) continue;
            const FrobData f(p, detail::trace_at(*red, cache));
            for (auto& c : open)
                if (!c.decided() && c.ell() != p) c.observe(frobenius_charpoly_mod(f, c.ell()));
        }
    }
    std::map<std::uint64_t, ImageVerdict> out;
    for (const auto& c : open) out[c.ell()] = c.verdict();
    return out;
}

inline ImageVerdict classify_mod_ell(const Curve& e, std::uint64_t ell, std::uint64_t budget,
                                     const CharacterCache* cache = nullptr) {
    return classify_many(e, {ell}, budget, cache).at(ell);
}

enum class Mod2Image { Full, Cyclic3, OrderLE2 };

inline const char* mod2_name(Mod2Image m) {
    switch (m) {
        case Mod2Image::Full: return "Full";
        case Mod2Image::Cyclic3: return "Cyclic3";
        case Mod2Image::OrderLE2: return "OrderLE2";
    }
    return "?";
}

inline bool is_perfect_square(i128 v) {
    if (v < 0) return false;
    auto r = static_cast<i128>(std::sqrt(static_cast<long double>(v)));
    while (r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return r * r == v;
}

/// True iff x^3 + a x + b has an integer (equivalently rational) root.
inline bool cubic_has_rational_root(i64 a, i64 b) {
    if (b == 0) return true;
    auto is_root = [&](i64 x) { return i128{x} * x * x + i128{a} * x + b == 0; };
    const u64 m = static_cast<u64>(b < 0 ? -static_cast<i128>(b) : static_cast<i128>(b));
    for (u64 d = 1; d * d <= m; ++d) {
        if (m % d) continue;
        for (u64 q : {d, m / d}) {
            const i64 x = static_cast<i64>(q);
            if (is_root(x) || is_root(-x)) return true;
        }
    }
    return false;
}

/// Exact mod-2 image: the Galois group of the 2-division cubic.
inline Mod2Image mod2_image(const Curve& e) {
    if (cubic_has_rational_root(e.a, e.b)) return Mod2Image::OrderLE2;
    return is_perfect_square(-e.discriminant_core()) ? Mod2Image::Cyclic3 : Mod2Image::Full;
}

using EllResult = std::variant<Mod2Image, ImageVerdict>;

/// Whether the result leaves the image possibly smaller than GL_2(F_ell).
inline bool is_candidate(const EllResult& r) {
    if (const auto* m = std::get_if<Mod2Image>(&r)) return *m != Mod2Image::Full;
    return !std::get<ImageVerdict>(r).contains_sl2();
}

inline std::string result_label(const EllResult& r) {
    if (const auto* m = std::get_if<Mod2Image>(&r)) return mod2_name(*m);
    return std::get<ImageVerdict>(r).label();
}

/// mod2_image for ell = 2, classify_mod_ell otherwise.
inline std::map<std::uint64_t, EllResult> surjective_all_ell(const Curve& e,
                                                              const std::vector<std::uint64_t>& ells,
                                                              std::uint64_t budget,
                                                              const CharacterCache* cache = nullptr) {
    std::vector<std::uint64_t> odd;
    std::map<std::uint64_t, EllResult> out;
    for (std::uint64_t ell : ells) {
        if (ell == 2)
            out[2] = mod2_image(e);
        else
            odd.push_back(ell);
    }
    for (auto& [ell, v] : classify_many(e, odd, budget, cache)) out[ell] = v;
    return out;
}

}  // namespace galsieve
