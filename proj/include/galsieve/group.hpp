#pragma once

// Generic machinery for finite groups given by a multiplication oracle:
// breadth-first closure, materialized subgroups, normal closure and the
// derived subgroup. Any type modelling FiniteGroup plugs in (GL_2 over Z/n,
// direct products, quotients by the centre).

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_set>
#include <vector>

#include "errors.hpp"
#include "random.hpp"

namespace galsieve {

inline constexpr std::size_t kDefaultClosureCap = 20'000'000;

template <class G>
concept FiniteGroup = requires(const G& g, const typename G::element_type& x) {
    typename G::element_type;
    { g.identity() } -> std::same_as<typename G::element_type>;
    { g.mul(x, x) } -> std::same_as<typename G::element_type>;
    { g.inverse(x) } -> std::same_as<typename G::element_type>;
    { g.order() } -> std::convertible_to<std::uint64_t>;
    { x < x } -> std::convertible_to<bool>;
    { x == x } -> std::convertible_to<bool>;
    { x.hash() } -> std::convertible_to<std::uint64_t>;
};

template <class E>
struct ElementHash {
    std::size_t operator()(const E& e) const { return static_cast<std::size_t>(e.hash()); }
};

template <FiniteGroup G>
using ElementSet = std::unordered_set<typename G::element_type, ElementHash<typename G::element_type>>;

template <FiniteGroup G>
typename G::element_type conjugate(const G& g, const typename G::element_type& by,
                                   const typename G::element_type& x) {
    return g.mul(g.mul(by, x), g.inverse(by));
}

template <FiniteGroup G>
typename G::element_type commutator(const G& g, const typename G::element_type& x,
                                    const typename G::element_type& y) {
    return g.mul(g.mul(x, y), g.mul(g.inverse(x), g.inverse(y)));
}

/// A subgroup materialized as a sorted element list together with the
/// generators it was built from.
template <FiniteGroup G>
class Subgroup {
public:
    using element_type = typename G::element_type;

    const G& group() const { return group_; }
    std::uint64_t order() const { return elements_.size(); }
    std::span<const element_type> elements() const& { return elements_; }
    std::span<const element_type> generators() const& { return generators_; }
    // Spans into a temporary would dangle (e.g. in a range-for header).
    std::span<const element_type> elements() const&& = delete;
    std::span<const element_type> generators() const&& = delete;

    bool contains(const element_type& x) const {
        return std::binary_search(elements_.begin(), elements_.end(), x);
    }

    bool is_subgroup_of(const Subgroup& other) const {
        return std::includes(other.elements_.begin(), other.elements_.end(), elements_.begin(),
                             elements_.end());
    }

    /// Set equality of elements, regardless of generators.
    friend bool operator==(const Subgroup& a, const Subgroup& b) {
        return a.elements_ == b.elements_;
    }

    /// Wraps an already closed, sorted element list. Callers guarantee closure.
    static Subgroup adopt(G group, std::vector<element_type> gens,
                          std::vector<element_type> sorted_elements) {
        return Subgroup(std::move(group), std::move(gens), std::move(sorted_elements));
    }

private:
    Subgroup(G group, std::vector<element_type> gens, std::vector<element_type> elems)
        : group_(std::move(group)), generators_(std::move(gens)), elements_(std::move(elems)) {}

    G group_;
    std::vector<element_type> generators_;
    std::vector<element_type> elements_;
};

/// Subgroup generated by `gens`, by breadth-first right multiplication.
/// Throws CapExceeded once more than `cap` elements have been found.
template <FiniteGroup G>
Subgroup<G> closure(const G& group, std::span<const typename G::element_type> gens,
                    std::size_t cap = kDefaultClosureCap) {
    using E = typename G::element_type;
    const E id = group.identity();
    std::vector<E> kept;
    for (const E& g : gens)
        if (!(g == id)) kept.push_back(g);

    ElementSet<G> seen;
    std::vector<E> order{id};
    seen.insert(id);
    for (std::size_t head = 0; head < order.size(); ++head) {
        const E x = order[head];
        for (const E& g : kept) {
            E y = group.mul(x, g);
            if (seen.insert(y).second) {
                if (seen.size() > cap) throw CapExceeded(cap);
                order.push_back(y);
            }
        }
    }
    std::sort(order.begin(), order.end());
    GALSIEVE_ASSERT(group.order() % order.size() == 0, "subgroup order divides group order");
    return Subgroup<G>::adopt(group, std::vector<E>(gens.begin(), gens.end()), std::move(order));
}

template <FiniteGroup G>
Subgroup<G> closure(const G& group, const std::vector<typename G::element_type>& gens,
                    std::size_t cap = kDefaultClosureCap) {
    return closure(group, std::span<const typename G::element_type>(gens), cap);
}

template <FiniteGroup G>
Subgroup<G> trivial_subgroup(const G& group) {
    return closure(group, std::vector<typename G::element_type>{});
}

/// Elements of `parent` satisfying `keep`, which must cut out a subgroup
/// (e.g. an intersection). A small generating set is extracted greedily.
template <FiniteGroup G, class Pred>
Subgroup<G> filter_subgroup(const Subgroup<G>& parent, Pred&& keep) {
    using E = typename G::element_type;
    std::vector<E> elems;
    for (const E& x : parent.elements())
        if (keep(x)) elems.push_back(x);
    std::vector<E> gens;
    Subgroup<G> current = trivial_subgroup(parent.group());
    for (const E& x : elems) {
        if (current.contains(x)) continue;
        gens.push_back(x);
        current = closure(parent.group(), gens);
        if (current.order() == elems.size()) break;
    }
    GALSIEVE_ASSERT(current.elements().size() == elems.size() &&
                        std::equal(elems.begin(), elems.end(), current.elements().begin()),
                    "filtered element set is closed under multiplication");
    return current;
}

/// Intersection of two subgroups of the same ambient group.
template <FiniteGroup G>
Subgroup<G> intersect(const Subgroup<G>& a, const Subgroup<G>& b) {
    return filter_subgroup(a, [&](const auto& x) { return b.contains(x); });
}

/// Smallest subgroup containing `seeds` and normalized by `normalizer_gens`.
template <FiniteGroup G>
Subgroup<G> normal_closure(const G& group, std::vector<typename G::element_type> seeds,
                           std::span<const typename G::element_type> normalizer_gens,
                           std::size_t cap = kDefaultClosureCap) {
    Subgroup<G> k = closure(group, seeds, cap);
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& g : normalizer_gens) {
            const std::size_t n = seeds.size();
            for (std::size_t i = 0; i < n; ++i) {
                auto c = conjugate(group, g, seeds[i]);
                if (!k.contains(c)) {
                    seeds.push_back(c);
                    k = closure(group, seeds, cap);
                    changed = true;
                }
            }
        }
    }
    return k;
}

/// Derived subgroup: normal closure of the commutators of generator pairs.
template <FiniteGroup G>
Subgroup<G> commutator_subgroup(const Subgroup<G>& h, std::size_t cap = kDefaultClosureCap) {
    const G& group = h.group();
    auto gens = h.generators();
    std::vector<typename G::element_type> seeds;
    for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t j = i + 1; j < gens.size(); ++j) {
            auto c = commutator(group, gens[i], gens[j]);
            if (!(c == group.identity())) seeds.push_back(c);
        }
    Subgroup<G> k = normal_closure(group, std::move(seeds), gens, cap);
    for (const auto& g : gens)
        for (const auto& w : k.generators())
            GALSIEVE_ASSERT(k.contains(conjugate(group, g, w)), "derived subgroup is normal");
    GALSIEVE_ASSERT(k.is_subgroup_of(h), "derived subgroup lies in the group");
    return k;
}

/// True iff `n` is normalized by every generator of `h`.
template <FiniteGroup G>
bool is_normal_in(const Subgroup<G>& n, const Subgroup<G>& h) {
    if (!n.is_subgroup_of(h)) return false;
    for (const auto& g : h.generators())
        for (const auto& x : n.generators())
            if (!n.contains(conjugate(h.group(), g, x))) return false;
    return true;
}

/// Image of `h` under a homomorphism into `target`.
template <FiniteGroup G, FiniteGroup T, class Hom>
Subgroup<T> image(const Subgroup<G>& h, const T& target, Hom&& phi) {
    std::vector<typename T::element_type> gens;
    for (const auto& g : h.generators()) gens.push_back(phi(g));
    return closure(target, gens);
}

/// Direct product G1 x G2.
template <FiniteGroup G1, FiniteGroup G2>
class ProductGroup {
public:
    struct element_type {
        typename G1::element_type first;
        typename G2::element_type second;
        friend bool operator==(const element_type&, const element_type&) = default;
        friend bool operator<(const element_type& x, const element_type& y) {
            if (x.first < y.first) return true;
            if (y.first < x.first) return false;
            return x.second < y.second;
        }
        std::uint64_t hash() const { return mix64(first.hash() * 31 + second.hash()); }
    };

    ProductGroup(G1 a, G2 b) : a_(std::move(a)), b_(std::move(b)) {}

    const G1& left() const { return a_; }
    const G2& right() const { return b_; }

    element_type identity() const { return {a_.identity(), b_.identity()}; }
    element_type mul(const element_type& x, const element_type& y) const {
        return {a_.mul(x.first, y.first), b_.mul(x.second, y.second)};
    }
    element_type inverse(const element_type& x) const {
        return {a_.inverse(x.first), b_.inverse(x.second)};
    }
    std::uint64_t order() const { return a_.order() * b_.order(); }

private:
    G1 a_;
    G2 b_;
};

}  // namespace galsieve
