#pragma once

// Height-ordered rational points of P^n(Q) and the Weierstrass (a, b) box.

#include <cstdint>
#include <iterator>
#include <numeric>
#include <optional>
#include <vector>

#include "curves.hpp"
#include "modarith.hpp"

namespace galsieve {

/// Primitive integer tuple with first nonzero coordinate positive.
struct ProjPoint {
    std::vector<i64> coords;

    i64 height() const {
        i64 h = 0;
        for (i64 c : coords) h = std::max(h, c < 0 ? -c : c);
        return h;
    }
    friend auto operator<=>(const ProjPoint&, const ProjPoint&) = default;
};

/// Canonical representative of the line through v (v nonzero).
inline ProjPoint canonicalize(std::vector<i64> v) {
    i64 g = 0;
    for (i64 c : v) g = std::gcd(g, c);
    if (g == 0) throw InvariantViolation("zero vector has no projective class");
    i64 sign = 1;
    for (i64 c : v)
        if (c != 0) {
            sign = c < 0 ? -1 : 1;
            break;
        }
    for (i64& c : v) c = c / g * sign;
    return {std::move(v)};
}

inline bool is_canonical(const std::vector<i64>& v) {
    i64 g = 0;
    for (i64 c : v) g = std::gcd(g, c);
    if (g != 1) return false;
    for (i64 c : v)
        if (c != 0) return c > 0;
    return false;
}

/// Lazy stream of canonical points of P^n(Q) with H <= x, by height then
/// lexicographically. Points of height h are found by scanning the box [-h, h]^{n+1}.
class ProjectiveStream {
public:
    ProjectiveStream(unsigned n, i64 x) : n_(n), x_(x), h_(1), cur_(n + 1, -1) {}

    std::optional<ProjPoint> next() {
        while (h_ <= x_) {
            while (advance()) {
                if (max_abs() == h_ && is_canonical(cur_)) return ProjPoint{cur_};
            }
            ++h_;
            cur_.assign(n_ + 1, -h_);
            started_ = false;
        }
        return std::nullopt;
    }

    // Input-range adaptor so the stream works with range-for.
    class iterator {
    public:
        using value_type = ProjPoint;
        using difference_type = std::ptrdiff_t;
        iterator() = default;
        explicit iterator(ProjectiveStream* s) : s_(s) { ++*this; }
        const ProjPoint& operator*() const { return *v_; }
        iterator& operator++() {
            v_ = s_->next();
            return *this;
        }
        void operator++(int) { ++*this; }
        friend bool operator==(const iterator& it, std::default_sentinel_t) { return !it.v_; }

    private:
        ProjectiveStream* s_ = nullptr;
        std::optional<ProjPoint> v_;
    };
    iterator begin() { return iterator(this); }
    std::default_sentinel_t end() { return {}; }

private:
    i64 max_abs() const {
        i64 m = 0;
        for (i64 c : cur_) m = std::max(m, c < 0 ? -c : c);
        return m;
    }

    // Odometer over [-h, h]^{n+1} in lexicographic order.
    bool advance() {
        if (!started_) {
            started_ = true;
            cur_.assign(n_ + 1, -h_);
            return true;
        }
        for (std::size_t i = cur_.size(); i-- > 0;) {
            if (cur_[i] < h_) {
                ++cur_[i];
                return true;
            }
            cur_[i] = -h_;
        }
        return false;
    }

    unsigned n_;
    i64 x_;
    i64 h_;
    std::vector<i64> cur_;
    bool started_ = false;
};

inline ProjectiveStream enumerate_proj(unsigned n, i64 x) { return ProjectiveStream(n, x); }

/// |{u in P^n(Q) : H(u) <= x}| via Moebius inversion over the box:
/// (1/2) sum_d mu(d) ((2 floor(x/d) + 1)^{n+1} - 1).
inline std::uint64_t count_height(unsigned n, i64 x) {
    const auto mu = mobius_table(static_cast<u64>(x));
    i128 total = 0;
    for (i64 d = 1; d <= x; ++d) {
        if (mu[d] == 0) continue;
        i128 side = 2 * (x / d) + 1, power = 1;
        for (unsigned k = 0; k <= n; ++k) power *= side;
        total += mu[d] * (power - 1);
    }
    return static_cast<std::uint64_t>(total / 2);
}

/// All (a, b) with max(|a|, |b|) <= x and 4a^3 + 27b^2 != 0, row-major in (a, b).
class WeierstrassBox {
public:
    explicit WeierstrassBox(i64 x) : x_(x), a_(-x), b_(-x - 1) {}

    std::optional<Curve> next() {
        while (true) {
            if (++b_ > x_) {
                b_ = -x_;
                if (++a_ > x_) return std::nullopt;
            }
            if (Curve::nonsingular(a_, b_)) return Curve(a_, b_);
        }
    }

    std::vector<Curve> collect() {
        std::vector<Curve> out;
        while (auto c = next()) out.push_back(*c);
        return out;
    }

private:
    i64 x_, a_, b_;
};

inline WeierstrassBox enumerate_weierstrass(i64 x) { return WeierstrassBox(x); }

/// Number of singular pairs in the box: (a, b) = (-3t^2, 2t^3) with |2t^3| <= x, |3t^2| <= x.
inline std::uint64_t singular_pairs_in_box(i64 x) {
    std::uint64_t n = 0;
    for (i64 t = -x; t <= x; ++t)
        if (3 * t * t <= x && 2 * (t < 0 ? -t : t) * t * t <= x) ++n;
    return n;
}

inline std::uint64_t weierstrass_box_size(i64 x) {
    return static_cast<std::uint64_t>((2 * x + 1) * (2 * x + 1)) - singular_pairs_in_box(x);
}

}  // namespace galsieve
