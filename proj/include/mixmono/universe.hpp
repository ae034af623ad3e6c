#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mixmono/errors.hpp"

namespace mixmono {

/// A partially ordered universe over elements of type E. The order is the
/// only structure the iteration machinery relies on; the optional fields
/// declare extra capabilities of the backing:
///
///  - `elements`  : nonempty iff the universe is finite and enumerable;
///                  enables exhaustive checks and exact sup/inf queries.
///  - `distance`  : max-norm gap for numeric universes; enables gap-based
///                  stopping and stabilization certificates.
///  - `exact_key` : injective 64-bit key, used for cycle detection on
///                  discrete universes.
///  - `join2/meet2`: binary sup/inf when the backing is a lattice; used to
///                  maintain the running intersection box on numeric
///                  universes.
///
/// Instances are immutable after construction and safe to share across
/// threads; all predicates must be pure.
template <class E>
struct Universe {
    using Element = E;

    std::string name;
    std::function<bool(const E&, const E&)> leq;
    std::function<bool(const E&, const E&)> eq;
    std::vector<E> elements;
    std::function<double(const E&, const E&)> distance;
    std::function<std::uint64_t(const E&)> exact_key;
    std::function<E(const E&, const E&)> join2;
    std::function<E(const E&, const E&)> meet2;
    double eq_tol = 0.0;

    bool finite() const { return !elements.empty(); }
    bool numeric() const { return static_cast<bool>(distance); }
};

template <class E>
using UniversePtr = std::shared_ptr<const Universe<E>>;

/// The real line with its usual (exact) order; equality is the declared
/// tolerance notion. Exact comparison keeps monotonicity bookkeeping
/// faithful to closed forms whose increments sit below the tolerance.
inline UniversePtr<double> real_line_universe(double eq_tol = 1e-12) {
    auto u = std::make_shared<Universe<double>>();
    u->name = "real-line";
    u->eq_tol = eq_tol;
    u->leq = [](const double& a, const double& b) { return a <= b; };
    u->eq = [eq_tol](const double& a, const double& b) { return std::fabs(a - b) <= eq_tol; };
    u->distance = [](const double& a, const double& b) { return std::fabs(a - b); };
    u->join2 = [](const double& a, const double& b) { return a < b ? b : a; };
    u->meet2 = [](const double& a, const double& b) { return a < b ? a : b; };
    return u;
}

/// Order interval [lo, hi]. Validity (lo <= hi) is checked eagerly; an
/// invalid pair raises instead of producing an empty interval, so emptiness
/// of intersections stays an explicit query.
template <class E>
struct OrderInterval {
    E lo;
    E hi;
};

template <class E>
OrderInterval<E> make_interval(const Universe<E>& u, E lo, E hi) {
    if (!u.leq(lo, hi)) {
        throw InvalidInterval("order interval requires lo <= hi in universe " + u.name);
    }
    return OrderInterval<E>{std::move(lo), std::move(hi)};
}

template <class E>
bool interval_contains(const Universe<E>& u, const OrderInterval<E>& iv, const E& z) {
    return u.leq(iv.lo, z) && u.leq(z, iv.hi);
}

/// Membership of `probe` in the intersection of every interval of the chain.
template <class E>
bool intersect_interval_chain(const Universe<E>& u,
                              std::span<const OrderInterval<E>> intervals,
                              const E& probe) {
    for (const auto& iv : intervals) {
        if (!interval_contains(u, iv, probe)) return false;
    }
    return true;
}

namespace detail {

template <class E>
bool is_nondecreasing(const Universe<E>& u, std::span<const E> s) {
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        if (!u.leq(s[i], s[i + 1])) return false;
    }
    return true;
}

template <class E>
bool is_nonincreasing(const Universe<E>& u, std::span<const E> s) {
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        if (!u.leq(s[i + 1], s[i])) return false;
    }
    return true;
}

/// Last-step movement of a stored sequence; the stabilization certificate
/// for numeric monotone limits.
template <class E>
double last_movement(const Universe<E>& u, std::span<const E> s) {
    if (s.size() < 2) return 0.0;
    return u.distance(s[s.size() - 2], s[s.size() - 1]);
}

}  // namespace detail

/// Least upper bound of a stored collection.
///
/// Finite universes answer exhaustively: the result is an upper bound that
/// is leq-below every enumerable upper bound, or absent when no least one
/// exists. Numeric universes answer only what the stored data certifies:
/// the first element of a nonincreasing sequence (exact), or the last
/// element of a nondecreasing sequence whose final movement has dropped
/// below the universe tolerance. Anything else is absent; absence is the
/// signal, never an approximation.
template <class E>
std::optional<E> sup_of(const Universe<E>& u, std::span<const E> s) {
    if (s.empty()) return std::nullopt;
    if (u.finite()) {
        std::vector<const E*> bounds;
        for (const E& cand : u.elements) {
            bool upper = true;
            for (const E& x : s) {
                if (!u.leq(x, cand)) { upper = false; break; }
            }
            if (upper) bounds.push_back(&cand);
        }
        for (const E* lo : bounds) {
            bool least = true;
            for (const E* other : bounds) {
                if (!u.leq(*lo, *other)) { least = false; break; }
            }
            if (least) return *lo;
        }
        return std::nullopt;
    }
    if (u.numeric()) {
        if (s.size() == 1) return s[0];
        if (detail::is_nonincreasing(u, s)) return s[0];
        if (detail::is_nondecreasing(u, s) && detail::last_movement(u, s) <= u.eq_tol) {
            return s[s.size() - 1];
        }
        return std::nullopt;
    }
    return std::nullopt;
}

/// Greatest lower bound; dual of sup_of.
template <class E>
std::optional<E> inf_of(const Universe<E>& u, std::span<const E> s) {
    if (s.empty()) return std::nullopt;
    if (u.finite()) {
        std::vector<const E*> bounds;
        for (const E& cand : u.elements) {
            bool lower = true;
            for (const E& x : s) {
                if (!u.leq(cand, x)) { lower = false; break; }
            }
            if (lower) bounds.push_back(&cand);
        }
        for (const E* hi : bounds) {
            bool greatest = true;
            for (const E* other : bounds) {
                if (!u.leq(*other, *hi)) { greatest = false; break; }
            }
            if (greatest) return *hi;
        }
        return std::nullopt;
    }
    if (u.numeric()) {
        if (s.size() == 1) return s[0];
        if (detail::is_nondecreasing(u, s)) return s[0];
        if (detail::is_nonincreasing(u, s) && detail::last_movement(u, s) <= u.eq_tol) {
            return s[s.size() - 1];
        }
        return std::nullopt;
    }
    return std::nullopt;
}

/// Joint sup/inf query for a coupled trace. On numeric universes a
/// collapsed monotone bracket (xs nondecreasing, ys nonincreasing, final
/// gap below `gap_certify_tol`) certifies both limits at once with the
/// final iterates; otherwise each side falls back to the single-sequence
/// rules.
template <class E>
std::pair<std::optional<E>, std::optional<E>> sup_inf_of_trace(
    const Universe<E>& u, std::span<const E> xs, std::span<const E> ys,
    double gap_certify_tol = -1.0) {
    if (u.numeric() && !xs.empty() && !ys.empty()) {
        const double tol = gap_certify_tol < 0 ? u.eq_tol : gap_certify_tol;
        if (detail::is_nondecreasing(u, xs) && detail::is_nonincreasing(u, ys) &&
            u.leq(xs.back(), ys.back()) && u.distance(xs.back(), ys.back()) <= tol) {
            return {xs.back(), ys.back()};
        }
    }
    return {sup_of(u, xs), inf_of(u, ys)};
}

}  // namespace mixmono
