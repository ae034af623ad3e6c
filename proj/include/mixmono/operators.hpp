#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "mixmono/errors.hpp"
#include "mixmono/rng.hpp"
#include "mixmono/universe.hpp"

namespace mixmono {

/// A bivariate operator A : X x X -> X over a shared universe. The mixed
/// monotone property is a checkable contract, not an assumption; see
/// check_mixed_monotone below. Operators are pure values: apply must be
/// deterministic and side-effect free.
template <class E>
class BivariateOperator {
public:
    using Apply = std::function<E(const E&, const E&)>;

    BivariateOperator(UniversePtr<E> universe, Apply apply, std::string label)
        : universe_(std::move(universe)), apply_(std::move(apply)), label_(std::move(label)) {}

    E operator()(const E& x, const E& y) const { return apply_(x, y); }

    const UniversePtr<E>& universe() const { return universe_; }
    const std::string& label() const { return label_; }

private:
    UniversePtr<E> universe_;
    Apply apply_;
    std::string label_;
};

/// The first-coordinate projection P(x, y) = x; identity element of the
/// symmetric composition.
template <class E>
BivariateOperator<E> projection(UniversePtr<E> universe) {
    return BivariateOperator<E>(std::move(universe),
                                [](const E& x, const E&) { return x; }, "P");
}

/// Symmetric composition (B * A)(x, y) = B(A(x, y), A(y, x)).
template <class E>
BivariateOperator<E> s_compose(const BivariateOperator<E>& b, const BivariateOperator<E>& a) {
    if (a.universe() != b.universe()) {
        throw UniverseMismatch("s_compose requires operators over the same universe");
    }
    return BivariateOperator<E>(
        a.universe(),
        [b, a](const E& x, const E& y) { return b(a(x, y), a(y, x)); },
        b.label() + "*" + a.label());
}

/// n-th iterate under symmetric composition, evaluated at (x, y). The pair
/// is advanced jointly, so the cost is n operator applications; the naive
/// unfolding of the composed operator would be exponential.
template <class E>
E power_apply(const BivariateOperator<E>& a, std::size_t n, E x, E y) {
    for (std::size_t i = 0; i < n; ++i) {
        E nx = a(x, y);
        E ny = a(y, x);
        x = std::move(nx);
        y = std::move(ny);
    }
    return x;
}

/// The n-th power as an operator value (P for n = 0).
template <class E>
BivariateOperator<E> power_operator(const BivariateOperator<E>& a, std::size_t n) {
    return BivariateOperator<E>(
        a.universe(),
        [a, n](const E& x, const E& y) { return power_apply(a, n, x, y); },
        a.label() + "^" + std::to_string(n));
}

/// Result of a monotonicity check. A failing witness is a comparable
/// quadruple x1 <= x2, y1 >= y2 whose images violate A(x1,y1) <= A(x2,y2).
template <class E>
struct MonotonicityReport {
    struct Witness {
        E x1, x2, y1, y2;
        E out_lo, out_hi;
    };
    bool pass = true;
    std::optional<Witness> witness;
    std::size_t checked = 0;
};

/// Double-evaluation spot check of operator purity.
template <class E>
void ensure_deterministic(const BivariateOperator<E>& a, const E& x, const E& y) {
    const auto& u = *a.universe();
    if (!u.eq(a(x, y), a(x, y))) {
        throw NondeterministicOperator("operator '" + a.label() +
                                       "' returned different outputs for equal inputs");
    }
}

/// Exhaustive mixed-monotonicity check over a finite universe.
template <class E>
MonotonicityReport<E> check_mixed_monotone(const BivariateOperator<E>& a) {
    const auto& u = *a.universe();
    if (!u.finite()) {
        throw InfiniteUniverseExhaustive(
            "exhaustive mixed-monotone check requires a finite universe");
    }
    ensure_deterministic(a, u.elements.front(), u.elements.front());

    MonotonicityReport<E> report;
    const auto& xs = u.elements;
    for (const E& x1 : xs) {
        for (const E& x2 : xs) {
            if (!u.leq(x1, x2)) continue;
            for (const E& y2 : xs) {
                for (const E& y1 : xs) {
                    if (!u.leq(y2, y1)) continue;
                    ++report.checked;
                    E lo = a(x1, y1);
                    E hi = a(x2, y2);
                    if (!u.leq(lo, hi)) {
                        report.pass = false;
                        report.witness = {x1, x2, y1, y2, std::move(lo), std::move(hi)};
                        return report;
                    }
                }
            }
        }
    }
    return report;
}

/// Draws one comparable quadruple ordered as {x1, x2, y1, y2} with
/// x1 <= x2 and y1 >= y2.
template <class E>
using QuadrupleSampler = std::function<std::array<E, 4>(DetRng&)>;

/// Sampled mixed-monotonicity check for universes that cannot be
/// enumerated. Quadruples come from the supplied sampler, which must
/// guarantee comparability (independent random draws in R^n are rarely
/// comparable, so samplers perturb a base point with nonnegative
/// increments).
template <class E>
MonotonicityReport<E> check_mixed_monotone_sampled(const BivariateOperator<E>& a,
                                                   const QuadrupleSampler<E>& draw,
                                                   std::size_t trials = 1000,
                                                   std::uint64_t seed = 42) {
    const auto& u = *a.universe();
    MonotonicityReport<E> report;
    DetRng rng(seed);
    for (std::size_t i = 0; i < trials; ++i) {
        std::array<E, 4> q = draw(rng);
        if (i == 0) ensure_deterministic(a, q[0], q[2]);
        ++report.checked;
        E lo = a(q[0], q[2]);
        E hi = a(q[1], q[3]);
        if (!u.leq(lo, hi)) {
            report.pass = false;
            report.witness = {std::move(q[0]), std::move(q[1]), std::move(q[2]),
                              std::move(q[3]), std::move(lo), std::move(hi)};
            return report;
        }
    }
    return report;
}

}  // namespace mixmono
