#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mixmono/errors.hpp"
#include "mixmono/operators.hpp"
#include "mixmono/universe.hpp"

namespace mixmono {

/// Stopping rule for the coupled iteration. max_steps bounds the number of
/// transitions, so a full run records pairs for indices 0..max_steps. The
/// stagnation window stops a numeric run once neither sequence has moved
/// more than the universe tolerance for that many consecutive steps; pass
/// std::nullopt to disable it (explicit horizons).
struct StopPolicy {
    std::size_t max_steps = 10'000;
    double gap_tolerance = 1e-12;
    std::optional<int> stagnation_window = 10;
    std::size_t trace_cap = 100'000;
    /// Record an order violation in the trace instead of throwing; used by
    /// the finite oracle to turn contract violations into data.
    bool record_order_violation = false;
};

enum class VerdictKind {
    WeaklyOrderAttractive,
    OrderAttractive,
    NoCoupledFixedPointInBox,
    FixedPointReached,
    Undecided,
};

inline const char* to_string(VerdictKind k) {
    switch (k) {
        case VerdictKind::WeaklyOrderAttractive: return "WeaklyOrderAttractive";
        case VerdictKind::OrderAttractive: return "OrderAttractive";
        case VerdictKind::NoCoupledFixedPointInBox: return "NoCoupledFixedPointInBox";
        case VerdictKind::FixedPointReached: return "FixedPointReached";
        case VerdictKind::Undecided: return "Undecided";
    }
    return "Undecided";
}

/// Evidence backing a verdict. fixed_point_image holds the evaluated
/// A(x*, x*) whenever a fixed-point check ran; attraction alone never
/// implies fixedness, so the evaluation is always explicit.
template <class E>
struct VerdictCertificate {
    std::size_t horizon = 0;
    bool horizon_complete = false;
    std::string method;
    std::optional<E> fixed_point_image;
    std::optional<double> fixed_point_residual;
    std::optional<std::size_t> intersection_size;
    std::string note;
};

template <class E>
struct AttractionVerdict {
    VerdictKind kind = VerdictKind::Undecided;
    std::optional<E> x_star;
    bool fixed_point_confirmed = false;
    VerdictCertificate<E> certificate;
};

/// Full record of a coupled run. Steps are stored in a window that holds
/// the complete history until trace_cap is exceeded, after which it slides
/// (window_start > 0) while summary flags keep tracking the full history.
template <class E>
struct CoupledTrace {
    std::size_t count = 0;         // pairs recorded so far (indices 0..count-1)
    std::size_t window_start = 0;  // index of the first pair still stored
    std::deque<std::pair<E, E>> window;

    std::optional<std::size_t> lu_onset;
    std::optional<std::size_t> equal_at;
    std::optional<std::size_t> empty_intersection_at;
    std::optional<std::size_t> order_violation_at;
    std::optional<std::size_t> lu_persistence_violation_at;
    bool horizon_complete = false;
    bool cycle_detected = false;

    // Monotonicity of the full history, tracked incrementally.
    bool xs_nondecreasing = true;
    bool xs_nonincreasing = true;
    bool ys_nondecreasing = true;
    bool ys_nonincreasing = true;

    std::vector<E> finite_intersection;  // finite universes: exact running intersection
    std::optional<std::pair<E, E>> running_box;  // numeric universes

    StopPolicy policy;
    AttractionVerdict<E> verdict;  // preliminary verdict assigned by run()

    const std::pair<E, E>& at(std::size_t n) const {
        if (n < window_start || n >= count) {
            throw Error("trace step " + std::to_string(n) + " is not stored");
        }
        return window[n - window_start];
    }

    std::vector<E> xs() const {
        std::vector<E> out;
        out.reserve(window.size());
        for (const auto& p : window) out.push_back(p.first);
        return out;
    }

    std::vector<E> ys() const {
        std::vector<E> out;
        out.reserve(window.size());
        for (const auto& p : window) out.push_back(p.second);
        return out;
    }
};

namespace detail {

template <class E>
void trace_push(CoupledTrace<E>& t, std::pair<E, E> step) {
    t.window.push_back(std::move(step));
    ++t.count;
    if (t.window.size() > t.policy.trace_cap) {
        t.window.pop_front();
        ++t.window_start;
    }
}

}  // namespace detail

template <class E>
bool is_coupled_fixed_point(const BivariateOperator<E>& a, const E& x, const E& y) {
    const auto& u = *a.universe();
    return u.eq(a(x, y), x) && u.eq(a(y, x), y);
}

template <class E>
bool is_coupled_lu_fixed_point(const BivariateOperator<E>& a, const E& x, const E& y) {
    const auto& u = *a.universe();
    return u.leq(x, y) && u.leq(x, a(x, y)) && u.leq(a(y, x), y);
}

/// Runs the coupled iteration x_{n+1} = A(x_n, y_n), y_{n+1} = A(y_n, x_n)
/// from an ordered start pair.
///
/// Halts on: equality of the pair, certified empty intersection (finite
/// universes), gap below tolerance or stagnation (numeric universes),
/// cycle closure (finite universes with exact keys), or max_steps.
///
/// Throws PreconditionOrder when x0 is not below y0 and, in strict mode,
/// MonotonicityViolation when a step breaks an order relation that holds
/// for every mixed monotone operator.
template <class E>
CoupledTrace<E> run(const BivariateOperator<E>& a, E x0, E y0, StopPolicy policy = {}) {
    const auto& u = *a.universe();
    if (!u.leq(x0, y0)) {
        throw PreconditionOrder("coupled iteration requires x0 <= y0");
    }
    ensure_deterministic(a, x0, y0);

    CoupledTrace<E> t;
    t.policy = policy;

    const bool finite = u.finite();
    const bool numeric = u.numeric();
    const bool track_box = numeric && u.join2 && u.meet2;

    if (finite) {
        for (const E& z : u.elements) {
            if (u.leq(x0, z) && u.leq(z, y0)) t.finite_intersection.push_back(z);
        }
    }
    if (track_box) t.running_box = {x0, y0};

    std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
    if (finite && u.exact_key) seen.insert({u.exact_key(x0), u.exact_key(y0)});

    detail::trace_push(t, {x0, y0});
    if (u.eq(x0, y0)) {
        t.equal_at = 0;
        t.horizon_complete = true;
    }

    E x = std::move(x0);
    E y = std::move(y0);
    int quiet_streak = 0;

    for (std::size_t n = 0; n < policy.max_steps && !t.equal_at; ++n) {
        E xn = a(x, y);
        E yn = a(y, x);
        if (!u.leq(xn, yn)) {
            detail::trace_push(t, {std::move(xn), std::move(yn)});
            t.order_violation_at = n + 1;
            if (!policy.record_order_violation) {
                throw MonotonicityViolation(
                    "step " + std::to_string(n + 1) +
                    " produced x not below y; operator '" + a.label() +
                    "' is not mixed monotone on the visited region");
            }
            break;
        }

        const bool x_up = u.leq(x, xn);
        const bool x_down = u.leq(xn, x);
        const bool y_up = u.leq(y, yn);
        const bool y_down = u.leq(yn, y);
        t.xs_nondecreasing = t.xs_nondecreasing && x_up;
        t.xs_nonincreasing = t.xs_nonincreasing && x_down;
        t.ys_nondecreasing = t.ys_nondecreasing && y_up;
        t.ys_nonincreasing = t.ys_nonincreasing && y_down;

        if (!t.lu_onset) {
            if (x_up && y_down) t.lu_onset = n;
        } else if (!(x_up && y_down)) {
            t.lu_persistence_violation_at = n + 1;
            if (!policy.record_order_violation) {
                throw MonotonicityViolation(
                    "lower-upper monotonicity from step " + std::to_string(*t.lu_onset) +
                    " was lost at step " + std::to_string(n + 1));
            }
        }

        detail::trace_push(t, {xn, yn});

        if (finite) {
            std::erase_if(t.finite_intersection, [&](const E& z) {
                return !(u.leq(xn, z) && u.leq(z, yn));
            });
            if (t.finite_intersection.empty() && !t.empty_intersection_at) {
                t.empty_intersection_at = n + 1;
                t.horizon_complete = true;
                break;
            }
        } else if (t.running_box) {
            auto& [lo, hi] = *t.running_box;
            lo = u.join2(lo, xn);
            hi = u.meet2(hi, yn);
            if (!u.leq(lo, hi) && !t.empty_intersection_at) t.empty_intersection_at = n + 1;
        }

        if (u.eq(xn, yn)) {
            t.equal_at = n + 1;
            t.horizon_complete = true;
            break;
        }

        if (finite && u.exact_key) {
            if (!seen.insert({u.exact_key(xn), u.exact_key(yn)}).second) {
                t.cycle_detected = true;
                t.horizon_complete = true;
                break;
            }
        }

        if (numeric) {
            if (u.distance(xn, yn) <= policy.gap_tolerance) {
                t.horizon_complete = true;
                x = std::move(xn);
                y = std::move(yn);
                break;
            }
            if (policy.stagnation_window) {
                if (u.distance(x, xn) <= u.eq_tol && u.distance(y, yn) <= u.eq_tol) {
                    if (++quiet_streak >= *policy.stagnation_window) {
                        t.horizon_complete = true;
                        x = std::move(xn);
                        y = std::move(yn);
                        break;
                    }
                } else {
                    quiet_streak = 0;
                }
            }
        }

        x = std::move(xn);
        y = std::move(yn);
    }

    t.verdict.certificate.horizon = t.count;
    t.verdict.certificate.horizon_complete = t.horizon_complete;
    if (t.equal_at) {
        const E& z = t.at(*t.equal_at).first;
        E image = a(z, z);
        const bool fixed = u.eq(image, z);
        t.verdict.certificate.fixed_point_image = image;
        if (u.numeric()) t.verdict.certificate.fixed_point_residual = u.distance(image, z);
        t.verdict.fixed_point_confirmed = fixed;
        if (fixed) {
            t.verdict.kind = VerdictKind::FixedPointReached;
            t.verdict.x_star = z;
            t.verdict.certificate.method = "pair-equality";
        }
    }
    return t;
}

/// Options for classify. fixed_point_tol < 0 means "use the universe
/// equality"; solvers that converged to a coarser tolerance pass their own.
struct ClassifyOptions {
    double fixed_point_tol = -1.0;
};

namespace detail {

template <class E>
bool fixed_within(const Universe<E>& u, const E& image, const E& z, double tol) {
    if (tol < 0 || !u.numeric()) return u.eq(image, z);
    return u.distance(image, z) <= tol;
}

}  // namespace detail

/// Classifies a completed trace per the attraction definitions.
///
/// Finite universes: the recorded running intersection is exact; once the
/// run closed its horizon (cycle or equality) it equals the intersection of
/// the full infinite interval family. An empty intersection certifies the
/// absence of coupled fixed points in the start box on any horizon. A
/// singleton {x*} gives weak order-attraction, upgraded to order-attraction
/// when exhaustive sup/inf queries land on x*.
///
/// Numeric universes: attraction is certified through sup/inf of the
/// stored monotone sequences (exact first element against the trend,
/// stabilized last element along it); a collapsed monotone bracket is the
/// special case where both limits coincide with the final iterates.
///
/// Every attractive verdict evaluates A(x*, x*) explicitly and reports the
/// result; the Undecided verdict is first-class and never extrapolated
/// away.
template <class E>
AttractionVerdict<E> classify(const CoupledTrace<E>& t, const BivariateOperator<E>& a,
                              ClassifyOptions opt = {}) {
    const auto& u = *a.universe();
    AttractionVerdict<E> v;
    v.certificate.horizon = t.count;
    v.certificate.horizon_complete = t.horizon_complete;

    if (t.order_violation_at) {
        v.certificate.note = "order violation at step " + std::to_string(*t.order_violation_at);
        return v;
    }

    auto confirm_fixed = [&](const E& star) {
        E image = a(star, star);
        v.fixed_point_confirmed = detail::fixed_within(u, image, star, opt.fixed_point_tol);
        if (u.numeric()) v.certificate.fixed_point_residual = u.distance(image, star);
        v.certificate.fixed_point_image = std::move(image);
    };

    if (u.finite()) {
        std::vector<E> final_set = t.finite_intersection;
        if (t.equal_at) {
            const E& z = t.at(*t.equal_at).first;
            if (!u.eq(a(z, z), z)) final_set.clear();
        }
        v.certificate.intersection_size = final_set.size();
        if (final_set.empty()) {
            v.kind = VerdictKind::NoCoupledFixedPointInBox;
            v.certificate.method = "exact-intersection-empty";
            return v;
        }
        if (final_set.size() == 1 && t.horizon_complete) {
            const E star = final_set.front();
            v.x_star = star;
            confirm_fixed(star);
            // The sup/inf upgrade needs the full value sets; a slid window
            // may have evicted the extremes.
            if (t.window_start == 0) {
                const auto xs = t.xs();
                const auto ys = t.ys();
                const auto sup = sup_of(u, std::span<const E>(xs));
                const auto inf = inf_of(u, std::span<const E>(ys));
                if (sup && inf && u.eq(*sup, star) && u.eq(*inf, star)) {
                    v.kind = VerdictKind::OrderAttractive;
                    v.certificate.method = "exact-intersection-singleton+sup-inf";
                    return v;
                }
            }
            v.kind = VerdictKind::WeaklyOrderAttractive;
            v.certificate.method = "exact-intersection-singleton";
            return v;
        }
        v.certificate.note = t.horizon_complete ? "intersection not a singleton"
                                                : "horizon incomplete";
        return v;
    }

    if (u.numeric()) {
        const auto xs = t.xs();
        const auto ys = t.ys();

        std::optional<E> sup;
        bool sup_exact_front = false;
        if (t.window_start == 0 && t.xs_nonincreasing && !xs.empty()) {
            sup = xs.front();
            sup_exact_front = true;
        } else if (t.xs_nondecreasing && xs.size() >= 2 &&
                   u.distance(xs[xs.size() - 2], xs.back()) <= u.eq_tol) {
            sup = xs.back();
        }

        std::optional<E> inf;
        bool inf_exact_front = false;
        if (t.window_start == 0 && t.ys_nondecreasing && !ys.empty()) {
            inf = ys.front();
            inf_exact_front = true;
        } else if (t.ys_nonincreasing && ys.size() >= 2 &&
                   u.distance(ys[ys.size() - 2], ys.back()) <= u.eq_tol) {
            inf = ys.back();
        }

        // Collapsed monotone bracket: both limits are the final iterates.
        const double gap_tol = std::max(u.eq_tol, t.policy.gap_tolerance);
        if ((!sup || !inf) && t.xs_nondecreasing && t.ys_nonincreasing && !xs.empty() &&
            u.leq(xs.back(), ys.back()) && u.distance(xs.back(), ys.back()) <= gap_tol) {
            sup = xs.back();
            inf = ys.back();
            sup_exact_front = inf_exact_front = false;
        }

        if (sup && inf && u.distance(*sup, *inf) <= std::max(u.eq_tol, gap_tol)) {
            // Prefer an exact limit when one side is monotone against its
            // trend; otherwise report the lower iterate.
            E star = sup_exact_front ? *sup : (inf_exact_front ? *inf : *sup);
            v.x_star = star;
            confirm_fixed(star);
            v.kind = VerdictKind::OrderAttractive;
            v.certificate.method = "sup-inf-certified";
            return v;
        }

        if (t.equal_at) {
            const E& z = t.at(*t.equal_at).first;
            E image = a(z, z);
            if (detail::fixed_within(u, image, z, opt.fixed_point_tol)) {
                v.kind = VerdictKind::FixedPointReached;
                v.x_star = z;
                v.fixed_point_confirmed = true;
                v.certificate.fixed_point_residual = u.distance(image, z);
                v.certificate.fixed_point_image = std::move(image);
                v.certificate.method = "pair-equality";
                return v;
            }
            v.certificate.note = "pair equality without fixedness";
            return v;
        }

        v.certificate.note = "no certified sup/inf on this horizon";
        return v;
    }

    v.certificate.note = "universe exposes neither enumeration nor distance";
    return v;
}

/// Least k from which the trace behaves as a coupled lower-upper fixed
/// point (x_k <= x_{k+1}, y_{k+1} <= y_k, x_k <= y_k). Once an onset is
/// found, the monotone behaviour must persist over the recorded horizon;
/// a later break means the operator is not mixed monotone and raises.
template <class E>
std::optional<std::size_t> detect_lu_onset(const CoupledTrace<E>& t,
                                           const Universe<E>& u) {
    std::optional<std::size_t> onset;
    for (std::size_t n = t.window_start; n + 1 < t.count; ++n) {
        const auto& cur = t.at(n);
        const auto& nxt = t.at(n + 1);
        const bool step_lu = u.leq(cur.first, nxt.first) && u.leq(nxt.second, cur.second) &&
                             u.leq(cur.first, cur.second);
        if (!onset) {
            if (step_lu) onset = n;
        } else if (!step_lu) {
            throw MonotonicityViolation(
                "lower-upper monotonicity from step " + std::to_string(*onset) +
                " does not persist at step " + std::to_string(n + 1));
        }
    }
    return onset;
}

struct SandwichReport {
    bool pass = true;
    std::optional<std::size_t> violation_index;
    std::string clause;
};

/// Runs the inner coupled iteration from (u0, v0) inside the outer trace's
/// start box and verifies the bracketing x_n <= u_n and v_n <= y_n on the
/// shared horizon. When a confirmed fixed point x* with u0 <= x* <= v0 is
/// supplied, the middle chain u_n <= x* <= v_n is verified as well.
template <class E>
SandwichReport sandwich_check(const BivariateOperator<E>& a, const CoupledTrace<E>& outer,
                              const E& u0, const E& v0,
                              const std::optional<E>& x_star = std::nullopt,
                              bool x_star_fixed = false) {
    const auto& u = *a.universe();
    const auto& start = outer.at(0);
    if (!(interval_contains(u, OrderInterval<E>{start.first, start.second}, u0) &&
          interval_contains(u, OrderInterval<E>{start.first, start.second}, v0))) {
        throw PreconditionOrder("sandwich_check requires u0, v0 inside the outer start box");
    }
    if (x_star && !(u.leq(u0, *x_star) && u.leq(*x_star, v0))) {
        throw PreconditionOrder("sandwich_check requires u0 <= x* <= v0");
    }

    StopPolicy inner_policy = outer.policy;
    inner_policy.max_steps = outer.count == 0 ? 0 : outer.count - 1;
    inner_policy.stagnation_window = std::nullopt;
    CoupledTrace<E> inner = run(a, u0, v0, inner_policy);

    SandwichReport report;
    const std::size_t upto = std::min(outer.count, inner.count);
    for (std::size_t n = outer.window_start; n < upto; ++n) {
        const auto& o = outer.at(n);
        const auto& i = inner.at(n);
        if (!u.leq(o.first, i.first)) {
            return {false, n, "outer-lower"};
        }
        if (!u.leq(i.second, o.second)) {
            return {false, n, "outer-upper"};
        }
        if (x_star && x_star_fixed &&
            !(u.leq(i.first, *x_star) && u.leq(*x_star, i.second))) {
            return {false, n, "middle-chain"};
        }
    }
    return report;
}

}  // namespace mixmono
