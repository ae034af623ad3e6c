#include <doctest.h>

#include <cmath>

#include "mixmono/cone.hpp"
#include "mixmono/finite.hpp"
#include "mixmono/iteration.hpp"
#include "mixmono/problems.hpp"

using namespace mixmono;

namespace {

// Independent scalar oracle: bisection for t = sqrt(t) + t^(-1/3) on [2, 3].
double bisect_power_fixed_point() {
    auto g = [](double t) { return std::sqrt(t) + std::pow(t, -1.0 / 3.0) - t; };
    double lo = 2.0, hi = 3.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) > 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

constexpr double kPowerFixedPoint = 2.2668544161867273;

}  // namespace

TEST_CASE("running example trace is binary-exact") {
    auto frac = frac_example_operator();
    StopPolicy policy;
    policy.max_steps = 10;
    policy.stagnation_window = std::nullopt;
    const auto trace = run(frac, 0.0, 1.0, policy);
    REQUIRE(trace.count == 11);
    for (std::size_t n = 0; n < trace.count; ++n) {
        CHECK(trace.at(n).first == 1.0 - std::ldexp(1.0, -static_cast<int>(n)));
        CHECK(trace.at(n).second == 2.0 - std::ldexp(1.0, -static_cast<int>(n)));
    }
    CHECK_FALSE(trace.equal_at);
    // x ascends but y ascends too, so no lower-upper onset ever appears.
    CHECK_FALSE(trace.lu_onset);
    CHECK_FALSE(detect_lu_onset(trace, *frac.universe()).has_value());
}

TEST_CASE("projection start stays put and classifies Undecided") {
    auto frac = frac_example_operator();
    auto p = projection(frac.universe());
    StopPolicy policy;
    policy.max_steps = 5;
    policy.stagnation_window = std::nullopt;
    const auto trace = run(p, 0.25, 0.75, policy);
    for (std::size_t n = 0; n < trace.count; ++n) {
        CHECK(trace.at(n).first == 0.25);
        CHECK(trace.at(n).second == 0.75);
    }
    // Constant distinct brackets: sup xs = 0.25, inf ys = 0.75, no attraction.
    const auto verdict = classify(trace, p);
    CHECK(verdict.kind == VerdictKind::Undecided);

    // An equal start is itself a fixed point of the projection.
    const auto equal = run(p, 0.5, 0.5, policy);
    CHECK(equal.equal_at == std::optional<std::size_t>(0));
    CHECK(equal.verdict.kind == VerdictKind::FixedPointReached);
}

TEST_CASE("constant operator reaches its fixed point") {
    auto u = poset_universe(FinitePoset::chain(2));
    std::vector<int> ones = {1, 1, 1, 1};
    auto a = make_operator(u, TableOperator(2, ones), "one");
    const auto trace = run(a, 0, 1);
    REQUIRE(trace.equal_at);
    CHECK(*trace.equal_at == 1);
    CHECK(trace.verdict.kind == VerdictKind::FixedPointReached);
    REQUIRE(trace.verdict.x_star);
    CHECK(*trace.verdict.x_star == 1);

    // classify refines to order-attraction: sup xs = inf ys = 1.
    const auto verdict = classify(trace, a);
    CHECK(verdict.kind == VerdictKind::OrderAttractive);
    CHECK(verdict.fixed_point_confirmed);
}

TEST_CASE("constant cone operator classifies order-attractive with confirmed fixed point") {
    auto u = cone_universe(1);
    const ConeVector c({2.0});
    BivariateOperator<ConeVector> constant(
        u, [c](const ConeVector&, const ConeVector&) { return c; }, "const");
    const auto trace = run(constant, ConeVector({0.0}), ConeVector({5.0}));
    const auto verdict = classify(trace, constant);
    CHECK(verdict.kind == VerdictKind::OrderAttractive);
    REQUIRE(verdict.x_star);
    CHECK((*verdict.x_star)[0] == 2.0);
    CHECK(verdict.fixed_point_confirmed);
}

TEST_CASE("run rejects unordered starts") {
    auto frac = frac_example_operator();
    CHECK_THROWS_AS(run(frac, 1.0, 0.0), PreconditionOrder);
}

TEST_CASE("order violations raise in strict mode and record in oracle mode") {
    auto u = poset_universe(FinitePoset::chain(2));
    std::vector<int> swap = {0, 1, 0, 1};  // A(x, y) = y
    auto a = make_operator(u, TableOperator(2, swap), "snd");
    CHECK_THROWS_AS(run(a, 0, 1), MonotonicityViolation);

    StopPolicy policy;
    policy.record_order_violation = true;
    const auto trace = run(a, 0, 1, policy);
    REQUIRE(trace.order_violation_at);
    CHECK(*trace.order_violation_at == 1);
    CHECK(classify(trace, a).kind == VerdictKind::Undecided);
}

TEST_CASE("coupled fixed point predicates") {
    auto frac = frac_example_operator();
    auto p = projection(frac.universe());
    CHECK(is_coupled_fixed_point(p, 0.3, 0.9));
    CHECK(is_coupled_fixed_point(p, 0.9, 0.3));

    // A(1, 1) = 1.5, so (1, 1) is no coupled fixed point of the example.
    CHECK_FALSE(is_coupled_fixed_point(frac, 1.0, 1.0));
    CHECK(frac(1.0, 1.0) == 1.5);

    // (0, 1) fails the lower-upper test: A(1, 0) = 1.5 is not below 1.
    CHECK_FALSE(is_coupled_lu_fixed_point(frac, 0.0, 1.0));

    // The scalar power operator at its fixed point.
    const auto power = make_power_op(1);
    const double star = bisect_power_fixed_point();
    CHECK(star == doctest::Approx(kPowerFixedPoint).epsilon(1e-12));
    CHECK(is_coupled_fixed_point(power.op, ConeVector({star}), ConeVector({star})));
    CHECK(is_coupled_lu_fixed_point(power.op, ConeVector({star}), ConeVector({star})));
}

TEST_CASE("running example classifies order-attractive at x* = 1 without fixedness") {
    auto frac = frac_example_operator();
    StopPolicy policy;
    policy.max_steps = 52;
    policy.stagnation_window = std::nullopt;
    const auto trace = run(frac, 0.0, 1.0, policy);
    // y ascends the whole way, so no lower-upper onset at any horizon.
    CHECK_FALSE(trace.lu_onset);
    const auto verdict = classify(trace, frac);
    CHECK(verdict.kind == VerdictKind::OrderAttractive);
    REQUIRE(verdict.x_star);
    CHECK(*verdict.x_star == 1.0);
    CHECK_FALSE(verdict.fixed_point_confirmed);
    REQUIRE(verdict.certificate.fixed_point_image);
    CHECK(*verdict.certificate.fixed_point_image == 1.5);
}

TEST_CASE("short horizons stay honest: no attraction claim at 20 steps") {
    auto frac = frac_example_operator();
    StopPolicy policy;
    policy.max_steps = 20;
    policy.stagnation_window = std::nullopt;
    const auto trace = run(frac, 0.0, 1.0, policy);
    CHECK(classify(trace, frac).kind == VerdictKind::Undecided);
}

TEST_CASE("equality at a non-fixed point certifies emptiness on finite universes") {
    // f swaps the two middle elements of a diamond; starting from (a, a)
    // the intervals are disjoint singletons.
    auto poset = FinitePoset::diamond(2);  // 0 bottom, 1/2 middles, 3 top
    auto u = poset_universe(poset);
    const int n = poset.size();
    std::vector<int> table(static_cast<std::size_t>(n) * n);
    auto f = [](int z) { return z == 1 ? 2 : (z == 2 ? 1 : z); };
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) table[static_cast<std::size_t>(x) * n + y] = f(x);
    auto a = make_operator(u, TableOperator(n, table), "swap");
    REQUIRE(check_mixed_monotone(a).pass);

    const auto trace = run(a, 1, 1);
    REQUIRE(trace.equal_at);
    const auto verdict = classify(trace, a);
    CHECK(verdict.kind == VerdictKind::NoCoupledFixedPointInBox);
    CHECK(enumerate_coupled_fixed_points(TableOperator(n, table), poset,
                                         OrderInterval<int>{1, 1})
              .empty());
}

TEST_CASE("cycling pairs give an empty intersection with no fixed points") {
    // Two middles a, b and two tops t1, t2; f swaps a/b and t1/t2. From
    // (a, t1) the boxes alternate and their intersection is empty.
    // order: 0 bottom, 1 = a, 2 = b, 3 = t1, 4 = t2
    std::vector<std::uint8_t> m = {
        1, 1, 1, 1, 1,
        0, 1, 0, 1, 1,
        0, 0, 1, 1, 1,
        0, 0, 0, 1, 0,
        0, 0, 0, 0, 1,
    };
    FinitePoset poset(5, std::move(m));
    REQUIRE(validate_poset(poset).pass);
    auto u = poset_universe(poset);
    auto f = [](int z) {
        switch (z) {
            case 1: return 2;
            case 2: return 1;
            case 3: return 4;
            case 4: return 3;
            default: return z;
        }
    };
    std::vector<int> table(25);
    for (int x = 0; x < 5; ++x)
        for (int y = 0; y < 5; ++y) table[static_cast<std::size_t>(x) * 5 + y] = f(x);
    auto a = make_operator(u, TableOperator(5, table), "swap2");
    REQUIRE(check_mixed_monotone(a).pass);

    const auto trace = run(a, 1, 3);
    REQUIRE(trace.empty_intersection_at);
    const auto verdict = classify(trace, a);
    CHECK(verdict.kind == VerdictKind::NoCoupledFixedPointInBox);
    CHECK(enumerate_coupled_fixed_points(TableOperator(5, table), poset,
                                         OrderInterval<int>{1, 3})
              .empty());
}

TEST_CASE("lu onset detection and persistence") {
    // Start from a coupled lower-upper fixed point: onset 0.
    auto u = poset_universe(FinitePoset::chain(3));
    std::vector<int> table = {
        1, 1, 1,  // A(0, *) = 1
        1, 1, 1,  // A(1, *) = 1
        2, 2, 2,  // A(2, *) = 2
    };
    auto a = make_operator(u, TableOperator(3, table), "step");
    REQUIRE(check_mixed_monotone(a).pass);
    REQUIRE(is_coupled_lu_fixed_point(a, 0, 2));
    const auto trace = run(a, 0, 2);
    REQUIRE(trace.lu_onset);
    CHECK(*trace.lu_onset == 0);
    CHECK(detect_lu_onset(trace, *u) == trace.lu_onset);

    // A non-monotone self-map breaks persistence after a fake onset.
    auto u3 = poset_universe(FinitePoset::chain(3));
    std::vector<int> bad = {
        1, 1, 1,  // 0 -> 1
        0, 0, 0,  // 1 -> 0
        2, 2, 2,  // 2 -> 2
    };
    auto b = make_operator(u3, TableOperator(3, bad), "osc");
    StopPolicy policy;
    policy.record_order_violation = true;
    const auto osc = run(b, 0, 2, policy);
    REQUIRE(osc.lu_persistence_violation_at);
    CHECK_THROWS_AS(detect_lu_onset(osc, *u3), MonotonicityViolation);
    CHECK_THROWS_AS(run(b, 0, 2), MonotonicityViolation);
}

TEST_CASE("sandwich bracketing on the running example") {
    auto frac = frac_example_operator();
    StopPolicy policy;
    policy.max_steps = 30;
    policy.stagnation_window = std::nullopt;
    const auto outer = run(frac, 0.0, 1.0, policy);

    // Inner trace from the same pair reproduces the outer one.
    CHECK(sandwich_check(frac, outer, 0.0, 1.0).pass);

    // Interior start (0.5, 1): u_n = 1 - 2^-(n+1), v_n = y_n.
    CHECK(sandwich_check(frac, outer, 0.5, 1.0).pass);

    CHECK_THROWS_AS(sandwich_check(frac, outer, -1.0, 0.5), PreconditionOrder);
}

TEST_CASE("trace window slides under a tight cap") {
    auto frac = frac_example_operator();
    StopPolicy policy;
    policy.max_steps = 30;
    policy.trace_cap = 8;
    policy.stagnation_window = std::nullopt;
    const auto trace = run(frac, 0.0, 1.0, policy);
    CHECK(trace.count == 31);
    CHECK(trace.window_start == 23);
    CHECK(trace.window.size() == 8);
    CHECK_THROWS_AS(trace.at(0), Error);
    CHECK(trace.at(30).first == 1.0 - std::ldexp(1.0, -30));
    CHECK(trace.xs_nondecreasing);
}
