#include "mixmono/oracle.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include <json.hpp>

#include "mixmono/iteration.hpp"
#include "mixmono/rng.hpp"
#include "mixmono/serialize.hpp"

namespace mixmono {

namespace {

std::string pair_str(int a, int b) {
    return "(" + std::to_string(a) + ", " + std::to_string(b) + ")";
}

/// All clause checks for one instance. Attraction facts are computed by
/// brute force from recorded traces (exact interval-set scans over the
/// poset), independently of the engine's incremental bookkeeping; the
/// classify-consistent clause compares the two routes.
class InstanceChecker {
public:
    explicit InstanceChecker(const Instance& inst)
        : inst_(inst),
          universe_(poset_universe(inst.poset)),
          op_(make_operator(universe_, inst.op, "trial")),
          n_(inst.poset.size()) {
        policy_.max_steps = static_cast<std::size_t>(n_) * n_ + 2;
        policy_.record_order_violation = true;
        policy_.stagnation_window = std::nullopt;
    }

    InstanceReport check() {
        report_.mixed_monotone = check_mixed_monotone(op_).pass;

        trace_ = run(op_, inst_.x0, inst_.y0, policy_);
        for (std::size_t m = 0; m < trace_.count; ++m) {
            report_.trace.push_back(trace_.at(m));
        }

        tick("pair-order-preserved");
        if (trace_.order_violation_at) {
            fail("pair-order-preserved",
                 "x not below y at step " + std::to_string(*trace_.order_violation_at));
            return std::move(report_);
        }
        if (trace_.lu_persistence_violation_at) {
            tick("lu-onset-persistence");
            fail("lu-onset-persistence",
                 "monotone behaviour lost at step " +
                     std::to_string(*trace_.lu_persistence_violation_at));
            return std::move(report_);
        }

        check_box_image_invariance();
        check_coupled_fp_containment();
        check_lu_start_monotone();
        check_classify_consistency();
        check_attraction_point_properties();
        check_interval_properties();
        check_late_start_theorems();
        check_sandwich();
        return std::move(report_);
    }

private:
    struct WEntry {
        std::optional<int> weak;
        std::optional<int> strong;
        std::optional<int> sup;
        std::optional<int> inf;
        std::size_t intersection_size = 0;
        bool complete = false;
    };

    void tick(const std::string& clause) { ++report_.clauses_checked[clause]; }

    void fail(const std::string& clause, const std::string& detail) {
        report_.violations.push_back({clause, detail});
    }

    bool leq(int a, int b) const { return inst_.poset.leq(a, b); }
    int apply(int x, int y) const { return inst_.op.apply(x, y); }
    bool fixed(int z) const { return apply(z, z) == z; }
    bool in_box(int z, int lo, int hi) const { return leq(lo, z) && leq(z, hi); }

    bool is_lu_pair(int x, int y) const {
        return leq(x, y) && leq(x, apply(x, y)) && leq(apply(y, x), y);
    }

    /// Brute-force attraction facts for the pair (u0, v0).
    const WEntry& wentry(int u0, int v0) {
        const auto key = std::make_pair(u0, v0);
        if (auto it = wtable_.find(key); it != wtable_.end()) return it->second;

        CoupledTrace<int> t = run(op_, u0, v0, policy_);
        WEntry e;
        e.complete = t.horizon_complete && !t.order_violation_at;

        std::vector<int> xs, ys;
        for (std::size_t m = 0; m < t.count; ++m) {
            xs.push_back(t.at(m).first);
            ys.push_back(t.at(m).second);
        }

        // Exact intersection of every recorded interval, scanned directly.
        std::vector<int> inter;
        if (!t.order_violation_at) {
            for (int z = 0; z < n_; ++z) {
                bool inside = true;
                for (std::size_t m = 0; m < t.count; ++m) {
                    if (!in_box(z, t.at(m).first, t.at(m).second)) { inside = false; break; }
                }
                if (inside) inter.push_back(z);
            }
        }

        // A halt on pair equality at a non-fixed point pins the tail: the
        // later intervals are the disjoint singletons of the diagonal
        // orbit, so the full intersection is empty and the tail value sets
        // extend by that orbit (closed, the poset is finite).
        if (t.equal_at && !t.order_violation_at) {
            const int z = t.at(*t.equal_at).first;
            if (!fixed(z)) {
                inter.clear();
                std::set<int> seen;
                int cur = apply(z, z);
                while (seen.insert(cur).second) {
                    xs.push_back(cur);
                    ys.push_back(cur);
                    cur = apply(cur, cur);
                }
            }
        }

        e.intersection_size = inter.size();
        if (e.complete && inter.size() == 1) e.weak = inter.front();
        if (e.complete && !t.order_violation_at) {
            e.sup = sup_of(*universe_, std::span<const int>(xs));
            e.inf = inf_of(*universe_, std::span<const int>(ys));
            if (e.sup && e.inf && *e.sup == *e.inf) e.strong = e.sup;
        }
        return wtable_.emplace(key, std::move(e)).first->second;
    }

    /// x* weakly order-attracts [a, b]: x* in [a, b] and every interior
    /// sandwiching pair is weakly attracted to x*.
    bool weakly_on(int a, int b, int star) {
        const auto key = std::make_tuple(a, b, star);
        if (auto it = weak_on_memo_.find(key); it != weak_on_memo_.end()) return it->second;
        bool ok = in_box(star, a, b);
        for (int p = 0; ok && p < n_; ++p) {
            if (!(in_box(p, a, b) && leq(p, star))) continue;
            for (int q = 0; ok && q < n_; ++q) {
                if (!(in_box(q, a, b) && leq(star, q))) continue;
                ok = wentry(p, q).weak == std::optional<int>(star);
            }
        }
        weak_on_memo_.emplace(key, ok);
        return ok;
    }

    bool strongly_on(int a, int b, int star) {
        const auto key = std::make_tuple(a, b, star);
        if (auto it = strong_on_memo_.find(key); it != strong_on_memo_.end()) return it->second;
        bool ok = in_box(star, a, b);
        for (int p = 0; ok && p < n_; ++p) {
            if (!(in_box(p, a, b) && leq(p, star))) continue;
            for (int q = 0; ok && q < n_; ++q) {
                if (!(in_box(q, a, b) && leq(star, q))) continue;
                ok = wentry(p, q).strong == std::optional<int>(star);
            }
        }
        strong_on_memo_.emplace(key, ok);
        return ok;
    }

    std::vector<std::pair<int, int>> fps_in(int lo, int hi) {
        return enumerate_coupled_fixed_points(
            inst_.op, inst_.poset, OrderInterval<int>{lo, hi});
    }

    bool unique_fp_in(int lo, int hi, int star) {
        const auto fps = fps_in(lo, hi);
        return fps.size() == 1 && fps.front() == std::make_pair(star, star);
    }

    void check_box_image_invariance() {
        tick("box-image-invariance");
        for (std::size_t m = 0; m + 1 < trace_.count; ++m) {
            const auto& [xm, ym] = trace_.at(m);
            const auto& [xm1, ym1] = trace_.at(m + 1);
            for (int p = 0; p < n_; ++p) {
                if (!in_box(p, xm, ym)) continue;
                for (int q = 0; q < n_; ++q) {
                    if (!in_box(q, xm, ym)) continue;
                    if (!in_box(apply(p, q), xm1, ym1)) {
                        fail("box-image-invariance",
                             "A" + pair_str(p, q) + " escapes box " + std::to_string(m + 1));
                        return;
                    }
                }
            }
        }
    }

    void check_coupled_fp_containment() {
        const auto fps = fps_in(inst_.x0, inst_.y0);
        if (fps.empty()) return;
        tick("coupled-fp-containment");
        for (const auto& [p, q] : fps) {
            for (std::size_t m = 0; m < trace_.count; ++m) {
                const auto& [xm, ym] = trace_.at(m);
                if (!in_box(p, xm, ym) || !in_box(q, xm, ym)) {
                    fail("coupled-fp-containment",
                         "coupled fixed point " + pair_str(p, q) + " leaves box " +
                             std::to_string(m));
                    return;
                }
            }
        }
    }

    void check_lu_start_monotone() {
        if (!is_lu_pair(inst_.x0, inst_.y0)) return;
        tick("lu-start-monotone");
        for (std::size_t m = 0; m < trace_.count; ++m) {
            const auto& [xm, ym] = trace_.at(m);
            if (!is_lu_pair(xm, ym)) {
                fail("lu-start-monotone",
                     "pair " + std::to_string(m) + " is not a coupled lower-upper fixed point");
                return;
            }
            if (m + 1 < trace_.count) {
                const auto& [xn, yn] = trace_.at(m + 1);
                if (!leq(xm, xn) || !leq(yn, ym)) {
                    fail("lu-start-monotone", "sequences not monotone at step " +
                                                  std::to_string(m + 1));
                    return;
                }
            }
        }
    }

    void check_classify_consistency() {
        tick("classify-consistent");
        const auto verdict = classify(trace_, op_);
        const auto& me = wentry(inst_.x0, inst_.y0);

        const bool engine_attractive = verdict.kind == VerdictKind::WeaklyOrderAttractive ||
                                       verdict.kind == VerdictKind::OrderAttractive;
        if (engine_attractive) {
            if (me.weak != verdict.x_star) {
                fail("classify-consistent", "engine attractor disagrees with oracle scan");
                return;
            }
        }
        if (verdict.kind == VerdictKind::OrderAttractive && me.strong != verdict.x_star) {
            fail("classify-consistent", "engine sup/inf claim disagrees with oracle scan");
            return;
        }
        if (verdict.kind == VerdictKind::NoCoupledFixedPointInBox && me.intersection_size != 0) {
            fail("classify-consistent", "engine emptiness claim disagrees with oracle scan");
            return;
        }
        if (me.weak && me.complete && !engine_attractive) {
            fail("classify-consistent", "oracle found an attractor the engine missed");
            return;
        }
        try {
            if (detect_lu_onset(trace_, *universe_) != trace_.lu_onset) {
                fail("classify-consistent", "lu onset recomputation disagrees");
            }
        } catch (const MonotonicityViolation&) {
            fail("classify-consistent", "lu onset recomputation raised on a recorded trace");
        }
    }

    void check_attraction_point_properties() {
        const auto& me = wentry(inst_.x0, inst_.y0);

        if (me.weak) {
            tick("attractor-inside-box");
            if (!in_box(*me.weak, inst_.x0, inst_.y0)) {
                fail("attractor-inside-box",
                     "attractor " + std::to_string(*me.weak) + " escapes the start box");
            }
        }

        if (me.intersection_size == 0) {
            tick("empty-intersection-no-fp");
            if (!fps_in(inst_.x0, inst_.y0).empty()) {
                fail("empty-intersection-no-fp",
                     "empty intersection but coupled fixed points exist in the box");
            }
        }

        // Strong attraction is exactly weak attraction plus existence of
        // sup/inf, with all three landing on the same point.
        for (int p = 0; p < n_; ++p) {
            for (int q = 0; q < n_; ++q) {
                if (!leq(p, q)) continue;
                const auto& e = wentry(p, q);
                if (!e.complete) continue;
                tick("strong-equals-weak-plus-bounds");
                const bool lhs = e.strong.has_value();
                const bool rhs = e.weak.has_value() && e.sup.has_value() && e.inf.has_value();
                if (lhs != rhs || (lhs && (e.strong != e.weak || e.sup != e.strong))) {
                    fail("strong-equals-weak-plus-bounds",
                         "equivalence fails for start " + pair_str(p, q));
                    return;
                }
            }
        }
    }

    void check_interval_properties() {
        const int x0 = inst_.x0;
        const int y0 = inst_.y0;
        const auto& me = wentry(x0, y0);

        for (int star = 0; star < n_; ++star) {
            const bool weak_on = weakly_on(x0, y0, star);
            const bool strong_on = strongly_on(x0, y0, star);

            if (weak_on) {
                tick("interval-weak-restricts");
                bool ok = me.weak == std::optional<int>(star);
                for (int p = 0; ok && p < n_; ++p) {
                    if (!(in_box(p, x0, y0) && leq(p, star))) continue;
                    for (int q = 0; ok && q < n_; ++q) {
                        if (!(in_box(q, x0, y0) && leq(star, q))) continue;
                        ok = weakly_on(p, q, star);
                    }
                }
                if (!ok) {
                    fail("interval-weak-restricts",
                         "restriction fails for x* = " + std::to_string(star));
                }
            }

            if (strong_on) {
                tick("interval-strong-restricts");
                bool ok = me.strong == std::optional<int>(star);
                for (int p = 0; ok && p < n_; ++p) {
                    if (!(in_box(p, x0, y0) && leq(p, star))) continue;
                    for (int q = 0; ok && q < n_; ++q) {
                        if (!(in_box(q, x0, y0) && leq(star, q))) continue;
                        ok = strongly_on(p, q, star);
                    }
                }
                if (!ok) {
                    fail("interval-strong-restricts",
                         "restriction fails for x* = " + std::to_string(star));
                }

                tick("interval-strong-implies-weak");
                if (!weak_on) {
                    fail("interval-strong-implies-weak",
                         "strong interval attraction without weak, x* = " +
                             std::to_string(star));
                }
            }

            tick("weak-interval-iff-fixed");
            const bool weak_rhs = me.weak == std::optional<int>(star) && fixed(star);
            if (weak_on != weak_rhs) {
                fail("weak-interval-iff-fixed",
                     "equivalence fails for x* = " + std::to_string(star));
            }

            tick("strong-interval-iff-fixed");
            const bool strong_rhs = me.strong == std::optional<int>(star) && fixed(star);
            if (strong_on != strong_rhs) {
                fail("strong-interval-iff-fixed",
                     "equivalence fails for x* = " + std::to_string(star));
            }

            if (weak_rhs) {
                tick("attractive-fp-unique");
                if (!unique_fp_in(x0, y0, star)) {
                    fail("attractive-fp-unique",
                         "coupled fixed points in the box differ from the attractor pair");
                }
            }
        }
    }

    void check_late_start_theorems() {
        const int x0 = inst_.x0;
        const int y0 = inst_.y0;

        // Running prefix intersection over k < count.
        std::vector<int> prefix;
        for (int z = 0; z < n_; ++z) {
            if (in_box(z, x0, y0)) prefix.push_back(z);
        }

        for (std::size_t k = 1; k < trace_.count; ++k) {
            const auto& [xk, yk] = trace_.at(k);
            const auto& tail = wentry(xk, yk);

            auto conclusions = [&](const std::string& clause, int star) {
                for (std::size_t m = 0; m <= k; ++m) {
                    const auto& [xm, ym] = trace_.at(m);
                    if (!unique_fp_in(xm, ym, star)) {
                        fail(clause, "uniqueness fails in box " + std::to_string(m) +
                                         " for x* = " + std::to_string(star));
                        return;
                    }
                    if (!weakly_on(xm, ym, star)) {
                        fail(clause, "interval attraction fails in box " + std::to_string(m) +
                                         " for x* = " + std::to_string(star));
                        return;
                    }
                    if (tail.sup && tail.inf && !strongly_on(xm, ym, star)) {
                        fail(clause, "strong interval attraction fails in box " +
                                         std::to_string(m) + " for x* = " + std::to_string(star));
                        return;
                    }
                }
            };

            if (tail.weak) {
                for (int star : prefix) {
                    if (tail.weak == std::optional<int>(star)) {
                        tick("late-tail-attraction-propagates");
                        conclusions("late-tail-attraction-propagates", star);
                    }
                }
                if (is_lu_pair(xk, yk) && in_box(*tail.weak, x0, y0)) {
                    tick("lu-onset-attraction-propagates");
                    conclusions("lu-onset-attraction-propagates", *tail.weak);
                }
            }

            const int lo_k = xk;
            const int hi_k = yk;
            std::erase_if(prefix, [&](int z) { return !in_box(z, lo_k, hi_k); });
        }

        const auto& me = wentry(x0, y0);
        if (is_lu_pair(x0, y0) && me.weak) {
            tick("lu-start-attraction-extends");
            const int star = *me.weak;
            if (!unique_fp_in(x0, y0, star) || !weakly_on(x0, y0, star)) {
                fail("lu-start-attraction-extends",
                     "conclusions fail for x* = " + std::to_string(star));
            } else if (me.sup && me.inf && !strongly_on(x0, y0, star)) {
                fail("lu-start-attraction-extends",
                     "strong conclusion fails for x* = " + std::to_string(star));
            }
        }
    }

    void check_sandwich() {
        const auto& me = wentry(inst_.x0, inst_.y0);
        if (!me.weak || !fixed(*me.weak)) return;
        const int star = *me.weak;
        report_.attractive_fixed_point = true;
        tick("sandwich-bracketing");
        for (int p = 0; p < n_; ++p) {
            if (!(in_box(p, inst_.x0, inst_.y0) && leq(p, star))) continue;
            for (int q = 0; q < n_; ++q) {
                if (!(in_box(q, inst_.x0, inst_.y0) && leq(star, q))) continue;
                try {
                    const auto sw = sandwich_check(op_, trace_, p, q, std::optional<int>(star),
                                                   /*x_star_fixed=*/true);
                    if (!sw.pass) {
                        fail("sandwich-bracketing",
                             "bracketing fails from " + pair_str(p, q) + " at step " +
                                 std::to_string(sw.violation_index.value_or(0)) + " (" +
                                 sw.clause + ")");
                        return;
                    }
                } catch (const Error& e) {
                    fail("sandwich-bracketing",
                         "inner run failed from " + pair_str(p, q) + ": " + e.what());
                    return;
                }
            }
        }
    }

    const Instance& inst_;
    UniversePtr<int> universe_;
    BivariateOperator<int> op_;
    int n_;
    StopPolicy policy_;
    InstanceReport report_;
    CoupledTrace<int> trace_;
    std::map<std::pair<int, int>, WEntry> wtable_;
    std::map<std::tuple<int, int, int>, bool> weak_on_memo_;
    std::map<std::tuple<int, int, int>, bool> strong_on_memo_;
};

Instance generate_trial(DetRng& rng, int min_size, int max_size) {
    const int size = min_size + static_cast<int>(rng.below(
                                    static_cast<std::uint64_t>(max_size - min_size + 1)));
    FinitePoset poset = generate_random_lattice(rng.next(), size);
    const auto lattice = lattice_tables(poset);
    TableOperator op = generate_random_mixed_monotone(rng.next(), poset, lattice);

    const int x0 = static_cast<int>(rng.below(size));
    std::vector<int> uppers;
    for (int v = 0; v < size; ++v) {
        if (poset.leq(x0, v)) uppers.push_back(v);
    }
    const int y0 = uppers[rng.below(uppers.size())];
    return Instance{std::move(poset), std::move(op), x0, y0};
}

}  // namespace

InstanceReport check_instance(const Instance& instance) {
    return InstanceChecker(instance).check();
}

OracleReport verify_theorem_suite(const OracleOptions& options) {
    OracleReport report;
    report.options = options;

    for (int trial = 0; trial < options.trials; ++trial) {
        DetRng rng = DetRng::child(options.seed, static_cast<std::uint64_t>(trial));
        const std::uint64_t trial_seed = rng.next();
        DetRng trial_rng(trial_seed);
        Instance instance = generate_trial(trial_rng, options.min_size, options.max_size);

        InstanceReport result = check_instance(instance);
        ++report.trials_run;
        for (const auto& [clause, count] : result.clauses_checked) {
            report.clauses_checked[clause] += count;
        }
        if (result.attractive_fixed_point) ++report.qualifying_sandwich;

        if (!result.mixed_monotone) {
            result.violations.push_back(
                {"mixed-monotone-construction", "generated operator failed the exhaustive check"});
        }
        if (!result.violations.empty()) {
            report.violations_total += static_cast<long>(result.violations.size());
            if (static_cast<int>(report.failures.size()) < options.max_bundles) {
                report.failures.push_back(
                    {trial, trial_seed,
                     CounterexampleBundle{std::move(instance), result.violations.front().clause,
                                          std::move(result.trace)}});
            }
        }
    }
    return report;
}

std::string bundle_to_json(const CounterexampleBundle& bundle) {
    JsonWriter w;
    const int n = bundle.instance.poset.size();
    w.begin_object();
    w.key("poset").begin_object();
    w.key("size").value(n);
    w.key("leq").begin_array();
    for (int a = 0; a < n; ++a) {
        w.begin_array();
        for (int b = 0; b < n; ++b) w.value(bundle.instance.poset.leq(a, b) ? 1 : 0);
        w.end_array();
    }
    w.end_array();
    w.end_object();
    w.key("operator").begin_array();
    for (int x = 0; x < n; ++x) {
        w.begin_array();
        for (int y = 0; y < n; ++y) w.value(bundle.instance.op.apply(x, y));
        w.end_array();
    }
    w.end_array();
    w.key("start").begin_array().value(bundle.instance.x0).value(bundle.instance.y0).end_array();
    w.key("violated").value(bundle.violated);
    w.key("trace").begin_array();
    for (const auto& [x, y] : bundle.trace) {
        w.begin_array().value(x).value(y).end_array();
    }
    w.end_array();
    w.end_object();
    return w.str();
}

CounterexampleBundle load_bundle(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw MalformedProblem(std::string("bundle is not valid JSON: ") + e.what());
    }
    try {
        const int n = j.at("poset").at("size").get<int>();
        if (n < 1 || n > 64) throw MalformedProblem("bundle poset size must be 1..64");
        std::vector<std::uint8_t> leq;
        leq.reserve(static_cast<std::size_t>(n) * n);
        for (const auto& row : j.at("poset").at("leq")) {
            for (const auto& cell : row) leq.push_back(cell.get<int>() ? 1 : 0);
        }
        FinitePoset poset(n, std::move(leq));

        std::vector<int> table;
        table.reserve(static_cast<std::size_t>(n) * n);
        for (const auto& row : j.at("operator")) {
            for (const auto& cell : row) table.push_back(cell.get<int>());
        }
        TableOperator op(n, std::move(table));

        const int x0 = j.at("start").at(0).get<int>();
        const int y0 = j.at("start").at(1).get<int>();
        if (x0 < 0 || x0 >= n || y0 < 0 || y0 >= n) {
            throw MalformedProblem("bundle start pair out of range");
        }

        CounterexampleBundle bundle{Instance{std::move(poset), std::move(op), x0, y0},
                                    j.at("violated").get<std::string>(),
                                    {}};
        if (j.contains("trace")) {
            for (const auto& step : j.at("trace")) {
                bundle.trace.emplace_back(step.at(0).get<int>(), step.at(1).get<int>());
            }
        }
        return bundle;
    } catch (const nlohmann::json::exception& e) {
        throw MalformedProblem(std::string("bundle schema mismatch: ") + e.what());
    }
}

ReplayResult replay_bundle(const CounterexampleBundle& bundle) {
    ReplayResult result;
    result.expected = bundle.violated;
    InstanceReport report = check_instance(bundle.instance);
    if (!report.mixed_monotone) {
        report.violations.push_back(
            {"mixed-monotone-construction", "operator failed the exhaustive check"});
    }
    result.got = std::move(report.violations);
    result.reproduced =
        std::any_of(result.got.begin(), result.got.end(),
                    [&](const ClauseViolation& v) { return v.clause == bundle.violated; });
    return result;
}

std::string oracle_report_to_json(const OracleReport& report) {
    JsonWriter w;
    w.begin_object();
    w.key("seed").value(static_cast<std::uint64_t>(report.options.seed));
    w.key("trials").value(report.trials_run);
    w.key("min_size").value(report.options.min_size);
    w.key("max_size").value(report.options.max_size);
    w.key("violations").value(static_cast<std::int64_t>(report.violations_total));
    w.key("qualifying_sandwich").value(static_cast<std::int64_t>(report.qualifying_sandwich));
    w.key("clauses_checked").begin_object();
    for (const auto& [clause, count] : report.clauses_checked) {
        w.key(clause).value(static_cast<std::int64_t>(count));
    }
    w.end_object();
    w.key("failures").begin_array();
    for (const auto& failure : report.failures) {
        w.begin_object();
        w.key("trial").value(failure.trial);
        w.key("trial_seed").value(static_cast<std::uint64_t>(failure.trial_seed));
        w.key("violated").value(failure.bundle.violated);
        w.end_object();
    }
    w.end_array();
    w.end_object();
    return w.str();
}

}  // namespace mixmono
