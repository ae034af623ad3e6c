#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mixmono/finite.hpp"

namespace mixmono {

/// One verification instance: a finite poset, a table operator and an
/// ordered start pair.
struct Instance {
    FinitePoset poset;
    TableOperator op;
    int x0 = 0;
    int y0 = 0;
};

struct ClauseViolation {
    std::string clause;
    std::string detail;
};

/// Per-instance verification outcome. clauses_checked counts how many
/// times each clause's hypotheses applied on this instance; violations are
/// data, not exceptions, so that counterexamples stay replayable.
struct InstanceReport {
    bool mixed_monotone = true;
    std::vector<ClauseViolation> violations;
    std::map<std::string, long> clauses_checked;
    /// True when a confirmed attractive fixed point was found, i.e. the
    /// instance qualified for the exhaustive sandwich check.
    bool attractive_fixed_point = false;
    std::vector<std::pair<int, int>> trace;
};

/// Runs the coupled iteration for the instance and verifies every clause
/// whose hypotheses hold: order preservation of the pair, box-image
/// invariance, containment of coupled fixed points, monotonicity from a
/// lower-upper start, emptiness soundness, the attraction-point
/// properties, the interval-attraction equivalences with uniqueness, the
/// three late-start propagation results, engine/oracle classification
/// consistency, and exhaustive sandwich bracketing around confirmed
/// attractive fixed points.
InstanceReport check_instance(const Instance& instance);

struct CounterexampleBundle {
    Instance instance;
    std::string violated;
    std::vector<std::pair<int, int>> trace;
};

std::string bundle_to_json(const CounterexampleBundle& bundle);
CounterexampleBundle load_bundle(const std::string& json_text);

struct ReplayResult {
    bool reproduced = false;
    std::string expected;
    std::vector<ClauseViolation> got;
};

/// Re-runs all clause checks for a bundle's instance; reproduction means
/// the recorded clause id is violated again.
ReplayResult replay_bundle(const CounterexampleBundle& bundle);

struct OracleOptions {
    std::uint64_t seed = 42;
    int trials = 1000;
    int min_size = 2;
    int max_size = 8;
    int max_bundles = 16;
};

struct OracleReport {
    OracleOptions options;
    int trials_run = 0;
    long violations_total = 0;
    std::map<std::string, long> clauses_checked;
    /// Instances whose confirmed attractive fixed point triggered the
    /// exhaustive sandwich check.
    long qualifying_sandwich = 0;
    struct Failure {
        int trial = 0;
        std::uint64_t trial_seed = 0;
        CounterexampleBundle bundle;
    };
    std::vector<Failure> failures;
};

/// Randomized verification suite: per trial, a random lattice of the
/// configured size range, a mixed-monotone-by-construction table operator
/// and a random ordered start pair; every applicable clause is checked.
/// Identical options reproduce identical reports byte-for-byte.
OracleReport verify_theorem_suite(const OracleOptions& options);

std::string oracle_report_to_json(const OracleReport& report);

}  // namespace mixmono
