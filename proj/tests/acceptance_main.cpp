// Acceptance suite: runs each top-level criterion at its stated tolerance
// and prints one pass/fail line per criterion. Exits nonzero when any
// criterion fails. The CLI binary under test is passed via --cli.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mixmono/cone.hpp"
#include "mixmono/finite.hpp"
#include "mixmono/iteration.hpp"
#include "mixmono/oracle.hpp"
#include "mixmono/problems.hpp"
#include "mixmono/solver.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mixmono;

namespace {

std::string g_cli;
std::vector<SolveReport> g_solves;  // audited again by criterion 6

struct Failure {
    std::string message;
};

void require(bool condition, const std::string& message) {
    if (!condition) throw Failure{message};
}

int run_cli(const std::string& args) {
    const std::string cmd = g_cli + " " + args + " > /dev/null 2>&1";
    return WEXITSTATUS(std::system(cmd.c_str()));
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    require(in.good(), "missing output file " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& tag) {
    const fs::path dir =
        fs::temp_directory_path() / ("mixmono-acceptance-" + tag + "-" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

double bisect_power_oracle() {
    // Independent scalar oracle, computed before the solver runs:
    // bisection on t = sqrt(t) + t^(-1/3) over [2, 3].
    auto residual = [](double t) { return std::sqrt(t) + std::pow(t, -1.0 / 3.0) - t; };
    double lo = 2.0, hi = 3.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (residual(mid) > 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// ---- criterion 1: running-example reproduction through the CLI ----------

void criterion_frac_example() {
    const auto dir = fresh_dir("frac");
    const auto start = std::chrono::steady_clock::now();
    require(run_cli("iterate --builtin frac-example --out-dir " + dir.string()) == 0,
            "iterate exited nonzero");
    const auto elapsed = std::chrono::steady_clock::now() - start;
    require(elapsed < std::chrono::seconds(1), "iterate took longer than 1s");

    // Trace must be binary-exact for n <= 50.
    std::istringstream csv(slurp(dir / "trace.csv"));
    std::string line;
    std::getline(csv, line);
    require(line == "n,x0,y0,gap", "unexpected CSV header: " + line);
    int rows = 0;
    while (std::getline(csv, line)) {
        std::istringstream cells(line);
        std::string cell;
        std::getline(cells, cell, ',');
        const int n = std::stoi(cell);
        std::getline(cells, cell, ',');
        const double x = std::strtod(cell.c_str(), nullptr);
        std::getline(cells, cell, ',');
        const double y = std::strtod(cell.c_str(), nullptr);
        if (n <= 50) {
            require(x == 1.0 - std::ldexp(1.0, -n),
                    "x_" + std::to_string(n) + " is not binary-exact");
            require(y == 2.0 - std::ldexp(1.0, -n),
                    "y_" + std::to_string(n) + " is not binary-exact");
            ++rows;
        }
    }
    require(rows == 51, "trace does not cover n <= 50");

    const json verdict = json::parse(slurp(dir / "verdict.json"));
    require(verdict.at("verdict") == "OrderAttractive", "verdict is not OrderAttractive");
    require(verdict.at("x_star").at(0).get<double>() == 1.0, "x* != 1.0");
    require(verdict.at("fixed_point_confirmed") == false, "fixed point wrongly confirmed");
    require(verdict.at("fixed_point_image").at(0).get<double>() == 1.5, "A(1,1) != 1.5");

    auto frac = frac_example_operator();
    require(frac(1.0, 1.0) == 1.5, "direct evaluation A(1,1) != 1.5");
}

// ---- criterion 2: randomized oracle suite --------------------------------

void criterion_oracle_suite() {
    OracleOptions options;
    options.seed = 42;
    options.trials = 1000;
    options.min_size = 2;
    options.max_size = 8;
    const auto start = std::chrono::steady_clock::now();
    const auto report = verify_theorem_suite(options);
    const auto elapsed = std::chrono::steady_clock::now() - start;
    require(report.trials_run == 1000, "suite did not run 1000 trials");
    require(report.violations_total == 0,
            "suite reported " + std::to_string(report.violations_total) + " violations");
    require(elapsed < std::chrono::seconds(60), "suite took longer than 60s");
}

// ---- criterion 3: operator-algebra laws -----------------------------------

void criterion_operator_laws() {
    long samples = 0;

    // Finite lattices: random mixed monotone triples.
    DetRng rng(1234);
    for (int instance = 0; instance < 60; ++instance) {
        const int size = 2 + static_cast<int>(rng.below(7));
        const auto poset = generate_random_lattice(rng.next(), size);
        const auto tables = lattice_tables(poset);
        auto u = poset_universe(poset);
        auto a = make_operator(u, generate_random_mixed_monotone(rng.next(), poset, tables), "A");
        auto b = make_operator(u, generate_random_mixed_monotone(rng.next(), poset, tables), "B");
        auto c = make_operator(u, generate_random_mixed_monotone(rng.next(), poset, tables), "C");
        auto p = projection(u);
        auto left = s_compose(s_compose(c, b), a);
        auto right = s_compose(c, s_compose(b, a));
        auto through_p = s_compose(p, a);
        auto from_p = s_compose(a, p);

        for (int i = 0; i < 40; ++i) {
            const int x = static_cast<int>(rng.below(size));
            const int y = static_cast<int>(rng.below(size));
            require(left(x, y) == right(x, y), "finite associativity failed");
            require(through_p(x, y) == a(x, y) && from_p(x, y) == a(x, y),
                    "finite identity failed");
            const auto m = rng.below(4);
            const auto n = rng.below(4);
            require(power_apply(a, m + n, x, y) ==
                        power_apply(a, m, power_apply(a, n, x, y), power_apply(a, n, y, x)),
                    "finite power semigroup failed");
            samples += 3;
        }
    }

    // Numeric universe: three power operators over one shared cone.
    auto cone_u = cone_universe(2);
    auto pow_op = [&](double alpha, double beta, const std::string& label) {
        return BivariateOperator<ConeVector>(
            cone_u,
            [alpha, beta](const ConeVector& x, const ConeVector& y) {
                std::vector<double> out(x.dim());
                for (std::size_t i = 0; i < x.dim(); ++i) {
                    out[i] = std::pow(x[i], alpha) + std::pow(y[i], -beta);
                }
                return ConeVector(std::move(out));
            },
            label);
    };
    auto a = pow_op(0.5, 1.0 / 3.0, "A");
    auto b = pow_op(0.3, 0.2, "B");
    auto c = pow_op(0.7, 0.1, "C");
    auto p = projection(cone_u);
    auto left = s_compose(s_compose(c, b), a);
    auto right = s_compose(c, s_compose(b, a));
    auto through_p = s_compose(p, a);
    auto from_p = s_compose(a, p);

    DetRng crng(77);
    auto sample = [&]() {
        std::vector<double> v(2);
        for (auto& e : v) e = crng.range(0.25, 4.0);
        return ConeVector(std::move(v));
    };
    const auto& u = *cone_u;
    for (int i = 0; i < 1000; ++i) {
        const auto x = sample();
        const auto y = sample();
        require(u.eq(left(x, y), right(x, y)), "numeric associativity failed");
        require(u.eq(through_p(x, y), a(x, y)) && u.eq(from_p(x, y), a(x, y)),
                "numeric identity failed");
        const auto m = crng.below(4);
        const auto n = crng.below(4);
        require(u.eq(power_apply(a, m + n, x, y),
                     power_apply(a, m, power_apply(a, n, x, y), power_apply(a, n, y, x))),
                "numeric power semigroup failed");
        samples += 3;
    }

    require(samples >= 10000,
            "only " + std::to_string(samples) + " samples were checked");

    // Composition preserves exhaustive mixed monotonicity.
    DetRng prng(4321);
    for (int instance = 0; instance < 100; ++instance) {
        const int size = 2 + static_cast<int>(prng.below(7));
        const auto poset = generate_random_lattice(prng.next(), size);
        const auto tables = lattice_tables(poset);
        auto u2 = poset_universe(poset);
        auto op_a =
            make_operator(u2, generate_random_mixed_monotone(prng.next(), poset, tables), "A");
        auto op_b =
            make_operator(u2, generate_random_mixed_monotone(prng.next(), poset, tables), "B");
        require(check_mixed_monotone(op_a).pass && check_mixed_monotone(op_b).pass,
                "generator produced a non mixed monotone operator");
        require(check_mixed_monotone(s_compose(op_b, op_a)).pass,
                "composition lost mixed monotonicity");
    }
}

// ---- criterion 4: cone solver end-to-end ----------------------------------

void criterion_cone_solver() {
    const auto dir = fresh_dir("solve");
    const auto start = std::chrono::steady_clock::now();
    require(run_cli("solve --builtin power-op --tol 1e-10 --out-dir " + dir.string()) == 0,
            "solve exited nonzero");
    const auto elapsed = std::chrono::steady_clock::now() - start;
    require(elapsed < std::chrono::seconds(1), "solve took longer than 1s");

    const json report = json::parse(slurp(dir / "solve.json"));
    require(report.at("lambda0").get<double>() == 0.5, "lambda0 != 0.5");
    require(report.at("k0").get<int>() == 2, "k0 != 2");
    require(report.at("residual").get<double>() < 1e-9, "residual >= 1e-9");

    const double oracle = bisect_power_oracle();
    require(std::fabs(oracle - 2.2668544161867273) < 1e-12,
            "bisection oracle moved from its frozen value");
    require(std::fabs(report.at("x_star").at(0).get<double>() - oracle) < 1e-8,
            "x* does not match the bisection oracle");

    // Library route: the synthesized pair is a coupled lower-upper fixed
    // point and the in-process solve agrees with the CLI.
    const auto power = make_power_op(1);
    const ConeVector targets[] = {power.u};
    const auto lu = construct_lu_pair(power.op, power.phi, power.u, targets);
    require(lu.lambda0 == 0.5 && lu.k0 == 2, "library construction certificates changed");
    require(is_coupled_lu_fixed_point(power.op, lu.x0, lu.y0),
            "synthesized pair fails the lower-upper test");

    SolveOptions options;
    options.tol = 1e-10;
    const auto lib_report = solve(power.op, power.phi, power.u, options);
    require(std::fabs(lib_report.x_star[0] - oracle) < 1e-8, "library solve disagrees");
    require(lib_report.residual < 1e-9, "library residual >= 1e-9");
    require(part_closure_check(power.op, power.u).pass, "sampled part closure failed");
    g_solves.push_back(lib_report);
}

// ---- criterion 5: uniqueness / multi-start --------------------------------

void criterion_uniqueness() {
    const auto power = make_power_op(3);
    DetRng rng(61);
    std::vector<ConeVector> bases;
    for (int i = 0; i < 10; ++i) {
        std::vector<double> coords(3);
        for (auto& c : coords) c = rng.range(0.2, 5.0);
        bases.emplace_back(std::move(coords));
    }
    SolveOptions options;
    options.tol = 1e-10;
    const auto reports = multi_start_solve(power.op, power.phi, bases, options);
    for (const auto& r : reports) {
        require(max_gap(r.x_star, reports.front().x_star) <= 1e-8,
                "solves from distinct bases disagree beyond 1e-8");
        g_solves.push_back(r);
    }

    const auto& first = reports.front();
    const auto search =
        coupled_fixed_point_search(power.op, first.x0, first.y0, 200, 71, 1e-12, 2000);
    require(search.converged > 0, "multi-start search never converged");
    for (const auto& [p, q] : search.found) {
        require(max_gap(p, first.x_star) <= 1e-8 && max_gap(q, first.x_star) <= 1e-8,
                "a coupled fixed point distinct from the diagonal was found");
    }
}

// ---- criterion 6: certificate monotonicity --------------------------------

void criterion_certificates() {
    require(!g_solves.empty(), "no solve traces were collected");
    for (const auto& r : g_solves) {
        for (std::size_t n = 0; n + 1 < r.lambda_trace.size(); ++n) {
            require(r.lambda_trace[n] < r.lambda_trace[n + 1], "lambda trace not increasing");
        }
        require(1.0 - r.lambda_final < r.tol, "final lambda does not certify the tolerance");
        require(r.lambda_trace.size() == r.steps.size(), "trace sizes disagree");
        for (std::size_t n = 0; n < r.steps.size(); ++n) {
            const auto& [x, y] = r.steps[n];
            require(cone_leq(y.scaled(r.lambda_trace[n]), x, 1e-9 * (1.0 + y.max_norm())),
                    "per-step certificate x_n >= lambda_n y_n fails");
        }
    }

    // An injected phi violating the comparison inequality must trip the
    // certificate, in-process and through the CLI.
    const auto power = make_power_op(1);
    bool tripped = false;
    try {
        solve(power.op, PhiSpec::power(0.05), power.u, {});
    } catch (const CertificateViolation&) {
        tripped = true;
    }
    require(tripped, "overstated phi did not trigger CertificateViolation");
    require(run_cli("solve --builtin power-op --phi-exponent 0.05 --out-dir " +
                    fresh_dir("badphi").string()) == 2,
            "CLI did not exit with the runtime code");
}

// ---- criterion 7: self-bounded checks --------------------------------------

void criterion_self_bounded() {
    require(!g_solves.empty(), "no solve traces were collected");
    const double mus[] = {1.01, 1.1, 1.5, 2.0, 10.0};
    const double lambdas[] = {0.05, 0.25, 0.5, 0.75, 0.95};
    for (const auto& r : g_solves) {
        std::vector<ConeVector> xs;
        for (const auto& [x, y] : r.steps) xs.push_back(x);
        require(self_bounded_check(xs, BoundDirection::Upper, mus).pass,
                "solver lower iterates are not upper self-bounded");
    }

    std::vector<ConeVector> decreasing, increasing;
    for (int n = 0; n < 8; ++n) {
        decreasing.push_back(ConeVector::constant(3, 16.0 / (n + 1)));
        increasing.push_back(ConeVector::constant(3, 1.0 + 0.5 * n));
    }
    const auto upper = self_bounded_check(decreasing, BoundDirection::Upper, mus);
    require(upper.pass, "nonincreasing sequence failed the upper check");
    for (const auto& e : upper.entries) {
        require(e.witness_k == std::optional<std::size_t>(0), "upper witness is not k=0");
    }
    const auto lower = self_bounded_check(increasing, BoundDirection::Lower, lambdas);
    require(lower.pass, "nondecreasing sequence failed the lower check");
    for (const auto& e : lower.entries) {
        require(e.witness_k == std::optional<std::size_t>(0), "lower witness is not k=0");
    }
}

// ---- criterion 8: exhaustive sandwich property ------------------------------

void criterion_sandwich() {
    OracleOptions options;
    options.seed = 42;
    options.min_size = 2;
    options.max_size = 8;
    long qualifying = 0;
    for (int trials = 1000; trials <= 16000; trials *= 2) {
        options.trials = trials;
        const auto report = verify_theorem_suite(options);
        qualifying = report.qualifying_sandwich;
        if (qualifying >= 1000) {
            require(report.violations_total == 0,
                    "suite reported violations while accumulating sandwich instances");
            return;
        }
    }
    require(false, "could not accumulate 1000 instances with a confirmed attractive fixed "
                   "point (got " + std::to_string(qualifying) + ")");
}

}  // namespace

int main(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--cli") g_cli = argv[i + 1];
    }
    if (g_cli.empty()) {
        std::cerr << "usage: acceptance --cli <path-to-mixmono>\n";
        return 2;
    }

    struct Criterion {
        std::string name;
        std::function<void()> body;
    };
    const std::vector<Criterion> criteria = {
        {"running example reproduced binary-exactly through the CLI", criterion_frac_example},
        {"1000-trial randomized suite reports zero violations", criterion_oracle_suite},
        {"operator-algebra laws hold on 10000+ samples", criterion_operator_laws},
        {"cone solver matches the bisection oracle end-to-end", criterion_cone_solver},
        {"multi-start solves agree and no distinct coupled fixed point exists",
         criterion_uniqueness},
        {"certificate sequence is monotone, tight, and violation-sensitive",
         criterion_certificates},
        {"self-bounded checks pass for solver traces and synthetic sequences",
         criterion_self_bounded},
        {"sandwich bracketing holds exhaustively on 1000 attractive instances",
         criterion_sandwich},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& criterion = criteria[i];
        try {
            criterion.body();
            std::cout << "[PASS] " << (i + 1) << ". " << criterion.name << "\n";
        } catch (const Failure& f) {
            std::cout << "[FAIL] " << (i + 1) << ". " << criterion.name << ": " << f.message
                      << "\n";
            ++failures;
        } catch (const std::exception& e) {
            std::cout << "[FAIL] " << (i + 1) << ". " << criterion.name
                      << ": unexpected error: " << e.what() << "\n";
            ++failures;
        }
    }
    if (failures != 0) {
        std::cout << failures << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all criteria passed\n";
    return 0;
}
