#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mixmono/errors.hpp"
#include "mixmono/finite.hpp"
#include "mixmono/iteration.hpp"
#include "mixmono/oracle.hpp"
#include "mixmono/problems.hpp"
#include "mixmono/report_io.hpp"
#include "mixmono/solver.hpp"

namespace {

using namespace mixmono;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MalformedProblem("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << content;
}

struct CommonArgs {
    std::string builtin;
    std::string problem_file;
    std::optional<std::string> out_dir;
    std::optional<std::size_t> steps;
    std::optional<double> tol;

    std::filesystem::path resolve_out_dir(const LoadedProblem& p) const {
        if (out_dir) return *out_dir;
        if (p.out_dir) return *p.out_dir;
        return ".";
    }
};

LoadedProblem resolve_problem(const CommonArgs& args) {
    if (!args.builtin.empty() && !args.problem_file.empty()) {
        throw MalformedProblem("--builtin and --problem are mutually exclusive");
    }
    LoadedProblem p = !args.problem_file.empty() ? load_problem_json(read_file(args.problem_file))
                      : !args.builtin.empty()    ? make_builtin(args.builtin)
                                                 : make_builtin("frac-example");
    if (args.steps) {
        p.policy.max_steps = *args.steps;
        p.policy.stagnation_window = std::nullopt;
    }
    if (args.tol) p.solve_tol = *args.tol;
    return p;
}

template <class E>
void write_iterate_outputs(const std::filesystem::path& dir, const CoupledTrace<E>& trace,
                           const AttractionVerdict<E>& verdict, const Universe<E>& universe,
                           const std::function<std::vector<double>(const E&)>& coords) {
    std::filesystem::create_directories(dir);
    write_file(dir / "trace.csv", trace_to_csv(trace, universe, coords));
    write_file(dir / "verdict.json", verdict_to_json(verdict, trace, coords) + "\n");
}

int cmd_iterate(const CommonArgs& args) {
    LoadedProblem p = resolve_problem(args);
    const std::filesystem::path dir = args.resolve_out_dir(p);

    switch (p.kind) {
        case LoadedProblem::Kind::RealLine: {
            const auto& op = *p.real_op;
            auto trace = run(op, p.real_x0, p.real_y0, p.policy);
            auto verdict = classify(trace, op);
            write_iterate_outputs<double>(dir, trace, verdict, *op.universe(),
                                          [](const double& v) { return std::vector<double>{v}; });
            std::cout << "verdict: " << to_string(verdict.kind) << "\n";
            return 0;
        }
        case LoadedProblem::Kind::Cone: {
            const auto& cone = *p.cone;
            ConeVector x0 = cone.u;
            ConeVector y0 = cone.u;
            if (p.cone_start) {
                x0 = p.cone_start->first;
                y0 = p.cone_start->second;
            } else {
                const ConeVector targets[] = {cone.u};
                auto lu = construct_lu_pair(cone.op, cone.phi, cone.u, targets);
                x0 = lu.x0;
                y0 = lu.y0;
            }
            auto trace = run(cone.op, x0, y0, p.policy);
            auto verdict = classify(trace, cone.op);
            write_iterate_outputs<ConeVector>(
                dir, trace, verdict, *cone.op.universe(), [](const ConeVector& v) {
                    return std::vector<double>(v.coords().begin(), v.coords().end());
                });
            std::cout << "verdict: " << to_string(verdict.kind) << "\n";
            return 0;
        }
        case LoadedProblem::Kind::Finite: {
            const auto& inst = *p.finite;
            auto universe = poset_universe(inst.poset);
            auto op = make_operator(universe, inst.op, p.name);
            auto trace = run(op, inst.x0, inst.y0, p.policy);
            auto verdict = classify(trace, op);
            write_iterate_outputs<int>(dir, trace, verdict, *universe, [](const int& v) {
                return std::vector<double>{static_cast<double>(v)};
            });
            std::cout << "verdict: " << to_string(verdict.kind) << "\n";
            return 0;
        }
    }
    return 2;
}

int cmd_solve(const CommonArgs& args, std::optional<std::size_t> dim,
              std::optional<double> alpha, std::optional<double> beta,
              std::optional<double> phi_exponent, const std::vector<double>& u_coords) {
    LoadedProblem p = resolve_problem(args);
    if (p.kind != LoadedProblem::Kind::Cone) {
        throw MalformedProblem("solve requires a cone problem");
    }
    ConeProblem cone = std::move(*p.cone);
    if (dim || alpha || beta) {
        if (p.name != "power-op" && p.name != "power-law") {
            throw MalformedProblem("--dim/--alpha/--beta only apply to power-op");
        }
        cone = make_power_op(dim.value_or(cone.u.dim()), alpha.value_or(0.5),
                             beta.value_or(1.0 / 3.0));
    }
    if (!u_coords.empty()) cone.u = ConeVector(u_coords);
    if (phi_exponent) cone.phi = PhiSpec::power(*phi_exponent);

    SolveOptions options;
    options.tol = p.solve_tol;
    SolveReport report = solve(cone.op, cone.phi, cone.u, options);

    const std::filesystem::path dir = args.resolve_out_dir(p);
    std::filesystem::create_directories(dir);
    write_file(dir / "solve.json", solve_report_to_json(report) + "\n");
    std::cout << "x_star[0]: " << fmt_double(report.x_star[0])
              << "  residual: " << fmt_double(report.residual)
              << "  iterations: " << report.iterations << "\n";
    return 0;
}

int cmd_oracle(std::uint64_t seed, int trials, int min_size, int max_size, int max_bundles,
               const std::string& out_dir) {
    if (const char* env = std::getenv("MONOTONE_ITER_SEED")) {
        seed = std::strtoull(env, nullptr, 10);
    }
    OracleOptions options;
    options.seed = seed;
    options.trials = trials;
    options.min_size = min_size;
    options.max_size = max_size;
    options.max_bundles = max_bundles;
    if (trials < 1 || min_size < 2 || max_size > 64 || min_size > max_size) {
        throw MalformedProblem("oracle needs trials >= 1 and 2 <= min-size <= max-size <= 64");
    }

    OracleReport report = verify_theorem_suite(options);

    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    write_file(dir / "oracle-report.json", oracle_report_to_json(report) + "\n");
    for (std::size_t k = 0; k < report.failures.size(); ++k) {
        write_file(dir / ("counterexample-" + std::to_string(k) + ".json"),
                   bundle_to_json(report.failures[k].bundle) + "\n");
    }
    std::cout << "trials: " << report.trials_run << "  violations: " << report.violations_total
              << "  sandwich instances: " << report.qualifying_sandwich << "\n";
    return report.violations_total == 0 ? 0 : 3;
}

int cmd_replay(const std::string& bundle_file) {
    const CounterexampleBundle bundle = load_bundle(read_file(bundle_file));
    const ReplayResult result = replay_bundle(bundle);
    std::cout << "expected clause: " << result.expected << "\n";
    for (const auto& violation : result.got) {
        std::cout << "violated: " << violation.clause << " (" << violation.detail << ")\n";
    }
    if (!result.reproduced) {
        std::cerr << "replay did not reproduce the recorded violation\n";
        return 2;
    }
    std::cout << "reproduced\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"monotone coupled-iteration toolkit"};
    app.require_subcommand(1);

    CommonArgs iterate_args;
    auto* iterate_cmd = app.add_subcommand("iterate", "run the coupled iteration, write trace.csv and verdict.json");
    iterate_cmd->add_option("--builtin", iterate_args.builtin, "builtin problem name");
    iterate_cmd->add_option("--problem", iterate_args.problem_file, "problem JSON file");
    iterate_cmd->add_option("--steps", iterate_args.steps, "explicit horizon (disables stagnation stop)");
    iterate_cmd->add_option("--out-dir", iterate_args.out_dir, "output directory");

    CommonArgs solve_args;
    std::optional<std::size_t> solve_dim;
    std::optional<double> solve_alpha, solve_beta, solve_phi_exponent;
    std::vector<double> solve_u;
    auto* solve_cmd = app.add_subcommand("solve", "run the cone solver, write solve.json");
    solve_cmd->add_option("--builtin", solve_args.builtin, "builtin problem name");
    solve_cmd->add_option("--problem", solve_args.problem_file, "problem JSON file");
    solve_cmd->add_option("--tol", solve_args.tol, "stop tolerance");
    solve_cmd->add_option("--dim", solve_dim, "power-op dimension");
    solve_cmd->add_option("--alpha", solve_alpha, "power-op alpha");
    solve_cmd->add_option("--beta", solve_beta, "power-op beta");
    solve_cmd->add_option("--phi-exponent", solve_phi_exponent, "override phi = lambda^e");
    solve_cmd->add_option("--u", solve_u, "base element coordinates")->delimiter(',');
    solve_cmd->add_option("--out-dir", solve_args.out_dir, "output directory");

    std::uint64_t oracle_seed = 42;
    int oracle_trials = 1000;
    int oracle_min_size = 2;
    int oracle_max_size = 8;
    int oracle_max_bundles = 16;
    std::string oracle_out_dir = ".";
    auto* oracle_cmd = app.add_subcommand("oracle", "run the randomized verification suite");
    oracle_cmd->add_option("--seed", oracle_seed, "master seed (MONOTONE_ITER_SEED overrides)");
    oracle_cmd->add_option("--trials", oracle_trials, "number of trials");
    oracle_cmd->add_option("--min-size", oracle_min_size, "smallest lattice size");
    oracle_cmd->add_option("--max-size", oracle_max_size, "largest lattice size");
    oracle_cmd->add_option("--max-bundles", oracle_max_bundles, "counterexample bundle cap");
    oracle_cmd->add_option("--out-dir", oracle_out_dir, "output directory");

    std::string replay_bundle_file;
    auto* replay_cmd = app.add_subcommand("replay", "re-run a counterexample bundle");
    replay_cmd->add_option("--bundle", replay_bundle_file, "bundle JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (iterate_cmd->parsed()) return cmd_iterate(iterate_args);
        if (solve_cmd->parsed()) {
            return cmd_solve(solve_args, solve_dim, solve_alpha, solve_beta, solve_phi_exponent,
                             solve_u);
        }
        if (oracle_cmd->parsed()) {
            return cmd_oracle(oracle_seed, oracle_trials, oracle_min_size, oracle_max_size,
                              oracle_max_bundles, oracle_out_dir);
        }
        if (replay_cmd->parsed()) return cmd_replay(replay_bundle_file);
    } catch (const MalformedProblem& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ShapeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
