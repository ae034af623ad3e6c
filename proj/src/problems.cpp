#include "mixmono/problems.hpp"

#include <cmath>
#include <set>

#include <json.hpp>

#include "mixmono/errors.hpp"

namespace mixmono {

BivariateOperator<double> frac_example_operator() {
    auto universe = real_line_universe();
    return BivariateOperator<double>(
        std::move(universe),
        [](const double& x, const double&) {
            const double frac = x - std::floor(x);
            return x + (1.0 - frac) / 2.0;
        },
        "frac-example");
}

namespace {

void require_exponents(double alpha, double beta) {
    if (!(alpha > 0.0 && alpha < 1.0) || !(beta >= 0.0 && beta < 1.0)) {
        throw MalformedProblem("power exponents must satisfy 0 < alpha < 1, 0 <= beta < 1");
    }
}

ConeVector pow_combine(const ConeVector& x, const ConeVector& y, double alpha, double beta) {
    std::vector<double> out(x.dim());
    for (std::size_t i = 0; i < x.dim(); ++i) {
        out[i] = std::pow(x[i], alpha) + (beta > 0.0 ? std::pow(y[i], -beta) : 1.0);
    }
    return ConeVector(std::move(out));
}

}  // namespace

ConeProblem make_power_op(std::size_t dim, double alpha, double beta) {
    require_exponents(alpha, beta);
    if (dim < 1) throw MalformedProblem("power-op needs dim >= 1");
    auto universe = cone_universe(dim);
    BivariateOperator<ConeVector> op(
        universe,
        [alpha, beta](const ConeVector& x, const ConeVector& y) {
            return pow_combine(x, y, alpha, beta);
        },
        "power-op");
    const double exponent = std::max(alpha, beta);
    return ConeProblem{std::move(op), PhiSpec::power(exponent), ConeVector::constant(dim, 1.0)};
}

ConeProblem make_affine_kernel(std::size_t dim, double alpha, double beta, double base,
                               double mix) {
    require_exponents(alpha, beta);
    if (dim < 1) throw MalformedProblem("affine-kernel needs dim >= 1");
    if (!(base >= 0.0)) throw MalformedProblem("affine-kernel base must be nonnegative");
    if (!(mix >= 0.0 && mix <= 1.0)) throw MalformedProblem("affine-kernel mix must be in [0, 1]");
    auto universe = cone_universe(dim);
    BivariateOperator<ConeVector> op(
        universe,
        [alpha, beta, base, mix, dim](const ConeVector& x, const ConeVector& y) {
            const ConeVector terms = pow_combine(x, y, alpha, beta);
            double mean = 0.0;
            for (std::size_t j = 0; j < dim; ++j) mean += terms[j];
            mean /= static_cast<double>(dim);
            std::vector<double> out(dim);
            for (std::size_t i = 0; i < dim; ++i) {
                out[i] = base + (1.0 - mix) * terms[i] + mix * mean;
            }
            return ConeVector(std::move(out));
        },
        "affine-kernel");
    const double exponent = std::max(alpha, beta);
    return ConeProblem{std::move(op), PhiSpec::power(exponent), ConeVector::constant(dim, 1.0)};
}

ConeProblem make_hammerstein(std::size_t samples, double alpha, double beta, double cf,
                             double cg) {
    require_exponents(alpha, beta);
    if (samples < 1) throw MalformedProblem("hammerstein-grid needs samples >= 1");
    if (!(cf > 0.0) || !(cg >= 0.0)) {
        throw MalformedProblem("hammerstein-grid needs cf > 0 and cg >= 0");
    }
    auto universe = grid_function_cone(samples);

    // Midpoint grid over [0, 1] with a Gaussian kernel.
    std::vector<double> grid(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        grid[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(samples);
    }
    std::vector<double> kernel(samples * samples);
    const double w = 1.0 / static_cast<double>(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        for (std::size_t j = 0; j < samples; ++j) {
            const double d = grid[i] - grid[j];
            kernel[i * samples + j] = w * std::exp(-d * d);
        }
    }

    BivariateOperator<ConeVector> op(
        universe,
        [alpha, beta, cf, cg, samples, kernel](const ConeVector& x, const ConeVector& y) {
            std::vector<double> out(samples, 0.0);
            for (std::size_t j = 0; j < samples; ++j) {
                const double fx = cf * std::pow(x[j], alpha);
                const double gy = cg > 0.0 ? cg * std::pow(y[j], -beta) : 0.0;
                const double term = fx + gy;
                for (std::size_t i = 0; i < samples; ++i) {
                    out[i] += kernel[i * samples + j] * term;
                }
            }
            return ConeVector(std::move(out));
        },
        "hammerstein-grid");
    const double exponent = std::max(alpha, cg > 0.0 ? beta : 0.0);
    return ConeProblem{std::move(op), PhiSpec::power(exponent),
                       ConeVector::constant(samples, 1.0)};
}

std::vector<std::string> builtin_problem_names() {
    return {"frac-example", "power-op", "hammerstein-grid"};
}

LoadedProblem make_builtin(const std::string& name) {
    LoadedProblem p;
    p.name = name;
    if (name == "frac-example") {
        p.kind = LoadedProblem::Kind::RealLine;
        p.real_op = frac_example_operator();
        p.real_x0 = 0.0;
        p.real_y0 = 1.0;
        // The float sequence is binary-exact while 1 - 2^-n stays below the
        // mantissa width; past 53 transitions rounding kicks in.
        p.policy.max_steps = 52;
        p.policy.stagnation_window = std::nullopt;
        return p;
    }
    if (name == "power-op") {
        p.kind = LoadedProblem::Kind::Cone;
        p.cone = make_power_op(1);
        return p;
    }
    if (name == "hammerstein-grid") {
        p.kind = LoadedProblem::Kind::Cone;
        p.cone = make_hammerstein(8);
        return p;
    }
    throw MalformedProblem("unknown builtin problem '" + name + "'");
}

namespace {

void reject_unknown_fields(const nlohmann::json& j, const std::set<std::string>& allowed) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!allowed.contains(key)) {
            throw MalformedProblem("unknown field '" + key + "' in problem file");
        }
    }
}

ConeVector parse_vector(const nlohmann::json& j) {
    std::vector<double> coords;
    for (const auto& c : j) coords.push_back(c.get<double>());
    return ConeVector(std::move(coords));
}

double param(const nlohmann::json& parameters, const std::string& key, double fallback) {
    if (parameters.contains(key)) return parameters.at(key).get<double>();
    return fallback;
}

}  // namespace

LoadedProblem load_problem_json(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw MalformedProblem(std::string("problem file is not valid JSON: ") + e.what());
    }

    try {
        if (!j.contains("version") || j.at("version").get<int>() != 1) {
            throw MalformedProblem("problem file requires \"version\": 1");
        }
        const std::string kind = j.at("kind").get<std::string>();

        if (kind == "builtin") {
            reject_unknown_fields(j, {"version", "kind", "name", "steps", "tol", "start",
                                      "out_dir"});
            LoadedProblem p = make_builtin(j.at("name").get<std::string>());
            if (j.contains("steps")) {
                p.policy.max_steps = j.at("steps").get<std::size_t>();
                p.policy.stagnation_window = std::nullopt;
            }
            if (j.contains("tol")) p.solve_tol = j.at("tol").get<double>();
            if (j.contains("start")) {
                const auto& start = j.at("start");
                if (p.kind == LoadedProblem::Kind::RealLine) {
                    p.real_x0 = start.at(0).get<double>();
                    p.real_y0 = start.at(1).get<double>();
                } else if (p.kind == LoadedProblem::Kind::Cone) {
                    p.cone_start = {parse_vector(start.at(0)), parse_vector(start.at(1))};
                }
            }
            if (j.contains("out_dir")) p.out_dir = j.at("out_dir").get<std::string>();
            return p;
        }

        if (kind == "cone") {
            reject_unknown_fields(j, {"version", "kind", "expression", "parameters", "u", "tol",
                                      "steps", "start", "out_dir"});
            const std::string expr = j.at("expression").get<std::string>();
            const nlohmann::json parameters =
                j.contains("parameters") ? j.at("parameters") : nlohmann::json::object();
            const auto dim = static_cast<std::size_t>(param(parameters, "dim", 1));

            LoadedProblem p;
            p.kind = LoadedProblem::Kind::Cone;
            p.name = expr;
            std::size_t expected_dim = dim;
            if (expr == "power-law") {
                reject_unknown_fields(parameters, {"dim", "alpha", "beta"});
                p.cone = make_power_op(dim, param(parameters, "alpha", 0.5),
                                       param(parameters, "beta", 1.0 / 3.0));
            } else if (expr == "affine-kernel") {
                reject_unknown_fields(parameters, {"dim", "alpha", "beta", "base", "mix"});
                p.cone = make_affine_kernel(dim, param(parameters, "alpha", 0.5),
                                            param(parameters, "beta", 1.0 / 3.0),
                                            param(parameters, "base", 0.0),
                                            param(parameters, "mix", 0.0));
            } else if (expr == "hammerstein") {
                reject_unknown_fields(parameters, {"samples", "alpha", "beta", "cf", "cg"});
                expected_dim = static_cast<std::size_t>(param(parameters, "samples", 8));
                p.cone = make_hammerstein(expected_dim, param(parameters, "alpha", 0.5),
                                          param(parameters, "beta", 1.0 / 3.0),
                                          param(parameters, "cf", 1.0),
                                          param(parameters, "cg", 1.0));
            } else {
                throw MalformedProblem("unknown cone expression '" + expr + "'");
            }
            if (j.contains("u")) p.cone->u = parse_vector(j.at("u"));
            if (p.cone->u.dim() != expected_dim) {
                throw MalformedProblem("u has the wrong dimension");
            }
            if (j.contains("start")) {
                p.cone_start = {parse_vector(j.at("start").at(0)),
                                parse_vector(j.at("start").at(1))};
                if (p.cone_start->first.dim() != expected_dim ||
                    p.cone_start->second.dim() != expected_dim) {
                    throw MalformedProblem("start pair has the wrong dimension");
                }
            }
            if (j.contains("tol")) p.solve_tol = j.at("tol").get<double>();
            if (j.contains("steps")) {
                p.policy.max_steps = j.at("steps").get<std::size_t>();
                p.policy.stagnation_window = std::nullopt;
            }
            if (j.contains("out_dir")) p.out_dir = j.at("out_dir").get<std::string>();
            return p;
        }

        if (kind == "finite") {
            reject_unknown_fields(j,
                                  {"version", "kind", "poset", "operator", "start", "steps",
                                   "out_dir"});
            const int n = j.at("poset").at("size").get<int>();
            std::vector<std::uint8_t> leq;
            for (const auto& row : j.at("poset").at("leq")) {
                for (const auto& cell : row) leq.push_back(cell.get<int>() ? 1 : 0);
            }
            FinitePoset poset(n, std::move(leq));
            std::vector<int> table;
            for (const auto& row : j.at("operator")) {
                for (const auto& cell : row) table.push_back(cell.get<int>());
            }
            TableOperator op(n, std::move(table));
            const int x0 = j.at("start").at(0).get<int>();
            const int y0 = j.at("start").at(1).get<int>();
            if (x0 < 0 || x0 >= n || y0 < 0 || y0 >= n) {
                throw MalformedProblem("start pair out of range");
            }
            LoadedProblem p;
            p.kind = LoadedProblem::Kind::Finite;
            p.name = "finite";
            p.finite = Instance{std::move(poset), std::move(op), x0, y0};
            p.policy.max_steps = static_cast<std::size_t>(n) * n + 2;
            if (j.contains("steps")) p.policy.max_steps = j.at("steps").get<std::size_t>();
            if (j.contains("out_dir")) p.out_dir = j.at("out_dir").get<std::string>();
            return p;
        }

        throw MalformedProblem("unknown problem kind '" + kind + "'");
    } catch (const nlohmann::json::exception& e) {
        throw MalformedProblem(std::string("problem file schema mismatch: ") + e.what());
    }
}

}  // namespace mixmono
