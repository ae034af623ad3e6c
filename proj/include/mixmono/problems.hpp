#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mixmono/cone.hpp"
#include "mixmono/iteration.hpp"
#include "mixmono/oracle.hpp"
#include "mixmono/phi.hpp"
#include "mixmono/solver.hpp"

namespace mixmono {

/// A cone problem ready for iterate/solve: the operator, its comparison
/// function, and the base element of the part.
struct ConeProblem {
    BivariateOperator<ConeVector> op;
    PhiSpec phi;
    ConeVector u;
};

/// The running example on the real line: A(x, y) = x + (1 - {x}) / 2 with
/// {x} the fractional part. Ignores y; mixed monotone; no fixed points.
/// From (0, 1) the iterates are the binary-exact sequences 1 - 2^-n and
/// 2 - 2^-n.
BivariateOperator<double> frac_example_operator();

/// Componentwise power-law operator A(x, y)_i = x_i^alpha + y_i^-beta on
/// the positive part of R^dim, phi(lambda) = lambda^max(alpha, beta).
ConeProblem make_power_op(std::size_t dim, double alpha = 0.5, double beta = 1.0 / 3.0);

/// Affine kernel operator A(x,y)_i = base + sum_j M_ij (x_j^alpha + y_j^-beta)
/// where M mixes the identity with the averaging kernel: M = (1-mix)I +
/// (mix/dim) * ones.
ConeProblem make_affine_kernel(std::size_t dim, double alpha, double beta, double base,
                               double mix);

/// Discretized Hammerstein operator on the grid-function cone:
/// A(x, y)_i = sum_j w_j K(t_i, s_j) (cf * x_j^alpha + cg * y_j^-beta) with
/// a Gaussian kernel on a midpoint grid over [0, 1].
ConeProblem make_hammerstein(std::size_t samples, double alpha = 0.5, double beta = 1.0 / 3.0,
                             double cf = 1.0, double cg = 1.0);

std::vector<std::string> builtin_problem_names();

/// Problem file contents (JSON, "version": 1; unknown fields rejected).
struct LoadedProblem {
    enum class Kind { RealLine, Cone, Finite };
    Kind kind = Kind::RealLine;
    std::string name;

    // RealLine
    std::optional<BivariateOperator<double>> real_op;
    double real_x0 = 0.0;
    double real_y0 = 1.0;

    // Cone
    std::optional<ConeProblem> cone;
    std::optional<std::pair<ConeVector, ConeVector>> cone_start;

    // Finite
    std::optional<Instance> finite;

    StopPolicy policy;
    double solve_tol = 1e-10;
    std::optional<std::string> out_dir;
};

/// Instantiates a builtin by name (frac-example, power-op,
/// hammerstein-grid). Throws MalformedProblem for unknown names.
LoadedProblem make_builtin(const std::string& name);

/// Parses and validates a problem file. Unknown fields and unknown
/// expression ids are rejected, and parameters must lie in their declared
/// ranges.
LoadedProblem load_problem_json(const std::string& json_text);

}  // namespace mixmono
