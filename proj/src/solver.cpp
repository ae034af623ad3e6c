#include "mixmono/solver.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

#include "mixmono/errors.hpp"
#include "mixmono/iteration.hpp"
#include "mixmono/rng.hpp"

namespace mixmono {

namespace {

constexpr double kLambdaClamp = 1e-6;     // keeps lambda0 strictly inside (0,1)
constexpr double kScaleFloor = 1e-300;    // refuse lambda0^n0 below this
constexpr double kCeilTol = 1e-9;         // absorbs rounding at integer boundaries

int least_power_at_least(double ratio_log, double target_log) {
    // least n with n * ratio_log >= target_log, both logs positive
    const double raw = target_log / ratio_log;
    return std::max(0, static_cast<int>(std::ceil(raw - kCeilTol)));
}

/// Largest lambda with lambda * y <= x (one-sided linking constant),
/// clamped to [0, 1]. Requires matching supports.
double one_sided_lambda(const ConeVector& x, const ConeVector& y) {
    double lambda = 1.0;
    for (std::size_t i = 0; i < x.dim(); ++i) {
        if (y[i] > 0.0) lambda = std::min(lambda, x[i] / y[i]);
    }
    return lambda;
}

}  // namespace

LuConstruction construct_lu_pair(const BivariateOperator<ConeVector>& a, const PhiSpec& phi,
                                 const ConeVector& u, std::span<const ConeVector> targets) {
    const ConeVector image = a(u, u);
    const auto link = linked(u, image);
    if (!link) {
        throw NotLinked("A(u, u) is not in the part of u; theorem hypotheses fail");
    }

    const double lambda0 = std::min(link->lambda_max, 1.0 - kLambdaClamp);
    const double ratio_log = std::log(phi(lambda0) / lambda0);
    if (!(ratio_log > 0.0)) {
        throw Error("phi(lambda0) must exceed lambda0");
    }
    const int k0 = least_power_at_least(ratio_log, -std::log(lambda0));

    double target_lambda = 1.0;
    for (const ConeVector& t : targets) {
        const auto tl = linked(u, t);
        if (!tl) throw NotLinked("target is not in the part of u");
        target_lambda = std::min(target_lambda, tl->lambda_max);
    }
    int n0 = std::max(k0, least_power_at_least(-std::log(lambda0), -std::log(target_lambda)));

    auto box_of = [&](int n) {
        const double down = std::pow(lambda0, n);
        const double up = std::pow(lambda0, -n);
        if (down < kScaleFloor || up > 1.0 / kScaleFloor) {
            throw Underflow("lambda0^n0 leaves the double range (n0 = " + std::to_string(n) +
                            "); refusing to degrade");
        }
        return std::pair<ConeVector, ConeVector>{u.scaled(down), u.scaled(up)};
    };

    // Rounding at the log-domain boundary can leave a target marginally
    // outside; widen until containment is verified directly.
    auto [x0, y0] = box_of(n0);
    const double eps = a.universe()->eq_tol;
    auto contains_all = [&](const ConeVector& lo, const ConeVector& hi) {
        for (const ConeVector& t : targets) {
            if (!(cone_leq(lo, t, eps) && cone_leq(t, hi, eps))) return false;
        }
        return true;
    };
    while (!contains_all(x0, y0)) {
        ++n0;
        std::tie(x0, y0) = box_of(n0);
    }

    if (!is_coupled_lu_fixed_point(a, x0, y0)) {
        throw CertificateViolation(
            "synthesized pair is not a coupled lower-upper fixed point; the phi "
            "condition does not hold for this operator");
    }
    return {std::move(x0), std::move(y0), lambda0, k0, n0};
}

SolveReport solve(const BivariateOperator<ConeVector>& a, const PhiSpec& phi,
                  const ConeVector& u, const SolveOptions& options) {
    const auto& universe = *a.universe();
    const ConeVector targets[] = {u};
    LuConstruction lu = construct_lu_pair(a, phi, u, targets);

    const auto start_link = linked(lu.x0, lu.y0);
    double lambda = start_link ? start_link->lambda_max : 0.0;
    if (!(lambda > 0.0)) throw NotLinked("start pair is not linked");

    SolveReport report{.x_star = lu.x0,
                       .residual = 0.0,
                       .lambda_trace = {lambda},
                       .x0 = lu.x0,
                       .y0 = lu.y0,
                       .iterations = 0,
                       .lambda0 = lu.lambda0,
                       .k0 = lu.k0,
                       .n0 = lu.n0,
                       .lambda_final = lambda,
                       .final_gap = 0.0,
                       .tol = options.tol,
                       .steps = {}};

    ConeVector x = lu.x0;
    ConeVector y = lu.y0;
    report.steps.emplace_back(x, y);

    auto relative_gap = [](const ConeVector& lo, const ConeVector& hi) {
        double r = 0.0;
        for (std::size_t i = 0; i < lo.dim(); ++i) {
            if (lo[i] > 0.0) {
                r = std::max(r, (hi[i] - lo[i]) / lo[i]);
            } else if (hi[i] > 0.0) {
                r = std::numeric_limits<double>::infinity();
            }
        }
        return r;
    };

    auto certify = [&](const ConeVector& lo, const ConeVector& hi, double lam,
                       std::size_t step) {
        const double slack = universe.eq_tol * (1.0 + hi.max_norm());
        if (!cone_leq(hi.scaled(lam), lo, slack)) {
            throw CertificateViolation(
                "certificate x_n >= lambda_n * y_n failed at step " + std::to_string(step) +
                "; the phi condition does not hold for operator '" + a.label() + "'");
        }
    };
    certify(x, y, lambda, 0);

    bool done = 1.0 - lambda < options.tol || relative_gap(x, y) < options.tol ||
                universe.eq(x, y);
    while (!done) {
        if (report.iterations >= options.max_steps) {
            throw NonConvergence("solve hit max_steps = " + std::to_string(options.max_steps));
        }
        ConeVector xn = a(x, y);
        ConeVector yn = a(y, x);
        if (!universe.leq(xn, yn)) {
            throw MonotonicityViolation("solve produced x not below y at step " +
                                        std::to_string(report.iterations + 1));
        }
        lambda = std::min(phi(lambda), 1.0);
        ++report.iterations;
        report.lambda_trace.push_back(lambda);
        certify(xn, yn, lambda, report.iterations);
        x = std::move(xn);
        y = std::move(yn);
        report.steps.emplace_back(x, y);
        done = 1.0 - lambda < options.tol || relative_gap(x, y) < options.tol ||
               universe.eq(x, y);
    }

    report.x_star = x;
    report.final_gap = max_gap(x, y);
    // The phi orbit drives the iteration; the reported final certificate is
    // the measured linking constant of the last pair, which is at least as
    // tight and is re-verified directly.
    const double measured = std::min(1.0, one_sided_lambda(x, y));
    report.lambda_final = std::max(lambda, measured);
    certify(x, y, report.lambda_final, report.iterations);

    const ConeVector image = a(x, x);
    report.residual = max_gap(image, x);
    return report;
}

PartClosureReport part_closure_check(const BivariateOperator<ConeVector>& a,
                                     const ConeVector& u, std::size_t samples,
                                     std::uint64_t seed) {
    if (u.is_zero()) throw ZeroElement("part_closure_check requires a nonzero base");
    PartClosureReport report;
    DetRng rng(seed);
    const std::size_t dim = u.dim();

    // Positive coordinate-wise rescalings of u stay inside its part.
    auto sample = [&]() {
        std::vector<double> c(dim);
        for (std::size_t i = 0; i < dim; ++i) c[i] = u[i] * std::exp(rng.range(-2.0, 2.0));
        return ConeVector(std::move(c));
    };

    for (std::size_t s = 0; s < samples; ++s) {
        ConeVector x = sample();
        ConeVector y = sample();
        ++report.checked;
        const ConeVector image = a(x, y);
        if (image.is_zero() || !linked(image, u)) {
            report.pass = false;
            report.witness = {std::move(x), std::move(y)};
            return report;
        }
    }
    return report;
}

std::vector<SolveReport> multi_start_solve(const BivariateOperator<ConeVector>& a,
                                           const PhiSpec& phi,
                                           std::span<const ConeVector> bases,
                                           const SolveOptions& options) {
    std::vector<std::future<SolveReport>> futures;
    futures.reserve(bases.size());
    for (const ConeVector& u : bases) {
        futures.push_back(std::async(std::launch::async,
                                     [&a, &phi, u, options] { return solve(a, phi, u, options); }));
    }
    std::vector<SolveReport> reports;
    reports.reserve(bases.size());
    for (auto& f : futures) reports.push_back(f.get());
    return reports;
}

CoupledSearchResult coupled_fixed_point_search(const BivariateOperator<ConeVector>& a,
                                               const ConeVector& lo, const ConeVector& hi,
                                               int starts, std::uint64_t seed, double tol,
                                               std::size_t max_steps) {
    CoupledSearchResult result;
    result.starts = starts;
    DetRng rng(seed);
    const std::size_t dim = lo.dim();

    auto sample = [&]() {
        std::vector<double> c(dim);
        for (std::size_t i = 0; i < dim; ++i) c[i] = rng.range(lo[i], hi[i]);
        return ConeVector(std::move(c));
    };

    for (int s = 0; s < starts; ++s) {
        ConeVector x = sample();
        ConeVector y = sample();
        bool converged = false;
        for (std::size_t n = 0; n < max_steps; ++n) {
            ConeVector xn = a(x, y);
            ConeVector yn = a(y, x);
            const double residual = std::max(max_gap(xn, x), max_gap(yn, y));
            x = std::move(xn);
            y = std::move(yn);
            if (residual <= tol) {
                converged = true;
                break;
            }
        }
        if (converged) {
            ++result.converged;
            result.found.emplace_back(x, y);
        }
    }
    return result;
}

}  // namespace mixmono
