#include "mixmono/phi.hpp"

#include <cmath>

#include "mixmono/errors.hpp"

namespace mixmono {

namespace {

constexpr double kProbeGrid[] = {0.05, 0.15, 0.25, 0.35, 0.45, 0.55, 0.65, 0.75, 0.85, 0.95};

void validate_point(double lambda, double value) {
    if (!(value > 0.0) || value > 1.0) {
        throw Error("phi(" + std::to_string(lambda) + ") = " + std::to_string(value) +
                    " is outside (0, 1]");
    }
    if (!(value > lambda)) {
        throw Error("phi(" + std::to_string(lambda) + ") = " + std::to_string(value) +
                    " does not exceed lambda");
    }
}

}  // namespace

PhiSpec::PhiSpec(std::function<double(double)> phi, bool declared_supermultiplicative)
    : phi_(std::move(phi)), declared_supermultiplicative_(declared_supermultiplicative) {
    for (double lambda : kProbeGrid) validate_point(lambda, phi_(lambda));
    if (declared_supermultiplicative_) {
        const auto report = check_supermultiplicative(phi_);
        if (!report.pass) {
            throw Error("phi declared super-multiplicative but fails at lambda=" +
                        std::to_string(report.lambda) + ", mu=" + std::to_string(report.mu));
        }
    }
}

double PhiSpec::operator()(double lambda) const {
    const double value = phi_(lambda);
    validate_point(lambda, value);
    return value;
}

PhiSpec PhiSpec::power(double exponent) {
    if (!(exponent > 0.0) || !(exponent < 1.0)) {
        throw Error("power phi requires an exponent in (0, 1)");
    }
    return PhiSpec([exponent](double lambda) { return std::pow(lambda, exponent); },
                   /*declared_supermultiplicative=*/true);
}

SupermultReport check_supermultiplicative(const std::function<double(double)>& phi, int grid) {
    // Tiny slack absorbs rounding in pow-based phis where the law holds
    // with equality.
    constexpr double kSlack = 1e-12;
    for (int i = 1; i <= grid; ++i) {
        const double lambda = static_cast<double>(i) / (grid + 1);
        for (int j = 1; j <= grid; ++j) {
            const double mu = static_cast<double>(j) / (grid + 1);
            if (phi(lambda) * phi(mu) > phi(lambda * mu) + kSlack) {
                return {false, lambda, mu};
            }
        }
    }
    return {};
}

PhiConditionReport phi_condition_check(const BivariateOperator<ConeVector>& a,
                                       const PhiSpec& phi, const ConeVector& part_sample,
                                       std::span<const double> lambda_grid,
                                       std::span<const double> dependence_grid,
                                       std::span<const double> scale_grid) {
    static const std::vector<double> default_lambdas = [] {
        std::vector<double> v;
        for (int i = 1; i <= 19; ++i) v.push_back(0.05 * i);
        return v;
    }();
    static const std::vector<double> default_dependence = {0.0625, 0.125, 0.25, 0.5, 1.0,
                                                           2.0,    4.0,   8.0,  16.0};
    static const std::vector<double> default_scales = {0.25, 0.5, 1.0, 2.0, 4.0};

    if (lambda_grid.empty()) lambda_grid = default_lambdas;
    if (dependence_grid.empty()) dependence_grid = default_dependence;
    if (scale_grid.empty()) scale_grid = default_scales;

    const double eq_tol = a.universe()->eq_tol;
    PhiConditionReport report;
    for (double scale : scale_grid) {
        const ConeVector x = part_sample.scaled(scale);
        for (double dep : dependence_grid) {
            const ConeVector y = x.scaled(dep);
            for (double lambda : lambda_grid) {
                ++report.checked;
                const ConeVector lhs = a(x.scaled(lambda), y);
                const ConeVector rhs = a(x, y.scaled(lambda)).scaled(phi(lambda));
                const double slack = eq_tol * (1.0 + rhs.max_norm());
                for (std::size_t i = 0; i < lhs.dim(); ++i) {
                    if (lhs[i] + slack < rhs[i]) {
                        report.pass = false;
                        report.witness = {lambda, dep, scale, i, lhs[i], rhs[i]};
                        return report;
                    }
                }
            }
        }
    }
    return report;
}

}  // namespace mixmono
