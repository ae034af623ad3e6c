#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "mixmono/cone.hpp"
#include "mixmono/operators.hpp"

namespace mixmono {

/// The comparison function phi : (0,1) -> (0,1] of the cone solver. Every
/// evaluation is validated: phi(lambda) must lie in (0,1] and exceed
/// lambda, which is re-checked on a probe grid at construction so that an
/// inadmissible phi is rejected before any solve starts. When phi is
/// declared super-multiplicative, phi(l)*phi(m) <= phi(l*m) is verified on
/// a grid as well; the solver itself never requires the declaration.
class PhiSpec {
public:
    explicit PhiSpec(std::function<double(double)> phi,
                     bool declared_supermultiplicative = false);

    double operator()(double lambda) const;
    bool declared_supermultiplicative() const { return declared_supermultiplicative_; }

    /// phi(lambda) = lambda^e with 0 < e < 1; super-multiplicative with
    /// equality.
    static PhiSpec power(double exponent);

private:
    std::function<double(double)> phi_;
    bool declared_supermultiplicative_;
};

struct SupermultReport {
    bool pass = true;
    double lambda = 0.0;
    double mu = 0.0;
};

/// Grid check of phi(l)*phi(m) <= phi(l*m); the witness is the first
/// failing grid pair.
SupermultReport check_supermultiplicative(const std::function<double(double)>& phi,
                                          int grid = 20);

/// Result of checking the comparison inequality A(l*x, y) >= phi(l)*A(x, l*y)
/// over linearly dependent pairs in a part.
struct PhiConditionReport {
    struct Witness {
        double lambda = 0.0;
        double dependence = 0.0;  // y = dependence * x
        double scale = 0.0;       // x = scale * part_sample
        std::size_t coord = 0;
        double lhs = 0.0;
        double rhs = 0.0;
    };
    bool pass = true;
    std::optional<Witness> witness;
    std::size_t checked = 0;
};

/// Verifies the comparison inequality on a grid of lambdas, dependence
/// factors (log-spaced) and scalings of the part sample. Only linearly
/// dependent pairs are probed; the hypothesis does not constrain general
/// pairs and checking them would wrongly reject valid operators.
PhiConditionReport phi_condition_check(const BivariateOperator<ConeVector>& a,
                                       const PhiSpec& phi, const ConeVector& part_sample,
                                       std::span<const double> lambda_grid = {},
                                       std::span<const double> dependence_grid = {},
                                       std::span<const double> scale_grid = {});

}  // namespace mixmono
