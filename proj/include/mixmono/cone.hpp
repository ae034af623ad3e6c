#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "mixmono/universe.hpp"

namespace mixmono {

inline constexpr double kDefaultEqTol = 1e-12;

/// Element of the nonnegative cone in R^n with componentwise order.
class ConeVector {
public:
    explicit ConeVector(std::vector<double> coords);
    static ConeVector constant(std::size_t dim, double value);

    std::size_t dim() const { return coords_.size(); }
    double operator[](std::size_t i) const { return coords_[i]; }
    std::span<const double> coords() const { return coords_; }

    double max_norm() const;
    bool is_zero() const;

    ConeVector scaled(double factor) const;  // factor must be >= 0
    friend ConeVector operator*(double factor, const ConeVector& v) { return v.scaled(factor); }

private:
    std::vector<double> coords_;
};

/// Componentwise x <= y with an absolute tolerance slack per coordinate.
bool cone_leq(const ConeVector& x, const ConeVector& y, double eps = kDefaultEqTol);

/// Max-norm of the difference.
double max_gap(const ConeVector& x, const ConeVector& y);

/// The universe (R^n_+, componentwise order).
UniversePtr<ConeVector> cone_universe(std::size_t dim, double eq_tol = kDefaultEqTol);

/// Finite-grid surrogate for the cone of nonnegative continuous functions:
/// the same componentwise universe with coordinates read as samples of a
/// function on grid points.
UniversePtr<ConeVector> grid_function_cone(std::size_t samples, double eq_tol = kDefaultEqTol);

/// Certificate that two nonzero cone elements are linked (lie in the same
/// part): support patterns agree and lambda_max is the largest lambda with
/// lambda*x <= y and lambda*y <= x.
struct PartCertificate {
    std::vector<std::size_t> support;
    double lambda_max = 0.0;
};

/// Present iff x and y are linked. Throws ZeroElement on a zero input.
std::optional<PartCertificate> linked(const ConeVector& x, const ConeVector& y);

enum class BoundDirection { Upper, Lower };

/// Self-boundedness check over a stored sequence. For each factor in the
/// grid (mu > 1 for Upper, lambda in (0,1) for Lower) the check looks for
/// the least witness index k whose whole stored tail is dominated: for
/// Upper, x_n <= mu * x_k for all stored n >= k. A witness must leave a
/// nonempty tail (k strictly before the last index), so divergent
/// sequences fail instead of passing vacuously.
struct SelfBoundedReport {
    struct Entry {
        double factor = 0.0;
        std::optional<std::size_t> witness_k;
    };
    bool pass = true;
    std::vector<Entry> entries;
};

SelfBoundedReport self_bounded_check(std::span<const ConeVector> xs, BoundDirection direction,
                                     std::span<const double> factors);

}  // namespace mixmono
