#include "mixmono/cone.hpp"

#include <algorithm>
#include <cmath>

#include "mixmono/errors.hpp"

namespace mixmono {

ConeVector::ConeVector(std::vector<double> coords) : coords_(std::move(coords)) {
    if (coords_.empty()) throw DimensionMismatch("cone vector needs at least one coordinate");
    for (double c : coords_) {
        if (!(c >= 0.0) || !std::isfinite(c)) {
            throw Error("cone vector coordinates must be finite and nonnegative");
        }
    }
}

ConeVector ConeVector::constant(std::size_t dim, double value) {
    return ConeVector(std::vector<double>(dim, value));
}

double ConeVector::max_norm() const {
    double m = 0.0;
    for (double c : coords_) m = std::max(m, std::fabs(c));
    return m;
}

bool ConeVector::is_zero() const {
    return std::all_of(coords_.begin(), coords_.end(), [](double c) { return c == 0.0; });
}

ConeVector ConeVector::scaled(double factor) const {
    std::vector<double> out(coords_.size());
    for (std::size_t i = 0; i < coords_.size(); ++i) out[i] = factor * coords_[i];
    return ConeVector(std::move(out));
}

bool cone_leq(const ConeVector& x, const ConeVector& y, double eps) {
    if (x.dim() != y.dim()) throw DimensionMismatch("cone_leq requires equal dimensions");
    for (std::size_t i = 0; i < x.dim(); ++i) {
        if (x[i] > y[i] + eps) return false;
    }
    return true;
}

double max_gap(const ConeVector& x, const ConeVector& y) {
    if (x.dim() != y.dim()) throw DimensionMismatch("max_gap requires equal dimensions");
    double m = 0.0;
    for (std::size_t i = 0; i < x.dim(); ++i) m = std::max(m, std::fabs(x[i] - y[i]));
    return m;
}

namespace {

UniversePtr<ConeVector> componentwise_universe(std::string name, std::size_t dim,
                                               double eq_tol) {
    auto u = std::make_shared<Universe<ConeVector>>();
    u->name = std::move(name) + "-" + std::to_string(dim);
    u->eq_tol = eq_tol;
    u->leq = [eq_tol](const ConeVector& a, const ConeVector& b) {
        return cone_leq(a, b, eq_tol);
    };
    u->eq = [eq_tol](const ConeVector& a, const ConeVector& b) {
        return max_gap(a, b) <= eq_tol;
    };
    u->distance = [](const ConeVector& a, const ConeVector& b) { return max_gap(a, b); };
    u->join2 = [](const ConeVector& a, const ConeVector& b) {
        std::vector<double> out(a.dim());
        for (std::size_t i = 0; i < a.dim(); ++i) out[i] = std::max(a[i], b[i]);
        return ConeVector(std::move(out));
    };
    u->meet2 = [](const ConeVector& a, const ConeVector& b) {
        std::vector<double> out(a.dim());
        for (std::size_t i = 0; i < a.dim(); ++i) out[i] = std::min(a[i], b[i]);
        return ConeVector(std::move(out));
    };
    return u;
}

}  // namespace

UniversePtr<ConeVector> cone_universe(std::size_t dim, double eq_tol) {
    return componentwise_universe("cone", dim, eq_tol);
}

UniversePtr<ConeVector> grid_function_cone(std::size_t samples, double eq_tol) {
    return componentwise_universe("grid-cone", samples, eq_tol);
}

std::optional<PartCertificate> linked(const ConeVector& x, const ConeVector& y) {
    if (x.dim() != y.dim()) throw DimensionMismatch("linked requires equal dimensions");
    if (x.is_zero() || y.is_zero()) throw ZeroElement("linked requires nonzero cone elements");

    PartCertificate cert;
    cert.lambda_max = 1.0;
    for (std::size_t i = 0; i < x.dim(); ++i) {
        const bool sx = x[i] > 0.0;
        const bool sy = y[i] > 0.0;
        if (sx != sy) return std::nullopt;  // support mismatch: no positive lambda works
        if (!sx) continue;
        cert.support.push_back(i);
        cert.lambda_max = std::min({cert.lambda_max, x[i] / y[i], y[i] / x[i]});
    }
    return cert;
}

SelfBoundedReport self_bounded_check(std::span<const ConeVector> xs, BoundDirection direction,
                                     std::span<const double> factors) {
    SelfBoundedReport report;
    if (xs.size() < 2) {
        report.pass = false;
        return report;
    }
    for (double factor : factors) {
        SelfBoundedReport::Entry entry{factor, std::nullopt};
        for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
            const ConeVector bound = xs[k].scaled(factor);
            bool ok = true;
            for (std::size_t n = k; n < xs.size(); ++n) {
                const bool dominated = direction == BoundDirection::Upper
                                           ? cone_leq(xs[n], bound)
                                           : cone_leq(bound, xs[n]);
                if (!dominated) { ok = false; break; }
            }
            if (ok) {
                entry.witness_k = k;
                break;
            }
        }
        if (!entry.witness_k) report.pass = false;
        report.entries.push_back(entry);
    }
    return report;
}

}  // namespace mixmono
