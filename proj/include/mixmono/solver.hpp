#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mixmono/cone.hpp"
#include "mixmono/operators.hpp"
#include "mixmono/phi.hpp"

namespace mixmono {

/// Coupled lower-upper start pair synthesized around a base element u:
/// x0 = lambda0^n0 * u, y0 = lambda0^-n0 * u.
struct LuConstruction {
    ConeVector x0;
    ConeVector y0;
    double lambda0 = 0.0;
    int k0 = 0;
    int n0 = 0;
};

/// Builds the start pair. lambda0 is the linking constant of u and A(u, u)
/// (clamped strictly inside (0,1)); k0 is the least n with
/// (phi(lambda0)/lambda0)^n >= 1/lambda0; n0 >= k0 additionally stretches
/// the box until every target lies in [x0, y0]. The returned pair is
/// verified to be a coupled lower-upper fixed point.
///
/// Throws NotLinked when u and A(u, u) are in different parts, and
/// Underflow when lambda0^(+-n0) leaves the double range.
LuConstruction construct_lu_pair(const BivariateOperator<ConeVector>& a, const PhiSpec& phi,
                                 const ConeVector& u, std::span<const ConeVector> targets);

struct SolveOptions {
    double tol = 1e-10;
    std::size_t max_steps = 10'000;
};

/// Sampling validation that A maps the part of u into itself: random pairs
/// drawn from the part (positive coordinate-wise rescalings of u) must have
/// images linked with u. Exact closure is not decidable, so this mirrors
/// the suite's sampling philosophy; a witness is the first escaping pair.
struct PartClosureReport {
    bool pass = true;
    std::optional<std::pair<ConeVector, ConeVector>> witness;
    std::size_t checked = 0;
};

PartClosureReport part_closure_check(const BivariateOperator<ConeVector>& a,
                                     const ConeVector& u, std::size_t samples = 200,
                                     std::uint64_t seed = 42);

/// Outcome of a solve: the fixed-point approximation with its evaluated
/// residual, the per-step certificate sequence lambda_n, and the start-pair
/// construction certificates. steps holds the coupled trace for
/// post-hoc certificate audits.
struct SolveReport {
    ConeVector x_star;
    double residual = 0.0;
    std::vector<double> lambda_trace;
    ConeVector x0;
    ConeVector y0;
    std::size_t iterations = 0;
    double lambda0 = 0.0;
    int k0 = 0;
    int n0 = 0;
    double lambda_final = 0.0;
    double final_gap = 0.0;
    double tol = 0.0;
    std::vector<std::pair<ConeVector, ConeVector>> steps;
};

/// Runs the coupled iteration from the synthesized pair while tracking the
/// certificate sequence lambda_{n+1} = phi(lambda_n), seeded with the
/// linking constant of (x0, y0). The inequality x_n >= lambda_n * y_n is
/// asserted at every step; its failure (CertificateViolation) means the
/// declared phi condition does not hold for A. Stops when 1 - lambda_n or
/// the per-coordinate relative gap drops below tol; x_star is the lower
/// iterate, which stays inside every nested box. The evaluated residual is
/// bounded by the final bracket width, which the certificate caps at
/// roughly tol * ||x_star||_inf / (1 - tol).
SolveReport solve(const BivariateOperator<ConeVector>& a, const PhiSpec& phi,
                  const ConeVector& u, const SolveOptions& options = {});

/// Independent solves from several base elements, run concurrently over
/// the shared immutable operator; results are returned in input order.
std::vector<SolveReport> multi_start_solve(const BivariateOperator<ConeVector>& a,
                                           const PhiSpec& phi,
                                           std::span<const ConeVector> bases,
                                           const SolveOptions& options = {});

/// Plain coupled Picard search for coupled fixed points inside a box:
/// random start pairs are iterated until the coupled residual drops below
/// tol or the step budget runs out; only converged orbits are reported.
struct CoupledSearchResult {
    std::vector<std::pair<ConeVector, ConeVector>> found;
    int starts = 0;
    int converged = 0;
};

CoupledSearchResult coupled_fixed_point_search(const BivariateOperator<ConeVector>& a,
                                               const ConeVector& lo, const ConeVector& hi,
                                               int starts, std::uint64_t seed,
                                               double tol = 1e-12,
                                               std::size_t max_steps = 1000);

}  // namespace mixmono
