#pragma once

#include "cmr/order.hpp"
#include "cmr/system.hpp"

#include <optional>
#include <span>
#include <vector>

namespace cmr {

enum class SolveMethod { Graded, FixedPoint };

const char* to_string(SolveMethod method);

/// y = phi(x, eps): one y-free polynomial per stable variable, supported on
/// the kept set of spec, every term of total degree >= 2.
struct ManifoldApprox {
  std::vector<Polynomial> phi;
  OrderSpec spec;
  SolveMethod method = SolveMethod::Graded;
  /// Fixed-point steps taken; 0 for the graded solver.
  unsigned iterations = 0;
};

/// Truncation used for the reduced right side: (q + 1, p) or (q, p).
enum class ModelOrder { QPlusOne, Q };

/// x' = rhs(x, eps) on the manifold.
struct ReducedModel {
  std::vector<Polynomial> rhs;
  /// The spec the nonlinear part was truncated to.
  OrderSpec spec;
};

/// Residual of the invariance equation,
///   H phi = phi_x (A x + f(x, phi, eps)) - B phi - g(x, phi, eps),
/// exact and untruncated. phi is an exact centre manifold iff H phi = 0.
std::vector<Polynomial> apply_H(std::span<const Polynomial> phi, const CentreSystem& sys);

/// Only the residual terms accepted by keep. keep must be divisor-closed;
/// the result then equals filter_terms(apply_H(phi, sys), keep).
std::vector<Polynomial> apply_H(std::span<const Polynomial> phi, const CentreSystem& sys, const MonomialFilter& keep);

/// Order-by-order solve of H phi = 0 on the kept set of spec. At each total
/// degree the homological operator  delta -> delta_x (A x) - B delta  is
/// inverted exactly. The result satisfies truncate(H phi, spec) = 0.
///
/// Throws SolverError on a singular homological block (resonance) and
/// ValidationError when spec is invalid or its x-weights differ between
/// centre variables coupled by A.
ManifoldApprox solve_graded(const CentreSystem& sys, const OrderSpec& spec);

/// One step of phi <- truncate(B^-1 [phi_x (A x + f(x, phi, eps)) - g(x, phi, eps)], spec).
std::vector<Polynomial> fixed_point_step(const CentreSystem& sys, std::span<const Polynomial> phi, const OrderSpec& spec,
                                         const RationalMatrix& b_inverse);

/// The count-th iterate starting from phi = 0, with no convergence test.
ManifoldApprox fixed_point_iterate(const CentreSystem& sys, const OrderSpec& spec, unsigned count);

/// Iterates from phi = 0 until an iterate reproduces its predecessor.
/// max_iter defaults to the largest total degree in the kept set, which is
/// (q - 1) + (p - 1) for unit weights. Throws SolverError on non-convergence.
ManifoldApprox iterate_fixed_point(const CentreSystem& sys, const OrderSpec& spec,
                                   std::optional<unsigned> max_iter = std::nullopt);

/// rhs = A x + truncate(f(x, phi, eps), spec') with spec' = (q + 1, p) by default.
ReducedModel reduce_model(const CentreSystem& sys, const ManifoldApprox& approx, ModelOrder order = ModelOrder::QPlusOne);

}  // namespace cmr
