#pragma once

#include "cmr/manifold.hpp"

#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

namespace cmr {

/// Checkable form of "H phi = O(target)": the residual terms that fall
/// outside the target's error set, per stable component.
struct OrderCertificate {
  OrderTarget target;
  std::vector<Polynomial> offenders;
  /// Terms in the inspected polynomial vector (residual or difference).
  std::size_t residual_terms = 0;

  bool pass() const;
  std::size_t offender_count() const;
};

/// Computes H phi exactly and checks every term against target.
OrderCertificate check_residual_order(const CentreSystem& sys, std::span<const Polynomial> phi, const OrderTarget& target);

/// Empirical probe of the approximation property: compares phi with a
/// reference solve at spec boosted by (dq, dp) and certifies that every
/// term of the difference lies in the error set of spec.
OrderCertificate check_approximation_consistency(const CentreSystem& sys, std::span<const Polynomial> phi,
                                                 const OrderSpec& spec, unsigned dq, unsigned dp);

/// Same, with phi = solve_graded(sys, spec).
OrderCertificate check_approximation_consistency(const CentreSystem& sys, const OrderSpec& spec, unsigned dq, unsigned dp);

// ---------------------------------------------------------------------------
// Numerics

/// state -> derivative; both spans have the state dimension.
using VectorField = std::function<void(std::span<const double>, std::span<double>)>;

struct Trajectory {
  double dt = 0.0;
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  /// A non-finite state was produced; the trajectory stops at the last finite sample.
  bool blew_up = false;
};

/// Classical fixed-step RK4. Samples at t = 0, dt, 2 dt, ... up to t_end
/// (the step count is t_end / dt rounded to the nearest integer).
Trajectory integrate(const VectorField& field, std::vector<double> x0, double dt, double t_end);

struct TrajectoryOptions {
  std::vector<double> x0;
  /// Initial stable state; nullopt starts on the manifold, y0 = phi(x0, eps).
  std::optional<std::vector<double>> y0;
  double dt = 1e-3;
  double t_end = 20.0;
  /// Defaults to t_end / 2.
  std::optional<double> t_transient;
  /// Keep per-sample rows (t, x..., y..., phi...) for CSV output.
  bool keep_samples = false;
};

struct TrajectoryReport {
  std::vector<double> eps;
  std::vector<double> x0;
  std::vector<double> y0;
  double dt = 0.0;
  double t_end = 0.0;
  double t_transient = 0.0;
  /// max |y(t) - phi(x(t), eps)| over t >= t_transient (max norm over components).
  double manifold_deviation = 0.0;
  /// Same maximum over the whole horizon.
  double manifold_deviation_all = 0.0;
  /// max |x_full(t) - x_reduced(t)| over the horizon.
  double model_deviation = 0.0;
  /// Least-squares slope of log |y - phi| on [0, t_transient] while the
  /// deviation exceeds 10x the post-transient floor. nullopt when fewer
  /// than two samples qualify.
  std::optional<double> attraction_rate;
  bool blew_up = false;
  std::vector<std::vector<double>> samples;
};

TrajectoryReport compare_trajectories(const CentreSystem& sys, const ManifoldApprox& approx, const ReducedModel& model,
                                      std::span<const double> eps, const TrajectoryOptions& options);

/// One report per parameter point, sorted by eps.
std::vector<TrajectoryReport> compare_trajectories(const CentreSystem& sys, const ManifoldApprox& approx,
                                                   const ReducedModel& model, std::vector<std::vector<double>> eps_values,
                                                   const TrajectoryOptions& options);

/// Header "t,x...,y...,phi_y..." followed by the kept samples.
void write_trajectory_csv(std::ostream& os, const TrajectoryReport& report, const VariableLayout& names);

}  // namespace cmr
