#include "cmr/verify.hpp"

#include "cmr/error.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>

namespace cmr {

bool OrderCertificate::pass() const {
  return std::all_of(offenders.begin(), offenders.end(), [](const Polynomial& p) { return p.is_zero(); });
}

std::size_t OrderCertificate::offender_count() const {
  std::size_t total = 0;
  for (const auto& p : offenders) total += p.size();
  return total;
}

namespace {

OrderCertificate certify(const std::vector<Polynomial>& polys, const OrderTarget& target) {
  OrderCertificate cert{target, {}, 0};
  for (const auto& p : polys) {
    cert.offenders.push_back(verify_order(p, target).offenders);
    cert.residual_terms += p.size();
  }
  return cert;
}

}  // namespace

OrderCertificate check_residual_order(const CentreSystem& sys, std::span<const Polynomial> phi, const OrderTarget& target) {
  return certify(apply_H(phi, sys), target);
}

OrderCertificate check_approximation_consistency(const CentreSystem& sys, std::span<const Polynomial> phi,
                                                 const OrderSpec& spec, unsigned dq, unsigned dp) {
  const ManifoldApprox reference = solve_graded(sys, spec.boosted(dq, dp));
  if (phi.size() != reference.phi.size()) throw LayoutError("phi needs one component per stable variable");
  std::vector<Polynomial> diff;
  for (std::size_t i = 0; i < phi.size(); ++i) diff.push_back(reference.phi[i] - phi[i]);
  return certify(diff, spec);
}

OrderCertificate check_approximation_consistency(const CentreSystem& sys, const OrderSpec& spec, unsigned dq, unsigned dp) {
  return check_approximation_consistency(sys, solve_graded(sys, spec).phi, spec, dq, dp);
}

// ---------------------------------------------------------------------------

Trajectory integrate(const VectorField& field, std::vector<double> x0, double dt, double t_end) {
  if (!(dt > 0) || !std::isfinite(dt)) throw ValidationError("step size must be positive");
  if (!(t_end > 0) || !std::isfinite(t_end)) throw ValidationError("horizon must be positive");
  const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));
  const std::size_t dim = x0.size();

  Trajectory traj;
  traj.dt = dt;
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(x0);

  std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
  std::vector<double> x = std::move(x0);
  for (std::size_t s = 1; s <= steps; ++s) {
    field(x, k1);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
    field(tmp, k2);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
    field(tmp, k3);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = x[i] + dt * k3[i];
    field(tmp, k4);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    if (!std::all_of(tmp.begin(), tmp.end(), [](double v) { return std::isfinite(v); })) {
      traj.blew_up = true;
      break;
    }
    x = tmp;
    traj.times.push_back(static_cast<double>(s) * dt);
    traj.states.push_back(x);
  }
  return traj;
}

namespace {

std::vector<CompiledPolynomial> compile(const std::vector<Polynomial>& polys) {
  return {polys.begin(), polys.end()};
}

}  // namespace

TrajectoryReport compare_trajectories(const CentreSystem& sys, const ManifoldApprox& approx, const ReducedModel& model,
                                      std::span<const double> eps, const TrajectoryOptions& options) {
  const Layout dims = sys.dims();
  if (eps.size() != dims.l)
    throw ValidationError("expected " + std::to_string(dims.l) + " parameter values, got " + std::to_string(eps.size()));
  if (options.x0.size() != dims.m)
    throw ValidationError("expected " + std::to_string(dims.m) + " centre initial values");
  if (options.y0 && options.y0->size() != dims.n)
    throw ValidationError("expected " + std::to_string(dims.n) + " stable initial values");
  const double t_transient = options.t_transient.value_or(options.t_end / 2);
  if (!(t_transient >= 0) || !(t_transient < options.t_end))
    throw ValidationError("transient time must satisfy 0 <= t_transient < t_end");

  std::vector<CompiledPolynomial> full_x, full_y;
  for (std::size_t i = 0; i < dims.m; ++i) full_x.emplace_back(sys.centre_rhs(i));
  for (std::size_t j = 0; j < dims.n; ++j) full_y.emplace_back(sys.stable_rhs(j));
  const auto phi = compile(approx.phi);
  const auto reduced = compile(model.rhs);
  const std::vector<double> eps_v(eps.begin(), eps.end());
  const std::vector<double> no_y(dims.n, 0.0);

  auto phi_at = [&](std::span<const double> x) {
    std::vector<double> out(dims.n);
    for (std::size_t j = 0; j < dims.n; ++j) out[j] = phi[j](x, no_y, eps_v);
    return out;
  };

  TrajectoryReport report;
  report.eps = eps_v;
  report.x0 = options.x0;
  report.y0 = options.y0 ? *options.y0 : phi_at(options.x0);
  report.dt = options.dt;
  report.t_end = options.t_end;
  report.t_transient = t_transient;

  std::vector<double> start = report.x0;
  start.insert(start.end(), report.y0.begin(), report.y0.end());
  const Trajectory full = integrate(
      [&](std::span<const double> s, std::span<double> ds) {
        const auto x = s.first(dims.m);
        const auto y = s.subspan(dims.m);
        for (std::size_t i = 0; i < dims.m; ++i) ds[i] = full_x[i](x, y, eps_v);
        for (std::size_t j = 0; j < dims.n; ++j) ds[dims.m + j] = full_y[j](x, y, eps_v);
      },
      start, options.dt, options.t_end);
  const Trajectory small = integrate(
      [&](std::span<const double> x, std::span<double> dx) {
        for (std::size_t i = 0; i < dims.m; ++i) dx[i] = reduced[i](x, no_y, eps_v);
      },
      report.x0, options.dt, options.t_end);
  report.blew_up = full.blew_up || small.blew_up;

  std::vector<double> deviation(full.states.size());
  for (std::size_t s = 0; s < full.states.size(); ++s) {
    const std::span<const double> state(full.states[s]);
    const auto on = phi_at(state.first(dims.m));
    double dev = 0.0;
    for (std::size_t j = 0; j < dims.n; ++j) dev = std::max(dev, std::abs(state[dims.m + j] - on[j]));
    deviation[s] = dev;
    report.manifold_deviation_all = std::max(report.manifold_deviation_all, dev);
    if (full.times[s] >= t_transient - 0.5 * options.dt)
      report.manifold_deviation = std::max(report.manifold_deviation, dev);
    if (s < small.states.size())
      for (std::size_t i = 0; i < dims.m; ++i)
        report.model_deviation = std::max(report.model_deviation, std::abs(state[i] - small.states[s][i]));
    if (options.keep_samples) {
      std::vector<double> row{full.times[s]};
      row.insert(row.end(), full.states[s].begin(), full.states[s].end());
      row.insert(row.end(), on.begin(), on.end());
      report.samples.push_back(std::move(row));
    }
  }

  // Exponential fit of the approach to the manifold.
  const double floor = report.manifold_deviation;
  double n = 0, st = 0, sl = 0, stt = 0, stl = 0;
  for (std::size_t s = 0; s < deviation.size(); ++s) {
    if (full.times[s] > t_transient) break;
    if (!(deviation[s] > 10.0 * floor) || deviation[s] <= 0.0) continue;
    const double t = full.times[s];
    const double lg = std::log(deviation[s]);
    n += 1;
    st += t;
    sl += lg;
    stt += t * t;
    stl += t * lg;
  }
  const double denom = n * stt - st * st;
  if (n >= 2 && denom > 0) report.attraction_rate = (n * stl - st * sl) / denom;
  return report;
}

std::vector<TrajectoryReport> compare_trajectories(const CentreSystem& sys, const ManifoldApprox& approx,
                                                   const ReducedModel& model, std::vector<std::vector<double>> eps_values,
                                                   const TrajectoryOptions& options) {
  std::sort(eps_values.begin(), eps_values.end());
  std::vector<TrajectoryReport> out;
  for (const auto& eps : eps_values) out.push_back(compare_trajectories(sys, approx, model, eps, options));
  return out;
}

void write_trajectory_csv(std::ostream& os, const TrajectoryReport& report, const VariableLayout& names) {
  os << "t";
  for (const auto& n : names.centre) os << "," << n;
  for (const auto& n : names.stable) os << "," << n;
  for (const auto& n : names.stable) os << ",phi_" << n;
  os << "\n" << std::setprecision(12);
  for (const auto& row : report.samples) {
    for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << row[k];
    os << "\n";
  }
}

}  // namespace cmr
