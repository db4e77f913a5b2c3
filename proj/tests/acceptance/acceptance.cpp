// Acceptance gate: one line per criterion, nonzero exit if any fails.

#include "../support.hpp"

#include "cmr/cli.hpp"
#include "cmr/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace cmr;
using cmr::test::poly;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

int failures = 0;

void criterion(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.ok = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_s > 0 && secs > limit_s) o.require(false, "runtime limit " + std::to_string(limit_s) + " s exceeded");
  if (!o.ok) ++failures;
  std::printf("%s  %d  %-40s %8.3f s%s%s\n", o.ok ? "PASS" : "FAIL", id, name, secs, o.detail.empty() ? "" : "  ",
              o.detail.c_str());
}

std::vector<Polynomial> one(const Polynomial& p) { return {p}; }

}  // namespace

int main() {
  const auto proto = test::prototype();

  criterion(1, "fixed-point iterates h1, h2", 1.0, [&] {
    Outcome o;
    const auto spec = OrderSpec::make(12, 12);
    o.require(fixed_point_iterate(proto, spec, 1).phi == one(poly("x^2")), "h1 != x^2");
    o.require(fixed_point_iterate(proto, spec, 2).phi == one(poly("x^2 - 2*eps*x^2 + 2*x^4")), "h2 mismatch");
    return o;
  });

  criterion(2, "graded solve at (6, 3)", 1.0, [&] {
    Outcome o;
    const auto phi = solve_graded(proto, OrderSpec::make(6, 3)).phi;
    o.require(phi == one(poly("x^2 - 2*eps*x^2 + 4*eps^2*x^2 + 2*x^4 - 16*eps*x^4 + 88*eps^2*x^4")),
              "coefficients mismatch");
    o.require(phi[0].size() == 6, "expected six terms");
    return o;
  });

  criterion(3, "closed form via series reciprocal (6, 6)", 1.0, [&] {
    Outcome o;
    const auto spec = OrderSpec::make(6, 6);
    const auto d1 = poly("1 + 2*eps");
    const auto d2 = d1 * d1 * poly("1 + 4*eps");
    const auto closed = truncate(poly("x^2") * series_reciprocal(d1, spec) + poly("2*x^4") * series_reciprocal(d2, spec), spec);
    const auto phi = solve_graded(proto, spec).phi;
    o.require(phi == one(closed), "solver differs from the closed form");
    o.require(phi[0].coefficient(test::mono({2}, {0}, {3})) == -8, "eps^3 x^2 coefficient != -8");
    o.require(phi[0].coefficient(test::mono({4}, {0}, {3})) == -416, "eps^3 x^4 coefficient != -416");
    return o;
  });

  criterion(4, "residual certificates of the iterates", 0, [&] {
    Outcome o;
    const std::vector<Polynomial> h{Polynomial(proto.dims()), poly("x^2"), poly("x^2 - 2*eps*x^2 + 2*x^4")};
    for (unsigned n = 0; n < 3; ++n)
      o.require(check_residual_order(proto, one(h[n]), CoupledOrder{n + 2, n + 2}).pass(),
                "h" + std::to_string(n) + " fails coupled order " + std::to_string(n + 2));
    o.require(check_residual_order(proto, one(h[1]), CoupledOrder{2, 4}).pass(), "h1 fails coupled (p=2, q=4)");
    return o;
  });

  criterion(5, "solver contract on 120 random systems", 60.0, [&] {
    Outcome o;
    std::mt19937 rng(2024);
    std::uniform_int_distribution<unsigned> qd(2, 5), pd(1, 5);
    int checked = 0;
    for (int trial = 0; trial < 120; ++trial) {
      const auto sys = test::random_system(rng, 2, 2, 2);
      const auto spec = OrderSpec::make(qd(rng), pd(rng));
      const auto approx = solve_graded(sys, spec);
      const auto residual = apply_H(approx.phi, sys);
      bool zero = true;
      for (const auto& r : residual) zero = zero && truncate(r, spec).is_zero();
      o.require(zero, "trial " + std::to_string(trial) + ": truncated residual nonzero");
      o.require(check_approximation_consistency(sys, approx.phi, spec, 2, 2).pass(),
                "trial " + std::to_string(trial) + ": probe failed");
      ++checked;
    }
    o.require(checked >= 100, "fewer than 100 systems checked");
    return o;
  });

  criterion(6, "injected defects at (6, 3)", 0, [&] {
    Outcome o;
    const auto spec = OrderSpec::make(6, 3);
    const auto phi = solve_graded(proto, spec).phi;
    const auto kept = kept_monomials(proto.dims(), spec);
    o.require(!kept.empty(), "empty kept set");
    for (const auto& m : kept) {
      auto broken = phi;
      broken[0].add_term(m, 1);
      const bool caught = !check_residual_order(proto, broken, spec).pass() ||
                          !check_approximation_consistency(proto, broken, spec, 2, 2).pass();
      o.require(caught, "defect " + to_string(m, proto.names) + " undetected");
    }
    return o;
  });

  criterion(7, "trajectory fidelity at (8, 5)", 5.0, [&] {
    Outcome o;
    const auto approx = solve_graded(proto, OrderSpec::make(8, 5));
    const auto model = reduce_model(proto, approx);
    const std::vector<double> eps{0.05};
    TrajectoryOptions off;
    off.x0 = {0.05};
    off.y0 = std::vector<double>{0.3};
    off.dt = 1e-3;
    off.t_end = 20;
    off.t_transient = 10;
    const auto r = compare_trajectories(proto, approx, model, eps, off);
    o.require(!r.blew_up, "blow-up");
    o.require(r.manifold_deviation <= 1e-4, "deviation after t = 10 is " + std::to_string(r.manifold_deviation));
    o.require(r.attraction_rate && std::abs(*r.attraction_rate + 1) <= 0.05, "attraction rate outside -1 +- 0.05");
    auto on = off;
    on.y0.reset();
    const auto s = compare_trajectories(proto, approx, model, eps, on);
    o.require(s.manifold_deviation_all <= 1e-5, "on-manifold deviation is " + std::to_string(s.manifold_deviation_all));
    return o;
  });

  criterion(8, "rk4 step-halving ratio", 0, [&] {
    Outcome o;
    auto err = [](double dt) {
      const auto tr = integrate([](std::span<const double> s, std::span<double> ds) { ds[0] = -s[0]; }, {1.0}, dt, 1.0);
      return std::abs(tr.states.back()[0] - std::exp(-1.0));
    };
    const double ratio = err(0.1) / err(0.05);
    o.require(std::abs(ratio - 16) <= 2, "ratio " + std::to_string(ratio));
    return o;
  });

  criterion(9, "parser, round trip and rejection", 0, [&] {
    Outcome o;
    RationalMatrix zero(1, 1), minus(1, 1);
    minus(0, 0) = -1;
    o.require(proto.A == zero, "A != [[0]]");
    o.require(proto.B == minus, "B != [[-1]]");
    o.require(proto.f == one(poly("eps*x - x*y")), "f mismatch");
    o.require(proto.g == one(poly("x^2")), "g mismatch");
    o.require(parse_system(serialize_system(proto)) == proto, "round trip differs");
    std::ostringstream out, err;
    const int code = run_cli({"reduce", "--system", test::data_path("cross_coupled.cm")}, out, err);
    o.require(code == 2, "cross-coupled input exited with " + std::to_string(code));
    return o;
  });

  std::printf("%s: %d failing\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
