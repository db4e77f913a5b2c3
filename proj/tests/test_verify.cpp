#include "support.hpp"

#include "cmr/error.hpp"
#include "cmr/verify.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

using namespace cmr;
using cmr::test::poly;

namespace {

std::vector<Polynomial> one(const Polynomial& p) { return {p}; }

double decay_error(double dt) {
  const auto tr = integrate([](std::span<const double> s, std::span<double> ds) { ds[0] = -s[0]; }, {1.0}, dt, 1.0);
  return std::abs(tr.states.back()[0] - std::exp(-1.0));
}

}  // namespace

TEST_CASE("residual certificates for the iterates") {
  const auto sys = test::prototype();
  const std::vector<Polynomial> iterates{Polynomial(sys.dims()), poly("x^2"), poly("x^2 - 2*eps*x^2 + 2*x^4")};
  for (unsigned n = 0; n < 3; ++n) {
    const auto cert = check_residual_order(sys, one(iterates[n]), CoupledOrder{n + 2, n + 2});
    CHECK(cert.pass());
    // One order higher must fail: the leading residual term is exactly of order n + 2.
    CHECK_FALSE(check_residual_order(sys, one(iterates[n]), CoupledOrder{n + 3, n + 3}).pass());
  }
  CHECK(check_residual_order(sys, one(poly("x^2")), CoupledOrder{2, 4}).pass());

  const auto flex = check_residual_order(sys, one(poly("x^2")), OrderSpec::make(4, 2));
  CHECK_FALSE(flex.pass());
  CHECK(flex.offender_count() == 1);
  CHECK(flex.offenders[0] == poly("2*eps*x^2"));
  CHECK(flex.residual_terms == 2);

  CHECK(check_residual_order(sys, solve_graded(sys, OrderSpec::make(6, 3)).phi, OrderSpec::make(6, 3)).pass());
}

TEST_CASE("approximation probe") {
  const auto sys = test::prototype();
  const auto spec = OrderSpec::make(6, 3);
  CHECK(check_approximation_consistency(sys, spec, 2, 2).pass());
  CHECK(check_approximation_consistency(sys, spec, 0, 0).pass());

  auto phi = solve_graded(sys, spec).phi;
  phi[0] += poly("x^3");
  const auto bad = check_approximation_consistency(sys, phi, spec, 2, 2);
  CHECK_FALSE(bad.pass());
  CHECK(bad.offenders[0] == poly("-x^3"));
}

TEST_CASE("injected defects are caught for every kept monomial") {
  const auto sys = test::prototype();
  const auto spec = OrderSpec::make(6, 3);
  const auto phi = solve_graded(sys, spec).phi;
  const auto kept = kept_monomials(sys.dims(), spec);
  CHECK(kept.size() == 18);
  for (const auto& m : kept) {
    auto broken = phi;
    broken[0].add_term(m, 1);
    const bool residual_ok = check_residual_order(sys, broken, spec).pass();
    const bool probe_ok = check_approximation_consistency(sys, broken, spec, 2, 2).pass();
    REQUIRE_FALSE((residual_ok && probe_ok));
  }
}

TEST_CASE("rk4 accuracy and order") {
  CHECK(decay_error(1e-3) < 1e-8);
  const double ratio = decay_error(0.1) / decay_error(0.05);
  CHECK(ratio == doctest::Approx(16).epsilon(2.0 / 16));
  const double order = std::log2(decay_error(0.02) / decay_error(0.01));
  CHECK(order == doctest::Approx(4.0).epsilon(0.05));

  const auto still = integrate([](std::span<const double>, std::span<double> ds) { ds[0] = ds[1] = 0; }, {0.3, -2}, 0.1, 1);
  CHECK(still.states.size() == 11);
  CHECK(still.states.back() == std::vector<double>{0.3, -2});
  CHECK(still.times.back() == doctest::Approx(1.0));

  const auto blow = integrate([](std::span<const double> s, std::span<double> ds) { ds[0] = s[0] * s[0]; }, {1.0}, 0.01, 5);
  CHECK(blow.blew_up);
  CHECK(std::isfinite(blow.states.back()[0]));

  CHECK_THROWS_AS(integrate([](auto, auto) {}, {1.0}, 0, 1), ValidationError);
  CHECK_THROWS_AS(integrate([](auto, auto) {}, {1.0}, 0.1, -1), ValidationError);
}

TEST_CASE("trajectory comparison on the prototype") {
  const auto sys = test::prototype();
  const auto approx = solve_graded(sys, OrderSpec::make(8, 5));
  const auto model = reduce_model(sys, approx);
  const std::vector<double> eps{0.05};

  TrajectoryOptions off;
  off.x0 = {0.05};
  off.y0 = std::vector<double>{0.3};
  const auto r = compare_trajectories(sys, approx, model, eps, off);
  CHECK_FALSE(r.blew_up);
  CHECK(r.t_transient == 10.0);
  CHECK(r.manifold_deviation <= 1e-4);
  CHECK(r.manifold_deviation_all == doctest::Approx(0.3 - 0.0025 * (1 - 0.1 + 0.01)).epsilon(1e-3));
  REQUIRE(r.attraction_rate);
  CHECK(*r.attraction_rate == doctest::Approx(-1.0).epsilon(0.05));

  TrajectoryOptions on;
  on.x0 = {0.05};
  const auto s = compare_trajectories(sys, approx, model, eps, on);
  CHECK(s.y0[0] == doctest::Approx(0.0025 * (1 - 0.1 + 0.01)).epsilon(1e-3));
  CHECK(s.manifold_deviation_all <= 1e-5);
  CHECK(s.model_deviation <= 1e-5);

  CHECK_THROWS_AS(compare_trajectories(sys, approx, model, std::vector<double>{}, on), ValidationError);
  auto bad = on;
  bad.t_transient = 30;
  CHECK_THROWS_AS(compare_trajectories(sys, approx, model, eps, bad), ValidationError);
}

TEST_CASE("trajectory runs are sorted by eps and exported as csv") {
  const auto sys = test::prototype();
  const auto approx = solve_graded(sys, OrderSpec::make(6, 3));
  const auto model = reduce_model(sys, approx);
  TrajectoryOptions opt;
  opt.x0 = {0.05};
  opt.t_end = 1;
  opt.dt = 0.25;
  opt.keep_samples = true;
  const auto runs = compare_trajectories(sys, approx, model, {{0.1}, {-0.1}, {0.0}}, opt);
  REQUIRE(runs.size() == 3);
  CHECK(runs[0].eps[0] == -0.1);
  CHECK(runs[2].eps[0] == 0.1);
  REQUIRE(runs[1].samples.size() == 5);
  CHECK(runs[1].samples[0].size() == 4);

  std::ostringstream csv;
  write_trajectory_csv(csv, runs[1], sys.names);
  const std::string text = csv.str();
  CHECK(text.substr(0, text.find('\n')) == "t,x,y,phi_y");
  CHECK(std::count(text.begin(), text.end(), '\n') == 6);
}

TEST_CASE("manifold deviation shrinks as the order grows") {
  const auto sys = test::prototype();
  TrajectoryOptions on;
  on.x0 = {0.2};
  on.t_end = 5;
  on.dt = 1e-2;
  double previous = 1.0;
  for (unsigned q : {3u, 5u, 7u}) {
    const auto approx = solve_graded(sys, OrderSpec::make(q, 4));
    const auto r = compare_trajectories(sys, approx, reduce_model(sys, approx), std::vector<double>{0.02}, on);
    CHECK(r.manifold_deviation_all < previous);
    previous = r.manifold_deviation_all;
  }
}

// ---------------------------------------------------------------------------

TEST_CASE("probe passes on random systems") {
  std::mt19937 rng(61);
  for (int trial = 0; trial < 40; ++trial) {
    const auto sys = test::random_system(rng);
    const auto spec = OrderSpec::make(std::uniform_int_distribution<unsigned>(2, 4)(rng),
                                      std::uniform_int_distribution<unsigned>(1, 3)(rng));
    REQUIRE(check_approximation_consistency(sys, spec, 2, 2).pass());
    REQUIRE(check_residual_order(sys, solve_graded(sys, spec).phi, spec).pass());
  }
}
