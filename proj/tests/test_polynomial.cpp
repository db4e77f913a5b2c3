#include "support.hpp"

#include "cmr/error.hpp"
#include "cmr/order.hpp"
#include "cmr/polynomial.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace cmr;
using cmr::test::mono;
using cmr::test::poly;

namespace {
const Layout kProto{1, 1, 1};
const VarRef kX{Block::Centre, 0};
const VarRef kEps{Block::Param, 0};
}  // namespace

TEST_CASE("rational canonical form") {
  const Rational r = parse_rational("6/4");
  CHECK(to_fraction_string(r) == "3/2");
  CHECK(to_fraction_string(parse_rational("-0/5")) == "0/1");
  CHECK(to_fraction_string(parse_rational("7")) == "7/1");
  CHECK_THROWS_AS(parse_rational("1/0"), ValidationError);
  CHECK_THROWS_AS(parse_rational("1/-2"), ValidationError);
  CHECK_THROWS_AS(parse_rational("abc"), ValidationError);
}

TEST_CASE("add") {
  CHECK(poly("x^2 - 2*eps*x^2") + poly("2*x^4") == poly("x^2 - 2*eps*x^2 + 2*x^4"));
  const Polynomial p = poly("3*x*y - eps^2");
  CHECK(p + Polynomial(kProto) == p);

  const Polynomial sum = poly("x^2 + eps*x^2") + poly("-eps*x^2");
  CHECK(sum == poly("x^2"));
  CHECK(sum.size() == 1);  // cancelled term is not stored

  CHECK_THROWS_AS(p + Polynomial(Layout{2, 1, 1}), LayoutError);
}

TEST_CASE("mul") {
  CHECK(poly("2*x*x") * poly("eps - x^2") == poly("2*eps*x^2 - 2*x^4"));
  const Polynomial p = poly("x - 1/2*y*eps");
  CHECK(p * Polynomial::constant(kProto, 1) == p);
  CHECK((p * Polynomial(kProto)).is_zero());
  CHECK_THROWS_AS(p * Polynomial(Layout{1, 2, 1}), LayoutError);
}

TEST_CASE("differentiate") {
  CHECK(differentiate(poly("x^2"), kX) == poly("2*x"));
  CHECK(differentiate(poly("2*eps*x^4"), kX) == poly("8*eps*x^3"));
  CHECK(differentiate(poly("x^2"), kEps).is_zero());
  CHECK_THROWS_AS(differentiate(poly("x"), VarRef{Block::Param, 3}), ValidationError);
}

TEST_CASE("substitute_stable") {
  const Polynomial f = poly("eps*x - x*y");
  const Polynomial h1 = poly("x^2");
  CHECK(substitute_stable(f, std::span(&h1, 1)) == poly("eps*x - x^3"));
  const Polynomial zero(kProto);
  CHECK(substitute_stable(f, std::span(&zero, 1)) == poly("eps*x"));
  const Polynomial g = poly("x^2");
  const Polynomial any = poly("x^3 - 5*eps^2");
  CHECK(substitute_stable(g, std::span(&any, 1)) == g);

  const Polynomial bad = poly("y");
  CHECK_THROWS_AS(substitute_stable(f, std::span(&bad, 1)), ValidationError);
}

TEST_CASE("evaluate") {
  const Polynomial h2 = poly("x^2 - 2*eps*x^2 + 2*x^4");
  CHECK(evaluate(h2, {{0.1}, {}, {0.1}}) == doctest::Approx(0.0082).epsilon(1e-14));
  CHECK(evaluate(h2, {{1.0}, {}, {0.0}}) == doctest::Approx(3.0));
  CHECK(evaluate(poly("x*y + eps^3"), {{0.0}, {0.0}, {0.0}}) == 0.0);
  CHECK_THROWS_AS(evaluate(poly("x*y"), {{1.0}, {}, {}}), ValidationError);

  const CompiledPolynomial fast(h2);
  const double x = 0.37, e = -0.2;
  CHECK(fast(std::span(&x, 1), {}, std::span(&e, 1)) == doctest::Approx(evaluate(h2, {{x}, {}, {e}})).epsilon(1e-15));
}

TEST_CASE("series_reciprocal") {
  const OrderSpec spec = OrderSpec::make(6, 3);
  CHECK(series_reciprocal(poly("1 + 2*eps"), spec) == poly("1 - 2*eps + 4*eps^2"));
  CHECK(series_reciprocal(poly("1"), spec) == poly("1"));
  CHECK(series_reciprocal(poly("1 + 4*eps"), spec) == poly("1 - 4*eps + 16*eps^2"));
  CHECK_THROWS_AS(series_reciprocal(poly("x + eps"), spec), ValidationError);
}

TEST_CASE("human form follows graded-lex order") {
  CHECK(to_string(poly("2*x^4 + x^2 - 2*eps*x^2")) == "x^2 - 2 * eps * x^2 + 2 * x^4");
  CHECK(to_string(poly("-2*eps*x^2")) == "-2 * eps * x^2");
  CHECK(to_string(poly("1/3 - x")) == "1/3 - x");
  CHECK(to_string(Polynomial(kProto)) == "0");
}

// ---------------------------------------------------------------------------
// Properties on random small polynomials.

TEST_CASE("ring axioms") {
  std::mt19937 rng(7);
  const Layout dims{2, 1, 2};
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = test::random_polynomial(rng, dims, 3, 4);
    const auto b = test::random_polynomial(rng, dims, 3, 4);
    const auto c = test::random_polynomial(rng, dims, 3, 4);
    REQUIRE(a + b == b + a);
    REQUIRE(a * b == b * a);
    REQUIRE((a + b) + c == a + (b + c));
    REQUIRE((a * b) * c == a * (b * c));
    REQUIRE(a * (b + c) == a * b + a * c);
    REQUIRE((a - a).is_zero());
  }
}

TEST_CASE("differentiate is linear and obeys Leibniz") {
  std::mt19937 rng(11);
  const Layout dims{2, 1, 2};
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = test::random_polynomial(rng, dims, 4, 5);
    const auto b = test::random_polynomial(rng, dims, 4, 5);
    for (VarRef v : {VarRef{Block::Centre, 0}, VarRef{Block::Centre, 1}, VarRef{Block::Param, 1}}) {
      REQUIRE(differentiate(a + b * Rational(3, 2), v) == differentiate(a, v) + differentiate(b, v) * Rational(3, 2));
      REQUIRE(differentiate(a * b, v) == differentiate(a, v) * b + a * differentiate(b, v));
    }
  }
}

TEST_CASE("substitute_stable is a ring homomorphism") {
  std::mt19937 rng(13);
  const Layout dims{1, 2, 1};
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = test::random_polynomial(rng, dims, 3, 4);
    const auto b = test::random_polynomial(rng, dims, 3, 4);
    const std::vector<Polynomial> phi{test::random_polynomial(rng, dims, 2, 3, true),
                                      test::random_polynomial(rng, dims, 2, 3, true)};
    REQUIRE(substitute_stable(a + b, phi) == substitute_stable(a, phi) + substitute_stable(b, phi));
    REQUIRE(substitute_stable(a * b, phi) == substitute_stable(a, phi) * substitute_stable(b, phi));
    REQUIRE(substitute_stable(a, phi).y_free());
  }
}

TEST_CASE("filtered arithmetic matches filtering afterwards") {
  std::mt19937 rng(17);
  const Layout dims{1, 2, 1};
  const OrderSpec spec = OrderSpec::make(4, 3);
  const MonomialFilter keep = [&](const Monomial& m) { return m.y_free() && is_kept(m, spec); };
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = test::random_polynomial(rng, dims, 3, 4, true);
    const auto b = test::random_polynomial(rng, dims, 3, 4, true);
    REQUIRE(multiply(a, b, keep) == filter_terms(a * b, keep));
    const auto g = test::random_polynomial(rng, dims, 4, 5);
    const std::vector<Polynomial> phi{a, b};
    REQUIRE(substitute_stable(g, phi, keep) == filter_terms(substitute_stable(g, phi), keep));
  }
}

TEST_CASE("derivative agrees with central differences to second order") {
  std::mt19937 rng(19);
  const Layout dims{2, 1, 1};
  int checked = 0;
  for (int trial = 0; trial < 50; ++trial) {
    Polynomial p = test::random_polynomial(rng, dims, 5, 6);
    p.add_term(Monomial{{4u + trial % 2, 1}, {0}, {0}}, Rational(1 + trial % 3));
    const Point pt{{0.3, -0.7}, {0.5}, {0.9}};
    const double exact = evaluate(differentiate(p, {Block::Centre, 0}), pt);
    auto fd = [&](double h) {
      Point lo = pt, hi = pt;
      lo.x[0] -= h;
      hi.x[0] += h;
      return (evaluate(p, hi) - evaluate(p, lo)) / (2 * h);
    };
    const double e1 = std::abs(fd(1e-2) - exact);
    const double e2 = std::abs(fd(5e-3) - exact);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
    ++checked;
  }
  CHECK(checked == 50);
}
