#pragma once

// Shared fixtures and generators for the test suites.

#include "cmr/manifold.hpp"
#include "cmr/system.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <string>

namespace cmr::test {

inline std::string data_path(const std::string& name) { return std::string(CMR_DATA_DIR) + "/" + name; }

inline std::string read_data(const std::string& name) {
  std::ifstream in(data_path(name));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline CentreSystem prototype() { return parse_system(read_data("prototype.cm")); }

/// Polynomial over the prototype names (x, y, eps).
inline Polynomial poly(const std::string& text) {
  return parse_expression(text, VariableLayout{{"x"}, {"y"}, {"eps"}});
}

inline Monomial mono(std::vector<unsigned> x, std::vector<unsigned> y, std::vector<unsigned> eps) {
  return {std::move(x), std::move(y), std::move(eps)};
}

/// Random sparse polynomial with small integer or half-integer coefficients.
inline Polynomial random_polynomial(std::mt19937& rng, const Layout& dims, unsigned max_degree, unsigned max_terms,
                                    bool y_free = false) {
  std::uniform_int_distribution<int> coeff(-3, 3), half(1, 2), deg(0, static_cast<int>(max_degree));
  std::uniform_int_distribution<unsigned> nterms(0, max_terms);
  Polynomial p(dims);
  const unsigned count = nterms(rng);
  for (unsigned t = 0; t < count; ++t) {
    Monomial m = Monomial::one(dims);
    int budget = deg(rng);
    while (budget-- > 0) {
      const std::size_t slots = dims.m + (y_free ? 0 : dims.n) + dims.l;
      std::size_t k = std::uniform_int_distribution<std::size_t>(0, slots - 1)(rng);
      if (k < dims.m) {
        ++m.x[k];
        continue;
      }
      k -= dims.m;
      if (!y_free && k < dims.n) {
        ++m.y[k];
        continue;
      }
      if (!y_free) k -= dims.n;
      ++m.eps[k];
    }
    p.add_term(m, make_rational(coeff(rng), half(rng)));
  }
  return p;
}

/// Random system in standard form with exactly known spectra:
///  - A is zero, a rotation [[0, a], [-a, 0]], or nilpotent [[0, a], [0, 0]];
///  - B is upper triangular with diagonal in {-1, -2, -3};
///  - f, g have degree 2..3 terms with coefficients in [-3, 3];
///  - every term of f contains a centre variable, so x = 0 stays invariant
///    and truncating in x is consistent (see solve_graded).
inline CentreSystem random_system(std::mt19937& rng, std::size_t max_m = 2, std::size_t max_n = 2, std::size_t max_l = 2) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const Layout dims{static_cast<std::size_t>(pick(1, static_cast<int>(max_m))),
                    static_cast<std::size_t>(pick(1, static_cast<int>(max_n))),
                    static_cast<std::size_t>(pick(0, static_cast<int>(max_l)))};
  CentreSystem sys{VariableLayout::default_names(dims), RationalMatrix(dims.m, dims.m), RationalMatrix(dims.n, dims.n), {}, {}};
  if (dims.m == 2) {
    const int shape = pick(0, 2);
    const int a = pick(1, 3);
    if (shape == 1) {
      sys.A(0, 1) = a;
      sys.A(1, 0) = -a;
    } else if (shape == 2) {
      sys.A(0, 1) = a;
    }
  }
  for (std::size_t i = 0; i < dims.n; ++i) {
    sys.B(i, i) = -pick(1, 3);
    for (std::size_t j = i + 1; j < dims.n; ++j) sys.B(i, j) = pick(-3, 3);
  }

  auto random_term = [&](bool need_x) {
    Monomial m = Monomial::one(dims);
    const int degree = pick(2, 3);
    int placed = 0;
    if (need_x) {
      ++m.x[static_cast<std::size_t>(pick(0, static_cast<int>(dims.m) - 1))];
      ++placed;
    }
    const int slots = static_cast<int>(dims.m + dims.n + dims.l);
    for (; placed < degree; ++placed) {
      auto k = static_cast<std::size_t>(pick(0, slots - 1));
      if (k < dims.m)
        ++m.x[k];
      else if (k < dims.m + dims.n)
        ++m.y[k - dims.m];
      else
        ++m.eps[k - dims.m - dims.n];
    }
    return m;
  };
  for (std::size_t i = 0; i < dims.m; ++i) {
    Polynomial p(dims);
    for (int t = pick(0, 3); t > 0; --t) p.add_term(random_term(true), Rational(pick(-3, 3)));
    sys.f.push_back(p);
  }
  for (std::size_t j = 0; j < dims.n; ++j) {
    Polynomial p(dims);
    for (int t = pick(1, 3); t > 0; --t) p.add_term(random_term(false), Rational(pick(-3, 3)));
    sys.g.push_back(p);
  }
  sys.validate();
  return sys;
}

}  // namespace cmr::test
