#pragma once

#include "cmr/layout.hpp"
#include "cmr/rational.hpp"

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace cmr {

/// Exponent vectors over the centre, stable and parameter blocks.
struct Monomial {
  std::vector<unsigned> x;
  std::vector<unsigned> y;
  std::vector<unsigned> eps;

  static Monomial one(const Layout& dims);
  static Monomial variable(const Layout& dims, VarRef v);

  Layout layout() const { return {x.size(), y.size(), eps.size()}; }

  unsigned x_degree() const;
  unsigned y_degree() const;
  unsigned eps_degree() const;
  unsigned total_degree() const { return x_degree() + y_degree() + eps_degree(); }
  bool y_free() const { return y_degree() == 0; }

  unsigned exponent(VarRef v) const;

  friend Monomial operator*(const Monomial& a, const Monomial& b);
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Graded-lexicographic order: total degree, then the x block, the y block
/// and the eps block, each compared lexicographically.
struct GradedLex {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

using MonomialFilter = std::function<bool(const Monomial&)>;

/// Sparse polynomial with exact rational coefficients. No stored
/// coefficient is ever zero, so equality of term maps is equality of
/// polynomials.
class Polynomial {
public:
  using TermMap = std::map<Monomial, Rational, GradedLex>;

  explicit Polynomial(const Layout& dims) : dims_(dims) {}

  static Polynomial constant(const Layout& dims, const Rational& c);
  static Polynomial variable(const Layout& dims, VarRef v);
  static Polynomial term(const Monomial& mono, const Rational& c);

  const Layout& layout() const { return dims_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  Rational coefficient(const Monomial& mono) const;

  /// Adds c * mono, dropping the entry if it cancels.
  void add_term(const Monomial& mono, const Rational& c);

  /// Highest total degree; 0 for the zero polynomial.
  unsigned degree() const;
  /// Lowest total degree; 0 for the zero polynomial.
  unsigned min_degree() const;
  bool y_free() const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Rational& c);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(Polynomial a) { return a *= Rational(-1); }
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.dims_ == b.dims_ && a.terms_ == b.terms_;
  }

private:
  void check_layout(const Polynomial& other) const;

  Layout dims_;
  TermMap terms_;
};

/// Product restricted to monomials accepted by keep. Rejected products are
/// never formed, which keeps truncated series arithmetic cheap.
Polynomial multiply(const Polynomial& a, const Polynomial& b, const MonomialFilter& keep);

/// Keeps only the terms accepted by keep.
Polynomial filter_terms(const Polynomial& p, const MonomialFilter& keep);

Polynomial differentiate(const Polynomial& p, VarRef v);

/// Replaces every stable variable y_j by phi[j] and expands. Each phi[j] must be y-free.
Polynomial substitute_stable(const Polynomial& p, std::span<const Polynomial> phi);
Polynomial substitute_stable(const Polynomial& p, std::span<const Polynomial> phi, const MonomialFilter& keep);

/// Floating-point values for each variable group. A group may be shorter
/// than the layout as long as the polynomial never uses the missing entries.
struct Point {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> eps;
};

double evaluate(const Polynomial& p, const Point& point);

/// Evaluation-only snapshot of a polynomial with double coefficients, for
/// the inner loops of numerical integration.
class CompiledPolynomial {
public:
  CompiledPolynomial() = default;
  explicit CompiledPolynomial(const Polynomial& p);

  double operator()(std::span<const double> x, std::span<const double> y, std::span<const double> eps) const;

private:
  struct Factor {
    Block block;
    std::size_t index;
    unsigned power;
  };
  struct Term {
    double coeff;
    std::vector<Factor> factors;
  };
  std::vector<Term> terms_;
};

/// Human form, e.g. "-2 * eps * x^2". Factors are written parameters first,
/// then centre, then stable variables.
std::string to_string(const Monomial& mono, const VariableLayout& names);
std::string to_string(const Polynomial& p, const VariableLayout& names);
std::string to_string(const Polynomial& p);

}  // namespace cmr
