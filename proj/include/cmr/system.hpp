#pragma once

#include "cmr/layout.hpp"
#include "cmr/polynomial.hpp"

#include <complex>
#include <string>
#include <string_view>
#include <vector>

namespace cmr {

/// Dense row-major matrix of exact rationals.
class RationalMatrix {
public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

  static RationalMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_.at(i * cols_ + j); }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_.at(i * cols_ + j); }

  bool is_zero() const;

  /// Exact Gauss-Jordan inverse. Throws SolverError when singular.
  RationalMatrix inverse() const;

  friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// x' = A x + f(x, y, eps),  y' = B y + g(x, y, eps).
///
/// Parameters are adjoined implicitly (eps' = 0 is never stored). Every term
/// of f and g has total degree >= 2 in (x, y, eps), so f and g vanish at the
/// origin together with their first derivatives. Terms such as eps * x belong
/// to f, keeping A constant.
struct CentreSystem {
  VariableLayout names;
  RationalMatrix A;
  RationalMatrix B;
  std::vector<Polynomial> f;
  std::vector<Polynomial> g;

  Layout dims() const { return names.dims(); }

  /// Checks shapes, layouts and the degree >= 2 invariant. Throws ValidationError.
  void validate() const;

  /// (A x)_i + f_i, the full right side of the i-th centre equation.
  Polynomial centre_rhs(std::size_t i) const;
  /// (B y)_j + g_j.
  Polynomial stable_rhs(std::size_t j) const;

  friend bool operator==(const CentreSystem&, const CentreSystem&) = default;
};

/// Parses the sectioned system format:
///
///     [centre]
///     x' = eps*x - x*y
///     [stable]
///     y' = -y + x^2      # comments run to end of line
///     [params]
///     eps
///
/// Syntax errors and undeclared names raise ParseError with a position.
/// Linear cross-coupling, constant terms and linear parameter forcing raise
/// ValidationError.
CentreSystem parse_system(std::string_view text);

/// Writes a system back in the format read by parse_system.
std::string serialize_system(const CentreSystem& sys);

/// Parses a single right-hand-side expression over the given names.
Polynomial parse_expression(std::string_view text, const VariableLayout& names);

struct SpectrumReport {
  std::vector<std::complex<double>> eigenvalues_a;
  std::vector<std::complex<double>> eigenvalues_b;
  double max_abs_re_a = 0.0;
  double max_re_b = 0.0;
  double tol = 0.0;
  bool pass = false;
};

inline constexpr double kDefaultSpectrumTol = 1e-9;
inline constexpr std::size_t kDefaultDimensionCap = 16;

/// Numerical eigenvalues of A and B. Passes iff max |Re eig(A)| <= tol and
/// max Re eig(B) <= -tol. Throws ValidationError above the dimension cap and
/// SpectrumError if the QR iteration does not converge.
SpectrumReport validate_spectrum(const CentreSystem& sys, double tol = kDefaultSpectrumTol,
                                 std::size_t dimension_cap = kDefaultDimensionCap);

}  // namespace cmr
