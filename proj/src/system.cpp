#include "cmr/system.hpp"

#include "cmr/error.hpp"

#include <algorithm>
#include <utility>

namespace cmr {

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = 1;
  return out;
}

bool RationalMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Rational& r) { return r == 0; });
}

RationalMatrix RationalMatrix::inverse() const {
  if (rows_ != cols_) throw SolverError("cannot invert a non-square matrix");
  const std::size_t n = rows_;
  RationalMatrix work = *this;
  RationalMatrix inv = identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && work(pivot, col) == 0) ++pivot;
    if (pivot == n) throw SolverError("matrix is singular");
    if (pivot != col)
      for (std::size_t k = 0; k < n; ++k) {
        std::swap(work(pivot, k), work(col, k));
        std::swap(inv(pivot, k), inv(col, k));
      }
    const Rational scale = 1 / work(col, col);
    for (std::size_t k = 0; k < n; ++k) {
      work(col, k) *= scale;
      inv(col, k) *= scale;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || work(r, col) == 0) continue;
      const Rational factor = work(r, col);
      for (std::size_t k = 0; k < n; ++k) {
        work(r, k) -= factor * work(col, k);
        inv(r, k) -= factor * inv(col, k);
      }
    }
  }
  return inv;
}

void CentreSystem::validate() const {
  names.validate();
  const Layout d = dims();
  if (A.rows() != d.m || A.cols() != d.m) throw ValidationError("A must be m x m");
  if (B.rows() != d.n || B.cols() != d.n) throw ValidationError("B must be n x n");
  if (f.size() != d.m) throw ValidationError("f must have one component per centre variable");
  if (g.size() != d.n) throw ValidationError("g must have one component per stable variable");
  for (const auto* group : {&f, &g})
    for (const auto& poly : *group) {
      if (poly.layout() != d) throw LayoutError("nonlinear term layout does not match the system");
      if (!poly.is_zero() && poly.min_degree() < 2)
        throw ValidationError("nonlinear terms must have total degree >= 2");
    }
}

Polynomial CentreSystem::centre_rhs(std::size_t i) const {
  Polynomial out = f.at(i);
  for (std::size_t k = 0; k < dims().m; ++k)
    out += Polynomial::variable(dims(), {Block::Centre, k}) * A(i, k);
  return out;
}

Polynomial CentreSystem::stable_rhs(std::size_t j) const {
  Polynomial out = g.at(j);
  for (std::size_t k = 0; k < dims().n; ++k)
    out += Polynomial::variable(dims(), {Block::Stable, k}) * B(j, k);
  return out;
}

}  // namespace cmr
