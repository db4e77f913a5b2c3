#pragma once

#include "cmr/polynomial.hpp"

#include <variant>
#include <vector>

namespace cmr {

/// Flexible order O(x^q, eps^p): a monomial is an error term when its
/// weighted eps-degree is at least p OR its weighted x-degree is at least q.
/// Everything else is the kept set, which is finite.
///
/// Weights default to 1. An empty weight vector means "all ones" so one
/// spec can be shared across layouts; a non-empty one must match m or l.
struct OrderSpec {
  unsigned q = 2;
  unsigned p = 1;
  std::vector<Rational> xweights;
  std::vector<Rational> eweights;

  /// Throws ValidationError unless q > 1, p >= 1 and all weights are positive.
  static OrderSpec make(unsigned q, unsigned p, std::vector<Rational> xweights = {}, std::vector<Rational> eweights = {});

  void validate() const;
  /// Weight vectors, when given, must have m and l entries.
  void check_layout(const Layout& dims) const;

  Rational x_weight(std::size_t i) const { return xweights.empty() ? Rational(1) : xweights.at(i); }
  Rational eps_weight(std::size_t i) const { return eweights.empty() ? Rational(1) : eweights.at(i); }

  Rational weighted_x_degree(const Monomial& mono) const;
  Rational weighted_eps_degree(const Monomial& mono) const;

  /// Same weights, orders raised by (dq, dp).
  OrderSpec boosted(unsigned dq, unsigned dp) const;

  friend bool operator==(const OrderSpec&, const OrderSpec&) = default;
};

/// Classical coupled order: eps^p' x^q' is an error term iff p'/p + q'/q >= 1.
/// With p = q = r this is "total degree >= r".
struct CoupledOrder {
  unsigned p = 1;
  unsigned q = 1;

  static CoupledOrder exponent(unsigned r) { return {r, r}; }

  friend bool operator==(const CoupledOrder&, const CoupledOrder&) = default;
};

using OrderTarget = std::variant<OrderSpec, CoupledOrder>;

/// Order predicates are defined on (x, eps) only; a monomial with a stable
/// exponent throws ValidationError.
bool in_error_set(const Monomial& mono, const OrderSpec& spec);
bool in_coupled_error_set(const Monomial& mono, unsigned p, unsigned q);
bool in_error_set(const Monomial& mono, const OrderTarget& target);

inline bool is_kept(const Monomial& mono, const OrderSpec& spec) { return !in_error_set(mono, spec); }

/// Drops every error-set term.
Polynomial truncate(const Polynomial& poly, const OrderSpec& spec);

/// Every y-free monomial of the kept set with total degree >= min_degree,
/// in graded-lex order.
std::vector<Monomial> kept_monomials(const Layout& dims, const OrderSpec& spec, unsigned min_degree = 0);

/// Largest total degree in the kept set (0 when it holds only the constant).
unsigned max_kept_degree(const Layout& dims, const OrderSpec& spec);

struct OrderVerdict {
  /// Terms of the checked polynomial lying outside the error set.
  Polynomial offenders;

  bool pass() const { return offenders.is_zero(); }
};

OrderVerdict verify_order(const Polynomial& poly, const OrderTarget& target);

/// Truncated power-series reciprocal: q with truncate(p * q, spec) == 1.
/// p must be y-free with a nonzero constant term.
Polynomial series_reciprocal(const Polynomial& p, const OrderSpec& spec);

}  // namespace cmr
