#include "cmr/order.hpp"

#include "cmr/error.hpp"

#include <functional>

namespace cmr {

namespace {

void require_y_free(const Monomial& mono) {
  if (!mono.y_free()) throw ValidationError("order calculus is defined on (x, eps) only; monomial has a stable exponent");
}

Rational weighted_sum(const std::vector<unsigned>& exps, const std::vector<Rational>& weights) {
  Rational total = 0;
  for (std::size_t i = 0; i < exps.size(); ++i)
    if (exps[i]) total += (weights.empty() ? Rational(1) : weights.at(i)) * exps[i];
  return total;
}

// Exponent vectors e over `count` variables with sum_i w_i e_i < bound.
void enumerate_block(std::size_t count, const std::vector<Rational>& weights, const Rational& bound,
                     std::vector<std::vector<unsigned>>& out) {
  std::vector<unsigned> current(count, 0);
  std::function<void(std::size_t, Rational)> rec = [&](std::size_t i, Rational used) {
    if (i == count) {
      out.push_back(current);
      return;
    }
    const Rational w = weights.empty() ? Rational(1) : weights[i];
    for (unsigned e = 0; used + w * e < bound; ++e) {
      current[i] = e;
      rec(i + 1, used + w * e);
    }
    current[i] = 0;
  };
  rec(0, Rational(0));
}

}  // namespace

OrderSpec OrderSpec::make(unsigned q, unsigned p, std::vector<Rational> xweights, std::vector<Rational> eweights) {
  OrderSpec spec{q, p, std::move(xweights), std::move(eweights)};
  spec.validate();
  return spec;
}

void OrderSpec::validate() const {
  if (q <= 1) throw ValidationError("order in centre variables must satisfy q > 1, got " + std::to_string(q));
  if (p < 1) throw ValidationError("order in parameters must satisfy p >= 1, got " + std::to_string(p));
  for (const auto* ws : {&xweights, &eweights})
    for (const auto& w : *ws)
      if (w <= 0) throw ValidationError("order weights must be strictly positive");
}

void OrderSpec::check_layout(const Layout& dims) const {
  if (!xweights.empty() && xweights.size() != dims.m)
    throw ValidationError("x-weights has " + std::to_string(xweights.size()) + " entries, layout has " +
                          std::to_string(dims.m) + " centre variables");
  if (!eweights.empty() && eweights.size() != dims.l)
    throw ValidationError("eps-weights has " + std::to_string(eweights.size()) + " entries, layout has " +
                          std::to_string(dims.l) + " parameters");
}

Rational OrderSpec::weighted_x_degree(const Monomial& mono) const { return weighted_sum(mono.x, xweights); }

Rational OrderSpec::weighted_eps_degree(const Monomial& mono) const { return weighted_sum(mono.eps, eweights); }

OrderSpec OrderSpec::boosted(unsigned dq, unsigned dp) const {
  OrderSpec out = *this;
  out.q += dq;
  out.p += dp;
  return out;
}

bool in_error_set(const Monomial& mono, const OrderSpec& spec) {
  require_y_free(mono);
  return spec.weighted_eps_degree(mono) >= spec.p || spec.weighted_x_degree(mono) >= spec.q;
}

bool in_coupled_error_set(const Monomial& mono, unsigned p, unsigned q) {
  require_y_free(mono);
  if (p == 0 || q == 0) throw ValidationError("coupled order exponents must be positive");
  const Rational share = make_rational(mono.eps_degree(), p) + make_rational(mono.x_degree(), q);
  return share >= 1;
}

bool in_error_set(const Monomial& mono, const OrderTarget& target) {
  if (const auto* spec = std::get_if<OrderSpec>(&target)) return in_error_set(mono, *spec);
  const auto& coupled = std::get<CoupledOrder>(target);
  return in_coupled_error_set(mono, coupled.p, coupled.q);
}

Polynomial truncate(const Polynomial& poly, const OrderSpec& spec) {
  return filter_terms(poly, [&](const Monomial& m) { return is_kept(m, spec); });
}

std::vector<Monomial> kept_monomials(const Layout& dims, const OrderSpec& spec, unsigned min_degree) {
  spec.check_layout(dims);
  std::vector<std::vector<unsigned>> xs, es;
  enumerate_block(dims.m, spec.xweights, Rational(spec.q), xs);
  enumerate_block(dims.l, spec.eweights, Rational(spec.p), es);
  Polynomial::TermMap sorted;
  for (const auto& x : xs)
    for (const auto& e : es) {
      Monomial mono{x, std::vector<unsigned>(dims.n, 0), e};
      if (mono.total_degree() >= min_degree) sorted.emplace(std::move(mono), Rational(1));
    }
  std::vector<Monomial> out;
  out.reserve(sorted.size());
  for (auto& entry : sorted) out.push_back(entry.first);
  return out;
}

unsigned max_kept_degree(const Layout& dims, const OrderSpec& spec) {
  const auto monos = kept_monomials(dims, spec);
  return monos.empty() ? 0 : monos.back().total_degree();
}

OrderVerdict verify_order(const Polynomial& poly, const OrderTarget& target) {
  OrderVerdict verdict{Polynomial(poly.layout())};
  for (const auto& [mono, c] : poly.terms())
    if (!in_error_set(mono, target)) verdict.offenders.add_term(mono, c);
  return verdict;
}

Polynomial series_reciprocal(const Polynomial& p, const OrderSpec& spec) {
  if (!p.y_free()) throw ValidationError("series reciprocal needs a y-free polynomial");
  const Layout dims = p.layout();
  const Rational c0 = p.coefficient(Monomial::one(dims));
  if (c0 == 0) throw ValidationError("series reciprocal needs a nonzero constant term");
  const auto keep = [&](const Monomial& m) { return is_kept(m, spec); };

  // 1/p = (1/c0) * sum_k (-r)^k with r = p/c0 - 1; r has no constant term,
  // so each power climbs in degree and the kept set is eventually exhausted.
  Polynomial r = p * Rational(1 / c0);
  r.add_term(Monomial::one(dims), Rational(-1));
  const Polynomial minus_r = truncate(-r, spec);

  Polynomial power = truncate(Polynomial::constant(dims, Rational(1)), spec);
  Polynomial sum(dims);
  while (!power.is_zero()) {
    sum += power;
    power = multiply(power, minus_r, keep);
  }
  return sum * Rational(1 / c0);
}

}  // namespace cmr
