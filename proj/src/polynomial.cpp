#include "cmr/polynomial.hpp"

#include "cmr/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace cmr {

namespace {

unsigned sum(const std::vector<unsigned>& v) { return std::accumulate(v.begin(), v.end(), 0u); }

std::vector<unsigned> add(const std::vector<unsigned>& a, const std::vector<unsigned>& b) {
  std::vector<unsigned> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

std::vector<unsigned>& block_of(Monomial& mono, Block block) {
  switch (block) {
    case Block::Centre: return mono.x;
    case Block::Stable: return mono.y;
    case Block::Param: break;
  }
  return mono.eps;
}

std::size_t block_size(const Layout& dims, Block block) {
  switch (block) {
    case Block::Centre: return dims.m;
    case Block::Stable: return dims.n;
    case Block::Param: break;
  }
  return dims.l;
}

void check_var(const Layout& dims, VarRef v) {
  if (v.index >= block_size(dims, v.block)) throw ValidationError("unknown variable index " + std::to_string(v.index));
}

}  // namespace

// ---------------------------------------------------------------------------
// Monomial

Monomial Monomial::one(const Layout& dims) {
  return {std::vector<unsigned>(dims.m, 0), std::vector<unsigned>(dims.n, 0), std::vector<unsigned>(dims.l, 0)};
}

Monomial Monomial::variable(const Layout& dims, VarRef v) {
  check_var(dims, v);
  Monomial mono = one(dims);
  block_of(mono, v.block)[v.index] = 1;
  return mono;
}

unsigned Monomial::x_degree() const { return sum(x); }
unsigned Monomial::y_degree() const { return sum(y); }
unsigned Monomial::eps_degree() const { return sum(eps); }

unsigned Monomial::exponent(VarRef v) const {
  switch (v.block) {
    case Block::Centre: return x.at(v.index);
    case Block::Stable: return y.at(v.index);
    case Block::Param: break;
  }
  return eps.at(v.index);
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  if (a.layout() != b.layout()) throw LayoutError("monomial layout mismatch");
  return {add(a.x, b.x), add(a.y, b.y), add(a.eps, b.eps)};
}

bool GradedLex::operator()(const Monomial& a, const Monomial& b) const {
  const unsigned da = a.total_degree();
  const unsigned db = b.total_degree();
  if (da != db) return da < db;
  if (a.x != b.x) return a.x < b.x;
  if (a.y != b.y) return a.y < b.y;
  return a.eps < b.eps;
}

// ---------------------------------------------------------------------------
// Polynomial

Polynomial Polynomial::constant(const Layout& dims, const Rational& c) {
  Polynomial p(dims);
  p.add_term(Monomial::one(dims), c);
  return p;
}

Polynomial Polynomial::variable(const Layout& dims, VarRef v) {
  Polynomial p(dims);
  p.add_term(Monomial::variable(dims, v), Rational(1));
  return p;
}

Polynomial Polynomial::term(const Monomial& mono, const Rational& c) {
  Polynomial p(mono.layout());
  p.add_term(mono, c);
  return p;
}

Rational Polynomial::coefficient(const Monomial& mono) const {
  const auto it = terms_.find(mono);
  return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::add_term(const Monomial& mono, const Rational& c) {
  if (mono.layout() != dims_) throw LayoutError("term layout does not match polynomial layout");
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(mono, c);
  if (inserted) return;
  it->second += c;
  if (it->second == 0) terms_.erase(it);
}

unsigned Polynomial::degree() const { return terms_.empty() ? 0 : terms_.rbegin()->first.total_degree(); }

unsigned Polynomial::min_degree() const { return terms_.empty() ? 0 : terms_.begin()->first.total_degree(); }

bool Polynomial::y_free() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.first.y_free(); });
}

void Polynomial::check_layout(const Polynomial& other) const {
  if (dims_ != other.dims_) throw LayoutError("polynomial layout mismatch");
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  check_layout(other);
  for (const auto& [mono, c] : other.terms_) add_term(mono, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  check_layout(other);
  for (const auto& [mono, c] : other.terms_) add_term(mono, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& entry : terms_) entry.second *= c;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) { return multiply(a, b, {}); }

Polynomial multiply(const Polynomial& a, const Polynomial& b, const MonomialFilter& keep) {
  if (a.layout() != b.layout()) throw LayoutError("polynomial layout mismatch");
  Polynomial out(a.layout());
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      Monomial prod = ma * mb;
      if (keep && !keep(prod)) continue;
      out.add_term(prod, ca * cb);
    }
  return out;
}

Polynomial filter_terms(const Polynomial& p, const MonomialFilter& keep) {
  Polynomial out(p.layout());
  for (const auto& [mono, c] : p.terms())
    if (keep(mono)) out.add_term(mono, c);
  return out;
}

Polynomial differentiate(const Polynomial& p, VarRef v) {
  check_var(p.layout(), v);
  Polynomial out(p.layout());
  for (const auto& [mono, c] : p.terms()) {
    const unsigned e = mono.exponent(v);
    if (e == 0) continue;
    Monomial lowered = mono;
    block_of(lowered, v.block)[v.index] = e - 1;
    out.add_term(lowered, c * e);
  }
  return out;
}

Polynomial substitute_stable(const Polynomial& p, std::span<const Polynomial> phi) { return substitute_stable(p, phi, {}); }

// keep must describe a divisor-closed set (every divisor of a kept monomial
// is kept); intermediate powers of phi are then safely filtered as well.
Polynomial substitute_stable(const Polynomial& p, std::span<const Polynomial> phi, const MonomialFilter& keep) {
  const Layout dims = p.layout();
  if (phi.size() != dims.n) throw LayoutError("substitution needs one polynomial per stable variable");
  for (const auto& entry : phi) {
    if (entry.layout() != dims) throw LayoutError("substituted polynomial has a different layout");
    if (!entry.y_free()) throw ValidationError("substituted polynomial mentions a stable variable");
  }

  // powers[j][k] = phi_j^k, grown on demand.
  std::vector<std::vector<Polynomial>> powers(dims.n);
  auto power = [&](std::size_t j, unsigned k) -> const Polynomial& {
    auto& cache = powers[j];
    if (cache.empty()) cache.push_back(Polynomial::constant(dims, Rational(1)));
    while (cache.size() <= k) cache.push_back(multiply(cache.back(), phi[j], keep));
    return cache[k];
  };

  Polynomial out(dims);
  for (const auto& [mono, c] : p.terms()) {
    Monomial rest = mono;
    std::fill(rest.y.begin(), rest.y.end(), 0u);
    if (keep && !keep(rest)) continue;
    Polynomial acc = Polynomial::term(rest, c);
    for (std::size_t j = 0; j < dims.n && !acc.is_zero(); ++j)
      if (mono.y[j] > 0) acc = multiply(acc, power(j, mono.y[j]), keep);
    out += acc;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

double lookup(const std::vector<double>& values, std::size_t i, const char* group) {
  if (i >= values.size())
    throw ValidationError(std::string("evaluation point has no value for ") + group + " variable " + std::to_string(i));
  return values[i];
}

}  // namespace

double evaluate(const Polynomial& p, const Point& point) {
  double total = 0.0;
  for (const auto& [mono, c] : p.terms()) {
    double term = c.get_d();
    for (std::size_t i = 0; i < mono.x.size(); ++i)
      if (mono.x[i]) term *= std::pow(lookup(point.x, i, "centre"), mono.x[i]);
    for (std::size_t i = 0; i < mono.y.size(); ++i)
      if (mono.y[i]) term *= std::pow(lookup(point.y, i, "stable"), mono.y[i]);
    for (std::size_t i = 0; i < mono.eps.size(); ++i)
      if (mono.eps[i]) term *= std::pow(lookup(point.eps, i, "parameter"), mono.eps[i]);
    total += term;
  }
  return total;
}

CompiledPolynomial::CompiledPolynomial(const Polynomial& p) {
  for (const auto& [mono, c] : p.terms()) {
    Term term{c.get_d(), {}};
    for (std::size_t i = 0; i < mono.x.size(); ++i)
      if (mono.x[i]) term.factors.push_back({Block::Centre, i, mono.x[i]});
    for (std::size_t i = 0; i < mono.y.size(); ++i)
      if (mono.y[i]) term.factors.push_back({Block::Stable, i, mono.y[i]});
    for (std::size_t i = 0; i < mono.eps.size(); ++i)
      if (mono.eps[i]) term.factors.push_back({Block::Param, i, mono.eps[i]});
    terms_.push_back(std::move(term));
  }
}

double CompiledPolynomial::operator()(std::span<const double> x, std::span<const double> y,
                                      std::span<const double> eps) const {
  double total = 0.0;
  for (const auto& term : terms_) {
    double value = term.coeff;
    for (const auto& f : term.factors) {
      const double base = f.block == Block::Centre ? x[f.index] : f.block == Block::Stable ? y[f.index] : eps[f.index];
      double pw = base;
      for (unsigned k = 1; k < f.power; ++k) pw *= base;
      value *= pw;
    }
    total += value;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Rendering

std::string to_string(const Monomial& mono, const VariableLayout& names) {
  std::vector<std::string> factors;
  auto emit = [&](const std::vector<unsigned>& exps, const std::vector<std::string>& labels) {
    for (std::size_t i = 0; i < exps.size(); ++i) {
      if (exps[i] == 0) continue;
      factors.push_back(exps[i] == 1 ? labels.at(i) : labels.at(i) + "^" + std::to_string(exps[i]));
    }
  };
  emit(mono.eps, names.params);
  emit(mono.x, names.centre);
  emit(mono.y, names.stable);
  std::string out;
  for (std::size_t i = 0; i < factors.size(); ++i) out += (i ? " * " : "") + factors[i];
  return out.empty() ? "1" : out;
}

std::string to_string(const Polynomial& p, const VariableLayout& names) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [mono, c] : p.terms()) {
    const bool negative = c < 0;
    const Rational mag = negative ? Rational(-c) : c;
    if (first)
      os << (negative ? "-" : "");
    else
      os << (negative ? " - " : " + ");
    first = false;
    const bool is_one = mono.total_degree() == 0;
    if (is_one)
      os << to_display_string(mag);
    else if (mag == 1)
      os << to_string(mono, names);
    else
      os << to_display_string(mag) << " * " << to_string(mono, names);
  }
  return os.str();
}

std::string to_string(const Polynomial& p) { return to_string(p, VariableLayout::default_names(p.layout())); }

}  // namespace cmr
