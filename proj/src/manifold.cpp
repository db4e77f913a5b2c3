#include "cmr/manifold.hpp"

#include "cmr/error.hpp"

#include <algorithm>
#include <map>
#include <utility>

namespace cmr {

const char* to_string(SolveMethod method) { return method == SolveMethod::Graded ? "graded" : "fixed-point"; }

namespace {

void check_phi(std::span<const Polynomial> phi, const CentreSystem& sys) {
  if (phi.size() != sys.dims().n) throw LayoutError("phi needs one component per stable variable");
  for (const auto& c : phi) {
    if (c.layout() != sys.dims()) throw LayoutError("phi layout does not match the system");
    if (!c.y_free()) throw ValidationError("phi must not depend on stable variables");
  }
}

// Centre vector field on the manifold, A x + f(x, phi, eps), one entry per x_j.
std::vector<Polynomial> centre_field(std::span<const Polynomial> phi, const CentreSystem& sys, const MonomialFilter& keep) {
  const Layout dims = sys.dims();
  std::vector<Polynomial> out;
  for (std::size_t j = 0; j < dims.m; ++j) {
    Polynomial v = substitute_stable(sys.f[j], phi, keep);
    for (std::size_t k = 0; k < dims.m; ++k)
      if (sys.A(j, k) != 0) v += Polynomial::variable(dims, {Block::Centre, k}) * sys.A(j, k);
    out.push_back(keep ? filter_terms(v, keep) : std::move(v));
  }
  return out;
}

// sum_j d(phi_i)/dx_j * field_j
Polynomial directional(const Polynomial& phi_i, const std::vector<Polynomial>& field, const MonomialFilter& keep) {
  Polynomial out(phi_i.layout());
  for (std::size_t j = 0; j < field.size(); ++j) {
    const Polynomial d = differentiate(phi_i, {Block::Centre, j});
    if (!d.is_zero()) out += multiply(d, field[j], keep);
  }
  return out;
}

std::size_t bit_size(const Rational& r) {
  return mpz_sizeinbase(r.get_num_mpz_t(), 2) + mpz_sizeinbase(r.get_den_mpz_t(), 2);
}

// Solves M z = rhs exactly. Pivots are the smallest-bit-size nonzero entry in
// each column. Returns false when M is singular.
bool solve_exact(std::vector<std::vector<Rational>>& M, std::vector<Rational>& rhs) {
  const std::size_t n = M.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = n;
    for (std::size_t r = col; r < n; ++r)
      if (M[r][col] != 0 && (pivot == n || bit_size(M[r][col]) < bit_size(M[pivot][col]))) pivot = r;
    if (pivot == n) return false;
    std::swap(M[pivot], M[col]);
    std::swap(rhs[pivot], rhs[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      if (M[r][col] == 0) continue;
      const Rational factor = M[r][col] / M[col][col];
      for (std::size_t k = col; k < n; ++k)
        if (M[col][k] != 0) M[r][k] -= factor * M[col][k];
      rhs[r] -= factor * rhs[col];
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    Rational acc = rhs[i];
    for (std::size_t k = i + 1; k < n; ++k)
      if (M[i][k] != 0) acc -= M[i][k] * rhs[k];
    rhs[i] = acc / M[i][i];
  }
  return true;
}

// A may only couple centre variables of equal weight; otherwise delta_x (A x)
// would move terms between the kept set and the error set.
void check_weights_against_a(const CentreSystem& sys, const OrderSpec& spec) {
  const std::size_t m = sys.dims().m;
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t k = 0; k < m; ++k)
      if (j != k && sys.A(j, k) != 0 && spec.x_weight(j) != spec.x_weight(k))
        throw ValidationError("x-weights must agree on centre variables coupled by A (x" + std::to_string(j + 1) +
                              " and x" + std::to_string(k + 1) + ")");
}

}  // namespace

std::vector<Polynomial> apply_H(std::span<const Polynomial> phi, const CentreSystem& sys) { return apply_H(phi, sys, {}); }

std::vector<Polynomial> apply_H(std::span<const Polynomial> phi, const CentreSystem& sys, const MonomialFilter& keep) {
  check_phi(phi, sys);
  const Layout dims = sys.dims();
  const auto field = centre_field(phi, sys, keep);
  std::vector<Polynomial> out;
  for (std::size_t i = 0; i < dims.n; ++i) {
    Polynomial r = directional(phi[i], field, keep);
    for (std::size_t k = 0; k < dims.n; ++k)
      if (sys.B(i, k) != 0) r -= phi[k] * sys.B(i, k);
    r -= substitute_stable(sys.g[i], phi, keep);
    out.push_back(keep ? filter_terms(r, keep) : std::move(r));
  }
  return out;
}

ManifoldApprox solve_graded(const CentreSystem& sys, const OrderSpec& spec) {
  spec.validate();
  const Layout dims = sys.dims();
  spec.check_layout(dims);
  check_weights_against_a(sys, spec);

  std::vector<Polynomial> phi(dims.n, Polynomial(dims));

  // The homological operator preserves the eps exponents and the x-degree,
  // so each degree splits into independent (eps exponents, x-degree) blocks.
  std::map<unsigned, std::map<std::pair<std::vector<unsigned>, unsigned>, std::vector<Monomial>>> levels;
  for (auto& mono : kept_monomials(dims, spec, 2))
    levels[mono.total_degree()][{mono.eps, mono.x_degree()}].push_back(mono);

  for (const auto& [degree, blocks] : levels) {
    // Known part of the degree-d residual. phi holds only degrees < d here,
    // and f, g are at least quadratic, so the unknown degree-d layer enters
    // the degree-d residual only through the homological operator.
    const unsigned d = degree;
    const auto known = apply_H(phi, sys, [&](const Monomial& m) { return m.total_degree() <= d && is_kept(m, spec); });

    for (const auto& [key, monos] : blocks) {
      std::map<Monomial, std::size_t, GradedLex> slot;
      for (std::size_t u = 0; u < monos.size(); ++u) slot.emplace(monos[u], u);
      const std::size_t width = monos.size();
      const std::size_t size = dims.n * width;
      auto index = [&](std::size_t comp, std::size_t u) { return comp * width + u; };

      std::vector<std::vector<Rational>> M(size, std::vector<Rational>(size, Rational(0)));
      std::vector<Rational> rhs(size, Rational(0));
      for (std::size_t i = 0; i < dims.n; ++i)
        for (std::size_t u = 0; u < width; ++u) {
          const Monomial& mono = monos[u];
          const std::size_t col = index(i, u);
          // d/dx_j (x^a) * (A x)_j
          for (std::size_t j = 0; j < dims.m; ++j) {
            if (mono.x[j] == 0) continue;
            for (std::size_t k = 0; k < dims.m; ++k) {
              if (sys.A(j, k) == 0) continue;
              Monomial image = mono;
              image.x[j] -= 1;
              image.x[k] += 1;
              M[index(i, slot.at(image))][col] += sys.A(j, k) * mono.x[j];
            }
          }
          for (std::size_t k = 0; k < dims.n; ++k)
            if (sys.B(k, i) != 0) M[index(k, u)][col] -= sys.B(k, i);
          rhs[col] = -known[i].coefficient(mono);
        }

      if (!solve_exact(M, rhs))
        throw SolverError("resonance detected: spectral hypotheses violated (homological block at degree " +
                          std::to_string(d) + " is singular)");
      for (std::size_t i = 0; i < dims.n; ++i)
        for (std::size_t u = 0; u < width; ++u) phi[i].add_term(monos[u], rhs[index(i, u)]);
    }
  }
  return {std::move(phi), spec, SolveMethod::Graded, 0};
}

std::vector<Polynomial> fixed_point_step(const CentreSystem& sys, std::span<const Polynomial> phi, const OrderSpec& spec,
                                         const RationalMatrix& b_inverse) {
  check_phi(phi, sys);
  const Layout dims = sys.dims();
  const MonomialFilter keep = [&](const Monomial& m) { return is_kept(m, spec); };
  const auto field = centre_field(phi, sys, keep);
  std::vector<Polynomial> inner;
  for (std::size_t i = 0; i < dims.n; ++i)
    inner.push_back(directional(phi[i], field, keep) - substitute_stable(sys.g[i], phi, keep));
  std::vector<Polynomial> out(dims.n, Polynomial(dims));
  for (std::size_t i = 0; i < dims.n; ++i)
    for (std::size_t k = 0; k < dims.n; ++k)
      if (b_inverse(i, k) != 0) out[i] += inner[k] * b_inverse(i, k);
  for (auto& c : out) c = truncate(c, spec);
  return out;
}

namespace {

RationalMatrix invert_b(const CentreSystem& sys) {
  try {
    return sys.B.inverse();
  } catch (const SolverError&) {
    throw SolverError("B is singular; fixed-point iteration needs an invertible stable block");
  }
}

}  // namespace

ManifoldApprox fixed_point_iterate(const CentreSystem& sys, const OrderSpec& spec, unsigned count) {
  spec.validate();
  spec.check_layout(sys.dims());
  const RationalMatrix b_inverse = invert_b(sys);
  std::vector<Polynomial> phi(sys.dims().n, Polynomial(sys.dims()));
  for (unsigned it = 0; it < count; ++it) phi = fixed_point_step(sys, phi, spec, b_inverse);
  return {std::move(phi), spec, SolveMethod::FixedPoint, count};
}

ManifoldApprox iterate_fixed_point(const CentreSystem& sys, const OrderSpec& spec, std::optional<unsigned> max_iter) {
  spec.validate();
  spec.check_layout(sys.dims());
  const unsigned limit = max_iter.value_or(std::max(max_kept_degree(sys.dims(), spec), (spec.q - 1) + (spec.p - 1)));
  if (limit < 1) throw ValidationError("max_iter must be at least 1");
  const RationalMatrix b_inverse = invert_b(sys);
  std::vector<Polynomial> phi(sys.dims().n, Polynomial(sys.dims()));
  for (unsigned it = 1; it <= limit; ++it) {
    auto next = fixed_point_step(sys, phi, spec, b_inverse);
    if (next == phi) return {std::move(next), spec, SolveMethod::FixedPoint, it};
    phi = std::move(next);
  }
  throw SolverError("fixed-point iteration did not converge within " + std::to_string(limit) +
                    " iterations; use the graded solver");
}

ReducedModel reduce_model(const CentreSystem& sys, const ManifoldApprox& approx, ModelOrder order) {
  check_phi(approx.phi, sys);
  const OrderSpec model_spec = order == ModelOrder::QPlusOne ? approx.spec.boosted(1, 0) : approx.spec;
  const MonomialFilter keep = [&](const Monomial& m) { return is_kept(m, model_spec); };
  const Layout dims = sys.dims();
  ReducedModel model{{}, model_spec};
  for (std::size_t j = 0; j < dims.m; ++j) {
    Polynomial rhs = substitute_stable(sys.f[j], approx.phi, keep);
    for (std::size_t k = 0; k < dims.m; ++k)
      if (sys.A(j, k) != 0) rhs += Polynomial::variable(dims, {Block::Centre, k}) * sys.A(j, k);
    model.rhs.push_back(std::move(rhs));
  }
  return model;
}

}  // namespace cmr
