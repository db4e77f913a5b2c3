#include "cmr/report.hpp"

#include "cmr/error.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace cmr {

using nlohmann::json;

double fixed_precision(double v) {
  if (!std::isfinite(v)) return v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

namespace {

json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return fixed_precision(v);
}

json numbers(const std::vector<double>& vs) {
  json out = json::array();
  for (double v : vs) out.push_back(number(v));
  return out;
}

json weights(const std::vector<Rational>& ws) {
  json out = json::array();
  for (const auto& w : ws) out.push_back(to_display_string(w));
  return out;
}

std::vector<unsigned> exponents(const json& j, const char* key) {
  if (!j.contains(key)) return {};
  const auto& arr = j.at(key);
  if (!arr.is_array()) throw ValidationError(std::string("term field '") + key + "' must be an array");
  std::vector<unsigned> out;
  for (const auto& e : arr) {
    if (!e.is_number_integer() || e.get<long long>() < 0)
      throw ValidationError(std::string("term field '") + key + "' must hold natural numbers");
    out.push_back(e.get<unsigned>());
  }
  return out;
}

}  // namespace

json terms_to_json(const Polynomial& p) {
  json out = json::array();
  for (const auto& [mono, c] : p.terms())
    out.push_back({{"coeff", to_fraction_string(c)}, {"x", mono.x}, {"y", mono.y}, {"eps", mono.eps}});
  return out;
}

Polynomial terms_from_json(const json& terms, std::optional<Layout> dims) {
  if (!terms.is_array()) throw ValidationError("polynomial must be a JSON array of terms");
  std::vector<std::pair<Monomial, Rational>> parsed;
  for (const auto& t : terms) {
    if (!t.is_object() || !t.contains("coeff") || !t.at("coeff").is_string())
      throw ValidationError("each term needs a string 'coeff'");
    Monomial mono{exponents(t, "x"), exponents(t, "y"), exponents(t, "eps")};
    if (dims) {
      // Missing or empty stable block is read as all zeros.
      if (mono.y.empty()) mono.y.assign(dims->n, 0);
    }
    parsed.emplace_back(std::move(mono), parse_rational(t.at("coeff").get<std::string>()));
  }
  if (!dims) {
    if (parsed.empty()) throw ValidationError("cannot infer the layout of an empty term list");
    dims = parsed.front().first.layout();
  }
  Polynomial out(*dims);
  for (const auto& [mono, c] : parsed) {
    if (mono.layout() != *dims) throw ValidationError("term exponent vectors do not match the layout");
    out.add_term(mono, c);
  }
  return out;
}

json spec_to_json(const OrderSpec& spec) {
  return {{"q", spec.q}, {"p", spec.p}, {"xweights", weights(spec.xweights)}, {"eweights", weights(spec.eweights)}};
}

OrderSpec spec_from_json(const json& j) {
  try {
    std::vector<Rational> xw, ew;
    if (j.contains("xweights"))
      for (const auto& w : j.at("xweights")) xw.push_back(w.is_string() ? parse_rational(w.get<std::string>()) : Rational(w.get<long>()));
    if (j.contains("eweights"))
      for (const auto& w : j.at("eweights")) ew.push_back(w.is_string() ? parse_rational(w.get<std::string>()) : Rational(w.get<long>()));
    return OrderSpec::make(j.at("q").get<unsigned>(), j.at("p").get<unsigned>(), std::move(xw), std::move(ew));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed order spec: ") + e.what());
  }
}

json target_to_json(const OrderTarget& target) {
  if (const auto* spec = std::get_if<OrderSpec>(&target)) {
    json out = spec_to_json(*spec);
    out["mode"] = "flexible";
    return out;
  }
  const auto& c = std::get<CoupledOrder>(target);
  return {{"mode", "coupled"}, {"p", c.p}, {"q", c.q}};
}

json polynomial_to_json(const Polynomial& p, const VariableLayout& names) {
  return {{"text", to_string(p, names)}, {"terms", terms_to_json(p)}};
}

json certificate_to_json(const OrderCertificate& cert, const VariableLayout& names) {
  json offenders = json::array();
  for (std::size_t i = 0; i < cert.offenders.size(); ++i)
    for (const auto& [mono, c] : cert.offenders[i].terms())
      offenders.push_back({{"component", i},
                           {"term", to_string(Polynomial::term(mono, c), names)},
                           {"coeff", to_fraction_string(c)},
                           {"x", mono.x},
                           {"y", mono.y},
                           {"eps", mono.eps}});
  return {{"target", target_to_json(cert.target)},
          {"verdict", cert.pass() ? "pass" : "fail"},
          {"offenders", offenders},
          {"residual_terms", cert.residual_terms}};
}

json spectrum_to_json(const SpectrumReport& report) {
  auto eig = [](const std::vector<std::complex<double>>& zs) {
    json out = json::array();
    for (const auto& z : zs) out.push_back({number(z.real()), number(z.imag())});
    return out;
  };
  return {{"eigenvalues_a", eig(report.eigenvalues_a)},
          {"eigenvalues_b", eig(report.eigenvalues_b)},
          {"max_abs_re_a", number(report.max_abs_re_a)},
          {"max_re_b", number(report.max_re_b)},
          {"tol", number(report.tol)},
          {"verdict", report.pass ? "pass" : "fail"}};
}

json manifold_to_json(const ManifoldApprox& approx, const VariableLayout& names) {
  json comps = json::array();
  for (std::size_t i = 0; i < approx.phi.size(); ++i) {
    json c = polynomial_to_json(approx.phi[i], names);
    c["variable"] = names.stable.at(i);
    comps.push_back(c);
  }
  return {{"method", to_string(approx.method)},
          {"iterations", approx.iterations},
          {"spec", spec_to_json(approx.spec)},
          {"phi", comps}};
}

json model_to_json(const ReducedModel& model, const VariableLayout& names) {
  json comps = json::array();
  for (std::size_t i = 0; i < model.rhs.size(); ++i) {
    json c = polynomial_to_json(model.rhs[i], names);
    c["variable"] = names.centre.at(i);
    comps.push_back(c);
  }
  return {{"spec", spec_to_json(model.spec)}, {"rhs", comps}};
}

json trajectory_to_json(const TrajectoryReport& r) {
  return {{"eps", numbers(r.eps)},
          {"x0", numbers(r.x0)},
          {"y0", numbers(r.y0)},
          {"dt", number(r.dt)},
          {"t_end", number(r.t_end)},
          {"t_transient", number(r.t_transient)},
          {"manifold_deviation", number(r.manifold_deviation)},
          {"manifold_deviation_all", number(r.manifold_deviation_all)},
          {"model_deviation", number(r.model_deviation)},
          {"attraction_rate", r.attraction_rate ? number(*r.attraction_rate) : json(nullptr)},
          {"blew_up", r.blew_up}};
}

}  // namespace cmr
