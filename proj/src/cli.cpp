#include "cmr/cli.hpp"

#include "cmr/error.hpp"
#include "cmr/report.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace cmr {

namespace {

using nlohmann::json;

struct RunConfig {
  std::string command;
  std::string system_path;
  std::string poly_path;
  unsigned q = 6;
  unsigned p = 3;
  std::string x_weights;
  std::string eps_weights;
  std::string method = "graded";
  std::string model_order = "q+1";
  std::string output = "text";
  std::string eps = "0.05";
  std::string x0 = "0.05";
  std::string y0 = "0.3";
  double dt = 1e-3;
  double t_end = 20.0;
  std::optional<double> t_transient;
  std::string boost = "2,2";
  std::string coupled;
  std::string param_names = "eps";
  double tol_manifold = 1e-4;
  std::optional<double> tol_model;
  double spectrum_tol = kDefaultSpectrumTol;
  std::optional<unsigned> max_iter;
  std::string csv_path;
  bool timing = false;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double to_double(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError(std::string("malformed ") + what + " value '" + s + "'");
  }
}

std::vector<double> doubles(const std::string& text, const char* what, std::size_t expected) {
  std::vector<double> out;
  for (const auto& s : split(text, ',')) out.push_back(to_double(s, what));
  if (out.size() == 1 && expected > 1) out.assign(expected, out.front());
  if (out.size() != expected)
    throw ValidationError(std::string(what) + " needs " + std::to_string(expected) + " values");
  return out;
}

std::vector<Rational> rationals(const std::string& text) {
  std::vector<Rational> out;
  if (text.empty()) return out;
  for (const auto& s : split(text, ',')) out.push_back(parse_rational(s));
  return out;
}

std::pair<unsigned, unsigned> pair_of(const std::string& text, const char* what) {
  const auto parts = split(text, ',');
  try {
    if (parts.size() == 2) return {static_cast<unsigned>(std::stoul(parts[0])), static_cast<unsigned>(std::stoul(parts[1]))};
  } catch (const std::exception&) {
  }
  throw ValidationError(std::string(what) + " expects two naturals 'a,b'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool color_enabled() {
  const char* v = std::getenv("CM_REDUCE_COLOR");
  return v && std::string(v) == "1";
}

std::string verdict_text(bool pass) {
  const char* word = pass ? "pass" : "FAIL";
  if (!color_enabled()) return word;
  return std::string(pass ? "\033[32m" : "\033[31m") + word + "\033[0m";
}

OrderSpec spec_from(const RunConfig& cfg, const Layout& dims) {
  OrderSpec spec = OrderSpec::make(cfg.q, cfg.p, rationals(cfg.x_weights), rationals(cfg.eps_weights));
  spec.check_layout(dims);
  return spec;
}

std::string describe(const OrderTarget& target) {
  if (const auto* s = std::get_if<OrderSpec>(&target))
    return "O(x^" + std::to_string(s->q) + ", eps^" + std::to_string(s->p) + ")";
  const auto& c = std::get<CoupledOrder>(target);
  return "coupled eps'/" + std::to_string(c.p) + " + x'/" + std::to_string(c.q) + " >= 1";
}

void print_certificate(std::ostream& out, const std::string& label, const OrderCertificate& cert,
                       const VariableLayout& names) {
  out << label << " " << describe(cert.target) << ": " << verdict_text(cert.pass()) << " (" << cert.residual_terms
      << " terms checked)\n";
  for (std::size_t i = 0; i < cert.offenders.size(); ++i)
    if (!cert.offenders[i].is_zero())
      out << "  offending terms in component " << names.stable.at(i) << ": " << to_string(cert.offenders[i], names)
          << "\n";
}

struct Solved {
  CentreSystem sys;
  SpectrumReport spectrum;
  ManifoldApprox approx;
  ReducedModel model;
  OrderCertificate residual;
  json timing = json::object();
};

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Parse, validate and solve. Returns nullopt after reporting a failed spectrum check.
std::optional<Solved> solve(const RunConfig& cfg, std::ostream& err) {
  auto t0 = Clock::now();
  CentreSystem sys = parse_system(read_file(cfg.system_path));
  const OrderSpec spec = spec_from(cfg, sys.dims());
  json timing = json::object();
  timing["parse_ms"] = ms_since(t0);

  t0 = Clock::now();
  SpectrumReport spectrum = validate_spectrum(sys, cfg.spectrum_tol);
  if (!spectrum.pass) {
    err << "error: spectral hypotheses violated: max |Re eig(A)| = " << spectrum.max_abs_re_a
        << ", max Re eig(B) = " << spectrum.max_re_b << " (tol " << spectrum.tol << ")\n";
    return std::nullopt;
  }

  t0 = Clock::now();
  ManifoldApprox approx = cfg.method == "fixed-point" ? iterate_fixed_point(sys, spec, cfg.max_iter) : solve_graded(sys, spec);
  timing["solve_ms"] = ms_since(t0);
  ReducedModel model = reduce_model(sys, approx, cfg.model_order == "q" ? ModelOrder::Q : ModelOrder::QPlusOne);
  t0 = Clock::now();
  OrderCertificate residual = check_residual_order(sys, approx.phi, spec);
  timing["certify_ms"] = ms_since(t0);
  return Solved{std::move(sys), std::move(spectrum), std::move(approx), std::move(model), std::move(residual), timing};
}

json solved_to_json(const Solved& s, const RunConfig& cfg) {
  json out;
  out["schema"] = kReportSchema;
  out["command"] = cfg.command;
  out["system"] = serialize_system(s.sys);
  out["spectrum"] = spectrum_to_json(s.spectrum);
  out["manifold"] = manifold_to_json(s.approx, s.sys.names);
  out["reduced_model"] = model_to_json(s.model, s.sys.names);
  out["residual_certificate"] = certificate_to_json(s.residual, s.sys.names);
  if (cfg.timing) out["timing"] = s.timing;
  return out;
}

void print_solved(std::ostream& out, const Solved& s) {
  const auto& names = s.sys.names;
  out << "spectrum: " << verdict_text(s.spectrum.pass) << " (max |Re eig A| = " << s.spectrum.max_abs_re_a
      << ", max Re eig B = " << s.spectrum.max_re_b << ")\n";
  out << "manifold (" << to_string(s.approx.method) << ", q = " << s.approx.spec.q << ", p = " << s.approx.spec.p;
  if (s.approx.method == SolveMethod::FixedPoint) out << ", " << s.approx.iterations << " iterations";
  out << "):\n";
  for (std::size_t j = 0; j < s.approx.phi.size(); ++j)
    out << "  " << names.stable[j] << " = " << to_string(s.approx.phi[j], names) << "\n";
  out << "reduced model (q = " << s.model.spec.q << ", p = " << s.model.spec.p << "):\n";
  for (std::size_t i = 0; i < s.model.rhs.size(); ++i)
    out << "  " << names.centre[i] << "' = " << to_string(s.model.rhs[i], names) << "\n";
  print_certificate(out, "residual", s.residual, names);
}

int cmd_reduce(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto solved = solve(cfg, err);
  if (!solved) return kExitInvalid;
  const bool pass = solved->residual.pass();
  if (cfg.output == "json") {
    json report = solved_to_json(*solved, cfg);
    report["verdict"] = pass ? "pass" : "fail";
    out << report.dump(2) << "\n";
  } else {
    print_solved(out, *solved);
    if (cfg.timing) out << "timing: " << solved->timing.dump() << "\n";
  }
  return pass ? kExitPass : kExitFail;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto solved = solve(cfg, err);
  if (!solved) return kExitInvalid;
  const Layout dims = solved->sys.dims();
  const auto [dq, dp] = pair_of(cfg.boost, "--boost");
  const OrderCertificate probe = check_approximation_consistency(solved->sys, solved->approx.phi, solved->approx.spec, dq, dp);

  TrajectoryOptions options;
  options.x0 = doubles(cfg.x0, "--x0", dims.m);
  if (cfg.y0 != "on-manifold") options.y0 = doubles(cfg.y0, "--y0", dims.n);
  options.dt = cfg.dt;
  options.t_end = cfg.t_end;
  options.t_transient = cfg.t_transient;
  options.keep_samples = !cfg.csv_path.empty();

  std::vector<std::vector<double>> eps_values;
  for (const auto& run : split(cfg.eps, ',')) {
    std::vector<double> values;
    for (const auto& v : split(run, ':')) values.push_back(to_double(v, "--eps"));
    if (values.size() == 1 && dims.l != 1) values.assign(dims.l, values.front());
    if (dims.l == 0) values.clear();
    eps_values.push_back(values);
  }

  const auto t0 = Clock::now();
  const auto runs = compare_trajectories(solved->sys, solved->approx, solved->model, eps_values, options);
  json timing = solved->timing;
  timing["integrate_ms"] = ms_since(t0);

  bool blew_up = false;
  bool within = probe.pass() && solved->residual.pass();
  for (const auto& r : runs) {
    blew_up = blew_up || r.blew_up;
    within = within && r.manifold_deviation <= cfg.tol_manifold;
    if (cfg.tol_model) within = within && r.model_deviation <= *cfg.tol_model;
  }

  if (!cfg.csv_path.empty()) {
    std::ofstream csv(cfg.csv_path);
    if (!csv) throw ValidationError("cannot write '" + cfg.csv_path + "'");
    for (const auto& r : runs) write_trajectory_csv(csv, r, solved->sys.names);
  }

  if (cfg.output == "json") {
    json report = solved_to_json(*solved, cfg);
    report["probe"] = certificate_to_json(probe, solved->sys.names);
    report["probe"]["boost"] = {dq, dp};
    json traj = json::array();
    for (const auto& r : runs) traj.push_back(trajectory_to_json(r));
    report["trajectories"] = traj;
    report["tolerances"] = {{"manifold", fixed_precision(cfg.tol_manifold)},
                            {"model", cfg.tol_model ? json(fixed_precision(*cfg.tol_model)) : json(nullptr)}};
    if (cfg.timing) report["timing"] = timing;
    report["verdict"] = blew_up ? "blow-up" : within ? "pass" : "fail";
    out << report.dump(2) << "\n";
  } else {
    print_solved(out, *solved);
    print_certificate(out, "probe (boost " + std::to_string(dq) + "," + std::to_string(dp) + ")", probe, solved->sys.names);
    for (const auto& r : runs) {
      out << "trajectory eps = [";
      for (std::size_t k = 0; k < r.eps.size(); ++k) out << (k ? ", " : "") << r.eps[k];
      out << "]: manifold deviation (t >= " << r.t_transient << ") = " << r.manifold_deviation
          << " (tol " << cfg.tol_manifold << ") " << verdict_text(r.manifold_deviation <= cfg.tol_manifold)
          << ", model deviation = " << r.model_deviation << ", attraction rate = ";
      if (r.attraction_rate)
        out << *r.attraction_rate;
      else
        out << "n/a";
      if (r.blew_up) out << " [blow-up]";
      out << "\n";
    }
    if (cfg.timing) out << "timing: " << timing.dump() << "\n";
  }
  if (blew_up) return kExitBlowUp;
  return within ? kExitPass : kExitFail;
}

// Standalone text polynomial: names in --param-names are parameters, every
// other identifier is a centre variable.
VariableLayout infer_names(const std::string& text, const std::string& param_names) {
  VariableLayout names;
  std::set<std::string> params, seen;
  for (const auto& p : split(param_names, ','))
    if (!p.empty()) params.insert(p);
  for (std::size_t i = 0; i < text.size();) {
    if (text[i] == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(text[i])) || text[i] == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      const std::string name = text.substr(i, j - i);
      if (seen.insert(name).second) (params.count(name) ? names.params : names.centre).push_back(name);
      i = j;
      continue;
    }
    ++i;
  }
  if (names.centre.empty()) names.centre.push_back("x");
  std::string stable = "y";
  while (seen.count(stable)) stable += "_";
  names.stable.push_back(stable);
  return names;
}

int cmd_check_order(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const std::string text = read_file(cfg.poly_path);
  std::optional<CentreSystem> sys;
  if (!cfg.system_path.empty()) sys = parse_system(read_file(cfg.system_path));

  const auto first = text.find_first_not_of(" \t\r\n");
  const bool is_json = first != std::string::npos && (text[first] == '[' || text[first] == '{');
  VariableLayout names;
  std::optional<Polynomial> poly;
  if (is_json) {
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ValidationError(std::string("malformed polynomial file: ") + e.what());
    }
    const json& terms = doc.is_object() ? doc.value("terms", json::array()) : doc;
    std::optional<Layout> dims;
    if (sys) dims = sys->dims();
    if (!dims && terms.empty()) dims = Layout{1, 1, 1};
    poly = terms_from_json(terms, dims);
    names = sys ? sys->names : VariableLayout::default_names(poly->layout());
  } else {
    names = sys ? sys->names : infer_names(text, cfg.param_names);
    bool blank = first == std::string::npos;
    if (!blank) {
      // Comment-only files count as empty.
      std::istringstream lines(text);
      std::string line;
      blank = true;
      while (std::getline(lines, line)) {
        const auto hash = line.find('#');
        if (line.substr(0, hash).find_first_not_of(" \t\r") != std::string::npos) blank = false;
      }
    }
    poly = blank ? Polynomial(names.dims()) : parse_expression(text, names);
  }

  OrderTarget target;
  if (!cfg.coupled.empty()) {
    const auto parts = split(cfg.coupled, ',');
    try {
      if (parts.size() == 1)
        target = CoupledOrder::exponent(static_cast<unsigned>(std::stoul(parts[0])));
      else if (parts.size() == 2)
        target = CoupledOrder{static_cast<unsigned>(std::stoul(parts[0])), static_cast<unsigned>(std::stoul(parts[1]))};
      else
        throw std::invalid_argument(cfg.coupled);
    } catch (const std::logic_error&) {
      throw ValidationError("--coupled expects R or P,Q");
    }
    const auto& c = std::get<CoupledOrder>(target);
    if (c.p == 0 || c.q == 0) throw ValidationError("--coupled exponents must be positive");
  } else {
    target = spec_from(cfg, poly->layout());
  }

  const OrderVerdict verdict = verify_order(*poly, target);
  OrderCertificate cert{target, {verdict.offenders}, poly->size()};
  if (cfg.output == "json") {
    json report = certificate_to_json(cert, names);
    report["schema"] = kReportSchema;
    report["command"] = cfg.command;
    report["polynomial"] = polynomial_to_json(*poly, names);
    out << report.dump(2) << "\n";
  } else {
    out << "polynomial: " << to_string(*poly, names) << "\n";
    out << describe(target) << ": " << verdict_text(cert.pass()) << " (" << cert.residual_terms << " terms checked)\n";
    for (const auto& [mono, c] : verdict.offenders.terms())
      out << "  offender: " << to_string(Polynomial::term(mono, c), names) << "\n";
  }
  return cert.pass() ? kExitPass : kExitFail;
}

void add_order_flags(CLI::App& sub, RunConfig& cfg) {
  sub.add_option("--order-x", cfg.q, "Order q in the centre variables (q > 1)")->capture_default_str();
  sub.add_option("--order-eps", cfg.p, "Order p in the parameters (p >= 1)")->capture_default_str();
  sub.add_option("--x-weights", cfg.x_weights, "Comma-separated positive rational weights of the centre variables");
  sub.add_option("--eps-weights", cfg.eps_weights, "Comma-separated positive rational weights of the parameters");
  sub.add_option("--output", cfg.output, "Report format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
}

void add_solve_flags(CLI::App& sub, RunConfig& cfg) {
  sub.add_option("--system", cfg.system_path, "System file")->required();
  sub.add_option("--method", cfg.method, "Solver")->check(CLI::IsMember({"graded", "fixed-point"}))->capture_default_str();
  sub.add_option("--model-order", cfg.model_order, "Reduced model truncation in x")
      ->check(CLI::IsMember({"q+1", "q"}))
      ->capture_default_str();
  sub.add_option("--max-iter", cfg.max_iter, "Fixed-point iteration cap (default: largest kept degree)");
  sub.add_option("--spectrum-tol", cfg.spectrum_tol, "Tolerance on eigenvalue real parts")->capture_default_str();
  sub.add_flag("--timing", cfg.timing, "Include wall-clock timings in the report");
  add_order_flags(sub, cfg);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Polynomial centre manifold reduction with flexible error orders", "cm-reduce"};
  app.require_subcommand(1);

  auto* reduce = app.add_subcommand("reduce", "Compute the manifold approximation and the reduced model");
  add_solve_flags(*reduce, cfg);

  auto* verify = app.add_subcommand("verify", "Reduce, probe the approximation order and compare trajectories");
  add_solve_flags(*verify, cfg);
  verify->add_option("--eps", cfg.eps, "Parameter points: runs separated by ',', components by ':'")->capture_default_str();
  verify->add_option("--x0", cfg.x0, "Initial centre state (comma-separated)")->capture_default_str();
  verify->add_option("--y0", cfg.y0, "Initial stable state, or 'on-manifold'")->capture_default_str();
  verify->add_option("--dt", cfg.dt, "RK4 step")->check(CLI::PositiveNumber)->capture_default_str();
  verify->add_option("--t-end", cfg.t_end, "Horizon")->check(CLI::PositiveNumber)->capture_default_str();
  verify->add_option("--t-transient", cfg.t_transient, "Start of the post-transient window (default t-end/2)");
  verify->add_option("--boost", cfg.boost, "Order boost dq,dp of the reference solve")->capture_default_str();
  verify->add_option("--tol-manifold", cfg.tol_manifold, "Bound on max |y - phi(x, eps)| after the transient")
      ->capture_default_str();
  verify->add_option("--tol-model", cfg.tol_model, "Bound on max |x_full - x_reduced| (unchecked when absent)");
  verify->add_option("--csv", cfg.csv_path, "Write sampled trajectories to this CSV file");

  auto* check = app.add_subcommand("check-order", "Certify that a polynomial lies in an error set");
  check->add_option("--poly", cfg.poly_path, "Polynomial file: JSON term list or expression text")->required();
  check->add_option("--system", cfg.system_path, "System file supplying variable names");
  check->add_option("--param-names", cfg.param_names, "Parameter names for expression text without --system")
      ->capture_default_str();
  check->add_option("--coupled", cfg.coupled, "Coupled order: R, or P,Q for eps'/P + x'/Q >= 1");
  add_order_flags(*check, cfg);

  std::vector<const char*> argv{"cm-reduce"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitInvalid;
  }

  try {
    if (reduce->parsed()) {
      cfg.command = "reduce";
      return cmd_reduce(cfg, out, err);
    }
    if (verify->parsed()) {
      cfg.command = "verify";
      return cmd_verify(cfg, out, err);
    }
    cfg.command = "check-order";
    return cmd_check_order(cfg, out, err);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
}

}  // namespace cmr
