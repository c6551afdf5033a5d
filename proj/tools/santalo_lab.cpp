// santalo-lab: command-line front end. Exit status 0 on success, 1 when a
// check fails or a computation is impossible for the given input, 2 on
// usage and parse errors.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "santalo/errors.hpp"
#include "santalo/function_spec.hpp"
#include "santalo/functionals.hpp"
#include "santalo/legendre.hpp"
#include "santalo/moment_measure.hpp"
#include "santalo/transport.hpp"
#include "santalo/verify.hpp"

using namespace santalo;

namespace {

std::ostream& precise(std::ostream& os) { return os << std::setprecision(17); }

// Writes to `path`, or stdout when empty.
void emit(const std::string& path, const std::string& text, bool append = false) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, append ? std::ios::app : std::ios::trunc);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

const FunctionSpec& load_spec(std::vector<FunctionSpec>& store, const std::string& path,
                              const std::string& name) {
  store = parse_function_spec_file(path);
  return select_spec(store, name);
}

// ---- eval -----------------------------------------------------------------

const std::vector<std::string> kFunctionals{
    "integral", "santalo_product", "log_laplace", "entropy", "entropy_gaussian",
    "fisher",   "fisher_lebesgue", "deficit",     "entropy_power"};

Estimate evaluate(const std::string& what, const GridFunction& f) {
  if (what == "integral") return integrate_exp_neg(f);
  if (what == "santalo_product") return santalo_product(f);
  if (what == "log_laplace") {
    const LaplaceValue l = log_laplace_star(f, ReferenceMeasure::lebesgue(f.dim()));
    return {l.value, l.est_error};
  }
  const LogConcaveDensity eta(f);
  if (what == "entropy") return relative_entropy(eta, ReferenceMeasure::lebesgue(f.dim()));
  if (what == "entropy_gaussian") return relative_entropy(eta, ReferenceMeasure::gaussian(f.dim()));
  if (what == "fisher") {
    const FisherValue v = fisher_information(eta);
    return {v.value, v.est_error};
  }
  if (what == "fisher_lebesgue") return fisher_information_lebesgue(eta);
  if (what == "deficit") return lsi_deficit(eta);
  if (what == "entropy_power") return entropy_power(eta);
  throw UsageError("unknown functional '" + what + "'");
}

void run_eval(const std::string& spec_path, const std::string& name,
              std::vector<std::string> which, const std::string& out) {
  std::vector<FunctionSpec> store;
  const FunctionSpec& spec = load_spec(store, spec_path, name);
  if (which.empty() || (which.size() == 1 && which[0] == "all")) which = kFunctionals;
  const GridFunction f = build_grid_function(spec);
  std::ostringstream os;
  precise(os);
  const bool header = out.empty() || out == "-" || !std::filesystem::exists(out) ||
                      std::filesystem::file_size(out) == 0;
  if (header) os << "name,inputs_hash,value,est_error\n";
  for (const auto& w : which) {
    const Estimate e = evaluate(w, f);
    os << spec.name << ':' << w << ',' << fnv1a_hex(spec.canonical() + w) << ',' << e.value << ','
       << e.est_error << '\n';
  }
  emit(out, os.str(), true);
}

// ---- conjugate ------------------------------------------------------------

void run_conjugate(const std::string& spec_path, const std::string& name, const std::string& out,
                   const std::vector<double>& lo, const std::vector<double>& hi,
                   const std::vector<int>& steps) {
  std::vector<FunctionSpec> store;
  const FunctionSpec& spec = load_spec(store, spec_path, name);
  const GridFunction f = build_grid_function(spec);
  std::vector<Axis> dual = default_dual_axes(f);
  if (!lo.empty() || !hi.empty() || !steps.empty()) {
    const auto n = static_cast<std::size_t>(f.dim());
    if (lo.size() != n || hi.size() != n || steps.size() != n)
      throw UsageError("--dual-lo, --dual-hi and --dual-steps need one entry per axis");
    for (std::size_t d = 0; d < n; ++d) {
      dual[d].lo = lo[d];
      dual[d].hi = hi[d];
      dual[d].steps = steps[d];
    }
  }
  const GridFunction g = legendre_grid(f, dual);
  std::ostringstream os;
  precise(os);
  os << (g.dim() == 1 ? "y1" : "y1,y2") << ",value,est_error\n";
  // The transform is exact for the piecewise-linear interpolant of f.
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    const Vector y = g.point(k);
    for (int d = 0; d < g.dim(); ++d) os << y(d) << ',';
    os << g[k] << ",0\n";
  }
  emit(out, os.str());
}

// ---- transport ------------------------------------------------------------

void run_transport(const std::string& mu_path, const std::string& nu_path, const std::string& out) {
  const DiscreteMeasure a = read_discrete_measure_file(mu_path);
  const DiscreteMeasure b = read_discrete_measure_file(nu_path);
  const TransportResult t = max_correlation_cost(a, b);
  const TransportResult w = w2_squared(a, b);
  std::ostringstream os;
  precise(os);
  os << "quantity,i,j,value,est_error\n";
  os << "T,,," << t.value << ",0\n";
  os << "W2sq,,," << w.value << ",0\n";
  const Matrix& p = t.coupling.plan;
  for (Eigen::Index i = 0; i < p.rows(); ++i)
    for (Eigen::Index j = 0; j < p.cols(); ++j)
      if (p(i, j) > 0.0) os << "coupling," << i << ',' << j << ',' << p(i, j) << ",0\n";
  emit(out, os.str());
}

// ---- moment ---------------------------------------------------------------

MaxAffineFunction read_potential(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<double> v;
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        v.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(lineno) + ": not a number: " + tok);
      }
    }
    if (v.empty()) continue;
    if (v.size() < 2 || v.size() > 3 || (!rows.empty() && rows.front().size() != v.size()))
      throw ParseError("line " + std::to_string(lineno) + ": expected 'y1 [y2] b'");
    rows.push_back(std::move(v));
  }
  if (rows.empty()) throw ParseError("no pieces in " + path);
  const auto n = static_cast<Eigen::Index>(rows.front().size() - 1);
  Matrix y(static_cast<Eigen::Index>(rows.size()), n);
  Vector b(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t j = 0; j < rows.size(); ++j) {
    for (Eigen::Index d = 0; d < n; ++d)
      y(static_cast<Eigen::Index>(j), d) = rows[j][static_cast<std::size_t>(d)];
    b(static_cast<Eigen::Index>(j)) = rows[j].back();
  }
  return MaxAffineFunction(y, b);
}

void run_moment_solve(const std::string& target, const std::string& out, double tol,
                      int max_iter, const std::string& method) {
  const DiscreteMeasure nu = read_discrete_measure_file(target);
  MomentMethod m = MomentMethod::newton;
  if (method == "gradient") m = MomentMethod::gradient;
  else if (method != "newton") throw UsageError("--method must be newton or gradient");
  const MomentSolution s = solve_moment_potential(nu, tol, max_iter, m);
  std::ostringstream os;
  precise(os);
  os << "# V(x) = max_j (y_j . x - b_j), int e^{-V} dx = 1\n";
  os << "# columns: " << (nu.dim() == 1 ? "y1" : nu.dim() == 2 ? "y1 y2" : "y1 y2 y3") << " b\n";
  const Matrix& y = s.potential.slopes();
  for (Eigen::Index j = 0; j < y.rows(); ++j) {
    for (Eigen::Index d = 0; d < y.cols(); ++d) os << y(j, d) << ' ';
    os << s.potential.intercepts()(j) << '\n';
  }
  os << "# residual " << s.residual << '\n';
  os << "# iterations " << s.iterations << '\n';
  os << "# k_value " << s.k_value << " est_error " << std::abs(s.k_value - s.k_direct) + s.residual
     << '\n';
  os << "# k_direct " << s.k_direct << '\n';
  emit(out, os.str());
}

void run_moment_push(const std::string& potential, const std::string& spec_path,
                     const std::string& name, const std::string& out) {
  if (potential.empty() == spec_path.empty())
    throw UsageError("moment push needs exactly one of --potential and --spec");
  std::optional<LogConcaveDensity> eta;
  if (!potential.empty()) {
    eta.emplace(read_potential(potential));
  } else {
    std::vector<FunctionSpec> store;
    eta.emplace(build_grid_function(load_spec(store, spec_path, name)));
  }
  const DiscreteMeasure nu = moment_measure_pushforward(*eta);
  std::ostringstream os;
  os << "# moment measure: weight then atom\n";
  os << "# est_error " << std::setprecision(17) << eta->moments().est_error << '\n';
  write_discrete_measure(os, nu);
  emit(out, os.str());
}

// ---- deficit --------------------------------------------------------------

void run_deficit(const std::string& spec_path, const std::string& name, const std::string& out) {
  std::vector<FunctionSpec> store;
  const FunctionSpec& spec = load_spec(store, spec_path, name);
  const LogConcaveDensity eta(build_grid_function(spec));
  const Estimate h = relative_entropy(eta, ReferenceMeasure::gaussian(eta.dim()));
  const FisherValue i = fisher_information(eta);
  const Estimate d = lsi_deficit(eta);
  const std::string marker = i.tilde_only ? "I-tilde only" : "";
  std::ostringstream os;
  precise(os);
  os << "quantity,value,est_error,note\n";
  os << "H_gaussian," << h.value << ',' << h.est_error << ",\n";
  os << "fisher_gaussian," << i.value << ',' << i.est_error << ',' << marker
     << (i.boundary_warning ? (marker.empty() ? "boundary warning" : "; boundary warning") : "")
     << '\n';
  os << "deficit," << d.value << ',' << d.est_error << ',' << marker << '\n';
  emit(out, os.str());
}

// ---- verify / constants ---------------------------------------------------

int report(const std::vector<CheckReport>& reports, const std::string& csv) {
  std::ostringstream os;
  write_reports_csv(os, reports);
  int fail = 0, na = 0;
  for (const auto& r : reports) {
    if (r.failed()) {
      ++fail;
      std::cerr << "FAIL " << r.check_id << " margin " << r.margin << " tol " << r.tol;
      for (const auto& f : r.failures) std::cerr << " [" << f << "]";
      std::cerr << '\n';
    }
    if (r.status == CheckStatus::not_applicable) ++na;
  }
  if (csv.empty()) {
    std::cout << os.str();
  } else {
    emit(csv, os.str());
  }
  std::cerr << reports.size() << " checks: " << reports.size() - fail - na << " pass, " << fail
            << " fail, " << na << " not applicable\n";
  return fail ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical toolkit for functional Santalo inequalities, moment measures and "
               "transport-entropy checks"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  std::string spec, name, out;
  std::vector<std::string> functionals;
  auto* eval = app.add_subcommand("eval", "Evaluate functionals of e^{-f} (CSV rows appended)");
  eval->add_option("--spec", spec, "Function spec file")->required()->check(CLI::ExistingFile);
  eval->add_option("--name", name, "Section to use (default: first)");
  eval->add_option("--functional", functionals,
                   "integral, santalo_product, log_laplace, entropy, entropy_gaussian, fisher, "
                   "fisher_lebesgue, deficit, entropy_power or all (default)");
  eval->add_option("--out", out, "CSV file to append to (default: stdout)");

  std::vector<double> dual_lo, dual_hi;
  std::vector<int> dual_steps;
  auto* conj = app.add_subcommand("conjugate", "Legendre transform on a grid");
  conj->add_option("--spec", spec, "Function spec file")->required()->check(CLI::ExistingFile);
  conj->add_option("--name", name, "Section to use (default: first)");
  conj->add_option("--out", out, "Output CSV (default: stdout)");
  conj->add_option("--dual-lo", dual_lo, "Dual grid lower bounds, one per axis");
  conj->add_option("--dual-hi", dual_hi, "Dual grid upper bounds, one per axis");
  conj->add_option("--dual-steps", dual_steps, "Dual grid nodes, one per axis");

  std::string mu_path, nu_path;
  auto* tr = app.add_subcommand("transport", "Maximal correlation, W2^2 and optimal coupling");
  tr->add_option("--mu", mu_path, "First measure file")->required()->check(CLI::ExistingFile);
  tr->add_option("--nu", nu_path, "Second measure file")->required()->check(CLI::ExistingFile);
  tr->add_option("--out", out, "Output CSV (default: stdout)");

  auto* moment = app.add_subcommand("moment", "Moment measures");
  moment->require_subcommand(1);
  std::string target, method = "newton", potential;
  double tol = 1e-10;
  int max_iter = 200;
  auto* solve = moment->add_subcommand("solve", "Potential whose moment measure is the target");
  solve->add_option("--target", target, "Measure file")->required()->check(CLI::ExistingFile);
  solve->add_option("--out", out, "Output table (default: stdout)");
  solve->add_option("--tol", tol, "Residual tolerance")->capture_default_str();
  solve->add_option("--max-iter", max_iter, "Iteration cap")->capture_default_str();
  solve->add_option("--method", method, "newton or gradient")->capture_default_str();
  auto* push = moment->add_subcommand("push", "Moment measure of e^{-V}");
  push->add_option("--potential", potential, "Max-affine table 'y1 [y2] b'")
      ->check(CLI::ExistingFile);
  push->add_option("--spec", spec, "Function spec file")->check(CLI::ExistingFile);
  push->add_option("--name", name, "Section to use (default: first)");
  push->add_option("--out", out, "Output measure file (default: stdout)");

  auto* deficit = app.add_subcommand("deficit", "Log-Sobolev deficit of e^{-f}");
  deficit->add_option("--spec", spec, "Function spec file")->required()->check(CLI::ExistingFile);
  deficit->add_option("--name", name, "Section to use (default: first)");
  deficit->add_option("--out", out, "Output CSV (default: stdout)");

  std::string suite, csv;
  SuiteOptions opt;
  auto* verify = app.add_subcommand("verify", "Run a check battery");
  verify->add_option("suite", suite, "duality, transport, sequences, inequalities or all")
      ->required();
  verify->add_option("--c", opt.c, "Override every preset constant c");
  verify->add_option("--tol-scale", opt.tol_scale, "Multiply every tolerance")->capture_default_str();
  verify->add_option("--csv", csv, "CSV output path (default: stdout)");
  verify->add_option("--n", opt.max_dim, "Largest dimension exercised")->capture_default_str();
  verify->add_option("--seed", opt.seed, "Seed of the random batteries")->capture_default_str();

  int const_n = 3;
  auto* constants = app.add_subcommand("constants", "Polytope volume-product constants");
  constants->add_option("--n", const_n, "Largest dimension (1 to 3)")->capture_default_str();
  constants->add_option("--csv", csv, "CSV output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*eval) run_eval(spec, name, functionals, out);
    if (*conj) run_conjugate(spec, name, out, dual_lo, dual_hi, dual_steps);
    if (*tr) run_transport(mu_path, nu_path, out);
    if (*solve) run_moment_solve(target, out, tol, max_iter, method);
    if (*push) run_moment_push(potential, spec, name, out);
    if (*deficit) run_deficit(spec, name, out);
    if (*verify) return report(run_suite(suite, opt), csv);
    if (*constants) {
      if (const_n < 1 || const_n > 3) throw UsageError("--n must be 1, 2 or 3");
      std::vector<CheckReport> r;
      for (int n = 1; n <= const_n; ++n) r.push_back(check_polytope_constants(n));
      return report(r, csv);
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidParameter& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
