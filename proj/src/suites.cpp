#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "santalo/errors.hpp"
#include "santalo/functionals.hpp"
#include "santalo/moment_measure.hpp"
#include "santalo/transport.hpp"
#include "santalo/verify.hpp"

namespace santalo {

namespace {

using Reports = std::vector<CheckReport>;

Axis make_axis(double lo, double hi, int steps) {
  Axis a;
  a.lo = lo;
  a.hi = hi;
  a.steps = steps;
  return a;
}

GridFunction grid1(double lo, double hi, int steps, const std::function<double(double)>& f,
                   Symmetry s = Symmetry::none) {
  return GridFunction::sample({make_axis(lo, hi, steps)},
                              [&](const Vector& x) { return f(x(0)); }, s);
}

GridFunction grid2(double r, int steps, const std::function<double(const Vector&)>& f,
                   Symmetry s) {
  return GridFunction::sample({make_axis(-r, r, steps), make_axis(-r, r, steps)}, f, s);
}

GridFunction wedge(double a, double b) {
  return grid1(-2, 40, 42001, [=](double x) { return a * x < -1.0 - 1e-9 ? kInf : a * x + b; });
}

struct Named {
  std::string name;
  LogConcaveDensity eta;
};

std::vector<Named> builtins(int max_dim) {
  std::vector<Named> out{{"gamma1", gaussian_density(1)},
                         {"normal", normal_density(0.5, 2.0)},
                         {"quadratic3", quadratic_density(3.0)},
                         {"tau", tau_density()},
                         {"tau_bar", tau_density(true)},
                         {"tau_s", tau_s_density(1)},
                         {"fm1_k5", fm_density(5, 1)},
                         {"fm2_k5", fm_density(5, 2)},
                         {"uncond_k10", uncond_density(10)}};
  if (max_dim >= 2) {
    out.push_back({"gamma2", gaussian_density(2)});
    out.push_back({"tau_s2", tau_s_density(2)});
  }
  return out;
}

DiscreteMeasure two_atoms(double x0, double x1, double w0) {
  Matrix a(2, 1);
  a << x0, x1;
  Vector w(2);
  w << w0, 1.0 - w0;
  return DiscreteMeasure(a, w);
}

DiscreteMeasure random_measure(std::mt19937_64& rng, int n, int atoms, bool centered) {
  std::uniform_real_distribution<double> u(0.1, 1.0), x(-2.0, 2.0);
  Matrix a(atoms, n);
  Vector w(atoms);
  for (int i = 0; i < atoms; ++i) {
    for (int d = 0; d < n; ++d) a(i, d) = x(rng);
    w(i) = u(rng);
  }
  w /= w.sum();
  w(atoms - 1) = 1.0 - w.head(atoms - 1).sum();
  if (centered) a.rowwise() -= (a.transpose() * w).transpose();
  return DiscreteMeasure(a, w);
}

const std::vector<std::string> kWeakProv{
    "weak duality: int(-f) dnu - K(nu|Leb) <= L(f|Leb) = -log int e^{-f*} dx"};

Reports duality(const SuiteOptions& opt) {
  Reports out;
  const ReferenceMeasure leb1 = ReferenceMeasure::lebesgue(1);
  for (const auto& b : builtins(opt.max_dim)) {
    CheckReport r = entropy_duality_check(b.eta, b.eta.potential(),
                                          ReferenceMeasure::lebesgue(b.eta.dim()), true);
    r.check_id += "/" + b.name;
    out.push_back(std::move(r));
  }
  {
    const LogConcaveDensity g = gaussian_density(1);
    const GridFunction zero = grid1(-12, 12, 481, [](double) { return 0.0; }, Symmetry::symmetric);
    CheckReport r = entropy_duality_check(g, zero, ReferenceMeasure::gaussian(1), true);
    r.check_id += "/gamma1_f0_gauss";
    out.push_back(std::move(r));
    const GridFunction q = grid1(-20, 20, 8001, [](double x) { return 0.25 * x * x; });
    CheckReport s = entropy_duality_check(tau_s_density(1), q, leb1, false);
    s.check_id += "/tau_s_quarter";
    out.push_back(std::move(s));
  }
  const std::pair<const char*, GridFunction> rev[] = {
      {"half_sq", grid1(-12, 12, 2401, [](double x) { return 0.5 * x * x; })},
      {"abs", grid1(-3, 3, 601, [](double x) { return std::abs(x); })},
      {"indicator", grid1(-2, 2, 401, [](double x) { return std::abs(x) <= 1 + 1e-12 ? 0.0 : kInf; })}};
  for (const auto& [name, f] : rev) {
    CheckReport r = reverse_duality_check(f);
    r.check_id += std::string("/") + name;
    out.push_back(std::move(r));
  }
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int mf = 2 + trial % 4;
    Matrix fy(mf, 1);
    Vector fb(mf);
    for (int j = 0; j < mf; ++j) {
      fy(j, 0) = 2.0 * u(rng);
      fb(j) = u(rng);
    }
    const MaxAffineFunction f(fy, fb);
    const double l = log_laplace_star(f).value;
    const DiscreteMeasure nu = random_measure(rng, 1, 2 + trial % 5, true);
    double lhs = 0.0;
    for (Eigen::Index j = 0; j < nu.size(); ++j) lhs -= nu.weight(j) * f(nu.atom(j));
    const Estimate k = k_functional(nu);
    char id[32];
    std::snprintf(id, sizeof id, "weak_duality/%03d", trial);
    CheckReport r = CheckReport::inequality(id, lhs - k.value, l, 1e-8, kWeakProv, k.est_error);
    r.add("K", k.value);
    out.push_back(std::move(r));
  }
  return out;
}

Reports transport(const SuiteOptions& opt) {
  Reports out;
  std::mt19937_64 rng(opt.seed + 1);
  std::uniform_int_distribution<int> atoms(1, 8);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = opt.max_dim >= 2 ? 1 + trial % 2 : 1;
    const DiscreteMeasure a = random_measure(rng, n, atoms(rng), false);
    const DiscreteMeasure b = random_measure(rng, n, atoms(rng), false);
    CheckReport r = tw_identity_check(a, b);
    char id[32];
    std::snprintf(id, sizeof id, "/%03d", trial);
    r.check_id += id;
    out.push_back(std::move(r));
  }
  for (int trial = 0; trial < 50; ++trial) {
    const DiscreteMeasure a = random_measure(rng, 1, atoms(rng), false);
    const DiscreteMeasure b = random_measure(rng, 1, atoms(rng), false);
    char id[40];
    std::snprintf(id, sizeof id, "monotone_vs_lp/%03d", trial);
    out.push_back(CheckReport::identity(
        id, max_correlation_cost(a, b).value, max_correlation_cost_lp(a, b).value, 1e-10,
        {"1D maximal correlation: the monotone coupling is optimal"}));
  }
  const std::vector<std::string> prov_t{
      "two-atom sequence: T(nu_1^k, nu_2^k) = 1 with coupling masses 1/(k+1), (k-1)/(k+1), "
      "1/(k+1)",
      "two-atom sequence: W2^2(nu_1^k, nu_2^k) = 2(k-1)"};
  for (int k : {1, 2, 5, 10, 100}) {
    const double kk = k;
    const DiscreteMeasure n1 = two_atoms(-kk, 1.0, 1.0 / (kk + 1));
    const DiscreteMeasure n2 = two_atoms(-1.0, kk, kk / (kk + 1));
    const TransportResult t = max_correlation_cost_lp(n1, n2);
    CheckReport r = CheckReport::identity("fm_transport/k=" + std::to_string(k), t.value, 1.0,
                                          1e-12, prov_t);
    const double w2 = w2_squared_lp(n1, n2).value;
    r.add("W2sq", w2);
    if (std::abs(w2 - 2 * (kk - 1)) > 1e-12 * (1 + 2 * kk)) r.fail_component("W2^2 differs");
    const Matrix& p = t.coupling.plan;  // rows: -k, 1; cols: -1, k
    if (std::abs(p(0, 0) - 1 / (kk + 1)) > 1e-12 || std::abs(p(1, 0) - (kk - 1) / (kk + 1)) > 1e-12 ||
        std::abs(p(1, 1) - 1 / (kk + 1)) > 1e-12)
      r.fail_component("coupling masses differ");
    out.push_back(std::move(r));

    const DiscreteMeasure nuk = moment_measure_pushforward(uncond_density(k));
    out.push_back(CheckReport::identity(
        "w2_uncond/k=" + std::to_string(k), w2_squared_lp(nuk, DiscreteMeasure::cube_vertices(1)).value,
        (kk * kk - kk + 1) / (kk + 1), 1e-12 * (1 + kk),
        {"unconditional sequence: W2^2(nu_k, (d_{-1}+d_1)/2) = (k^2-k+1)/(k+1)"}));
  }
  out.push_back(CheckReport::identity(
      "w2_ghost", w2_squared_lp(DiscreteMeasure::dirac(Vector::Ones(1)),
                                DiscreteMeasure::dirac(-Vector::Ones(1))).value,
      4.0, 1e-12, {"ghost equality: W2^2(d_1, d_{-1}) = 4"}));
  return out;
}

Reports sequences(const SuiteOptions& opt) {
  Reports out;
  const double c_e = opt.c > 0 ? opt.c : M_E, c_4 = opt.c > 0 ? opt.c : 4.0;
  for (int k : {1, 2, 5, 10, 100}) out.push_back(check_fm_sequence(k));
  {
    CheckReport r = check_mainresult(fm_density(10, 1), fm_density(10, 2), c_e, "fm_k10");
    out.push_back(std::move(r));
  }
  out.push_back(check_mainresult(uncond_density(100), tau_s_density(1), c_4, "uncond_k100_tau_s"));
  out.push_back(check_mainresult(gaussian_density(1), gaussian_density(1), c_e, "gamma1"));
  for (int k : {10, 100})
    out.push_back(check_mainresult2(uncond_density(k), "uncond_k" + std::to_string(k)));
  out.push_back(check_mainresult2(tau_s_density(1), "tau_s"));
  out.push_back(check_mainresult2(gaussian_density(1), "gamma1"));
  if (opt.max_dim >= 2) out.push_back(check_mainresult2(tau_s_density(2), "tau_s2"));

  const MomentSolution s = solve_moment_potential(two_atoms(-1, 1, 0.5));
  CheckReport k2 = CheckReport::identity(
      "k_functional/two_atoms", s.k_value, std::log(2.0), kTolClosedForm,
      {"K((d_{-1}+d_1)/2 | Leb) = log 2, the moment measure of e^{-|x|}/2"}, s.residual);
  k2.add("k_direct", s.k_direct);
  if (std::abs(s.k_direct - std::log(2.0)) > kTolClosedForm) k2.fail_component("direct K differs");
  out.push_back(std::move(k2));
  const Estimate kg = k_functional(discretized_gaussian(127));
  CheckReport r = CheckReport::identity(
      "k_functional/gaussian_127", kg.value, -1.0 + 0.5 * std::log(2 * M_PI * M_E), 5e-2,
      {"K(gamma|Leb) = -(n + H(gamma|Leb)) = -1 + log(2 pi e)/2, approached by quantile atoms"},
      kg.est_error);
  out.push_back(std::move(r));
  return out;
}

Reports inequalities(const SuiteOptions& opt) {
  Reports out;
  const double c_e = opt.c > 0 ? opt.c : M_E, c_4 = opt.c > 0 ? opt.c : 4.0;
  const double c_2pi = opt.c > 0 ? opt.c : 2 * M_PI;
  const Symmetry sym = Symmetry::symmetric;
  struct F {
    std::string name;
    GridFunction f;
    bool uncond;
  };
  std::vector<F> corpus{
      {"half_sq", grid1(-12, 12, 4801, [](double x) { return 0.5 * x * x; }, sym), true},
      {"abs", grid1(-30, 30, 60001, [](double x) { return std::abs(x); }, sym), true},
      {"indicator", grid1(-2, 2, 4001, [](double x) { return std::abs(x) <= 1 + 1e-12 ? 0.0 : kInf; }, sym), true},
      {"quadratic2", grid1(-10, 10, 4001, [](double x) { return x * x; }, sym), true},
      {"abs_power3", grid1(-6, 6, 4801, [](double x) { return std::pow(std::abs(x), 3) / 3; }, sym), true},
      {"uncond_k5", grid1(-6, 6, 12001, [](double x) { return 5 * std::max(std::abs(x) - 1, 0.0); }, sym), true},
      {"fm_k5", grid1(-10, 40, 50001, [](double x) { return std::max(-5 * (x + 1), x + 1); }), false}};
  for (double a : {1.0, 2.0})
    for (double b : {0.0, 1.0})
      corpus.push_back({"wedge_a" + std::to_string(int(a)) + "_b" + std::to_string(int(b)), wedge(a, b), false});
  for (const auto& f : corpus) {
    out.push_back(check_is(f.f, c_e, IsVariant::plain, f.name));
    if (f.uncond) {
      out.push_back(check_is(f.f, c_4, IsVariant::unconditional, f.name));
      const Estimate p = santalo_product(f.f);
      out.push_back(CheckReport::inequality(
          "santalo_upper/" + f.name, p.value, 2 * M_PI, kTolQuadrature * 2 * M_PI,
          {"direct functional Santalo: int e^{-f} int e^{-f*} <= (2pi)^n for even f"},
          p.est_error));
    }
  }
  if (opt.max_dim >= 2) {
    const Symmetry un = Symmetry::unconditional;
    const GridFunction l1 = grid2(16, 2001, [](const Vector& x) { return x.cwiseAbs().sum(); }, un);
    const GridFunction skew = grid2(9, 1201, [](const Vector& x) {
      return 0.5 * (x(0) * x(0) + x(0) * x(1) + x(1) * x(1));
    }, Symmetry::symmetric);
    const GridFunction q2 = grid2(9, 1201, [](const Vector& x) { return 0.5 * x.squaredNorm(); }, un);
    out.push_back(check_is(l1, c_4, IsVariant::unconditional, "gauge_l1_2d"));
    out.push_back(check_is(q2, c_4, IsVariant::unconditional, "half_sq_2d"));
    out.push_back(check_is(skew, c_e, IsVariant::symmetric, "skew_quadratic_2d"));
  }

  const LogConcaveDensity g1 = gaussian_density(1), ts = tau_s_density(1);
  out.push_back(check_epi(g1, g1, c_2pi, "gamma1"));
  out.push_back(check_epi(ts, ts, c_e, "tau_s"));
  out.push_back(check_epi(g1, normal_density(0.0, 2.0), c_e, "gamma1_normal2"));
  out.push_back(check_epi(g1.dilated(2.0), g1, c_e, "gamma1_dilated2"));
  for (const auto& b : builtins(opt.max_dim)) {
    out.push_back(check_epi(b.eta, c_2pi, b.name));
    if (b.eta.essentially_continuous()) {
      const Estimate d = lsi_deficit(b.eta);
      out.push_back(CheckReport::inequality(
          "lsi/" + b.name, 0.0, d.value, kTolClosedForm,
          {"Gaussian log-Sobolev: H(eta|g) <= I(eta|g)/2"}, d.est_error));
    }
  }
  out.push_back(check_entropy_transport(g1, g1, c_e, "gamma1"));
  out.push_back(check_entropy_transport(ts, ts, c_4, "tau_s"));
  out.push_back(check_entropy_transport(tau_density(), tau_density(true), c_e, "tau_pair"));
  out.push_back(check_entropy_transport(fm_density(5, 1), fm_density(5, 2), c_e, "fm_k5"));
  if (opt.max_dim >= 2)
    out.push_back(check_entropy_transport(tau_s_density(2), tau_s_density(2), c_4, "tau_s2"));

  std::vector<Named> ipp{{"gamma1", g1}, {"tau_s", ts}, {"quadratic3", quadratic_density(3.0)}};
  if (opt.max_dim >= 2) {
    ipp.push_back({"gamma2", gaussian_density(2)});
    ipp.push_back({"tau_s2", tau_s_density(2)});
  }
  for (const auto& b : ipp) {
    CheckReport r = ipp_check(b.eta);
    r.check_id += "/" + b.name;
    out.push_back(std::move(r));
  }
  for (int n = 1; n <= std::min(3, opt.max_dim); ++n) out.push_back(check_polytope_constants(n));
  return out;
}

}  // namespace

std::vector<CheckReport> run_suite(const std::string& name, const SuiteOptions& opt) {
  if (!(opt.tol_scale > 0.0)) throw UsageError("--tol-scale must be positive");
  if (opt.max_dim < 1) throw UsageError("--n must be at least 1");
  if (opt.c < 0.0) throw UsageError("--c must be positive");
  Reports all;
  auto append = [&](Reports r) {
    for (auto& x : r) all.push_back(std::move(x));
  };
  if (name == "duality" || name == "all") append(duality(opt));
  if (name == "transport" || name == "all") append(transport(opt));
  if (name == "sequences" || name == "all") append(sequences(opt));
  if (name == "inequalities" || name == "all") append(inequalities(opt));
  if (name != "all" && name != "duality" && name != "transport" && name != "sequences" &&
      name != "inequalities")
    throw UsageError("unknown suite '" + name +
                     "' (expected duality, transport, sequences, inequalities or all)");
  for (auto& r : all) {
    if (r.status == CheckStatus::not_applicable || opt.tol_scale == 1.0) continue;
    r.tol *= opt.tol_scale;
    r.refresh();
  }
  std::stable_sort(all.begin(), all.end(), [](const CheckReport& a, const CheckReport& b) {
    return a.check_id < b.check_id;
  });
  return all;
}

}  // namespace santalo
