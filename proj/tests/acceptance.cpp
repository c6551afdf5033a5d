// Acceptance gate: one line per criterion, tolerances pinned below.
// Exit status is 0 when every criterion passes or fails only in the known
// way its own run confirms (criterion 5, the closed-form H at k = 100).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/QR>

#include "santalo/errors.hpp"
#include "santalo/functionals.hpp"
#include "santalo/moment_measure.hpp"
#include "santalo/transport.hpp"
#include "santalo/verify.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace santalo;
using testutil::axis;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  // Set when the failure is the documented one (checked, not assumed).
  bool known_failure = false;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("FAILED ") + what;
    }
  }
  void note(const char* fmt, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, fmt, a, b);
    detail += (detail.empty() ? "" : "; ") + std::string(buf);
  }
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

GridFunction grid1(double lo, double hi, int steps, const std::function<double(double)>& f,
                   Symmetry s = Symmetry::none) {
  return GridFunction::sample({axis(lo, hi, steps)}, [&](const Vector& x) { return f(x(0)); }, s);
}

GridFunction grid2(double r, int steps, const std::function<double(const Vector&)>& f,
                   Symmetry s) {
  return GridFunction::sample({axis(-r, r, steps), axis(-r, r, steps)}, f, s);
}

// 1. santalo_product(x^2/2) = (2 pi)^n, 1e-4 relative.
Outcome gaussian_product() {
  Outcome o;
  const double p1 = santalo_product(grid1(-12, 12, 4801, [](double x) { return 0.5 * x * x; },
                                          Symmetry::symmetric)).value;
  const double p2 = santalo_product(grid2(9, 1201, [](const Vector& x) { return 0.5 * x.squaredNorm(); },
                                          Symmetry::unconditional)).value;
  o.note("n=1 rel err %.2e, n=2 rel err %.2e", rel(p1, 2 * M_PI), rel(p2, 4 * M_PI * M_PI));
  o.require(rel(p1, 2 * M_PI) < 1e-4, "n=1");
  o.require(rel(p2, 4 * M_PI * M_PI) < 1e-4, "n=2");
  return o;
}

// 2. exp_wedge products equal e, 1e-4 relative.
Outcome wedge_products() {
  Outcome o;
  double worst = 0.0;
  for (double a : {1.0, 2.0})
    for (double b : {0.0, 1.0}) {
      const GridFunction f =
          grid1(-2, 40, 42001, [=](double x) { return a * x < -1.0 - 1e-9 ? kInf : a * x + b; });
      const double e = rel(santalo_product(f).value, M_E);
      worst = std::max(worst, e);
      o.require(e < 1e-4, "a=" + std::to_string(a) + " b=" + std::to_string(b));
    }
  o.note("max rel err %.2e over 4 wedges", worst);
  return o;
}

// 3. santalo_product(|x|_1) = 4^n, 1e-4 relative.
Outcome l1_products() {
  Outcome o;
  const double p1 = santalo_product(grid1(-30, 30, 60001, [](double x) { return std::abs(x); },
                                          Symmetry::symmetric)).value;
  const double p2 = santalo_product(grid2(16, 2001, [](const Vector& x) { return x.cwiseAbs().sum(); },
                                          Symmetry::unconditional)).value;
  o.note("n=1 rel err %.2e, n=2 rel err %.2e", rel(p1, 4.0), rel(p2, 16.0));
  o.require(rel(p1, 4.0) < 1e-4, "n=1");
  o.require(rel(p2, 16.0) < 1e-4, "n=2");
  return o;
}

// 4. Two-atom sequence: H within 1e-6, T and W2^2 exact (1e-12), Delta within 5e-3.
Outcome fm_sequence() {
  Outcome o;
  double worst_delta = 0.0;
  for (int k : {1, 2, 5, 10, 100}) {
    const double kk = k;
    const CheckReport r = check_fm_sequence(k);
    const double h = -1.0 - std::log1p(1.0 / kk);
    const std::string at = " at k=" + std::to_string(k);
    o.require(std::abs(r.detail("H1") - h) < 1e-6 && std::abs(r.detail("H2") - h) < 1e-6, "H" + at);
    o.require(std::abs(r.detail("T") - 1.0) < 1e-12, "T" + at);
    o.require(std::abs(r.detail("W2sq") - 2.0 * (kk - 1.0)) < 1e-12 * (1.0 + 2.0 * kk), "W2^2" + at);
    const double gap = std::abs(r.lhs - 2.0 * std::log1p(1.0 / kk));
    worst_delta = std::max(worst_delta, gap);
    o.require(gap < 5e-3, "Delta" + at);
  }
  o.note("max |Delta - 2log(1+1/k)| = %.2e", worst_delta);
  return o;
}

// 5. Uncond sequence at k = 100 against the closed-form H, I and W2^2
// (1e-5 each) and the limit -1/2 log(pi e/2) (gap < 0.02).
Outcome uncond_sequence() {
  Outcome o;
  const int k = 100;
  const double kk = k, q = kk / (kk + 1);
  const LogConcaveDensity eta = uncond_density(k);
  const double h = relative_entropy(eta, ReferenceMeasure::gaussian(1)).value;
  const double i = fisher_information(eta).value;
  const double w2 = w2_squared(moment_measure_pushforward(eta), DiscreteMeasure::cube_vertices(1)).value;
  const double h_formula =
      0.5 * std::log(M_PI / 2) - std::log1p(1 / kk) + q * (1.0 / 6 + 2 / (kk * kk * kk) + 2 / (kk * kk));
  const double i_formula =
      q * (1.0 / 3 + (1 / kk) * (1 / (kk * kk) + std::pow(1 - kk + 1 / kk, 2)));
  const double w2_formula = (kk * kk - kk + 1) / (kk + 1);
  // Independent oracle for H: Simpson quadrature of log(d eta/d gamma_1) d eta.
  auto v = [&](double x) { return std::max({-kk * (x + 1), 0.0, kk * (x - 1)}); };
  const double reach = 1 + 60 / kk;
  auto simpson = [&](auto g) { return testutil::simpson(g, {-1.0, 1.0}, -reach, reach); };
  const double z = simpson([&](double x) { return std::exp(-v(x)); });
  const double h_oracle =
      simpson([&](double x) { return (-v(x) - std::log(z) + 0.5 * std::log(2 * M_PI) + 0.5 * x * x) *
                                     std::exp(-v(x)); }) / z;

  const double combo = 0.5 * i - h - 0.5 * w2;
  const double limit = -0.5 * std::log(M_PI * M_E / 2);
  o.note("|H - formula| = %.3e, |H - quadrature oracle| = %.1e", std::abs(h - h_formula),
         std::abs(h - h_oracle));
  o.note("|I - formula| = %.1e, |W2^2 - formula| = %.1e", std::abs(i - i_formula),
         std::abs(w2 - w2_formula));
  o.note("combination %.6f, gap to limit %.2e", combo, std::abs(combo - limit));
  o.require(std::abs(h - h_formula) < 1e-5, "H vs closed form");
  o.require(std::abs(i - i_formula) < 1e-5, "I vs closed form");
  o.require(std::abs(w2 - w2_formula) < 1e-5, "W2^2 vs closed form");
  o.require(std::abs(combo - limit) < 0.02, "limit gap");
  // The H closed form is off by about 5.05e-3 at k = 100; the failure is
  // accepted only if H itself agrees with quadrature and nothing else fails.
  o.known_failure = std::abs(h - h_oracle) < 1e-8 && std::abs(h - h_formula) > 5e-3 &&
                    std::abs(i - i_formula) < 1e-5 && std::abs(w2 - w2_formula) < 1e-5 &&
                    std::abs(combo - limit) < 0.02;
  return o;
}

// 6. Ghost equality for tau and its mirror, 1e-6.
Outcome ghost_equality() {
  Outcome o;
  const LogConcaveDensity t = tau_density(), tb = tau_density(true);
  const ReferenceMeasure g = ReferenceMeasure::gaussian(1);
  const double h = relative_entropy(t, g).value, hb = relative_entropy(tb, g).value;
  const double i = fisher_information(t).value, ib = fisher_information(tb).value;
  const double w2 = w2_squared_lp(moment_measure_pushforward(t), moment_measure_pushforward(tb)).value;
  const double hx = 0.5 * std::log(2 * M_PI / M_E);
  const double lhs = h + hb + 0.5 * w2, rhs = 0.5 * i + 0.5 * ib + std::log(2 * M_PI / M_E);
  o.note("max |H - 1/2 log(2pi/e)| = %.1e, max |I~ - 2| = %.1e",
         std::max(std::abs(h - hx), std::abs(hb - hx)), std::max(std::abs(i - 2), std::abs(ib - 2)));
  o.note("|W2^2 - 4| = %.1e, equality gap %.1e", std::abs(w2 - 4), std::abs(lhs - rhs));
  o.require(std::abs(h - hx) < 1e-6 && std::abs(hb - hx) < 1e-6, "H");
  o.require(std::abs(i - 2) < 1e-6 && std::abs(ib - 2) < 1e-6, "I~");
  o.require(std::abs(w2 - 4) < 1e-6, "W2^2");
  o.require(std::abs(lhs - rhs) < 1e-6, "equality");
  return o;
}

// Max deviation of b_true - b_solved from an affine function y.a + c.
double gauge_residual(const MaxAffineFunction& truth, const MomentSolution& s) {
  const DiscreteMeasure& nu = s.target;
  const int n = nu.dim();
  Matrix ls(nu.size(), n + 1);
  Vector rhs(nu.size());
  for (Eigen::Index i = 0; i < nu.size(); ++i) {
    Eigen::Index match = -1;
    for (Eigen::Index j = 0; j < truth.slopes().rows(); ++j)
      if ((truth.slopes().row(j) - nu.atoms().row(i)).norm() < 1e-12) match = j;
    if (match < 0) return kInf;
    ls.row(i).head(n) = nu.atoms().row(i);
    ls(i, n) = 1.0;
    rhs(i) = truth.intercepts()(match) - s.potential.intercepts()(i);
  }
  const Vector sol = ls.colPivHouseholderQr().solve(rhs);
  return (ls * sol - rhs).cwiseAbs().maxCoeff();
}

// 7. Moment-solver roundtrips: residual < 1e-8, intercepts < 1e-7 up to the gauge.
Outcome moment_roundtrips() {
  Outcome o;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_res = 0.0, worst_b = 0.0;
  int count = 0;
  auto run = [&](const MaxAffineFunction& v) {
    const DiscreteMeasure nu = moment_measure_pushforward(LogConcaveDensity(v, Symmetry::none));
    const MomentSolution s = solve_moment_potential(nu);
    worst_res = std::max(worst_res, s.residual);
    worst_b = std::max(worst_b, gauge_residual(v, s));
    ++count;
  };
  for (int t = 0; t < 20; ++t) {
    // Slopes of both signs with increasing breakpoints, so every piece is active.
    const int m = 2 + static_cast<int>(u(rng) * 11);
    const int neg = 1 + static_cast<int>(u(rng) * (m - 1));
    Matrix y(m, 1);
    for (int j = 0; j < m; ++j) y(j, 0) = (j < neg ? -1.0 : 1.0) * (0.2 + 3.0 * u(rng));
    std::sort(y.data(), y.data() + m);
    for (int j = 1; j < m; ++j) y(j, 0) += 1e-3 * j;
    Vector b(m);
    b(0) = u(rng) - 0.5;
    double c = -2.0;
    for (int j = 0; j + 1 < m; ++j) {
      c += 0.1 + u(rng);
      b(j + 1) = b(j) + (y(j + 1, 0) - y(j, 0)) * c;
    }
    run(MaxAffineFunction(y, b));
  }
  std::uniform_real_distribution<double> s(-1.0, 1.0);
  for (int t = 0; t < 5; ++t) {
    const int m = 4 + 2 * t;
    Matrix y(m, 2);
    for (int j = 0; j < m; ++j) {
      const double ang = 2 * M_PI * (j + 0.3 * s(rng)) / m;
      const double r = 1.0 + 0.5 * s(rng);
      y.row(j) << r * std::cos(ang), r * std::sin(ang);
    }
    Vector b(m);
    for (int j = 0; j < m; ++j) b(j) = 0.3 * s(rng);
    run(MaxAffineFunction(y, b));
  }
  o.note("%.0f targets, max residual %.1e", count, worst_res);
  o.note("max intercept error %.1e", worst_b);
  o.require(count == 25, "target count");
  o.require(worst_res < 1e-8, "residual");
  o.require(worst_b < 1e-7, "intercepts");
  return o;
}

// 8. K = log 2 both ways (1e-6); discretized Gaussian at 127 atoms within 5e-2.
Outcome k_functional_values() {
  Outcome o;
  Matrix a(2, 1);
  a << -1, 1;
  const MomentSolution s = solve_moment_potential(DiscreteMeasure(a, Vector::Constant(2, 0.5)));
  const double kg = k_functional(discretized_gaussian(127)).value;
  const double kg_limit = -1.0 + 0.5 * std::log(2 * M_PI * M_E);
  o.note("|K - log2| = %.1e (sum), %.1e (T+H)", std::abs(s.k_value - std::log(2.0)),
         std::abs(s.k_direct - std::log(2.0)));
  o.note("|K(nu_127) - K(gamma)| = %.2e", std::abs(kg - kg_limit));
  o.require(std::abs(s.k_value - std::log(2.0)) < 1e-6, "K via intercepts");
  o.require(std::abs(s.k_direct - std::log(2.0)) < 1e-6, "K via T+H");
  o.require(std::abs(kg - kg_limit) < 5e-2, "discretized Gaussian");
  return o;
}

// 9. TW identity (1e-9), LP vs brute force (exact), monotone vs LP (1e-10).
Outcome transport_identities() {
  Outcome o;
  std::mt19937_64 rng(909);
  std::uniform_int_distribution<int> sz(1, 10);
  double tw = 0.0;
  for (int t = 0; t < 200; ++t) {
    const int dim = 1 + t % 2;
    const CheckReport r = tw_identity_check(oracles::random_measure(rng, dim, sz(rng)),
                                            oracles::random_measure(rng, dim, sz(rng)));
    tw = std::max(tw, std::abs(r.margin));
  }
  double brute = 0.0;
  int instances = 0;
  for (int m = 1; m <= 4; ++m)
    for (int n = 1; n <= 4; ++n)
      for (int rep = 0; rep < 5; ++rep)
        for (int dim : {1, 2}) {
          const auto a = oracles::random_measure(rng, dim, m);
          const auto b = oracles::random_measure(rng, dim, n);
          Matrix c(m, n);
          for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) c(i, j) = -a.atom(i).dot(b.atom(j));
          const double e = -oracles::brute_force_min(a.weights(), b.weights(), c);
          brute = std::max(brute, std::abs(max_correlation_cost_lp(a, b).value - e));
          ++instances;
        }
  double mono = 0.0;
  for (int t = 0; t < 200; ++t) {
    const auto a = oracles::random_measure(rng, 1, 1 + sz(rng));
    const auto b = oracles::random_measure(rng, 1, 1 + sz(rng));
    mono = std::max(mono, std::abs(max_correlation_cost(a, b).value - max_correlation_cost_lp(a, b).value));
    mono = std::max(mono, std::abs(w2_squared(a, b).value - w2_squared_lp(a, b).value));
  }
  o.note("TW gap %.1e on 200 pairs, LP vs brute force %.1e", tw, brute);
  o.note("over %.0f instances, monotone vs LP %.1e", instances, mono);
  o.require(tw < 1e-9, "TW identity");
  // Exact up to the last bits of the enumeration's own sums.
  o.require(brute < 1e-12, "LP vs brute force");
  o.require(mono < 1e-10, "monotone vs LP");
  return o;
}

// 10. Entropy duality equality (1e-8), reverse duality (1e-4), weak duality (1e-8).
Outcome duality_batteries() {
  Outcome o;
  double eq = 0.0, rev = 0.0, weak = kInf;
  int n_eq = 0, n_rev = 0, n_weak = 0;
  for (const CheckReport& r : run_suite("duality")) {
    const auto starts = [&](const char* p) { return r.check_id.rfind(p, 0) == 0; };
    if (starts("entropy_duality/") && r.kind == CheckKind::identity) {
      eq = std::max(eq, std::abs(r.margin));
      ++n_eq;
    } else if (starts("reverse_duality/")) {
      rev = std::max(rev, std::abs(r.margin));
      o.require(r.status != CheckStatus::not_applicable, r.check_id + " not applicable");
      ++n_rev;
    } else if (starts("weak_duality/")) {
      weak = std::min(weak, r.margin);
      ++n_weak;
    }
  }
  o.note("equality gap %.1e over %.0f built-ins", eq, n_eq);
  o.note("reverse gap %.1e over %.0f functions", rev, n_rev);
  o.note("min weak margin %.3f over %.0f pairs", weak, n_weak);
  o.require(n_eq >= 9 && eq < 1e-8, "entropy duality equality");
  o.require(n_rev == 3 && rev < 1e-4, "reverse duality");
  o.require(n_weak == 100 && weak >= -1e-8, "weak duality");
  return o;
}

// 11. N(gamma_n) I_Leb(gamma_n) = n (1e-6); N N T^2 invariant under dilation (1e-8).
Outcome stam_and_dilation() {
  Outcome o;
  double stam = 0.0;
  for (int n = 1; n <= 2; ++n) {
    const LogConcaveDensity g = gaussian_density(n);
    stam = std::max(stam, std::abs(entropy_power(g).value * fisher_information_lebesgue(g).value - n));
  }
  const LogConcaveDensity ts = tau_s_density(1), g = gaussian_density(1);
  const double base = check_epi(ts, g, M_E).detail("product");
  double dil = 0.0;
  for (double lambda : {0.5, 2.0}) {
    dil = std::max(dil, rel(check_epi(ts.dilated(lambda), g, M_E).detail("product"), base));
    dil = std::max(dil, rel(check_epi(ts.dilated(lambda), g.dilated(lambda), M_E).detail("product"), base));
  }
  o.note("max |N I - n| = %.1e, dilation rel change %.1e", stam, dil);
  o.require(stam < 1e-6, "Stam equality");
  o.require(dil < 1e-8, "dilation invariance");
  return o;
}

// 12. 1/4 W2^2(N(-a,1), N(a,1)) = H + H by closed forms (1e-9).
Outcome symmetric_talagrand() {
  Outcome o;
  double worst = 0.0;
  for (double a : {0.5, 1.0, 2.0}) {
    const GaussianMeasure g1{Vector::Constant(1, -a), Vector::Ones(1)};
    const GaussianMeasure g2{Vector::Constant(1, a), Vector::Ones(1)};
    const double hh = relative_entropy_gaussian(g1) + relative_entropy_gaussian(g2);
    // a^2/2 + a^2/2 and (2a)^2/4, the hand values of both sides.
    o.require(std::abs(hh - a * a) < 1e-12, "entropy closed form");
    worst = std::max(worst, std::abs(0.25 * w2_squared(g1, g2) - hh));
  }
  o.note("max gap %.1e", worst);
  o.require(worst < 1e-9, "equality");
  return o;
}

// 13. T(nu, eta) = n (1e-5).
Outcome integration_by_parts() {
  Outcome o;
  double worst = 0.0;
  const std::pair<const char*, LogConcaveDensity> cases[] = {
      {"gamma1", gaussian_density(1)},   {"gamma2", gaussian_density(2)},
      {"tau_s", tau_s_density(1)},       {"tau_s2", tau_s_density(2)},
      {"quadratic3", quadratic_density(3.0)}};
  for (const auto& [name, eta] : cases) {
    const CheckReport r = ipp_check(eta);
    const double gap = std::abs(r.detail("T") - eta.dim());
    worst = std::max(worst, gap);
    o.require(r.status != CheckStatus::not_applicable && gap < 1e-5, name);
  }
  o.note("max |T - n| = %.1e over 5 densities", worst);
  return o;
}

// 14. Polytope constants exact (1e-12 relative) for n <= 3; Laplace integral 1e-5 for n <= 2.
Outcome polytope_constants() {
  Outcome o;
  double exact = 0.0, lap = 0.0;
  for (int n = 1; n <= 3; ++n) {
    const CheckReport r = check_polytope_constants(n);
    const double nf = std::tgamma(n + 1.0);
    exact = std::max({exact, rel(r.detail("vol_b1_vol_binf"), std::pow(4.0, n) / nf),
                      rel(r.detail("simplex_product"), std::pow(n + 1.0, n + 1) / (nf * nf))});
    // n! Vol(B_1^n) = n! 2^n / n! = 2^n.
    if (n <= 2) lap = std::max(lap, rel(r.detail("laplace_l1"), std::pow(2.0, n)));
  }
  o.note("volume products rel err %.1e, Laplace integral rel err %.1e", exact, lap);
  o.require(exact < 1e-12, "volume products");
  o.require(lap < 1e-5, "Laplace integral");
  return o;
}

struct Criterion {
  int id;
  const char* title;
  Outcome (*run)();
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "Gaussian Santalo product", gaussian_product},
      {2, "wedge equality family", wedge_products},
      {3, "l1 gauge equality family", l1_products},
      {4, "two-atom sequence pipeline", fm_sequence},
      {5, "unconditional sequence closed forms", uncond_sequence},
      {6, "ghost equality for tau", ghost_equality},
      {7, "moment solver roundtrips", moment_roundtrips},
      {8, "K functional", k_functional_values},
      {9, "transport identities", transport_identities},
      {10, "duality batteries", duality_batteries},
      {11, "Stam equality and dilation", stam_and_dilation},
      {12, "symmetric Talagrand equality", symmetric_talagrand},
      {13, "integration by parts", integration_by_parts},
      {14, "polytope constants", polytope_constants},
  };
  int failed = 0, known = 0;
  const auto start = std::chrono::steady_clock::now();
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.known_failure = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const char* tag = o.pass ? "PASS" : (o.known_failure ? "FAIL (known)" : "FAIL");
    std::printf("[%s] %2d %s (%.1fs): %s\n", tag, c.id, c.title, secs, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) (o.known_failure ? known : failed)++;
  }
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d/14 pass, %d known failure(s), %d unexpected failure(s), %.1fs\n",
              14 - failed - known, known, failed, total);
  return failed == 0 ? 0 : 1;
}
