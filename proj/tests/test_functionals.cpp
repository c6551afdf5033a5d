#include <doctest.h>

#include <cmath>
#include <random>

#include "santalo/errors.hpp"
#include "santalo/functionals.hpp"
#include "test_util.hpp"

using namespace santalo;
using testutil::axis;

namespace {

GridFunction sample1(double lo, double hi, int steps, double (*f)(double),
                     Symmetry s = Symmetry::none) {
  return GridFunction::sample({axis(lo, hi, steps)}, [&](const Vector& x) { return f(x(0)); }, s);
}

double half_sq(double x) { return 0.5 * x * x; }
double absv(double x) { return std::abs(x); }

// All built-in densities.
std::vector<std::pair<std::string, LogConcaveDensity>> builtins() {
  return {{"gamma1", gaussian_density(1)},   {"gamma2", gaussian_density(2)},
          {"normal", normal_density(0.5, 2.0)}, {"quadratic3", quadratic_density(3.0)},
          {"tau", tau_density()},            {"tau_bar", tau_density(true)},
          {"tau_s", tau_s_density(1)},       {"tau_s2", tau_s_density(2)},
          {"fm1", fm_density(5, 1)},         {"fm2", fm_density(5, 2)},
          {"uncond", uncond_density(10)}};
}

}  // namespace

TEST_CASE("Santalo products of the reference examples") {
  const GridFunction g = sample1(-12, 12, 4801, half_sq, Symmetry::symmetric);
  CHECK(santalo_product(g).value == doctest::Approx(2 * M_PI).epsilon(1e-5));
  const GridFunction a = sample1(-30, 30, 60001, absv, Symmetry::symmetric);
  CHECK(santalo_product(a).value == doctest::Approx(4.0).epsilon(1e-5));
  const GridFunction w = GridFunction::sample({axis(-2, 40, 42001)}, [](const Vector& x) {
    return x(0) < -1 - 1e-9 ? kInf : x(0);
  });
  CHECK(santalo_product(w).value == doctest::Approx(M_E).epsilon(1e-5));
  const GridFunction lin = sample1(-1, 1, 11, [](double x) { return x; });
  CHECK_THROWS_AS(santalo_product(lin), NotAdmissible);
}

TEST_CASE("twisted log-Laplace transform") {
  const GridFunction g = sample1(-12, 12, 4801, half_sq, Symmetry::symmetric);
  const auto leb = ReferenceMeasure::lebesgue(1);
  CHECK(log_laplace_star(g, leb).value == doctest::Approx(-0.5 * std::log(2 * M_PI)).epsilon(1e-5));
  CHECK(log_laplace_star(g, ReferenceMeasure::gaussian(1)).value ==
        doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-5));
  const GridFunction a = sample1(-30, 30, 6001, absv, Symmetry::symmetric);
  CHECK(log_laplace_star(a, leb).value == doctest::Approx(-std::log(2.0)).epsilon(1e-9));
  Matrix S(2, 1);
  S << -1, 1;
  CHECK(log_laplace_star(MaxAffineFunction(S, Vector::Zero(2))).value ==
        doctest::Approx(-std::log(2.0)).epsilon(1e-14));
  // Oracle: f*(y) = max over the kinks t_k of (t_k y - f(t_k)), integrated
  // by Simpson over the slope range.
  Matrix T(4, 1);
  T << -2, -0.5, 0.3, 1.7;
  Vector B(4);
  B << 0.4, -0.1, 0.0, 0.9;
  const MaxAffineFunction v(T, B);
  std::vector<double> kinks;
  for (int k = 0; k + 1 < 4; ++k) kinks.push_back((B(k + 1) - B(k)) / (T(k + 1, 0) - T(k, 0)));
  auto fstar = [&](double y) {
    double m = -kInf;
    for (double t : kinks) m = std::max(m, t * y - v(Vector::Constant(1, t)));
    return m;
  };
  const double z = testutil::simpson([&](double y) { return std::exp(-fstar(y)); },
                                     {-0.5, 0.3}, -2.0, 1.7);
  CHECK(log_laplace_star(v).value == doctest::Approx(-std::log(z)).epsilon(1e-12));
}

TEST_CASE("log-Laplace midpoint convexity on random pairs") {
  std::mt19937_64 rng(11);
  const auto leb = ReferenceMeasure::lebesgue(1);
  int checked = 0;
  for (int t = 0; t < 50; ++t) {
    const testutil::RandomConvex1D p(rng), q(rng);
    const auto ax = axis(-1, 1, 401);
    const GridFunction f0 = GridFunction::sample({ax}, [&](const Vector& x) { return p(x(0)); });
    const GridFunction f1 = GridFunction::sample({ax}, [&](const Vector& x) { return q(x(0)); });
    const GridFunction fm =
        GridFunction::sample({ax}, [&](const Vector& x) { return 0.5 * (p(x(0)) + q(x(0))); });
    const double l0 = log_laplace_star(f0, leb).value;
    const double l1 = log_laplace_star(f1, leb).value;
    const double lm = log_laplace_star(fm, leb).value;
    CHECK(lm <= 0.5 * l0 + 0.5 * l1 + 1e-6 * (1 + std::abs(lm)));
    ++checked;
  }
  CHECK(checked == 50);
}

TEST_CASE("relative entropy examples") {
  const auto g1 = ReferenceMeasure::gaussian(1);
  CHECK(std::abs(relative_entropy(gaussian_density(1), g1).value) < 1e-12);
  CHECK(relative_entropy(tau_density(), g1).value ==
        doctest::Approx(0.5 * std::log(2 * M_PI / M_E)).epsilon(1e-6));
  CHECK(relative_entropy(tau_density(true), g1).value ==
        doctest::Approx(0.5 * std::log(2 * M_PI / M_E)).epsilon(1e-6));
  CHECK(relative_entropy(tau_s_density(2), ReferenceMeasure::gaussian(2)).value ==
        doctest::Approx(std::log(M_PI / 2)).epsilon(1e-11));
  CHECK(relative_entropy(tau_s_density(1), ReferenceMeasure::lebesgue(1)).value ==
        doctest::Approx(-1 - std::log(2.0)).epsilon(1e-14));
  // Reference e^{-x^2/2} dx: H(gamma_1|m) = -1/2 log(2 pi).
  const auto m = ReferenceMeasure::logconcave(sample1(-15, 15, 601, half_sq));
  CHECK(relative_entropy(gaussian_density(1), m).value ==
        doctest::Approx(-0.5 * std::log(2 * M_PI)).epsilon(1e-10));
  const auto box = ReferenceMeasure::logconcave(
      sample1(-2, 2, 41, [](double x) { return std::abs(x) > 1 + 1e-9 ? kInf : 0.0; }));
  CHECK_THROWS_AS(relative_entropy(gaussian_density(1), box), NotAbsolutelyContinuous);
  CHECK_THROWS_AS(relative_entropy(gaussian_density(2), g1), DimensionError);
}

TEST_CASE("Fisher information and deficits") {
  CHECK(fisher_information(gaussian_density(1)).value < 1e-12);
  CHECK(fisher_information(tau_s_density(1)).value == doctest::Approx(1.0).epsilon(1e-14));
  const FisherValue t = fisher_information(tau_density());
  CHECK(t.value == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(t.tilde_only);
  CHECK(t.boundary_warning);
  CHECK_FALSE(fisher_information(tau_s_density(1)).tilde_only);
  CHECK(fisher_information_lebesgue(tau_s_density(1)).value == doctest::Approx(1.0));

  CHECK(std::abs(lsi_deficit(gaussian_density(1)).value) < 1e-12);
  CHECK(std::abs(lsi_deficit(gaussian_density(2)).value) < 1e-12);

  // tau_s: independent Simpson oracle for H(.|gamma_1) and I(.|gamma_1).
  auto dens = [](double x) { return 0.5 * std::exp(-std::abs(x)); };
  const double H = testutil::simpson(
      [&](double x) { return dens(x) * (-std::abs(x) - std::log(2.0) + 0.5 * x * x + 0.5 * std::log(2 * M_PI)); },
      {0.0}, -60, 60);
  const double I = testutil::simpson(
      [&](double x) { const double d = (x > 0 ? 1.0 : -1.0) - x; return dens(x) * d * d; }, {0.0}, -60, 60);
  const double delta_ts = lsi_deficit(tau_s_density(1)).value;
  CHECK(delta_ts == doctest::Approx(0.5 * I - H).epsilon(1e-9));
  CHECK(delta_ts == doctest::Approx(0.5 - 0.5 * std::log(M_PI / 2)).epsilon(1e-12));
  CHECK(delta_ts >= 0.0);

  // N(0, sigma^2): I = (1 - s^2)^2 / s^2, H = s^2/2 - 1/2 - log s.
  const double s = 2.0;
  const double closed = (1 - s * s) * (1 - s * s) / (2 * s * s) - (s * s / 2 - 0.5 - std::log(s));
  CHECK(lsi_deficit(normal_density(0.0, s)).value == doctest::Approx(closed).epsilon(1e-8));

  const Estimate prod = lsi_deficit_product(tau_s_density(1), tau_s_density(1));
  CHECK(prod.value == doctest::Approx(lsi_deficit(tau_s_density(2)).value).epsilon(1e-11));
  for (auto& [name, d] : builtins()) {
    if (!d.essentially_continuous()) continue;
    CAPTURE(name);
    CHECK(lsi_deficit(d).value >= -1e-6);
  }
}

TEST_CASE("entropy power and Stam") {
  CHECK(entropy_power(gaussian_density(1)).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(entropy_power(gaussian_density(2)).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(entropy_power(normal_density(0.0, 3.0)).value == doctest::Approx(9.0).epsilon(1e-12));
  CHECK(entropy_power(tau_s_density(1)).value == doctest::Approx(2 * M_E / M_PI).epsilon(1e-13));
  for (auto& [name, d] : builtins()) {
    if (!d.finite_potential()) continue;
    CAPTURE(name);
    const double stam = entropy_power(d).value * fisher_information_lebesgue(d).value;
    CHECK(stam >= d.dim() * (1 - 1e-6));
  }
  for (int n = 1; n <= 2; ++n) {
    const LogConcaveDensity g = gaussian_density(n);
    CHECK(entropy_power(g).value * fisher_information_lebesgue(g).value ==
          doctest::Approx(n).epsilon(1e-6));
  }
}

TEST_CASE("entropy duality equality at the log density of every built-in") {
  const auto leb1 = ReferenceMeasure::lebesgue(1);
  for (auto& [name, d] : builtins()) {
    CAPTURE(name);
    const ReferenceMeasure leb = ReferenceMeasure::lebesgue(d.dim());
    Potential g = d.potential();
    if (d.is_grid()) g = d.grid().plus_constant(d.log_norm());
    else g = d.max_affine().plus_constant(d.log_norm());
    const CheckReport r = entropy_duality_check(d, g, leb, true);
    CHECK(r.passed());
    CHECK(std::abs(r.detail("gap")) < 1e-8);
  }
  // f = -x^2/4 against tau_s: strict inequality.
  const CheckReport strict =
      entropy_duality_check(tau_s_density(1), sample1(-40, 40, 8001, [](double x) { return 0.25 * x * x; }), leb1);
  CHECK(strict.passed());
  CHECK(strict.detail("gap") > 0.01);
  // f = 0 against the Gaussian reference.
  const CheckReport zero = entropy_duality_check(
      gaussian_density(1), sample1(-12, 12, 481, [](double) { return 0.0; }),
      ReferenceMeasure::gaussian(1), true);
  CHECK(zero.passed());
  CHECK(std::abs(zero.detail("gap")) < 1e-10);
}

TEST_CASE("Gaussian entropy identity by two quadrature paths") {
  for (auto& [name, d] : builtins()) {
    CAPTURE(name);
    const int n = d.dim();
    const double h_g = relative_entropy(d, ReferenceMeasure::gaussian(n)).value;
    const double h_l = relative_entropy(d, ReferenceMeasure::lebesgue(n)).value;
    // Second path: the rule integrates |x|^2/2 directly.
    const DensityRule r = d.rule();
    const double half_m2 = 0.5 * r.weights.dot(r.points.rowwise().squaredNorm());
    CHECK(std::abs(h_g - h_l - half_m2 - 0.5 * n * std::log(2 * M_PI)) < 1e-8 * (1 + half_m2));
  }
}
