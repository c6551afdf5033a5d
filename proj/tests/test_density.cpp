#include <doctest.h>

#include <cmath>

#include "santalo/density.hpp"
#include "santalo/errors.hpp"
#include "test_util.hpp"

using namespace santalo;

namespace {

// Moments of e^{-V}/Z for a 1D potential by Simpson quadrature.
struct Oracle1D {
  double logZ, EV, m2, I_leb, I_gauss;
};

template <class V, class DV>
Oracle1D oracle(V&& v, DV&& dv, std::vector<double> breaks, double lo, double hi) {
  const double Z = testutil::simpson([&](double x) { return std::exp(-v(x)); }, breaks, lo, hi);
  auto mom = [&](auto g) {
    return testutil::simpson([&](double x) { return g(x) * std::exp(-v(x)); }, breaks, lo, hi) / Z;
  };
  Oracle1D o;
  o.logZ = std::log(Z);
  o.EV = mom([&](double x) { return v(x); });
  o.m2 = mom([&](double x) { return x * x; });
  o.I_leb = mom([&](double x) { return dv(x) * dv(x); });
  o.I_gauss = mom([&](double x) { return (dv(x) - x) * (dv(x) - x); });
  return o;
}

void check_against(const LogConcaveDensity& d, const Oracle1D& o, double tol) {
  const MomentSummary& m = d.moments();
  CHECK(m.log_norm == doctest::Approx(o.logZ).epsilon(tol));
  CHECK(m.mean_potential == doctest::Approx(o.EV).epsilon(tol));
  CHECK(m.second_moment == doctest::Approx(o.m2).epsilon(tol));
  CHECK(m.fisher_lebesgue == doctest::Approx(o.I_leb).epsilon(tol));
  CHECK(m.fisher_gaussian == doctest::Approx(o.I_gauss).epsilon(tol));
}

}  // namespace

TEST_CASE("standard Gaussian summary") {
  for (int n = 1; n <= 2; ++n) {
    const LogConcaveDensity g = gaussian_density(n);
    const MomentSummary& m = g.moments();
    CHECK(m.log_norm == doctest::Approx(0.5 * n * std::log(2 * M_PI)).epsilon(1e-12));
    CHECK(m.mean_potential == doctest::Approx(0.5 * n).epsilon(1e-12));
    CHECK(m.second_moment == doctest::Approx(n).epsilon(1e-12));
    CHECK(m.fisher_lebesgue == doctest::Approx(n).epsilon(1e-12));
    CHECK(m.fisher_gaussian < 1e-12);
    CHECK(m.virial == doctest::Approx(n).epsilon(1e-12));
    CHECK(m.mean.norm() < 1e-14);
    CHECK(g.essentially_continuous());
    CHECK(g.finite_potential());
    CHECK_FALSE(m.boundary_warning);
  }
}

TEST_CASE("tau_s and its square are exact") {
  const LogConcaveDensity t = tau_s_density(1);
  const MomentSummary& m = t.moments();
  CHECK(m.log_norm == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(m.mean_potential == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(m.second_moment == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(m.fisher_lebesgue == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(m.fisher_gaussian == doctest::Approx(1.0).epsilon(1e-14));
  const LogConcaveDensity t2 = tau_s_density(2);
  CHECK(t2.moments().log_norm == doctest::Approx(std::log(4.0)).epsilon(1e-12));
  CHECK(t2.moments().fisher_gaussian == doctest::Approx(2.0).epsilon(1e-11));
  CHECK(t2.moments().virial == doctest::Approx(2.0).epsilon(1e-11));
  CHECK(t2.symmetry() == Symmetry::unconditional);
  const LogConcaveDensity shifted(tau_s_density(1).max_affine().plus_constant(3.0));
  CHECK(shifted.log_norm() == doctest::Approx(std::log(2.0) - 3.0).epsilon(1e-14));
  CHECK(shifted.moments().mean_potential == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("tau on a grid: ghost values and the boundary warning") {
  const LogConcaveDensity t = tau_density();
  const MomentSummary& m = t.moments();
  CHECK_FALSE(t.essentially_continuous());
  CHECK(m.boundary_warning);
  CHECK(std::abs(m.log_norm) < 1e-7);
  CHECK(m.mean_potential == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(m.fisher_gaussian == doctest::Approx(2.0).epsilon(1e-6));
  const LogConcaveDensity r = tau_density(true);
  CHECK(r.moments().fisher_gaussian == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(r.moments().mean(0) == doctest::Approx(-m.mean(0)).epsilon(1e-12));
}

TEST_CASE("sequence densities against Simpson oracles") {
  for (int k : {1, 2, 5, 10, 100}) {
    const double kk = k;
    auto v = [&](double x) { return std::max(-kk * (x + 1), x + 1); };
    auto dv = [&](double x) { return x < -1 ? -kk : 1.0; };
    check_against(fm_density(k, 1), oracle(v, dv, {-1.0}, -1 - 60 / kk, 60.0), 1e-9);
    CHECK(fm_density(k, 1).moments().log_norm == doctest::Approx(std::log((1.0 + k) / k)).epsilon(1e-13));

    auto u = [&](double x) { return std::max({-kk * (x + 1), 0.0, kk * (x - 1)}); };
    auto du = [&](double x) { return x < -1 ? -kk : (x > 1 ? kk : 0.0); };
    const double reach = 1 + 60 / kk;
    check_against(uncond_density(k), oracle(u, du, {-1.0, 1.0}, -reach, reach), 1e-9);
    CHECK(uncond_density(k).moments().log_norm ==
          doctest::Approx(std::log(2.0 * (k + 1) / k)).epsilon(1e-13));
  }
}

TEST_CASE("normal densities and dilation") {
  const double sigma = 3.0;
  const LogConcaveDensity g = normal_density(0.0, sigma);
  CHECK(g.moments().second_moment == doctest::Approx(sigma * sigma).epsilon(1e-12));
  CHECK(g.moments().fisher_lebesgue == doctest::Approx(1 / (sigma * sigma)).epsilon(1e-12));
  const LogConcaveDensity q = quadratic_density(3.0);
  CHECK(q.moments().virial == doctest::Approx(1.0).epsilon(1e-12));

  const LogConcaveDensity d = tau_s_density(1).dilated(2.0);
  CHECK(d.moments().second_moment == doctest::Approx(8.0).epsilon(1e-13));
  CHECK(d.moments().fisher_lebesgue == doctest::Approx(0.25).epsilon(1e-13));
  const LogConcaveDensity e = gaussian_density(1).dilated(0.5);
  CHECK(e.moments().second_moment == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("density validation") {
  const GridFunction concave = GridFunction::sample(
      {testutil::axis(-1, 1, 21)}, [](const Vector& x) { return 1.0 - x(0) * x(0); });
  CHECK_THROWS_AS(LogConcaveDensity{concave}, InvalidDensity);
  const GridFunction linear = GridFunction::sample(
      {testutil::axis(-1, 1, 21)}, [](const Vector& x) { return x(0); });
  CHECK_THROWS_AS(LogConcaveDensity{linear}, InvalidDensity);
  Matrix S(2, 1);
  S << -1, 2;
  CHECK_THROWS_AS(LogConcaveDensity(MaxAffineFunction(S, Vector::Zero(2)), Symmetry::symmetric),
                  InvalidDensity);
  const LogConcaveDensity ok(Potential(MaxAffineFunction(S, Vector::Zero(2))),
                             std::log(1.5));
  CHECK(ok.log_norm() == doctest::Approx(std::log(1.5)));
  CHECK_THROWS_AS(LogConcaveDensity(Potential(MaxAffineFunction(S, Vector::Zero(2))), 0.3),
                  InvalidDensity);
  const GridFunction step = GridFunction::sample(
      {testutil::axis(-2, 2, 41)},
      [](const Vector& x) { return std::abs(x(0)) > 1 ? kInf : 0.0; });
  CHECK_THROWS_AS(LogConcaveDensity(step, std::optional<bool>(true)), InvalidDensity);
  CHECK_FALSE(LogConcaveDensity(step).essentially_continuous());
}
