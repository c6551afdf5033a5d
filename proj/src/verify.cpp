#include "santalo/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include <Eigen/LU>

#include "santalo/errors.hpp"
#include "santalo/functionals.hpp"
#include "santalo/integrate.hpp"
#include "santalo/moment_measure.hpp"
#include "santalo/transport.hpp"

namespace santalo {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

double log_factorial(int n) { return std::lgamma(n + 1.0); }

Axis make_axis(double lo, double hi, int steps) {
  Axis a;
  a.lo = lo;
  a.hi = hi;
  a.steps = steps;
  return a;
}

// W2^2 and T between pushforwards; nullopt when the exact LP cannot take them.
bool lp_sized(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  return a.dim() == 1 || (a.size() <= 512 && b.size() <= 512);
}

}  // namespace

CheckReport check_is(const GridFunction& f, double c, IsVariant variant, const std::string& label) {
  const std::vector<std::string> prov{
      "functional inverse Santalo inequality: int e^{-f} dx int e^{-f*} dx >= c^n"};
  const std::string id = "is/" + label + "/c=" + num(c);
  if (!(c > 0.0)) throw InvalidParameter("c must be positive");
  const Symmetry s = f.symmetry();
  if (variant == IsVariant::symmetric && s == Symmetry::none)
    return CheckReport::not_applicable(id, "symmetric variant needs a symmetric f", prov);
  if (variant == IsVariant::unconditional && s != Symmetry::unconditional &&
      !(f.dim() == 1 && s == Symmetry::symmetric))
    return CheckReport::not_applicable(id, "unconditional variant needs an unconditional f",
                                       prov);
  Estimate p;
  try {
    p = santalo_product(f);
  } catch (const NotAdmissible& e) {
    return CheckReport::not_applicable(id, e.what(), prov);
  }
  const int n = f.dim();
  CheckReport r = CheckReport::inequality(id, n * std::log(c), std::log(p.value), kTolQuadrature,
                                          prov, p.est_error / p.value);
  r.add("product", p.value).add("c_pow_n", std::pow(c, n));
  return r;
}

CheckReport check_mainresult(const LogConcaveDensity& eta1, const LogConcaveDensity& eta2,
                             double c, const std::string& label) {
  const std::vector<std::string> prov{
      "transport-entropy form: H(eta1|g)+H(eta2|g)+W2^2(nu1,nu2)/2 <= "
      "I(eta1|g)/2+I(eta2|g)/2+n log(2pi/c), nu_i moment measures",
      "deficit form: delta(eta1)+delta(eta2) >= W2^2(nu1,nu2)/2 - n log(2pi/c)"};
  const std::string id = "mainresult/" + label + "/c=" + num(c);
  if (eta1.dim() != eta2.dim()) throw DimensionError("densities in different dimensions");
  if (!eta1.essentially_continuous() || !eta2.essentially_continuous())
    return CheckReport::not_applicable(id, "potentials must be essentially continuous", prov);
  const int n = eta1.dim();
  const ReferenceMeasure g = ReferenceMeasure::gaussian(n);
  const Estimate h1 = relative_entropy(eta1, g), h2 = relative_entropy(eta2, g);
  const FisherValue i1 = fisher_information(eta1), i2 = fisher_information(eta2);
  const DiscreteMeasure nu1 = moment_measure_pushforward(eta1);
  const DiscreteMeasure nu2 = moment_measure_pushforward(eta2);
  if (!lp_sized(nu1, nu2))
    return CheckReport::not_applicable(id, "moment measures too large for the exact LP", prov);
  const double w2 = w2_squared(nu1, nu2).value;
  const double lhs = h1.value + h2.value + 0.5 * w2;
  const double rhs = 0.5 * i1.value + 0.5 * i2.value + n * std::log(2 * M_PI / c);
  const double err = h1.est_error + h2.est_error + 0.5 * (i1.est_error + i2.est_error);
  CheckReport r = CheckReport::inequality(id, lhs, rhs, kTolQuadrature, prov, err);
  const double d1 = 0.5 * i1.value - h1.value, d2 = 0.5 * i2.value - h2.value;
  r.add("H1", h1.value).add("H2", h2.value).add("I1", i1.value).add("I2", i2.value);
  r.add("W2sq", w2).add("delta_sum", d1 + d2);
  r.add("deficit_margin", d1 + d2 - 0.5 * w2 + n * std::log(2 * M_PI / c));
  return r;
}

CheckReport check_mainresult2(const LogConcaveDensity& eta, const std::string& label) {
  const std::vector<std::string> prov{
      "unconditional deficit bound: delta(eta) >= W2^2(nu, uniform on {-1,1}^n)/2 - "
      "(n/2) log(pi e/2)"};
  const std::string id = "mainresult2/" + label;
  const int n = eta.dim();
  const bool uncond = eta.symmetry() == Symmetry::unconditional ||
                      (n == 1 && eta.symmetry() == Symmetry::symmetric);
  if (!uncond) return CheckReport::not_applicable(id, "eta must be unconditional", prov);
  if (!eta.essentially_continuous())
    return CheckReport::not_applicable(id, "potential must be essentially continuous", prov);
  const Estimate d = lsi_deficit(eta);
  const DiscreteMeasure nu = moment_measure_pushforward(eta);
  const DiscreteMeasure cube = DiscreteMeasure::cube_vertices(n);
  if (!lp_sized(nu, cube))
    return CheckReport::not_applicable(id, "moment measure too large for the exact LP", prov);
  const double w2 = w2_squared(nu, cube).value;
  const double lhs = 0.5 * w2 - 0.5 * n * std::log(M_PI * M_E / 2);
  CheckReport r = CheckReport::inequality(id, lhs, d.value, kTolQuadrature, prov, d.est_error);
  r.add("delta", d.value).add("W2sq", w2);
  return r;
}

CheckReport check_fm_sequence(int k) {
  if (k < 1) throw InvalidParameter("k must be at least 1");
  const std::vector<std::string> prov{
      "two-atom sequence: H(eta_i^k|Leb) = -1 - log(1+1/k), T(nu_1^k, nu_2^k) = 1, "
      "W2^2 = 2(k-1), Delta = delta_2(eta_1 x eta_2) - W2^2/2 + log(2pi/e) = 2 log(1+1/k)"};
  const LogConcaveDensity e1 = fm_density(k, 1), e2 = fm_density(k, 2);
  const ReferenceMeasure leb = ReferenceMeasure::lebesgue(1);
  const double kk = k;
  const double h_expect = -1.0 - std::log1p(1.0 / kk);
  const Estimate h1 = relative_entropy(e1, leb), h2 = relative_entropy(e2, leb);
  const DiscreteMeasure nu1 = moment_measure_pushforward(e1);
  const DiscreteMeasure nu2 = moment_measure_pushforward(e2);
  const double t = max_correlation_cost_lp(nu1, nu2).value;
  const double w2 = w2_squared_lp(nu1, nu2).value;
  const Estimate dp = lsi_deficit_product(e1, e2);
  const double delta = dp.value - 0.5 * w2 + std::log(2 * M_PI / M_E);
  const double expect = 2.0 * std::log1p(1.0 / kk);
  CheckReport r = CheckReport::identity("fm_sequence/k=" + std::to_string(k), delta, expect,
                                        kTolSolver, prov, dp.est_error);
  r.add("H1", h1.value).add("H2", h2.value).add("H_expected", h_expect);
  r.add("T", t).add("W2sq", w2).add("W2sq_expected", 2.0 * (kk - 1.0));
  r.add("Delta_via_T", t - h1.value - h2.value - 3.0);
  const double exact = 1e-12;
  if (std::abs(h1.value - h_expect) > kTolClosedForm || std::abs(h2.value - h_expect) > kTolClosedForm)
    r.fail_component("entropy differs from -1 - log(1+1/k)");
  if (std::abs(t - 1.0) > exact) r.fail_component("T differs from 1");
  if (std::abs(w2 - 2.0 * (kk - 1.0)) > exact * (1.0 + 2.0 * kk))
    r.fail_component("W2^2 differs from 2(k-1)");
  return r;
}

CheckReport check_epi(const LogConcaveDensity& eta1, const LogConcaveDensity& eta2, double c,
                      const std::string& label) {
  const std::vector<std::string> prov{
      "entropy power form: N(X1) N(X2) T(nu1,nu2)^2 >= (n c/2pi)^2"};
  const std::string id = "epi/" + label + "/c=" + num(c);
  if (eta1.dim() != eta2.dim()) throw DimensionError("densities in different dimensions");
  if (!eta1.finite_potential() || !eta2.finite_potential())
    return CheckReport::not_applicable(id, "potentials must be finite everywhere", prov);
  const int n = eta1.dim();
  const DiscreteMeasure nu1 = moment_measure_pushforward(eta1);
  const DiscreteMeasure nu2 = moment_measure_pushforward(eta2);
  if (!lp_sized(nu1, nu2))
    return CheckReport::not_applicable(id, "moment measures too large for the exact LP", prov);
  const double t = max_correlation_cost(nu1, nu2).value;
  const Estimate n1 = entropy_power(eta1), n2 = entropy_power(eta2);
  const double prod = n1.value * n2.value * t * t;
  const double bound = std::pow(n * c / (2 * M_PI), 2);
  CheckReport r = CheckReport::inequality(id, bound, prod, kTolQuadrature, prov,
                                          (n1.est_error / n1.value + n2.est_error / n2.value) * prod);
  r.add("N1", n1.value).add("N2", n2.value).add("T", t).add("product", prod);
  return r;
}

CheckReport check_epi(const LogConcaveDensity& eta, double c, const std::string& label) {
  const std::vector<std::string> prov{
      "Stam form: N(X) int |grad V|^2 d eta >= n c/(2pi), with T(nu,nu) = int |grad V|^2 d eta"};
  const std::string id = "stam/" + label + "/c=" + num(c);
  if (!eta.finite_potential())
    return CheckReport::not_applicable(id, "potential must be finite everywhere", prov);
  const Estimate ne = entropy_power(eta);
  const Estimate il = fisher_information_lebesgue(eta);
  const double prod = ne.value * il.value;
  CheckReport r = CheckReport::inequality(id, eta.dim() * c / (2 * M_PI), prod, kTolQuadrature,
                                          prov, ne.est_error * il.value + il.est_error * ne.value);
  r.add("N", ne.value).add("I_leb", il.value);
  return r;
}

CheckReport check_entropy_transport(const LogConcaveDensity& eta1, const LogConcaveDensity& eta2,
                                    double c, const std::string& label) {
  const std::string id = "entropy_transport/" + label + "/c=" + num(c);
  if (eta1.dim() != eta2.dim()) throw DimensionError("densities in different dimensions");
  const int n = eta1.dim();
  const ReferenceMeasure leb = ReferenceMeasure::lebesgue(n);
  const Estimate h1 = relative_entropy(eta1, leb), h2 = relative_entropy(eta2, leb);
  const DiscreteMeasure nu1 = moment_measure_pushforward(eta1);
  const DiscreteMeasure nu2 = moment_measure_pushforward(eta2);
  if (!lp_sized(nu1, nu2))
    return CheckReport::not_applicable(
        id, "moment measures too large for the exact LP",
        {"entropy-transport form: H(eta1|Leb)+H(eta2|Leb) <= -n log(e^2 c) + T(nu1,nu2)"});
  const double t = max_correlation_cost(nu1, nu2).value;
  const double err = h1.est_error + h2.est_error;
  if (eta1.finite_potential() && eta2.finite_potential()) {
    CheckReport r = CheckReport::inequality(
        id, h1.value + h2.value, -n * std::log(M_E * M_E * c) + t, kTolQuadrature,
        {"entropy-transport form for finite potentials: H(eta1|Leb)+H(eta2|Leb) <= "
         "-n log(e^2 c) + T(nu1,nu2)"},
        err);
    r.add("H1", h1.value).add("H2", h2.value).add("T", t);
    return r;
  }
  const double v1 = eta1.moments().virial, v2 = eta2.moments().virial;
  CheckReport r = CheckReport::inequality(
      id, v1 + h1.value + v2 + h2.value, -n * std::log(c) + t, kTolQuadrature,
      {"entropy-transport form: T(nu1,eta1)+H(eta1|Leb)+T(nu2,eta2)+H(eta2|Leb) <= "
       "-n log c + T(nu1,nu2)",
       "sanity bound T(nu_i, eta_i) = int x.grad V_i d eta_i <= n"},
      err);
  r.add("H1", h1.value).add("H2", h2.value).add("T", t).add("virial1", v1).add("virial2", v2);
  if (v1 > n + 1e-6 || v2 > n + 1e-6) r.fail_component("virial exceeds n");
  return r;
}

CheckReport check_polytope_constants(int n) {
  if (n < 1 || n > 3) throw InvalidParameter("polytope constants are computed for n = 1, 2, 3");
  const double nfact = std::exp(log_factorial(n));
  // B_1^n: 2^n orthant simplices conv{0, +-e_1, ..., +-e_n}.
  double vol_b1 = 0.0;
  for (int s = 0; s < (1 << n); ++s) {
    Matrix m = Matrix::Zero(n, n);
    for (int d = 0; d < n; ++d) m(d, d) = (s >> d) & 1 ? -1.0 : 1.0;
    vol_b1 += std::abs(m.determinant()) / nfact;
  }
  const double vol_binf = std::abs((2.0 * Matrix::Identity(n, n)).determinant());
  const double cube = vol_b1 * vol_binf;
  const double cube_closed = std::pow(4.0, n) / nfact;
  // Simplex with vertices e_1..e_n and -(1,..,1) (centroid 0) and its polar
  // {y : v_i.y <= 1}, whose vertices solve n of the n+1 facet equations.
  Matrix v(n + 1, n);
  v.topRows(n) = Matrix::Identity(n, n);
  v.row(n) = -Vector::Ones(n).transpose();
  auto simplex_volume = [&](const Matrix& p) {
    Matrix e(n, n);
    for (int i = 0; i < n; ++i) e.row(i) = p.row(i + 1) - p.row(0);
    return std::abs(e.determinant()) / nfact;
  };
  Matrix w(n + 1, n);
  for (int k = 0; k <= n; ++k) {
    Matrix a(n, n);
    for (int i = 0, r = 0; i <= n; ++i)
      if (i != k) a.row(r++) = v.row(i);
    w.row(k) = a.fullPivLu().solve(Vector::Ones(n)).transpose();
  }
  const double simplex = simplex_volume(v) * simplex_volume(w);
  const double simplex_closed = std::pow(n + 1.0, n + 1) / (nfact * nfact);

  const std::vector<std::string> prov{
      "cube and cross-polytope: Vol(B_1^n) Vol(B_inf^n) = 4^n/n!",
      "simplex: Vol(D) Vol(D polar) = (n+1)^{n+1}/(n!)^2",
      "gauge integral: int e^{-|x|_K} dx = n! Vol(K)"};
  CheckReport r;
  if (n <= 2) {
    // Trapezoid on grids with h and 2h (kinks on grid lines), Richardson-combined.
    const double R = n == 1 ? 40.0 : 18.0;
    const int steps = n == 1 ? 80001 : 2401;
    auto integral = [&](int st) {
      std::vector<Axis> axes(static_cast<std::size_t>(n), make_axis(-R, R, st));
      const GridFunction f = GridFunction::sample(
          axes, [](const Vector& x) { return x.cwiseAbs().sum(); }, Symmetry::unconditional);
      return integrate_exp_neg(f).value;
    };
    const double fine = integral(steps), coarse = integral((steps + 1) / 2);
    const double rich = fine + (fine - coarse) / 3.0;
    r = CheckReport::identity("constants/n=" + std::to_string(n), rich, nfact * vol_b1, 1e-5,
                              prov, std::abs(fine - coarse) / 3.0);
    r.add("laplace_l1", rich);
  } else {
    r = CheckReport::identity("constants/n=" + std::to_string(n), cube, cube_closed, 1e-12, prov);
  }
  r.add("vol_b1_vol_binf", cube).add("four_pow_n_over_nfact", cube_closed);
  r.add("simplex_product", simplex).add("simplex_closed", simplex_closed);
  if (std::abs(cube - cube_closed) > 1e-12 * cube_closed) r.fail_component("cube constant mismatch");
  if (std::abs(simplex - simplex_closed) > 1e-12 * simplex_closed)
    r.fail_component("simplex constant mismatch");
  return r;
}

void write_reports_csv(std::ostream& out, const std::vector<CheckReport>& reports) {
  std::ostringstream os;
  os << std::setprecision(12);
  os << "check_id,lhs,rhs,margin,tol,status,est_error\n";
  for (const auto& r : reports)
    os << r.check_id << ',' << r.lhs << ',' << r.rhs << ',' << r.margin << ',' << r.tol << ','
       << to_string(r.status) << ',' << r.est_error << '\n';
  out << os.str();
}

}  // namespace santalo
