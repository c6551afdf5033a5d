#include "santalo/moment_measure.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <Eigen/QR>

#include "santalo/cells.hpp"
#include "santalo/errors.hpp"
#include "santalo/functionals.hpp"
#include "santalo/legendre.hpp"
#include "santalo/transport.hpp"

namespace santalo {

DiscreteMeasure moment_measure_pushforward(const LogConcaveDensity& eta) {
  if (!eta.is_grid()) {
    const MaxAffineFunction& v = eta.max_affine();
    const CellIntegrals c = cell_integrals(v, false);
    return DiscreteMeasure::from_masses(v.slopes(), c.mass);
  }
  const GridFunction& f = eta.grid();
  const int n = f.dim();
  std::array<double, 2> r{1.0, 1.0};
  for (int d = 0; d < n; ++d) {
    r[static_cast<std::size_t>(d)] = slope_resolution(f, d);
    if (!(r[static_cast<std::size_t>(d)] > 0.0)) r[static_cast<std::size_t>(d)] = f.axis(d).spacing();
  }
  const DensityRule rule = eta.rule();
  struct Bin {
    double mass = 0.0;
    Vector sum;
  };
  std::map<std::array<long long, 2>, Bin> bins;
  for (Eigen::Index k = 0; k < rule.weights.size(); ++k) {
    std::array<long long, 2> key{0, 0};
    for (int d = 0; d < n; ++d)
      key[static_cast<std::size_t>(d)] =
          std::llround(rule.gradient(k, d) / r[static_cast<std::size_t>(d)]);
    Bin& b = bins[key];
    if (b.sum.size() == 0) b.sum = Vector::Zero(n);
    b.mass += rule.weights(k);
    b.sum += rule.weights(k) * rule.gradient.row(k).transpose();
  }
  Matrix atoms(static_cast<Eigen::Index>(bins.size()), n);
  Vector mass(static_cast<Eigen::Index>(bins.size()));
  Eigen::Index i = 0;
  for (const auto& [key, b] : bins) {
    mass(i) = b.mass;
    if (b.mass > 0.0)
      atoms.row(i) = (b.sum / b.mass).transpose();
    else
      atoms.row(i).setZero();
    ++i;
  }
  return DiscreteMeasure::from_masses(atoms, mass);
}

MomentObjective moment_objective(const DiscreteMeasure& nu, const Vector& b, bool with_hessian) {
  if (b.size() != nu.size()) throw DimensionError("one intercept per atom is required");
  const CellIntegrals c = cell_integrals(MaxAffineFunction::raw(nu.atoms(), b), false);
  const double U = c.total();
  MomentObjective out;
  out.cell_mass = c.mass / U;
  out.value = c.log_norm() - nu.weights().dot(b);
  out.gradient = out.cell_mass - nu.weights();
  if (with_hessian) {
    const Matrix W = c.facet / U;
    Matrix L = -W;
    L.diagonal() += W.rowwise().sum();
    out.hessian = Matrix(out.cell_mass.asDiagonal()) - out.cell_mass * out.cell_mass.transpose() - L;
  }
  return out;
}

namespace {

// Lexicographically first atom, and (2D) the next one not parallel to it.
std::vector<Eigen::Index> gauge_atoms(const DiscreteMeasure& nu) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(nu.size()));
  std::iota(order.begin(), order.end(), 0);
  const Matrix& A = nu.atoms();
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index d = 0; d < A.cols(); ++d)
      if (A(a, d) != A(b, d)) return A(a, d) < A(b, d);
    return false;
  });
  std::vector<Eigen::Index> g{order.front()};
  if (nu.dim() == 2) {
    const Vector y0 = nu.atom(order.front());
    for (std::size_t t = 1; t < order.size(); ++t) {
      const Vector y = nu.atom(order[t]);
      if (std::abs(y0(0) * y(1) - y0(1) * y(0)) > 1e-9 * y0.norm() * y.norm()) {
        g.push_back(order[t]);
        break;
      }
    }
  }
  return g;
}

// Shift b so that int e^{-V} = 1 and b vanishes at the gauge atoms.
Vector normalize(const DiscreteMeasure& nu, Vector b) {
  const double logz = cell_integrals(MaxAffineFunction::raw(nu.atoms(), b), false).log_norm();
  b.array() -= logz;
  const auto g = gauge_atoms(nu);
  const int n = nu.dim();
  Matrix Yg(n, n);
  Vector rhs(n);
  for (int k = 0; k < n; ++k) {
    Yg.row(k) = nu.atoms().row(g[static_cast<std::size_t>(k)]);
    rhs(k) = b(g[static_cast<std::size_t>(k)]);
  }
  const Vector a = Yg.fullPivLu().solve(rhs);
  return b - nu.atoms() * a;
}

}  // namespace

MomentSolution solve_moment_potential(const DiscreteMeasure& nu, double tol, int max_iter,
                                      MomentMethod method) {
  const KStatus st = validate_for_K(nu);
  if (st != KStatus::ok)
    throw InfeasibleTarget("target must be centered (int x dnu = 0) and not supported on a "
                           "hyperplane; got " + to_string(st));
  if (nu.dim() > 2) throw DimensionError("the moment solver supports n <= 2");
  const Eigen::Index m = nu.size();
  const Matrix& Y = nu.atoms();
  // Voronoi start: every atom owns a nonempty cell.
  Vector b = 0.5 * Y.rowwise().squaredNorm();

  // Orthonormal basis of the known null directions (constants, translations).
  Matrix N(m, nu.dim() + 1);
  N.col(0) = Vector::Ones(m);
  N.rightCols(nu.dim()) = Y;
  const Matrix Q = Eigen::HouseholderQR<Matrix>(N).householderQ() *
                   Matrix::Identity(m, nu.dim() + 1);
  const Matrix P = Q * Q.transpose();

  MomentObjective obj = moment_objective(nu, b, method == MomentMethod::newton);
  double residual = obj.gradient.cwiseAbs().maxCoeff();
  double mu = 0.0, step = 1.0;
  int it = 0;
  for (; it < max_iter && residual >= tol; ++it) {
    Vector d;
    if (method == MomentMethod::newton) {
      Matrix A = -obj.hessian + P;
      const bool dead = (obj.cell_mass.array() <= 0.0).any();
      const double damp = dead ? std::max(mu, 1e-2) : mu;
      A.diagonal() += damp * nu.weights();
      d = A.ldlt().solve(obj.gradient);
      step = 1.0;
    } else {
      d = obj.gradient;
      step = std::min(1e3, 2.0 * step);
    }
    const double slope = obj.gradient.dot(d);
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls, step *= 0.5) {
      const Vector trial = b + step * d;
      MomentObjective t = moment_objective(nu, trial, method == MomentMethod::newton);
      const double r = t.gradient.cwiseAbs().maxCoeff();
      const bool armijo = t.value >= obj.value + 1e-4 * step * slope;
      // Near the optimum F is flat to rounding; accept steps that cut the residual.
      const double cut = method == MomentMethod::newton ? 0.9 : 1.0;
      const bool flat = t.value >= obj.value - 1e-12 * (1.0 + std::abs(obj.value)) && r < cut * residual;
      if (armijo || flat) {
        b = trial;
        obj = std::move(t);
        residual = r;
        accepted = true;
        break;
      }
    }
    if (method == MomentMethod::newton) mu = accepted ? mu / 10.0 : std::max(1e-6, 10.0 * mu);
    if (!accepted && method == MomentMethod::gradient) break;
  }
  if (residual >= tol)
    throw NonConverged("moment solver stopped with residual " + std::to_string(residual), residual);

  const Vector bn = normalize(nu, b);
  const MaxAffineFunction v = MaxAffineFunction::raw(Y, bn);
  const CellIntegrals c = cell_integrals(v, true);
  const double U = c.total();
  double virial = 0.0, mean_v = 0.0;
  for (Eigen::Index j = 0; j < m; ++j) {
    const double yM = Y.row(j).dot(c.first.row(j)) / U;
    virial += yM;
    mean_v += yM - bn(j) * c.mass(j) / U;
  }
  const double h_leb = -mean_v - c.log_norm();
  MomentSolution s{v, nu, (c.mass / U - nu.weights()).cwiseAbs().maxCoeff(), it,
                   -nu.weights().dot(bn), -(virial + h_leb)};
  return s;
}

Estimate k_functional(const DiscreteMeasure& nu) {
  if (validate_for_K(nu) != KStatus::ok) return {kInf, 0.0};
  const MomentSolution s = solve_moment_potential(nu);
  return {s.k_value, std::abs(s.k_value - s.k_direct) + s.residual};
}

DiscreteMeasure discretized_gaussian(int atoms) {
  if (atoms < 1) throw InvalidParameter("need at least one atom");
  Matrix x(atoms, 1);
  for (int i = 0; i < atoms; ++i) {
    const double p = (i + 0.5) / atoms;
    // Newton on Phi(x) = p, started from a logistic guess.
    double t = std::log(p / (1.0 - p)) / 1.702;
    for (int k = 0; k < 60; ++k) {
      const double cdf = 0.5 * std::erfc(-t / std::sqrt(2.0));
      const double pdf = std::exp(-0.5 * t * t) / std::sqrt(2.0 * M_PI);
      const double dt = (cdf - p) / pdf;
      t -= dt;
      if (std::abs(dt) < 1e-15 * (1.0 + std::abs(t))) break;
    }
    x(i, 0) = t;
  }
  // Exact antisymmetry keeps the measure centered to rounding.
  for (int i = 0; i < atoms / 2; ++i) {
    const double s = 0.5 * (x(atoms - 1 - i, 0) - x(i, 0));
    x(i, 0) = -s;
    x(atoms - 1 - i, 0) = s;
  }
  if (atoms % 2) x(atoms / 2, 0) = 0.0;
  return DiscreteMeasure(x, Vector::Constant(atoms, 1.0 / atoms), Symmetry::symmetric);
}

CheckReport ipp_check(const LogConcaveDensity& eta) {
  const std::vector<std::string> prov{
      "integration by parts: T(nu, eta) = int x.grad V d eta = n for finite V"};
  if (!eta.finite_potential())
    return CheckReport::not_applicable("ipp", "V takes the value +inf", prov);
  const MomentSummary& s = eta.moments();
  CheckReport r = CheckReport::identity("ipp", s.virial, eta.dim(), 1e-5, prov,
                                        s.est_error * (1.0 + std::abs(s.virial)));
  r.add("T", s.virial).add("n", eta.dim());
  return r;
}

CheckReport reverse_duality_check(const GridFunction& f) {
  const std::vector<std::string> prov{
      "reverse duality: L(f|Leb) = sup_nu { int(-f) dnu - K(nu|Leb) }, attained at the "
      "moment measure of e^{-f*}"};
  if (f.dim() != 1)
    return CheckReport::not_applicable("reverse_duality", "implemented in dimension 1", prov);
  const GridFunction g = legendre_grid(f);
  const Estimate z = integrate_exp_neg(g);
  if (!(z.value > 0.0) || z.value == kInf)
    throw NotAdmissible("int e^{-f*} must lie in (0, inf)");
  const LogConcaveDensity eta(g);
  const DiscreteMeasure nu = moment_measure_pushforward(eta);
  double int_minus_f = 0.0;
  for (Eigen::Index i = 0; i < nu.size(); ++i) {
    const double v = f.extended(nu.atom(i));
    if (v == kInf) {
      if (nu.weight(i) > 1e-12)
        throw NotAdmissible("the moment measure of e^{-f*} charges {f = +inf}");
      continue;
    }
    int_minus_f -= nu.weight(i) * v;
  }
  const MomentSummary& s = eta.moments();
  const double h = -s.mean_potential - s.log_norm;
  const double k = -(s.virial + h);
  const double l = -s.log_norm;
  CheckReport r = CheckReport::identity("reverse_duality", int_minus_f - k, l, 1e-4, prov,
                                        s.est_error);
  r.add("int_minus_f_dnu", int_minus_f).add("K", k).add("L", l);
  if (!eta.essentially_continuous())
    r.note = "f* is not essentially continuous; K is the value at the candidate optimizer";
  return r;
}

}  // namespace santalo
