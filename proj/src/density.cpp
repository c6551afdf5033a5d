#include "santalo/density.hpp"

#include <cmath>
#include <vector>

#include "santalo/cells.hpp"
#include "santalo/errors.hpp"
#include "santalo/integrate.hpp"
#include "santalo/legendre.hpp"

namespace santalo {

namespace {

bool grid_essentially_continuous_1d(const GridFunction& f) {
  for (int i = 0; i + 1 < f.steps(0); ++i)
    if (std::isfinite(f.at(i)) != std::isfinite(f.at(i + 1))) return false;
  return true;
}

// Mirror images of every piece must be pieces too.
bool pieces_symmetric(const MaxAffineFunction& v, Symmetry s) {
  const int n = v.dim();
  const unsigned flips = s == Symmetry::symmetric ? 1u : (1u << n) - 1u;
  for (unsigned mask = 1; mask <= flips; ++mask) {
    Vector sign = Vector::Ones(n);
    if (s == Symmetry::symmetric) {
      sign = -sign;
    } else {
      for (int d = 0; d < n; ++d)
        if (mask & (1u << d)) sign(d) = -1.0;
    }
    for (Eigen::Index j = 0; j < v.pieces(); ++j) {
      const Vector y = v.slope(j).cwiseProduct(sign);
      bool found = false;
      for (Eigen::Index i = 0; i < v.pieces() && !found; ++i)
        found = (v.slope(i) - y).norm() <= 1e-12 * (1.0 + y.norm()) &&
                std::abs(v.intercepts()(i) - v.intercepts()(j)) <=
                    1e-12 * (1.0 + std::abs(v.intercepts()(j)));
      if (!found) return false;
    }
  }
  return true;
}

// Finite-difference gradient at node k; flags one-sided differences taken
// because a neighbour is +inf.
Vector grid_gradient(const GridFunction& f, int i, int j, bool& warned) {
  const int n = f.dim();
  Vector g(n);
  for (int d = 0; d < n; ++d) {
    const int idx = d == 0 ? i : j;
    const int steps = f.steps(d);
    auto val = [&](int t) { return d == 0 ? (n == 1 ? f.at(t) : f.at(t, j)) : f.at(i, t); };
    const double h = f.axis(d).spacing();
    const bool lo_ok = idx > 0 && std::isfinite(val(idx - 1));
    const bool hi_ok = idx + 1 < steps && std::isfinite(val(idx + 1));
    if (lo_ok && hi_ok) {
      g(d) = (val(idx + 1) - val(idx - 1)) / (2.0 * h);
    } else if (hi_ok) {
      g(d) = (val(idx + 1) - val(idx)) / h;
      if (idx > 0) warned = true;
    } else if (lo_ok) {
      g(d) = (val(idx) - val(idx - 1)) / h;
      if (idx + 1 < steps) warned = true;
    } else {
      g(d) = 0.0;
      warned = true;
    }
  }
  return g;
}

DensityRule grid_rule(const GridFunction& f, bool& warned) {
  const NodeWeights nw = exp_neg_node_weights(f);
  const double total = nw.weights.sum();
  const int n = f.dim();
  Eigen::Index count = 0;
  for (Eigen::Index k = 0; k < f.size(); ++k) count += nw.weights(k) > 0.0;
  DensityRule r;
  r.points.resize(count, n);
  r.weights.resize(count);
  r.potential.resize(count);
  r.gradient.resize(count, n);
  Eigen::Index c = 0;
  for (Eigen::Index k = 0; k < f.size(); ++k) {
    if (!(nw.weights(k) > 0.0)) continue;
    const int i = static_cast<int>(k % f.steps(0));
    const int j = n == 2 ? static_cast<int>(k / f.steps(0)) : 0;
    r.points.row(c) = f.point(k).transpose();
    r.weights(c) = nw.weights(k) / total;
    r.potential(c) = f[k];
    r.gradient.row(c) = grid_gradient(f, i, j, warned).transpose();
    ++c;
  }
  return r;
}

DensityRule max_affine_rule(const MaxAffineFunction& v) {
  const CellQuadrature q = cell_quadrature(v);
  DensityRule r;
  r.points = q.points;
  r.weights = q.weights / q.weights.sum();
  r.potential.resize(q.weights.size());
  r.gradient.resize(q.weights.size(), v.dim());
  for (Eigen::Index k = 0; k < q.weights.size(); ++k) {
    const Eigen::Index j = q.piece(k);
    r.potential(k) = v.slopes().row(j).dot(q.points.row(k)) - v.intercepts()(j);
    r.gradient.row(k) = v.slopes().row(j);
  }
  return r;
}

MomentSummary summary_from_rule(const DensityRule& r, int n) {
  MomentSummary m;
  m.dim = n;
  m.mean = r.points.transpose() * r.weights;
  m.mean_potential = r.weights.dot(r.potential);
  m.second_moment = r.weights.dot(r.points.rowwise().squaredNorm());
  m.fisher_lebesgue = r.weights.dot(r.gradient.rowwise().squaredNorm());
  m.fisher_gaussian = r.weights.dot((r.gradient - r.points).rowwise().squaredNorm());
  m.virial = r.weights.dot(r.points.cwiseProduct(r.gradient).rowwise().sum());
  return m;
}

MomentSummary summary_max_affine(const MaxAffineFunction& v) {
  const CellIntegrals c = cell_integrals(v);
  const double U = c.total();
  MomentSummary m;
  m.dim = v.dim();
  m.log_norm = c.log_norm();
  m.mean = c.first.colwise().sum().transpose() / U;
  m.second_moment = c.second.sum() / U;
  m.mean_potential = 0.0;
  m.fisher_lebesgue = 0.0;
  m.virial = 0.0;
  for (Eigen::Index j = 0; j < v.pieces(); ++j) {
    const double yM = v.slopes().row(j).dot(c.first.row(j)) / U;
    const double p = c.mass(j) / U;
    m.virial += yM;
    m.mean_potential += yM - v.intercepts()(j) * p;
    m.fisher_lebesgue += p * v.slopes().row(j).squaredNorm();
  }
  m.fisher_gaussian = m.fisher_lebesgue - 2.0 * m.virial + m.second_moment;
  m.est_error = 1e-13 + c.exterior_bound / U;
  return m;
}

}  // namespace

LogConcaveDensity::LogConcaveDensity(GridFunction v, std::optional<bool> essentially_continuous)
    : v_(std::move(v)) {
  init(essentially_continuous);
}

LogConcaveDensity::LogConcaveDensity(MaxAffineFunction v, Symmetry symmetry) : v_(std::move(v)) {
  if (symmetry != Symmetry::none && !pieces_symmetric(max_affine(), symmetry))
    throw InvalidDensity("pieces are not " + to_string(symmetry));
  symmetry_ = symmetry;
  init(std::nullopt);
}

LogConcaveDensity::LogConcaveDensity(Potential v, double log_norm,
                                     std::optional<bool> essentially_continuous)
    : v_(std::move(v)) {
  init(essentially_continuous);
  const double tol = 1e-8 * std::max(1.0, std::abs(moments_.log_norm));
  if (!(std::abs(log_norm - moments_.log_norm) <= tol))
    throw InvalidDensity("stored normalization does not match quadrature");
}

void LogConcaveDensity::init(std::optional<bool> essentially_continuous) {
  if (is_grid()) {
    const GridFunction& f = grid();
    if (!is_convex(f)) throw InvalidDensity("potential is not convex");
    const Estimate ln = log_integrate_exp_neg(f);
    if (!std::isfinite(ln.value))
      throw InvalidDensity("e^{-V} must have a finite positive integral");
    symmetry_ = f.symmetry();
    if (f.dim() == 1) {
      const bool computed = grid_essentially_continuous_1d(f);
      if (essentially_continuous && *essentially_continuous && !computed)
        throw InvalidDensity("potential jumps to +inf inside the grid");
      essentially_continuous_ = computed;
    } else {
      essentially_continuous_ = essentially_continuous.value_or(f.all_finite());
    }
    bool warned = false;
    const DensityRule r = grid_rule(f, warned);
    moments_ = summary_from_rule(r, f.dim());
    moments_.log_norm = ln.value;
    moments_.est_error = ln.est_error;
    moments_.boundary_warning = warned;
  } else {
    const MaxAffineFunction& v = max_affine();
    if (v.dim() > 2) throw DimensionError("max-affine densities are supported for n <= 2");
    moments_ = summary_max_affine(v);
    essentially_continuous_ = essentially_continuous.value_or(true);
  }
}

bool LogConcaveDensity::finite_potential() const {
  return is_grid() ? grid().all_finite() : true;
}

double LogConcaveDensity::potential_at(const Vector& x) const {
  return is_grid() ? grid().interpolate(x) : max_affine()(x);
}

DensityRule LogConcaveDensity::rule() const {
  if (is_grid()) {
    bool warned = false;
    return grid_rule(grid(), warned);
  }
  return max_affine_rule(max_affine());
}

LogConcaveDensity LogConcaveDensity::dilated(double lambda) const {
  if (!(lambda > 0.0)) throw InvalidParameter("dilation factor must be positive");
  if (is_grid())
    return LogConcaveDensity(grid().rescaled_axes(lambda),
                             is_grid() && dim() == 2 ? std::optional<bool>(essentially_continuous_)
                                                     : std::nullopt);
  return LogConcaveDensity(max_affine().rescaled(1.0 / lambda), symmetry_);
}

// ---------------------------------------------------------------- built-ins

namespace {

GridFunction quadratic_grid(double mean, double sigma, int n) {
  const double half = 12.0 * sigma;
  const int steps = n == 1 ? 481 : 201;
  std::vector<Axis> axes(static_cast<std::size_t>(n), Axis{mean - half, mean + half, steps});
  const Symmetry sym = mean != 0.0 ? Symmetry::none
                       : n == 1    ? Symmetry::symmetric
                                   : Symmetry::unconditional;
  return GridFunction::sample(
      axes,
      [&](const Vector& x) {
        return (x.array() - mean).square().sum() / (2.0 * sigma * sigma);
      },
      sym);
}

}  // namespace

LogConcaveDensity gaussian_density(int n) {
  if (n < 1 || n > 2) throw DimensionError("gaussian_density supports n = 1, 2");
  return LogConcaveDensity(quadratic_grid(0.0, 1.0, n));
}

LogConcaveDensity normal_density(double mean, double sigma) {
  if (!(sigma > 0.0)) throw InvalidParameter("sigma must be positive");
  return LogConcaveDensity(quadratic_grid(mean, sigma, 1));
}

LogConcaveDensity quadratic_density(double a) {
  if (!(a > 0.0)) throw InvalidParameter("quadratic coefficient must be positive");
  return normal_density(0.0, 1.0 / std::sqrt(a));
}

LogConcaveDensity tau_density(bool reflected) {
  // Spacing 1e-3 with -1 on a node; the +inf region starts half a unit out.
  const Axis a = reflected ? Axis{-40.0, 1.5, 41501} : Axis{-1.5, 40.0, 41501};
  const double sign = reflected ? -1.0 : 1.0;
  const GridFunction f = GridFunction::sample({a}, [&](const Vector& x) {
    const double t = sign * x(0);
    return t < -1.0 - 1e-9 ? kInf : std::max(0.0, t + 1.0);
  });
  return LogConcaveDensity(f);
}

LogConcaveDensity tau_s_density(int n) {
  if (n == 1) {
    Matrix S(2, 1);
    S << -1, 1;
    return LogConcaveDensity(MaxAffineFunction(S, Vector::Zero(2)), Symmetry::symmetric);
  }
  if (n == 2) {
    Matrix S(4, 2);
    S << 1, 1, 1, -1, -1, 1, -1, -1;
    return LogConcaveDensity(MaxAffineFunction(S, Vector::Zero(4)), Symmetry::unconditional);
  }
  throw DimensionError("tau_s_density supports n = 1, 2");
}

LogConcaveDensity fm_density(int k, int i) {
  if (k < 1) throw InvalidParameter("sequence index must be >= 1");
  if (i != 1 && i != 2) throw InvalidParameter("fm_density member must be 1 or 2");
  const double s = i == 1 ? 1.0 : -1.0;
  Matrix S(2, 1);
  S << -s * k, s;
  Vector B(2);
  B << k, -1.0;
  return LogConcaveDensity(MaxAffineFunction(S, B));
}

LogConcaveDensity uncond_density(int k) {
  if (k < 1) throw InvalidParameter("sequence index must be >= 1");
  Matrix S(3, 1);
  S << -k, 0, k;
  Vector B(3);
  B << k, 0, k;
  return LogConcaveDensity(MaxAffineFunction(S, B), Symmetry::symmetric);
}

}  // namespace santalo
