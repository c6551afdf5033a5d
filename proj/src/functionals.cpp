#include "santalo/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "santalo/cells.hpp"
#include "santalo/errors.hpp"
#include "santalo/legendre.hpp"
#include "santalo/lower_hull.hpp"
#include "santalo/quadrature.hpp"

namespace santalo {

ReferenceMeasure ReferenceMeasure::lebesgue(int n) {
  ReferenceMeasure m;
  m.kind_ = Kind::lebesgue;
  m.n_ = n;
  return m;
}

ReferenceMeasure ReferenceMeasure::gaussian(int n) {
  ReferenceMeasure m;
  m.kind_ = Kind::gaussian;
  m.n_ = n;
  return m;
}

ReferenceMeasure ReferenceMeasure::logconcave(GridFunction W) {
  if (!is_convex(W)) throw InvalidFunction("reference potential W must be convex");
  ReferenceMeasure m;
  m.kind_ = Kind::logconcave;
  m.n_ = W.dim();
  m.W_ = std::move(W);
  return m;
}

double ReferenceMeasure::potential(const Vector& x) const {
  switch (kind_) {
    case Kind::lebesgue: return 0.0;
    case Kind::gaussian: return 0.5 * x.squaredNorm() + 0.5 * n_ * std::log(2.0 * M_PI);
    case Kind::logconcave: return W_->extended(x);
  }
  return 0.0;
}

namespace {

void require_dim(int a, int b) {
  if (a != b) throw DimensionError("dimension mismatch between function and measure");
}

// g + (potential of m) sampled on g's grid; the Gaussian normalizing
// constant is left out and returned separately.
GridFunction add_reference(const GridFunction& g, const ReferenceMeasure& m, double& constant) {
  constant = 0.0;
  if (m.kind() == ReferenceMeasure::Kind::lebesgue) return g;
  Array v = g.values();
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    if (!std::isfinite(v(k))) continue;
    const Vector x = g.point(k);
    if (m.kind() == ReferenceMeasure::Kind::gaussian) {
      v(k) += 0.5 * x.squaredNorm();
    } else {
      v(k) = ext_add(v(k), m.W().interpolate(x));
    }
  }
  if (m.kind() == ReferenceMeasure::Kind::gaussian) constant = 0.5 * m.dim() * std::log(2.0 * M_PI);
  bool any = false;
  for (Eigen::Index k = 0; k < v.size() && !any; ++k) any = std::isfinite(v(k));
  if (!any) throw NotAdmissible("e^{-f} vanishes on the support of the reference measure");
  return GridFunction(g.axes(), std::move(v));
}

}  // namespace

Estimate santalo_product(const GridFunction& f) {
  return santalo_product(f, default_dual_axes(f));
}

Estimate santalo_product(const GridFunction& f, const std::vector<Axis>& dual) {
  const Estimate a = integrate_exp_neg(f);
  if (!(a.value > 0.0) || a.value == kInf)
    throw NotAdmissible("int e^{-f} must lie in (0, inf)");
  const GridFunction g = legendre_grid(f, dual);
  const Estimate b = integrate_exp_neg(g);
  if (!(b.value > 0.0) || b.value == kInf)
    throw NotAdmissible("int e^{-f*} must lie in (0, inf)");
  const double v = a.value * b.value;
  return {v, v * (a.est_error / a.value + b.est_error / b.value)};
}

LaplaceValue log_laplace_star(const GridFunction& f, const ReferenceMeasure& m) {
  require_dim(f.dim(), m.dim());
  const GridFunction g = legendre_grid(f);
  double constant = 0.0;
  GridFunction h = g;
  try {
    h = add_reference(g, m, constant);
  } catch (const NotAdmissible&) {
    return {kInf, 0.0, true};
  }
  const Estimate l = log_integrate_exp_neg(h);
  LaplaceValue out;
  if (l.value == kInf) return {-kInf, 0.0, true};
  if (l.value == -kInf) return {kInf, 0.0, true};
  out.value = -(l.value - constant);
  out.est_error = l.est_error;
  return out;
}

LaplaceValue log_laplace_star(const MaxAffineFunction& f) {
  if (f.dim() != 1) throw DimensionError("exact L(f|Leb) is implemented in 1D");
  std::vector<Eigen::Index> order(static_cast<std::size_t>(f.pieces()));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    const double ya = f.slopes()(a, 0), yb = f.slopes()(b, 0);
    return ya < yb || (ya == yb && f.intercepts()(a) < f.intercepts()(b));
  });
  std::vector<double> ys, bs;
  for (Eigen::Index j : order) {
    if (!ys.empty() && ys.back() == f.slopes()(j, 0)) continue;
    ys.push_back(f.slopes()(j, 0));
    bs.push_back(f.intercepts()(j));
  }
  const auto hull = lower_hull_indices(ys.data(), bs.data(), ys.size());
  // Shift by the smallest vertex value so every divided difference is <= 1.
  double lo = kInf;
  for (std::size_t i : hull) lo = std::min(lo, bs[i]);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
    const double nodes[2] = {-(bs[hull[k]] - lo), -(bs[hull[k + 1]] - lo)};
    total += (ys[hull[k + 1]] - ys[hull[k]]) * exp_divided_difference(nodes, 2);
  }
  if (!(total > 0.0)) return {kInf, 0.0, true};
  return {-(std::log(total) - lo), 1e-15, false};
}

Estimate relative_entropy(const LogConcaveDensity& eta, const ReferenceMeasure& m) {
  require_dim(eta.dim(), m.dim());
  const MomentSummary& s = eta.moments();
  const double h_leb = -s.mean_potential - s.log_norm;
  const double err = s.est_error * (1.0 + std::abs(s.mean_potential));
  switch (m.kind()) {
    case ReferenceMeasure::Kind::lebesgue: return {h_leb, err};
    case ReferenceMeasure::Kind::gaussian:
      return {h_leb + 0.5 * s.second_moment + 0.5 * eta.dim() * std::log(2.0 * M_PI),
              err + s.est_error * s.second_moment};
    case ReferenceMeasure::Kind::logconcave: break;
  }
  const DensityRule r = eta.rule();
  double acc = 0.0, kept = 0.0;
  for (Eigen::Index k = 0; k < r.weights.size(); ++k) {
    const double w = m.potential(r.points.row(k).transpose());
    if (w == kInf) {
      if (r.weights(k) > 1e-12)
        throw NotAbsolutelyContinuous("eta charges the region where W = +inf");
      continue;
    }
    acc += r.weights(k) * w;
    kept += r.weights(k);
  }
  return {h_leb + acc / kept, err + (1.0 - kept) * std::abs(acc)};
}

FisherValue fisher_information(const LogConcaveDensity& eta) {
  const MomentSummary& s = eta.moments();
  FisherValue f;
  f.value = s.fisher_gaussian;
  f.est_error = s.est_error * (1.0 + s.fisher_gaussian);
  f.tilde_only = !eta.essentially_continuous();
  f.boundary_warning = s.boundary_warning;
  return f;
}

Estimate fisher_information_lebesgue(const LogConcaveDensity& eta) {
  const MomentSummary& s = eta.moments();
  return {s.fisher_lebesgue, s.est_error * (1.0 + s.fisher_lebesgue)};
}

Estimate lsi_deficit(const LogConcaveDensity& eta) {
  const FisherValue i = fisher_information(eta);
  const Estimate h = relative_entropy(eta, ReferenceMeasure::gaussian(eta.dim()));
  return {0.5 * i.value - h.value, 0.5 * i.est_error + h.est_error};
}

Estimate lsi_deficit_product(const LogConcaveDensity& a, const LogConcaveDensity& b) {
  const Estimate da = lsi_deficit(a), db = lsi_deficit(b);
  return {da.value + db.value, da.est_error + db.est_error};
}

Estimate entropy_power(const LogConcaveDensity& eta) {
  const Estimate h = relative_entropy(eta, ReferenceMeasure::lebesgue(eta.dim()));
  const double n = eta.dim();
  const double v = std::exp(-2.0 / n * h.value) / (2.0 * M_PI * M_E);
  return {v, v * 2.0 / n * h.est_error};
}

CheckReport entropy_duality_check(const LogConcaveDensity& eta, const Potential& g,
                                  const ReferenceMeasure& m, bool expect_equality) {
  require_dim(eta.dim(), m.dim());
  const std::vector<std::string> prov{
      "entropy duality: int f d eta - log int e^f dm <= H(eta|m), equality at f = log(d eta/dm)"};
  // int f d eta with f = -g.
  const DensityRule r = eta.rule();
  double int_f = 0.0;
  for (Eigen::Index k = 0; k < r.weights.size(); ++k) {
    const Vector x = r.points.row(k).transpose();
    const double gx = std::holds_alternative<GridFunction>(g)
                          ? std::get<GridFunction>(g).extended(x)
                          : std::get<MaxAffineFunction>(g)(x);
    if (gx == kInf) {
      int_f = -kInf;
      break;
    }
    int_f -= r.weights(k) * gx;
  }
  // log int e^f dm.
  double log_partition = 0.0, part_err = 0.0;
  if (std::holds_alternative<GridFunction>(g)) {
    double constant = 0.0;
    const GridFunction h = add_reference(std::get<GridFunction>(g), m, constant);
    const Estimate l = log_integrate_exp_neg(h);
    log_partition = l.value - constant;
    part_err = l.est_error;
  } else {
    const MaxAffineFunction& v = std::get<MaxAffineFunction>(g);
    if (m.kind() == ReferenceMeasure::Kind::lebesgue) {
      log_partition = cell_integrals(v, false).log_norm();
      part_err = 1e-14;
    } else {
      const CellQuadrature q = cell_quadrature(v);
      double acc = 0.0;
      for (Eigen::Index k = 0; k < q.weights.size(); ++k)
        acc += q.weights(k) * exp_neg(m.potential(q.points.row(k).transpose()));
      log_partition = std::log(acc) - q.shift;
      part_err = 1e-12;
    }
  }
  if (!std::isfinite(log_partition))
    return CheckReport::not_applicable("entropy_duality", "int e^f dm must lie in (0, inf)", prov);
  const Estimate h = relative_entropy(eta, m);
  const double lhs = int_f - log_partition;
  const double err = h.est_error + part_err;
  CheckReport rep = expect_equality
                        ? CheckReport::identity("entropy_duality", lhs, h.value, 1e-8, prov, err)
                        : CheckReport::inequality("entropy_duality", lhs, h.value, 1e-6, prov, err);
  rep.add("int_f_deta", int_f).add("log_int_exp_f_dm", log_partition).add("gap", h.value - lhs);
  return rep;
}

}  // namespace santalo
