#include "santalo/legendre.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "santalo/errors.hpp"
#include "santalo/lower_hull.hpp"
#include "santalo/planar.hpp"

namespace santalo {

namespace {

std::vector<double> nodes_of(const Axis& a) {
  std::vector<double> x(static_cast<std::size_t>(a.steps));
  for (int i = 0; i < a.steps; ++i) x[static_cast<std::size_t>(i)] = a.node(i);
  return x;
}

// Values along grid line `line` of axis `axis` (rows for axis 0, columns for
// axis 1), copied contiguously.
std::vector<double> grid_line(const GridFunction& f, int axis, int line) {
  if (f.dim() == 1) return {f.values().data(), f.values().data() + f.size()};
  const int n0 = f.steps(0), n1 = f.steps(1);
  std::vector<double> v;
  if (axis == 0) {
    v.resize(static_cast<std::size_t>(n0));
    for (int i = 0; i < n0; ++i) v[static_cast<std::size_t>(i)] = f.at(i, line);
  } else {
    v.resize(static_cast<std::size_t>(n1));
    for (int j = 0; j < n1; ++j) v[static_cast<std::size_t>(j)] = f.at(line, j);
  }
  return v;
}

int line_count(const GridFunction& f, int axis) {
  if (f.dim() == 1) return 1;
  return axis == 0 ? f.steps(1) : f.steps(0);
}

SlopeRange axis_slope_range(const GridFunction& f, int axis) {
  const auto x = nodes_of(f.axis(axis));
  SlopeRange r;
  double open_lo = -kInf, open_hi = kInf, all_lo = kInf, all_hi = -kInf;
  double xmin = kInf, xmax = -kInf;
  for (int line = 0; line < line_count(f, axis); ++line) {
    const auto v = grid_line(f, axis, line);
    HullConjugate<double> hc(x.data(), v.data(), v.size());
    if (hc.empty()) continue;
    xmin = std::min(xmin, hc.vertex_x().front());
    xmax = std::max(xmax, hc.vertex_x().back());
    if (!hc.has_slopes()) continue;
    all_lo = std::min(all_lo, hc.first_slope());
    all_hi = std::max(all_hi, hc.last_slope());
    if (!hc.closed_below()) {
      r.open_lo = true;
      open_lo = std::max(open_lo, hc.first_slope());
    }
    if (!hc.closed_above()) {
      r.open_hi = true;
      open_hi = std::min(open_hi, hc.last_slope());
    }
  }
  if (all_lo == kInf) {
    all_lo = 0.0;
    all_hi = 0.0;
  }
  r.lo = r.open_lo ? open_lo : all_lo;
  r.hi = r.open_hi ? open_hi : all_hi;
  r.x_min = xmin;
  r.x_max = xmax;
  return r;
}

Axis dual_axis(const SlopeRange& r, int primal_steps) {
  int m = std::max(primal_steps - 1, 20);
  if (m % 2) ++m;
  auto reach = [](double x) { return 40.0 / std::max(std::abs(x), 1e-2); };
  double a = r.open_lo ? r.lo : r.lo - reach(r.x_min);
  double b = r.open_hi ? r.hi : r.hi + reach(r.x_max);
  if (!(b > a)) {
    a -= 1.0;
    b += 1.0;
  }
  Axis ax;
  ax.steps = m + 1;
  if (r.open_lo && r.open_hi) {
    const int pad = std::max(1, static_cast<int>(std::lround(m * 0.1 / 1.2)));
    const double h = (b - a) / (m - 2 * pad);
    ax.lo = a - pad * h;
    ax.hi = b + pad * h;
  } else if (r.open_lo || r.open_hi) {
    const int pad = std::max(1, static_cast<int>(std::lround(m * 0.1)));
    const double h = (b - a) / (m - pad);
    ax.lo = r.open_lo ? a - pad * h : a;
    ax.hi = r.open_hi ? b + pad * h : b;
  } else {
    ax.lo = a;
    ax.hi = b;
  }
  return ax;
}

// Exact group average; +inf absorbs. Sorting the orbit values makes the
// floating-point sum identical at every node of the orbit.
GridFunction orbit_average(const GridFunction& f, Symmetry mode) {
  std::vector<unsigned> flips;
  if (mode == Symmetry::unconditional && f.dim() == 2)
    flips = {0u, 1u, 2u, 3u};
  else
    flips = {0u, (1u << f.dim()) - 1u};
  Array out(f.size());
  std::array<double, 4> buf{};
  for (Eigen::Index k = 0; k < f.size(); ++k) {
    bool inf = false;
    for (std::size_t t = 0; t < flips.size(); ++t) {
      buf[t] = f[f.reflect(k, flips[t])];
      inf = inf || !std::isfinite(buf[t]);
    }
    if (inf) {
      out(k) = kInf;
      continue;
    }
    std::sort(buf.begin(), buf.begin() + static_cast<long>(flips.size()));
    double s = 0.0;
    for (std::size_t t = 0; t < flips.size(); ++t) s += buf[t];
    out(k) = s / static_cast<double>(flips.size());
  }
  return GridFunction(f.axes(), std::move(out), mode);
}

bool axes_symmetric(const std::vector<Axis>& axes) {
  return std::all_of(axes.begin(), axes.end(),
                     [](const Axis& a) { return a.symmetric_about_origin(); });
}

std::string range_message(int axis, double lo, double hi) {
  std::ostringstream os;
  os.precision(12);
  os << "dual grid must cover the slope range [" << lo << ", " << hi
     << "] along axis " << axis;
  return os.str();
}

void check_coverage(const GridFunction& f, const std::vector<Axis>& dual) {
  const auto ranges = slope_ranges(f);
  for (int d = 0; d < f.dim(); ++d) {
    const SlopeRange& r = ranges[static_cast<std::size_t>(d)];
    const Axis& a = dual[static_cast<std::size_t>(d)];
    const double tol = 1e-8 * (1.0 + std::abs(r.lo) + std::abs(r.hi));
    if (a.lo > r.lo + tol || a.hi < r.hi - tol)
      throw RangeError(range_message(d, r.lo, r.hi));
  }
}


}  // namespace

std::vector<SlopeRange> slope_ranges(const GridFunction& f) {
  std::vector<SlopeRange> out;
  for (int d = 0; d < f.dim(); ++d) out.push_back(axis_slope_range(f, d));
  return out;
}

std::vector<Axis> default_dual_axes(const GridFunction& f) {
  const auto ranges = slope_ranges(f);
  std::vector<Axis> axes;
  for (int d = 0; d < f.dim(); ++d)
    axes.push_back(dual_axis(ranges[static_cast<std::size_t>(d)], f.steps(d)));
  return axes;
}

GridFunction legendre_grid(const GridFunction& f, const std::vector<Axis>& dual) {
  if (static_cast<int>(dual.size()) != f.dim())
    throw DimensionError("dual grid dimension differs from the function's");
  for (const auto& a : dual)
    if (a.steps < 3 || !(a.hi > a.lo)) throw GridError("invalid dual axis");
  check_coverage(f, dual);

  const auto x0 = nodes_of(f.axis(0));
  const auto y0 = nodes_of(dual[0]);
  Array g;
  if (f.dim() == 1) {
    HullConjugate<double> hc(x0.data(), f.values().data(), x0.size());
    g.resize(static_cast<Eigen::Index>(y0.size()));
    hc.evaluate_sorted(y0.data(), g.data(), y0.size());
  } else {
    const auto x1 = nodes_of(f.axis(1));
    const auto y1 = nodes_of(dual[1]);
    const std::size_t n0 = x0.size(), n1 = x1.size();
    const std::size_t m0 = y0.size(), m1 = y1.size();
    // phi(k, j) = sup_{x0} x0*y0_k - f(x0, x1_j); stored as -phi for the
    // outer transform along x1.
    Matrix neg_phi(static_cast<Eigen::Index>(n1), static_cast<Eigen::Index>(m0));
    std::vector<double> tmp(m0);
    for (std::size_t j = 0; j < n1; ++j) {
      HullConjugate<double> row(x0.data(), f.values().data() + j * n0, n0);
      row.evaluate_sorted(y0.data(), tmp.data(), m0);
      for (std::size_t k = 0; k < m0; ++k)
        neg_phi(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = -tmp[k];
    }
    g.resize(static_cast<Eigen::Index>(m0 * m1));
    std::vector<double> out(m1);
    for (std::size_t k = 0; k < m0; ++k) {
      const double* h = neg_phi.data() + k * n1;
      HullConjugate<double> col(x1.data(), h, n1);
      col.evaluate_sorted(y1.data(), out.data(), m1);
      for (std::size_t l = 0; l < m1; ++l)
        g(static_cast<Eigen::Index>(k + m0 * l)) = out[l];
    }
  }
  for (Eigen::Index k = 0; k < g.size(); ++k)
    if (g(k) == -kInf) g(k) = kInf;

  GridFunction result(dual, std::move(g));
  if (f.symmetry() != Symmetry::none && axes_symmetric(dual))
    return orbit_average(result, f.symmetry());
  return result;
}

GridFunction legendre_grid(const GridFunction& f) {
  return legendre_grid(f, default_dual_axes(f));
}

double conjugate_at(const GridFunction& f, const Vector& y) {
  if (y.size() != f.dim()) throw DimensionError("conjugate point dimension");
  const auto x0 = nodes_of(f.axis(0));
  if (f.dim() == 1) {
    HullConjugate<double> hc(x0.data(), f.values().data(), x0.size());
    return hc(y(0));
  }
  const auto x1 = nodes_of(f.axis(1));
  std::vector<double> h(x1.size());
  for (std::size_t j = 0; j < x1.size(); ++j) {
    HullConjugate<double> row(x0.data(), f.values().data() + j * x0.size(), x0.size());
    h[j] = -row(y(0));
  }
  HullConjugate<double> col(x1.data(), h.data(), h.size());
  const double v = col(y(1));
  return v == -kInf ? kInf : v;
}

GridFunction biconjugate(const GridFunction& f) {
  if (f.dim() == 1) {
    const auto x = nodes_of(f.axis(0));
    HullConjugate<double> hc(x.data(), f.values().data(), x.size());
    const auto& hx = hc.vertex_x();
    const auto& hf = hc.vertex_f();
    Array out(f.size());
    std::size_t e = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      if (x[i] < hx.front() || x[i] > hx.back()) {
        out(k) = kInf;
        continue;
      }
      while (e + 1 < hx.size() && hx[e + 1] < x[i]) ++e;
      double v;
      if (x[i] == hx[e] || e + 1 == hx.size()) {
        v = hf[e];
      } else {
        const double t = (x[i] - hx[e]) / (hx[e + 1] - hx[e]);
        v = (1.0 - t) * hf[e] + t * hf[e + 1];
      }
      out(k) = std::min(v, f[k]);
    }
    return GridFunction(f.axes(), std::move(out), f.symmetry());
  }

  const GridFunction g = legendre_grid(f);
  const GridFunction ff = legendre_grid(g, f.axes());
  std::vector<Point2> pts;
  for (Eigen::Index k = 0; k < f.size(); ++k) {
    if (!std::isfinite(f[k])) continue;
    const Vector p = f.point(k);
    pts.push_back({p(0), p(1)});
  }
  const auto hull = convex_hull(pts);
  const double tol = 1e-9 * (f.axis(0).spacing() + f.axis(1).spacing());
  Array out(f.size());
  for (Eigen::Index k = 0; k < f.size(); ++k) {
    const Vector p = f.point(k);
    out(k) = inside_hull(hull, {p(0), p(1)}, tol) ? std::min(ff[k], f[k]) : kInf;
    if (!std::isfinite(out(k)) && std::isfinite(f[k])) out(k) = f[k];
  }
  GridFunction result(f.axes(), std::move(out));
  if (f.symmetry() != Symmetry::none) return orbit_average(result, f.symmetry());
  return result;
}

GridFunction lipschitz_regularize(const GridFunction& f, double r) {
  if (!(r > 0.0) || !std::isfinite(r))
    throw InvalidParameter("Lipschitz constant must be positive and finite");
  Array out(f.size());
  if (f.dim() == 1) {
    const auto x = nodes_of(f.axis(0));
    const auto n = static_cast<Eigen::Index>(x.size());
    out = f.values();
    for (Eigen::Index i = 1; i < n; ++i)
      out(i) = std::min(out(i), out(i - 1) + r * (x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(i - 1)]));
    for (Eigen::Index i = n - 1; i-- > 0;)
      out(i) = std::min(out(i), out(i + 1) + r * (x[static_cast<std::size_t>(i + 1)] - x[static_cast<std::size_t>(i)]));
  } else {
    // Direct minimization over finite nodes; quadratic in the node count.
    std::vector<Eigen::Index> finite;
    for (Eigen::Index k = 0; k < f.size(); ++k)
      if (std::isfinite(f[k])) finite.push_back(k);
    Matrix pts(2, f.size());
    for (Eigen::Index k = 0; k < f.size(); ++k) pts.col(k) = f.point(k);
    for (Eigen::Index k = 0; k < f.size(); ++k) {
      double best = kInf;
      for (Eigen::Index q : finite)
        best = std::min(best, f[q] + r * (pts.col(k) - pts.col(q)).norm());
      out(k) = best;
    }
  }
  GridFunction result(f.axes(), std::move(out));
  if (f.symmetry() != Symmetry::none) return orbit_average(result, f.symmetry());
  return result;
}

GridFunction symmetrize(const GridFunction& f, Symmetry mode) {
  if (mode == Symmetry::none)
    throw InvalidParameter("symmetrize needs mode symmetric or unconditional");
  if (!axes_symmetric(f.axes()))
    throw GridError("symmetrize requires a grid symmetric about the origin");
  return orbit_average(f, mode);
}

namespace {

bool line_convex(const std::vector<double>& v) {
  std::size_t first = v.size(), last = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (std::isfinite(v[i])) {
      first = std::min(first, i);
      last = i;
    }
  if (first == v.size()) return true;
  for (std::size_t i = first; i <= last; ++i)
    if (!std::isfinite(v[i])) return false;
  for (std::size_t i = first + 1; i < last; ++i) {
    const double d2 = v[i - 1] - 2.0 * v[i] + v[i + 1];
    if (d2 < -1e-9 * (1.0 + std::abs(v[i]))) return false;
  }
  return true;
}

}  // namespace

bool is_convex(const GridFunction& f) {
  if (f.dim() == 1)
    return line_convex({f.values().data(), f.values().data() + f.size()});
  for (int d = 0; d < 2; ++d)
    for (int line = 0; line < line_count(f, d); ++line)
      if (!line_convex(grid_line(f, d, line))) return false;
  // Diagonals (meaningful as convexity tests only through the midpoint rule).
  const int n0 = f.steps(0), n1 = f.steps(1);
  for (int dir = 0; dir < 2; ++dir) {
    for (int start = -(n1 - 1); start < n0; ++start) {
      std::vector<double> v;
      for (int j = 0; j < n1; ++j) {
        const int i = dir == 0 ? start + j : start + (n1 - 1 - j);
        if (i >= 0 && i < n0) v.push_back(f.at(i, j));
      }
      if (!line_convex(v)) return false;
    }
  }
  return true;
}

double slope_resolution(const GridFunction& f, int axis) {
  const SlopeRange r = axis_slope_range(f, axis);
  return (r.hi - r.lo) / (f.steps(axis) - 1);
}

}  // namespace santalo
