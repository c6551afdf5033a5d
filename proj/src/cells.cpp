#include "santalo/cells.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "santalo/errors.hpp"
#include "santalo/lower_hull.hpp"
#include "santalo/planar.hpp"
#include "santalo/quadrature.hpp"

namespace santalo {

double CellIntegrals::log_norm() const { return std::log(total()) - shift; }

namespace {

// ---------------------------------------------------------------- 1D

struct Cells1D {
  std::vector<Eigen::Index> active;  // piece ids in increasing slope order
  std::vector<double> breaks;        // breaks[k] between active[k], active[k+1]
  double shift = 0.0;
};

Cells1D cells_1d(const MaxAffineFunction& v) {
  const Eigen::Index m = v.pieces();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    const double ya = v.slopes()(a, 0), yb = v.slopes()(b, 0);
    return ya < yb || (ya == yb && v.intercepts()(a) < v.intercepts()(b));
  });
  std::vector<double> ys, bs;
  std::vector<Eigen::Index> ids;
  for (Eigen::Index j : order) {
    const double y = v.slopes()(j, 0);
    if (!ys.empty() && ys.back() == y) continue;  // equal slope: lower b wins
    ys.push_back(y);
    bs.push_back(v.intercepts()(j));
    ids.push_back(j);
  }
  Cells1D c;
  for (std::size_t i : lower_hull_indices(ys.data(), bs.data(), ys.size()))
    c.active.push_back(ids[i]);
  const auto& S = v.slopes();
  const auto& B = v.intercepts();
  if (!(S(c.active.front(), 0) < 0.0 && S(c.active.back(), 0) > 0.0))
    throw InvalidDensity("e^{-V} is not integrable: slopes must straddle 0");
  c.shift = kInf;
  for (std::size_t k = 0; k + 1 < c.active.size(); ++k) {
    const Eigen::Index i = c.active[k], j = c.active[k + 1];
    const double t = (B(j) - B(i)) / (S(j, 0) - S(i, 0));
    c.breaks.push_back(t);
    c.shift = std::min(c.shift, S(i, 0) * t - B(i));
  }
  return c;
}

struct Segment {
  double x0, sigma, a, len, v0;  // x = x0 + sigma t, V - shift = v0 + a t
};

Segment segment(const MaxAffineFunction& v, const Cells1D& c, std::size_t k) {
  const Eigen::Index j = c.active[k];
  const double s = v.slopes()(j, 0), b = v.intercepts()(j);
  const double L = k == 0 ? -kInf : c.breaks[k - 1];
  const double R = k + 1 == c.active.size() ? kInf : c.breaks[k];
  Segment g;
  if (s < 0.0) {
    g.x0 = R;
    g.sigma = -1.0;
  } else {
    g.x0 = L;
    g.sigma = 1.0;
  }
  g.a = std::abs(s);
  g.len = R - L;
  g.v0 = std::max(0.0, s * g.x0 - b - c.shift);
  return g;
}

CellIntegrals integrals_1d(const MaxAffineFunction& v) {
  const Cells1D c = cells_1d(v);
  const Eigen::Index m = v.pieces();
  CellIntegrals out;
  out.shift = c.shift;
  out.mass = Vector::Zero(m);
  out.first = Matrix::Zero(m, 1);
  out.second = Vector::Zero(m);
  out.facet = Matrix::Zero(m, m);
  for (std::size_t k = 0; k < c.active.size(); ++k) {
    const Segment g = segment(v, c, k);
    const double J0 = truncated_gamma_moment(0, g.a, g.len);
    const double J1 = truncated_gamma_moment(1, g.a, g.len);
    const double J2 = truncated_gamma_moment(2, g.a, g.len);
    const double e = std::exp(-g.v0);
    const Eigen::Index j = c.active[k];
    out.mass(j) = e * J0;
    out.first(j, 0) = e * (g.x0 * J0 + g.sigma * J1);
    out.second(j) = e * (g.x0 * g.x0 * J0 + 2.0 * g.sigma * g.x0 * J1 + J2);
  }
  for (std::size_t k = 0; k + 1 < c.active.size(); ++k) {
    const Eigen::Index i = c.active[k], j = c.active[k + 1];
    const double t = c.breaks[k];
    const double vt = v.slopes()(i, 0) * t - v.intercepts()(i) - c.shift;
    const double w = std::exp(-std::max(0.0, vt)) /
                     (v.slopes()(j, 0) - v.slopes()(i, 0));
    out.facet(i, j) = out.facet(j, i) = w;
  }
  return out;
}

CellQuadrature quadrature_1d(const MaxAffineFunction& v) {
  const Cells1D c = cells_1d(v);
  static const GaussRule gl = gauss_legendre(10);
  static const GaussRule lag = gauss_laguerre(30);
  std::vector<double> xs, ws;
  std::vector<int> ps;
  for (std::size_t k = 0; k < c.active.size(); ++k) {
    const Segment g = segment(v, c, k);
    const double reach = g.a > 0.0 ? 46.0 / g.a : kInf;
    const double tmax = std::min(g.len, reach);
    const double h = std::min(1.0, g.a > 0.0 ? 1.0 / g.a : 1.0);
    const int panels = std::max(1, static_cast<int>(std::ceil(tmax / h)));
    const double ph = tmax / panels;
    const int piece = static_cast<int>(c.active[k]);
    for (int p = 0; p < panels; ++p) {
      for (Eigen::Index q = 0; q < gl.nodes.size(); ++q) {
        const double t = ph * (p + 0.5 * (gl.nodes(q) + 1.0));
        xs.push_back(g.x0 + g.sigma * t);
        ws.push_back(0.5 * ph * gl.weights(q) * std::exp(-g.v0 - g.a * t));
        ps.push_back(piece);
      }
    }
    if (tmax < g.len) {
      if (g.len != kInf) throw InvalidDensity("finite cell beyond reach");
      for (Eigen::Index q = 0; q < lag.nodes.size(); ++q) {
        const double t = tmax + lag.nodes(q) / g.a;
        xs.push_back(g.x0 + g.sigma * t);
        ws.push_back(lag.weights(q) * std::exp(-g.v0 - g.a * tmax) / g.a);
        ps.push_back(piece);
      }
    }
  }
  CellQuadrature out;
  out.shift = c.shift;
  out.points = Eigen::Map<const Vector>(xs.data(), static_cast<Eigen::Index>(xs.size()));
  out.weights = Eigen::Map<const Vector>(ws.data(), static_cast<Eigen::Index>(ws.size()));
  out.piece = Eigen::Map<const Eigen::VectorXi>(ps.data(), static_cast<Eigen::Index>(ps.size()));
  return out;
}

// ---------------------------------------------------------------- 2D

struct Vertex {
  Point2 p;
  int edge;  // label of the edge leaving this vertex; -1 for the box
};

using Polygon = std::vector<Vertex>;

// Keep the part of `poly` where n.x >= r; new edges get `label`.
Polygon clip(const Polygon& poly, double nx, double ny, double r, int label) {
  Polygon out;
  const std::size_t k = poly.size();
  for (std::size_t i = 0; i < k; ++i) {
    const Vertex& a = poly[i];
    const Vertex& b = poly[(i + 1) % k];
    const double da = nx * a.p.x + ny * a.p.y - r;
    const double db = nx * b.p.x + ny * b.p.y - r;
    const bool ia = da >= 0.0, ib = db >= 0.0;
    if (ia) out.push_back(a);
    if (ia != ib) {
      const double t = da / (da - db);
      const Point2 q{a.p.x + t * (b.p.x - a.p.x), a.p.y + t * (b.p.y - a.p.y)};
      out.push_back({q, ia ? label : a.edge});
    }
  }
  return out;
}

struct Cells2D {
  std::vector<Polygon> cells;  // per piece, possibly empty
  double shift = 0.0;
  double exterior = 0.0;
};

Cells2D cells_2d(const MaxAffineFunction& v, double rel_exterior) {
  const Matrix& S = v.slopes();
  const Vector& B = v.intercepts();
  const Eigen::Index m = v.pieces();
  std::vector<Point2> ys;
  for (Eigen::Index j = 0; j < m; ++j) ys.push_back({S(j, 0), S(j, 1)});
  const auto hull = convex_hull(ys);
  double c = kInf;
  if (hull.size() < 3) c = 0.0;
  for (std::size_t i = 0; i < hull.size() && c > 0.0; ++i) {
    const Point2& a = hull[i];
    const Point2& b = hull[(i + 1) % hull.size()];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    c = std::min(c, cross(a, b, {0.0, 0.0}) / len);
  }
  const double scale = S.cwiseAbs().maxCoeff();
  if (!(c > 1e-12 * scale))
    throw InvalidDensity("e^{-V} is not integrable: 0 must be interior to the slope hull");

  Cells2D out;
  out.shift = v.minimum();
  const double K = std::max(0.0, out.shift + B.maxCoeff());
  // Exterior of the disk of radius R carries at most
  // 2 pi e^{K} (R/c + 1/c^2) e^{-cR} of the (shifted) mass.
  auto tail = [&](double R) {
    return 2.0 * M_PI * std::exp(K - c * R) * (R / c + 1.0 / (c * c));
  };
  // V - shift <= L |x - x*| gives a total shifted mass of at least 2 pi / L^2.
  const double floor_mass = 2.0 * M_PI / (scale * scale * 2.0);
  double R = (K + 40.0) / c + 1.0;
  for (int it = 0; it < 200 && tail(R) > rel_exterior * floor_mass; ++it) R *= 1.1;
  out.exterior = tail(R);
  for (Eigen::Index j = 0; j < m; ++j) {
    Polygon poly{{{-R, -R}, -1}, {{R, -R}, -1}, {{R, R}, -1}, {{-R, R}, -1}};
    for (Eigen::Index i = 0; i < m && !poly.empty(); ++i) {
      if (i == j) continue;
      poly = clip(poly, S(j, 0) - S(i, 0), S(j, 1) - S(i, 1), B(j) - B(i),
                  static_cast<int>(i));
    }
    if (poly.size() < 3) poly.clear();
    out.cells.push_back(std::move(poly));
  }
  return out;
}

double alpha(const MaxAffineFunction& v, Eigen::Index j, const Point2& p, double shift) {
  return std::min(0.0, -(v.slopes()(j, 0) * p.x + v.slopes()(j, 1) * p.y -
                         v.intercepts()(j) - shift));
}

double tri_area(const Point2& a, const Point2& b, const Point2& c) {
  return 0.5 * std::abs(cross(a, b, c));
}

CellIntegrals integrals_2d(const MaxAffineFunction& v, bool moments) {
  const Cells2D cc = cells_2d(v, 1e-15);
  const Eigen::Index m = v.pieces();
  CellIntegrals out;
  out.shift = cc.shift;
  out.mass = Vector::Zero(m);
  out.first = Matrix::Zero(m, 2);
  out.second = Vector::Zero(m);
  out.facet = Matrix::Zero(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const Polygon& poly = cc.cells[static_cast<std::size_t>(j)];
    if (poly.empty()) continue;
    std::vector<double> al;
    for (const Vertex& q : poly) al.push_back(alpha(v, j, q.p, cc.shift));
    for (std::size_t t = 1; t + 1 < poly.size(); ++t) {
      const Point2 P[3] = {poly[0].p, poly[t].p, poly[t + 1].p};
      const double a[3] = {al[0], al[t], al[t + 1]};
      const double two_area = 2.0 * tri_area(P[0], P[1], P[2]);
      if (two_area == 0.0) continue;
      if (!moments) {
        out.mass(j) += two_area * exp_divided_difference(a, 3);
        continue;
      }
      // Barycentric moments from divided differences with repeated nodes.
      double E1[3], E2[3][3];
      for (int i = 0; i < 3; ++i) {
        const double n4[4] = {a[0], a[1], a[2], a[i]};
        E1[i] = exp_divided_difference(n4, 4);
        for (int k = i; k < 3; ++k) {
          const double n5[5] = {a[0], a[1], a[2], a[i], a[k]};
          E2[i][k] = E2[k][i] = (i == k ? 2.0 : 1.0) * exp_divided_difference(n5, 5);
        }
      }
      out.mass(j) += two_area * exp_divided_difference(a, 3);
      for (int i = 0; i < 3; ++i) {
        out.first(j, 0) += two_area * E1[i] * P[i].x;
        out.first(j, 1) += two_area * E1[i] * P[i].y;
        for (int k = 0; k < 3; ++k)
          out.second(j) += two_area * E2[i][k] * (P[i].x * P[k].x + P[i].y * P[k].y);
      }
    }
    for (std::size_t e = 0; e < poly.size(); ++e) {
      const int i = poly[e].edge;
      if (i < 0) continue;
      const std::size_t f = (e + 1) % poly.size();
      const double len = std::hypot(poly[f].p.x - poly[e].p.x, poly[f].p.y - poly[e].p.y);
      const double nodes[2] = {al[e], al[f]};
      const double gap = (v.slope(j) - v.slope(i)).norm();
      out.facet(j, i) += len * exp_divided_difference(nodes, 2) / gap;
    }
  }
  out.facet = 0.5 * (out.facet + out.facet.transpose()).eval();
  out.exterior_bound = cc.exterior;
  return out;
}

CellQuadrature quadrature_2d(const MaxAffineFunction& v) {
  const Cells2D cc = cells_2d(v, 1e-15);
  static const GaussRule gl = gauss_legendre(6);
  std::vector<double> xs, ys, ws;
  std::vector<int> ps;
  struct Tri {
    Point2 p[3];
    double a[3];
  };
  for (Eigen::Index j = 0; j < v.pieces(); ++j) {
    const Polygon& poly = cc.cells[static_cast<std::size_t>(j)];
    std::vector<Tri> stack;
    for (std::size_t t = 1; t + 1 < poly.size(); ++t) {
      Tri tr{{poly[0].p, poly[t].p, poly[t + 1].p}, {}};
      for (int i = 0; i < 3; ++i) tr.a[i] = alpha(v, j, tr.p[i], cc.shift);
      stack.push_back(tr);
    }
    while (!stack.empty()) {
      Tri tr = stack.back();
      stack.pop_back();
      const double amax = std::max({tr.a[0], tr.a[1], tr.a[2]});
      const double amin = std::min({tr.a[0], tr.a[1], tr.a[2]});
      if (amax < -46.0) continue;
      double diam = 0.0;
      for (int i = 0; i < 3; ++i)
        diam = std::max(diam, std::hypot(tr.p[i].x - tr.p[(i + 1) % 3].x,
                                         tr.p[i].y - tr.p[(i + 1) % 3].y));
      if (amax - amin > 2.0 || diam > 2.0) {
        Point2 mid[3];
        double am[3];
        for (int i = 0; i < 3; ++i) {
          const int k = (i + 1) % 3;
          mid[i] = {0.5 * (tr.p[i].x + tr.p[k].x), 0.5 * (tr.p[i].y + tr.p[k].y)};
          am[i] = 0.5 * (tr.a[i] + tr.a[k]);
        }
        stack.push_back({{tr.p[0], mid[0], mid[2]}, {tr.a[0], am[0], am[2]}});
        stack.push_back({{mid[0], tr.p[1], mid[1]}, {am[0], tr.a[1], am[1]}});
        stack.push_back({{mid[2], mid[1], tr.p[2]}, {am[2], am[1], tr.a[2]}});
        stack.push_back({{mid[0], mid[1], mid[2]}, {am[0], am[1], am[2]}});
        continue;
      }
      const double two_area = 2.0 * tri_area(tr.p[0], tr.p[1], tr.p[2]);
      for (Eigen::Index qi = 0; qi < gl.nodes.size(); ++qi) {
        const double u = 0.5 * (gl.nodes(qi) + 1.0);
        for (Eigen::Index qj = 0; qj < gl.nodes.size(); ++qj) {
          const double s = 0.5 * (gl.nodes(qj) + 1.0) * (1.0 - u);
          const double l0 = 1.0 - u - s;
          const double w = 0.25 * gl.weights(qi) * gl.weights(qj) * (1.0 - u) * two_area;
          const double av = l0 * tr.a[0] + u * tr.a[1] + s * tr.a[2];
          xs.push_back(l0 * tr.p[0].x + u * tr.p[1].x + s * tr.p[2].x);
          ys.push_back(l0 * tr.p[0].y + u * tr.p[1].y + s * tr.p[2].y);
          ws.push_back(w * std::exp(av));
          ps.push_back(static_cast<int>(j));
        }
      }
    }
  }
  const auto count = static_cast<Eigen::Index>(ws.size());
  CellQuadrature out;
  out.shift = cc.shift;
  out.points.resize(count, 2);
  out.points.col(0) = Eigen::Map<const Vector>(xs.data(), count);
  out.points.col(1) = Eigen::Map<const Vector>(ys.data(), count);
  out.weights = Eigen::Map<const Vector>(ws.data(), count);
  out.piece = Eigen::Map<const Eigen::VectorXi>(ps.data(), count);
  return out;
}

}  // namespace

CellIntegrals cell_integrals(const MaxAffineFunction& v, bool moments) {
  if (v.dim() == 1) return integrals_1d(v);
  if (v.dim() == 2) return integrals_2d(v, moments);
  throw DimensionError("cell integrals are available in dimensions 1 and 2");
}

CellQuadrature cell_quadrature(const MaxAffineFunction& v) {
  if (v.dim() == 1) return quadrature_1d(v);
  if (v.dim() == 2) return quadrature_2d(v);
  throw DimensionError("cell quadrature is available in dimensions 1 and 2");
}

}  // namespace santalo
