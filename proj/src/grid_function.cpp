#include "santalo/grid_function.hpp"

#include <algorithm>
#include <cmath>

#include "santalo/errors.hpp"

namespace santalo {

std::string to_string(Symmetry s) {
  switch (s) {
    case Symmetry::none: return "none";
    case Symmetry::symmetric: return "symmetric";
    case Symmetry::unconditional: return "unconditional";
  }
  return "none";
}

Symmetry symmetry_from_string(const std::string& s) {
  if (s == "none") return Symmetry::none;
  if (s == "symmetric") return Symmetry::symmetric;
  if (s == "unconditional") return Symmetry::unconditional;
  throw ParseError("unknown symmetry '" + s + "'");
}

GridFunction::GridFunction(std::vector<Axis> axes, Array values,
                           Symmetry symmetry)
    : axes_(std::move(axes)), values_(std::move(values)), symmetry_(symmetry) {
  if (axes_.empty() || axes_.size() > 2)
    throw GridError("grid functions support dimension 1 or 2");
  Eigen::Index total = 1;
  for (const auto& a : axes_) {
    if (a.steps < 3) throw GridError("each axis needs at least 3 nodes");
    if (!(a.hi > a.lo) || !std::isfinite(a.lo) || !std::isfinite(a.hi))
      throw GridError("axis bounds must satisfy lo < hi");
    total *= a.steps;
  }
  if (values_.size() != total)
    throw GridError("value count does not match the grid");
  bool any_finite = false;
  for (Eigen::Index k = 0; k < total; ++k) {
    const double v = values_(k);
    if (std::isnan(v) || v == -kInf)
      throw InvalidFunction("values must be real or +inf");
    any_finite = any_finite || std::isfinite(v);
  }
  if (!any_finite) throw InvalidFunction("all values are +inf");

  if (symmetry_ != Symmetry::none) {
    for (const auto& a : axes_)
      if (!a.symmetric_about_origin())
        throw GridError("symmetry flag requires a grid symmetric about 0");
    const unsigned all = (1u << axes_.size()) - 1u;
    for (Eigen::Index k = 0; k < total; ++k) {
      if (values_(reflect(k, all)) != values_(k))
        throw InvalidFunction("values are not symmetric under x -> -x");
      if (symmetry_ == Symmetry::unconditional && axes_.size() == 2) {
        if (values_(reflect(k, 1u)) != values_(k))
          throw InvalidFunction("values are not unconditional");
      }
    }
  }
}

Vector GridFunction::point(Eigen::Index k) const {
  Vector x(dim());
  Eigen::Index rem = k;
  for (int d = 0; d < dim(); ++d) {
    const int i = static_cast<int>(rem % steps(d));
    rem /= steps(d);
    x(d) = axis(d).node(i);
  }
  return x;
}

GridFunction GridFunction::with_symmetry(Symmetry s) const {
  return GridFunction(axes_, values_, s);
}

Eigen::Index GridFunction::reflect(Eigen::Index k, unsigned flips) const {
  if (dim() == 1) {
    const int i = static_cast<int>(k);
    return (flips & 1u) ? steps(0) - 1 - i : i;
  }
  int i = static_cast<int>(k % steps(0));
  int j = static_cast<int>(k / steps(0));
  if (flips & 1u) i = steps(0) - 1 - i;
  if (flips & 2u) j = steps(1) - 1 - j;
  return index(i, j);
}

namespace {

// Cell index and local coordinate in [0, 1]; false when x is off the grid.
// With `extend`, points past the ends get t < 0 or t > 1 in the end cell.
bool locate(const Axis& a, double x, int& cell, double& t, bool extend) {
  const double tol = 1e-12 * (1.0 + std::abs(a.lo) + std::abs(a.hi));
  const bool outside = x < a.lo - tol || x > a.hi + tol;
  if (outside && !extend) return false;
  const double h = a.spacing();
  double u = (x - a.lo) / h;
  if (!outside) u = std::clamp(u, 0.0, static_cast<double>(a.steps - 1));
  cell = std::clamp(static_cast<int>(std::floor(u)), 0, a.steps - 2);
  t = u - cell;
  return true;
}

}  // namespace

double GridFunction::interpolate(const Vector& x) const { return evaluate(x, false); }

double GridFunction::extended(const Vector& x) const { return evaluate(x, true); }

double GridFunction::evaluate(const Vector& x, bool extend) const {
  if (x.size() != dim()) throw DimensionError("interpolation point dimension");
  if (dim() == 1) {
    int i;
    double t;
    if (!locate(axes_[0], x(0), i, t, extend)) return kInf;
    const double a = values_(i), b = values_(i + 1);
    if (t == 0.0) return a;
    if (t == 1.0) return b;
    if (!std::isfinite(a) || !std::isfinite(b)) return kInf;
    return (1.0 - t) * a + t * b;
  }
  int i, j;
  double s, t;
  if (!locate(axes_[0], x(0), i, s, extend) || !locate(axes_[1], x(1), j, t, extend))
    return kInf;
  const double w[4] = {(1 - s) * (1 - t), s * (1 - t), (1 - s) * t, s * t};
  const double v[4] = {at(i, j), at(i + 1, j), at(i, j + 1), at(i + 1, j + 1)};
  double acc = 0.0;
  for (int c = 0; c < 4; ++c) {
    if (w[c] == 0.0) continue;
    if (!std::isfinite(v[c])) return kInf;
    acc += w[c] * v[c];
  }
  return acc;
}

Eigen::Index GridFunction::finite_count() const {
  Eigen::Index n = 0;
  for (Eigen::Index k = 0; k < size(); ++k)
    if (std::isfinite(values_(k))) ++n;
  return n;
}

GridFunction GridFunction::rescaled_axes(double s) const {
  if (!(s > 0.0)) throw InvalidParameter("axis scale must be positive");
  std::vector<Axis> axes = axes_;
  for (auto& a : axes) {
    a.lo *= s;
    a.hi *= s;
  }
  return GridFunction(std::move(axes), values_, symmetry_);
}

GridFunction GridFunction::plus_constant(double c) const {
  Array v = values_;
  for (Eigen::Index k = 0; k < v.size(); ++k)
    if (std::isfinite(v(k))) v(k) += c;
  return GridFunction(axes_, std::move(v), symmetry_);
}

}  // namespace santalo
