#pragma once

#include <vector>

#include "santalo/grid_function.hpp"

namespace santalo {

/// Range of envelope slopes of a grid function along one axis.
///
/// `lo`/`hi` bound the slopes of the piecewise-linear envelope. A side is
/// open when the function extends past the grid there (finite boundary
/// value), in which case the conjugate is +inf beyond that slope.
struct SlopeRange {
  double lo = 0.0;
  double hi = 0.0;
  bool open_lo = false;
  bool open_hi = false;
  double x_min = 0.0;  // extreme finite node coordinates along the axis
  double x_max = 0.0;
};

std::vector<SlopeRange> slope_ranges(const GridFunction& f);

/// Dual axes used when the caller does not supply any: open sides are
/// anchored on the extreme envelope slopes and padded by 10% of the span,
/// closed sides reach far enough that e^{-f*} has decayed by e^{-40}.
std::vector<Axis> default_dual_axes(const GridFunction& f);

/// Legendre transform sampled on the given dual grid.
GridFunction legendre_grid(const GridFunction& f, const std::vector<Axis>& dual);
GridFunction legendre_grid(const GridFunction& f);

/// Legendre transform of the grid function at an arbitrary point.
double conjugate_at(const GridFunction& f, const Vector& y);

/// Convex envelope f** on the same grid.
GridFunction biconjugate(const GridFunction& f);

/// Inf-convolution with r|.|: f_r(x) = min over nodes y of f(y) + r|x - y|.
GridFunction lipschitz_regularize(const GridFunction& f, double r);

/// Average of f over the sign-flip group (global flip or per-coordinate).
GridFunction symmetrize(const GridFunction& f, Symmetry mode);

/// Discrete convexity: contiguous domain along grid lines and second
/// differences >= -1e-9 (1 + |f|).
bool is_convex(const GridFunction& f);

/// Envelope slope span along an axis divided by the number of grid cells.
double slope_resolution(const GridFunction& f, int axis);

}  // namespace santalo
