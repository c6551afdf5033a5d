#pragma once

#include "santalo/extended_real.hpp"

namespace santalo {

/// V(x) = max_j (y_j . x - b_j) with slopes y_j (rows of `slopes`) and
/// intercepts b_j, in dimension 1 to 3.
class MaxAffineFunction {
public:
  /// Validating constructor: drops pieces that are nowhere active (and
  /// duplicate slopes, keeping the larger piece), then requires at least
  /// n+1 pieces whose slopes span R^n affinely.
  MaxAffineFunction(Matrix slopes, Vector intercepts);

  /// No pruning or spanning checks; every piece is kept as given. Used for
  /// intermediate solver iterates where a piece may temporarily vanish.
  static MaxAffineFunction raw(Matrix slopes, Vector intercepts);

  int dim() const { return static_cast<int>(slopes_.cols()); }
  Eigen::Index pieces() const { return slopes_.rows(); }
  const Matrix& slopes() const { return slopes_; }
  const Vector& intercepts() const { return intercepts_; }
  Vector slope(Eigen::Index j) const { return slopes_.row(j).transpose(); }

  double operator()(const Vector& x) const;

  /// First piece attaining the maximum at x.
  Eigen::Index active_piece(const Vector& x) const;

  /// x -> V(x + a).
  MaxAffineFunction translated(const Vector& a) const;

  /// x -> V(x) + c.
  MaxAffineFunction plus_constant(double c) const;

  /// x -> V(s x), s > 0.
  MaxAffineFunction rescaled(double s) const;

  /// x -> V(x) + a.x.
  MaxAffineFunction plus_linear(const Vector& a) const;

  /// V*(y): the lower convex envelope of the points (y_j, b_j), +inf off
  /// the convex hull of the slopes. Exact (piecewise linear interpolation in
  /// 1D, a small linear program otherwise).
  double conjugate(const Vector& y) const;

  /// min_x V(x) = -V*(0); -inf when 0 is off the slope hull.
  double minimum() const;

private:
  MaxAffineFunction() = default;
  Matrix slopes_;
  Vector intercepts_;
};

/// Evaluator returned by legendre_maxaffine.
class MaxAffineConjugate {
public:
  explicit MaxAffineConjugate(MaxAffineFunction v) : v_(std::move(v)) {}
  double operator()(const Vector& y) const { return v_.conjugate(y); }
  const MaxAffineFunction& primal() const { return v_; }

private:
  MaxAffineFunction v_;
};

MaxAffineConjugate legendre_maxaffine(const MaxAffineFunction& v);

/// Affine dimension of a point set (rows), singular-value tolerance `tol`
/// relative to the largest singular value and absolute 1e-300 floor.
int affine_dimension(const Matrix& points, double tol = 1e-10);

}  // namespace santalo
