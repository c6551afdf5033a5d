#pragma once

#include "santalo/extended_real.hpp"
#include "santalo/max_affine.hpp"

namespace santalo {

/// Exact integrals of e^{-(V - shift)} over the linearity cells of a
/// max-affine V in dimension 1 or 2, with shift = min V. Pieces that are
/// nowhere active get zero mass.
struct CellIntegrals {
  double shift = 0.0;
  Vector mass;    // per piece
  Matrix first;   // per piece: integral of x (pieces x n)
  Vector second;  // per piece: integral of |x|^2
  Matrix facet;   // w_ij: facet integral between cells i, j over |y_i - y_j|
  double exterior_bound = 0.0;  // majorant of the mass left out by the 2D box

  double total() const { return mass.sum(); }
  /// log of the integral of e^{-V}.
  double log_norm() const;
  /// Cell masses as fractions of the total.
  Vector fractions() const { return mass / total(); }
};

/// Throws InvalidDensity when e^{-V} is not integrable (0 not interior to
/// the slope hull). Moments are skipped unless requested.
CellIntegrals cell_integrals(const MaxAffineFunction& v, bool moments = true);

/// Quadrature nodes for integrating g e^{-(V - shift)} over R^n: points
/// (count x n), weights already include e^{-(V - shift)}, and the active
/// piece of each point. Exact for polynomial g of low degree in 1D;
/// accurate to ~1e-12 relative for smooth g in 2D.
struct CellQuadrature {
  double shift = 0.0;
  Matrix points;
  Vector weights;
  Eigen::VectorXi piece;
};

CellQuadrature cell_quadrature(const MaxAffineFunction& v);

}  // namespace santalo
