#pragma once

#include "santalo/check_report.hpp"
#include "santalo/density.hpp"
#include "santalo/discrete_measure.hpp"
#include "santalo/integrate.hpp"
#include "santalo/max_affine.hpp"

namespace santalo {

/// Image of eta under grad V. Max-affine V: one atom per slope with the
/// mass of its linearity cell. Grid V: node gradients binned on a lattice
/// whose spacing is the grid's slope resolution, each bin becoming one
/// atom at its mean gradient.
DiscreteMeasure moment_measure_pushforward(const LogConcaveDensity& eta);

/// F(b) = log int e^{-V_b} dx - sum_j nu_j b_j for V_b(x) = max_j (y_j.x - b_j)
/// with y_j the atoms of nu, together with its gradient (cell mass - nu_j)
/// and, on request, its Hessian.
struct MomentObjective {
  double value = 0.0;
  Vector gradient;
  Matrix hessian;
  Vector cell_mass;
};
MomentObjective moment_objective(const DiscreteMeasure& nu, const Vector& b,
                                 bool with_hessian = false);

enum class MomentMethod { newton, gradient };

struct MomentSolution {
  MaxAffineFunction potential;  // pieces in the atom order of `target`; int e^{-V} = 1
  DiscreteMeasure target;
  double residual = 0.0;  // max_j |eta(cell_j) - nu_j|
  int iterations = 0;
  double k_value = 0.0;   // -sum_j nu_j b_j
  double k_direct = 0.0;  // -(T(nu, eta) + H(eta|Leb)) by cell quadrature
};

/// Finds V with moment measure nu (n = 1, 2) by maximizing F. The gauge
/// fixes int e^{-V} = 1 and b = 0 at the lexicographically first slope (in
/// 2D also at the next slope not parallel to it). Throws InfeasibleTarget
/// unless nu is centered and full-dimensional, NonConverged on max_iter.
MomentSolution solve_moment_potential(const DiscreteMeasure& nu, double tol = 1e-10,
                                      int max_iter = 200,
                                      MomentMethod method = MomentMethod::newton);

/// K(nu|Leb) = -sum_j nu_j b_j at the normalized solution; +inf when nu is
/// not centered or lies in a hyperplane.
Estimate k_functional(const DiscreteMeasure& nu);

/// nu_N: N atoms at the Gaussian quantiles (i - 1/2)/N with equal weights.
DiscreteMeasure discretized_gaussian(int atoms);

/// T(nu, eta) = int x.grad V d eta against n, nu the moment measure of
/// eta. Not applicable when V takes the value +inf.
CheckReport ipp_check(const LogConcaveDensity& eta);

/// For nu* the moment measure of eta* ~ e^{-f*}: int(-f) d nu* - K(nu*|Leb)
/// against L(f|Leb), with K evaluated at its optimizer eta* as
/// -(T(nu*, eta*) + H(eta*|Leb)). 1D only; 2D reports not_applicable.
CheckReport reverse_duality_check(const GridFunction& f);

}  // namespace santalo
