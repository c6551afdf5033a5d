#pragma once

#include <optional>
#include <string>
#include <variant>

#include "santalo/grid_function.hpp"
#include "santalo/max_affine.hpp"

namespace santalo {

using Potential = std::variant<GridFunction, MaxAffineFunction>;

/// Integrals of a density eta = e^{-V} dx / Z that every functional is
/// assembled from.
struct MomentSummary {
  int dim = 1;
  double log_norm = 0.0;        // log Z
  double mean_potential = 0.0;  // int V d eta
  Vector mean;                  // int x d eta
  double second_moment = 0.0;   // int |x|^2 d eta
  double fisher_lebesgue = 0.0; // int |grad V|^2 d eta
  double fisher_gaussian = 0.0; // int |grad V - x|^2 d eta
  double virial = 0.0;          // int x . grad V d eta
  double est_error = 0.0;       // relative accuracy of the integrals
  bool boundary_warning = false;  // one-sided differences next to +inf nodes
};

/// Weighted nodes representing eta: probability weights, the potential and
/// its (a.e.) gradient at each node.
struct DensityRule {
  Matrix points;    // count x n
  Vector weights;   // sums to 1
  Vector potential;
  Matrix gradient;  // count x n
};

/// eta = e^{-V} dx / Z with V convex and 0 < Z < inf.
class LogConcaveDensity {
public:
  /// Grid potential. The essential-continuity flag is computed in 1D
  /// (no finite node next to a +inf node); in 2D it is an assumption the
  /// caller states, defaulting to true only for finite-valued grids.
  explicit LogConcaveDensity(GridFunction v, std::optional<bool> essentially_continuous = {});

  /// Max-affine potential; a claimed symmetry is verified on the pieces.
  explicit LogConcaveDensity(MaxAffineFunction v, Symmetry symmetry = Symmetry::none);

  /// Either form with a stored normalization, checked against quadrature
  /// to 1e-8 relative.
  LogConcaveDensity(Potential v, double log_norm, std::optional<bool> essentially_continuous = {});

  const Potential& potential() const { return v_; }
  bool is_grid() const { return std::holds_alternative<GridFunction>(v_); }
  const GridFunction& grid() const { return std::get<GridFunction>(v_); }
  const MaxAffineFunction& max_affine() const { return std::get<MaxAffineFunction>(v_); }

  int dim() const { return moments_.dim; }
  double log_norm() const { return moments_.log_norm; }
  Symmetry symmetry() const { return symmetry_; }
  bool essentially_continuous() const { return essentially_continuous_; }
  /// V < inf everywhere.
  bool finite_potential() const;
  const MomentSummary& moments() const { return moments_; }

  /// V(x) (not normalized).
  double potential_at(const Vector& x) const;

  /// Quadrature rule for eta, rebuilt on each call.
  DensityRule rule() const;

  /// Law of lambda X for X ~ eta.
  LogConcaveDensity dilated(double lambda) const;

private:
  void init(std::optional<bool> essentially_continuous);

  Potential v_;
  Symmetry symmetry_ = Symmetry::none;
  bool essentially_continuous_ = true;
  MomentSummary moments_;
};

// Built-in densities.

/// Standard Gaussian gamma_n (n = 1, 2) on a grid.
LogConcaveDensity gaussian_density(int n);
/// N(m, sigma^2) in 1D on a grid.
LogConcaveDensity normal_density(double mean, double sigma);
/// e^{-a x^2 / 2} in 1D, i.e. N(0, 1/a).
LogConcaveDensity quadratic_density(double a);
/// tau = e^{-(1+x)} on [-1, inf); the mirror image when `reflected`.
LogConcaveDensity tau_density(bool reflected = false);
/// tau_s = e^{-|x|} / 2, and its n-fold product (n = 1, 2).
LogConcaveDensity tau_s_density(int n = 1);
/// Continuous approximations of tau (i = 1) and its mirror (i = 2):
/// V = max(-k(x+1), x+1) and its reflection.
LogConcaveDensity fm_density(int k, int i);
/// Continuous approximation of the uniform law on [-1, 1]:
/// V = max(-k(x+1), 0, k(x-1)).
LogConcaveDensity uncond_density(int k);

}  // namespace santalo
