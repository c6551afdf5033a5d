#pragma once

#include "santalo/check_report.hpp"
#include "santalo/discrete_measure.hpp"
#include "santalo/grid_function.hpp"

namespace santalo {

/// Transport plan between two discrete measures; plan(i, j) is the mass
/// moved from atom i of `rows` to atom j of `cols`.
struct Coupling {
  Matrix plan;
  Vector row_marginal() const { return plan.rowwise().sum(); }
  Vector col_marginal() const { return plan.colwise().sum().transpose(); }
};

struct TransportResult {
  double value = 0.0;
  Coupling coupling;
  int iterations = 0;
};

/// Exact minimum of sum_ij plan_ij cost_ij over plans with the given
/// marginals: transportation (network) simplex with a spanning-tree basis.
/// Supply and demand must each sum to 1; at most 512 entries per side.
TransportResult solve_transport(const Vector& supply, const Vector& demand,
                                const Matrix& cost);

/// Quantile (monotone) coupling of two 1D measures.
TransportResult monotone_coupling(const DiscreteMeasure& a, const DiscreteMeasure& b);

/// T(a, b) = max over couplings of E[X.Y]. 1D uses the monotone coupling.
TransportResult max_correlation_cost(const DiscreteMeasure& a, const DiscreteMeasure& b);
/// Same value computed by the network simplex in every dimension.
TransportResult max_correlation_cost_lp(const DiscreteMeasure& a, const DiscreteMeasure& b);

/// Squared 2-Wasserstein distance; 1D uses the monotone coupling.
TransportResult w2_squared(const DiscreteMeasure& a, const DiscreteMeasure& b);
TransportResult w2_squared_lp(const DiscreteMeasure& a, const DiscreteMeasure& b);

/// |T + W2^2/2 - m2(a)/2 - m2(b)/2| via two independent LPs; pass iff < 1e-9.
CheckReport tw_identity_check(const DiscreteMeasure& a, const DiscreteMeasure& b);

enum class KStatus { ok, not_centered, hyperplane_supported };
std::string to_string(KStatus s);

/// Whether the log-Laplace dual K(nu|Leb) is finite: nu must be centered
/// (|barycenter| < 1e-10) and not supported on a hyperplane.
KStatus validate_for_K(const DiscreteMeasure& nu);

/// int f da + int f* db - T(a, b); nonnegative by Fenchel-Young. f is
/// interpolated at the atoms of a and conjugated exactly at those of b.
double kantorovich_gap(const GridFunction& f, const DiscreteMeasure& a,
                       const DiscreteMeasure& b);

/// Gaussian with diagonal covariance diag(sigma^2).
struct GaussianMeasure {
  Vector mean;
  Vector sigma;
  static GaussianMeasure standard(int n);
  int dim() const { return static_cast<int>(mean.size()); }
};

/// H(N(m, diag s^2) | gamma_n) in closed form.
double relative_entropy_gaussian(const GaussianMeasure& g);
/// Closed-form W2^2 between Gaussians with diagonal covariances.
double w2_squared(const GaussianMeasure& a, const GaussianMeasure& b);

/// G = H(a|gamma) + H(b|gamma) - W2^2(a, b)/2.
struct GValue {
  double value = 0.0;
  bool infinite = false;  // an input is singular with respect to gamma_n
};
GValue g_functional(const GaussianMeasure& a, const GaussianMeasure& b);
GValue g_functional(const DiscreteMeasure& a, const DiscreteMeasure& b);

}  // namespace santalo
