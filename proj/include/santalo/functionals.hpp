#pragma once

#include <optional>

#include "santalo/check_report.hpp"
#include "santalo/density.hpp"
#include "santalo/grid_function.hpp"
#include "santalo/integrate.hpp"
#include "santalo/max_affine.hpp"

namespace santalo {

/// Lebesgue measure, the standard Gaussian, or e^{-W} dx with W convex.
class ReferenceMeasure {
public:
  enum class Kind { lebesgue, gaussian, logconcave };

  static ReferenceMeasure lebesgue(int n);
  static ReferenceMeasure gaussian(int n);
  /// Throws InvalidFunction when W is not convex.
  static ReferenceMeasure logconcave(GridFunction W);

  Kind kind() const { return kind_; }
  int dim() const { return n_; }
  const GridFunction& W() const { return *W_; }
  /// -log dm/dx at x; +inf off the support. Outside W's grid the affine
  /// extension of W is used.
  double potential(const Vector& x) const;

private:
  Kind kind_ = Kind::lebesgue;
  int n_ = 1;
  std::optional<GridFunction> W_;
};

/// int e^{-f} dx * int e^{-f*} dx with f* on the default dual grid (or the
/// given one). Throws NotAdmissible when a factor is 0 or +inf.
Estimate santalo_product(const GridFunction& f);
Estimate santalo_product(const GridFunction& f, const std::vector<Axis>& dual);

/// L(f|m) = -log int e^{-f*} dm. An integral of 0 gives +inf and a
/// divergent one -inf; both set `flagged`.
struct LaplaceValue {
  double value = 0.0;
  double est_error = 0.0;
  bool flagged = false;
};
LaplaceValue log_laplace_star(const GridFunction& f, const ReferenceMeasure& m);
/// Exact L(f|Leb) for a 1D max-affine f (f* is piecewise linear on the
/// slope range).
LaplaceValue log_laplace_star(const MaxAffineFunction& f);

/// H(eta|m). Throws NotAbsolutelyContinuous when eta charges {W = +inf}.
Estimate relative_entropy(const LogConcaveDensity& eta, const ReferenceMeasure& m);

/// int |grad V - x|^2 d eta. Without the essential-continuity flag this is
/// only the a.e.-gradient quantity, marked by `tilde_only`.
struct FisherValue {
  double value = 0.0;
  double est_error = 0.0;
  bool tilde_only = false;
  bool boundary_warning = false;
};
FisherValue fisher_information(const LogConcaveDensity& eta);

/// int |grad V|^2 d eta.
Estimate fisher_information_lebesgue(const LogConcaveDensity& eta);

/// Log-Sobolev deficit 1/2 I(eta|gamma_n) - H(eta|gamma_n).
Estimate lsi_deficit(const LogConcaveDensity& eta);
/// Deficit of a product measure: the sum of the factors' deficits.
Estimate lsi_deficit_product(const LogConcaveDensity& a, const LogConcaveDensity& b);

/// exp(-(2/n) H(eta|Leb)) / (2 pi e).
Estimate entropy_power(const LogConcaveDensity& eta);

/// Checks int f d eta - log int e^f dm <= H(eta|m) for f = -g. With
/// `expect_equality` (f = log d eta/dm) the report is an identity check
/// at tolerance 1e-8.
CheckReport entropy_duality_check(const LogConcaveDensity& eta, const Potential& g,
                                  const ReferenceMeasure& m, bool expect_equality = false);

}  // namespace santalo
