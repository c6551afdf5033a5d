#pragma once

#include <cmath>
#include <limits>

#include <Eigen/Core>

namespace santalo {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Array = Eigen::ArrayXd;

// +inf encodes "outside the effective domain". IEEE infinity already obeys
// inf + finite = inf and propagates through min/max, so the sentinel is the
// float infinity itself; helpers below centralize the few non-IEEE rules.
inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline bool is_finite(double v) { return std::isfinite(v); }
inline bool is_plus_inf(double v) { return v == kInf; }

/// Extended addition: +inf absorbs finite values; (+inf) + (-inf) is +inf.
inline double ext_add(double a, double b) {
  if (a == kInf || b == kInf) return kInf;
  return a + b;
}

/// exp(-v) with exp(-inf) = 0.
inline double exp_neg(double v) { return v == kInf ? 0.0 : std::exp(-v); }

}  // namespace santalo
