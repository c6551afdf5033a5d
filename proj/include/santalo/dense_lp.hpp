#pragma once

#include "santalo/extended_real.hpp"

namespace santalo {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  double value = 0.0;
  Vector x;
};

/// min c.x subject to A x = b, x >= 0, by the two-phase tableau simplex with
/// Bland's rule. Intended for small dense problems (tens of variables).
LpResult solve_standard_lp(const Matrix& A, const Vector& b, const Vector& c,
                           double tol = 1e-11);

}  // namespace santalo
