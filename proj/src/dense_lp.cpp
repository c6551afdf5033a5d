#include "santalo/dense_lp.hpp"

#include <cmath>
#include <vector>

#include "santalo/errors.hpp"

namespace santalo {

namespace {

struct Tableau {
  Matrix t;                    // rows 0..m-1 constraints, row m objective
  std::vector<Eigen::Index> basis;
  double tol;

  Eigen::Index rows() const { return t.rows() - 1; }
  Eigen::Index rhs() const { return t.cols() - 1; }

  void pivot(Eigen::Index r, Eigen::Index c) {
    t.row(r) /= t(r, c);
    for (Eigen::Index i = 0; i < t.rows(); ++i)
      if (i != r && t(i, c) != 0.0) t.row(i) -= t(i, c) * t.row(r);
    basis[static_cast<std::size_t>(r)] = c;
  }

  // Runs Bland's rule over columns [0, ncols); false if unbounded.
  bool optimize(Eigen::Index ncols) {
    for (int iter = 0; iter < 100000; ++iter) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < ncols; ++j)
        if (t(rows(), j) < -tol) {
          enter = j;
          break;
        }
      if (enter < 0) return true;
      Eigen::Index leave = -1;
      double best = kInf;
      for (Eigen::Index i = 0; i < rows(); ++i) {
        if (t(i, enter) <= tol) continue;
        const double ratio = t(i, rhs()) / t(i, enter);
        if (ratio < best - 1e-14 ||
            (std::abs(ratio - best) <= 1e-14 && leave >= 0 &&
             basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    throw SolverError("simplex iteration limit reached");
  }
};

}  // namespace

LpResult solve_standard_lp(const Matrix& A, const Vector& b, const Vector& c,
                           double tol) {
  const Eigen::Index m = A.rows(), n = A.cols();
  if (b.size() != m || c.size() != n) throw DimensionError("LP data sizes");

  // Phase 1 on [A | I] with artificial variables n..n+m-1.
  Tableau tab;
  tab.tol = tol;
  tab.t = Matrix::Zero(m + 1, n + m + 1);
  tab.basis.resize(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    const double s = b(i) < 0.0 ? -1.0 : 1.0;
    tab.t.row(i).head(n) = s * A.row(i);
    tab.t(i, n + i) = 1.0;
    tab.t(i, n + m) = s * b(i);
    tab.basis[static_cast<std::size_t>(i)] = n + i;
  }
  for (Eigen::Index i = 0; i < m; ++i) tab.t.row(m) -= tab.t.row(i);
  for (Eigen::Index i = 0; i < m; ++i) tab.t(m, n + i) = 0.0;
  tab.optimize(n + m);

  LpResult res;
  const double scale = 1.0 + b.cwiseAbs().sum();
  if (-tab.t(m, n + m) > 1e-9 * scale) {
    res.status = LpStatus::infeasible;
    res.value = kInf;
    return res;
  }
  // Drive artificials out of the basis; rows that cannot be cleared are
  // redundant and dropped.
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (tab.basis[static_cast<std::size_t>(i)] < n) {
      keep.push_back(i);
      continue;
    }
    Eigen::Index col = -1;
    for (Eigen::Index j = 0; j < n; ++j)
      if (std::abs(tab.t(i, j)) > 1e-9) {
        col = j;
        break;
      }
    if (col >= 0) {
      tab.pivot(i, col);
      keep.push_back(i);
    }
  }

  Tableau p2;
  p2.tol = tol;
  const auto mk = static_cast<Eigen::Index>(keep.size());
  p2.t = Matrix::Zero(mk + 1, n + 1);
  for (Eigen::Index r = 0; r < mk; ++r) {
    const Eigen::Index i = keep[static_cast<std::size_t>(r)];
    p2.t.row(r).head(n) = tab.t.row(i).head(n);
    p2.t(r, n) = tab.t(i, n + m);
    p2.basis.push_back(tab.basis[static_cast<std::size_t>(i)]);
  }
  p2.t.row(mk).head(n) = c.transpose();
  for (Eigen::Index r = 0; r < mk; ++r) {
    const Eigen::Index j = p2.basis[static_cast<std::size_t>(r)];
    p2.t.row(mk) -= c(j) * p2.t.row(r);
  }
  if (!p2.optimize(n)) {
    res.status = LpStatus::unbounded;
    res.value = -kInf;
    return res;
  }
  res.status = LpStatus::optimal;
  res.x = Vector::Zero(n);
  for (Eigen::Index r = 0; r < mk; ++r)
    res.x(p2.basis[static_cast<std::size_t>(r)]) = std::max(0.0, p2.t(r, n));
  res.value = c.dot(res.x);
  return res;
}

}  // namespace santalo
