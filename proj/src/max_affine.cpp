#include "santalo/max_affine.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include <Eigen/SVD>

#include "santalo/dense_lp.hpp"
#include "santalo/errors.hpp"
#include "santalo/lower_hull.hpp"

namespace santalo {

namespace {

bool lex_less(const Matrix& s, Eigen::Index a, Eigen::Index b) {
  for (Eigen::Index d = 0; d < s.cols(); ++d) {
    if (s(a, d) < s(b, d)) return true;
    if (s(a, d) > s(b, d)) return false;
  }
  return false;
}

// Lower envelope value at y of the points (y_j, b_j) over the pieces listed
// in `use`; +inf if y is off their hull.
double envelope_lp(const Matrix& s, const Vector& b,
                   const std::vector<Eigen::Index>& use, const Vector& y) {
  const auto k = static_cast<Eigen::Index>(use.size());
  const Eigen::Index n = s.cols();
  Matrix A(n + 1, k);
  Vector rhs(n + 1), c(k);
  for (Eigen::Index t = 0; t < k; ++t) {
    const Eigen::Index j = use[static_cast<std::size_t>(t)];
    A.col(t).head(n) = s.row(j).transpose();
    A(n, t) = 1.0;
    c(t) = b(j);
  }
  rhs.head(n) = y;
  rhs(n) = 1.0;
  const LpResult r = solve_standard_lp(A, rhs, c);
  if (r.status != LpStatus::optimal) return kInf;
  return r.value;
}

}  // namespace

int affine_dimension(const Matrix& points, double tol) {
  if (points.rows() <= 1) return 0;
  Matrix d = points.bottomRows(points.rows() - 1).rowwise() - points.row(0);
  Eigen::JacobiSVD<Matrix> svd(d);
  const Vector sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= 1e-300) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol * std::max(1.0, sv(0))) ++rank;
  return rank;
}

MaxAffineFunction MaxAffineFunction::raw(Matrix slopes, Vector intercepts) {
  if (slopes.rows() != intercepts.size() || slopes.rows() == 0)
    throw DimensionError("slopes and intercepts must have matching counts");
  if (slopes.cols() < 1 || slopes.cols() > 3)
    throw DimensionError("max-affine functions support dimension 1 to 3");
  if (!slopes.allFinite() || !intercepts.allFinite())
    throw InvalidFunction("slopes and intercepts must be finite");
  MaxAffineFunction v;
  v.slopes_ = std::move(slopes);
  v.intercepts_ = std::move(intercepts);
  return v;
}

MaxAffineFunction::MaxAffineFunction(Matrix slopes, Vector intercepts) {
  MaxAffineFunction r = raw(std::move(slopes), std::move(intercepts));
  const Matrix& s = r.slopes_;
  const Vector& b = r.intercepts_;
  const Eigen::Index m = s.rows(), n = s.cols();

  // Lexicographic order; equal slopes keep the smallest intercept.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index c) {
    if (lex_less(s, a, c)) return true;
    if (lex_less(s, c, a)) return false;
    return b(a) < b(c);
  });
  std::vector<Eigen::Index> uniq;
  for (Eigen::Index j : order)
    if (uniq.empty() || lex_less(s, uniq.back(), j)) uniq.push_back(j);

  std::vector<Eigen::Index> active;
  if (n == 1) {
    std::vector<double> ys, bs;
    for (Eigen::Index j : uniq) {
      ys.push_back(s(j, 0));
      bs.push_back(b(j));
    }
    for (std::size_t i : lower_hull_indices(ys.data(), bs.data(), ys.size()))
      active.push_back(uniq[i]);
  } else {
    for (std::size_t t = 0; t < uniq.size(); ++t) {
      const Eigen::Index j = uniq[t];
      std::vector<Eigen::Index> others;
      for (Eigen::Index i : uniq)
        if (i != j) others.push_back(i);
      const double env = envelope_lp(s, b, others, s.row(j).transpose());
      if (env > b(j) + 1e-12 * (1.0 + std::abs(b(j)))) active.push_back(j);
    }
  }

  Matrix ps(static_cast<Eigen::Index>(active.size()), n);
  Vector pb(static_cast<Eigen::Index>(active.size()));
  for (std::size_t t = 0; t < active.size(); ++t) {
    ps.row(static_cast<Eigen::Index>(t)) = s.row(active[t]);
    pb(static_cast<Eigen::Index>(t)) = b(active[t]);
  }
  if (ps.rows() < n + 1)
    throw InvalidFunction("needs at least n+1 active pieces");
  if (affine_dimension(ps) < n)
    throw InvalidFunction("slopes must span a full-dimensional hull");
  slopes_ = std::move(ps);
  intercepts_ = std::move(pb);
}

double MaxAffineFunction::operator()(const Vector& x) const {
  if (x.size() != dim()) throw DimensionError("evaluation point dimension");
  return (slopes_ * x - intercepts_).maxCoeff();
}

Eigen::Index MaxAffineFunction::active_piece(const Vector& x) const {
  Eigen::Index j;
  (slopes_ * x - intercepts_).maxCoeff(&j);
  return j;
}

MaxAffineFunction MaxAffineFunction::translated(const Vector& a) const {
  return raw(slopes_, intercepts_ - slopes_ * a);
}

MaxAffineFunction MaxAffineFunction::plus_constant(double c) const {
  return raw(slopes_, intercepts_.array() - c);
}

MaxAffineFunction MaxAffineFunction::rescaled(double s) const {
  if (!(s > 0.0)) throw InvalidParameter("scale must be positive");
  return raw(slopes_ * s, intercepts_);
}

MaxAffineFunction MaxAffineFunction::plus_linear(const Vector& a) const {
  return raw(slopes_.rowwise() + a.transpose(), intercepts_);
}

double MaxAffineFunction::conjugate(const Vector& y) const {
  if (y.size() != dim()) throw DimensionError("conjugate point dimension");
  if (dim() == 1) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(pieces()));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index c) {
      return slopes_(a, 0) < slopes_(c, 0) ||
             (slopes_(a, 0) == slopes_(c, 0) && intercepts_(a) < intercepts_(c));
    });
    std::vector<double> ys, bs;
    for (Eigen::Index j : order) {
      if (!ys.empty() && ys.back() == slopes_(j, 0)) continue;
      ys.push_back(slopes_(j, 0));
      bs.push_back(intercepts_(j));
    }
    const auto hull = lower_hull_indices(ys.data(), bs.data(), ys.size());
    const double t = y(0);
    if (t < ys[hull.front()] || t > ys[hull.back()]) return kInf;
    for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
      const double y0 = ys[hull[k]], y1 = ys[hull[k + 1]];
      if (t <= y1) {
        if (t == y0) return bs[hull[k]];
        if (t == y1) return bs[hull[k + 1]];
        const double w = (t - y0) / (y1 - y0);
        return (1.0 - w) * bs[hull[k]] + w * bs[hull[k + 1]];
      }
    }
    return bs[hull.back()];
  }
  std::vector<Eigen::Index> all(static_cast<std::size_t>(pieces()));
  std::iota(all.begin(), all.end(), 0);
  return envelope_lp(slopes_, intercepts_, all, y);
}

double MaxAffineFunction::minimum() const {
  return -conjugate(Vector::Zero(dim()));
}

MaxAffineConjugate legendre_maxaffine(const MaxAffineFunction& v) {
  return MaxAffineConjugate(v);
}

}  // namespace santalo
