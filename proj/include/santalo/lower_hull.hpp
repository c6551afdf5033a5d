#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace santalo {

/// Indices of the lower convex hull of points (x_i, f_i), x strictly
/// increasing, skipping +inf values. Monotone chain; collinear middle points
/// are dropped so every returned index is a strict vertex (the leftmost point
/// wins ties). Any -inf value yields an empty result with `minus_inf` set.
template <typename Scalar>
std::vector<std::size_t> lower_hull_indices(const Scalar* x, const Scalar* f,
                                            std::size_t n,
                                            bool* minus_inf = nullptr) {
  std::vector<std::size_t> hull;
  if (minus_inf) *minus_inf = false;
  for (std::size_t i = 0; i < n; ++i) {
    const Scalar fi = f[i];
    if (fi == -std::numeric_limits<Scalar>::infinity()) {
      if (minus_inf) *minus_inf = true;
      return {};
    }
    if (!std::isfinite(fi)) continue;
    while (hull.size() >= 2) {
      const std::size_t a = hull[hull.size() - 2], b = hull.back();
      const Scalar dx1 = x[b] - x[a], df1 = f[b] - f[a];
      const Scalar dx2 = x[i] - x[a], df2 = fi - f[a];
      const Scalar cross = dx1 * df2 - df1 * dx2;
      const Scalar scale = std::abs(dx1 * df2) + std::abs(df1 * dx2);
      if (cross <= Scalar(64) * std::numeric_limits<Scalar>::epsilon() * scale)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(i);
  }
  return hull;
}

/// Exact Legendre transform of the piecewise-linear hull interpolant of
/// sampled values, with the grid-boundary convention: a finite value on the
/// first (last) sample extends the function affinely past the samples, which
/// closes the conjugate's domain at the first (last) hull slope.
template <typename Scalar>
class HullConjugate {
public:
  HullConjugate(const Scalar* x, const Scalar* f, std::size_t n) {
    const auto idx = lower_hull_indices(x, f, n, &minus_inf_);
    if (minus_inf_ || idx.empty()) {
      empty_ = !minus_inf_;
      return;
    }
    for (std::size_t i : idx) {
      hx_.push_back(x[i]);
      hf_.push_back(f[i]);
    }
    for (std::size_t k = 0; k + 1 < hx_.size(); ++k)
      slopes_.push_back((hf_[k + 1] - hf_[k]) / (hx_[k + 1] - hx_[k]));
    open_lo_ = std::isfinite(f[0]) && hx_.size() >= 2;
    open_hi_ = std::isfinite(f[n - 1]) && hx_.size() >= 2;
  }

  bool empty() const { return empty_; }
  bool minus_inf() const { return minus_inf_; }
  bool closed_below() const { return !open_lo_; }
  bool closed_above() const { return !open_hi_; }
  std::size_t vertex_count() const { return hx_.size(); }
  const std::vector<Scalar>& vertex_x() const { return hx_; }
  const std::vector<Scalar>& vertex_f() const { return hf_; }
  const std::vector<Scalar>& edge_slopes() const { return slopes_; }
  bool has_slopes() const { return !slopes_.empty(); }
  Scalar first_slope() const { return slopes_.front(); }
  Scalar last_slope() const { return slopes_.back(); }

  /// Conjugate value at y; +inf off the conjugate domain.
  Scalar operator()(Scalar y) const {
    const Scalar inf = std::numeric_limits<Scalar>::infinity();
    if (minus_inf_) return inf;
    if (empty_) return -inf;
    if (out_of_domain(y)) return inf;
    const auto it = std::lower_bound(slopes_.begin(), slopes_.end(), y);
    const std::size_t v = static_cast<std::size_t>(it - slopes_.begin());
    return hx_[v] * y - hf_[v];
  }

  /// Conjugate at an increasing sequence of y values (slope merge).
  void evaluate_sorted(const Scalar* y, Scalar* out, std::size_t m) const {
    const Scalar inf = std::numeric_limits<Scalar>::infinity();
    std::size_t v = 0;
    for (std::size_t k = 0; k < m; ++k) {
      if (minus_inf_) {
        out[k] = inf;
        continue;
      }
      if (empty_) {
        out[k] = -inf;
        continue;
      }
      if (out_of_domain(y[k])) {
        out[k] = inf;
        continue;
      }
      while (v < slopes_.size() && slopes_[v] < y[k]) ++v;
      out[k] = hx_[v] * y[k] - hf_[v];
    }
  }

  /// Index among hull vertices attaining the sup at y (leftmost on ties).
  std::size_t argmax_vertex(Scalar y) const {
    const auto it = std::lower_bound(slopes_.begin(), slopes_.end(), y);
    return static_cast<std::size_t>(it - slopes_.begin());
  }

  static Scalar slope_tolerance(Scalar s) {
    return Scalar(1e-12) * (Scalar(1) + std::abs(s));
  }

private:
  bool out_of_domain(Scalar y) const {
    if (open_lo_ && y < slopes_.front() - slope_tolerance(slopes_.front()))
      return true;
    if (open_hi_ && y > slopes_.back() + slope_tolerance(slopes_.back()))
      return true;
    return false;
  }

  std::vector<Scalar> hx_, hf_, slopes_;
  bool open_lo_ = false, open_hi_ = false;
  bool empty_ = false, minus_inf_ = false;
};

}  // namespace santalo
