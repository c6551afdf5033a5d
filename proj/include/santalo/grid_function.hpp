#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "santalo/extended_real.hpp"

namespace santalo {

enum class Symmetry { none, symmetric, unconditional };

std::string to_string(Symmetry s);
Symmetry symmetry_from_string(const std::string& s);

/// One axis of a uniform tensor grid: `steps` nodes spanning [lo, hi].
struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  int steps = 3;

  double spacing() const { return (hi - lo) / (steps - 1); }

  // Nodes are placed as mid + half * t with t = (2i - (steps-1)) / (steps-1),
  // so a grid with lo == -hi has exactly antisymmetric nodes.
  double node(int i) const {
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double t = static_cast<double>(2 * i - (steps - 1)) / (steps - 1);
    return mid + half * t;
  }

  bool symmetric_about_origin() const { return lo == -hi; }

  bool operator==(const Axis&) const = default;
};

/// A function on a 1D or 2D uniform grid with values in R u {+inf}.
///
/// Storage is x-fastest: the value at node (i, j) lives at i + steps_x * j.
/// A finite value on a boundary node means the function continues past the
/// grid by affine extrapolation of its boundary slope; +inf on a boundary
/// node means the effective domain stops inside the grid.
class GridFunction {
public:
  GridFunction(std::vector<Axis> axes, Array values,
               Symmetry symmetry = Symmetry::none);

  template <class F>
  static GridFunction sample(const std::vector<Axis>& axes, F&& f,
                             Symmetry symmetry = Symmetry::none) {
    Eigen::Index total = 1;
    for (const auto& a : axes) total *= a.steps;
    Array values(total);
    Vector x(static_cast<Eigen::Index>(axes.size()));
    for (Eigen::Index k = 0; k < total; ++k) {
      Eigen::Index rem = k;
      for (std::size_t d = 0; d < axes.size(); ++d) {
        const int i = static_cast<int>(rem % axes[d].steps);
        rem /= axes[d].steps;
        x(static_cast<Eigen::Index>(d)) = axes[d].node(i);
      }
      values(k) = f(x);
    }
    return GridFunction(axes, std::move(values), symmetry);
  }

  int dim() const { return static_cast<int>(axes_.size()); }
  const std::vector<Axis>& axes() const { return axes_; }
  const Axis& axis(int d) const { return axes_[static_cast<std::size_t>(d)]; }
  int steps(int d) const { return axes_[static_cast<std::size_t>(d)].steps; }
  Eigen::Index size() const { return values_.size(); }

  const Array& values() const { return values_; }
  double operator[](Eigen::Index k) const { return values_(k); }
  double at(int i) const { return values_(i); }
  double at(int i, int j) const { return values_(index(i, j)); }
  Eigen::Index index(int i, int j) const {
    return static_cast<Eigen::Index>(i) +
           static_cast<Eigen::Index>(axes_[0].steps) * j;
  }

  /// Coordinates of the node with flat index k.
  Vector point(Eigen::Index k) const;

  Symmetry symmetry() const { return symmetry_; }
  GridFunction with_symmetry(Symmetry s) const;

  /// Flat index of the reflection of node k under the given sign flips
  /// (bit d set = flip axis d).
  Eigen::Index reflect(Eigen::Index k, unsigned flips) const;

  /// Piecewise linear (1D) or bilinear (2D) interpolation; +inf outside the
  /// grid or when any involved node is +inf.
  double interpolate(const Vector& x) const;

  /// As interpolate, but past the grid the end cells continue linearly
  /// (the affine extension of finite boundary values).
  double extended(const Vector& x) const;

  /// Number of finite nodes.
  Eigen::Index finite_count() const;

  /// True when every node holds a finite value.
  bool all_finite() const { return finite_count() == size(); }

  /// Same values on a grid whose axes are scaled by s.
  GridFunction rescaled_axes(double s) const;

  /// f + c (c finite).
  GridFunction plus_constant(double c) const;

private:
  double evaluate(const Vector& x, bool extend) const;
  std::vector<Axis> axes_;
  Array values_;
  Symmetry symmetry_;
};

}  // namespace santalo
