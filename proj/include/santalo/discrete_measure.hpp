#pragma once

#include <iosfwd>

#include "santalo/extended_real.hpp"
#include "santalo/grid_function.hpp"

namespace santalo {

/// Probability measure on finitely many distinct atoms in R^n, n <= 3.
/// Atoms are the rows of `atoms`.
class DiscreteMeasure {
public:
  DiscreteMeasure(Matrix atoms, Vector weights, Symmetry symmetry = Symmetry::none);

  /// Drops zero masses and divides by the total; the result must still
  /// satisfy the invariants.
  static DiscreteMeasure from_masses(const Matrix& atoms, const Vector& masses,
                                     Symmetry symmetry = Symmetry::none);
  static DiscreteMeasure dirac(const Vector& x);
  /// Uniform measure on the vertices {-1, 1}^n of the cube.
  static DiscreteMeasure cube_vertices(int n);

  int dim() const { return static_cast<int>(atoms_.cols()); }
  Eigen::Index size() const { return atoms_.rows(); }
  const Matrix& atoms() const { return atoms_; }
  const Vector& weights() const { return weights_; }
  Vector atom(Eigen::Index i) const { return atoms_.row(i).transpose(); }
  double weight(Eigen::Index i) const { return weights_(i); }
  Symmetry symmetry() const { return symmetry_; }

  Vector barycenter() const;
  int affine_dim(double tol = 1e-10) const;
  double second_moment() const;

  /// Pushforward under x -> s x.
  DiscreteMeasure scaled(double s) const;
  /// Product measure on R^{n+m} (atoms ordered with this measure's index
  /// fastest).
  DiscreteMeasure product(const DiscreteMeasure& other) const;

private:
  Matrix atoms_;
  Vector weights_;
  Symmetry symmetry_;
};

/// Reads "w x1 [x2 [x3]]" lines; '#' starts a comment. Throws ParseError.
DiscreteMeasure read_discrete_measure(std::istream& in);
DiscreteMeasure read_discrete_measure_file(const std::string& path);
void write_discrete_measure(std::ostream& out, const DiscreteMeasure& mu);

}  // namespace santalo
