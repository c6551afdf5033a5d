#include "santalo/discrete_measure.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <vector>

#include "santalo/errors.hpp"
#include "santalo/max_affine.hpp"

namespace santalo {

namespace {

bool row_less(const Matrix& a, Eigen::Index i, Eigen::Index j) {
  for (Eigen::Index d = 0; d < a.cols(); ++d) {
    if (a(i, d) < a(j, d)) return true;
    if (a(i, d) > a(j, d)) return false;
  }
  return false;
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(Matrix atoms, Vector weights, Symmetry symmetry)
    : atoms_(std::move(atoms)), weights_(std::move(weights)), symmetry_(symmetry) {
  if (atoms_.rows() == 0) throw InvalidMeasure("a measure needs at least one atom");
  if (atoms_.cols() < 1 || atoms_.cols() > 3)
    throw DimensionError("discrete measures support dimension 1 to 3");
  if (weights_.size() != atoms_.rows())
    throw InvalidMeasure("one weight per atom is required");
  if (!atoms_.allFinite()) throw InvalidMeasure("atoms must be finite");
  for (Eigen::Index i = 0; i < weights_.size(); ++i)
    if (!(weights_(i) > 0.0) || !std::isfinite(weights_(i)))
      throw InvalidMeasure("weights must be positive");
  if (std::abs(weights_.sum() - 1.0) > 1e-12)
    throw InvalidMeasure("weights must sum to 1 within 1e-12");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(atoms_.rows()));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return row_less(atoms_, a, b); });
  for (std::size_t t = 1; t < order.size(); ++t)
    if (!row_less(atoms_, order[t - 1], order[t]))
      throw InvalidMeasure("atoms must be distinct");

  if (symmetry_ != Symmetry::none) {
    std::vector<unsigned> flips{(1u << dim()) - 1u};
    if (symmetry_ == Symmetry::unconditional)
      for (unsigned f = 1; f < (1u << dim()); ++f) flips.push_back(f);
    for (unsigned fl : flips)
      for (Eigen::Index i = 0; i < size(); ++i) {
        Vector r = atom(i);
        for (int d = 0; d < dim(); ++d)
          if (fl & (1u << d)) r(d) = -r(d);
        bool found = false;
        for (Eigen::Index j = 0; j < size() && !found; ++j)
          found = (atom(j) - r).cwiseAbs().maxCoeff() <= 1e-12 &&
                  std::abs(weights_(j) - weights_(i)) <= 1e-12;
        if (!found) throw InvalidMeasure("measure does not have the declared symmetry");
      }
  }
}

DiscreteMeasure DiscreteMeasure::from_masses(const Matrix& atoms, const Vector& masses,
                                             Symmetry symmetry) {
  std::vector<Eigen::Index> keep;
  double total = 0.0;
  for (Eigen::Index i = 0; i < masses.size(); ++i) {
    if (masses(i) < 0.0 || !std::isfinite(masses(i)))
      throw InvalidMeasure("masses must be nonnegative and finite");
    if (masses(i) > 0.0) {
      keep.push_back(i);
      total += masses(i);
    }
  }
  if (keep.empty()) throw InvalidMeasure("all masses vanish");
  Matrix a(static_cast<Eigen::Index>(keep.size()), atoms.cols());
  Vector w(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t t = 0; t < keep.size(); ++t) {
    a.row(static_cast<Eigen::Index>(t)) = atoms.row(keep[t]);
    w(static_cast<Eigen::Index>(t)) = masses(keep[t]) / total;
  }
  return DiscreteMeasure(std::move(a), std::move(w), symmetry);
}

DiscreteMeasure DiscreteMeasure::dirac(const Vector& x) {
  return DiscreteMeasure(x.transpose(), Vector::Ones(1));
}

DiscreteMeasure DiscreteMeasure::cube_vertices(int n) {
  if (n < 1 || n > 3) throw DimensionError("cube dimension must be 1 to 3");
  const int m = 1 << n;
  Matrix a(m, n);
  for (int k = 0; k < m; ++k)
    for (int d = 0; d < n; ++d) a(k, d) = (k >> d) & 1 ? 1.0 : -1.0;
  return DiscreteMeasure(a, Vector::Constant(m, 1.0 / m), Symmetry::unconditional);
}

Vector DiscreteMeasure::barycenter() const { return atoms_.transpose() * weights_; }

int DiscreteMeasure::affine_dim(double tol) const { return affine_dimension(atoms_, tol); }

double DiscreteMeasure::second_moment() const {
  return weights_.dot(atoms_.rowwise().squaredNorm());
}

DiscreteMeasure DiscreteMeasure::scaled(double s) const {
  if (s == 0.0 || !std::isfinite(s)) throw InvalidParameter("scale must be nonzero");
  return DiscreteMeasure(atoms_ * s, weights_, symmetry_);
}

DiscreteMeasure DiscreteMeasure::product(const DiscreteMeasure& other) const {
  const Eigen::Index n = size(), m = other.size();
  Matrix a(n * m, dim() + other.dim());
  Vector w(n * m);
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      a.row(i + n * j) << atoms_.row(i), other.atoms_.row(j);
      w(i + n * j) = weights_(i) * other.weights_(j);
    }
  const double s = w.sum();
  if (std::abs(s - 1.0) > 1e-15) w /= s;
  Symmetry sym = Symmetry::none;
  if (symmetry_ == Symmetry::unconditional && other.symmetry_ == Symmetry::unconditional)
    sym = Symmetry::unconditional;
  return DiscreteMeasure(std::move(a), std::move(w), sym);
}

DiscreteMeasure read_discrete_measure(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<double> v;
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        v.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(lineno) + ": not a number: " + tok);
      }
    }
    if (v.empty()) continue;
    if (v.size() < 2 || v.size() > 4)
      throw ParseError("line " + std::to_string(lineno) + ": expected 'w x1 [x2 [x3]]'");
    if (!rows.empty() && rows.front().size() != v.size())
      throw ParseError("line " + std::to_string(lineno) + ": inconsistent dimension");
    rows.push_back(std::move(v));
  }
  if (rows.empty()) throw ParseError("no atoms found");
  const auto n = static_cast<Eigen::Index>(rows.front().size() - 1);
  Matrix a(static_cast<Eigen::Index>(rows.size()), n);
  Vector w(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    w(static_cast<Eigen::Index>(i)) = rows[i][0];
    for (Eigen::Index d = 0; d < n; ++d)
      a(static_cast<Eigen::Index>(i), d) = rows[i][static_cast<std::size_t>(d + 1)];
  }
  try {
    return DiscreteMeasure(std::move(a), std::move(w));
  } catch (const InvalidMeasure& e) {
    throw ParseError(e.what());
  }
}

DiscreteMeasure read_discrete_measure_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return read_discrete_measure(in);
}

void write_discrete_measure(std::ostream& out, const DiscreteMeasure& mu) {
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    out << mu.weight(i);
    for (int d = 0; d < mu.dim(); ++d) out << ' ' << mu.atoms()(i, d);
    out << '\n';
  }
}

}  // namespace santalo
