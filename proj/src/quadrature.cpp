#include "santalo/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "santalo/errors.hpp"

namespace santalo {

namespace {

// Golub-Welsch: eigen-decomposition of the Jacobi matrix of the
// orthogonal polynomial recurrence.
GaussRule golub_welsch(const Vector& diag, const Vector& off, double mu0) {
  const Eigen::Index n = diag.size();
  Matrix J = Matrix::Zero(n, n);
  J.diagonal() = diag;
  for (Eigen::Index i = 0; i + 1 < n; ++i) J(i, i + 1) = J(i + 1, i) = off(i);
  Eigen::SelfAdjointEigenSolver<Matrix> es(J);
  GaussRule r;
  r.nodes = es.eigenvalues();
  r.weights = mu0 * es.eigenvectors().row(0).transpose().array().square();
  return r;
}

}  // namespace

GaussRule gauss_legendre(int n) {
  if (n < 1) throw InvalidParameter("quadrature order must be positive");
  Vector diag = Vector::Zero(n), off(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) off(k - 1) = k / std::sqrt(4.0 * k * k - 1.0);
  return golub_welsch(diag, off, 2.0);
}

GaussRule gauss_laguerre(int n) {
  if (n < 1) throw InvalidParameter("quadrature order must be positive");
  Vector diag(n), off(std::max(n - 1, 0));
  for (int k = 0; k < n; ++k) diag(k) = 2.0 * k + 1.0;
  for (int k = 1; k < n; ++k) off(k - 1) = k;
  return golub_welsch(diag, off, 1.0);
}

double exp_divided_difference(const double* nodes, std::size_t k) {
  if (k == 0) throw InvalidParameter("divided difference needs a node");
  const double top = *std::max_element(nodes, nodes + k);
  if (top == -kInf) return 0.0;
  if (k == 1) return std::exp(nodes[0]);
  const auto n = static_cast<Eigen::Index>(k);
  Matrix J = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    J(i, i) = nodes[i] - top;
    if (i + 1 < n) J(i, i + 1) = 1.0;
  }
  const Matrix E = J.exp();
  return std::exp(top) * E(0, n - 1);
}

double truncated_gamma_moment(int q, double a, double l) {
  if (a < 0.0 || l < 0.0) throw InvalidParameter("needs a >= 0 and l >= 0");
  double fact = 1.0;
  for (int i = 2; i <= q; ++i) fact *= i;
  if (l == kInf) {
    if (!(a > 0.0)) return kInf;
    return fact / std::pow(a, q + 1);
  }
  const double u = a * l;
  if (u <= q + 25.0) {
    // l^{q+1} q! e^{-u} sum_{i>q} u^{i-q-1}/i!, free of cancellation.
    double term = 1.0;
    for (int i = 2; i <= q + 1; ++i) term /= i;
    double sum = 0.0;
    for (int i = q + 1; i < q + 400; ++i) {
      sum += term;
      term *= u / (i + 1);
      if (term < 1e-18 * sum) break;
    }
    return std::pow(l, q + 1) * fact * std::exp(-u) * sum;
  }
  double partial = 0.0, term = 1.0;
  for (int i = 0; i <= q; ++i) {
    partial += term;
    term *= u / (i + 1);
  }
  return fact / std::pow(a, q + 1) * (1.0 - std::exp(-u) * partial);
}

}  // namespace santalo
