#pragma once

#include <cstddef>

#include "santalo/extended_real.hpp"

namespace santalo {

/// Nodes and weights of a one-dimensional quadrature rule.
struct GaussRule {
  Vector nodes;
  Vector weights;
};

/// n-point Gauss-Legendre rule on [-1, 1] (Golub-Welsch).
GaussRule gauss_legendre(int n);

/// n-point Gauss-Laguerre rule for weight e^{-t} on [0, inf).
GaussRule gauss_laguerre(int n);

/// Divided difference exp[x_0, ..., x_{k-1}] with confluent nodes allowed,
/// read off the first row of the exponential of the bidiagonal matrix with
/// the nodes on the diagonal.
double exp_divided_difference(const double* nodes, std::size_t k);

/// J_q(a, l) = int_0^l t^q e^{-a t} dt for a >= 0 (l may be +inf when a > 0).
double truncated_gamma_moment(int q, double a, double l);

}  // namespace santalo
