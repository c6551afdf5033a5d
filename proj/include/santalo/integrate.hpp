#pragma once

#include "santalo/grid_function.hpp"

namespace santalo {

/// A computed quantity with an estimate of its numerical error.
struct Estimate {
  double value = 0.0;
  double est_error = 0.0;  // absolute
};

/// log of the integral of e^{-f}: composite trapezoid over grid cells whose
/// corners are all finite, plus the exact integral of the affine
/// extrapolation beyond finite boundary nodes. Returns +inf when an outward
/// boundary slope makes the extrapolated tail diverge. The error estimate
/// compares against the same rule on the grid of every other node.
///
/// Throws GridTooSmall (with suggested bounds) when the extrapolated tail
/// exceeds 1e-6 of the bulk, since the affine tail is then an artefact of
/// truncation rather than part of the function.
Estimate log_integrate_exp_neg(const GridFunction& f);

/// The rule behind log_integrate_exp_neg split over the nodes: the weights
/// include e^{-(f_k - shift)} and sum to e^{shift} times the integral
/// (extrapolated tails are lumped on the boundary nodes they come from).
/// Throws InvalidDensity when the integral is 0 or +inf.
struct NodeWeights {
  double shift = 0.0;
  Array weights;
};
NodeWeights exp_neg_node_weights(const GridFunction& f);

/// The integral itself (may be +inf).
Estimate integrate_exp_neg(const GridFunction& f);

}  // namespace santalo
