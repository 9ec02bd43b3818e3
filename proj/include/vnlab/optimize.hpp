#pragma once

// Local optimisers shared by the estimators: a derivative-free simplex search
// over real vectors and a gradient descent on complex Stiefel manifolds.

#include <functional>

#include "vnlab/matcore.hpp"

namespace vnlab {

struct NelderMeadOptions {
  int max_evaluations = 2000;
  double initial_step = 0.25;
  double value_tolerance = 1e-12;
};

struct NelderMeadResult {
  rvec point;
  double value = 0;
  int evaluations = 0;
};

// Adaptive-coefficient Nelder–Mead; non-finite objective values rank last.
NelderMeadResult nelder_mead(const std::function<double(const rvec&)>& objective, const rvec& start,
                             const NelderMeadOptions& options = {});

// Value and Euclidean gradient with respect to the real inner product Re tr(A†B).
using StiefelObjective = std::function<double(const cmat& point, cmat& gradient)>;

struct StiefelOptions {
  int max_iterations = 400;
  double gradient_tolerance = 1e-9;
  double value_tolerance = 1e-13;
};

struct StiefelResult {
  cmat point;
  double value = 0;
  int iterations = 0;
  int evaluations = 0;
};

// Q factor with a positive real diagonal in R; maps a full-rank tall matrix onto the manifold.
cmat stiefel_retract(const cmat& tall);

// Riemannian steepest descent with Barzilai–Borwein steps and Armijo backtracking
// over {V : V†V = 1}.
StiefelResult stiefel_descent(const StiefelObjective& objective, const cmat& start,
                              const StiefelOptions& options = {});

}  // namespace vnlab
