#pragma once

#include "conehull/matrix.hpp"

namespace conehull {

struct NnlsResult {
  Vector x;
  double residual = 0.0;  // ||A x - b||_2
  bool converged = true;
  int iterations = 0;
};

// Lawson-Hanson style active-set solver for min ||A x - b|| s.t. x >= 0.
// Iteration cap defaults to 10 * cols (0 picks the default); hitting the cap
// flags converged = false and returns the best feasible iterate.
NnlsResult nnls(const DenseMatrix& a, const Vector& b, int max_iter = 0,
                double tol = 1e-10);

// min ||A x - b|| s.t. x >= 0, sum(x) = 1. Exact for small column counts:
// solves the equality-constrained subproblem on every support set and keeps
// the feasible one with smallest residual (cols <= 20 enforced).
NnlsResult simplex_constrained_lsq(const DenseMatrix& a, const Vector& b);

}  // namespace conehull
