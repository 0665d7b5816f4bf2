#pragma once

#include <vector>

#include "conehull/matrix.hpp"

namespace conehull {

// Exhaustive minimal-conical-hull solver, the reference oracle for tests and
// for d > 2 sub-problems at test scale. Finds the smallest row subset A of Y
// with every row of X a nonnegative combination of Y_A (NNLS residual below
// kTolFeas on unit-normalized rows). Among minimum-size covers the one whose
// generators sit angularly closest to the covered points wins, matching the
// tie-break rule of the 2D solver; remaining ties go to the lexicographically
// smallest index set. Throws std::runtime_error when no subset covers X.
// Intended scale: at most ~30 rows on either side.
std::vector<Index> brute_force_mch(const DenseMatrix& x, const DenseMatrix& y);

// True if every row of X is a nonnegative combination of the rows of Y.
bool cone_covers(const DenseMatrix& x, const DenseMatrix& y, double tol = 1e-8);

// Backward removal on the rows of X: repeatedly deletes any row that is a
// nonnegative combination of the remaining ones (NNLS residual below tol on
// unit-normalized rows). The survivors are the extreme rays, i.e. the
// simplicial core. Deterministic: the lowest-index removable row goes first.
std::vector<Index> simplicial_rows(const DenseMatrix& x, double tol = 1e-8);

}  // namespace conehull
