#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "conehull/geometry.hpp"
#include "conehull/matrix.hpp"

namespace conehull {

// Three feature groups (views) of the same samples; row t of each view
// belongs to sample t. Views must be conditionally independent given the
// latent variable for the moment constructions to be consistent.
struct MultiViewData {
  DenseMatrix views[3];

  Index samples() const { return views[0].rows(); }
  void validate() const;
};

// Splits the columns of a single-view matrix into 3 seeded random groups of
// near-equal size. Returns the data and the column assignment per view.
MultiViewData split_views(const DenseMatrix& x, std::uint64_t seed,
                          std::vector<std::vector<Index>>* assignment = nullptr);

// Moment-based conical hull instance: X rows are vectorized (optionally
// Omega-masked) moment matrices, Y rows the per-sample outer products.
struct MomentReduction {
  DenseMatrix x;               // (q + 1) x |Omega|
  DenseMatrix y;               // n x |Omega|
  std::vector<Vector> etas;    // q unit-norm weighting vectors
  std::vector<Index> omega;    // sorted flat indices into p_i x p_j; empty = full
  Index q = 0;
  Index p_i = 0, p_j = 0;      // moment matrix shape before vectorization

  ConicalHullProblem to_problem(Index k) const;
};

// NMF: the data matrix is its own generator set.
ConicalHullProblem reduce_nmf(const DenseMatrix& x, Index k);

// GMM / multi-view mixture: X row 0 is vec(X1' X2)/n, rows 1..q are
// vec(X1' Diag(X3 eta_t) X2)/n with eta_t uniform on the unit sphere;
// Y row t is vec(x_{t,1} (x) x_{t,2}). omega_fraction in (0, 1] keeps a
// seeded uniform subset of the vectorized entries (same mask everywhere).
MomentReduction reduce_gmm(const MultiViewData& data, Index q, std::uint64_t seed,
                           std::optional<double> omega_fraction = std::nullopt);

// HMM: all overlapping sliding triples (x_{t-1}, x_t, x_{t+1}) across the
// sequences become views (prev, current, next); the construction then uses
// the (current, next) pair weighted by the prev view. min_triples guards
// against fewer triples than anchors.
MomentReduction reduce_hmm(const std::vector<DenseMatrix>& sequences, Index q,
                           std::uint64_t seed, Index min_triples = 1);

// Builds the sliding-triple views used by reduce_hmm.
MultiViewData hmm_triples(const std::vector<DenseMatrix>& sequences);

// Word-word co-occurrence matrix with unbiased diagonal correction:
// Q = Xbar' Xbar - Diag(1' Xhat), Xhat_ij = X_ij / (m_i (m_i - 1)),
// Xbar_ij = X_ij / sqrt(m_i (m_i - 1)), m = X 1.
struct CooccurrenceMatrix {
  DenseMatrix q;          // p x p, symmetric
  Vector doc_lengths;     // lengths of the documents actually used
  Index dropped_docs = 0;  // documents with fewer than 2 tokens
};

CooccurrenceMatrix lda_cooccurrence(const DenseMatrix& counts);

// LDA: self-referential problem on the co-occurrence matrix Q. Documents
// shorter than 2 tokens are dropped, not errored.
ConicalHullProblem reduce_lda(const DenseMatrix& counts, Index k);

// Subspace clustering: self-referential problem with k_total anchors across
// all clusters; grouping anchors into clusters is post-processing.
ConicalHullProblem reduce_sc(const DenseMatrix& x, Index k_total);

}  // namespace conehull
