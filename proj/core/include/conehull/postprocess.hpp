#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "conehull/dca.hpp"
#include "conehull/geometry.hpp"
#include "conehull/matrix.hpp"

namespace conehull {

enum class CoefficientConstraint {
  NonNeg,             // per-row NNLS only
  NonNegAnchorsFixed,  // additionally pin row A_i of F to e_i
};

struct CoefficientSolve {
  DenseMatrix f;                  // n x k, nonnegative
  std::vector<double> residuals;  // per-row ||X_i - f Y_A||
  std::vector<char> failed;       // per-row NNLS non-convergence flags
  double relative_frobenius_residual = 0.0;
  bool rank_deficient_warning = false;
};

// Solves X = F Y_A row by row (independent NNLS problems, parallelized).
CoefficientSolve solve_coefficients(const DenseMatrix& x, const DenseMatrix& y,
                                    const std::vector<Index>& anchors,
                                    CoefficientConstraint constraint);

struct NmfFactors {
  std::vector<Index> anchors;
  DenseMatrix f;
  double relative_residual = 0.0;
};

NmfFactors nmf_factors(const DenseMatrix& x, const std::vector<Index>& anchors);

// Column-stochastic T from O T = X_A3, one simplex-constrained least-squares
// per column. Throws when O is rank deficient (condition number reported).
DenseMatrix recover_hmm_transition(const DenseMatrix& o, const DenseMatrix& x_a3);

struct HmmParams {
  DenseMatrix o;  // p x k emission means
  DenseMatrix t;  // k x k column-stochastic transitions
};

struct LdaParams {
  DenseMatrix o;      // p x k column-stochastic topic matrix
  DenseMatrix f;      // p x k pinned coefficients
  Vector alpha;       // recovered up to the supplied alpha0 scale
  DenseMatrix r;      // least-squares solution of Q = O R O'
  bool alpha_clipped = false;  // negative components clipped to 0
};

// O = column-normalized F; R from Q = O R O' by least squares; alpha fitted
// to alpha0 (alpha0 + 1) R = alpha alpha' + Diag(alpha) over all entries.
LdaParams recover_lda_params(const DenseMatrix& f, const DenseMatrix& q,
                             double alpha0);

struct ScClusters {
  std::vector<Index> labels;                    // per data row
  std::vector<std::vector<Index>> anchor_groups;  // partition of the anchors
  std::vector<Index> anchors;                   // the K selected anchors
  DenseMatrix g;                                // K x K co-clustering counts
  bool degenerate_clustering = false;  // mean-shift never split the angles
};

// Cone clustering: per sub-problem, 1D mean-shift over projected angles and
// min/max-angle picks per angle cluster; anchors then grouped by spectral
// clustering of the co-clustering matrix G, rows assigned to the group with
// the smallest NNLS residual. num_clusters = 0 chooses the cluster count
// automatically (modal mean-shift count, refined by the eigengap of G).
ScClusters cluster_anchors_sc(const DenseMatrix& x, const ProjectionPlan& plan,
                              Index k_total, Index num_clusters = 0);

struct Rank1Factors {
  std::vector<Index> anchors;  // rows of Y matched by the k factor pairs
  DenseMatrix o_i;             // p_i x k (columns unit-norm)
  DenseMatrix o_j;             // p_j x k (scale absorbed here)
};

// Identifiability route: from two moment matrices X1 = O_i Diag(a) O_j' and
// X2 = O_i Diag(b) O_j' with componentwise-distinct b./a, recovers the
// rank-one factor pairs via SVD of X1 and the eigendecomposition of
// Sigma^-1/2 U' X2 V Sigma^-1/2, then matches each factor pair against the
// candidate rows of Y. Throws NonIdentifiableError on eigenvalue collisions
// (a == b) and std::runtime_error when a factor matches no candidate.
Rank1Factors recover_rank1_factors(const DenseMatrix& x1, const DenseMatrix& x2,
                                   const DenseMatrix& y);

class NonIdentifiableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Lloyd's k-means over matrix rows with seeded k-means++ restarts; used by
// the spectral step and by benchmark pipelines that group anchor rows.
std::vector<Index> kmeans_labels(const DenseMatrix& points, Index k,
                                 std::uint64_t seed, int restarts = 10);

}  // namespace conehull
