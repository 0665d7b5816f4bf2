#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "conehull/matrix.hpp"
#include "conehull/reductions.hpp"

namespace conehull::bench {

enum class SyntheticKind { SeparableNMF, GmmGrid, ScGrid, HmmChain, LdaCorpus };

std::string to_string(SyntheticKind k);

// One synthetic instance recipe. Ground truth (anchor indices, labels,
// planted parameters) is always emitted with the data.
struct SyntheticSpec {
  SyntheticKind kind = SyntheticKind::SeparableNMF;
  Index n = 100;       // rows (NMF/SC), samples per cluster (GMM), docs (LDA)
  Index p = 50;        // feature dim (per-view dims for GMM are p1/p2/p3)
  Index k = 5;         // anchors / clusters / states / topics
  double noise = 0.0;  // additive Gaussian level (see each generator)
  double variance = 0.0;   // within-cluster spread (GMM)
  double span_angle_deg = 30.0;  // cone angular diameter (SC)
  Index rays_per_cone = 10;      // SC
  Index p1 = 20, p2 = 12, p3 = 16;  // GMM view dims
  Index chain_length = 2000;     // HMM observations
  Index doc_length = 150;        // LDA tokens per document
  double dirichlet_alpha = 0.3;  // LDA symmetric prior
  std::uint64_t seed = 0;
};

struct GroundTruth {
  std::vector<Index> anchors;      // planted anchor rows (when meaningful)
  std::vector<Index> labels;       // per-row cluster/state labels
  DenseMatrix parameters;          // model parameters (means, O, topics)
  DenseMatrix transition;          // HMM only
  Vector alpha;                    // LDA only
};

struct SyntheticInstance {
  SyntheticSpec spec;
  DenseMatrix data;                 // primary data matrix
  std::optional<MultiViewData> views;  // GMM
  GroundTruth truth;
};

SyntheticInstance generate(const SyntheticSpec& spec);

// Residual-maximization pursuit over unit-normalized rows: repeatedly picks
// the Y row farthest (NNLS residual) from the cone of the current picks.
// Stand-in for external greedy anchor selectors.
std::vector<Index> greedy_anchor_baseline(const DenseMatrix& x,
                                          const DenseMatrix& y, Index k);

// Backward removal: starting from all rows, removes any row that is a
// nonnegative combination of the remaining ones; the surviving simplicial
// set is the minimum conical hull for nonnegative X.
std::vector<Index> backward_removal_baseline(const DenseMatrix& x);

struct MetricReport {
  double anchor_accuracy = 0.0;   // |A_est cap A_true| / k
  double anchor_precision = 0.0;
  double anchor_recall = 0.0;
  double recovery_error = 0.0;    // relative l2 anchor error after matching
  std::optional<double> clustering_accuracy;  // Hungarian-matched
  std::optional<double> mutual_information;
  std::optional<double> rand_index;
  double wall_time_ms = 0.0;
};

// Permutation-aware metric helpers.
double clustering_accuracy(const std::vector<Index>& truth,
                           const std::vector<Index>& estimate);
double mutual_information(const std::vector<Index>& truth,
                          const std::vector<Index>& estimate);
double rand_index(const std::vector<Index>& truth,
                  const std::vector<Index>& estimate);
double anchor_accuracy(const std::vector<Index>& truth,
                       const std::vector<Index>& estimate, Index k);
double anchor_recovery_error(const DenseMatrix& y,
                             const std::vector<Index>& truth,
                             const std::vector<Index>& estimate);
// Mean column-matched l1 distance between two matrices with the same number
// of columns (e.g. topic matrices); columns are matched by assignment.
double topic_l1_error(const DenseMatrix& truth, const DenseMatrix& estimate);

// Benchmark-scale mixture clustering: over-selects anchor candidates from
// the moment instance (pool_factor * k rows by vote), groups the selected
// outer-product rows by k-means, and returns the top-voted row per group.
// Centers remain actual data rows. Falls back to the plain top-k anchors
// when the pool degenerates.
std::vector<Index> mixture_cluster_centers(const MomentReduction& reduction,
                                           Index k, Index s, std::uint64_t seed,
                                           Index pool_factor = 30);

// Per-row nearest-center labels over the rows of `data`.
std::vector<Index> nearest_row_labels(const DenseMatrix& data,
                                      const std::vector<Index>& centers);

enum class Method { Dca, Greedy, BackwardRemoval };
std::string to_string(Method m);

struct SweepCell {
  SyntheticSpec spec;
  Method method = Method::Dca;
  Index s = 0;  // sub-problem count (DCA only)
};

struct SweepRow {
  SweepCell cell;
  Index seeds = 0;
  MetricReport mean;
  MetricReport stddev;
  Index failures = 0;  // cells that threw; sweep continues past them
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::string csv;          // deterministic metric table
  std::string timings_csv;  // wall-time sidecar (non-deterministic)
};

// Cross product of specs x methods x s_values, averaged over `seeds` seeded
// trials per cell. Cells run in parallel and own their seeds; row order is
// the deterministic cross-product order.
SweepResult run_sweep(const std::vector<SyntheticSpec>& specs,
                      const std::vector<Method>& methods,
                      const std::vector<Index>& s_values, Index seeds);

}  // namespace conehull::bench
