#pragma once

#include <string>
#include <vector>

#include "conehull/geometry.hpp"
#include "conehull/matrix.hpp"

namespace conehull {

struct SubproblemResult {
  Index t = 0;
  std::vector<Index> anchors;  // indices into Y, empty iff discarded
  bool discarded = false;
  bool coverage_violation = false;
};

struct VoteTally {
  std::vector<double> g_hat;  // one score per Y row, each in [0, 1]
  Index s_effective = 0;      // non-discarded sub-problem count
};

struct AnchorSet {
  std::vector<Index> indices;  // ordered by score desc, lowest index on ties
  std::vector<double> scores;  // matching g_hat values, non-increasing
};

enum class DcaStatus {
  Ok,
  // more than half of the sub-problems were discarded
  HighDiscardRate,
  // fewer than k rows received positive votes; AnchorSet holds the partial result
  UnderDetermined,
};

struct DcaResult {
  AnchorSet anchors;
  VoteTally tally;
  std::vector<SubproblemResult> subproblems;
  DcaStatus status = DcaStatus::Ok;
  std::string message;
};

// Divide-and-conquer anchoring: solve plan.s projected sub-problems (the 2D
// closed form for d == 2, the exhaustive oracle otherwise), tally per-row
// votes over the non-discarded ones, return the k top-voted rows of Y.
// Sub-problems run in parallel; the conquer step is an exact integer
// reduction, so results do not depend on thread count or execution order.
DcaResult dca(const ConicalHullProblem& problem, const ProjectionPlan& plan);

// Conquer-step pieces, exposed for direct testing and reuse.
VoteTally tally_votes(const std::vector<SubproblemResult>& results, Index m);
AnchorSet select_top_k(const VoteTally& tally, Index k);

// ceil((3k / c_hat) * ln(k / delta)), clamped below at 1: the sub-problem
// count that recovers all k anchors with failure probability delta.
Index default_subproblem_count(Index k, double c_hat = 1.0, double delta = 0.05);

// Pilot-based estimate of c_hat = k * (smallest vote gap between a planted
// anchor rank and the best non-anchor), from 2k pilot sub-problems.
double calibrate_c_hat(const ConicalHullProblem& problem, std::uint64_t seed);

struct MembershipResult {
  std::vector<char> covered;     // per X row
  std::vector<Index> violations;  // per X row: sum of epsilon_i^t
  Index s_effective = 0;
};

// One-sided randomized membership test: row i is reported covered iff its
// projected angle stays inside [min, max] of Y's projected angles in every
// usable sub-problem. "Covered" certifies projected coverage only; false
// positives decay exponentially in plan.s.
MembershipResult cone_membership(const DenseMatrix& x, const DenseMatrix& y,
                                 const ProjectionPlan& plan);

struct SuccessDiagnostics {
  double alpha = 0.0;   // radians
  double beta = 0.0;    // radians
  double margin = 0.0;  // (alpha - 2 beta) / (2 pi)
  Index recommended_s = 1;
  bool identifiable = true;  // false when margin <= 0
};

// Per-geometry success diagnostics from the cross-section polygon: a1, a2,
// a3 are adjacent anchor projections (a2 the vertex under test), b1 a decoy,
// c1 a covered point, all already on the cross-section hyperplane (see
// cross_section_point). alpha is the angle at a2 between its polygon edges,
// beta the angle at b1 between the directions to a2 and c1.
SuccessDiagnostics success_diagnostics(const Vector& a1, const Vector& a2,
                                       const Vector& a3, const Vector& b1,
                                       const Vector& c1, Index k, double delta);

// Central projection of a ray onto the cross-section hyperplane orthogonal
// to `mean_ray` at unit offset: normalize, then scale so the component along
// mean_ray is 1.
Vector cross_section_point(const Vector& point, const Vector& mean_ray);

}  // namespace conehull
