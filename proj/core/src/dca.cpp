#include "conehull/dca.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "conehull/oracle.hpp"
#include "conehull/parallel.hpp"

namespace conehull {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

SubproblemResult solve_subproblem(const ConicalHullProblem& problem,
                                  const ProjectionPlan& plan, Index t) {
  SubproblemResult res;
  res.t = t;
  const DenseMatrix* data = plan.ensemble == Ensemble::DataRows ? &problem.y() : nullptr;
  DenseMatrix phi = draw_projection(plan, t, problem.ambient_dim(), data);

  if (plan.d == 2) {
    AngleArray xp = project_angles(problem.x(), phi);
    if (problem.self_referential()) {
      Anchor2dResult a = anchor_2d(xp, xp);
      res.anchors = std::move(a.indices);
      res.discarded = a.discarded;
      res.coverage_violation = a.coverage_violation;
    } else {
      AngleArray yp = project_angles(problem.y(), phi);
      Anchor2dResult a = anchor_2d(xp, yp);
      res.anchors = std::move(a.indices);
      res.discarded = a.discarded;
      res.coverage_violation = a.coverage_violation;
    }
    return res;
  }

  // d > 2: exhaustive solver on the projected instance (test scale only).
  DenseMatrix xp = problem.x() * phi;
  DenseMatrix yp = problem.y() * phi;
  try {
    res.anchors = brute_force_mch(xp, yp);
    std::sort(res.anchors.begin(), res.anchors.end());
  } catch (const std::exception&) {
    res.discarded = true;
    res.coverage_violation = true;
  }
  if (res.anchors.empty()) res.discarded = true;
  return res;
}

}  // namespace

VoteTally tally_votes(const std::vector<SubproblemResult>& results, Index m) {
  VoteTally tally;
  tally.g_hat.assign(static_cast<std::size_t>(m), 0.0);
  for (const auto& r : results) {
    if (r.discarded) continue;
    ++tally.s_effective;
    for (Index idx : r.anchors) {
      tally.g_hat[static_cast<std::size_t>(idx)] += 1.0;
    }
  }
  if (tally.s_effective > 0) {
    const double inv = 1.0 / static_cast<double>(tally.s_effective);
    for (double& g : tally.g_hat) g *= inv;
  }
  return tally;
}

AnchorSet select_top_k(const VoteTally& tally, Index k) {
  const Index m = static_cast<Index>(tally.g_hat.size());
  std::vector<Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    if (tally.g_hat[a] != tally.g_hat[b]) return tally.g_hat[a] > tally.g_hat[b];
    return a < b;  // deterministic tie-break: lowest index wins
  });
  AnchorSet set;
  for (Index r = 0; r < std::min(k, m); ++r) {
    const Index idx = order[static_cast<std::size_t>(r)];
    if (tally.g_hat[idx] <= 0.0) break;  // never return zero-vote anchors
    set.indices.push_back(idx);
    set.scores.push_back(tally.g_hat[idx]);
  }
  return set;
}

Index default_subproblem_count(Index k, double c_hat, double delta) {
  if (k < 1) throw std::invalid_argument("default_subproblem_count: k >= 1");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("default_subproblem_count: 0 < delta < 1");
  }
  if (!(c_hat > 0.0)) {
    throw std::invalid_argument("default_subproblem_count: c_hat > 0");
  }
  const double s = (3.0 * static_cast<double>(k) / c_hat) *
                   std::log(static_cast<double>(k) / delta);
  return std::max<Index>(1, static_cast<Index>(std::ceil(s)));
}

DcaResult dca(const ConicalHullProblem& problem, const ProjectionPlan& plan) {
  if (plan.s < 1) throw std::invalid_argument("dca: plan.s must be >= 1");
  DcaResult result;
  result.subproblems.resize(static_cast<std::size_t>(plan.s));
  parallel_for(static_cast<std::size_t>(plan.s), [&](std::size_t t) {
    result.subproblems[t] = solve_subproblem(problem, plan, static_cast<Index>(t));
  });

  result.tally = tally_votes(result.subproblems, problem.y().rows());
  result.anchors = select_top_k(result.tally, problem.k());

  const Index discarded = plan.s - result.tally.s_effective;
  if (result.tally.s_effective == 0 ||
      static_cast<Index>(result.anchors.indices.size()) < problem.k()) {
    result.status = DcaStatus::UnderDetermined;
    result.message = "fewer than k rows received positive votes (" +
                     std::to_string(result.anchors.indices.size()) + " of " +
                     std::to_string(problem.k()) + ")";
  } else if (2 * discarded > plan.s) {
    result.status = DcaStatus::HighDiscardRate;
    result.message = std::to_string(discarded) + " of " + std::to_string(plan.s) +
                     " sub-problems discarded (projected cone not pointed)";
  }
  return result;
}

double calibrate_c_hat(const ConicalHullProblem& problem, std::uint64_t seed) {
  ProjectionPlan pilot;
  pilot.seed = seed;
  pilot.s = std::max<Index>(2 * problem.k(), 8);
  DcaResult r = dca(problem, pilot);
  // gap between the vote of the k-th ranked row and the best of the rest
  const auto& g = r.tally.g_hat;
  std::vector<double> sorted(g.begin(), g.end());
  std::sort(sorted.rbegin(), sorted.rend());
  const std::size_t k = static_cast<std::size_t>(problem.k());
  if (sorted.size() <= k) return 1.0;
  const double gap = sorted[k - 1] - sorted[k];
  if (gap <= 0.0) return 1.0;  // pilot uninformative, fall back to the default
  return static_cast<double>(problem.k()) * gap;
}

MembershipResult cone_membership(const DenseMatrix& x, const DenseMatrix& y,
                                 const ProjectionPlan& plan) {
  require_finite(x, "X");
  require_finite(y, "Y");
  if (x.cols() != y.cols()) {
    throw std::invalid_argument("cone_membership: dimension mismatch");
  }
  if (plan.s < 1) throw std::invalid_argument("cone_membership: plan.s >= 1");

  const Index n = x.rows();
  MembershipResult out;
  out.violations.assign(static_cast<std::size_t>(n), 0);
  out.covered.assign(static_cast<std::size_t>(n), 1);
  if (n == 0) return out;

  std::vector<std::vector<char>> eps(static_cast<std::size_t>(plan.s));
  std::vector<char> usable(static_cast<std::size_t>(plan.s), 0);
  parallel_for(static_cast<std::size_t>(plan.s), [&](std::size_t t) {
    const DenseMatrix* data = plan.ensemble == Ensemble::DataRows ? &y : nullptr;
    DenseMatrix phi = draw_projection(plan, static_cast<Index>(t), x.cols(), data);
    AngleArray yp = project_angles(y, phi);
    const PointednessFrame frame = pointedness_frame(yp);
    if (!frame.valid) return;  // no usable cone direction
    double y_min = std::numeric_limits<double>::infinity();
    double y_max = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < yp.size(); ++i) {
      if (yp.is_degenerate(i)) continue;
      const double c = frame.coord(yp.values[i]);
      y_min = std::min(y_min, c);
      y_max = std::max(y_max, c);
    }
    if (!std::isfinite(y_min) || y_max - y_min >= std::numbers::pi) {
      return;  // projected cone not pointed; certifies nothing
    }
    usable[t] = 1;
    AngleArray xp = project_angles(x, phi);
    auto& e = eps[t];
    e.assign(static_cast<std::size_t>(n), 0);
    for (Index i = 0; i < n; ++i) {
      if (xp.is_degenerate(static_cast<std::size_t>(i))) continue;  // origin
      const double c = frame.coord(xp.values[static_cast<std::size_t>(i)]);
      if (c < y_min || c > y_max) e[static_cast<std::size_t>(i)] = 1;
    }
  });

  for (Index t = 0; t < plan.s; ++t) {
    if (!usable[static_cast<std::size_t>(t)]) continue;
    ++out.s_effective;
    const auto& e = eps[static_cast<std::size_t>(t)];
    for (Index i = 0; i < n; ++i) {
      out.violations[static_cast<std::size_t>(i)] += e[static_cast<std::size_t>(i)];
    }
  }
  for (Index i = 0; i < n; ++i) {
    out.covered[static_cast<std::size_t>(i)] =
        out.violations[static_cast<std::size_t>(i)] == 0 ? 1 : 0;
  }
  return out;
}

Vector cross_section_point(const Vector& point, const Vector& mean_ray) {
  const double pn = point.norm();
  const double rn = mean_ray.norm();
  if (pn < kTolZero || rn < kTolZero) {
    throw std::invalid_argument("cross_section_point: zero vector");
  }
  Vector unit = point / pn;
  const double along = unit.dot(mean_ray / rn);
  if (along <= kTolZero) {
    throw std::invalid_argument(
        "cross_section_point: ray not on the mean-ray side");
  }
  return unit / along;
}

SuccessDiagnostics success_diagnostics(const Vector& a1, const Vector& a2,
                                       const Vector& a3, const Vector& b1,
                                       const Vector& c1, Index k, double delta) {
  auto vertex_angle = [](const Vector& at, const Vector& u, const Vector& v) {
    Vector d1 = u - at;
    Vector d2 = v - at;
    const double n1 = d1.norm(), n2 = d2.norm();
    if (n1 < kTolZero || n2 < kTolZero) {
      throw std::invalid_argument("success_diagnostics: coincident points");
    }
    return std::acos(std::clamp(d1.dot(d2) / (n1 * n2), -1.0, 1.0));
  };

  SuccessDiagnostics diag;
  diag.alpha = vertex_angle(a2, a1, a3);
  diag.beta = vertex_angle(b1, a2, c1);
  diag.margin = (diag.alpha - 2.0 * diag.beta) / kTwoPi;
  diag.identifiable = diag.margin > 0.0;
  if (diag.identifiable) {
    diag.recommended_s = default_subproblem_count(
        k, static_cast<double>(k) * diag.margin, delta);
  } else {
    diag.recommended_s = std::numeric_limits<Index>::max();
  }
  return diag;
}

}  // namespace conehull
