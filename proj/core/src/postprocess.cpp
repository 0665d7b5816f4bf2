#include "conehull/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "conehull/nnls.hpp"
#include "conehull/parallel.hpp"
#include "conehull/rng.hpp"

namespace conehull {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_pi(double a) {
  a = std::fmod(a, kTwoPi);
  if (a <= -kPi) a += kTwoPi;
  if (a > kPi) a -= kTwoPi;
  return a;
}

double circular_distance(double a, double b) { return std::abs(wrap_pi(a - b)); }
}  // namespace

CoefficientSolve solve_coefficients(const DenseMatrix& x, const DenseMatrix& y,
                                    const std::vector<Index>& anchors,
                                    CoefficientConstraint constraint) {
  if (anchors.empty()) throw std::invalid_argument("solve_coefficients: empty anchor set");
  const Index k = static_cast<Index>(anchors.size());
  const Index n = x.rows();
  DenseMatrix design(y.cols(), k);
  for (Index j = 0; j < k; ++j) {
    if (anchors[static_cast<std::size_t>(j)] < 0 ||
        anchors[static_cast<std::size_t>(j)] >= y.rows()) {
      throw std::invalid_argument("solve_coefficients: anchor index out of range");
    }
    design.col(j) = y.row(anchors[static_cast<std::size_t>(j)]).transpose();
  }

  CoefficientSolve out;
  out.f = DenseMatrix::Zero(n, k);
  out.residuals.assign(static_cast<std::size_t>(n), 0.0);
  out.failed.assign(static_cast<std::size_t>(n), 0);
  out.rank_deficient_warning =
      design.colPivHouseholderQr().rank() < std::min(design.rows(), k);

  // anchor-row pinning applies to self-referential instances, where anchor
  // j is also row anchors[j] of X
  std::map<Index, Index> pinned;
  if (constraint == CoefficientConstraint::NonNegAnchorsFixed) {
    for (Index j = 0; j < k; ++j) {
      const Index row = anchors[static_cast<std::size_t>(j)];
      if (row < n) pinned.emplace(row, j);
    }
  }

  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    const Index row = static_cast<Index>(i);
    auto it = pinned.find(row);
    if (it != pinned.end()) {
      out.f(row, it->second) = 1.0;
      out.residuals[i] = (x.row(row) - y.row(anchors[static_cast<std::size_t>(
                                          it->second)])).norm();
      return;
    }
    NnlsResult r = nnls(design, x.row(row).transpose());
    out.f.row(row) = r.x.transpose();
    out.residuals[i] = r.residual;
    out.failed[i] = r.converged ? 0 : 1;
  });

  const double xf = x.norm();
  out.relative_frobenius_residual =
      xf > 0.0 ? (x - out.f * design.transpose()).norm() / xf : 0.0;
  return out;
}

NmfFactors nmf_factors(const DenseMatrix& x, const std::vector<Index>& anchors) {
  CoefficientSolve solve = solve_coefficients(
      x, x, anchors, CoefficientConstraint::NonNegAnchorsFixed);
  NmfFactors out;
  out.anchors = anchors;
  out.f = std::move(solve.f);
  out.relative_residual = solve.relative_frobenius_residual;
  return out;
}

DenseMatrix recover_hmm_transition(const DenseMatrix& o, const DenseMatrix& x_a3) {
  const Index k = o.cols();
  if (x_a3.rows() != o.rows() || x_a3.cols() != k) {
    throw std::invalid_argument("recover_hmm_transition: shape mismatch");
  }
  Eigen::JacobiSVD<DenseMatrix> svd(o);
  const double cond = svd.singularValues()(0) /
                      std::max(svd.singularValues()(k - 1), 1e-300);
  if (svd.singularValues()(k - 1) <= 1e-12 * svd.singularValues()(0)) {
    throw std::runtime_error(
        "recover_hmm_transition: emission matrix is rank deficient "
        "(condition number " + std::to_string(cond) + ")");
  }
  DenseMatrix t(k, k);
  for (Index c = 0; c < k; ++c) {
    NnlsResult col = simplex_constrained_lsq(o, x_a3.col(c));
    t.col(c) = col.x;
  }
  return t;
}

LdaParams recover_lda_params(const DenseMatrix& f, const DenseMatrix& q,
                             double alpha0) {
  const Index k = f.cols();
  if (alpha0 <= 0.0) throw std::invalid_argument("recover_lda_params: alpha0 > 0");
  LdaParams out;
  out.f = f;
  out.o = f;
  for (Index j = 0; j < k; ++j) {
    const double sum = f.col(j).sum();
    if (sum <= 0.0) {
      throw std::invalid_argument("recover_lda_params: column " + std::to_string(j) +
                                  " of F has non-positive sum");
    }
    out.o.col(j) /= sum;
  }

  // R from Q = O R O' (least squares; O has full column rank after
  // normalization of a pinned F)
  DenseMatrix gram = out.o.transpose() * out.o;
  DenseMatrix pinv = gram.ldlt().solve(out.o.transpose());
  out.r = pinv * q * pinv.transpose();

  // alpha from alpha0 (alpha0 + 1) R ~= alpha alpha' + Diag(alpha):
  // Gauss-Newton over all k^2 entries, started from the diagonal solution.
  DenseMatrix s = alpha0 * (alpha0 + 1.0) * out.r;
  Vector alpha(k);
  for (Index i = 0; i < k; ++i) {
    const double sii = std::max(s(i, i), 0.0);
    alpha[i] = (-1.0 + std::sqrt(1.0 + 4.0 * sii)) / 2.0;
  }
  for (int iter = 0; iter < 100; ++iter) {
    DenseMatrix jac(k * k, k);
    Vector resid(k * k);
    jac.setZero();
    for (Index i = 0; i < k; ++i) {
      for (Index j = 0; j < k; ++j) {
        const Index r = i * k + j;
        double model = alpha[i] * alpha[j];
        jac(r, i) += alpha[j];
        jac(r, j) += alpha[i];
        if (i == j) {
          model += alpha[i];
          jac(r, i) += 1.0;
        }
        resid[r] = s(i, j) - model;
      }
    }
    Vector step = (jac.transpose() * jac)
                      .ldlt()
                      .solve(jac.transpose() * resid);
    alpha += step;
    if (step.norm() <= 1e-12 * std::max(1.0, alpha.norm())) break;
  }
  for (Index i = 0; i < k; ++i) {
    if (alpha[i] < 0.0) {
      alpha[i] = 0.0;
      out.alpha_clipped = true;
    }
  }
  out.alpha = alpha;
  return out;
}

namespace {

struct MeanShift1d {
  std::vector<Index> labels;  // per input angle
  Index clusters = 0;
};

// Mean shift over circular angle data with a Gaussian kernel. Bandwidth is
// Silverman's rule on deviations from the circular mean.
MeanShift1d circular_mean_shift(const std::vector<double>& angles) {
  const std::size_t n = angles.size();
  MeanShift1d out;
  out.labels.assign(n, 0);
  if (n == 0) return out;
  if (n == 1) {
    out.clusters = 1;
    return out;
  }

  double c = 0.0, s = 0.0;
  for (double a : angles) {
    c += std::cos(a);
    s += std::sin(a);
  }
  const double mean = std::atan2(s, c);
  std::vector<double> dev(n);
  for (std::size_t i = 0; i < n; ++i) dev[i] = wrap_pi(angles[i] - mean);
  std::vector<double> sorted_dev = dev;
  std::sort(sorted_dev.begin(), sorted_dev.end());
  double mu = 0.0;
  for (double d : dev) mu += d;
  mu /= static_cast<double>(n);
  double var = 0.0;
  for (double d : dev) var += (d - mu) * (d - mu);
  var /= std::max<std::size_t>(1, n - 1);
  const double iqr = sorted_dev[(3 * n) / 4] - sorted_dev[n / 4];
  double spread = std::min(std::sqrt(var), iqr / 1.34);
  if (spread <= 1e-9) spread = std::max(std::sqrt(var), 1e-6);
  double h = 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
  h = std::max(h, 1e-6);

  // converge every point to its mode
  std::vector<double> modes(n);
  for (std::size_t i = 0; i < n; ++i) {
    double m = angles[i];
    for (int iter = 0; iter < 200; ++iter) {
      double num_c = 0.0, num_s = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double d = circular_distance(m, angles[j]);
        const double w = std::exp(-0.5 * (d / h) * (d / h));
        num_c += w * std::cos(angles[j]);
        num_s += w * std::sin(angles[j]);
      }
      const double next = std::atan2(num_s, num_c);
      if (circular_distance(next, m) < 1e-8) {
        m = next;
        break;
      }
      m = next;
    }
    modes[i] = m;
  }

  // merge modes closer than h/2
  std::vector<double> centers;
  for (std::size_t i = 0; i < n; ++i) {
    Index found = -1;
    for (std::size_t cidx = 0; cidx < centers.size(); ++cidx) {
      if (circular_distance(modes[i], centers[cidx]) < h / 2.0) {
        found = static_cast<Index>(cidx);
        break;
      }
    }
    if (found < 0) {
      centers.push_back(modes[i]);
      found = static_cast<Index>(centers.size() - 1);
    }
    out.labels[i] = found;
  }
  out.clusters = static_cast<Index>(centers.size());
  return out;
}

}  // namespace

std::vector<Index> kmeans_labels(const DenseMatrix& points, Index k,
                                 std::uint64_t seed, int restarts) {
  const Index n = points.rows();
  if (k >= n) {
    std::vector<Index> labels(static_cast<std::size_t>(n));
    std::iota(labels.begin(), labels.end(), Index{0});
    return labels;
  }
  std::vector<Index> best_labels(static_cast<std::size_t>(n), 0);
  double best_cost = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    auto rng = make_rng(seed, static_cast<std::uint64_t>(r), 0x137);
    // k-means++ seeding
    DenseMatrix centers(k, points.cols());
    std::uniform_int_distribution<Index> first(0, n - 1);
    centers.row(0) = points.row(first(rng));
    Vector dist2 = (points.rowwise() - centers.row(0)).rowwise().squaredNorm();
    for (Index c = 1; c < k; ++c) {
      const double total = dist2.sum();
      Index pick = 0;
      if (total > 0.0) {
        std::uniform_real_distribution<double> u(0.0, total);
        double target = u(rng), acc = 0.0;
        for (Index i = 0; i < n; ++i) {
          acc += dist2[i];
          if (acc >= target) {
            pick = i;
            break;
          }
        }
      } else {
        pick = first(rng);
      }
      centers.row(c) = points.row(pick);
      dist2 = dist2.cwiseMin(
          (points.rowwise() - centers.row(c)).rowwise().squaredNorm());
    }

    std::vector<Index> labels(static_cast<std::size_t>(n), 0);
    for (int iter = 0; iter < 100; ++iter) {
      bool changed = false;
      for (Index i = 0; i < n; ++i) {
        Index arg = 0;
        double best = std::numeric_limits<double>::infinity();
        for (Index c = 0; c < k; ++c) {
          const double d = (points.row(i) - centers.row(c)).squaredNorm();
          if (d < best) {
            best = d;
            arg = c;
          }
        }
        if (labels[static_cast<std::size_t>(i)] != arg) {
          labels[static_cast<std::size_t>(i)] = arg;
          changed = true;
        }
      }
      centers.setZero();
      Vector counts = Vector::Zero(k);
      for (Index i = 0; i < n; ++i) {
        centers.row(labels[static_cast<std::size_t>(i)]) += points.row(i);
        counts[labels[static_cast<std::size_t>(i)]] += 1.0;
      }
      for (Index c = 0; c < k; ++c) {
        if (counts[c] > 0.0) centers.row(c) /= counts[c];
      }
      if (!changed) break;
    }
    double cost = 0.0;
    for (Index i = 0; i < n; ++i) {
      cost += (points.row(i) - centers.row(labels[static_cast<std::size_t>(i)]))
                  .squaredNorm();
    }
    if (cost < best_cost) {
      best_cost = cost;
      best_labels = labels;
    }
  }
  return best_labels;
}

namespace {

// Normalized Laplacian of the affinity with unit self-loops. Self-loops keep
// isolated anchors well-posed: every connected component contributes one
// zero eigenvalue.
DenseMatrix normalized_laplacian(const DenseMatrix& g) {
  const Index m = g.rows();
  DenseMatrix affinity = g + DenseMatrix::Identity(m, m);
  Vector dinv = affinity.rowwise().sum();
  for (Index i = 0; i < m; ++i) dinv[i] = 1.0 / std::sqrt(dinv[i]);
  DenseMatrix lap = DenseMatrix::Identity(m, m);
  lap -= dinv.asDiagonal() * affinity * dinv.asDiagonal();
  return lap;
}

// Spectral clustering of a symmetric nonnegative affinity matrix.
std::vector<Index> spectral_cluster(const DenseMatrix& g, Index k,
                                    std::uint64_t seed) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(normalized_laplacian(g));
  DenseMatrix embed = eig.eigenvectors().leftCols(k);
  for (Index i = 0; i < embed.rows(); ++i) {
    const double norm = embed.row(i).norm();
    if (norm > 1e-12) embed.row(i) /= norm;
  }
  return kmeans_labels(embed, k, seed);
}

Index eigengap_cluster_count(const DenseMatrix& g, Index max_k) {
  const Index m = g.rows();
  Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(normalized_laplacian(g));
  const Vector& values = eig.eigenvalues();  // ascending
  // zero eigenvalues count connected components; the eigengap refines the
  // estimate when blocks are merely weakly connected
  Index zeros = 0;
  while (zeros < m && values[zeros] < 1e-8) ++zeros;
  Index best = 1;
  double best_gap = -1.0;
  for (Index k = 1; k < std::min(max_k, m); ++k) {
    const double gap = values[k] - values[k - 1];
    if (gap > best_gap) {
      best_gap = gap;
      best = k;
    }
  }
  return std::clamp<Index>(std::max(zeros, best), 1, std::min(max_k, m));
}

}  // namespace

ScClusters cluster_anchors_sc(const DenseMatrix& x, const ProjectionPlan& plan,
                              Index k_total, Index num_clusters) {
  require_finite(x, "X");
  if (plan.d != 2) {
    throw std::invalid_argument("cluster_anchors_sc: requires d == 2");
  }
  if (k_total < 1 || k_total > x.rows()) {
    throw std::invalid_argument("cluster_anchors_sc: bad k_total");
  }
  const Index n = x.rows();

  // per sub-problem: angle-cluster labels for every row (-1 = unusable)
  std::vector<std::vector<Index>> sub_labels(static_cast<std::size_t>(plan.s));
  std::vector<Index> sub_cluster_counts(static_cast<std::size_t>(plan.s), 0);
  std::vector<std::vector<Index>> sub_anchors(static_cast<std::size_t>(plan.s));

  parallel_for(static_cast<std::size_t>(plan.s), [&](std::size_t t) {
    const DenseMatrix* data = plan.ensemble == Ensemble::DataRows ? &x : nullptr;
    DenseMatrix phi = draw_projection(plan, static_cast<Index>(t), x.cols(), data);
    AngleArray angles = project_angles(x, phi);
    std::vector<Index> valid;
    std::vector<double> vals;
    for (Index i = 0; i < n; ++i) {
      if (!angles.is_degenerate(static_cast<std::size_t>(i))) {
        valid.push_back(i);
        vals.push_back(angles.values[static_cast<std::size_t>(i)]);
      }
    }
    if (valid.size() < 2) return;
    MeanShift1d shift = circular_mean_shift(vals);
    sub_cluster_counts[t] = shift.clusters;
    auto& labels = sub_labels[t];
    labels.assign(static_cast<std::size_t>(n), -1);
    for (std::size_t v = 0; v < valid.size(); ++v) {
      labels[static_cast<std::size_t>(valid[v])] = shift.labels[v];
    }
    // min/max-angle rows of every angle cluster join the anchor pool
    for (Index c = 0; c < shift.clusters; ++c) {
      double cc = 0.0, cs = 0.0;
      for (std::size_t v = 0; v < valid.size(); ++v) {
        if (shift.labels[v] != c) continue;
        cc += std::cos(vals[v]);
        cs += std::sin(vals[v]);
      }
      const double cmean = std::atan2(cs, cc);
      Index lo = -1, hi = -1;
      double lo_dev = std::numeric_limits<double>::infinity();
      double hi_dev = -std::numeric_limits<double>::infinity();
      for (std::size_t v = 0; v < valid.size(); ++v) {
        if (shift.labels[v] != c) continue;
        const double dev = wrap_pi(vals[v] - cmean);
        if (dev < lo_dev) {
          lo_dev = dev;
          lo = valid[v];
        }
        if (dev > hi_dev) {
          hi_dev = dev;
          hi = valid[v];
        }
      }
      if (lo >= 0) sub_anchors[t].push_back(lo);
      if (hi >= 0 && hi != lo) sub_anchors[t].push_back(hi);
    }
  });

  // conquer: vote tally over the per-cluster extremes
  std::vector<SubproblemResult> as_results(static_cast<std::size_t>(plan.s));
  for (Index t = 0; t < plan.s; ++t) {
    as_results[static_cast<std::size_t>(t)].t = t;
    as_results[static_cast<std::size_t>(t)].anchors =
        sub_anchors[static_cast<std::size_t>(t)];
    as_results[static_cast<std::size_t>(t)].discarded =
        sub_anchors[static_cast<std::size_t>(t)].empty();
  }
  VoteTally tally = tally_votes(as_results, n);
  AnchorSet top = select_top_k(tally, k_total);

  ScClusters out;
  out.anchors = top.indices;
  const Index big_k = static_cast<Index>(out.anchors.size());
  if (big_k == 0) {
    throw std::runtime_error("cluster_anchors_sc: no anchors received votes");
  }

  // co-clustering counts over the selected anchors
  out.g = DenseMatrix::Zero(big_k, big_k);
  Index usable = 0;
  bool ever_split = false;
  for (Index t = 0; t < plan.s; ++t) {
    const auto& labels = sub_labels[static_cast<std::size_t>(t)];
    if (labels.empty()) continue;
    ++usable;
    if (sub_cluster_counts[static_cast<std::size_t>(t)] > 1) ever_split = true;
    for (Index a = 0; a < big_k; ++a) {
      const Index la = labels[static_cast<std::size_t>(out.anchors[a])];
      if (la < 0) continue;
      for (Index b = a + 1; b < big_k; ++b) {
        const Index lb = labels[static_cast<std::size_t>(out.anchors[b])];
        if (lb == la) {
          out.g(a, b) += 1.0;
          out.g(b, a) += 1.0;
        }
      }
    }
  }
  out.degenerate_clustering = usable > 0 && !ever_split;

  Index groups = num_clusters;
  if (groups <= 0) {
    groups = eigengap_cluster_count(out.g, std::min<Index>(big_k, 12));
  }
  groups = std::clamp<Index>(groups, 1, big_k);
  std::vector<Index> anchor_labels = spectral_cluster(out.g, groups, plan.seed);

  out.anchor_groups.assign(static_cast<std::size_t>(groups), {});
  for (Index a = 0; a < big_k; ++a) {
    out.anchor_groups[static_cast<std::size_t>(anchor_labels[a])].push_back(
        out.anchors[a]);
  }
  // drop empty groups (k-means may starve one)
  out.anchor_groups.erase(
      std::remove_if(out.anchor_groups.begin(), out.anchor_groups.end(),
                     [](const auto& g) { return g.empty(); }),
      out.anchor_groups.end());

  // assign every row to the group with the smallest NNLS residual
  const Index final_groups = static_cast<Index>(out.anchor_groups.size());
  std::vector<DenseMatrix> designs(static_cast<std::size_t>(final_groups));
  for (Index g = 0; g < final_groups; ++g) {
    const auto& members = out.anchor_groups[static_cast<std::size_t>(g)];
    DenseMatrix d(x.cols(), static_cast<Index>(members.size()));
    for (std::size_t j = 0; j < members.size(); ++j) {
      d.col(static_cast<Index>(j)) = x.row(members[j]).transpose();
    }
    designs[static_cast<std::size_t>(g)] = std::move(d);
  }
  out.labels.assign(static_cast<std::size_t>(n), 0);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    double best = std::numeric_limits<double>::infinity();
    Index arg = 0;
    const Vector b = x.row(static_cast<Index>(i)).transpose();
    for (Index g = 0; g < final_groups; ++g) {
      NnlsResult r = nnls(designs[static_cast<std::size_t>(g)], b);
      if (r.residual < best) {
        best = r.residual;
        arg = g;
      }
    }
    out.labels[i] = arg;
  });
  return out;
}

Rank1Factors recover_rank1_factors(const DenseMatrix& x1, const DenseMatrix& x2,
                                   const DenseMatrix& y) {
  if (x1.rows() != x2.rows() || x1.cols() != x2.cols()) {
    throw std::invalid_argument("recover_rank1_factors: X1/X2 shape mismatch");
  }
  const Index pi = x1.rows(), pj = x1.cols();
  if (y.cols() != pi * pj) {
    throw std::invalid_argument(
        "recover_rank1_factors: Y rows must be vectorized p_i x p_j matrices");
  }

  Eigen::BDCSVD<DenseMatrix> svd(x1, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sigma = svd.singularValues();
  Index k = 0;
  const double cutoff = 1e-10 * std::max(sigma[0], 1e-300);
  while (k < sigma.size() && sigma[k] > cutoff) ++k;
  if (k == 0) throw std::invalid_argument("recover_rank1_factors: X1 is zero");

  DenseMatrix u = svd.matrixU().leftCols(k);
  DenseMatrix v = svd.matrixV().leftCols(k);
  Vector sqrt_sigma = sigma.head(k).cwiseSqrt();
  Vector inv_sqrt = sqrt_sigma.cwiseInverse();

  DenseMatrix core = inv_sqrt.asDiagonal() * (u.transpose() * x2 * v) *
                     inv_sqrt.asDiagonal();
  Eigen::EigenSolver<DenseMatrix> eig(core);
  Vector lambda(k);
  for (Index i = 0; i < k; ++i) {
    const auto ev = eig.eigenvalues()[i];
    if (std::abs(ev.imag()) > 1e-8 * std::max(1.0, std::abs(ev.real()))) {
      throw NonIdentifiableError(
          "recover_rank1_factors: complex eigenvalues (weights not distinct?)");
    }
    lambda[i] = ev.real();
  }
  for (Index i = 0; i < k; ++i) {
    for (Index j = i + 1; j < k; ++j) {
      if (std::abs(lambda[i] - lambda[j]) <=
          1e-8 * std::max(1.0, lambda.cwiseAbs().maxCoeff())) {
        throw NonIdentifiableError(
            "recover_rank1_factors: repeated weight ratios, anchors not "
            "identifiable");
      }
    }
  }
  DenseMatrix w(k, k);
  for (Index c = 0; c < k; ++c) {
    for (Index r = 0; r < k; ++r) w(r, c) = eig.eigenvectors()(r, c).real();
  }

  DenseMatrix oi = u * sqrt_sigma.asDiagonal() * w;
  DenseMatrix wt_inv = w.transpose().colPivHouseholderQr().solve(
      DenseMatrix::Identity(k, k));  // W^{-T}
  DenseMatrix oj = v * sqrt_sigma.asDiagonal() * wt_inv;

  // per-column scale is arbitrary; normalize the o_i columns and absorb the
  // factor into o_j so each outer product stays fixed
  for (Index c = 0; c < k; ++c) {
    const double norm = oi.col(c).norm();
    if (norm > 0.0) {
      oi.col(c) /= norm;
      oj.col(c) *= norm;
    }
  }

  Rank1Factors out;
  out.o_i = oi;
  out.o_j = oj;
  out.anchors.reserve(static_cast<std::size_t>(k));
  for (Index c = 0; c < k; ++c) {
    // vec(o_i^c (x) o_j^c), row-major
    Vector target(pi * pj);
    for (Index r = 0; r < pi; ++r) {
      target.segment(r * pj, pj) = oi(r, c) * oj.col(c);
    }
    const double tn = target.norm();
    Index best = -1;
    double best_cos = -1.0;
    for (Index s = 0; s < y.rows(); ++s) {
      const double yn = y.row(s).norm();
      if (yn < 1e-300 || tn < 1e-300) continue;
      const double cosine = y.row(s).dot(target) / (yn * tn);
      if (cosine > best_cos) {
        best_cos = cosine;
        best = s;
      }
    }
    if (best < 0 || best_cos < 1.0 - 1e-6) {
      throw std::runtime_error(
          "recover_rank1_factors: factor " + std::to_string(c) +
          " matches no candidate row (best cosine " + std::to_string(best_cos) +
          ")");
    }
    out.anchors.push_back(best);
  }
  return out;
}

}  // namespace conehull
