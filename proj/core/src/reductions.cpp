#include "conehull/reductions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "conehull/rng.hpp"

namespace conehull {

void MultiViewData::validate() const {
  for (int v = 0; v < 3; ++v) {
    require_finite(views[v], "view " + std::to_string(v + 1));
    if (views[v].rows() != views[0].rows()) {
      throw std::invalid_argument("views must have equal row counts");
    }
    if (views[v].cols() < 1) {
      throw std::invalid_argument("views must have at least one feature");
    }
  }
}

MultiViewData split_views(const DenseMatrix& x, std::uint64_t seed,
                          std::vector<std::vector<Index>>* assignment) {
  require_finite(x, "X");
  const Index p = x.cols();
  if (p < 3) throw std::invalid_argument("split_views: need at least 3 features");
  std::vector<Index> perm(static_cast<std::size_t>(p));
  std::iota(perm.begin(), perm.end(), Index{0});
  auto rng = make_rng(seed, /*stream=*/0, /*salt=*/0x5eed);
  std::shuffle(perm.begin(), perm.end(), rng);

  MultiViewData data;
  std::vector<std::vector<Index>> groups(3);
  for (Index i = 0; i < p; ++i) {
    groups[static_cast<std::size_t>(i % 3)].push_back(perm[static_cast<std::size_t>(i)]);
  }
  for (int v = 0; v < 3; ++v) {
    std::sort(groups[v].begin(), groups[v].end());
    data.views[v].resize(x.rows(), static_cast<Index>(groups[v].size()));
    for (std::size_t j = 0; j < groups[v].size(); ++j) {
      data.views[v].col(static_cast<Index>(j)) = x.col(groups[v][j]);
    }
  }
  if (assignment) *assignment = std::move(groups);
  return data;
}

ConicalHullProblem MomentReduction::to_problem(Index k) const {
  return ConicalHullProblem::general_problem(x, y, k);
}

ConicalHullProblem reduce_nmf(const DenseMatrix& x, Index k) {
  require_finite(x, "X");
  require_nonnegative(x, "X");
  return ConicalHullProblem::self_referential_problem(x, k);
}

namespace {

// Shared moment construction: X row 0 = vec(A' B) / n, rows 1..q =
// vec(A' Diag(W eta_t) B) / n; Y row t = vec(a_t (x) b_t). A and B are the
// paired views, W the weighting view. Flattening is row-major over the
// p_a x p_b moment matrix.
MomentReduction build_moments(const DenseMatrix& a, const DenseMatrix& b,
                              const DenseMatrix& w, Index q, std::uint64_t seed,
                              std::optional<double> omega_fraction) {
  if (q < 1) throw std::invalid_argument("moment reduction: q >= 1 required");
  const Index n = a.rows();
  if (n < 2) throw std::invalid_argument("moment reduction: need n >= 2 samples");
  const Index pa = a.cols(), pb = b.cols(), pw = w.cols();
  const Index full = pa * pb;

  MomentReduction red;
  red.q = q;
  red.p_i = pa;
  red.p_j = pb;

  // eta_t uniform on the unit sphere of the weighting view
  auto rng = make_rng(seed, 0, /*salt=*/0xe7a);
  std::normal_distribution<double> normal(0.0, 1.0);
  red.etas.reserve(static_cast<std::size_t>(q));
  for (Index t = 0; t < q; ++t) {
    Vector eta(pw);
    do {
      for (Index i = 0; i < pw; ++i) eta[i] = normal(rng);
    } while (eta.norm() < 1e-12);
    eta /= eta.norm();
    red.etas.push_back(std::move(eta));
  }

  // Omega mask: uniform without replacement, shared by X and Y so both live
  // in the same coordinate subspace. Sorted, so fraction 1 reproduces the
  // unmasked layout bitwise.
  std::vector<Index> omega;
  if (omega_fraction.has_value()) {
    const double f = *omega_fraction;
    if (!(f > 0.0 && f <= 1.0)) {
      throw std::invalid_argument("omega_fraction must lie in (0, 1]");
    }
    const Index keep = std::max<Index>(1, static_cast<Index>(std::llround(
                                              f * static_cast<double>(full))));
    std::vector<Index> all(static_cast<std::size_t>(full));
    std::iota(all.begin(), all.end(), Index{0});
    auto mask_rng = make_rng(seed, 1, /*salt=*/0x03e6a);
    for (Index j = 0; j < keep; ++j) {
      std::uniform_int_distribution<Index> pick(j, full - 1);
      std::swap(all[static_cast<std::size_t>(j)],
                all[static_cast<std::size_t>(pick(mask_rng))]);
    }
    omega.assign(all.begin(), all.begin() + keep);
    std::sort(omega.begin(), omega.end());
    if (keep < full) red.omega = omega;
  }
  const bool masked = !red.omega.empty();
  const Index width = masked ? static_cast<Index>(red.omega.size()) : full;

  auto flatten = [&](const DenseMatrix& moment, Eigen::Ref<Eigen::RowVectorXd> dst) {
    if (masked) {
      for (Index c = 0; c < width; ++c) {
        const Index flat = red.omega[static_cast<std::size_t>(c)];
        dst[c] = moment(flat / pb, flat % pb);
      }
    } else {
      for (Index r = 0; r < pa; ++r) {
        dst.segment(r * pb, pb) = moment.row(r);
      }
    }
  };

  red.x.resize(q + 1, width);
  const double inv_n = 1.0 / static_cast<double>(n);
  DenseMatrix moment = (a.transpose() * b) * inv_n;
  flatten(moment, red.x.row(0));
  for (Index t = 0; t < q; ++t) {
    Vector weights = w * red.etas[static_cast<std::size_t>(t)];
    moment = (a.transpose() * weights.asDiagonal() * b) * inv_n;
    flatten(moment, red.x.row(t + 1));
    // eta's sign is arbitrary; pick the half that turns the weighted moment
    // toward the unweighted one, otherwise the instance loses pointedness
    if (red.x.row(t + 1).dot(red.x.row(0)) < 0.0) {
      red.x.row(t + 1) *= -1.0;
      red.etas[static_cast<std::size_t>(t)] *= -1.0;
    }
  }

  red.y.resize(n, width);
  for (Index t = 0; t < n; ++t) {
    if (masked) {
      for (Index c = 0; c < width; ++c) {
        const Index flat = red.omega[static_cast<std::size_t>(c)];
        red.y(t, c) = a(t, flat / pb) * b(t, flat % pb);
      }
    } else {
      for (Index r = 0; r < pa; ++r) {
        red.y.row(t).segment(r * pb, pb) = a(t, r) * b.row(t);
      }
    }
  }
  return red;
}

}  // namespace

MomentReduction reduce_gmm(const MultiViewData& data, Index q, std::uint64_t seed,
                           std::optional<double> omega_fraction) {
  data.validate();
  return build_moments(data.views[0], data.views[1], data.views[2], q, seed,
                       omega_fraction);
}

MultiViewData hmm_triples(const std::vector<DenseMatrix>& sequences) {
  if (sequences.empty()) {
    throw std::invalid_argument("hmm_triples: no sequences");
  }
  const Index p = sequences.front().cols();
  Index total = 0;
  for (const auto& seq : sequences) {
    require_finite(seq, "sequence");
    if (seq.cols() != p) {
      throw std::invalid_argument("hmm_triples: inconsistent observation dims");
    }
    if (seq.rows() < 3) {
      throw std::invalid_argument("hmm_triples: each sequence needs length >= 3");
    }
    total += seq.rows() - 2;
  }
  MultiViewData data;
  for (int v = 0; v < 3; ++v) data.views[v].resize(total, p);
  Index row = 0;
  for (const auto& seq : sequences) {
    for (Index t = 1; t + 1 < seq.rows(); ++t) {
      data.views[0].row(row) = seq.row(t - 1);
      data.views[1].row(row) = seq.row(t);
      data.views[2].row(row) = seq.row(t + 1);
      ++row;
    }
  }
  return data;
}

MomentReduction reduce_hmm(const std::vector<DenseMatrix>& sequences, Index q,
                           std::uint64_t seed, Index min_triples) {
  MultiViewData triples = hmm_triples(sequences);
  if (triples.samples() < min_triples) {
    throw std::invalid_argument("reduce_hmm: insufficient triples (" +
                                std::to_string(triples.samples()) + " < " +
                                std::to_string(min_triples) + ")");
  }
  // current/next observations paired, previous observation as the weight view
  return build_moments(triples.views[1], triples.views[2], triples.views[0], q,
                       seed, std::nullopt);
}

CooccurrenceMatrix lda_cooccurrence(const DenseMatrix& counts) {
  require_finite(counts, "counts");
  require_nonnegative(counts, "counts");
  const Index p = counts.cols();
  CooccurrenceMatrix out;

  std::vector<Index> used;
  Vector lengths(counts.rows());
  for (Index i = 0; i < counts.rows(); ++i) {
    lengths[i] = counts.row(i).sum();
    if (lengths[i] >= 2.0) {
      used.push_back(i);
    } else {
      ++out.dropped_docs;
    }
  }
  if (used.empty()) {
    throw std::invalid_argument("lda_cooccurrence: no document has length >= 2");
  }

  DenseMatrix xbar(static_cast<Index>(used.size()), p);
  Vector diag = Vector::Zero(p);
  out.doc_lengths.resize(static_cast<Index>(used.size()));
  for (std::size_t r = 0; r < used.size(); ++r) {
    const Index i = used[r];
    const double m = lengths[i];
    const double denom = m * (m - 1.0);
    xbar.row(static_cast<Index>(r)) = counts.row(i) / std::sqrt(denom);
    diag += (counts.row(i) / denom).transpose();
    out.doc_lengths[static_cast<Index>(r)] = m;
  }
  out.q = xbar.transpose() * xbar;
  out.q -= DenseMatrix(diag.asDiagonal());
  // enforce exact symmetry (X'X is symmetric up to rounding)
  out.q = ((out.q + DenseMatrix(out.q.transpose())) / 2.0).eval();
  return out;
}

ConicalHullProblem reduce_lda(const DenseMatrix& counts, Index k) {
  CooccurrenceMatrix co = lda_cooccurrence(counts);
  return ConicalHullProblem::self_referential_problem(std::move(co.q), k);
}

ConicalHullProblem reduce_sc(const DenseMatrix& x, Index k_total) {
  require_finite(x, "X");
  return ConicalHullProblem::self_referential_problem(x, k_total);
}

}  // namespace conehull
