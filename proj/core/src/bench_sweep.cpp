#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

#include "conehull/bench.hpp"
#include "conehull/dca.hpp"
#include "conehull/nnls.hpp"
#include "conehull/oracle.hpp"
#include "conehull/parallel.hpp"
#include "conehull/postprocess.hpp"
#include "conehull/rng.hpp"

namespace conehull::bench {

std::string to_string(Method m) {
  switch (m) {
    case Method::Dca: return "dca";
    case Method::Greedy: return "greedy";
    case Method::BackwardRemoval: return "backward-removal";
  }
  return "dca";
}

std::vector<Index> greedy_anchor_baseline(const DenseMatrix& x,
                                          const DenseMatrix& y, Index k) {
  if (k < 1 || k > y.rows()) throw std::invalid_argument("greedy: bad k");
  // pursuit runs on unit-normalized rows: membership is scale invariant
  DenseMatrix yu = y;
  for (Index i = 0; i < yu.rows(); ++i) {
    const double n = yu.row(i).norm();
    if (n > 0.0) yu.row(i) /= n;
  }
  (void)x;  // selection pool and residual targets coincide (rows of Y)
  std::vector<Index> picked;
  for (Index round = 0; round < k; ++round) {
    DenseMatrix design(yu.cols(), static_cast<Index>(picked.size()));
    for (std::size_t j = 0; j < picked.size(); ++j) {
      design.col(static_cast<Index>(j)) = yu.row(picked[j]).transpose();
    }
    Index best = -1;
    double best_res = -1.0;
    for (Index i = 0; i < yu.rows(); ++i) {
      if (std::find(picked.begin(), picked.end(), i) != picked.end()) continue;
      double res;
      if (picked.empty()) {
        res = yu.row(i).norm();
      } else {
        res = nnls(design, yu.row(i).transpose()).residual;
      }
      if (res > best_res + 1e-15) {
        best_res = res;
        best = i;
      }
    }
    if (best < 0) break;
    picked.push_back(best);
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

std::vector<Index> backward_removal_baseline(const DenseMatrix& x) {
  require_nonnegative(x, "X");
  return simplicial_rows(x, kTolFeas);
}

std::vector<Index> mixture_cluster_centers(const MomentReduction& reduction,
                                           Index k, Index s, std::uint64_t seed,
                                           Index pool_factor) {
  const Index m = reduction.y.rows();
  const Index pool_size = std::min<Index>(m, std::max<Index>(k, pool_factor * k));
  auto problem = reduction.to_problem(pool_size);
  ProjectionPlan plan;
  plan.s = s;
  plan.seed = seed;
  DcaResult r = dca(problem, plan);
  const std::vector<Index>& pool = r.anchors.indices;  // vote-ordered
  if (static_cast<Index>(pool.size()) <= k) return pool;

  DenseMatrix rows(static_cast<Index>(pool.size()), reduction.y.cols());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const double norm = std::max(reduction.y.row(pool[i]).norm(), 1e-300);
    rows.row(static_cast<Index>(i)) = reduction.y.row(pool[i]) / norm;
  }
  std::vector<Index> groups = kmeans_labels(rows, k, mix_seed(seed, 0x6e0a));
  std::vector<Index> centers;
  for (Index g = 0; g < k; ++g) {
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (groups[i] == g) {  // first in vote order = the group's top row
        centers.push_back(pool[i]);
        break;
      }
    }
  }
  return centers;
}

std::vector<Index> nearest_row_labels(const DenseMatrix& data,
                                      const std::vector<Index>& centers) {
  std::vector<Index> labels(static_cast<std::size_t>(data.rows()), 0);
  for (Index i = 0; i < data.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centers.size(); ++c) {
      const double d = (data.row(i) - data.row(centers[c])).squaredNorm();
      if (d < best) {
        best = d;
        labels[static_cast<std::size_t>(i)] = static_cast<Index>(c);
      }
    }
  }
  return labels;
}

namespace {

struct Accumulator {
  double sum = 0.0, sum_sq = 0.0;
  Index count = 0;
  void add(double v) {
    sum += v;
    sum_sq += v * v;
    ++count;
  }
  double mean() const { return count ? sum / count : 0.0; }
  double stddev() const {
    if (count < 2) return 0.0;
    const double m = mean();
    return std::sqrt(std::max(0.0, sum_sq / count - m * m));
  }
};

Index default_q(Index k) {
  return std::max<Index>(2, (k + 3) / 4 + 1);
}

MetricReport run_one(const SyntheticInstance& inst, Method method, Index s,
                     std::uint64_t run_seed) {
  const SyntheticSpec& spec = inst.spec;
  MetricReport report;
  const auto start = std::chrono::steady_clock::now();

  std::vector<Index> anchors;
  ProjectionPlan plan;
  plan.seed = mix_seed(run_seed, 0x97a9);
  plan.s = s > 0 ? s : default_subproblem_count(spec.k);

  switch (spec.kind) {
    case SyntheticKind::SeparableNMF: {
      if (method == Method::Dca) {
        auto problem = ConicalHullProblem::self_referential_problem(inst.data, spec.k);
        anchors = dca(problem, plan).anchors.indices;
      } else if (method == Method::Greedy) {
        anchors = greedy_anchor_baseline(inst.data, inst.data, spec.k);
      } else {
        // noisy instances may dip below zero; clamp for the nonneg baseline
        anchors = backward_removal_baseline(inst.data.cwiseMax(0.0));
      }
      report.anchor_accuracy = anchor_accuracy(inst.truth.anchors, anchors, spec.k);
      break;
    }
    case SyntheticKind::GmmGrid: {
      MomentReduction red = reduce_gmm(*inst.views, default_q(spec.k),
                                       mix_seed(run_seed, 0x6e));
      if (method == Method::Dca) {
        anchors = mixture_cluster_centers(red, spec.k, plan.s, plan.seed);
      } else if (method == Method::Greedy) {
        anchors = greedy_anchor_baseline(red.x, red.y, spec.k);
      } else {
        throw std::runtime_error("backward removal does not apply to GMM");
      }
      report.anchor_accuracy = anchor_accuracy(inst.truth.anchors, anchors, spec.k);
      auto labels = nearest_row_labels(inst.data, anchors);
      report.clustering_accuracy = clustering_accuracy(inst.truth.labels, labels);
      report.mutual_information = mutual_information(inst.truth.labels, labels);
      report.rand_index = rand_index(inst.truth.labels, labels);
      break;
    }
    case SyntheticKind::ScGrid: {
      if (method != Method::Dca) {
        throw std::runtime_error("only DCA applies to the SC suite");
      }
      ScClusters clusters = cluster_anchors_sc(inst.data, plan, spec.k * spec.rays_per_cone);
      anchors = clusters.anchors;
      report.anchor_accuracy =
          anchor_accuracy(inst.truth.anchors, anchors,
                          static_cast<Index>(inst.truth.anchors.size()));
      report.clustering_accuracy =
          clustering_accuracy(inst.truth.labels, clusters.labels);
      report.mutual_information =
          mutual_information(inst.truth.labels, clusters.labels);
      report.rand_index = rand_index(inst.truth.labels, clusters.labels);
      break;
    }
    case SyntheticKind::HmmChain: {
      MomentReduction red = reduce_hmm({inst.data}, default_q(spec.k),
                                       mix_seed(run_seed, 0x4d), spec.k);
      if (method == Method::Dca) {
        anchors = mixture_cluster_centers(red, spec.k, plan.s, plan.seed);
      } else if (method == Method::Greedy) {
        anchors = greedy_anchor_baseline(red.x, red.y, spec.k);
      } else {
        throw std::runtime_error("backward removal does not apply to HMM");
      }
      // anchors index triples; score state recovery via the current-view rows
      MultiViewData triples = hmm_triples({inst.data});
      DenseMatrix emissions(static_cast<Index>(anchors.size()), spec.p);
      for (std::size_t j = 0; j < anchors.size(); ++j) {
        emissions.row(static_cast<Index>(j)) = triples.views[1].row(anchors[j]);
      }
      std::vector<Index> state_labels(static_cast<std::size_t>(inst.data.rows()), 0);
      for (Index i = 0; i < inst.data.rows(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (Index c = 0; c < emissions.rows(); ++c) {
          const double d = (inst.data.row(i) - emissions.row(c)).squaredNorm();
          if (d < best) {
            best = d;
            state_labels[static_cast<std::size_t>(i)] = c;
          }
        }
      }
      report.clustering_accuracy =
          clustering_accuracy(inst.truth.labels, state_labels);
      // recovery error of emission means against the planted columns
      DenseMatrix truth_rows = inst.truth.parameters.transpose();  // k x p
      DenseMatrix stacked(truth_rows.rows() + emissions.rows(), spec.p);
      stacked.topRows(truth_rows.rows()) = truth_rows;
      stacked.bottomRows(emissions.rows()) = emissions;
      std::vector<Index> t_idx, e_idx;
      for (Index i = 0; i < truth_rows.rows(); ++i) t_idx.push_back(i);
      for (Index i = 0; i < emissions.rows(); ++i)
        e_idx.push_back(truth_rows.rows() + i);
      report.recovery_error = anchor_recovery_error(stacked, t_idx, e_idx);
      break;
    }
    case SyntheticKind::LdaCorpus: {
      auto problem = reduce_lda(inst.data, spec.k);
      if (method == Method::Dca) {
        anchors = dca(problem, plan).anchors.indices;
      } else if (method == Method::Greedy) {
        anchors = greedy_anchor_baseline(problem.x(), problem.x(), spec.k);
      } else {
        anchors = backward_removal_baseline(problem.x().cwiseMax(0.0));
      }
      report.anchor_accuracy = anchor_accuracy(inst.truth.anchors, anchors, spec.k);
      if (method == Method::Dca &&
          static_cast<Index>(anchors.size()) == spec.k) {
        CoefficientSolve f = solve_coefficients(
            problem.x(), problem.x(), anchors,
            CoefficientConstraint::NonNegAnchorsFixed);
        LdaParams params = recover_lda_params(f.f, problem.x(), 1.0);
        report.recovery_error = topic_l1_error(inst.truth.parameters, params.o);
      }
      break;
    }
  }

  if (!inst.truth.anchors.empty() && !anchors.empty()) {
    std::set<Index> t(inst.truth.anchors.begin(), inst.truth.anchors.end());
    Index hit = 0;
    for (Index a : anchors) {
      if (t.count(a)) ++hit;
    }
    report.anchor_precision =
        static_cast<double>(hit) / static_cast<double>(anchors.size());
    report.anchor_recall =
        static_cast<double>(hit) / static_cast<double>(inst.truth.anchors.size());
    if (spec.kind != SyntheticKind::HmmChain &&
        spec.kind != SyntheticKind::LdaCorpus) {
      report.recovery_error =
          anchor_recovery_error(inst.data, inst.truth.anchors, anchors);
    }
  }

  const auto stop = std::chrono::steady_clock::now();
  report.wall_time_ms =
      std::chrono::duration<double, std::milli>(stop - start).count();
  return report;
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

}  // namespace

SweepResult run_sweep(const std::vector<SyntheticSpec>& specs,
                      const std::vector<Method>& methods,
                      const std::vector<Index>& s_values, Index seeds) {
  if (seeds < 1) throw std::invalid_argument("run_sweep: seeds >= 1");
  std::vector<SweepCell> cells;
  for (const auto& spec : specs) {
    for (Method m : methods) {
      for (Index s : s_values) {
        cells.push_back({spec, m, s});
      }
    }
  }

  SweepResult result;
  result.rows.resize(cells.size());
  parallel_for(cells.size(), [&](std::size_t c) {
    const SweepCell& cell = cells[c];
    SweepRow row;
    row.cell = cell;
    row.seeds = seeds;
    Accumulator acc_acc, prec, rec, err, clu, mi, ri, wall;
    for (Index trial = 0; trial < seeds; ++trial) {
      SyntheticSpec spec = cell.spec;
      spec.seed = mix_seed(cell.spec.seed, static_cast<std::uint64_t>(trial));
      try {
        SyntheticInstance inst = generate(spec);
        MetricReport rep = run_one(inst, cell.method, cell.s, spec.seed);
        acc_acc.add(rep.anchor_accuracy);
        prec.add(rep.anchor_precision);
        rec.add(rep.anchor_recall);
        err.add(rep.recovery_error);
        if (rep.clustering_accuracy) clu.add(*rep.clustering_accuracy);
        if (rep.mutual_information) mi.add(*rep.mutual_information);
        if (rep.rand_index) ri.add(*rep.rand_index);
        wall.add(rep.wall_time_ms);
      } catch (const std::exception&) {
        ++row.failures;
      }
    }
    row.mean.anchor_accuracy = acc_acc.mean();
    row.mean.anchor_precision = prec.mean();
    row.mean.anchor_recall = rec.mean();
    row.mean.recovery_error = err.mean();
    if (clu.count) row.mean.clustering_accuracy = clu.mean();
    if (mi.count) row.mean.mutual_information = mi.mean();
    if (ri.count) row.mean.rand_index = ri.mean();
    row.mean.wall_time_ms = wall.mean();
    row.stddev.anchor_accuracy = acc_acc.stddev();
    row.stddev.anchor_precision = prec.stddev();
    row.stddev.anchor_recall = rec.stddev();
    row.stddev.recovery_error = err.stddev();
    if (clu.count) row.stddev.clustering_accuracy = clu.stddev();
    if (mi.count) row.stddev.mutual_information = mi.stddev();
    if (ri.count) row.stddev.rand_index = ri.stddev();
    row.stddev.wall_time_ms = wall.stddev();
    result.rows[c] = std::move(row);
  });

  // deterministic metric CSV; wall times go to the separate timing sidecar
  // so repeated runs with one seed emit identical bytes
  std::ostringstream csv, timings;
  csv << "# noise model: additive gaussian, sigma = level * mean(|X|) for nmf; "
         "per-coordinate sigma = level elsewhere\n";
  const char* key_header =
      "kind,n,p,k,noise,variance,span_angle_deg,method,s,seeds,failures";
  csv << key_header
      << ",anchor_accuracy_mean,anchor_accuracy_std,anchor_precision_mean,"
         "anchor_precision_std,anchor_recall_mean,anchor_recall_std,"
         "recovery_error_mean,recovery_error_std,clustering_accuracy_mean,"
         "clustering_accuracy_std,mutual_information_mean,"
         "mutual_information_std,rand_index_mean,rand_index_std\n";
  timings << key_header << ",wall_time_ms_mean,wall_time_ms_std\n";
  for (const auto& row : result.rows) {
    std::ostringstream key;
    key << to_string(row.cell.spec.kind) << ',' << row.cell.spec.n << ','
        << row.cell.spec.p << ',' << row.cell.spec.k << ','
        << format_double(row.cell.spec.noise) << ','
        << format_double(row.cell.spec.variance) << ','
        << format_double(row.cell.spec.span_angle_deg) << ','
        << to_string(row.cell.method) << ',' << row.cell.s << ',' << row.seeds
        << ',' << row.failures;
    auto opt = [&](const std::optional<double>& v) {
      return v ? format_double(*v) : std::string();
    };
    csv << key.str() << ',' << format_double(row.mean.anchor_accuracy) << ','
        << format_double(row.stddev.anchor_accuracy) << ','
        << format_double(row.mean.anchor_precision) << ','
        << format_double(row.stddev.anchor_precision) << ','
        << format_double(row.mean.anchor_recall) << ','
        << format_double(row.stddev.anchor_recall) << ','
        << format_double(row.mean.recovery_error) << ','
        << format_double(row.stddev.recovery_error) << ','
        << opt(row.mean.clustering_accuracy) << ','
        << opt(row.stddev.clustering_accuracy) << ','
        << opt(row.mean.mutual_information) << ','
        << opt(row.stddev.mutual_information) << ','
        << opt(row.mean.rand_index) << ',' << opt(row.stddev.rand_index) << '\n';
    timings << key.str() << ',' << format_double(row.mean.wall_time_ms) << ','
            << format_double(row.stddev.wall_time_ms) << '\n';
  }
  result.csv = csv.str();
  result.timings_csv = timings.str();
  return result;
}

}  // namespace conehull::bench
