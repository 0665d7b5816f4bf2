#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <vector>

#include "conehull/bench.hpp"

namespace conehull::bench {

namespace {

// Hungarian algorithm (potentials form), min-cost assignment of rows to
// columns; rows must not exceed columns. Returns the chosen column per row.
std::vector<Index> hungarian_min(const DenseMatrix& cost) {
  const Index n = cost.rows(), m = cost.cols();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<Index> p(m + 1, 0), way(m + 1, 0);
  for (Index i = 1; i <= n; ++i) {
    p[0] = i;
    Index j0 = 0;
    std::vector<double> minv(m + 1, std::numeric_limits<double>::infinity());
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const Index i0 = p[j0];
      double delta = std::numeric_limits<double>::infinity();
      Index j1 = 0;
      for (Index j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (Index j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const Index j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<Index> match(n, -1);
  for (Index j = 1; j <= m; ++j) {
    if (p[j] > 0) match[p[j] - 1] = j - 1;
  }
  return match;
}

DenseMatrix contingency(const std::vector<Index>& truth,
                        const std::vector<Index>& estimate) {
  if (truth.size() != estimate.size() || truth.empty()) {
    throw std::invalid_argument("label arrays must be non-empty and equal length");
  }
  const Index kt = 1 + *std::max_element(truth.begin(), truth.end());
  const Index ke = 1 + *std::max_element(estimate.begin(), estimate.end());
  DenseMatrix c = DenseMatrix::Zero(kt, ke);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    c(truth[i], estimate[i]) += 1.0;
  }
  return c;
}

}  // namespace

double clustering_accuracy(const std::vector<Index>& truth,
                           const std::vector<Index>& estimate) {
  DenseMatrix c = contingency(truth, estimate);
  const Index side = std::max(c.rows(), c.cols());
  DenseMatrix cost = DenseMatrix::Zero(side, side);
  cost.topLeftCorner(c.rows(), c.cols()) = -c;  // maximize matched counts
  std::vector<Index> match = hungarian_min(cost);
  double hit = 0.0;
  for (Index i = 0; i < c.rows(); ++i) {
    if (match[i] < c.cols()) hit += c(i, match[i]);
  }
  return hit / static_cast<double>(truth.size());
}

double mutual_information(const std::vector<Index>& truth,
                          const std::vector<Index>& estimate) {
  DenseMatrix c = contingency(truth, estimate);
  const double n = static_cast<double>(truth.size());
  Vector rows = c.rowwise().sum();
  Vector cols = c.colwise().sum();
  double mi = 0.0;
  for (Index i = 0; i < c.rows(); ++i) {
    for (Index j = 0; j < c.cols(); ++j) {
      if (c(i, j) <= 0.0) continue;
      mi += (c(i, j) / n) * std::log(c(i, j) * n / (rows[i] * cols[j]));
    }
  }
  return mi;
}

double rand_index(const std::vector<Index>& truth,
                  const std::vector<Index>& estimate) {
  DenseMatrix c = contingency(truth, estimate);
  const double n = static_cast<double>(truth.size());
  auto choose2 = [](double x) { return x * (x - 1.0) / 2.0; };
  double sum_cells = 0.0;
  for (Index i = 0; i < c.rows(); ++i)
    for (Index j = 0; j < c.cols(); ++j) sum_cells += choose2(c(i, j));
  double sum_rows = 0.0, sum_cols = 0.0;
  for (Index i = 0; i < c.rows(); ++i) sum_rows += choose2(c.row(i).sum());
  for (Index j = 0; j < c.cols(); ++j) sum_cols += choose2(c.col(j).sum());
  const double total = choose2(n);
  if (total <= 0.0) return 1.0;
  return (total + 2.0 * sum_cells - sum_rows - sum_cols) / total;
}

double anchor_accuracy(const std::vector<Index>& truth,
                       const std::vector<Index>& estimate, Index k) {
  std::set<Index> t(truth.begin(), truth.end());
  Index hit = 0;
  for (Index e : estimate) {
    if (t.count(e)) ++hit;
  }
  return static_cast<double>(hit) / static_cast<double>(std::max<Index>(1, k));
}

double anchor_recovery_error(const DenseMatrix& y,
                             const std::vector<Index>& truth,
                             const std::vector<Index>& estimate) {
  if (truth.empty() || estimate.empty()) return 1.0;
  const Index rows = static_cast<Index>(truth.size());
  const Index cols = static_cast<Index>(estimate.size());
  // pad so every true anchor can stay unmatched at full penalty if needed
  const Index side = std::max(rows, cols);
  DenseMatrix cost = DenseMatrix::Constant(side, side, 1.0);
  for (Index i = 0; i < rows; ++i) {
    const double tn = std::max(y.row(truth[static_cast<std::size_t>(i)]).norm(),
                               1e-300);
    for (Index j = 0; j < cols; ++j) {
      cost(i, j) = (y.row(truth[static_cast<std::size_t>(i)]) -
                    y.row(estimate[static_cast<std::size_t>(j)]))
                       .norm() /
                   tn;
    }
  }
  std::vector<Index> match = hungarian_min(cost);
  double total = 0.0;
  for (Index i = 0; i < rows; ++i) {
    total += match[i] >= 0 ? cost(i, match[i]) : 1.0;
  }
  return total / static_cast<double>(rows);
}

double topic_l1_error(const DenseMatrix& truth, const DenseMatrix& estimate) {
  if (truth.cols() != estimate.cols() || truth.rows() != estimate.rows()) {
    throw std::invalid_argument("topic_l1_error: shape mismatch");
  }
  const Index k = truth.cols();
  DenseMatrix cost(k, k);
  for (Index a = 0; a < k; ++a) {
    for (Index b = 0; b < k; ++b) {
      cost(a, b) = (truth.col(a) - estimate.col(b)).cwiseAbs().sum();
    }
  }
  std::vector<Index> match = hungarian_min(cost);
  double total = 0.0;
  for (Index a = 0; a < k; ++a) total += cost(a, match[a]);
  return total / static_cast<double>(k);
}

}  // namespace conehull::bench
