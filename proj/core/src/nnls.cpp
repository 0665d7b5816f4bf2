#include "conehull/nnls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace conehull {

namespace {

Vector solve_lsq(const DenseMatrix& a, const Vector& b,
                 const std::vector<Index>& cols) {
  DenseMatrix sub(a.rows(), static_cast<Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) sub.col(j) = a.col(cols[j]);
  return sub.colPivHouseholderQr().solve(b);
}

}  // namespace

NnlsResult nnls(const DenseMatrix& a, const Vector& b, int max_iter, double tol) {
  const Index n = a.cols();
  if (a.rows() != b.size()) {
    throw std::invalid_argument("nnls: dimension mismatch");
  }
  if (max_iter <= 0) max_iter = static_cast<int>(10 * std::max<Index>(n, 1));

  NnlsResult result;
  result.x = Vector::Zero(n);
  std::vector<char> passive(n, 0);
  std::vector<Index> passive_list;

  const double grad_scale = std::max(1.0, (a.transpose() * b).cwiseAbs().maxCoeff());
  Vector w = a.transpose() * b;  // gradient at x = 0

  int outer = 0;
  while (outer < max_iter) {
    // most positive gradient among active (zero-bound) variables
    Index best = -1;
    double best_w = tol * grad_scale;
    for (Index j = 0; j < n; ++j) {
      if (!passive[j] && w[j] > best_w) {
        best_w = w[j];
        best = j;
      }
    }
    if (best < 0) break;  // KKT satisfied
    ++outer;
    passive[best] = 1;
    passive_list.push_back(best);

    int inner_guard = 0;
    while (true) {
      Vector z = solve_lsq(a, b, passive_list);
      double z_min = std::numeric_limits<double>::infinity();
      for (Index i = 0; i < z.size(); ++i) z_min = std::min(z_min, z[i]);
      if (z_min > 0.0) {
        result.x.setZero();
        for (std::size_t i = 0; i < passive_list.size(); ++i) {
          result.x[passive_list[i]] = z[i];
        }
        break;
      }
      // step toward z until the first passive variable hits zero
      double alpha = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < passive_list.size(); ++i) {
        if (z[i] <= 0.0) {
          const double xi = result.x[passive_list[i]];
          alpha = std::min(alpha, xi / (xi - z[i]));
        }
      }
      if (!std::isfinite(alpha)) alpha = 0.0;
      for (std::size_t i = 0; i < passive_list.size(); ++i) {
        const Index j = passive_list[i];
        result.x[j] += alpha * (z[i] - result.x[j]);
      }
      std::vector<Index> keep;
      keep.reserve(passive_list.size());
      for (Index j : passive_list) {
        if (result.x[j] > 1e-14) {
          keep.push_back(j);
        } else {
          result.x[j] = 0.0;
          passive[j] = 0;
        }
      }
      passive_list = std::move(keep);
      if (passive_list.empty()) break;
      if (++inner_guard > static_cast<int>(2 * n + 4)) break;  // anti-cycling
    }

    w = a.transpose() * (b - a * result.x);
  }

  result.iterations = outer;
  result.converged = outer < max_iter;
  result.residual = (a * result.x - b).norm();
  return result;
}

NnlsResult simplex_constrained_lsq(const DenseMatrix& a, const Vector& b) {
  const Index k = a.cols();
  if (k < 1 || k > 16) {
    throw std::invalid_argument("simplex_constrained_lsq: need 1 <= cols <= 16");
  }
  NnlsResult best;
  best.residual = std::numeric_limits<double>::infinity();
  best.converged = false;

  // The optimum's support yields a feasible equality-constrained minimizer,
  // so scanning all supports and keeping the best feasible one is exact.
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
    std::vector<Index> cols;
    for (Index j = 0; j < k; ++j) {
      if (mask & (1u << j)) cols.push_back(j);
    }
    const Index r = static_cast<Index>(cols.size());
    DenseMatrix kkt(r + 1, r + 1);
    Vector rhs(r + 1);
    DenseMatrix sub(a.rows(), r);
    for (Index j = 0; j < r; ++j) sub.col(j) = a.col(cols[j]);
    kkt.topLeftCorner(r, r) = sub.transpose() * sub;
    kkt.topRightCorner(r, 1).setOnes();
    kkt.bottomLeftCorner(1, r).setOnes();
    kkt(r, r) = 0.0;
    rhs.head(r) = sub.transpose() * b;
    rhs[r] = 1.0;
    Vector sol = kkt.colPivHouseholderQr().solve(rhs);
    bool feasible = true;
    for (Index j = 0; j < r; ++j) {
      if (sol[j] < -1e-12) feasible = false;
    }
    if (!feasible) continue;
    Vector x = Vector::Zero(k);
    for (Index j = 0; j < r; ++j) x[cols[j]] = std::max(0.0, sol[j]);
    const double sum = x.sum();
    if (sum > 0.0) x /= sum;  // renormalize away clipping dust
    const double res = (a * x - b).norm();
    if (res < best.residual - 1e-15) {
      best.residual = res;
      best.x = x;
      best.converged = true;
    }
  }
  if (!best.converged) {
    throw std::runtime_error("simplex_constrained_lsq: no feasible support");
  }
  return best;
}

}  // namespace conehull
