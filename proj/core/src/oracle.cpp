#include "conehull/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "conehull/geometry.hpp"
#include "conehull/nnls.hpp"

namespace conehull {

namespace {

DenseMatrix unit_rows(const DenseMatrix& m) {
  DenseMatrix out = m;
  for (Index i = 0; i < out.rows(); ++i) {
    const double n = out.row(i).norm();
    if (n > 0.0) out.row(i) /= n;
  }
  return out;
}

// Cone membership is scale invariant, so feasibility is tested on
// unit-normalized rows with an absolute residual threshold.
bool covers_rows(const DenseMatrix& xu, const DenseMatrix& yu,
                 const std::vector<Index>& subset, double tol) {
  DenseMatrix design(yu.cols(), static_cast<Index>(subset.size()));
  for (std::size_t j = 0; j < subset.size(); ++j) {
    design.col(static_cast<Index>(j)) = yu.row(subset[j]).transpose();
  }
  for (Index i = 0; i < xu.rows(); ++i) {
    if (xu.row(i).norm() < kTolZero) continue;  // zero row, trivially covered
    NnlsResult r = nnls(design, xu.row(i).transpose(), /*max_iter=*/0, 1e-12);
    if (r.residual > tol) return false;
  }
  return true;
}

double angle_between_units(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b) {
  const double c = std::clamp(a.dot(b), -1.0, 1.0);
  return std::acos(c);
}

// Tightness score of a cover: each generator's angular distance to the
// nearest covered point. Smaller is tighter; matches the 2D solver's
// closest-from-outside picks.
double cover_score(const DenseMatrix& xu, const DenseMatrix& yu,
                   const std::vector<Index>& subset) {
  double score = 0.0;
  for (Index j : subset) {
    double best = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < xu.rows(); ++i) {
      if (xu.row(i).norm() < kTolZero) continue;
      best = std::min(best, angle_between_units(xu.row(i), yu.row(j)));
    }
    if (std::isfinite(best)) score += best;
  }
  return score;
}

std::vector<Index> simplicial_rows_normalized(const DenseMatrix& xu, double tol) {
  std::vector<Index> alive;
  for (Index i = 0; i < xu.rows(); ++i) {
    if (xu.row(i).norm() >= kTolZero) alive.push_back(i);
  }
  bool removed = true;
  while (removed && alive.size() > 1) {
    removed = false;
    for (std::size_t pos = 0; pos < alive.size(); ++pos) {
      std::vector<Index> rest;
      rest.reserve(alive.size() - 1);
      for (std::size_t q = 0; q < alive.size(); ++q) {
        if (q != pos) rest.push_back(alive[q]);
      }
      DenseMatrix design(xu.cols(), static_cast<Index>(rest.size()));
      for (std::size_t j = 0; j < rest.size(); ++j) {
        design.col(static_cast<Index>(j)) = xu.row(rest[j]).transpose();
      }
      NnlsResult r = nnls(design, xu.row(alive[pos]).transpose(), 0, 1e-12);
      if (r.residual <= tol) {
        alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(pos));
        removed = true;
        break;
      }
    }
  }
  return alive;
}

bool next_combination(std::vector<Index>& c, Index m) {
  const Index r = static_cast<Index>(c.size());
  for (Index i = r - 1; i >= 0; --i) {
    if (c[i] < m - (r - i)) {
      ++c[i];
      for (Index j = i + 1; j < r; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

bool cone_covers(const DenseMatrix& x, const DenseMatrix& y, double tol) {
  std::vector<Index> all(y.rows());
  for (Index i = 0; i < y.rows(); ++i) all[i] = i;
  return covers_rows(unit_rows(x), unit_rows(y), all, tol);
}

std::vector<Index> simplicial_rows(const DenseMatrix& x, double tol) {
  return simplicial_rows_normalized(unit_rows(x), tol);
}

std::vector<Index> brute_force_mch(const DenseMatrix& x, const DenseMatrix& y) {
  if (x.cols() != y.cols()) {
    throw std::invalid_argument("brute_force_mch: dimension mismatch");
  }
  if (x.rows() > 30 || y.rows() > 30) {
    throw std::invalid_argument("brute_force_mch: oracle scale is 30 rows");
  }
  const DenseMatrix xu = unit_rows(x);
  const DenseMatrix yu = unit_rows(y);
  const Index m = y.rows();

  std::vector<Index> full(m);
  for (Index i = 0; i < m; ++i) full[i] = i;
  if (!covers_rows(xu, yu, full, kTolFeas)) {
    throw std::runtime_error("brute_force_mch: no subset of Y covers X");
  }

  // Self-referential instances: backward removal finds the unique extreme
  // rays directly, which keeps large planted instances tractable.
  if (x.rows() == y.rows() && x == y) {
    return simplicial_rows_normalized(xu, kTolFeas);
  }

  constexpr Index kMaxCover = 8;
  for (Index r = 1; r <= std::min(m, kMaxCover); ++r) {
    std::vector<Index> combo(r);
    for (Index i = 0; i < r; ++i) combo[i] = i;
    std::vector<Index> best;
    double best_score = std::numeric_limits<double>::infinity();
    do {
      if (!covers_rows(xu, yu, combo, kTolFeas)) continue;
      const double score = cover_score(xu, yu, combo);
      // strict improvement keeps the lexicographically first on exact ties
      if (score < best_score) {
        best_score = score;
        best = combo;
      }
    } while (next_combination(combo, m));
    if (!best.empty()) return best;
  }
  throw std::runtime_error("brute_force_mch: minimal cover exceeds supported size");
}

}  // namespace conehull
