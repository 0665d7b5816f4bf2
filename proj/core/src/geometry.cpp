#include "conehull/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "conehull/rng.hpp"

namespace conehull {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_two_pi(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  return a;
}

// wrap into (-pi, pi]
double wrap_pi(double a) {
  a = std::fmod(a, kTwoPi);
  if (a <= -kPi) a += kTwoPi;
  if (a > kPi) a -= kTwoPi;
  return a;
}

}  // namespace

std::string to_string(Ensemble e) {
  switch (e) {
    case Ensemble::Gaussian: return "gaussian";
    case Ensemble::UnitAxes: return "unit-axes";
    case Ensemble::DataRows: return "data-rows";
    case Ensemble::SparseSign: return "sparse-sign";
  }
  return "gaussian";
}

Ensemble ensemble_from_string(const std::string& s) {
  if (s == "gaussian") return Ensemble::Gaussian;
  if (s == "unit-axes") return Ensemble::UnitAxes;
  if (s == "data-rows") return Ensemble::DataRows;
  if (s == "sparse-sign") return Ensemble::SparseSign;
  throw std::invalid_argument("unknown ensemble: " + s);
}

ConicalHullProblem::ConicalHullProblem(DenseMatrix x, DenseMatrix y, Index k,
                                       bool self_ref)
    : x_(std::move(x)), y_(std::move(y)), k_(k), self_referential_(self_ref) {}

ConicalHullProblem ConicalHullProblem::self_referential_problem(DenseMatrix x,
                                                                Index k) {
  require_finite(x, "X");
  if (x.rows() == 0 || x.cols() == 0) {
    throw std::invalid_argument("X must be non-empty");
  }
  if (k < 1 || k > x.rows()) {
    throw std::invalid_argument("k must satisfy 1 <= k <= rows(Y)");
  }
  return ConicalHullProblem(std::move(x), DenseMatrix(), k, true);
}

ConicalHullProblem ConicalHullProblem::general_problem(DenseMatrix x,
                                                       DenseMatrix y, Index k) {
  require_finite(x, "X");
  require_finite(y, "Y");
  if (x.rows() == 0 || y.rows() == 0) {
    throw std::invalid_argument("X and Y must be non-empty");
  }
  if (x.cols() != y.cols()) {
    throw std::invalid_argument("X and Y must share the ambient dimension");
  }
  if (k < 1 || k > y.rows()) {
    throw std::invalid_argument("k must satisfy 1 <= k <= rows(Y)");
  }
  // Duplicate-ray check: two rows that are positive multiples of each other
  // (angle below kTolDuplicateRay) make the anchor set ambiguous. The angle
  // comparison runs on chord distance of unit rows: cos(1e-10) is not
  // representable away from 1.0, the chord is.
  const Index m = y.rows();
  Vector norms(m);
  for (Index i = 0; i < m; ++i) norms[i] = y.row(i).norm();
  DenseMatrix normalized = y;
  for (Index i = 0; i < m; ++i) {
    if (norms[i] > 0.0) normalized.row(i) /= norms[i];
  }
  DenseMatrix gram = normalized * normalized.transpose();
  for (Index i = 0; i < m; ++i) {
    for (Index j = i + 1; j < m; ++j) {
      if (norms[i] <= 0.0 || norms[j] <= 0.0) continue;
      if (gram(i, j) < 1.0 - 1e-12) continue;  // cheap pre-filter
      const double chord = (normalized.row(i) - normalized.row(j)).norm();
      if (chord < kTolDuplicateRay) {
        throw std::invalid_argument(
            "Y rows " + std::to_string(i) + " and " + std::to_string(j) +
            " are positive scalar multiples of each other");
      }
    }
  }
  return ConicalHullProblem(std::move(x), std::move(y), k, false);
}

DenseMatrix draw_projection(const ProjectionPlan& plan, Index t, Index p,
                            const DenseMatrix* data) {
  if (t < 0 || t >= plan.s) {
    throw std::invalid_argument("sub-problem index out of range");
  }
  if (plan.d < 1 || plan.d > p) {
    throw std::invalid_argument("invalid plan: need 1 <= d <= p");
  }
  auto rng = make_rng(plan.seed, static_cast<std::uint64_t>(t));
  DenseMatrix phi(p, plan.d);
  switch (plan.ensemble) {
    case Ensemble::Gaussian: {
      std::normal_distribution<double> normal(0.0, 1.0);
      for (Index i = 0; i < p; ++i)
        for (Index j = 0; j < plan.d; ++j) phi(i, j) = normal(rng);
      break;
    }
    case Ensemble::UnitAxes: {
      // d distinct axes via partial Fisher-Yates over [0, p)
      std::vector<Index> idx(p);
      for (Index i = 0; i < p; ++i) idx[i] = i;
      phi.setZero();
      for (Index j = 0; j < plan.d; ++j) {
        std::uniform_int_distribution<Index> pick(j, p - 1);
        std::swap(idx[j], idx[pick(rng)]);
        phi(idx[j], j) = 1.0;
      }
      break;
    }
    case Ensemble::SparseSign: {
      // {-1, 0, +1} with P(+1) = P(-1) = 1/6, density 1/3
      std::uniform_real_distribution<double> u(0.0, 1.0);
      for (Index i = 0; i < p; ++i) {
        for (Index j = 0; j < plan.d; ++j) {
          const double v = u(rng);
          phi(i, j) = v < 1.0 / 6.0 ? 1.0 : (v < 1.0 / 3.0 ? -1.0 : 0.0);
        }
      }
      break;
    }
    case Ensemble::DataRows: {
      if (data == nullptr || data->rows() < plan.d) {
        throw std::invalid_argument("data-rows ensemble needs at least d data rows");
      }
      if (data->cols() != p) {
        throw std::invalid_argument("data-rows ensemble: dimension mismatch");
      }
      std::vector<Index> idx(data->rows());
      for (Index i = 0; i < data->rows(); ++i) idx[i] = i;
      for (Index j = 0; j < plan.d; ++j) {
        std::uniform_int_distribution<Index> pick(j, data->rows() - 1);
        std::swap(idx[j], idx[pick(rng)]);
        phi.col(j) = data->row(idx[j]).transpose();
      }
      break;
    }
  }
  return phi;
}

AngleArray project_angles(const DenseMatrix& m, const DenseMatrix& phi) {
  if (phi.cols() != 2) {
    throw std::invalid_argument("project_angles: phi must have two columns");
  }
  if (m.cols() != phi.rows()) {
    throw std::invalid_argument("project_angles: dimension mismatch");
  }
  DenseMatrix projected = m * phi;
  AngleArray out;
  out.values.resize(projected.rows());
  out.degenerate.assign(projected.rows(), 0);
  for (Index i = 0; i < projected.rows(); ++i) {
    const double x = projected(i, 0);
    const double y = projected(i, 1);
    if (std::hypot(x, y) < kTolZero) {
      out.values[i] = 0.0;
      out.degenerate[i] = 1;
    } else {
      out.values[i] = wrap_two_pi(std::atan2(y, x));
    }
  }
  return out;
}

PointednessFrame pointedness_frame(const AngleArray& reference) {
  PointednessFrame frame;
  double c = 0.0, s = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    if (reference.is_degenerate(i)) continue;
    c += std::cos(reference.values[i]);
    s += std::sin(reference.values[i]);
    ++count;
  }
  if (count == 0 || std::hypot(c, s) < 1e-12 * static_cast<double>(count)) {
    return frame;  // no usable mean direction
  }
  frame.mean = std::atan2(s, c);
  frame.valid = true;
  return frame;
}

double PointednessFrame::coord(double angle) const {
  // (-pi/2, 3pi/2], with the reference circular mean at pi/2
  return kPi / 2.0 + wrap_pi(angle - mean);
}

Anchor2dResult anchor_2d(const AngleArray& xp, const AngleArray& yp) {
  if (xp.size() == 0 || yp.size() == 0) {
    throw std::invalid_argument("anchor_2d: empty angle array");
  }
  Anchor2dResult result;
  const PointednessFrame frame = pointedness_frame(xp);
  if (!frame.valid) {
    result.discarded = true;
    return result;
  }

  double x_min = std::numeric_limits<double>::infinity();
  double x_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < xp.size(); ++i) {
    if (xp.is_degenerate(i)) continue;
    const double c = frame.coord(xp.values[i]);
    x_min = std::min(x_min, c);
    x_max = std::max(x_max, c);
  }
  if (!std::isfinite(x_min)) {  // every X row degenerate
    result.discarded = true;
    return result;
  }
  if (x_max - x_min >= kPi) {  // projected X cone not pointed
    result.discarded = true;
    return result;
  }

  // Eq.-style picks: nearest Y at or above the X max, nearest at or below
  // the X min. (x)_+ semantics: negative differences are out of range.
  // kTolZero of slack keeps rays that are exactly aligned with an X row in
  // range despite atan2 rounding.
  Index upper = -1, lower = -1;
  double upper_gap = std::numeric_limits<double>::infinity();
  double lower_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < yp.size(); ++i) {
    if (yp.is_degenerate(i)) continue;
    const double c = frame.coord(yp.values[i]);
    const double up = c - x_max;
    if (up >= -kTolZero && up < upper_gap) {
      upper_gap = up;
      upper = static_cast<Index>(i);
    }
    const double down = x_min - c;
    if (down >= -kTolZero && down < lower_gap) {
      lower_gap = down;
      lower = static_cast<Index>(i);
    }
  }

  if (upper < 0 || lower < 0) result.coverage_violation = true;
  if (upper >= 0) result.indices.push_back(upper);
  if (lower >= 0 && lower != upper) result.indices.push_back(lower);
  std::sort(result.indices.begin(), result.indices.end());
  if (result.indices.empty()) result.discarded = true;
  return result;
}

}  // namespace conehull
