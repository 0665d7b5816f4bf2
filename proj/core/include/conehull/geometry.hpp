#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "conehull/matrix.hpp"

namespace conehull {

// Tolerances (see also oracle.hpp). Doubles leave ~4 digits of headroom
// above machine epsilon at these values.
inline constexpr double kTolZero = 1e-12;       // degenerate projected rows
inline constexpr double kTolFeas = 1e-8;        // oracle NNLS feasibility
inline constexpr double kTolDuplicateRay = 1e-10;  // duplicate-ray angle

enum class Ensemble { Gaussian, UnitAxes, DataRows, SparseSign };

std::string to_string(Ensemble e);
Ensemble ensemble_from_string(const std::string& s);

// Recipe for the ensemble of random projections: s sub-problems of dimension
// d, reproducible from (seed, t) for each t < s.
struct ProjectionPlan {
  Ensemble ensemble = Ensemble::Gaussian;
  Index d = 2;
  Index s = 1;
  std::uint64_t seed = 0;
};

// The instance "cover the rows of X by a sub-cone of the rows of Y".
// When self_referential, Y is X and the degenerate min/max-angle rule applies
// in the 2D solver.
class ConicalHullProblem {
 public:
  static ConicalHullProblem self_referential_problem(DenseMatrix x, Index k);
  static ConicalHullProblem general_problem(DenseMatrix x, DenseMatrix y, Index k);

  const DenseMatrix& x() const { return x_; }
  const DenseMatrix& y() const { return self_referential_ ? x_ : y_; }
  Index k() const { return k_; }
  bool self_referential() const { return self_referential_; }
  Index ambient_dim() const { return x_.cols(); }

 private:
  ConicalHullProblem(DenseMatrix x, DenseMatrix y, Index k, bool self_ref);

  DenseMatrix x_;
  DenseMatrix y_;  // empty when self_referential_
  Index k_ = 0;
  bool self_referential_ = false;
};

// Angles of projected rows against the first projected coordinate axis,
// in [0, 2pi). Rows whose projection norm falls below kTolZero carry no
// usable direction and are listed in `degenerate` instead.
struct AngleArray {
  std::vector<double> values;
  std::vector<char> degenerate;  // 1 = degenerate, parallel to values

  std::size_t size() const { return values.size(); }
  bool is_degenerate(std::size_t i) const { return degenerate[i] != 0; }
};

// Draws the t-th projection matrix (p x d) of the plan. Deterministic in
// (plan.seed, t). DataRows requires `data`: columns are distinct rows of it.
DenseMatrix draw_projection(const ProjectionPlan& plan, Index t, Index p,
                            const DenseMatrix* data = nullptr);

// Angles of the rows of M * phi (phi must have exactly 2 columns).
AngleArray project_angles(const DenseMatrix& m, const DenseMatrix& phi);

// Output of one 2D sub-problem. `indices` is sorted and deduplicated
// (at most two entries). A sub-problem is discarded when the projected X
// directions are not contained in an open half-plane, i.e. the projected
// cone is not pointed; discarded results carry no anchors.
struct Anchor2dResult {
  std::vector<Index> indices;
  bool discarded = false;
  bool coverage_violation = false;
};

// Closed-form minimal-conical-hull solver on the 2D plane: the anchors are
// the Y directions angularly closest to the X span from either side. All
// angles are first rotated so the circular mean of the X angles sits at
// pi/2; X spans of at least pi get the sub-problem discarded.
Anchor2dResult anchor_2d(const AngleArray& xp, const AngleArray& yp);

// Rotated-coordinate helper shared by anchor_2d and the membership test:
// maps angles into (-pi/2, 3pi/2] with the circular mean of the reference
// set at pi/2. Fails (returns false) when the reference set is empty,
// all-degenerate, or its resultant direction vanishes.
struct PointednessFrame {
  double mean = 0.0;
  bool valid = false;

  double coord(double angle) const;
};
PointednessFrame pointedness_frame(const AngleArray& reference);

}  // namespace conehull
