#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "conehull/geometry.hpp"
#include "conehull/oracle.hpp"
#include "conehull/rng.hpp"

using namespace conehull;

namespace {

constexpr double kPi = std::numbers::pi;

AngleArray make_angles(std::initializer_list<double> values) {
  AngleArray a;
  a.values = values;
  a.degenerate.assign(a.values.size(), 0);
  return a;
}

DenseMatrix rows2(std::initializer_list<std::pair<double, double>> rows) {
  DenseMatrix m(static_cast<Index>(rows.size()), 2);
  Index i = 0;
  for (const auto& [x, y] : rows) {
    m(i, 0) = x;
    m(i, 1) = y;
    ++i;
  }
  return m;
}

// test-side restatement of the self-referential rule: min/max angle rows
std::vector<Index> self_rule(const AngleArray& xp) {
  const PointednessFrame frame = pointedness_frame(xp);
  REQUIRE(frame.valid);
  Index lo = -1, hi = -1;
  double lo_v = 1e300, hi_v = -1e300;
  for (std::size_t i = 0; i < xp.size(); ++i) {
    const double c = frame.coord(xp.values[i]);
    if (c < lo_v) {
      lo_v = c;
      lo = static_cast<Index>(i);
    }
    if (c > hi_v) {
      hi_v = c;
      hi = static_cast<Index>(i);
    }
  }
  std::set<Index> s{lo, hi};
  return {s.begin(), s.end()};
}

}  // namespace

TEST_CASE("draw_projection: unit axes give one 1 per distinct column") {
  ProjectionPlan plan;
  plan.ensemble = Ensemble::UnitAxes;
  plan.d = 2;
  plan.s = 4;
  plan.seed = 7;
  DenseMatrix phi = draw_projection(plan, 0, 5);
  REQUIRE(phi.rows() == 5);
  REQUIRE(phi.cols() == 2);
  std::set<Index> axes;
  for (Index j = 0; j < 2; ++j) {
    Index ones = 0, axis = -1;
    for (Index i = 0; i < 5; ++i) {
      CHECK((phi(i, j) == 0.0 || phi(i, j) == 1.0));
      if (phi(i, j) == 1.0) {
        ++ones;
        axis = i;
      }
    }
    CHECK(ones == 1);
    axes.insert(axis);
  }
  CHECK(axes.size() == 2);
}

TEST_CASE("draw_projection: deterministic in (seed, t)") {
  ProjectionPlan plan;
  plan.d = 2;
  plan.s = 3;
  plan.seed = 1234;
  DenseMatrix a = draw_projection(plan, 0, 3);
  DenseMatrix b = draw_projection(plan, 0, 3);
  CHECK(a == b);  // bitwise
  DenseMatrix c = draw_projection(plan, 1, 3);
  CHECK(a != c);
}

TEST_CASE("draw_projection: d > p rejected") {
  ProjectionPlan plan;
  plan.d = 4;
  plan.s = 1;
  CHECK_THROWS_AS((void)draw_projection(plan, 0, 3), std::invalid_argument);
}

TEST_CASE("draw_projection: gaussian ensemble statistics") {
  ProjectionPlan plan;
  plan.d = 2;
  plan.s = 10000;
  plan.seed = 99;
  const Index p = 100;
  double sum[2] = {0.0, 0.0};
  const double n = static_cast<double>(plan.s) * static_cast<double>(p);
  for (Index t = 0; t < plan.s; ++t) {
    DenseMatrix phi = draw_projection(plan, t, p);
    sum[0] += phi.col(0).sum();
    sum[1] += phi.col(1).sum();
  }
  for (int j = 0; j < 2; ++j) {
    CHECK(std::abs(sum[j] / n) < 4.0 / std::sqrt(n));
  }
}

TEST_CASE("draw_projection: sparse-sign density near 1/3") {
  ProjectionPlan plan;
  plan.ensemble = Ensemble::SparseSign;
  plan.d = 2;
  plan.s = 2000;
  plan.seed = 5;
  Index nonzero = 0, total = 0;
  for (Index t = 0; t < plan.s; ++t) {
    DenseMatrix phi = draw_projection(plan, t, 30);
    for (Index i = 0; i < phi.rows(); ++i) {
      for (Index j = 0; j < 2; ++j) {
        CHECK((phi(i, j) == 0.0 || phi(i, j) == 1.0 || phi(i, j) == -1.0));
        if (phi(i, j) != 0.0) ++nonzero;
        ++total;
      }
    }
  }
  const double density = static_cast<double>(nonzero) / static_cast<double>(total);
  CHECK(density == doctest::Approx(1.0 / 3.0).epsilon(0.05));
}

TEST_CASE("project_angles: axis-aligned rows") {
  DenseMatrix m = rows2({{1, 0}, {0, 1}, {1, 1}});
  DenseMatrix phi = DenseMatrix::Identity(2, 2);
  AngleArray a = project_angles(m, phi);
  CHECK(a.values[0] == doctest::Approx(0.0));
  CHECK(a.values[1] == doctest::Approx(kPi / 2));
  CHECK(a.values[2] == doctest::Approx(kPi / 4));
}

TEST_CASE("project_angles: negative x axis maps to pi") {
  DenseMatrix m = rows2({{-1, 0}});
  AngleArray a = project_angles(m, DenseMatrix::Identity(2, 2));
  CHECK(a.values[0] == doctest::Approx(kPi));
}

TEST_CASE("project_angles: cosine identity against direct arithmetic") {
  auto rng = make_rng(21);
  std::normal_distribution<double> normal(0.0, 1.0);
  DenseMatrix m(40, 6), phi(6, 2);
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = normal(rng);
  for (Index i = 0; i < phi.rows(); ++i)
    for (Index j = 0; j < 2; ++j) phi(i, j) = normal(rng);
  DenseMatrix proj = m * phi;
  AngleArray a = project_angles(m, phi);
  for (Index i = 0; i < m.rows(); ++i) {
    const double norm = proj.row(i).norm();
    CHECK(std::cos(a.values[static_cast<std::size_t>(i)]) * norm ==
          doctest::Approx(proj(i, 0)).epsilon(1e-12));
  }
}

TEST_CASE("project_angles: zero rows flagged, not silently angle 0") {
  DenseMatrix m = rows2({{0, 0}, {1, 0}});
  AngleArray a = project_angles(m, DenseMatrix::Identity(2, 2));
  CHECK(a.is_degenerate(0));
  CHECK_FALSE(a.is_degenerate(1));
}

TEST_CASE("anchor_2d: hand-evaluated general instance") {
  // Y = [(1,0); (0,1); (1,1)], X = [(1,1); (2,1)]
  AngleArray yp = make_angles({0.0, kPi / 2, kPi / 4});
  AngleArray xp = make_angles({kPi / 4, std::atan2(1.0, 2.0)});
  Anchor2dResult r = anchor_2d(xp, yp);
  REQUIRE_FALSE(r.discarded);
  CHECK_FALSE(r.coverage_violation);
  CHECK(r.indices == std::vector<Index>{0, 2});
}

TEST_CASE("anchor_2d: self-referential min/max rule") {
  AngleArray xp = make_angles({0.0, kPi / 6, kPi / 3});
  Anchor2dResult r = anchor_2d(xp, xp);
  CHECK(r.indices == std::vector<Index>{0, 2});
}

TEST_CASE("anchor_2d: Y == X matches the degenerate rule on random instances") {
  auto rng = make_rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + static_cast<int>(u(rng) * 10);
    AngleArray xp;
    const double base = u(rng) * 2.0 * kPi;
    const double width = 0.2 + u(rng) * (kPi - 0.25);
    for (int i = 0; i < n; ++i) {
      double a = base + u(rng) * width;
      a = std::fmod(a, 2.0 * kPi);
      xp.values.push_back(a);
      xp.degenerate.push_back(0);
    }
    Anchor2dResult r = anchor_2d(xp, xp);
    REQUIRE_FALSE(r.discarded);
    CHECK(r.indices == self_rule(xp));
  }
}

TEST_CASE("anchor_2d: coverage violation reported per side") {
  // X spans [0, pi/2]; the only Y direction lies strictly inside
  AngleArray xp = make_angles({0.0, kPi / 2});
  AngleArray yp = make_angles({kPi / 4});
  Anchor2dResult r = anchor_2d(xp, yp);
  CHECK(r.coverage_violation);
  CHECK(r.discarded);  // both sides empty
  CHECK(r.indices.empty());

  // one-sided: Y covers only the lower side
  AngleArray yp2 = make_angles({kPi / 4, 2.0 * kPi - 0.1});
  Anchor2dResult r2 = anchor_2d(xp, yp2);
  CHECK(r2.coverage_violation);
  CHECK_FALSE(r2.discarded);
  CHECK(r2.indices == std::vector<Index>{1});
}

TEST_CASE("anchor_2d: non-pointed X projections discarded") {
  Anchor2dResult r = anchor_2d(make_angles({0.0, kPi}), make_angles({0.1}));
  CHECK(r.discarded);
  Anchor2dResult r2 =
      anchor_2d(make_angles({0.0, 3 * kPi / 4, 3 * kPi / 2}), make_angles({0.1}));
  CHECK(r2.discarded);
}

TEST_CASE("anchor_2d: scale invariance of the returned index set") {
  auto rng = make_rng(31);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  DenseMatrix y(6, 2);
  for (Index i = 0; i < 6; ++i) {
    const double a = u(rng) * kPi / 2;
    y(i, 0) = std::cos(a);
    y(i, 1) = std::sin(a);
  }
  DenseMatrix x = rows2({{1.0, 0.8}, {0.9, 1.0}});
  DenseMatrix phi = DenseMatrix::Identity(2, 2);
  Anchor2dResult base = anchor_2d(project_angles(x, phi), project_angles(y, phi));
  DenseMatrix scaled = y;
  scaled.row(2) *= 37.5;
  scaled.row(4) *= 0.003;
  Anchor2dResult after =
      anchor_2d(project_angles(x, phi), project_angles(scaled, phi));
  CHECK(base.indices == after.indices);
}

TEST_CASE("brute_force_mch: exact-match row wins alone") {
  DenseMatrix x = rows2({{1, 1}});
  DenseMatrix y = rows2({{1, 0}, {0, 1}, {1, 1}});
  CHECK(brute_force_mch(x, y) == std::vector<Index>{2});
}

TEST_CASE("brute_force_mch: both axes required") {
  DenseMatrix x = rows2({{2, 1}, {1, 2}});
  DenseMatrix y = rows2({{1, 0}, {0, 1}});
  CHECK(brute_force_mch(x, y) == std::vector<Index>{0, 1});
}

TEST_CASE("brute_force_mch: infeasible instance throws") {
  DenseMatrix x = rows2({{-1, -1}});
  DenseMatrix y = rows2({{1, 0}, {0, 1}});
  CHECK_THROWS_AS((void)brute_force_mch(x, y), std::runtime_error);
}

TEST_CASE("brute_force_mch agrees with anchor_2d on random 2-column instances") {
  auto rng = make_rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Index m = 3 + static_cast<Index>(u(rng) * 8);
    const Index n = 1 + static_cast<Index>(u(rng) * 8);
    DenseMatrix y(m, 2);
    for (Index i = 0; i < m; ++i) {
      const double a = 0.05 + u(rng) * (kPi / 2 - 0.1);
      const double r = 0.5 + u(rng);
      y(i, 0) = r * std::cos(a);
      y(i, 1) = r * std::sin(a);
    }
    DenseMatrix x(n, 2);
    for (Index i = 0; i < n; ++i) {
      // conical combination of two random rows keeps X covered
      const Index a = static_cast<Index>(u(rng) * m);
      const Index b = static_cast<Index>(u(rng) * m);
      x.row(i) = u(rng) * y.row(a) + u(rng) * y.row(b);
      if (x.row(i).norm() < 0.1) x.row(i) = y.row(a);
    }
    DenseMatrix phi = DenseMatrix::Identity(2, 2);
    Anchor2dResult fast = anchor_2d(project_angles(x, phi), project_angles(y, phi));
    REQUIRE_FALSE(fast.discarded);
    CHECK(fast.indices == brute_force_mch(x, y));
  }
}

TEST_CASE("projection soundness: covered points stay covered in 2D") {
  auto rng = make_rng(88);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    DenseMatrix y(4, 5);
    for (Index i = 0; i < y.rows(); ++i)
      for (Index j = 0; j < y.cols(); ++j) y(i, j) = u(rng);
    DenseMatrix x(3, 5);
    for (Index i = 0; i < x.rows(); ++i) {
      Vector combo = Vector::Zero(5);
      for (Index j = 0; j < y.rows(); ++j) combo += u(rng) * y.row(j).transpose();
      x.row(i) = combo.transpose();
    }
    DenseMatrix phi(5, 2);
    for (Index i = 0; i < 5; ++i)
      for (Index j = 0; j < 2; ++j) phi(i, j) = normal(rng);
    Anchor2dResult r = anchor_2d(project_angles(x, phi), project_angles(y, phi));
    if (!r.discarded) CHECK_FALSE(r.coverage_violation);
  }
}
