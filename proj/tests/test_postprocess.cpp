#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "conehull/bench.hpp"
#include "conehull/nnls.hpp"
#include "conehull/postprocess.hpp"
#include "conehull/rng.hpp"

using namespace conehull;

TEST_CASE("nnls: matches closed forms on small systems") {
  DenseMatrix a(2, 2);
  a << 1, 0, 0, 1;
  Vector b(2);
  b << 3, 4;
  NnlsResult r = nnls(a, b);
  CHECK(r.x[0] == doctest::Approx(3.0));
  CHECK(r.x[1] == doctest::Approx(4.0));
  CHECK(r.residual == doctest::Approx(0.0));

  b << -1, 2;  // negative component clamps to zero
  r = nnls(a, b);
  CHECK(r.x[0] == doctest::Approx(0.0));
  CHECK(r.x[1] == doctest::Approx(2.0));
  CHECK(r.residual == doctest::Approx(1.0));
}

TEST_CASE("nnls: random nonnegative systems round-trip") {
  auto rng = make_rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    DenseMatrix a(8, 4);
    for (Index i = 0; i < 8; ++i)
      for (Index j = 0; j < 4; ++j) a(i, j) = u(rng);
    Vector x0(4);
    for (Index j = 0; j < 4; ++j) x0[j] = u(rng);
    NnlsResult r = nnls(a, a * x0);
    CHECK((r.x - x0).norm() <= 1e-8);
  }
}

TEST_CASE("simplex_constrained_lsq: exact on interior and boundary optima") {
  DenseMatrix a = DenseMatrix::Identity(2, 2);
  Vector b(2);
  b << 0.7, 0.3;
  NnlsResult r = simplex_constrained_lsq(a, b);
  CHECK(r.x[0] == doctest::Approx(0.7));
  CHECK(r.x[1] == doctest::Approx(0.3));
  b << 2.0, -1.0;  // optimum pinned to a vertex
  r = simplex_constrained_lsq(a, b);
  CHECK(r.x[0] == doctest::Approx(1.0));
  CHECK(r.x[1] == doctest::Approx(0.0));
}

TEST_CASE("solve_coefficients: exact decomposition with pinned anchor rows") {
  DenseMatrix x(3, 2);
  x << 1, 0, 0, 1, 1, 1;
  CoefficientSolve s = solve_coefficients(
      x, x, {0, 1}, CoefficientConstraint::NonNegAnchorsFixed);
  CHECK(s.f(0, 0) == 1.0);
  CHECK(s.f(0, 1) == 0.0);
  CHECK(s.f(1, 0) == 0.0);
  CHECK(s.f(1, 1) == 1.0);
  CHECK(s.f(2, 0) == doctest::Approx(1.0));
  CHECK(s.f(2, 1) == doctest::Approx(1.0));
  CHECK(s.relative_frobenius_residual == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("solve_coefficients: a row equal to an anchor maps to a unit vector") {
  DenseMatrix y(3, 3);
  y << 1, 0, 0, 0, 2, 0, 0, 0, 3;
  DenseMatrix x(1, 3);
  x << 0, 2, 0;
  CoefficientSolve s =
      solve_coefficients(x, y, {0, 1, 2}, CoefficientConstraint::NonNeg);
  CHECK(s.f(0, 0) == doctest::Approx(0.0));
  CHECK(s.f(0, 1) == doctest::Approx(1.0));
  CHECK(s.f(0, 2) == doctest::Approx(0.0));
}

TEST_CASE("solve_coefficients: random nonnegative factors round-trip") {
  auto rng = make_rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  DenseMatrix y_a(4, 9);
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 9; ++j) y_a(i, j) = u(rng);
  DenseMatrix f0(20, 4);
  for (Index i = 0; i < 20; ++i)
    for (Index j = 0; j < 4; ++j) f0(i, j) = u(rng);
  DenseMatrix x = f0 * y_a;
  CoefficientSolve s =
      solve_coefficients(x, y_a, {0, 1, 2, 3}, CoefficientConstraint::NonNeg);
  CHECK((s.f - f0).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("solve_coefficients: rank deficiency flagged") {
  DenseMatrix y(2, 3);
  y << 1, 1, 0, 2, 2, 0;  // dependent anchors
  DenseMatrix x(1, 3);
  x << 1.5, 1.5, 0;
  CHECK_THROWS_AS(
      (void)ConicalHullProblem::general_problem(x, y, 1),
      std::invalid_argument);  // duplicate-ray check catches this pair
  CoefficientSolve s = solve_coefficients(x, y, {0, 1},
                                          CoefficientConstraint::NonNeg);
  CHECK(s.rank_deficient_warning);
  CHECK(s.relative_frobenius_residual <= 1e-10);
}

TEST_CASE("recover_hmm_transition: identity emission copies the moment") {
  DenseMatrix o = DenseMatrix::Identity(2, 2);
  DenseMatrix x_a3(2, 2);
  x_a3 << 0.7, 0.4, 0.3, 0.6;
  DenseMatrix t = recover_hmm_transition(o, x_a3);
  CHECK(t(0, 0) == doctest::Approx(0.7));
  CHECK(t(0, 1) == doctest::Approx(0.4));
  CHECK(t(1, 0) == doctest::Approx(0.3));
  CHECK(t(1, 1) == doctest::Approx(0.6));
}

TEST_CASE("recover_hmm_transition: X_A3 = O gives the identity") {
  auto rng = make_rng(9);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  DenseMatrix o(5, 3);
  for (Index i = 0; i < 5; ++i)
    for (Index j = 0; j < 3; ++j) o(i, j) = u(rng);
  DenseMatrix t = recover_hmm_transition(o, o);
  CHECK((t - DenseMatrix::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("recover_hmm_transition: random column-stochastic round-trip") {
  auto rng = make_rng(13);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    DenseMatrix o(6, 3);
    for (Index i = 0; i < 6; ++i)
      for (Index j = 0; j < 3; ++j) o(i, j) = u(rng);
    DenseMatrix t0(3, 3);
    for (Index c = 0; c < 3; ++c) {
      for (Index r = 0; r < 3; ++r) t0(r, c) = u(rng);
      t0.col(c) /= t0.col(c).sum();
    }
    DenseMatrix t = recover_hmm_transition(o, o * t0);
    CHECK((t - t0).cwiseAbs().maxCoeff() <= 1e-8);
    for (Index c = 0; c < 3; ++c) {
      CHECK(t.col(c).sum() == doctest::Approx(1.0));
      CHECK(t.col(c).minCoeff() >= -1e-12);
    }
  }
}

TEST_CASE("recover_hmm_transition: rank-deficient emissions rejected") {
  DenseMatrix o(3, 2);
  o << 1, 2, 1, 2, 1, 2;
  DenseMatrix rhs(3, 2);
  rhs.setOnes();
  CHECK_THROWS_AS((void)recover_hmm_transition(o, rhs), std::runtime_error);
}

TEST_CASE("recover_lda_params: identity topics copy Q into R") {
  DenseMatrix f = DenseMatrix::Identity(2, 2);
  DenseMatrix q(2, 2);
  q << 0.4, 0.1, 0.1, 0.4;
  LdaParams params = recover_lda_params(f, q, 2.0);
  CHECK((params.r - q).cwiseAbs().maxCoeff() <= 1e-10);
  // column normalization on a random F
  auto rng = make_rng(7);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  DenseMatrix f2(5, 3);
  for (Index i = 0; i < 5; ++i)
    for (Index j = 0; j < 3; ++j) f2(i, j) = u(rng);
  LdaParams p2 = recover_lda_params(f2, DenseMatrix::Identity(5, 5), 1.0);
  for (Index j = 0; j < 3; ++j) {
    CHECK(p2.o.col(j).sum() == doctest::Approx(1.0));
  }
}

TEST_CASE("recover_lda_params: symmetric Dirichlet alpha recovered") {
  // alpha = (1, 1), alpha0 = 2: E(h (x) h) = (I + 11')/6
  DenseMatrix f = DenseMatrix::Identity(2, 2);
  DenseMatrix r(2, 2);
  r << 2.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0, 2.0 / 6.0;
  LdaParams params = recover_lda_params(f, r, 2.0);
  CHECK(params.alpha[0] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(params.alpha[1] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK_FALSE(params.alpha_clipped);
}

TEST_CASE("recover_rank1_factors: rank-one pair") {
  Vector u(4), v(3);
  u << 1, 2, 3, 4;
  v << 2, 1, 0.5;
  DenseMatrix x1 = 1.5 * u * v.transpose();
  DenseMatrix x2 = 0.5 * u * v.transpose();
  DenseMatrix y(3, 12);
  y.setZero();
  auto rng = make_rng(2);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Index j = 0; j < 12; ++j) y(0, j) = normal(rng);
  // row 1 is the true vec(u (x) v), row-major
  for (Index r = 0; r < 4; ++r)
    for (Index c = 0; c < 3; ++c) y(1, r * 3 + c) = u[r] * v[c];
  for (Index j = 0; j < 12; ++j) y(2, j) = normal(rng);
  Rank1Factors out = recover_rank1_factors(x1, x2, y);
  CHECK(out.anchors == std::vector<Index>{1});
}

TEST_CASE("recover_rank1_factors: random planted instances invert") {
  auto rng = make_rng(4);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  for (int trial = 0; trial < 30; ++trial) {
    const Index k = 2 + (trial % 4);  // 2..5
    const Index pi = 6, pj = 5;
    DenseMatrix oi(pi, k), oj(pj, k);
    for (Index i = 0; i < pi; ++i)
      for (Index j = 0; j < k; ++j) oi(i, j) = normal(rng);
    for (Index i = 0; i < pj; ++i)
      for (Index j = 0; j < k; ++j) oj(i, j) = normal(rng);
    Vector a(k), b(k);
    for (Index j = 0; j < k; ++j) {
      a[j] = u(rng);
      b[j] = u(rng) * (j + 1.0);  // keeps the ratios distinct
    }
    DenseMatrix x1 = oi * a.asDiagonal() * oj.transpose();
    DenseMatrix x2 = oi * b.asDiagonal() * oj.transpose();
    // candidate rows: the k planted outer products plus distractors
    DenseMatrix y(k + 3, pi * pj);
    for (Index s = 0; s < k; ++s) {
      for (Index r = 0; r < pi; ++r)
        for (Index c = 0; c < pj; ++c) y(s, r * pj + c) = oi(r, s) * oj(c, s);
    }
    for (Index s = k; s < k + 3; ++s)
      for (Index j = 0; j < pi * pj; ++j) y(s, j) = normal(rng);
    Rank1Factors out = recover_rank1_factors(x1, x2, y);
    std::set<Index> got(out.anchors.begin(), out.anchors.end());
    REQUIRE(got.size() == static_cast<std::size_t>(k));
    for (Index s = 0; s < k; ++s) CHECK(got.count(s) == 1);
    // recovered outer products match the planted ones to 1e-8 after fixing
    // the inherent weight-scale ambiguity (compare unit-norm products)
    for (Index c = 0; c < k; ++c) {
      const Index s = out.anchors[static_cast<std::size_t>(c)];
      DenseMatrix recovered = out.o_i.col(c) * out.o_j.col(c).transpose();
      DenseMatrix planted = oi.col(s) * oj.col(s).transpose();
      recovered /= recovered.norm();
      planted /= planted.norm();
      const double rel = std::min((recovered - planted).norm(),
                                  (recovered + planted).norm());
      CHECK(rel <= 1e-8);
    }
  }
}

TEST_CASE("recover_rank1_factors: equal weights are non-identifiable") {
  auto rng = make_rng(6);
  std::normal_distribution<double> normal(0.0, 1.0);
  DenseMatrix oi(5, 3), oj(4, 3);
  for (Index i = 0; i < 5; ++i)
    for (Index j = 0; j < 3; ++j) oi(i, j) = normal(rng);
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 3; ++j) oj(i, j) = normal(rng);
  Vector a(3);
  a << 1, 2, 3;
  DenseMatrix x1 = oi * a.asDiagonal() * oj.transpose();
  DenseMatrix x2 = oi * a.asDiagonal() * oj.transpose();  // b = a
  DenseMatrix y(1, 20);
  y.setOnes();
  CHECK_THROWS_AS((void)recover_rank1_factors(x1, x2, y), NonIdentifiableError);
}

TEST_CASE("cluster_anchors_sc: two orthogonal rays split into two groups") {
  auto rng = make_rng(19);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  DenseMatrix x(60, 8);
  x.setZero();
  for (Index i = 0; i < 60; ++i) {
    const int cone = i % 2;
    x(i, cone * 4) = u(rng);  // rays e0 and e4, positive scalings
  }
  ProjectionPlan plan;
  plan.s = 60;
  plan.seed = 3;
  ScClusters out = cluster_anchors_sc(x, plan, 2);
  CHECK(out.anchor_groups.size() == 2);
  // G must be block diagonal: the two anchors never co-cluster
  CHECK(out.g.rows() == 2);
  CHECK(out.g(0, 1) == doctest::Approx(0.0));
  // labels must separate the two rays (up to renaming)
  std::set<Index> left, right;
  for (Index i = 0; i < 60; ++i) {
    (i % 2 == 0 ? left : right).insert(out.labels[static_cast<std::size_t>(i)]);
  }
  CHECK(left.size() == 1);
  CHECK(right.size() == 1);
  CHECK(*left.begin() != *right.begin());
}

TEST_CASE("cluster_anchors_sc: label invariance under row permutation") {
  bench::SyntheticSpec spec;
  spec.kind = bench::SyntheticKind::ScGrid;
  spec.k = 2;
  spec.rays_per_cone = 3;
  spec.n = 40;
  spec.p = 12;
  spec.span_angle_deg = 30;
  spec.seed = 77;
  DenseMatrix x = bench::generate(spec).data;
  ProjectionPlan plan;
  plan.s = 80;
  plan.seed = 5;
  ScClusters base = cluster_anchors_sc(x, plan, 6);

  // reverse the rows; labels must permute consistently (same partition)
  DenseMatrix rev(x.rows(), x.cols());
  for (Index i = 0; i < x.rows(); ++i) rev.row(i) = x.row(x.rows() - 1 - i);
  // projections depend only on row values, so the cluster structure is the
  // same partition with rows renamed
  ScClusters flipped = cluster_anchors_sc(rev, plan, 6);
  REQUIRE(base.labels.size() == flipped.labels.size());
  const std::size_t n = base.labels.size();
  double agree = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool same_a = base.labels[i] == base.labels[j];
      const bool same_b =
          flipped.labels[n - 1 - i] == flipped.labels[n - 1 - j];
      if (same_a == same_b) ++agree;
    }
  }
  CHECK(agree / (0.5 * n * (n - 1)) >= 0.98);
}
