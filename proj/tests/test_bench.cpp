#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include "conehull/bench.hpp"
#include "conehull/dca.hpp"
#include "conehull/oracle.hpp"

using namespace conehull;
using namespace conehull::bench;

TEST_CASE("generate nmf: zero noise gives an exact planted factorization") {
  SyntheticSpec spec;
  spec.kind = SyntheticKind::SeparableNMF;
  spec.n = 300;
  spec.p = 500;
  spec.k = 10;
  spec.noise = 0.0;
  spec.seed = 3;
  SyntheticInstance inst = generate(spec);
  CHECK(inst.data.rows() == 300);
  CHECK(inst.data.cols() == 500);
  CHECK(inst.truth.anchors.size() == 10);
  // every non-anchor row lies exactly in the anchor cone
  DenseMatrix anchors = inst.data.topRows(10);
  CHECK(cone_covers(inst.data, anchors, 1e-8));
  CHECK(inst.data.minCoeff() >= 0.0);
}

TEST_CASE("generate nmf: oracle confirms the planted anchors on a crop") {
  SyntheticSpec spec;
  spec.kind = SyntheticKind::SeparableNMF;
  spec.n = 300;
  spec.p = 500;
  spec.k = 10;
  spec.noise = 0.0;
  spec.seed = 11;
  SyntheticInstance inst = generate(spec);
  DenseMatrix crop = inst.data.topLeftCorner(30, 30);
  std::vector<Index> found = brute_force_mch(crop, crop);
  CHECK(found == std::vector<Index>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
}

TEST_CASE("generate gmm: variance zero collapses points onto their means") {
  SyntheticSpec spec;
  spec.kind = SyntheticKind::GmmGrid;
  spec.n = 20;
  spec.k = 3;
  spec.variance = 0.0;
  spec.noise = 0.0;
  spec.seed = 5;
  SyntheticInstance inst = generate(spec);
  REQUIRE(inst.views.has_value());
  for (Index i = 0; i < inst.data.rows(); ++i) {
    const Index label = inst.truth.labels[static_cast<std::size_t>(i)];
    CHECK((inst.data.row(i) - inst.data.row(label)).norm() ==
          doctest::Approx(0.0));
  }
}

TEST_CASE("generate sc: rays are rows and points are conical combinations") {
  SyntheticSpec spec;
  spec.kind = SyntheticKind::ScGrid;
  spec.n = 100;
  spec.p = 40;
  spec.k = 4;
  spec.rays_per_cone = 5;
  spec.span_angle_deg = 40;
  spec.noise = 0.0;
  spec.seed = 6;
  SyntheticInstance inst = generate(spec);
  CHECK(inst.truth.anchors.size() == 20);
  // every point of cone c is covered by that cone's rays
  for (Index c = 0; c < 4; ++c) {
    DenseMatrix rays(5, spec.p);
    for (Index r = 0; r < 5; ++r) rays.row(r) = inst.data.row(c * 5 + r);
    std::vector<Index> member_rows;
    for (Index i = 20; i < spec.n; ++i) {
      if (inst.truth.labels[static_cast<std::size_t>(i)] == c) {
        member_rows.push_back(i);
      }
    }
    DenseMatrix members(static_cast<Index>(member_rows.size()), spec.p);
    for (std::size_t i = 0; i < member_rows.size(); ++i) {
      members.row(static_cast<Index>(i)) = inst.data.row(member_rows[i]);
    }
    CHECK(cone_covers(members, rays, 1e-8));
  }
}

TEST_CASE("generate hmm: states follow the planted transition support") {
  SyntheticSpec spec;
  spec.kind = SyntheticKind::HmmChain;
  spec.k = 2;
  spec.p = 6;
  spec.chain_length = 500;
  spec.noise = 0.0;
  spec.seed = 2;
  SyntheticInstance inst = generate(spec);
  CHECK(inst.truth.transition.rows() == 2);
  for (Index c = 0; c < 2; ++c) {
    CHECK(inst.truth.transition.col(c).sum() == doctest::Approx(1.0));
  }
  // zero emission noise: every observation equals an emission mean column
  for (Index t = 0; t < spec.chain_length; ++t) {
    const Index h = inst.truth.labels[static_cast<std::size_t>(t)];
    CHECK((inst.data.row(t).transpose() - inst.truth.parameters.col(h)).norm() ==
          doctest::Approx(0.0));
  }
}

TEST_CASE("generate lda: topics are column-stochastic with anchor words") {
  SyntheticSpec spec;
  spec.kind = SyntheticKind::LdaCorpus;
  spec.n = 50;
  spec.p = 30;
  spec.k = 3;
  spec.doc_length = 60;
  spec.seed = 4;
  SyntheticInstance inst = generate(spec);
  for (Index j = 0; j < 3; ++j) {
    CHECK(inst.truth.parameters.col(j).sum() == doctest::Approx(1.0));
    for (Index i = 0; i < 3; ++i) {
      if (i != j) CHECK(inst.truth.parameters(i, j) == 0.0);  // anchor words
    }
  }
  CHECK(inst.data.rowwise().sum().minCoeff() == doctest::Approx(60));
}

TEST_CASE("greedy baseline: hand-traced residual pursuit") {
  DenseMatrix x(3, 2);
  x << 1, 0, 0, 1, 1, 1;
  CHECK(greedy_anchor_baseline(x, x, 2) == std::vector<Index>{0, 1});
  // k = m returns every row
  CHECK(greedy_anchor_baseline(x, x, 3) == std::vector<Index>{0, 1, 2});
}

TEST_CASE("greedy baseline: planted anchors found at zero noise") {
  SyntheticSpec spec;
  spec.kind = SyntheticKind::SeparableNMF;
  spec.n = 60;
  spec.p = 25;
  spec.k = 5;
  spec.seed = 9;
  SyntheticInstance inst = generate(spec);
  std::vector<Index> got = greedy_anchor_baseline(inst.data, inst.data, 5);
  CHECK(got == inst.truth.anchors);
}

TEST_CASE("backward removal: simpliciality examples") {
  DenseMatrix x(3, 2);
  x << 1, 0, 0, 1, 1, 1;
  CHECK(backward_removal_baseline(x) == std::vector<Index>{0, 1});
  CHECK(backward_removal_baseline(DenseMatrix::Identity(3, 3)) ==
        std::vector<Index>{0, 1, 2});
  DenseMatrix neg(1, 2);
  neg << -1, 0;
  CHECK_THROWS_AS((void)backward_removal_baseline(neg), std::invalid_argument);
}

TEST_CASE("three-way agreement on noise-free separable instances") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SyntheticSpec spec;
    spec.kind = SyntheticKind::SeparableNMF;
    spec.n = 40;
    spec.p = 20;
    spec.k = 4;
    spec.seed = 100 + seed;
    SyntheticInstance inst = generate(spec);
    std::vector<Index> removal = backward_removal_baseline(inst.data);
    std::vector<Index> greedy = greedy_anchor_baseline(inst.data, inst.data, 4);
    auto problem = ConicalHullProblem::self_referential_problem(inst.data, 4);
    ProjectionPlan plan;
    plan.s = 200;
    plan.seed = seed;
    std::vector<Index> via_dca = dca(problem, plan).anchors.indices;
    std::sort(via_dca.begin(), via_dca.end());
    CHECK(removal == inst.truth.anchors);
    CHECK(greedy == inst.truth.anchors);
    CHECK(via_dca == inst.truth.anchors);
  }
}

TEST_CASE("clustering metrics: permutation awareness and ranges") {
  std::vector<Index> truth = {0, 0, 1, 1, 2, 2};
  std::vector<Index> same = {2, 2, 0, 0, 1, 1};  // relabeled, same partition
  CHECK(clustering_accuracy(truth, same) == doctest::Approx(1.0));
  CHECK(rand_index(truth, same) == doctest::Approx(1.0));
  CHECK(mutual_information(truth, same) == doctest::Approx(std::log(3.0)));

  std::vector<Index> noisy = {2, 2, 0, 1, 1, 1};
  CHECK(clustering_accuracy(truth, noisy) == doctest::Approx(5.0 / 6.0));
  CHECK(rand_index(truth, noisy) < 1.0);
}

TEST_CASE("anchor metrics: accuracy and matched recovery error") {
  DenseMatrix y(4, 2);
  y << 1, 0, 0, 1, 1, 1, 2, 0;
  CHECK(anchor_accuracy({0, 1}, {1, 0}, 2) == doctest::Approx(1.0));
  CHECK(anchor_accuracy({0, 1}, {1, 2}, 2) == doctest::Approx(0.5));
  // row 3 is row 0 scaled by 2: relative error |(1,0)-(2,0)| / |(1,0)| = 1
  CHECK(anchor_recovery_error(y, {0}, {0}) == doctest::Approx(0.0));
  CHECK(anchor_recovery_error(y, {0}, {3}) == doctest::Approx(1.0));
}

TEST_CASE("run_sweep: single cell aggregates over seeds") {
  SyntheticSpec spec;
  spec.kind = SyntheticKind::SeparableNMF;
  spec.n = 40;
  spec.p = 15;
  spec.k = 3;
  spec.seed = 77;
  SweepResult result = run_sweep({spec}, {Method::Dca}, {60}, 10);
  REQUIRE(result.rows.size() == 1);
  CHECK(result.rows[0].seeds == 10);
  CHECK(result.rows[0].failures == 0);
  CHECK(result.rows[0].mean.anchor_accuracy == doctest::Approx(1.0));
  CHECK(result.rows[0].stddev.anchor_accuracy == doctest::Approx(0.0));
  // csv: comment line, column header, one data row
  CHECK(std::count(result.csv.begin(), result.csv.end(), '\n') == 3);
}

TEST_CASE("run_sweep: anchor accuracy trends down with noise") {
  std::vector<SyntheticSpec> specs;
  for (double noise : {0.0, 0.25, 0.5}) {
    SyntheticSpec spec;
    spec.kind = SyntheticKind::SeparableNMF;
    spec.n = 50;
    spec.p = 20;
    spec.k = 4;
    spec.noise = noise;
    spec.seed = 5;
    specs.push_back(spec);
  }
  SweepResult result = run_sweep(specs, {Method::Dca}, {80}, 10);
  REQUIRE(result.rows.size() == 3);
  CHECK(result.rows[0].mean.anchor_accuracy >=
        result.rows[1].mean.anchor_accuracy - 1e-9);
  CHECK(result.rows[1].mean.anchor_accuracy >=
        result.rows[2].mean.anchor_accuracy - 1e-9);
}

TEST_CASE("run_sweep: metric csv is deterministic, timings live separately") {
  SyntheticSpec spec;
  spec.kind = SyntheticKind::SeparableNMF;
  spec.n = 30;
  spec.p = 10;
  spec.k = 3;
  spec.seed = 1;
  SweepResult a = run_sweep({spec}, {Method::Dca, Method::Greedy}, {40}, 5);
  SweepResult b = run_sweep({spec}, {Method::Dca, Method::Greedy}, {40}, 5);
  CHECK(a.csv == b.csv);
  CHECK(a.csv.find("wall_time") == std::string::npos);
  CHECK(a.timings_csv.find("wall_time_ms_mean") != std::string::npos);
}

TEST_CASE("run_sweep: failures recorded without aborting the sweep") {
  SyntheticSpec bad;
  bad.kind = SyntheticKind::GmmGrid;
  bad.n = 10;
  bad.k = 2;
  bad.variance = 0.0;  // duplicate outer products: problem construction throws
  bad.noise = 0.0;
  bad.seed = 3;
  SweepResult result = run_sweep({bad}, {Method::Dca}, {20}, 3);
  REQUIRE(result.rows.size() == 1);
  CHECK(result.rows[0].failures == 3);
}

TEST_CASE("dca wall time grows about linearly in s") {
  SyntheticSpec spec;
  spec.kind = SyntheticKind::SeparableNMF;
  spec.n = 200;
  spec.p = 300;
  spec.k = 5;
  spec.seed = 21;
  SyntheticInstance inst = generate(spec);
  auto problem = ConicalHullProblem::self_referential_problem(inst.data, 5);
  std::vector<double> s_values = {50, 100, 200, 400};
  std::vector<double> times;
  for (double s : s_values) {
    ProjectionPlan plan;
    plan.s = static_cast<Index>(s);
    plan.seed = 2;
    double best = 1e300;
    for (int rep = 0; rep < 3; ++rep) {
      const auto start = std::chrono::steady_clock::now();
      (void)dca(problem, plan);
      const auto stop = std::chrono::steady_clock::now();
      best = std::min(
          best, std::chrono::duration<double, std::milli>(stop - start).count());
    }
    times.push_back(best);
  }
  // least-squares fit time = a + b s; R^2 must indicate a linear trend
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  const double n = static_cast<double>(s_values.size());
  for (std::size_t i = 0; i < s_values.size(); ++i) {
    sx += s_values[i];
    sy += times[i];
    sxx += s_values[i] * s_values[i];
    sxy += s_values[i] * times[i];
    syy += times[i] * times[i];
  }
  const double r_num = n * sxy - sx * sy;
  const double r_den = std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
  const double r2 = (r_num / r_den) * (r_num / r_den);
  CHECK(r2 >= 0.9);
}
