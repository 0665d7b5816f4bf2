#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "conehull/bench.hpp"
#include "conehull/rng.hpp"

namespace conehull::bench {

std::string to_string(SyntheticKind k) {
  switch (k) {
    case SyntheticKind::SeparableNMF: return "nmf";
    case SyntheticKind::GmmGrid: return "gmm";
    case SyntheticKind::ScGrid: return "sc";
    case SyntheticKind::HmmChain: return "hmm";
    case SyntheticKind::LdaCorpus: return "lda";
  }
  return "nmf";
}

namespace {

DenseMatrix gaussian_matrix(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  DenseMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = normal(rng);
  return m;
}

Vector random_unit(Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(dim);
  do {
    for (Index i = 0; i < dim; ++i) v[i] = normal(rng);
  } while (v.norm() < 1e-9);
  return v / v.norm();
}

// k unit directions with pairwise angle of at least min_angle_deg
std::vector<Vector> separated_directions(Index k, Index dim, double min_angle_deg,
                                         std::mt19937_64& rng) {
  const double cos_max = std::cos(min_angle_deg * std::numbers::pi / 180.0);
  std::vector<Vector> dirs;
  int guard = 0;
  while (static_cast<Index>(dirs.size()) < k) {
    Vector cand = random_unit(dim, rng);
    bool ok = true;
    for (const auto& d : dirs) {
      if (cand.dot(d) > cos_max) {
        ok = false;
        break;
      }
    }
    if (ok) dirs.push_back(std::move(cand));
    if (++guard > 100000) {
      throw std::runtime_error("separated_directions: cannot place directions");
    }
  }
  return dirs;
}

SyntheticInstance generate_nmf(const SyntheticSpec& spec) {
  auto rng = make_rng(spec.seed, 0, 0x0f);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SyntheticInstance inst;
  inst.spec = spec;

  DenseMatrix anchors(spec.k, spec.p);
  for (Index i = 0; i < spec.k; ++i)
    for (Index j = 0; j < spec.p; ++j) anchors(i, j) = u(rng);
  DenseMatrix coeff(spec.n - spec.k, spec.k);
  for (Index i = 0; i < coeff.rows(); ++i)
    for (Index j = 0; j < spec.k; ++j) coeff(i, j) = u(rng);

  inst.data.resize(spec.n, spec.p);
  inst.data.topRows(spec.k) = anchors;
  inst.data.bottomRows(spec.n - spec.k) = coeff * anchors;
  if (spec.noise > 0.0) {
    const double scale = spec.noise * inst.data.cwiseAbs().mean();
    inst.data += scale * gaussian_matrix(spec.n, spec.p, rng);
  }
  inst.truth.anchors.resize(static_cast<std::size_t>(spec.k));
  std::iota(inst.truth.anchors.begin(), inst.truth.anchors.end(), Index{0});
  inst.truth.parameters = anchors;
  return inst;
}

SyntheticInstance generate_gmm(const SyntheticSpec& spec) {
  auto rng = make_rng(spec.seed, 0, 0x60);
  SyntheticInstance inst;
  inst.spec = spec;
  const Index dims[3] = {spec.p1, spec.p2, spec.p3};
  const double mean_scale = 3.0;

  // per-view cluster means, near-orthogonal within each view so every
  // cluster direction is a well-exposed extreme ray of the moment cone
  std::vector<std::vector<Vector>> means(3);
  for (int v = 0; v < 3; ++v) {
    means[v] = separated_directions(spec.k, dims[v], 80.0, rng);
    for (auto& m : means[v]) m *= mean_scale;
  }

  const Index per_cluster = spec.n;
  const Index total = spec.k * (per_cluster + 1);  // +1 planted mean row each
  MultiViewData views;
  for (int v = 0; v < 3; ++v) views.views[v].resize(total, dims[v]);
  inst.truth.labels.assign(static_cast<std::size_t>(total), 0);

  std::normal_distribution<double> normal(0.0, 1.0);
  // planted mean rows first (these are the anchors), then the samples with
  // the clusters interleaved so index-based tie-breaks carry no cluster bias
  for (Index j = 0; j < spec.k; ++j) {
    for (int v = 0; v < 3; ++v) {
      views.views[v].row(j) = means[static_cast<std::size_t>(v)]
                                  [static_cast<std::size_t>(j)].transpose();
    }
    inst.truth.labels[static_cast<std::size_t>(j)] = j;
    inst.truth.anchors.push_back(j);
  }
  for (Index i = 0; i < spec.k * per_cluster; ++i) {
    const Index row = spec.k + i;
    const Index j = i % spec.k;
    for (int v = 0; v < 3; ++v) {
      Vector x = means[static_cast<std::size_t>(v)][static_cast<std::size_t>(j)];
      for (Index d = 0; d < dims[v]; ++d) {
        x[d] += spec.variance * normal(rng);  // within-cluster spread
        x[d] += spec.noise * normal(rng);     // additive noise level
      }
      views.views[v].row(row) = x.transpose();
    }
    inst.truth.labels[static_cast<std::size_t>(row)] = j;
  }

  inst.data.resize(total, dims[0] + dims[1] + dims[2]);
  inst.data << views.views[0], views.views[1], views.views[2];
  inst.views = std::move(views);

  inst.truth.parameters.resize(spec.k, dims[0] + dims[1] + dims[2]);
  for (Index j = 0; j < spec.k; ++j) {
    inst.truth.parameters.row(j) = inst.data.row(j);
  }
  return inst;
}

SyntheticInstance generate_sc(const SyntheticSpec& spec) {
  auto rng = make_rng(spec.seed, 0, 0x5c);
  SyntheticInstance inst;
  inst.spec = spec;
  const Index rays = spec.rays_per_cone;
  const Index total_rays = spec.k * rays;
  if (spec.n < total_rays) {
    throw std::invalid_argument("ScGrid: n must cover the planted rays");
  }

  auto axes = separated_directions(spec.k, spec.p, 45.0, rng);
  const double cap = (spec.span_angle_deg / 2.0) * std::numbers::pi / 180.0;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  inst.data.resize(spec.n, spec.p);
  inst.truth.labels.assign(static_cast<std::size_t>(spec.n), 0);

  std::vector<DenseMatrix> cone_rays(static_cast<std::size_t>(spec.k));
  Index row = 0;
  for (Index c = 0; c < spec.k; ++c) {
    DenseMatrix r(rays, spec.p);
    for (Index i = 0; i < rays; ++i, ++row) {
      // rotate the axis by a random angle inside the cap
      Vector w = random_unit(spec.p, rng);
      w -= w.dot(axes[static_cast<std::size_t>(c)]) * axes[static_cast<std::size_t>(c)];
      if (w.norm() < 1e-9) w = random_unit(spec.p, rng);
      w /= w.norm();
      const double theta = cap * u(rng);
      Vector ray = std::cos(theta) * axes[static_cast<std::size_t>(c)] +
                   std::sin(theta) * w;
      r.row(i) = ray.transpose();
      inst.data.row(row) = ray.transpose();
      inst.truth.labels[static_cast<std::size_t>(row)] = c;
      inst.truth.anchors.push_back(row);
    }
    cone_rays[static_cast<std::size_t>(c)] = std::move(r);
  }
  // remaining rows: conical combinations with uniform(0,1) coefficients
  for (; row < spec.n; ++row) {
    const Index c = (row - total_rays) % spec.k;
    Vector coeff(rays);
    for (Index i = 0; i < rays; ++i) coeff[i] = u(rng);
    Vector x = cone_rays[static_cast<std::size_t>(c)].transpose() * coeff;
    if (spec.noise > 0.0) {
      for (Index d = 0; d < spec.p; ++d) x[d] += spec.noise * normal(rng);
    }
    inst.data.row(row) = x.transpose();
    inst.truth.labels[static_cast<std::size_t>(row)] = c;
  }
  return inst;
}

SyntheticInstance generate_hmm(const SyntheticSpec& spec) {
  auto rng = make_rng(spec.seed, 0, 0x44);
  SyntheticInstance inst;
  inst.spec = spec;
  const Index k = spec.k, p = spec.p;

  // orthonormal emission means via QR of a Gaussian matrix
  DenseMatrix g = gaussian_matrix(p, k, rng);
  Eigen::HouseholderQR<DenseMatrix> qr(g);
  DenseMatrix o = DenseMatrix(qr.householderQ()).leftCols(k);

  // column-stochastic, diagonally dominant transitions
  std::uniform_real_distribution<double> u(0.0, 1.0);
  DenseMatrix t(k, k);
  for (Index c = 0; c < k; ++c) {
    for (Index r = 0; r < k; ++r) t(r, c) = 0.05 + 0.1 * u(rng);
    t(c, c) += 1.0;
    t.col(c) /= t.col(c).sum();
  }

  std::vector<double> pi(static_cast<std::size_t>(k), 1.0 / static_cast<double>(k));
  std::normal_distribution<double> normal(0.0, 1.0);
  inst.data.resize(spec.chain_length, p);
  inst.truth.labels.assign(static_cast<std::size_t>(spec.chain_length), 0);

  auto sample_state = [&](const Vector& probs) {
    double target = u(rng), acc = 0.0;
    for (Index i = 0; i < probs.size(); ++i) {
      acc += probs[i];
      if (target <= acc) return i;
    }
    return probs.size() - 1;
  };

  Vector init(k);
  for (Index i = 0; i < k; ++i) init[i] = pi[static_cast<std::size_t>(i)];
  Index h = sample_state(init);
  for (Index step = 0; step < spec.chain_length; ++step) {
    inst.truth.labels[static_cast<std::size_t>(step)] = h;
    Vector x = o.col(h);
    for (Index d = 0; d < p; ++d) x[d] += spec.noise * normal(rng);
    inst.data.row(step) = x.transpose();
    h = sample_state(t.col(h));
  }
  inst.truth.parameters = o;
  inst.truth.transition = t;
  return inst;
}

SyntheticInstance generate_lda(const SyntheticSpec& spec) {
  auto rng = make_rng(spec.seed, 0, 0x1da);
  SyntheticInstance inst;
  inst.spec = spec;
  const Index p = spec.p, k = spec.k, docs = spec.n;
  if (p < 2 * k) throw std::invalid_argument("LdaCorpus: need p >= 2k words");

  // topic j owns anchor word j exclusively; the rest of its mass is a
  // Dirichlet draw over the shared words
  std::gamma_distribution<double> gamma1(0.5, 1.0);
  DenseMatrix topics = DenseMatrix::Zero(p, k);
  const double anchor_mass = 0.25;
  for (Index j = 0; j < k; ++j) {
    topics(j, j) = anchor_mass;
    double sum = 0.0;
    Vector rest(p - k);
    for (Index w = 0; w < p - k; ++w) {
      rest[w] = gamma1(rng) + 1e-6;
      sum += rest[w];
    }
    for (Index w = 0; w < p - k; ++w) {
      topics(k + w, j) = (1.0 - anchor_mass) * rest[w] / sum;
    }
    inst.truth.anchors.push_back(j);
  }

  std::gamma_distribution<double> gamma_alpha(spec.dirichlet_alpha, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  inst.data = DenseMatrix::Zero(docs, p);
  for (Index d = 0; d < docs; ++d) {
    Vector h(k);
    double hs = 0.0;
    for (Index j = 0; j < k; ++j) {
      h[j] = gamma_alpha(rng) + 1e-12;
      hs += h[j];
    }
    h /= hs;
    Vector word_dist = topics * h;
    for (Index tkn = 0; tkn < spec.doc_length; ++tkn) {
      double target = u(rng), acc = 0.0;
      Index w = p - 1;
      for (Index i = 0; i < p; ++i) {
        acc += word_dist[i];
        if (target <= acc) {
          w = i;
          break;
        }
      }
      inst.data(d, w) += 1.0;
    }
  }
  inst.truth.parameters = topics;
  inst.truth.alpha = Vector::Constant(k, spec.dirichlet_alpha);
  return inst;
}

}  // namespace

SyntheticInstance generate(const SyntheticSpec& spec) {
  if (spec.n < 1 || spec.p < 1 || spec.k < 1) {
    throw std::invalid_argument("generate: n, p, k must be positive");
  }
  switch (spec.kind) {
    case SyntheticKind::SeparableNMF:
      if (spec.k > spec.n) throw std::invalid_argument("generate: k > n");
      return generate_nmf(spec);
    case SyntheticKind::GmmGrid: return generate_gmm(spec);
    case SyntheticKind::ScGrid: return generate_sc(spec);
    case SyntheticKind::HmmChain: return generate_hmm(spec);
    case SyntheticKind::LdaCorpus: return generate_lda(spec);
  }
  throw std::invalid_argument("generate: unknown kind");
}

}  // namespace conehull::bench
