// conehull: command-line front end for conical-hull anchoring.
// Subcommands: anchor, reduce, fit, member, bench.
// Exit codes: 0 ok, 1 data error, 2 under-determined result, 64 usage error.

#include <cinttypes>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "conehull/bench.hpp"
#include "conehull/dca.hpp"
#include "conehull/io.hpp"
#include "conehull/nnls.hpp"
#include "conehull/postprocess.hpp"
#include "conehull/reductions.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace conehull;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDataError = 1;
constexpr int kExitUnderDetermined = 2;
constexpr int kExitUsage = 64;

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

io::MatrixFormat parse_format(const std::string& s) {
  if (s == "text") return io::MatrixFormat::Text;
  if (s == "binary") return io::MatrixFormat::Binary;
  throw CLI::ValidationError("--format must be text or binary");
}

std::vector<Index> read_anchor_file(const fs::path& path) {
  std::istringstream in(io::read_text(path));
  std::vector<Index> anchors;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    try {
      anchors.push_back(static_cast<Index>(std::stoll(line)));
    } catch (const std::exception&) {
      throw io::ParseError(path, line_no, "expected one integer index per line");
    }
  }
  return anchors;
}

void write_anchor_file(const fs::path& path, const std::vector<Index>& anchors) {
  std::ostringstream os;
  for (Index a : anchors) os << a << '\n';
  io::write_text_atomic(path, os.str());
}

void write_tally_file(const fs::path& path, const VoteTally& tally) {
  std::ostringstream os;
  os << "index,score\n";
  for (std::size_t i = 0; i < tally.g_hat.size(); ++i) {
    os << i << ',' << format_double(tally.g_hat[i]) << '\n';
  }
  io::write_text_atomic(path, os.str());
}

void write_config(const fs::path& next_to, const io::RunConfig& cfg) {
  fs::path path = next_to;
  path += ".config";
  io::write_text_atomic(path, cfg.serialize());
}

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> out;
  std::istringstream in(csv);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stod(tok));
  }
  return out;
}

std::vector<Index> parse_index_list(const std::string& csv) {
  std::vector<Index> out;
  std::istringstream in(csv);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    if (!tok.empty()) out.push_back(static_cast<Index>(std::stoll(tok)));
  }
  return out;
}

struct PlanOptions {
  std::uint64_t seed = 0;
  Index s = 0;  // 0 = derive from k
  Index d = 2;
  std::string ensemble = "gaussian";

  void attach(CLI::App* cmd) {
    cmd->add_option("--seed", seed, "RNG seed");
    cmd->add_option("--s", s, "sub-problem count (default: 3k ln(k/0.05))")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--d", d, "projected dimension")->check(CLI::PositiveNumber);
    cmd->add_option("--ensemble", ensemble,
                    "gaussian | unit-axes | data-rows | sparse-sign");
  }

  ProjectionPlan plan(Index k) const {
    ProjectionPlan p;
    p.seed = seed;
    p.d = d;
    p.ensemble = ensemble_from_string(ensemble);
    p.s = s > 0 ? s : default_subproblem_count(k);
    return p;
  }

  void describe(io::RunConfig& cfg, const ProjectionPlan& p) const {
    cfg.set_int("seed", static_cast<std::int64_t>(p.seed));
    cfg.set_int("s", p.s);
    cfg.set_int("d", p.d);
    cfg.set("ensemble", to_string(p.ensemble));
  }
};

// ---------------------------------------------------------------- anchor --

int cmd_anchor(const fs::path& x_path, std::optional<fs::path> y_path, Index k,
               const PlanOptions& opts, const fs::path& out_anchors,
               const fs::path& out_tally) {
  DenseMatrix x = io::read_matrix(x_path);
  std::optional<ConicalHullProblem> problem;
  if (y_path) {
    problem = ConicalHullProblem::general_problem(x, io::read_matrix(*y_path), k);
  } else {
    problem = ConicalHullProblem::self_referential_problem(std::move(x), k);
  }
  ProjectionPlan plan = opts.plan(k);
  DcaResult result = dca(*problem, plan);

  write_anchor_file(out_anchors, result.anchors.indices);
  write_tally_file(out_tally, result.tally);

  io::RunConfig cfg;
  cfg.set("command", "anchor");
  cfg.set("x", x_path.string());
  cfg.set("y", y_path ? y_path->string() : "(self)");
  cfg.set_int("k", k);
  opts.describe(cfg, plan);
  cfg.set_int("s_effective", result.tally.s_effective);
  cfg.set("status", result.status == DcaStatus::Ok ? "ok"
               : result.status == DcaStatus::HighDiscardRate ? "high-discard-rate"
                                                             : "under-determined");
  write_config(out_anchors, cfg);

  if (!result.message.empty()) std::cerr << "conehull: " << result.message << '\n';
  return result.status == DcaStatus::UnderDetermined ? kExitUnderDetermined
                                                     : kExitOk;
}

// ---------------------------------------------------------------- reduce --

int cmd_reduce(const std::string& model, const std::vector<fs::path>& inputs,
               const fs::path& out_x, const fs::path& out_y, Index q,
               std::optional<double> omega_fraction, std::uint64_t seed,
               const std::string& views_spec, io::MatrixFormat format) {
  if (inputs.empty()) throw CLI::ValidationError("--input is required");
  json meta;
  meta["model"] = model;
  meta["seed"] = seed;

  DenseMatrix out_x_m, out_y_m;
  if (model == "nmf" || model == "sc") {
    DenseMatrix x = io::read_matrix(inputs.front());
    if (model == "nmf") require_nonnegative(x, "X");
    require_finite(x, "X");
    out_x_m = x;
    out_y_m = std::move(x);
    meta["self_referential"] = true;
  } else if (model == "lda") {
    CooccurrenceMatrix co = lda_cooccurrence(io::read_matrix(inputs.front()));
    meta["self_referential"] = true;
    meta["dropped_docs"] = co.dropped_docs;
    if (co.dropped_docs > 0) {
      std::cerr << "conehull: dropped " << co.dropped_docs
                << " documents shorter than 2 tokens\n";
    }
    out_x_m = co.q;
    out_y_m = std::move(co.q);
  } else if (model == "gmm" || model == "hmm") {
    MomentReduction red;
    if (model == "gmm") {
      MultiViewData views;
      if (!views_spec.empty()) {
        auto dims = parse_index_list(views_spec);
        if (dims.size() != 3) {
          throw CLI::ValidationError("--views needs three comma-separated widths");
        }
        DenseMatrix x = io::read_matrix(inputs.front());
        if (dims[0] + dims[1] + dims[2] != x.cols()) {
          throw std::runtime_error("--views widths must sum to the column count");
        }
        views.views[0] = x.leftCols(dims[0]);
        views.views[1] = x.middleCols(dims[0], dims[1]);
        views.views[2] = x.rightCols(dims[2]);
        meta["view_split"] = {dims[0], dims[1], dims[2]};
      } else if (inputs.size() == 3) {
        for (int v = 0; v < 3; ++v) views.views[v] = io::read_matrix(inputs[v]);
        meta["view_split"] = "three input files";
      } else {
        std::vector<std::vector<Index>> assignment;
        views = split_views(io::read_matrix(inputs.front()), seed, &assignment);
        meta["view_split"] = assignment;
      }
      if (q <= 0) q = std::max<Index>(2, 2);
      red = reduce_gmm(views, q, seed, omega_fraction);
    } else {
      std::vector<DenseMatrix> sequences;
      sequences.reserve(inputs.size());
      for (const auto& path : inputs) sequences.push_back(io::read_matrix(path));
      if (q <= 0) q = 2;
      red = reduce_hmm(sequences, q, seed);
    }
    meta["q"] = red.q;
    meta["moment_shape"] = {red.p_i, red.p_j};
    json etas = json::array();
    for (const auto& eta : red.etas) {
      json row = json::array();
      for (Index i = 0; i < eta.size(); ++i) row.push_back(eta[i]);
      etas.push_back(std::move(row));
    }
    meta["etas"] = std::move(etas);
    meta["omega"] = red.omega;
    out_x_m = std::move(red.x);
    out_y_m = std::move(red.y);
  } else {
    throw CLI::ValidationError("--model must be nmf|gmm|hmm|lda|sc");
  }

  io::write_matrix(out_x, out_x_m, format);
  io::write_matrix(out_y, out_y_m, format);
  fs::path meta_path = out_x;
  meta_path += ".meta.json";
  io::write_text_atomic(meta_path, meta.dump(2) + "\n");

  io::RunConfig cfg;
  cfg.set("command", "reduce");
  cfg.set("model", model);
  cfg.set_int("seed", static_cast<std::int64_t>(seed));
  cfg.set_int("q", q);
  if (omega_fraction) cfg.set_double("omega_fraction", *omega_fraction);
  write_config(out_x, cfg);
  return kExitOk;
}

// ------------------------------------------------------------------- fit --

int cmd_fit_nmf(const fs::path& x_path, const fs::path& anchors_path,
                const fs::path& out_f, io::MatrixFormat format) {
  DenseMatrix x = io::read_matrix(x_path);
  std::vector<Index> anchors = read_anchor_file(anchors_path);
  NmfFactors factors = nmf_factors(x, anchors);
  io::write_matrix(out_f, factors.f, format);
  json summary;
  summary["relative_residual"] = factors.relative_residual;
  summary["anchors"] = factors.anchors;
  fs::path sp = out_f;
  sp += ".summary.json";
  io::write_text_atomic(sp, summary.dump(2) + "\n");

  io::RunConfig cfg;
  cfg.set("command", "fit");
  cfg.set("model", "nmf");
  cfg.set("x", x_path.string());
  write_config(out_f, cfg);
  return kExitOk;
}

int cmd_fit_lda(const fs::path& q_path, const fs::path& anchors_path,
                double alpha0, const fs::path& out_o, io::MatrixFormat format) {
  DenseMatrix q = io::read_matrix(q_path);
  std::vector<Index> anchors = read_anchor_file(anchors_path);
  CoefficientSolve solve = solve_coefficients(
      q, q, anchors, CoefficientConstraint::NonNegAnchorsFixed);
  LdaParams params = recover_lda_params(solve.f, q, alpha0);

  io::write_matrix(out_o, params.o, format);
  fs::path f_path = out_o;
  f_path += ".f";
  io::write_matrix(f_path, params.f, format);
  fs::path alpha_path = out_o;
  alpha_path += ".alpha";
  DenseMatrix alpha_m(params.alpha.size(), 1);
  alpha_m.col(0) = params.alpha;
  io::write_matrix(alpha_path, alpha_m, format);

  json summary;
  summary["alpha0"] = alpha0;
  summary["alpha_clipped"] = params.alpha_clipped;
  summary["rank_deficient"] = solve.rank_deficient_warning;
  summary["relative_residual"] = solve.relative_frobenius_residual;
  fs::path sp = out_o;
  sp += ".summary.json";
  io::write_text_atomic(sp, summary.dump(2) + "\n");

  io::RunConfig cfg;
  cfg.set("command", "fit");
  cfg.set("model", "lda");
  cfg.set_double("alpha0", alpha0);
  write_config(out_o, cfg);
  return kExitOk;
}

int cmd_fit_hmm(const std::vector<fs::path>& obs_paths,
                const fs::path& anchors_path, const fs::path& out_o,
                const fs::path& out_t, io::MatrixFormat format) {
  std::vector<DenseMatrix> sequences;
  for (const auto& p : obs_paths) sequences.push_back(io::read_matrix(p));
  MultiViewData triples = hmm_triples(sequences);
  std::vector<Index> anchors = read_anchor_file(anchors_path);
  const Index k = static_cast<Index>(anchors.size());
  const Index p = triples.views[1].cols();
  DenseMatrix o(p, k), x_a3(p, k);
  for (Index j = 0; j < k; ++j) {
    if (anchors[j] < 0 || anchors[j] >= triples.samples()) {
      throw std::runtime_error("anchor index out of range of the triple count");
    }
    o.col(j) = triples.views[1].row(anchors[j]).transpose();
    x_a3.col(j) = triples.views[2].row(anchors[j]).transpose();
  }
  DenseMatrix t = recover_hmm_transition(o, x_a3);
  io::write_matrix(out_o, o, format);
  io::write_matrix(out_t, t, format);

  json summary;
  summary["states"] = k;
  summary["triples"] = triples.samples();
  fs::path sp = out_o;
  sp += ".summary.json";
  io::write_text_atomic(sp, summary.dump(2) + "\n");

  io::RunConfig cfg;
  cfg.set("command", "fit");
  cfg.set("model", "hmm");
  cfg.set_int("states", k);
  write_config(out_o, cfg);
  return kExitOk;
}

int cmd_fit_gmm(const fs::path& input, const fs::path& anchors_path,
                const fs::path& out_centers, io::MatrixFormat format) {
  DenseMatrix x = io::read_matrix(input);
  std::vector<Index> anchors = read_anchor_file(anchors_path);
  DenseMatrix centers(static_cast<Index>(anchors.size()), x.cols());
  for (std::size_t j = 0; j < anchors.size(); ++j) {
    if (anchors[j] < 0 || anchors[j] >= x.rows()) {
      throw std::runtime_error("anchor index out of range");
    }
    centers.row(static_cast<Index>(j)) = x.row(anchors[j]);
  }
  io::write_matrix(out_centers, centers, format);
  io::RunConfig cfg;
  cfg.set("command", "fit");
  cfg.set("model", "gmm");
  write_config(out_centers, cfg);
  return kExitOk;
}

int cmd_fit_sc(const fs::path& x_path, Index k_total, Index num_clusters,
               const PlanOptions& opts, const fs::path& out_labels,
               io::MatrixFormat format) {
  DenseMatrix x = io::read_matrix(x_path);
  ProjectionPlan plan = opts.plan(k_total);
  plan.s = opts.s > 0 ? opts.s : 8 * k_total;
  ScClusters clusters = cluster_anchors_sc(x, plan, k_total, num_clusters);

  DenseMatrix labels_m(static_cast<Index>(clusters.labels.size()), 1);
  for (std::size_t i = 0; i < clusters.labels.size(); ++i) {
    labels_m(static_cast<Index>(i), 0) = static_cast<double>(clusters.labels[i]);
  }
  io::write_matrix(out_labels, labels_m, format);

  std::ostringstream groups;
  for (const auto& group : clusters.anchor_groups) {
    for (std::size_t j = 0; j < group.size(); ++j) {
      if (j) groups << ' ';
      groups << group[j];
    }
    groups << '\n';
  }
  fs::path gp = out_labels;
  gp += ".groups";
  io::write_text_atomic(gp, groups.str());
  fs::path gm = out_labels;
  gm += ".cooccurrence";
  io::write_matrix(gm, clusters.g, format);

  if (clusters.degenerate_clustering) {
    std::cerr << "conehull: mean-shift produced a single cluster in every "
                 "sub-problem\n";
  }
  io::RunConfig cfg;
  cfg.set("command", "fit");
  cfg.set("model", "sc");
  cfg.set_int("k_total", k_total);
  cfg.set_int("num_clusters", static_cast<std::int64_t>(clusters.anchor_groups.size()));
  opts.describe(cfg, plan);
  write_config(out_labels, cfg);
  return kExitOk;
}

// ---------------------------------------------------------------- member --

int cmd_member(const fs::path& x_path, const fs::path& y_path,
               const PlanOptions& opts, std::optional<fs::path> out) {
  DenseMatrix x = io::read_matrix(x_path);
  DenseMatrix y = io::read_matrix(y_path);
  ProjectionPlan plan = opts.plan(std::max<Index>(1, y.rows()));
  plan.s = opts.s > 0 ? opts.s : 20;
  MembershipResult result = cone_membership(x, y, plan);

  std::ostringstream os;
  for (std::size_t i = 0; i < result.covered.size(); ++i) {
    os << i << ' ' << (result.covered[i] ? "covered" : "outside") << ' '
       << result.violations[i] << '\n';
  }
  if (out) {
    io::write_text_atomic(*out, os.str());
    io::RunConfig cfg;
    cfg.set("command", "member");
    opts.describe(cfg, plan);
    cfg.set_int("s_effective", result.s_effective);
    write_config(*out, cfg);
  } else {
    std::cout << os.str();
  }
  return kExitOk;
}

// ----------------------------------------------------------------- bench --

int cmd_bench(const std::string& suite, const fs::path& out_dir,
              const std::string& noise_csv, const std::string& variance_csv,
              const std::string& span_csv, const std::string& s_csv,
              Index seeds, Index n, Index p, Index k,
              const std::string& methods_csv, std::uint64_t seed) {
  using namespace conehull::bench;
  SyntheticSpec base;
  base.seed = seed;
  if (suite == "nmf") base.kind = SyntheticKind::SeparableNMF;
  else if (suite == "gmm") base.kind = SyntheticKind::GmmGrid;
  else if (suite == "sc") base.kind = SyntheticKind::ScGrid;
  else if (suite == "hmm") base.kind = SyntheticKind::HmmChain;
  else if (suite == "lda") base.kind = SyntheticKind::LdaCorpus;
  else throw CLI::ValidationError("--suite must be nmf|gmm|sc|hmm|lda");
  if (n > 0) base.n = n;
  if (p > 0) base.p = p;
  if (k > 0) base.k = k;

  std::vector<double> noises = noise_csv.empty() ? std::vector<double>{0.0}
                                                 : parse_double_list(noise_csv);
  std::vector<double> variances = variance_csv.empty()
                                      ? std::vector<double>{base.variance}
                                      : parse_double_list(variance_csv);
  std::vector<double> spans = span_csv.empty() ? std::vector<double>{base.span_angle_deg}
                                               : parse_double_list(span_csv);
  std::vector<Index> s_values =
      s_csv.empty() ? std::vector<Index>{0} : parse_index_list(s_csv);

  std::vector<Method> methods;
  {
    std::istringstream in(methods_csv.empty() ? std::string("dca") : methods_csv);
    std::string tok;
    while (std::getline(in, tok, ',')) {
      if (tok == "dca") methods.push_back(Method::Dca);
      else if (tok == "greedy") methods.push_back(Method::Greedy);
      else if (tok == "backward-removal") methods.push_back(Method::BackwardRemoval);
      else throw CLI::ValidationError("unknown method: " + tok);
    }
  }

  std::vector<SyntheticSpec> specs;
  for (double noise : noises) {
    for (double variance : variances) {
      for (double span : spans) {
        SyntheticSpec s = base;
        s.noise = noise;
        s.variance = variance;
        s.span_angle_deg = span;
        specs.push_back(s);
      }
    }
  }

  SweepResult result = run_sweep(specs, methods, s_values, seeds);
  fs::create_directories(out_dir);
  io::write_text_atomic(out_dir / "sweep.csv", result.csv);
  io::write_text_atomic(out_dir / "timings.csv", result.timings_csv);

  io::RunConfig cfg;
  cfg.set("command", "bench");
  cfg.set("suite", suite);
  cfg.set_int("seeds", seeds);
  cfg.set_int("seed", static_cast<std::int64_t>(seed));
  cfg.set("noise_levels", noise_csv);
  cfg.set("variance_levels", variance_csv);
  cfg.set("span_angles", span_csv);
  cfg.set("s_values", s_csv);
  io::write_text_atomic(out_dir / "config", cfg.serialize());
  Index failures = 0;
  for (const auto& row : result.rows) failures += row.failures;
  if (failures > 0) {
    std::cerr << "conehull: " << failures << " cell runs failed\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"divide-and-conquer anchoring for conical hull problems"};
  app.require_subcommand(1);

  std::string format_str = "text";
  app.add_option("--format", format_str, "matrix output format: text | binary")
      ->capture_default_str();

  // anchor
  auto* anchor = app.add_subcommand("anchor", "find the k anchor rows of Y");
  fs::path a_x, a_out_anchors = "anchors.txt", a_out_tally = "tally.csv";
  std::string a_y;
  Index a_k = 0;
  PlanOptions a_opts;
  anchor->add_option("--x", a_x, "matrix whose rows must be covered")->required();
  anchor->add_option("--y", a_y, "candidate generator matrix (default: X itself)");
  anchor->add_option("--k", a_k, "number of anchors")
      ->required()
      ->check(CLI::PositiveNumber);
  a_opts.attach(anchor);
  anchor->add_option("--out-anchors", a_out_anchors, "anchor index output file");
  anchor->add_option("--out-tally", a_out_tally, "vote tally CSV output");

  // reduce
  auto* reduce = app.add_subcommand("reduce", "build the (X, Y) instance for a model");
  std::string r_model;
  std::vector<fs::path> r_inputs;
  fs::path r_out_x = "reduced_x.mat", r_out_y = "reduced_y.mat";
  Index r_q = 0;
  double r_omega = 0.0;
  std::uint64_t r_seed = 0;
  std::string r_views;
  reduce->add_option("--model", r_model, "nmf | gmm | hmm | lda | sc")->required();
  reduce->add_option("--input", r_inputs, "input matrix file(s)")->required();
  reduce->add_option("--out-x", r_out_x, "output file for X");
  reduce->add_option("--out-y", r_out_y, "output file for Y");
  reduce->add_option("--q", r_q, "number of weighted moment equations");
  auto* omega_opt = reduce->add_option("--omega-fraction", r_omega,
                                       "subsample fraction of moment entries");
  reduce->add_option("--seed", r_seed, "RNG seed");
  reduce->add_option("--views", r_views, "gmm view widths, e.g. 20,12,16");

  // fit
  auto* fit = app.add_subcommand("fit", "turn anchors into model parameters");
  std::string f_model;
  fs::path f_anchors, f_x, f_out = "params.mat", f_out_t = "transition.mat";
  std::vector<fs::path> f_obs;
  double f_alpha0 = 1.0;
  Index f_k_total = 0, f_num_clusters = 0;
  PlanOptions f_opts;
  fit->add_option("--model", f_model, "nmf | gmm | hmm | lda | sc")->required();
  fit->add_option("--anchors", f_anchors, "anchor index file (from `anchor`)");
  fit->add_option("--x", f_x, "data / co-occurrence matrix file");
  fit->add_option("--obs", f_obs, "observation sequence file(s) (hmm)");
  fit->add_option("--alpha0", f_alpha0, "Dirichlet scale sum (lda)");
  fit->add_option("--k-total", f_k_total, "total anchors across clusters (sc)");
  fit->add_option("--num-clusters", f_num_clusters,
                  "cluster count (sc; 0 = automatic)");
  fit->add_option("--out", f_out, "primary parameter output file");
  fit->add_option("--out-t", f_out_t, "transition matrix output (hmm)");
  f_opts.attach(fit);

  // member
  auto* member = app.add_subcommand("member", "test cone membership per row of X");
  fs::path m_x, m_y;
  std::string m_out;
  PlanOptions m_opts;
  member->add_option("--x", m_x, "rows to test")->required();
  member->add_option("--y", m_y, "cone generator matrix")->required();
  member->add_option("--out", m_out, "output file (default: stdout)");
  m_opts.attach(member);

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "run a synthetic benchmark sweep");
  std::string b_suite, b_noise, b_variance, b_span, b_s, b_methods;
  fs::path b_out = "bench-out";
  Index b_seeds = 10, b_n = 0, b_p = 0, b_k = 0;
  std::uint64_t b_seed = 0;
  bench_cmd->add_option("--suite", b_suite, "nmf | gmm | sc | hmm | lda")->required();
  bench_cmd->add_option("--out", b_out, "output directory");
  bench_cmd->add_option("--noise-levels", b_noise, "comma-separated noise levels");
  bench_cmd->add_option("--variance-levels", b_variance, "comma-separated variances");
  bench_cmd->add_option("--span-angles", b_span, "comma-separated span angles (sc)");
  bench_cmd->add_option("--s-values", b_s, "comma-separated sub-problem counts");
  bench_cmd->add_option("--seeds", b_seeds, "trials per cell")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--n", b_n, "instance rows / samples per cluster");
  bench_cmd->add_option("--p", b_p, "feature dimension");
  bench_cmd->add_option("--k", b_k, "anchors / clusters / states / topics");
  bench_cmd->add_option("--methods", b_methods, "dca,greedy,backward-removal");
  bench_cmd->add_option("--seed", b_seed, "base RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    io::MatrixFormat format = parse_format(format_str);
    if (anchor->parsed()) {
      std::optional<fs::path> y;
      if (!a_y.empty()) y = fs::path(a_y);
      return cmd_anchor(a_x, y, a_k, a_opts, a_out_anchors, a_out_tally);
    }
    if (reduce->parsed()) {
      std::optional<double> omega;
      if (omega_opt->count() > 0) omega = r_omega;
      return cmd_reduce(r_model, r_inputs, r_out_x, r_out_y, r_q, omega, r_seed,
                        r_views, format);
    }
    if (fit->parsed()) {
      if (f_model == "nmf") return cmd_fit_nmf(f_x, f_anchors, f_out, format);
      if (f_model == "lda") return cmd_fit_lda(f_x, f_anchors, f_alpha0, f_out, format);
      if (f_model == "hmm") return cmd_fit_hmm(f_obs, f_anchors, f_out, f_out_t, format);
      if (f_model == "gmm") return cmd_fit_gmm(f_x, f_anchors, f_out, format);
      if (f_model == "sc") {
        if (f_k_total < 1) throw CLI::ValidationError("--k-total is required for sc");
        return cmd_fit_sc(f_x, f_k_total, f_num_clusters, f_opts, f_out, format);
      }
      throw CLI::ValidationError("--model must be nmf|gmm|hmm|lda|sc");
    }
    if (member->parsed()) {
      std::optional<fs::path> out;
      if (!m_out.empty()) out = fs::path(m_out);
      return cmd_member(m_x, m_y, m_opts, out);
    }
    if (bench_cmd->parsed()) {
      return cmd_bench(b_suite, b_out, b_noise, b_variance, b_span, b_s, b_seeds,
                       b_n, b_p, b_k, b_methods, b_seed);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "conehull: " << e.what() << '\n';
    return kExitUsage;
  } catch (const io::ParseError& e) {
    std::cerr << "conehull: " << e.what() << '\n';
    return kExitDataError;
  } catch (const std::exception& e) {
    std::cerr << "conehull: " << e.what() << '\n';
    return kExitDataError;
  }
  return kExitOk;
}
