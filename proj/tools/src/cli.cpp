// Copyright 2026 The mrsplit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mrsplit_cli/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mrsplit/error.hpp"
#include "mrsplit/graph.hpp"
#include "mrsplit/ordering.hpp"
#include "mrsplit/split.hpp"
#include "mrsplit/trainer.hpp"
#include "mrsplit/trajectory.hpp"
#include "mrsplit/verify.hpp"

namespace mrs::cli {
namespace {

using json = nlohmann::json;

/// I/O failures map to the usage exit code.
struct IoError : Error {
  using Error::Error;
};

struct Common {
  std::string input;
  std::string output = "-";
  std::uint64_t seed = 0;
  std::string ordering = "degree";
  std::string format;
  double ppr_alpha = 0.1;
  int ppr_iters = 15;
};

void add_common(CLI::App& cmd, Common& c, bool needs_input) {
  auto* in = cmd.add_option("--input,-i", c.input, "Input edge list");
  if (needs_input) in->required();
  cmd.add_option("--output,-o", c.output, "Output path, '-' for stdout")->capture_default_str();
  cmd.add_option("--seed", c.seed, "Seed for every random choice")->capture_default_str();
  cmd.add_option("--ordering", c.ordering, "random | features | ppr | degree")->capture_default_str();
  cmd.add_option("--ppr-alpha", c.ppr_alpha, "PPR restart probability")->capture_default_str();
  cmd.add_option("--ppr-iters", c.ppr_iters, "PPR power iterations")->capture_default_str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path == "-") {
    out << content;
    out.flush();
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot write '" + path + "'");
  file << content;
  if (!file.flush()) throw IoError("write to '" + path + "' failed");
}

EdgeListFormat input_format(const std::string& format, const std::string& path) {
  if (format == "tsv") return EdgeListFormat::tsv;
  if (format == "json") return EdgeListFormat::json;
  if (!format.empty()) throw Error("unknown input format '" + format + "' (tsv or json)");
  const bool is_json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
  return is_json ? EdgeListFormat::json : EdgeListFormat::tsv;
}

Graph load_graph(const Common& c, bool undirected) {
  std::istringstream in(read_file(c.input));
  return load_edge_list(in, input_format(c.format, c.input), undirected);
}

/// Whitespace-separated dense rows, one per node.
Matrix load_features(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::vector<double> row;
    double v = 0.0;
    while (ls >> v) row.push_back(v);
    if (!ls.eof()) throw ParseError("non-numeric feature value", line_no);
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError("feature rows differ in width", line_no);
    rows.push_back(std::move(row));
  }
  Matrix x(static_cast<Eigen::Index>(rows.size()), rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return x;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json margin_json(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

// ---------------------------------------------------------------- split

struct SplitArgs {
  Common common;
  bool undirected = false;
  std::string features;
};

int cmd_split(const SplitArgs& a, std::ostream& out) {
  const Graph g = load_graph(a.common, a.undirected);
  const auto method = parse_ordering_method(a.common.ordering);
  OrderingScores scores;
  switch (method) {
    case OrderingMethod::random:
      scores = order_random(g.num_nodes(), a.common.seed);
      break;
    case OrderingMethod::features: {
      if (a.features.empty()) throw Error("--ordering features requires --features");
      const Matrix x = load_features(a.features);
      if (static_cast<std::size_t>(x.rows()) != g.num_nodes())
        throw DimensionError("feature file has " + std::to_string(x.rows()) + " rows for " +
                             std::to_string(g.num_nodes()) + " nodes");
      scores = order_feature_sum(x);
      break;
    }
    case OrderingMethod::ppr:
      scores = g.num_nodes() == 0 ? OrderingScores{{}, method, 0} : order_ppr(g, a.common.ppr_alpha, a.common.ppr_iters);
      break;
    case OrderingMethod::degree:
      scores = order_degree(g);
      break;
  }
  const MultiRelGraph mrg = split_edges(g, scores);
  json doc;
  doc["n"] = g.num_nodes();
  doc["ordering"] = std::string(to_string(method));
  doc["seed"] = a.common.seed;
  static const char* names[] = {"E1", "E2", "E3"};
  for (std::size_t k = 0; k < 3; ++k) {
    json rel = json::array();
    for (auto e : mrg.relation_edges(k)) {
      const auto& edge = g.edge(e);
      json arc = {edge.src, edge.dst};
      if (edge.weight != 1.0) arc.push_back(edge.weight);
      rel.push_back(std::move(arc));
    }
    doc[names[k]] = std::move(rel);
  }
  doc["scores"] = scores.scores;
  emit(a.common.output, doc.dump() + "\n", out);
  return kSuccess;
}

// ------------------------------------------------------------ rod-trace

struct RodArgs {
  Common common;
  std::size_t trials = 50;
  std::size_t layers = 128;
  Eigen::Index dim = 16;
  std::vector<std::string> variants{"gcn", "sage"};
  std::string activation = "relu";
  std::size_t min_nodes = 15;
  std::size_t max_nodes = 30;
  bool no_bias = false;
};

int cmd_rod_trace(const RodArgs& a, std::ostream& out) {
  if (!a.common.format.empty() && a.common.format != "csv")
    throw Error("rod-trace writes csv only");
  if (a.min_nodes < 1 || a.max_nodes < a.min_nodes) throw Error("node range must satisfy 1 <= min <= max");
  RodTraceConfig c;
  c.graphs = a.trials;
  c.graph_params.min_nodes = a.min_nodes;
  c.graph_params.max_nodes = a.max_nodes;
  c.layers = a.layers;
  c.dim = a.dim;
  c.input_dim = a.dim;
  c.activation = parse_activation(a.activation);
  c.ordering = parse_ordering_method(a.common.ordering);
  c.ppr_alpha = a.common.ppr_alpha;
  c.ppr_iters = a.common.ppr_iters;
  c.variants.clear();
  for (const auto& v : a.variants) c.variants.push_back(parse_variant(v));
  c.default_bias = !a.no_bias;
  c.seed = a.common.seed;
  std::ostringstream csv;
  write_rod_trace_csv(csv, rod_trace(c));
  emit(a.common.output, csv.str(), out);
  return kSuccess;
}

// --------------------------------------------------------------- verify

struct VerifyArgs {
  Common common;
  std::optional<std::size_t> trials;
  std::size_t layers = 16;
  bool undirected = false;
  bool single_relation = false;
  std::string normalization = "sym_gcn";
};

json report_json(const VerificationReport& r) {
  return {{"theorem", r.theorem},   {"trials", r.trials},
          {"failures", r.failures}, {"min_margin", margin_json(r.min_margin)},
          {"seed", r.seed},         {"passed", r.passed()},
          {"details", r.details}};
}

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  if (!a.common.format.empty() && a.common.format != "json") throw Error("verify writes json only");
  auto trials = [&](std::size_t fallback) { return a.trials.value_or(fallback); };
  const std::uint64_t s = a.common.seed;
  std::vector<VerificationReport> reports;
  reports.push_back(verify_rank_theorem_random(trials(500), derive_seed(s, 1)));
  reports.push_back(verify_independence_random(trials(500), derive_seed(s, 2)));
  reports.push_back(verify_zero_convergence(trials(100), derive_seed(s, 3)));
  reports.push_back(verify_dag_pair_rank(trials(200), a.layers, derive_seed(s, 4)));
  reports.push_back(verify_ergodic_dependence(trials(20), derive_seed(s, 5)));
  reports.push_back(verify_dar_independence(trials(100), derive_seed(s, 6)));
  reports.push_back(verify_leaf_self_loops(trials(50), a.layers, derive_seed(s, 7)));
  if (!a.common.input.empty()) {
    const Graph g = load_graph(a.common, a.undirected);
    MultiRelGraph mrg = single_relation(g);
    if (!a.single_relation) {
      const auto method = parse_ordering_method(a.common.ordering);
      if (method == OrderingMethod::features) throw Error("verify --input supports random, ppr or degree orderings");
      const OrderingScores scores = method == OrderingMethod::random ? order_random(g.num_nodes(), s)
                                    : method == OrderingMethod::ppr ? order_ppr(g, a.common.ppr_alpha, a.common.ppr_iters)
                                                                    : order_degree(g);
      mrg = split_edges(g, scores);
    }
    const auto ops = normalize(mrg, parse_normalization(a.normalization));
    auto report = verify_rank_theorem(ops, trials(100), derive_seed(s, 8));
    report.theorem += a.single_relation ? " (input, single relation)" : " (input)";
    reports.push_back(std::move(report));
  }

  json bundle;
  bundle["seed"] = s;
  bundle["reports"] = json::array();
  bool passed = true;
  std::size_t total_trials = 0;
  for (const auto& r : reports) {
    bundle["reports"].push_back(report_json(r));
    passed = passed && r.passed();
    total_trials += r.trials;
    for (const auto& d : r.details) err << r.theorem << ": " << d << "\n";
  }
  bundle["passed"] = passed;
  if (total_trials == 0) err << "warning: no trials ran; the pass is vacuous\n";
  emit(a.common.output, bundle.dump(2) + "\n", out);
  if (!passed) {
    for (const auto& r : reports)
      if (!r.passed()) err << "FAILED " << r.theorem << ": " << r.failures << " of " << r.trials << " trials\n";
    return kVerificationFailure;
  }
  return kSuccess;
}

// ---------------------------------------------------------------- train

struct TrainArgs {
  Common common;
  std::string variant = "gcn";
  std::size_t layers = 4;
  Eigen::Index dim = 32;
  std::size_t trials = 3;
  std::size_t epochs = 300;
  std::vector<double> lr{0.1, 0.3, 1.0, 3.0};
  std::size_t graphs = 128;
  std::string activation = "relu";
  std::string jk = "none";
  bool residual = false;
  bool tied = false;
};

int cmd_train(const TrainArgs& a, std::ostream& out, std::ostream& err) {
  if (!a.common.format.empty() && a.common.format != "csv") throw Error("train writes csv only");
  if (a.lr.empty()) throw Error("at least one learning rate is required");
  ModelConfig base;
  base.variant = parse_variant(a.variant);
  base.layers = a.layers;
  base.width = a.dim;
  base.epochs = a.epochs;
  base.activation = parse_activation(a.activation);
  base.ordering = parse_ordering_method(a.common.ordering);
  base.ppr_alpha = a.common.ppr_alpha;
  base.ppr_iters = a.common.ppr_iters;
  base.residual = a.residual;
  base.jk = parse_jk_mode(a.jk);
  base.tied_init = a.tied;
  base.learning_rate = a.lr.front();
  validate(base);

  const std::string base_name(to_string(base.variant));
  const std::string names[2] = {base_name, "mrs-" + base_name};
  std::ostringstream csv;
  csv << "seed,model,lr,epoch,train_mae\n";
  std::size_t wins = 0;
  bool diverged = false;
  double final_sum[2] = {0.0, 0.0};
  for (std::size_t t = 0; t < a.trials; ++t) {
    const std::uint64_t seed = a.common.seed + t;
    SyntheticTaskParams tp;
    tp.count = a.graphs;
    tp.seed = seed;
    const SyntheticTask task = make_synthetic_task(tp);
    double final[2];
    for (int m = 0; m < 2; ++m) {
      // Tune the step over the grid; keep the run with the lowest final loss.
      std::optional<TrainResult> best;
      double best_lr = 0.0;
      for (double lr : a.lr) {
        ModelConfig c = base;
        c.multi_relational = m == 1;
        c.learning_rate = lr;
        c.seed = seed;
        TrainResult r = train(task, c);
        const bool better = !r.diverged && (!best || best->diverged || r.trace.back() < best->trace.back());
        if (!best || better) {
          best = std::move(r);
          best_lr = lr;
        }
      }
      if (best->diverged) {
        diverged = true;
        err << "warning: " << names[m] << " diverged for seed " << seed << "\n";
      }
      for (std::size_t e = 0; e < best->trace.size(); ++e)
        csv << seed << ',' << names[m] << ',' << format_double(best_lr) << ',' << e << ','
            << format_double(best->trace[e]) << '\n';
      final[m] = best->trace.back();
      final_sum[m] += final[m];
    }
    if (final[1] < final[0]) ++wins;
  }
  emit(a.common.output, csv.str(), out);
  std::ostream& summary = a.common.output == "-" ? err : out;
  const double count = a.trials == 0 ? 1.0 : static_cast<double>(a.trials);
  summary << "summary: " << names[1] << " below " << names[0] << " in " << wins << "/" << a.trials
          << " seeds; mean final train MAE " << names[0] << "=" << format_double(final_sum[0] / count) << " "
          << names[1] << "=" << format_double(final_sum[1] / count) << "; winner "
          << (a.trials > 0 && wins == a.trials ? names[1] : (wins == 0 ? names[0] : "mixed")) << "\n";
  return diverged ? kVerificationFailure : kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-relational split message passing: split, trace, verify, train"};
  app.name("mrsplit");
  app.require_subcommand(1);

  SplitArgs split_args;
  auto* split = app.add_subcommand("split", "Partition a graph into E1/E2/E3 relations");
  add_common(*split, split_args.common, true);
  split->add_option("--format", split_args.common.format, "Input format: tsv | json (default by extension)");
  split->add_flag("--undirected", split_args.undirected, "Expand TSV edges to both arcs");
  split->add_option("--features", split_args.features, "Dense feature rows for --ordering features");

  RodArgs rod_args;
  auto* rod = app.add_subcommand("rod-trace", "Rank-one distance over deep random-weight iterations");
  add_common(*rod, rod_args.common, false);
  rod->add_option("--format", rod_args.common.format, "Output format: csv");
  rod->add_option("--trials", rod_args.trials, "Number of random graphs")->capture_default_str();
  rod->add_option("--layers", rod_args.layers, "Message-passing iterations")->capture_default_str();
  rod->add_option("--dim", rod_args.dim, "Feature width")->capture_default_str()->check(CLI::PositiveNumber);
  rod->add_option("--variant", rod_args.variants, "Base variants (gcn, sage, gat, gin, gatedgcn)")
      ->delimiter(',')
      ->capture_default_str();
  rod->add_option("--activation", rod_args.activation, "identity | relu | sigmoid | leaky_relu[:s]")
      ->capture_default_str();
  rod->add_option("--min-nodes", rod_args.min_nodes, "Smallest random graph")->capture_default_str();
  rod->add_option("--max-nodes", rod_args.max_nodes, "Largest random graph")->capture_default_str();
  rod->add_flag("--no-bias", rod_args.no_bias, "Drop the default SAGE bias");

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "Run the seeded theorem checks");
  add_common(*verify, verify_args.common, false);
  verify->add_option("--format", verify_args.common.format, "Output format: json");
  verify->add_option("--trials", verify_args.trials, "Trials per check (default: per-check counts)");
  verify->add_option("--layers", verify_args.layers, "Depth of the iterated checks")->capture_default_str();
  verify->add_flag("--undirected", verify_args.undirected, "Expand TSV edges of --input to both arcs");
  verify->add_flag("--single-relation", verify_args.single_relation, "Check --input without splitting");
  verify->add_option("--normalization", verify_args.normalization, "raw | sym_gcn | row_mean for --input")
      ->capture_default_str();

  TrainArgs train_args;
  auto* trainc = app.add_subcommand("train", "Base versus MRS training on the synthetic task");
  add_common(*trainc, train_args.common, false);
  trainc->add_option("--format", train_args.common.format, "Output format: csv");
  trainc->add_option("--variant", train_args.variant, "gcn | sage | gin")->capture_default_str();
  trainc->add_option("--layers", train_args.layers, "Message-passing layers")->capture_default_str();
  trainc->add_option("--dim", train_args.dim, "Hidden width")->capture_default_str()->check(CLI::PositiveNumber);
  trainc->add_option("--trials", train_args.trials, "Number of seeds")->capture_default_str();
  trainc->add_option("--epochs", train_args.epochs, "Gradient steps")->capture_default_str();
  trainc->add_option("--lr", train_args.lr, "Step size grid, tuned per model")->delimiter(',')->capture_default_str();
  trainc->add_option("--graphs", train_args.graphs, "Training graphs per seed")->capture_default_str();
  trainc->add_option("--activation", train_args.activation, "Layer activation")->capture_default_str();
  trainc->add_option("--jk", train_args.jk, "none | cat | max")->capture_default_str();
  trainc->add_flag("--residual", train_args.residual, "Add the previous state to each layer");
  trainc->add_flag("--tied", train_args.tied, "Initialise all relations from relation 0");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (split->parsed()) return cmd_split(split_args, out);
    if (rod->parsed()) return cmd_rod_trace(rod_args, out);
    if (verify->parsed()) return cmd_verify(verify_args, out, err);
    if (trainc->parsed()) return cmd_train(train_args, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace mrs::cli
