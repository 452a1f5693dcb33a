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

#include "mrsplit/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mrsplit/convolution.hpp"
#include "mrsplit/ensemble.hpp"
#include "mrsplit/error.hpp"
#include "mrsplit/ordering.hpp"
#include "mrsplit/rng.hpp"

namespace mrs {
namespace {

constexpr std::size_t kMaxDetails = 5;

const Activation kLeaky = Activation::leaky_relu(0.01);

VerificationReport make_report(std::string theorem, std::uint64_t seed) {
  VerificationReport r;
  r.theorem = std::move(theorem);
  r.seed = seed;
  r.min_margin = std::numeric_limits<double>::infinity();
  return r;
}

void finish(VerificationReport& r) {
  if (r.trials == 0) r.min_margin = std::numeric_limits<double>::quiet_NaN();
}

void record(VerificationReport& r, bool ok, double margin, const std::string& what) {
  r.min_margin = std::min(r.min_margin, margin);
  if (ok) return;
  ++r.failures;
  if (r.details.size() < kMaxDetails) r.details.push_back(what);
}

// Merges a single-trial sub-report into `into` as one trial.
void absorb(VerificationReport& into, const VerificationReport& sub, std::size_t trial) {
  ++into.trials;
  if (sub.trials == 0) return;
  into.min_margin = std::min(into.min_margin, sub.min_margin);
  if (!sub.passed()) {
    ++into.failures;
    if (into.details.size() < kMaxDetails)
      into.details.push_back("trial " + std::to_string(trial) + ": " +
                             (sub.details.empty() ? std::string("failed") : sub.details.front()));
  }
}

// sigma_r / sigma_max, 1 when nothing is required.
double relative_singular(const Matrix& m, std::size_t r) {
  if (r == 0) return 1.0;
  const auto s = singular_values(m);
  if (s.size() < static_cast<Eigen::Index>(r) || !(s(0) > 0.0)) return 0.0;
  return s(static_cast<Eigen::Index>(r) - 1) / s(0);
}

Matrix rank_one(Eigen::Index rows, Eigen::Index cols, SplitMix64& rng) {
  const Eigen::VectorXd u = uniform_matrix(rows, 1, -1.0, 1.0, rng).col(0);
  const Eigen::RowVectorXd v = uniform_matrix(1, cols, -1.0, 1.0, rng).row(0);
  return u * v;
}

std::vector<Matrix> random_transforms(std::size_t count, Eigen::Index in_dim, Eigen::Index out_dim,
                                      SplitMix64& rng) {
  std::vector<Matrix> ws;
  ws.reserve(count);
  for (std::size_t k = 0; k < count; ++k) ws.push_back(uniform_matrix(in_dim, out_dim, -1.0, 1.0, rng));
  return ws;
}

Matrix linear_combination(const Matrix& x, std::span<const RelationOperator> ops,
                          const std::vector<Matrix>& ws) {
  return mrs_linear_layer(x, ops, ws, Activation::identity());
}

std::size_t node_count(std::size_t lo, std::size_t hi, SplitMix64& rng) {
  return lo + static_cast<std::size_t>(rng.below(hi - lo + 1));
}

// Sparse relation with uniform(-2, 2) weights, each arc present with `density`.
RelationOperator random_weighted_relation(std::size_t n, double density, SplitMix64& rng) {
  std::vector<Eigen::Triplet<double>> t;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (rng.bernoulli(density)) {
        double w = rng.uniform(-2.0, 2.0);
        if (w == 0.0) w = 1.0;
        t.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j), w);
      }
  const auto dim = static_cast<Eigen::Index>(n);
  RelationOperator op{SparseMatrix(dim, dim), Normalization::raw};
  op.matrix.setFromTriplets(t.begin(), t.end());
  return op;
}

}  // namespace

VerificationReport verify_rank_theorem(std::span<const RelationOperator> ops, std::size_t trials,
                                       std::uint64_t seed, Eigen::Index in_dim, Eigen::Index out_dim) {
  auto report = make_report("structural_independence_rank", seed);
  if (ops.empty()) throw Error("verify_rank_theorem: no relations given");
  const Matrix e = in_degree_matrix(ops);
  const auto required = numeric_rank(e);
  const auto n = ops.front().matrix.rows();
  for (std::size_t t = 0; t < trials; ++t) {
    SplitMix64 rng(derive_seed(seed, t));
    const Matrix x = rank_one(n, in_dim, rng);
    const auto ws = random_transforms(ops.size(), in_dim, out_dim, rng);
    const Matrix y = linear_combination(x, ops, ws);
    ++report.trials;
    for (const auto& act : {Activation::identity(), kLeaky}) {
      const Matrix out = act.apply(y);
      const auto rank = numeric_rank(out);
      record(report, rank >= required, relative_singular(out, required),
             "trial " + std::to_string(t) + " (" + to_string(act) + "): rank " + std::to_string(rank) +
                 " < rank(E) = " + std::to_string(required));
    }
  }
  finish(report);
  return report;
}

VerificationReport verify_independence_theorem(std::span<const RelationOperator> ops,
                                               std::pair<NodeId, NodeId> pair, std::size_t trials,
                                               std::uint64_t seed, Eigen::Index in_dim,
                                               Eigen::Index out_dim) {
  auto report = make_report("independent_pair_representations", seed);
  if (ops.empty()) throw Error("verify_independence_theorem: no relations given");
  const auto n = ops.front().matrix.rows();
  const auto [i, j] = pair;
  if (i >= n || j >= n) throw Error("verify_independence_theorem: node pair out of range");
  const Matrix e = in_degree_matrix(ops);
  if (!structurally_independent(e.row(i).transpose(), e.row(j).transpose())) {
    report.details.push_back("pair is structurally dependent; nothing asserted");
    finish(report);
    return report;
  }
  for (std::size_t t = 0; t < trials; ++t) {
    SplitMix64 rng(derive_seed(seed, t));
    const Matrix x = rank_one(n, in_dim, rng);
    const auto ws = random_transforms(ops.size(), in_dim, out_dim, rng);
    const Matrix y = linear_combination(x, ops, ws);
    Matrix rows(2, out_dim);
    rows.row(0) = y.row(i);
    rows.row(1) = y.row(j);
    ++report.trials;
    for (const auto& act : {Activation::identity(), kLeaky}) {
      const Matrix out = act.apply(rows);
      record(report, numeric_rank(out) == 2, relative_singular(out, 2),
             "trial " + std::to_string(t) + " (" + to_string(act) + "): rows " + std::to_string(i) +
                 " and " + std::to_string(j) + " are linearly dependent");
    }
  }
  finish(report);
  return report;
}

VerificationReport verify_rank_theorem_random(std::size_t trials, std::uint64_t seed) {
  auto report = make_report("structural_independence_rank", seed);
  constexpr OrderingMethod methods[] = {OrderingMethod::degree, OrderingMethod::random, OrderingMethod::ppr};
  constexpr Normalization modes[] = {Normalization::sym_gcn, Normalization::row_mean, Normalization::raw};
  for (std::size_t t = 0; t < trials; ++t) {
    SplitMix64 rng(derive_seed(seed, t));
    const auto n = node_count(4, 30, rng);
    const Graph g = random_connected_graph(n, rng.uniform(0.1, 0.8), rng);
    const auto method = methods[t % 3];
    OrderingScores scores = method == OrderingMethod::degree ? order_degree(g)
                            : method == OrderingMethod::random ? order_random(n, rng())
                                                               : order_ppr(g);
    const auto ops = normalize(split_edges(g, scores), modes[rng.below(3)]);
    absorb(report, verify_rank_theorem(ops, 1, rng()), t);
  }
  finish(report);
  return report;
}

VerificationReport verify_independence_random(std::size_t trials, std::uint64_t seed) {
  auto report = make_report("independent_pair_representations", seed);
  for (std::size_t t = 0; t < trials; ++t) {
    SplitMix64 rng(derive_seed(seed, t));
    std::vector<RelationOperator> ops;
    std::vector<std::pair<NodeId, NodeId>> candidates;
    // Redraw until the instance has an independent pair; a split graph
    // almost always does, random weighted relations always do for n >= 6.
    while (candidates.empty()) {
      const auto n = node_count(6, 30, rng);
      if (rng.bernoulli(0.5)) {
        const Graph g = random_connected_graph(n, rng.uniform(0.1, 0.8), rng);
        ops = normalize(split_edges(g, order_degree(g)),
                        rng.bernoulli(0.5) ? Normalization::row_mean : Normalization::sym_gcn);
      } else {
        ops.clear();
        const auto l = 2 + rng.below(2);
        for (std::size_t k = 0; k < l; ++k) ops.push_back(random_weighted_relation(n, 0.25, rng));
      }
      const Matrix e = in_degree_matrix(ops);
      for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j)
          if (structurally_independent(e.row(i).transpose(), e.row(j).transpose()))
            candidates.emplace_back(i, j);
    }
    const auto pair = candidates[rng.below(candidates.size())];
    absorb(report, verify_independence_theorem(ops, pair, 1, rng()), t);
  }
  finish(report);
  return report;
}

VerificationReport verify_zero_convergence(std::size_t trials, std::uint64_t seed) {
  auto report = make_report("dag_zero_convergence", seed);
  constexpr Eigen::Index dim = 8;
  for (std::size_t t = 0; t < trials; ++t) {
    SplitMix64 rng(derive_seed(seed, t));
    const auto n = node_count(2, 30, rng);
    const Graph dag = random_dag(n, rng.uniform(0.05, 0.4), rng);
    const RelationOperator op = graph_operator(dag, Normalization::row_mean);
    const auto steps = longest_path_length(dag) + 1;
    const Matrix x0 = uniform_matrix(static_cast<Eigen::Index>(n), dim, -1.0, 1.0, rng);
    const auto states = iterate(x0, steps, [&](const Matrix& x, std::size_t) {
      const Matrix w = uniform_matrix(dim, dim, -1.0, 1.0, rng);
      return Activation::relu().apply(op.matrix * (x * w));
    });
    const double peak = states.back().cwiseAbs().maxCoeff();
    ++report.trials;
    record(report, peak == 0.0, -peak,
           "trial " + std::to_string(t) + ": max |x| = " + std::to_string(peak) + " after " +
               std::to_string(steps) + " layers");
  }
  finish(report);
  return report;
}

VerificationReport verify_dag_pair_rank(std::size_t trials, std::size_t depth, std::uint64_t seed) {
  auto report = make_report("dag_pair_prevents_rank_collapse", seed);
  constexpr Eigen::Index dim = 8;
  for (std::size_t t = 0; t < trials; ++t) {
    SplitMix64 rng(derive_seed(seed, t));
    const auto n = node_count(2, 30, rng);
    const Graph dag = random_dag(n, rng.uniform(0.05, 0.3), rng, true);
    const auto [forward, backward] = dar_pair_from_dag(dag);
    const std::vector<RelationOperator> ops{forward, backward};
    const Matrix x0 = uniform_matrix(static_cast<Eigen::Index>(n), dim, -1.0, 1.0, rng);
    ++report.trials;
    for (const auto& act : {Activation::identity(), kLeaky}) {
      Matrix x = x0;
      for (std::size_t layer = 1; layer <= depth; ++layer) {
        x = mrs_linear_layer(x, ops, random_transforms(2, dim, dim, rng), act);
        const bool nonzero = rows_nonzero(x);
        const auto rank = numeric_rank(x);
        record(report, nonzero && rank >= 2, nonzero ? relative_singular(x, 2) : 0.0,
               "trial " + std::to_string(t) + " (" + to_string(act) + ") layer " +
                   std::to_string(layer) + ": " + (nonzero ? "rank " + std::to_string(rank) : "zero row"));
      }
    }
  }
  finish(report);
  return report;
}

VerificationReport verify_ergodic_dependence(std::size_t instances, std::uint64_t seed) {
  auto report = make_report("ergodic_relations_dependent", seed);
  for (std::size_t t = 0; t < instances; ++t) {
    SplitMix64 rng(derive_seed(seed, t));
    const auto n = node_count(2, 30, rng);
    const auto l = 1 + t % 3;
    std::vector<RelationOperator> ops;
    for (std::size_t k = 0; k < l; ++k)
      ops.push_back(graph_operator(random_ergodic_graph(n, rng.uniform(0.0, 0.3), rng), Normalization::row_mean));
    const Matrix e = in_degree_matrix(ops);
    const auto rank = numeric_rank(e);
    ++report.trials;
    record(report, rank == 1, l > 1 ? -relative_singular(e, 2) : 0.0,
           "instance " + std::to_string(t) + ": rank(E) = " + std::to_string(rank));
  }
  finish(report);
  return report;
}

VerificationReport verify_dar_independence(std::size_t trials, std::uint64_t seed) {
  auto report = make_report("dar_pair_has_independent_nodes", seed);
  for (std::size_t t = 0; t < trials; ++t) {
    SplitMix64 rng(derive_seed(seed, t));
    std::vector<RelationOperator> ops;
    while (true) {
      const auto n = node_count(3, 30, rng);
      const Graph a = random_dag(n, rng.uniform(0.05, 0.4), rng, false, 0.5, 2.0);
      const Graph b = random_dag(n, rng.uniform(0.05, 0.4), rng, false, 0.5, 2.0);
      if (a.num_edges() == 0 || b.num_edges() == 0) continue;
      bool same_roots = true;
      for (NodeId v = 0; v < n && same_roots; ++v)
        same_roots = (a.in_degree(v) == 0) == (b.in_degree(v) == 0);
      if (same_roots) continue;
      ops = {graph_operator(a, Normalization::raw), graph_operator(b, Normalization::raw)};
      break;
    }
    const Matrix e = in_degree_matrix(ops);
    double best = 0.0;
    bool found = false;
    for (Eigen::Index i = 0; i < e.rows(); ++i) {
      for (Eigen::Index j = i + 1; j < e.rows(); ++j) {
        Matrix pair(2, e.cols());
        pair.row(0) = e.row(i);
        pair.row(1) = e.row(j);
        best = std::max(best, relative_singular(pair, 2));
        found = found || structurally_independent(e.row(i).transpose(), e.row(j).transpose());
      }
    }
    ++report.trials;
    record(report, found, best, "trial " + std::to_string(t) + ": no structurally independent pair");
  }
  finish(report);
  return report;
}

VerificationReport verify_leaf_self_loops(std::size_t trials, std::size_t depth, std::uint64_t seed) {
  auto report = make_report("dag_leaf_self_loops_no_oversmoothing", seed);
  constexpr Eigen::Index dim = 8;
  for (std::size_t t = 0; t < trials; ++t) {
    SplitMix64 rng(derive_seed(seed, t));
    const auto n = node_count(2, 30, rng);
    const Graph dag = random_dag(n, rng.uniform(0.05, 0.3), rng, true);
    const Graph plus = add_leaf_self_loops(dag);
    const RelationOperator op = graph_operator(plus, Normalization::row_mean);
    Matrix x = uniform_matrix(static_cast<Eigen::Index>(n), dim, -1.0, 1.0, rng);
    ++report.trials;
    double worst = std::numeric_limits<double>::infinity();
    bool ok = true;
    std::size_t failed_layer = 0;
    for (std::size_t layer = 1; layer <= depth; ++layer) {
      x = op.matrix * (x * uniform_matrix(dim, dim, -1.0, 1.0, rng));
      const double norm = x.norm();
      const double energy = norm > 0.0 ? dirichlet_energy(x / norm, plus) : 0.0;
      worst = std::min(worst, energy);
      if (ok && !(energy > kRowNormTolerance)) {
        ok = false;
        failed_layer = layer;
      }
    }
    record(report, ok, worst,
           "trial " + std::to_string(t) + ": normalised energy vanished at layer " + std::to_string(failed_layer));
  }
  finish(report);
  return report;
}

}  // namespace mrs
