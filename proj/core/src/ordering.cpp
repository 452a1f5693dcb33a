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

#include "mrsplit/ordering.hpp"

#include <numeric>
#include <string>

#include "mrsplit/error.hpp"
#include "mrsplit/rng.hpp"

namespace mrs {

std::string_view to_string(OrderingMethod method) {
  switch (method) {
    case OrderingMethod::random:
      return "random";
    case OrderingMethod::features:
      return "features";
    case OrderingMethod::ppr:
      return "ppr";
    case OrderingMethod::degree:
      return "degree";
  }
  return "unknown";
}

OrderingMethod parse_ordering_method(std::string_view name) {
  if (name == "random") return OrderingMethod::random;
  if (name == "features") return OrderingMethod::features;
  if (name == "ppr") return OrderingMethod::ppr;
  if (name == "degree") return OrderingMethod::degree;
  throw Error("unknown ordering '" + std::string(name) + "'");
}

OrderingScores order_random(std::size_t n, std::uint64_t seed) {
  std::vector<double> perm(n);
  std::iota(perm.begin(), perm.end(), 0.0);
  SplitMix64 rng(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
  return {std::move(perm), OrderingMethod::random, seed};
}

OrderingScores order_feature_sum(const Eigen::MatrixXd& features) {
  std::vector<double> scores(static_cast<std::size_t>(features.rows()));
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    double s = 0.0;
    for (Eigen::Index c = 0; c < features.cols(); ++c) s += features(i, c);
    scores[static_cast<std::size_t>(i)] = s;
  }
  return {std::move(scores), OrderingMethod::features, 0};
}

OrderingScores order_ppr(const Graph& g, double alpha, int iters) {
  const std::size_t n = g.num_nodes();
  if (n == 0) throw Error("order_ppr requires at least one node");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error("PPR restart probability must lie in [0, 1]");
  if (iters < 0) throw Error("PPR iteration count must be non-negative");
  const double uniform = 1.0 / static_cast<double>(n);
  std::vector<double> p(n, uniform);
  std::vector<double> next(n);
  for (int it = 0; it < iters; ++it) {
    double dangling = 0.0;
    std::fill(next.begin(), next.end(), 0.0);
    for (NodeId v = 0; v < n; ++v) {
      const auto out = g.out_edges(v);
      if (out.empty()) {
        dangling += p[v];
        continue;
      }
      const double share = p[v] / static_cast<double>(out.size());
      for (auto e : out) next[g.edge(e).dst] += share;
    }
    const double spread = dangling * uniform;
    for (std::size_t v = 0; v < n; ++v) next[v] = alpha * uniform + (1.0 - alpha) * (next[v] + spread);
    p.swap(next);
  }
  return {std::move(p), OrderingMethod::ppr, 0};
}

OrderingScores order_degree(const Graph& g) {
  const auto d = degrees(g);
  std::vector<double> scores(g.num_nodes());
  for (std::size_t v = 0; v < scores.size(); ++v) {
    scores[v] = g.symmetric() ? 0.5 * static_cast<double>(d.in[v] + d.out[v])
                              : static_cast<double>(d.in[v]);
  }
  return {std::move(scores), OrderingMethod::degree, 0};
}

Comparison compare(const OrderingScores& scores, NodeId i, NodeId j) {
  const double a = scores.scores.at(i);
  const double b = scores.scores.at(j);
  if (a < b) return Comparison::precedes;
  if (a > b) return Comparison::succeeds;
  return Comparison::incomparable;
}

}  // namespace mrs
