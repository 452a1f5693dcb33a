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

#include "mrsplit/ensemble.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "mrsplit/error.hpp"

namespace mrs {
namespace {

std::vector<NodeId> random_permutation(std::size_t n, SplitMix64& rng) {
  std::vector<NodeId> perm(n);
  std::iota(perm.begin(), perm.end(), NodeId{0});
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
  return perm;
}

}  // namespace

Graph random_connected_graph(const RandomGraphParams& params, SplitMix64& rng) {
  if (params.min_nodes < 1 || params.max_nodes < params.min_nodes)
    throw Error("invalid node-count range");
  const auto n = params.min_nodes + rng.below(params.max_nodes - params.min_nodes + 1);
  return random_connected_graph(n, params.extra_edges_per_node, rng);
}

Graph random_connected_graph(std::size_t n, double extra_edges_per_node, SplitMix64& rng) {
  if (n == 0) return Graph::from_edges(0, {}, true);
  std::vector<Edge> edges;
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  for (NodeId v = 1; v < n; ++v) {
    const auto u = static_cast<NodeId>(rng.below(v));
    edges.push_back({u, v, 1.0});
    adj[u][v] = adj[v][u] = true;
  }
  const double free_pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0 - static_cast<double>(n - 1);
  const double p = free_pairs > 0.0 ? std::min(1.0, extra_edges_per_node * static_cast<double>(n) / free_pairs) : 0.0;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (adj[u][v]) continue;
      if (rng.bernoulli(p)) edges.push_back({u, v, 1.0});
    }
  }
  return Graph::from_edges(n, std::move(edges), true);
}

Graph random_dag(std::size_t n, double edge_prob, SplitMix64& rng, bool no_isolated,
                 double min_weight, double max_weight) {
  const auto perm = random_permutation(n, rng);
  auto weight = [&] { return min_weight == max_weight ? min_weight : rng.uniform(min_weight, max_weight); };
  std::vector<Edge> edges;
  std::vector<bool> touched(n, false);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (!rng.bernoulli(edge_prob)) continue;
      edges.push_back({perm[a], perm[b], weight()});
      touched[a] = touched[b] = true;
    }
  }
  if (no_isolated && n >= 2) {
    for (std::size_t a = 0; a < n; ++a) {
      if (touched[a]) continue;
      auto b = static_cast<std::size_t>(rng.below(n - 1));
      if (b >= a) ++b;
      if (a < b)
        edges.push_back({perm[a], perm[b], weight()});
      else
        edges.push_back({perm[b], perm[a], weight()});
      touched[a] = touched[b] = true;
    }
  }
  return Graph::from_edges(n, std::move(edges), false);
}

Graph random_ergodic_graph(std::size_t n, double extra_arc_prob, SplitMix64& rng) {
  if (n == 0) throw Error("ergodic graph needs at least one node");
  const auto perm = random_permutation(n, rng);
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  std::vector<Edge> edges;
  auto add = [&](NodeId u, NodeId v) {
    if (adj[u][v]) return;
    adj[u][v] = true;
    edges.push_back({u, v, 1.0});
  };
  for (std::size_t a = 0; a < n; ++a) add(perm[a], perm[(a + 1) % n]);
  add(perm[0], perm[0]);  // a self-loop makes the chain aperiodic
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = 0; v < n; ++v)
      if (u != v && rng.bernoulli(extra_arc_prob)) add(u, v);
  return Graph::from_edges(n, std::move(edges), false);
}

}  // namespace mrs
