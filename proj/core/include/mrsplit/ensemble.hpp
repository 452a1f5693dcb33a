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

#pragma once

#include <cstddef>

#include "mrsplit/graph.hpp"
#include "mrsplit/rng.hpp"

namespace mrs {

/// Seeded random-graph generators shared by the CLI, the verification suites
/// and the trainer's synthetic task.

struct RandomGraphParams {
  std::size_t min_nodes = 15;
  std::size_t max_nodes = 30;
  /// Expected number of edges beyond the spanning tree, per node. The default
  /// gives about 2.2 arcs per node, the density of small molecular graphs
  /// (around 23 nodes and 50 arcs).
  double extra_edges_per_node = 0.125;
};

/// Connected undirected graph: a random recursive spanning tree plus
/// Erdos-Renyi extra edges. Returned expanded to symmetric arcs.
Graph random_connected_graph(const RandomGraphParams& params, SplitMix64& rng);

/// Same, with an exact node count.
Graph random_connected_graph(std::size_t n, double extra_edges_per_node, SplitMix64& rng);

/// DAG on n nodes: each pair is joined with probability `edge_prob`, oriented
/// along a random permutation. With `no_isolated`, isolated nodes receive an
/// edge to or from a random other node consistent with that permutation.
Graph random_dag(std::size_t n, double edge_prob, SplitMix64& rng, bool no_isolated = false,
                 double min_weight = 1.0, double max_weight = 1.0);

/// Strongly connected and aperiodic directed graph: a Hamiltonian cycle over
/// a random permutation plus one self-loop plus random extra arcs.
Graph random_ergodic_graph(std::size_t n, double extra_arc_prob, SplitMix64& rng);

}  // namespace mrs
