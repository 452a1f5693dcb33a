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
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace mrs {

using NodeId = std::uint32_t;

struct Edge {
  NodeId src = 0;
  NodeId dst = 0;
  double weight = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Immutable directed graph over nodes [0, n) with compressed in/out access.
///
/// Edges keep their insertion order; `out_edges(i)` and `in_edges(i)` return
/// indices into `edges()`, sorted by the position of the edge. Inputs
/// declared undirected are expanded to both arcs at construction time, after
/// which the graph is purely directed; `symmetric()` records the origin.
class Graph {
 public:
  Graph() = default;

  /// Validates and builds a graph. Throws mrs::Error on out-of-range indices
  /// or duplicate (src, dst) pairs. With `undirected`, each listed edge (i, j)
  /// with i != j is stored as (i, j) followed by (j, i); a self-loop is stored
  /// once.
  static Graph from_edges(std::size_t n, std::vector<Edge> edges, bool undirected = false);

  /// Builds from already-directed arcs without expansion; `symmetric` only
  /// records that the arcs came from an undirected input.
  static Graph from_arcs(std::size_t n, std::vector<Edge> arcs, bool symmetric);

  std::size_t num_nodes() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }
  const Edge& edge(std::size_t e) const { return edges_[e]; }
  bool symmetric() const noexcept { return symmetric_; }

  std::span<const std::size_t> out_edges(NodeId v) const;
  std::span<const std::size_t> in_edges(NodeId v) const;
  std::size_t out_degree(NodeId v) const { return out_edges(v).size(); }
  std::size_t in_degree(NodeId v) const { return in_edges(v).size(); }

  bool has_edge(NodeId src, NodeId dst) const;
  bool has_self_loops() const noexcept;

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  bool symmetric_ = false;
  std::vector<std::size_t> out_offsets_{0};
  std::vector<std::size_t> out_index_;
  std::vector<std::size_t> in_offsets_{0};
  std::vector<std::size_t> in_index_;
};

struct DegreeVector {
  std::vector<std::size_t> in;
  std::vector<std::size_t> out;
  std::vector<double> in_weighted;
  std::vector<double> out_weighted;
};

DegreeVector degrees(const Graph& g);

enum class EdgeListFormat { tsv, json };

/// Reads a graph. TSV: one "src<TAB>dst[<TAB>weight]" per line with an optional
/// "#n=<count>" first line; `undirected` applies to TSV only. JSON:
/// {"n": int, "edges": [[src, dst, weight?], ...], "undirected": bool}.
/// Without an explicit node count, n = 1 + max index.
Graph load_edge_list(std::istream& in, EdgeListFormat format, bool undirected = false);

/// Edge (i, j, w) becomes (j, i, w); edge order is preserved.
Graph reverse(const Graph& g);

struct DagCheck {
  bool acyclic = false;
  /// Kahn's algorithm with lowest-index-first tie-break; set iff acyclic.
  std::optional<std::vector<NodeId>> order;
};

DagCheck is_dag(const Graph& g);

/// Adds (i, i, 1.0) for every node with out-degree 0. Throws if g has a cycle.
Graph add_leaf_self_loops(const Graph& g);

/// Number of edges on the longest directed path. Throws if g has a cycle.
std::size_t longest_path_length(const Graph& g);

/// Relabels node v as perm[v]. `perm` must be a permutation of [0, n).
Graph relabel(const Graph& g, std::span<const NodeId> perm);

}  // namespace mrs
