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
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Sparse>

#include "mrsplit/graph.hpp"
#include "mrsplit/ordering.hpp"

namespace mrs {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Relation ids produced by the ordering split.
enum RelationId : std::uint8_t {
  kForward = 0,    // src precedes dst
  kBackward = 1,   // dst precedes src
  kRemainder = 2,  // incomparable endpoints, including self-loops
};

/// A graph whose edges are partitioned into `relation_count()` relations.
/// Relation sets hold indices into `base().edges()` in edge order.
class MultiRelGraph {
 public:
  MultiRelGraph(Graph base, std::vector<std::uint8_t> relation_of_edge, std::size_t relation_count,
                OrderingScores ordering);

  const Graph& base() const noexcept { return base_; }
  std::size_t num_nodes() const noexcept { return base_.num_nodes(); }
  std::size_t relation_count() const noexcept { return relations_.size(); }
  std::uint8_t relation_of(std::size_t edge) const { return relation_of_edge_[edge]; }
  std::span<const std::size_t> relation_edges(std::size_t k) const { return relations_.at(k); }
  const OrderingScores& ordering() const noexcept { return ordering_; }

  /// The edges of relation k as a standalone graph over the same nodes.
  Graph relation_graph(std::size_t k) const;

 private:
  Graph base_;
  std::vector<std::uint8_t> relation_of_edge_;
  std::vector<std::vector<std::size_t>> relations_;
  OrderingScores ordering_;
};

/// Assigns edge (i, j) to kForward if r_i < r_j, kBackward if r_j < r_i and
/// kRemainder otherwise. Throws mrs::DimensionError on a length mismatch.
MultiRelGraph split_edges(const Graph& g, const OrderingScores& scores);

/// Every edge in one relation: the unsplit graph seen through the same API.
MultiRelGraph single_relation(const Graph& g);

enum class Normalization { raw, sym_gcn, row_mean };

std::string_view to_string(Normalization mode);
Normalization parse_normalization(std::string_view name);

/// Weighted n x n aggregation matrix of one relation. Row i aggregates the
/// in-neighbours of node i: entry (i, j) belongs to edge j -> i.
struct RelationOperator {
  SparseMatrix matrix;
  Normalization normalization = Normalization::raw;
};

/// One operator per relation. Degrees are weighted in-degrees of the full
/// base graph, so the sym_gcn operators sum to D^-1/2 A D^-1/2 and the
/// row_mean operators to D^-1 A. Zero-degree entries contribute zero.
std::vector<RelationOperator> normalize(const MultiRelGraph& mrg, Normalization mode);

/// Single operator of an unsplit graph.
RelationOperator graph_operator(const Graph& g, Normalization mode);

/// (row_mean(g), row_mean(reverse(g))) for a DAG g. Throws if g has a cycle
/// or if some node has no incoming edge in either direction.
std::pair<RelationOperator, RelationOperator> dar_pair_from_dag(const Graph& g);

}  // namespace mrs
