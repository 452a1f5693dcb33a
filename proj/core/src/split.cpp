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

#include "mrsplit/split.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "mrsplit/error.hpp"

namespace mrs {
namespace {

std::vector<double> weighted_in_degree(const Graph& g) {
  std::vector<double> d(g.num_nodes(), 0.0);
  for (const auto& e : g.edges()) d[e.dst] += e.weight;
  return d;
}

double edge_value(const Edge& e, Normalization mode, const std::vector<double>& deg) {
  switch (mode) {
    case Normalization::raw:
      return e.weight;
    case Normalization::sym_gcn: {
      const double di = deg[e.dst];
      const double dj = deg[e.src];
      if (di <= 0.0 || dj <= 0.0) return 0.0;
      return e.weight / (std::sqrt(di) * std::sqrt(dj));
    }
    case Normalization::row_mean:
      return deg[e.dst] == 0.0 ? 0.0 : e.weight / deg[e.dst];
  }
  return 0.0;
}

RelationOperator build_operator(const Graph& g, std::span<const std::size_t> edge_ids,
                                Normalization mode, const std::vector<double>& deg) {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(edge_ids.size());
  for (auto id : edge_ids) {
    const auto& e = g.edge(id);
    triplets.emplace_back(e.dst, e.src, edge_value(e, mode, deg));
  }
  const auto n = static_cast<Eigen::Index>(g.num_nodes());
  RelationOperator op{SparseMatrix(n, n), mode};
  op.matrix.setFromTriplets(triplets.begin(), triplets.end());
  return op;
}

}  // namespace

MultiRelGraph::MultiRelGraph(Graph base, std::vector<std::uint8_t> relation_of_edge,
                             std::size_t relation_count, OrderingScores ordering)
    : base_(std::move(base)),
      relation_of_edge_(std::move(relation_of_edge)),
      relations_(relation_count),
      ordering_(std::move(ordering)) {
  if (relation_of_edge_.size() != base_.num_edges())
    throw DimensionError("relation assignment must cover every edge");
  for (std::size_t e = 0; e < relation_of_edge_.size(); ++e) {
    if (relation_of_edge_[e] >= relation_count) throw Error("relation id out of range");
    relations_[relation_of_edge_[e]].push_back(e);
  }
}

Graph MultiRelGraph::relation_graph(std::size_t k) const {
  std::vector<Edge> edges;
  edges.reserve(relations_.at(k).size());
  for (auto e : relations_[k]) edges.push_back(base_.edge(e));
  return Graph::from_arcs(base_.num_nodes(), std::move(edges), false);
}

MultiRelGraph split_edges(const Graph& g, const OrderingScores& scores) {
  if (scores.size() != g.num_nodes())
    throw DimensionError("ordering has " + std::to_string(scores.size()) + " scores for " +
                         std::to_string(g.num_nodes()) + " nodes");
  std::vector<std::uint8_t> relation(g.num_edges());
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const auto& edge = g.edge(e);
    switch (compare(scores, edge.src, edge.dst)) {
      case Comparison::precedes:
        relation[e] = kForward;
        break;
      case Comparison::succeeds:
        relation[e] = kBackward;
        break;
      case Comparison::incomparable:
        relation[e] = kRemainder;
        break;
    }
  }
  MultiRelGraph mrg(g, std::move(relation), 3, scores);
  // A filter by a strict order cannot close a cycle.
  if (!is_dag(mrg.relation_graph(kForward)).acyclic || !is_dag(mrg.relation_graph(kBackward)).acyclic)
    throw std::logic_error("split_edges produced a cyclic directed relation");
  return mrg;
}

MultiRelGraph single_relation(const Graph& g) {
  return MultiRelGraph(g, std::vector<std::uint8_t>(g.num_edges(), 0), 1, OrderingScores{});
}

std::string_view to_string(Normalization mode) {
  switch (mode) {
    case Normalization::raw:
      return "raw";
    case Normalization::sym_gcn:
      return "sym_gcn";
    case Normalization::row_mean:
      return "row_mean";
  }
  return "unknown";
}

Normalization parse_normalization(std::string_view name) {
  if (name == "raw") return Normalization::raw;
  if (name == "sym_gcn") return Normalization::sym_gcn;
  if (name == "row_mean") return Normalization::row_mean;
  throw Error("unknown normalization '" + std::string(name) + "'");
}

std::vector<RelationOperator> normalize(const MultiRelGraph& mrg, Normalization mode) {
  const auto deg = weighted_in_degree(mrg.base());
  std::vector<RelationOperator> ops;
  ops.reserve(mrg.relation_count());
  for (std::size_t k = 0; k < mrg.relation_count(); ++k)
    ops.push_back(build_operator(mrg.base(), mrg.relation_edges(k), mode, deg));
  return ops;
}

RelationOperator graph_operator(const Graph& g, Normalization mode) {
  std::vector<std::size_t> all(g.num_edges());
  for (std::size_t e = 0; e < all.size(); ++e) all[e] = e;
  return build_operator(g, all, mode, weighted_in_degree(g));
}

std::pair<RelationOperator, RelationOperator> dar_pair_from_dag(const Graph& g) {
  if (!is_dag(g).acyclic) throw Error("dar_pair_from_dag requires a DAG");
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    // In-edges of reverse(g) at v are the out-edges of g at v.
    if (g.in_degree(v) == 0 && g.out_degree(v) == 0)
      throw Error("node " + std::to_string(v) +
                  " has no incoming edge in the DAG or in its reverse");
  }
  return {graph_operator(g, Normalization::row_mean),
          graph_operator(reverse(g), Normalization::row_mean)};
}

}  // namespace mrs
