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

#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "mrsplit/graph.hpp"

namespace mrs {

enum class OrderingMethod { random, features, ppr, degree };

std::string_view to_string(OrderingMethod method);
/// Parses "random", "features", "ppr" or "degree"; throws mrs::Error otherwise.
OrderingMethod parse_ordering_method(std::string_view name);

/// One scalar per node; node i precedes node j iff scores[i] < scores[j].
struct OrderingScores {
  std::vector<double> scores;
  OrderingMethod method = OrderingMethod::degree;
  std::uint64_t seed = 0;

  std::size_t size() const noexcept { return scores.size(); }
};

enum class Comparison { precedes, succeeds, incomparable };

/// Seeded Fisher-Yates permutation of {0, ..., n-1}: every score distinct.
OrderingScores order_random(std::size_t n, std::uint64_t seed);

/// Row sums of the initial node features.
OrderingScores order_feature_sum(const Eigen::MatrixXd& features);

/// Personalized PageRank with a uniform restart vector u = 1/n:
/// p <- alpha * u + (1 - alpha) * P^T p, starting from p = u. P is the
/// unweighted out-transition matrix; dangling nodes spread their mass
/// uniformly. Throws on an empty graph.
OrderingScores order_ppr(const Graph& g, double alpha = 0.1, int iters = 15);

/// Symmetric degree for graphs loaded undirected, in-degree otherwise.
OrderingScores order_degree(const Graph& g);

Comparison compare(const OrderingScores& scores, NodeId i, NodeId j);

}  // namespace mrs
