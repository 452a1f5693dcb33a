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
#include <string>
#include <utility>
#include <vector>

#include "mrsplit/diagnostics.hpp"
#include "mrsplit/split.hpp"

namespace mrs {

/// Outcome of one seeded property check. Trial t draws from
/// derive_seed(seed, t), so reports do not depend on evaluation order.
///
/// `min_margin` is the smallest value of the checked quantity over all trials:
///   rank / independence / DAG-pair checks: sigma_r / sigma_max of the output
///     (r = required rank), must exceed kRankTolerance;
///   zero convergence: -max|X| at the predicted step, must equal 0;
///   ergodic dependence: -(sigma_2 / sigma_max) of E, must be >= -kRankTolerance;
///   DAR pairs: largest sigma_2 / sigma_max over node pairs, must exceed
///     kRankTolerance;
///   leaf self-loops: Dirichlet energy of the normalised state, must be > 0.
/// It is NaN when no trial ran.
struct VerificationReport {
  std::string theorem;
  std::size_t trials = 0;
  std::size_t failures = 0;
  double min_margin = 0.0;
  std::uint64_t seed = 0;
  /// Up to a few human-readable failure descriptions.
  std::vector<std::string> details;

  bool passed() const noexcept { return failures == 0; }
};

/// rank(act(sum_k A_k X W_k)) >= rank(E) for rank-one X = u v^T and uniform
/// (-1, 1) transforms, checked with the identity and leaky_relu(0.01).
VerificationReport verify_rank_theorem(std::span<const RelationOperator> ops, std::size_t trials,
                                       std::uint64_t seed, Eigen::Index in_dim = 8,
                                       Eigen::Index out_dim = 8);

/// For a structurally independent pair, rows i and j of sum_k A_k X W_k
/// (and of its leaky_relu image) have rank 2 for rank-one X. Dependent
/// pairs are reported as vacuous (zero trials). Throws on an out-of-range pair.
VerificationReport verify_independence_theorem(std::span<const RelationOperator> ops,
                                               std::pair<NodeId, NodeId> pair, std::size_t trials,
                                               std::uint64_t seed, Eigen::Index in_dim = 8,
                                               Eigen::Index out_dim = 8);

/// Rank theorem over random split graphs (n <= 30, random ordering method and
/// normalisation per trial).
VerificationReport verify_rank_theorem_random(std::size_t trials, std::uint64_t seed);

/// Independence theorem over randomly constructed independent pairs.
VerificationReport verify_independence_random(std::size_t trials, std::uint64_t seed);

/// Mean aggregation on a DAG with relu is exactly zero after
/// longest_path_length + 1 layers.
VerificationReport verify_zero_convergence(std::size_t trials, std::uint64_t seed);

/// DAG + reverse-DAG iteration keeps every row non-zero and rank >= 2 up to
/// `depth` layers (identity and leaky_relu).
VerificationReport verify_dag_pair_rank(std::size_t trials, std::size_t depth, std::uint64_t seed);

/// Mean-normalised ergodic relations always give rank(E) = 1.
VerificationReport verify_ergodic_dependence(std::size_t instances, std::uint64_t seed);

/// Two non-empty DARs with different root sets always contain a
/// structurally independent pair (exhaustive scan).
VerificationReport verify_dar_independence(std::size_t trials, std::uint64_t seed);

/// Linear mean aggregation on a DAG with leaf self-loops keeps a non-zero,
/// non-smooth state: the normalised Dirichlet energy stays positive.
VerificationReport verify_leaf_self_loops(std::size_t trials, std::size_t depth, std::uint64_t seed);

}  // namespace mrs
