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
#include <vector>

#include <Eigen/Dense>

#include "mrsplit/graph.hpp"
#include "mrsplit/split.hpp"

namespace mrs {

using Matrix = Eigen::MatrixXd;

/// Singular values at or below kRankTolerance * sigma_max count as zero.
inline constexpr double kRankTolerance = 1e-8;
/// A row is non-zero when its Euclidean norm exceeds this.
inline constexpr double kRowNormTolerance = 1e-12;

/// n x l matrix E with E(i, k) = sum_m A_k(i, m), the weighted in-degree
/// of node i in relation k.
Matrix in_degree_matrix(std::span<const RelationOperator> ops);

/// Linear independence of two weighted in-degree vectors. A zero vector is
/// dependent on everything.
bool structurally_independent(const Eigen::VectorXd& di, const Eigen::VectorXd& dj,
                              double rel_tol = kRankTolerance);

/// Singular values in decreasing order.
Eigen::VectorXd singular_values(const Matrix& m);

/// Number of singular values above rel_tol * sigma_max; 0 for a zero matrix.
std::size_t numeric_rank(const Matrix& m, double rel_tol = kRankTolerance);

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
};

using RationalMatrix = std::vector<std::vector<Rational>>;

inline constexpr std::size_t kExactRankMaxDim = 32;

/// Exact rank by fraction-free (Bareiss) elimination on arbitrary-precision
/// integers. Rows must have equal length; throws if either dimension
/// exceeds kExactRankMaxDim or a denominator is zero.
std::size_t exact_rank_small(const RationalMatrix& m);
std::size_t exact_rank_small(const Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>& m);

/// Sum of singular values.
double nuclear_norm(const Matrix& m);

/// Rank-one distance || X/||X|| - u v^T/||u v^T|| || in nuclear norm, with u
/// the largest-norm column and v the largest-norm row (lowest index on ties).
/// u v^T is sign-aligned with X at the intersecting entry so that every
/// rank-one X has distance 0. Throws on a zero matrix.
double rod(const Matrix& x);

/// sum over edges (i, j) of ||x_i - x_j||^2.
double dirichlet_energy(const Matrix& x, const Graph& g);

/// True iff every row has Euclidean norm above `tol`.
bool rows_nonzero(const Matrix& x, double tol = kRowNormTolerance);

}  // namespace mrs
