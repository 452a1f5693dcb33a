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
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "mrsplit/rng.hpp"
#include "mrsplit/split.hpp"

namespace mrs {

/// n x d node features, row i = node i.
using Matrix = Eigen::MatrixXd;

enum class ActivationKind { identity, relu, leaky_relu, sigmoid };

struct Activation {
  ActivationKind kind = ActivationKind::identity;
  double slope = 0.01;  // leaky_relu only, in (0, 1)

  static Activation identity() { return {ActivationKind::identity, 0.01}; }
  static Activation relu() { return {ActivationKind::relu, 0.01}; }
  static Activation leaky_relu(double slope = 0.01);
  static Activation sigmoid() { return {ActivationKind::sigmoid, 0.01}; }

  double operator()(double x) const;
  Matrix apply(const Matrix& x) const;
};

/// "identity", "relu", "sigmoid", "leaky_relu" or "leaky_relu:<slope>".
Activation parse_activation(std::string_view name);
std::string to_string(const Activation& act);

enum class Variant { gcn, sage, gat, gin, gatedgcn };

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view name);

struct GatHead {
  std::vector<Matrix> relation;  // per-relation d x d'
  Eigen::VectorXd attention;     // [a_dst; a_src], length 2 d'
};

struct GinMlp {
  Matrix hidden;  // d x d'
  Matrix output;  // d' x d'
  double eps = 0.0;
};

/// Transforms of one layer. Each variant reads only its own fields:
///   gcn       relation (W_k)
///   sage      self (W), relation (W_k)
///   gat       heads
///   gin       mlps, one per relation
///   gatedgcn  self (A), relation (B_k), gate_dst (D), gate_src (E),
///             gate_edge (C, may stay empty), gate_eps
/// `bias`, when non-empty, is added to every row before the activation.
struct LayerParams {
  std::vector<Matrix> relation;
  Matrix self;
  std::vector<GatHead> heads;
  double attention_slope = 0.2;
  std::vector<GinMlp> mlps;
  Matrix gate_dst;
  Matrix gate_src;
  Matrix gate_edge;
  double gate_eps = 1e-6;
  Eigen::RowVectorXd bias;
};

/// A split graph with its sym_gcn, row_mean and raw operators precomputed.
class PreparedGraph {
 public:
  explicit PreparedGraph(MultiRelGraph mrg);

  const MultiRelGraph& graph() const noexcept { return mrg_; }
  std::size_t num_nodes() const noexcept { return mrg_.num_nodes(); }
  std::size_t relation_count() const noexcept { return mrg_.relation_count(); }
  std::span<const RelationOperator> sym_gcn() const noexcept { return sym_; }
  std::span<const RelationOperator> row_mean() const noexcept { return mean_; }
  std::span<const RelationOperator> raw() const noexcept { return raw_; }

 private:
  MultiRelGraph mrg_;
  std::vector<RelationOperator> sym_;
  std::vector<RelationOperator> mean_;
  std::vector<RelationOperator> raw_;
};

/// act(sum_k A_k X W_k).
Matrix mrs_linear_layer(const Matrix& x, std::span<const RelationOperator> ops,
                        std::span<const Matrix> weights, Activation act);

Matrix mrs_gcn(const Matrix& x, const PreparedGraph& g, const LayerParams& p, Activation act);

/// act(X W + sum_k D^-1 A_k X W_k) with full-graph in-degrees.
Matrix mrs_sage(const Matrix& x, const PreparedGraph& g, const LayerParams& p, Activation act);

/// Per head: alpha_ij = softmax_j LeakyReLU(a^T [W_f x_i || W_f x_j]) over
/// all in-neighbours, output sum_j alpha_ij W_f x_j; heads are concatenated.
/// Nodes without in-neighbours get a zero row before activation.
Matrix mrs_gat(const Matrix& x, const PreparedGraph& g, const LayerParams& p, Activation act);

/// act(sum_k MLP_k((1 + eps_k) x_i + sum_{j in N_i^k} w_ji x_j)). Every
/// relation contributes its self term even when its edge set is empty.
Matrix mrs_gin(const Matrix& x, const PreparedGraph& g, const LayerParams& p, Activation act);

/// act(A x_i + sum_j g_ij * B_f x_j / (sum_j g_ij + eps)) with gates
/// g_ij = sigmoid(D x_i + E x_j + C e_ij). `edge_attrs` has one row per base
/// edge; pass an empty matrix for zero attributes.
Matrix mrs_gatedgcn(const Matrix& x, const Matrix& edge_attrs, const PreparedGraph& g,
                    const LayerParams& p, Activation act);

/// Dispatches on `variant` (GatedGCN without edge attributes).
Matrix apply_layer(Variant variant, const Matrix& x, const PreparedGraph& g, const LayerParams& p,
                   Activation act);

/// Glorot-uniform limit sqrt(6 / (fan_in + fan_out)).
double glorot_limit(Eigen::Index fan_in, Eigen::Index fan_out);

/// Samples every transform a variant needs with entries uniform in
/// (-limit, limit); limit <= 0 selects the Glorot limit per matrix.
/// `out_dim` is the total output width (split evenly across GAT heads).
/// A positive `bias_limit` also draws a bias uniform in (-bias_limit, bias_limit).
LayerParams sample_layer_params(Variant variant, std::size_t relation_count, Eigen::Index in_dim,
                                Eigen::Index out_dim, SplitMix64& rng, double limit = 0.0,
                                std::size_t heads = 2, double bias_limit = 0.0);

/// Copy of `p` whose per-relation transforms all equal those of relation 0,
/// widened or narrowed to `relation_count` relations.
LayerParams tie_relations(const LayerParams& p, std::size_t relation_count);

using LayerFn = std::function<Matrix(const Matrix& x, std::size_t layer)>;

/// Applies `layer_fn` for layer = 0..layers-1 and returns every output state.
std::vector<Matrix> iterate(const Matrix& x0, std::size_t layers, const LayerFn& layer_fn);

}  // namespace mrs
