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
#include <vector>

#include "mrsplit/autodiff.hpp"
#include "mrsplit/convolution.hpp"
#include "mrsplit/graph.hpp"
#include "mrsplit/ordering.hpp"

namespace mrs {

enum class JkMode { none, cat, max };

std::string_view to_string(JkMode mode);
JkMode parse_jk_mode(std::string_view name);

/// Graph-regression model: linear input embedding, `layers` message-passing
/// layers, optional residual and jumping knowledge, mean pooling and a
/// linear head. Only gcn, sage and gin are trainable.
struct ModelConfig {
  Variant variant = Variant::gcn;
  /// Split every graph by `ordering` (MRS model) or keep one relation.
  bool multi_relational = true;
  std::size_t layers = 4;
  Eigen::Index width = 32;
  Activation activation = Activation::relu();
  OrderingMethod ordering = OrderingMethod::degree;
  double ppr_alpha = 0.1;
  int ppr_iters = 15;
  /// h_l = act(message(h_{l-1})) + h_{l-1}.
  bool residual = false;
  JkMode jk = JkMode::none;
  double learning_rate = 0.01;
  std::size_t epochs = 300;
  std::uint64_t seed = 0;
  /// Start every relation from the relation-0 transforms.
  bool tied_init = false;
};

/// Throws mrs::Error unless the config can be trained.
void validate(const ModelConfig& config);

struct GraphSample {
  Graph graph;
  Matrix features;
  double target = 0.0;
};

struct SyntheticTaskParams {
  std::size_t count = 128;
  std::size_t min_nodes = 15;
  std::size_t max_nodes = 30;
  /// Undirected edge probability. 0.1 gives about 23 nodes and 50 arcs on
  /// average, close to small molecular graphs.
  double edge_probability = 0.1;
  /// One-hot width; degree d lands in bucket min(d, buckets - 1).
  std::size_t degree_buckets = 6;
  std::uint64_t seed = 0;
};

struct SyntheticTask {
  SyntheticTaskParams params;
  std::vector<GraphSample> samples;
};

/// Node features: column 0 holds an attribute uniform in (-1, 1), followed
/// by the one-hot degree bucket.
Matrix degree_bucket_features(const Graph& g, const Eigen::VectorXd& attribute, std::size_t buckets);

/// sum_i s_i x_i0 with s_i = +1 if deg_i exceeds the median degree, else -1.
/// Degrees are out-degrees of the symmetric arc set.
double signed_degree_target(const Graph& g, const Matrix& features);

/// Seeded Erdos-Renyi graphs with the degree-bucket features and the signed
/// degree target. Throws mrs::Error on an invalid node range.
SyntheticTask make_synthetic_task(const SyntheticTaskParams& params);

/// Disjoint union of samples, prepared for one model family.
struct Batch {
  PreparedGraph graph;
  std::vector<std::size_t> segment;  // sample index of every node
  std::size_t graphs = 0;
  Matrix features;
  Matrix targets;  // graphs x 1
};

Batch make_batch(std::span<const GraphSample> samples, const ModelConfig& config);

struct Model {
  ModelConfig config;
  Matrix embed;  // in_dim x width
  std::vector<LayerParams> layers;
  Matrix head;       // readout_dim x 1
  Matrix head_bias;  // 1 x 1
};

/// Glorot-uniform transforms and a zero head bias. The base model and its
/// MRS counterpart with the same seed share every transform they both have.
Model init_model(const ModelConfig& config, std::size_t relation_count, Eigen::Index in_dim);

/// Pointers to every trainable matrix, in a fixed order.
std::vector<Matrix*> parameters(Model& model);
std::vector<const Matrix*> parameters(const Model& model);

/// Recorded forward pass. `params` lines up with parameters(model).
struct ForwardCache {
  ad::Tape tape;
  std::vector<ad::Var> params;
  ad::Var prediction;  // graphs x 1
};

ForwardCache forward(const Model& model, const Batch& batch);
/// Re-records into `cache`, reusing its storage.
void forward(const Model& model, const Batch& batch, ForwardCache& cache);

/// Gradients of <loss_grad, prediction>, aligned with parameters(model).
std::vector<Matrix> backward(ForwardCache& cache, const Matrix& loss_grad);

/// Mean absolute error and its subgradient (0 at a zero residual).
double mae(const Matrix& prediction, const Matrix& target);
Matrix mae_gradient(const Matrix& prediction, const Matrix& target);

struct TrainResult {
  /// trace[e] is the train MAE after e epochs; trace[0] is the initial loss.
  std::vector<double> trace;
  bool diverged = false;
  Model model;
};

/// Full-batch gradient descent with a fixed step.
TrainResult train(const SyntheticTask& task, const ModelConfig& config);

struct GradientCheck {
  std::size_t entries = 0;
  double max_rel_error = 0.0;
};

/// Compares backward() with central differences of <weights, prediction>
/// for every parameter entry. The relative error of one entry is
/// |a - f| / max(|a|, |f|, floor).
GradientCheck check_gradients(const Model& model, const Batch& batch, const Matrix& weights,
                              double step = 1e-5, double floor = 1e-6);

}  // namespace mrs
