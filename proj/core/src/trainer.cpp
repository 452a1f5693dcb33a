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

#include "mrsplit/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "mrsplit/error.hpp"
#include "mrsplit/split.hpp"

namespace mrs {
namespace {

constexpr std::uint64_t kEmbedStream = 1;
constexpr std::uint64_t kHeadStream = 2;
constexpr std::uint64_t kOrderStream = 3;
constexpr std::uint64_t kSharedLayerStream = 100;
constexpr std::uint64_t kExtraLayerStream = 10000;

Matrix glorot(Eigen::Index rows, Eigen::Index cols, SplitMix64& rng) {
  const double lim = glorot_limit(rows, cols);
  return uniform_matrix(rows, cols, -lim, lim, rng);
}

OrderingScores batch_scores(const Graph& g, const Matrix& features, const ModelConfig& c) {
  switch (c.ordering) {
    case OrderingMethod::random:
      return order_random(g.num_nodes(), derive_seed(c.seed, kOrderStream));
    case OrderingMethod::features:
      return order_feature_sum(features);
    case OrderingMethod::ppr:
      return order_ppr(g, c.ppr_alpha, c.ppr_iters);
    case OrderingMethod::degree:
      return order_degree(g);
  }
  throw Error("unknown ordering");
}

Eigen::Index readout_dim(const ModelConfig& c) {
  return c.jk == JkMode::cat ? c.width * static_cast<Eigen::Index>(c.layers) : c.width;
}

ad::Var sum_into(ad::Tape& t, std::optional<ad::Var> acc, ad::Var term) {
  return acc ? t.add(*acc, term) : term;
}

}  // namespace

std::string_view to_string(JkMode mode) {
  switch (mode) {
    case JkMode::none:
      return "none";
    case JkMode::cat:
      return "cat";
    case JkMode::max:
      return "max";
  }
  return "unknown";
}

JkMode parse_jk_mode(std::string_view name) {
  if (name == "none") return JkMode::none;
  if (name == "cat") return JkMode::cat;
  if (name == "max") return JkMode::max;
  throw Error("unknown jumping-knowledge mode '" + std::string(name) + "'");
}

void validate(const ModelConfig& c) {
  if (c.layers < 1) throw Error("model needs at least one layer");
  if (c.width < 1) throw Error("model width must be at least 1");
  if (c.variant != Variant::gcn && c.variant != Variant::sage && c.variant != Variant::gin)
    throw Error("variant '" + std::string(to_string(c.variant)) + "' is not trainable (use gcn, sage or gin)");
  if (!(c.learning_rate > 0.0) || !std::isfinite(c.learning_rate))
    throw Error("learning rate must be positive");
}

Matrix degree_bucket_features(const Graph& g, const Eigen::VectorXd& attribute, std::size_t buckets) {
  const auto n = static_cast<Eigen::Index>(g.num_nodes());
  if (attribute.size() != n) throw DimensionError("one attribute per node is required");
  if (buckets == 0) throw Error("at least one degree bucket is required");
  Matrix x = Matrix::Zero(n, 1 + static_cast<Eigen::Index>(buckets));
  x.col(0) = attribute;
  for (NodeId i = 0; i < g.num_nodes(); ++i)
    x(i, 1 + static_cast<Eigen::Index>(std::min(g.out_degree(i), buckets - 1))) = 1.0;
  return x;
}

double signed_degree_target(const Graph& g, const Matrix& features) {
  const auto n = g.num_nodes();
  if (static_cast<std::size_t>(features.rows()) != n || features.cols() < 1)
    throw DimensionError("features must have one row per node");
  if (n == 0) return 0.0;
  std::vector<double> deg(n);
  for (NodeId i = 0; i < n; ++i) deg[i] = static_cast<double>(g.out_degree(i));
  std::vector<double> sorted = deg;
  std::sort(sorted.begin(), sorted.end());
  const double median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  double y = 0.0;
  for (NodeId i = 0; i < n; ++i) y += (deg[i] > median ? 1.0 : -1.0) * features(i, 0);
  return y;
}

SyntheticTask make_synthetic_task(const SyntheticTaskParams& p) {
  if (p.min_nodes < 3 || p.max_nodes < p.min_nodes)
    throw Error("synthetic task node range must satisfy 3 <= min <= max");
  if (!(p.edge_probability >= 0.0 && p.edge_probability <= 1.0))
    throw Error("edge probability must lie in [0, 1]");
  SyntheticTask task{p, {}};
  task.samples.reserve(p.count);
  SplitMix64 rng(p.seed);
  for (std::size_t s = 0; s < p.count; ++s) {
    const auto n = p.min_nodes + static_cast<std::size_t>(rng.below(p.max_nodes - p.min_nodes + 1));
    std::vector<Edge> edges;
    for (NodeId i = 0; i < n; ++i)
      for (NodeId j = i + 1; j < n; ++j)
        if (rng.bernoulli(p.edge_probability)) edges.push_back({i, j, 1.0});
    Graph g = Graph::from_edges(n, std::move(edges), true);
    Eigen::VectorXd attr(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < attr.size(); ++i) attr(i) = rng.uniform(-1.0, 1.0);
    Matrix x = degree_bucket_features(g, attr, p.degree_buckets);
    const double y = signed_degree_target(g, x);
    task.samples.push_back({std::move(g), std::move(x), y});
  }
  return task;
}

Batch make_batch(std::span<const GraphSample> samples, const ModelConfig& c) {
  if (samples.empty()) throw Error("batch needs at least one graph");
  const auto dim = samples.front().features.cols();
  std::size_t total = 0;
  bool symmetric = true;
  for (const auto& s : samples) {
    if (static_cast<std::size_t>(s.features.rows()) != s.graph.num_nodes() || s.features.cols() != dim)
      throw DimensionError("every sample needs one feature row per node and equal widths");
    total += s.graph.num_nodes();
    symmetric = symmetric && s.graph.symmetric();
  }
  std::vector<Edge> arcs;
  std::vector<std::size_t> segment;
  segment.reserve(total);
  Matrix features(static_cast<Eigen::Index>(total), dim);
  Matrix targets(static_cast<Eigen::Index>(samples.size()), 1);
  NodeId offset = 0;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const auto& g = samples[s].graph;
    for (const auto& e : g.edges()) arcs.push_back({e.src + offset, e.dst + offset, e.weight});
    features.middleRows(offset, static_cast<Eigen::Index>(g.num_nodes())) = samples[s].features;
    targets(static_cast<Eigen::Index>(s), 0) = samples[s].target;
    segment.insert(segment.end(), g.num_nodes(), s);
    offset += static_cast<NodeId>(g.num_nodes());
  }
  Graph g = Graph::from_arcs(total, std::move(arcs), symmetric);
  MultiRelGraph mrg = c.multi_relational ? split_edges(g, batch_scores(g, features, c)) : single_relation(g);
  return Batch{PreparedGraph(std::move(mrg)), std::move(segment), samples.size(), std::move(features),
               std::move(targets)};
}

Model init_model(const ModelConfig& c, std::size_t relation_count, Eigen::Index in_dim) {
  validate(c);
  if (relation_count == 0) throw Error("model needs at least one relation");
  Model m;
  m.config = c;
  SplitMix64 embed_rng(derive_seed(c.seed, kEmbedStream));
  m.embed = glorot(in_dim, c.width, embed_rng);
  for (std::size_t l = 0; l < c.layers; ++l) {
    SplitMix64 shared(derive_seed(c.seed, kSharedLayerStream + l));
    LayerParams p = sample_layer_params(c.variant, 1, c.width, c.width, shared);
    if (relation_count > 1) {
      if (c.tied_init) {
        p = tie_relations(p, relation_count);
      } else {
        SplitMix64 extra_rng(derive_seed(c.seed, kExtraLayerStream + l));
        LayerParams extra = sample_layer_params(c.variant, relation_count - 1, c.width, c.width, extra_rng);
        p.relation.insert(p.relation.end(), extra.relation.begin(), extra.relation.end());
        p.mlps.insert(p.mlps.end(), extra.mlps.begin(), extra.mlps.end());
      }
    }
    m.layers.push_back(std::move(p));
  }
  SplitMix64 head_rng(derive_seed(c.seed, kHeadStream));
  m.head = glorot(readout_dim(c), 1, head_rng);
  m.head_bias = Matrix::Zero(1, 1);
  return m;
}

std::vector<Matrix*> parameters(Model& m) {
  std::vector<Matrix*> out{&m.embed};
  for (auto& layer : m.layers) {
    for (auto& w : layer.relation) out.push_back(&w);
    if (layer.self.size() > 0) out.push_back(&layer.self);
    for (auto& mlp : layer.mlps) {
      out.push_back(&mlp.hidden);
      out.push_back(&mlp.output);
    }
  }
  out.push_back(&m.head);
  out.push_back(&m.head_bias);
  return out;
}

std::vector<const Matrix*> parameters(const Model& m) {
  auto mut = parameters(const_cast<Model&>(m));
  return {mut.begin(), mut.end()};
}

ForwardCache forward(const Model& m, const Batch& b) {
  ForwardCache cache;
  forward(m, b, cache);
  return cache;
}

void forward(const Model& m, const Batch& b, ForwardCache& cache) {
  const auto& c = m.config;
  const auto& pg = b.graph;
  if (b.features.cols() != m.embed.rows()) throw DimensionError("feature width does not match the embedding");
  if (m.layers.size() != c.layers) throw DimensionError("model layer count mismatch");

  ad::Tape& t = cache.tape;
  t.reset();
  cache.params.clear();
  for (const Matrix* p : parameters(m)) cache.params.push_back(t.leaf(*p));
  std::size_t next = 0;
  auto param = [&] { return cache.params.at(next++); };

  const ad::Var x = t.leaf(b.features);
  ad::Var h = t.matmul(x, param());
  std::vector<ad::Var> states;
  const auto l_count = pg.relation_count();
  for (const auto& layer : m.layers) {
    std::optional<ad::Var> msg;
    switch (c.variant) {
      case Variant::gcn:
        if (layer.relation.size() != l_count) throw DimensionError("one transform per relation is required");
        for (std::size_t k = 0; k < l_count; ++k)
          msg = sum_into(t, msg, t.spmm(pg.sym_gcn()[k].matrix, t.matmul(h, param())));
        break;
      case Variant::sage: {
        if (layer.relation.size() != l_count) throw DimensionError("one transform per relation is required");
        std::vector<ad::Var> ws;
        for (std::size_t k = 0; k < l_count; ++k) ws.push_back(param());
        msg = t.matmul(h, param());
        for (std::size_t k = 0; k < l_count; ++k)
          msg = sum_into(t, msg, t.spmm(pg.row_mean()[k].matrix, t.matmul(h, ws[k])));
        break;
      }
      case Variant::gin:
        if (layer.mlps.size() != l_count) throw DimensionError("one MLP per relation is required");
        for (std::size_t k = 0; k < l_count; ++k) {
          const ad::Var agg = t.add(t.scale(h, 1.0 + layer.mlps[k].eps), t.spmm(pg.raw()[k].matrix, h));
          const ad::Var hidden = t.activation(t.matmul(agg, param()), Activation::relu());
          msg = sum_into(t, msg, t.matmul(hidden, param()));
        }
        break;
      default:
        throw Error("variant is not trainable");
    }
    ad::Var next_h = t.activation(*msg, c.activation);
    if (c.residual) next_h = t.add(next_h, h);
    states.push_back(next_h);
    h = next_h;
  }

  ad::Var readout = h;
  if (c.jk == JkMode::cat) readout = t.concat_cols(states);
  if (c.jk == JkMode::max) readout = t.max(states);
  const ad::Var pooled = t.mean_pool(readout, b.segment, b.graphs);
  const ad::Var head = param();
  cache.prediction = t.add_row(t.matmul(pooled, head), param());
}

std::vector<Matrix> backward(ForwardCache& cache, const Matrix& loss_grad) {
  if (cache.tape.size() == 0) throw Error("backward needs a recorded forward pass");
  cache.tape.backward(cache.prediction, loss_grad);
  std::vector<Matrix> grads;
  grads.reserve(cache.params.size());
  for (auto v : cache.params) grads.push_back(cache.tape.grad(v));
  return grads;
}

double mae(const Matrix& prediction, const Matrix& target) {
  if (prediction.rows() != target.rows() || prediction.cols() != target.cols() || prediction.size() == 0)
    throw DimensionError("prediction and target shapes differ");
  return (prediction - target).cwiseAbs().mean();
}

Matrix mae_gradient(const Matrix& prediction, const Matrix& target) {
  if (prediction.rows() != target.rows() || prediction.cols() != target.cols() || prediction.size() == 0)
    throw DimensionError("prediction and target shapes differ");
  const double w = 1.0 / static_cast<double>(prediction.size());
  return (prediction - target).unaryExpr([w](double r) { return r > 0.0 ? w : (r < 0.0 ? -w : 0.0); });
}

TrainResult train(const SyntheticTask& task, const ModelConfig& c) {
  validate(c);
  const Batch batch = make_batch(task.samples, c);
  TrainResult result;
  result.model = init_model(c, batch.graph.relation_count(), batch.features.cols());
  auto params = parameters(result.model);
  result.trace.reserve(c.epochs + 1);
  ForwardCache cache;
  for (std::size_t epoch = 0;; ++epoch) {
    forward(result.model, batch, cache);
    const Matrix& pred = cache.tape.value(cache.prediction);
    const double loss = mae(pred, batch.targets);
    result.trace.push_back(loss);
    if (!std::isfinite(loss)) {
      result.diverged = true;
      break;
    }
    if (epoch == c.epochs) break;
    const auto grads = backward(cache, mae_gradient(pred, batch.targets));
    for (std::size_t i = 0; i < params.size(); ++i) *params[i] -= c.learning_rate * grads[i];
  }
  return result;
}

GradientCheck check_gradients(const Model& model, const Batch& batch, const Matrix& weights, double step,
                              double floor) {
  ForwardCache cache = forward(model, batch);
  const auto grads = backward(cache, weights);
  ForwardCache probe_cache;
  auto objective = [&](const Model& m) {
    forward(m, batch, probe_cache);
    return probe_cache.tape.value(probe_cache.prediction).cwiseProduct(weights).sum();
  };
  GradientCheck out;
  Model probe = model;
  auto params = parameters(probe);
  for (std::size_t p = 0; p < params.size(); ++p) {
    Matrix& w = *params[p];
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      const double orig = w.data()[i];
      w.data()[i] = orig + step;
      const double up = objective(probe);
      w.data()[i] = orig - step;
      const double down = objective(probe);
      w.data()[i] = orig;
      const double fd = (up - down) / (2.0 * step);
      const double an = grads[p].data()[i];
      const double denom = std::max({std::abs(an), std::abs(fd), floor});
      out.max_rel_error = std::max(out.max_rel_error, std::abs(an - fd) / denom);
      ++out.entries;
    }
  }
  return out;
}

}  // namespace mrs
