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

#include "mrsplit/convolution.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <string>

#include "mrsplit/error.hpp"

namespace mrs {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw DimensionError(what);
}

void check_features(const Matrix& x, const PreparedGraph& g) {
  require(static_cast<std::size_t>(x.rows()) == g.num_nodes(),
          "feature matrix has " + std::to_string(x.rows()) + " rows for " +
              std::to_string(g.num_nodes()) + " nodes");
}

void check_transforms(std::span<const Matrix> ws, std::size_t count, Eigen::Index in_dim,
                      const char* name) {
  require(ws.size() == count, std::string(name) + ": expected " + std::to_string(count) +
                                  " per-relation transforms, got " + std::to_string(ws.size()));
  for (const auto& w : ws) {
    require(w.rows() == in_dim, std::string(name) + ": transform input width mismatch");
    require(w.cols() == ws.front().cols(), std::string(name) + ": transform output width mismatch");
  }
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Matrix finish(Matrix out, const LayerParams& p, const Activation& act) {
  if (p.bias.size() > 0) {
    require(p.bias.size() == out.cols(), "bias width does not match layer output");
    out.rowwise() += p.bias;
  }
  return act.apply(out);
}

}  // namespace

Activation Activation::leaky_relu(double slope) {
  if (!(slope > 0.0 && slope < 1.0)) throw Error("leaky_relu slope must lie in (0, 1)");
  return {ActivationKind::leaky_relu, slope};
}

double Activation::operator()(double x) const {
  switch (kind) {
    case ActivationKind::identity:
      return x;
    case ActivationKind::relu:
      return x > 0.0 ? x : 0.0;
    case ActivationKind::leaky_relu:
      return x > 0.0 ? x : slope * x;
    case ActivationKind::sigmoid:
      return logistic(x);
  }
  return x;
}

Matrix Activation::apply(const Matrix& x) const {
  if (kind == ActivationKind::identity) return x;
  return x.unaryExpr([this](double v) { return (*this)(v); });
}

Activation parse_activation(std::string_view name) {
  if (name == "identity") return Activation::identity();
  if (name == "relu") return Activation::relu();
  if (name == "sigmoid") return Activation::sigmoid();
  if (name == "leaky_relu") return Activation::leaky_relu();
  constexpr std::string_view prefix = "leaky_relu:";
  if (name.substr(0, prefix.size()) == prefix) {
    const auto rest = name.substr(prefix.size());
    double slope = 0.0;
    auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), slope);
    if (ec == std::errc{} && ptr == rest.data() + rest.size()) return Activation::leaky_relu(slope);
  }
  throw Error("unknown activation '" + std::string(name) + "'");
}

std::string to_string(const Activation& act) {
  switch (act.kind) {
    case ActivationKind::identity:
      return "identity";
    case ActivationKind::relu:
      return "relu";
    case ActivationKind::leaky_relu:
      return act.slope == 0.01 ? "leaky_relu" : "leaky_relu:" + std::to_string(act.slope);
    case ActivationKind::sigmoid:
      return "sigmoid";
  }
  return "unknown";
}

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::gcn:
      return "gcn";
    case Variant::sage:
      return "sage";
    case Variant::gat:
      return "gat";
    case Variant::gin:
      return "gin";
    case Variant::gatedgcn:
      return "gatedgcn";
  }
  return "unknown";
}

Variant parse_variant(std::string_view name) {
  if (name == "gcn") return Variant::gcn;
  if (name == "sage") return Variant::sage;
  if (name == "gat") return Variant::gat;
  if (name == "gin") return Variant::gin;
  if (name == "gatedgcn") return Variant::gatedgcn;
  throw Error("unknown variant '" + std::string(name) + "'");
}

PreparedGraph::PreparedGraph(MultiRelGraph mrg)
    : mrg_(std::move(mrg)),
      sym_(normalize(mrg_, Normalization::sym_gcn)),
      mean_(normalize(mrg_, Normalization::row_mean)),
      raw_(normalize(mrg_, Normalization::raw)) {}

Matrix mrs_linear_layer(const Matrix& x, std::span<const RelationOperator> ops,
                        std::span<const Matrix> weights, Activation act) {
  require(ops.size() == weights.size(), "mrs_linear_layer: operator and transform counts differ");
  require(!ops.empty(), "mrs_linear_layer: at least one relation is required");
  check_transforms(weights, ops.size(), x.cols(), "mrs_linear_layer");
  Matrix out = Matrix::Zero(x.rows(), weights.front().cols());
  for (std::size_t k = 0; k < ops.size(); ++k) {
    require(ops[k].matrix.rows() == x.rows() && ops[k].matrix.cols() == x.rows(),
            "mrs_linear_layer: operator size does not match feature rows");
    out.noalias() += ops[k].matrix * (x * weights[k]);
  }
  return act.apply(out);
}

Matrix mrs_gcn(const Matrix& x, const PreparedGraph& g, const LayerParams& p, Activation act) {
  check_features(x, g);
  return finish(mrs_linear_layer(x, g.sym_gcn(), p.relation, Activation::identity()), p, act);
}

Matrix mrs_sage(const Matrix& x, const PreparedGraph& g, const LayerParams& p, Activation act) {
  check_features(x, g);
  check_transforms(p.relation, g.relation_count(), x.cols(), "mrs_sage");
  require(p.self.rows() == x.cols() && p.self.cols() == p.relation.front().cols(),
          "mrs_sage: self transform shape mismatch");
  Matrix out = x * p.self;
  for (std::size_t k = 0; k < g.relation_count(); ++k)
    out.noalias() += g.row_mean()[k].matrix * (x * p.relation[k]);
  return finish(std::move(out), p, act);
}

Matrix mrs_gat(const Matrix& x, const PreparedGraph& g, const LayerParams& p, Activation act) {
  check_features(x, g);
  require(!p.heads.empty(), "mrs_gat: at least one head is required");
  const auto& base = g.graph().base();
  const auto l = g.relation_count();
  const Eigen::Index head_dim = p.heads.front().relation.empty() ? 0 : p.heads.front().relation.front().cols();
  Matrix out = Matrix::Zero(x.rows(), head_dim * static_cast<Eigen::Index>(p.heads.size()));

  for (std::size_t h = 0; h < p.heads.size(); ++h) {
    const auto& head = p.heads[h];
    check_transforms(head.relation, l, x.cols(), "mrs_gat");
    require(head.relation.front().cols() == head_dim, "mrs_gat: heads must share output width");
    require(head.attention.size() == 2 * head_dim, "mrs_gat: attention vector must have length 2 d'");
    const auto a_dst = head.attention.head(head_dim);
    const auto a_src = head.attention.tail(head_dim);

    std::vector<Matrix> z(l);
    std::vector<Eigen::VectorXd> s_dst(l), s_src(l);
    for (std::size_t k = 0; k < l; ++k) {
      z[k] = x * head.relation[k];
      s_dst[k] = z[k] * a_dst;
      s_src[k] = z[k] * a_src;
    }
    const auto col = static_cast<Eigen::Index>(h) * head_dim;
    std::vector<double> logits;
    for (NodeId i = 0; i < base.num_nodes(); ++i) {
      const auto in = base.in_edges(i);
      if (in.empty()) continue;
      logits.resize(in.size());
      double peak = -std::numeric_limits<double>::infinity();
      for (std::size_t t = 0; t < in.size(); ++t) {
        const auto e = in[t];
        const auto k = g.graph().relation_of(e);
        const double raw = s_dst[k](i) + s_src[k](base.edge(e).src);
        logits[t] = raw > 0.0 ? raw : p.attention_slope * raw;
        peak = std::max(peak, logits[t]);
      }
      double total = 0.0;
      for (auto& v : logits) total += (v = std::exp(v - peak));
      for (std::size_t t = 0; t < in.size(); ++t) {
        const auto e = in[t];
        const auto k = g.graph().relation_of(e);
        out.row(i).segment(col, head_dim) += (logits[t] / total) * z[k].row(base.edge(e).src);
      }
    }
  }
  return finish(std::move(out), p, act);
}

Matrix mrs_gin(const Matrix& x, const PreparedGraph& g, const LayerParams& p, Activation act) {
  check_features(x, g);
  require(p.mlps.size() == g.relation_count(), "mrs_gin: one MLP per relation is required");
  Matrix out;
  for (std::size_t k = 0; k < g.relation_count(); ++k) {
    const auto& mlp = p.mlps[k];
    require(mlp.hidden.rows() == x.cols(), "mrs_gin: MLP input width mismatch");
    require(mlp.output.rows() == mlp.hidden.cols(), "mrs_gin: MLP hidden width mismatch");
    Matrix agg = (1.0 + mlp.eps) * x;
    agg.noalias() += g.raw()[k].matrix * x;
    const Matrix hidden = (agg * mlp.hidden).cwiseMax(0.0);
    if (k == 0) {
      out = hidden * mlp.output;
    } else {
      require(mlp.output.cols() == out.cols(), "mrs_gin: MLP output width mismatch");
      out.noalias() += hidden * mlp.output;
    }
  }
  return finish(std::move(out), p, act);
}

Matrix mrs_gatedgcn(const Matrix& x, const Matrix& edge_attrs, const PreparedGraph& g,
                    const LayerParams& p, Activation act) {
  check_features(x, g);
  const auto& base = g.graph().base();
  check_transforms(p.relation, g.relation_count(), x.cols(), "mrs_gatedgcn");
  const auto d_out = p.relation.front().cols();
  for (const Matrix* m : {&p.self, &p.gate_dst, &p.gate_src})
    require(m->rows() == x.cols() && m->cols() == d_out, "mrs_gatedgcn: gate transform shape mismatch");
  const bool has_attrs = edge_attrs.size() > 0 && p.gate_edge.size() > 0;
  if (has_attrs) {
    require(static_cast<std::size_t>(edge_attrs.rows()) == base.num_edges(),
            "mrs_gatedgcn: edge attributes need one row per edge");
    require(p.gate_edge.rows() == edge_attrs.cols() && p.gate_edge.cols() == d_out,
            "mrs_gatedgcn: edge gate transform shape mismatch");
  }

  Matrix out = x * p.self;
  const Matrix dx = x * p.gate_dst;
  const Matrix ex = x * p.gate_src;
  Matrix ce;
  if (has_attrs) ce = edge_attrs * p.gate_edge;
  std::vector<Matrix> bx(g.relation_count());
  for (std::size_t k = 0; k < bx.size(); ++k) bx[k] = x * p.relation[k];

  Eigen::RowVectorXd num(d_out), den(d_out), gate(d_out);
  for (NodeId i = 0; i < base.num_nodes(); ++i) {
    const auto in = base.in_edges(i);
    if (in.empty()) continue;
    num.setZero();
    den.setZero();
    for (auto e : in) {
      const NodeId j = base.edge(e).src;
      gate = dx.row(i) + ex.row(j);
      if (has_attrs) gate += ce.row(static_cast<Eigen::Index>(e));
      gate = gate.unaryExpr([](double v) { return logistic(v); });
      num += gate.cwiseProduct(bx[g.graph().relation_of(e)].row(j));
      den += gate;
    }
    out.row(i) += num.cwiseQuotient((den.array() + p.gate_eps).matrix());
  }
  return finish(std::move(out), p, act);
}

Matrix apply_layer(Variant variant, const Matrix& x, const PreparedGraph& g, const LayerParams& p,
                   Activation act) {
  switch (variant) {
    case Variant::gcn:
      return mrs_gcn(x, g, p, act);
    case Variant::sage:
      return mrs_sage(x, g, p, act);
    case Variant::gat:
      return mrs_gat(x, g, p, act);
    case Variant::gin:
      return mrs_gin(x, g, p, act);
    case Variant::gatedgcn:
      return mrs_gatedgcn(x, Matrix(), g, p, act);
  }
  throw Error("unknown variant");
}

double glorot_limit(Eigen::Index fan_in, Eigen::Index fan_out) {
  return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

LayerParams sample_layer_params(Variant variant, std::size_t relation_count, Eigen::Index in_dim,
                                Eigen::Index out_dim, SplitMix64& rng, double limit,
                                std::size_t heads, double bias_limit) {
  auto draw = [&](Eigen::Index rows, Eigen::Index cols) {
    const double lim = limit > 0.0 ? limit : glorot_limit(rows, cols);
    return uniform_matrix(rows, cols, -lim, lim, rng);
  };
  LayerParams p;
  switch (variant) {
    case Variant::gcn:
      for (std::size_t k = 0; k < relation_count; ++k) p.relation.push_back(draw(in_dim, out_dim));
      break;
    case Variant::sage:
      p.self = draw(in_dim, out_dim);
      for (std::size_t k = 0; k < relation_count; ++k) p.relation.push_back(draw(in_dim, out_dim));
      break;
    case Variant::gat: {
      if (heads == 0 || out_dim % static_cast<Eigen::Index>(heads) != 0)
        throw DimensionError("GAT output width must be divisible by the head count");
      const auto head_dim = out_dim / static_cast<Eigen::Index>(heads);
      for (std::size_t h = 0; h < heads; ++h) {
        GatHead head;
        for (std::size_t k = 0; k < relation_count; ++k) head.relation.push_back(draw(in_dim, head_dim));
        head.attention = draw(2 * head_dim, 1).col(0);
        p.heads.push_back(std::move(head));
      }
      break;
    }
    case Variant::gin:
      for (std::size_t k = 0; k < relation_count; ++k)
        p.mlps.push_back({draw(in_dim, out_dim), draw(out_dim, out_dim), 0.0});
      break;
    case Variant::gatedgcn:
      p.self = draw(in_dim, out_dim);
      p.gate_dst = draw(in_dim, out_dim);
      p.gate_src = draw(in_dim, out_dim);
      for (std::size_t k = 0; k < relation_count; ++k) p.relation.push_back(draw(in_dim, out_dim));
      break;
  }
  if (bias_limit > 0.0) p.bias = uniform_matrix(1, out_dim, -bias_limit, bias_limit, rng).row(0);
  return p;
}

LayerParams tie_relations(const LayerParams& p, std::size_t relation_count) {
  LayerParams t = p;
  if (!p.relation.empty()) t.relation.assign(relation_count, p.relation.front());
  for (auto& head : t.heads)
    if (!head.relation.empty()) head.relation.assign(relation_count, head.relation.front());
  if (!p.mlps.empty()) t.mlps.assign(relation_count, p.mlps.front());
  return t;
}

std::vector<Matrix> iterate(const Matrix& x0, std::size_t layers, const LayerFn& layer_fn) {
  if (layers == 0) throw Error("iterate requires at least one layer");
  std::vector<Matrix> states;
  states.reserve(layers);
  const Matrix* current = &x0;
  for (std::size_t l = 0; l < layers; ++l) {
    states.push_back(layer_fn(*current, l));
    current = &states.back();
  }
  return states;
}

}  // namespace mrs
