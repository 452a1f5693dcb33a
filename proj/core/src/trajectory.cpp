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

#include "mrsplit/trajectory.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "mrsplit/diagnostics.hpp"
#include "mrsplit/error.hpp"

namespace mrs {
namespace {

OrderingScores make_scores(const RodTraceConfig& c, const Graph& g, const Matrix& features,
                           std::uint64_t seed) {
  switch (c.ordering) {
    case OrderingMethod::random:
      return order_random(g.num_nodes(), seed);
    case OrderingMethod::features:
      return order_feature_sum(features);
    case OrderingMethod::ppr:
      return order_ppr(g, c.ppr_alpha, c.ppr_iters);
    case OrderingMethod::degree:
      return order_degree(g);
  }
  throw Error("unknown ordering");
}

}  // namespace

double rod_trace_bias_limit(const RodTraceConfig& c, Variant variant) {
  if (!c.default_bias || variant != Variant::sage) return 0.0;
  return 1.0 / std::sqrt(static_cast<double>(c.dim));
}

std::vector<RodTracePoint> rod_trace(const RodTraceConfig& c) {
  if (c.layers == 0) throw Error("rod_trace needs at least one layer");
  if (c.dim <= 0 || c.input_dim <= 0) throw Error("rod_trace dimensions must be positive");
  const std::size_t runs = c.variants.size() * 2;
  std::vector<std::vector<double>> rod_sum(runs, std::vector<double>(c.layers + 1, 0.0));
  std::vector<std::vector<double>> energy_sum = rod_sum;

  for (std::size_t gi = 0; gi < c.graphs; ++gi) {
    SplitMix64 rng(derive_seed(c.seed, gi));
    const Graph g = random_connected_graph(c.graph_params, rng);
    const auto n = static_cast<Eigen::Index>(g.num_nodes());
    const Matrix features = uniform_matrix(n, c.input_dim, -1.0, 1.0, rng);
    const Matrix embed = uniform_matrix(c.input_dim, c.dim, -glorot_limit(c.input_dim, c.dim),
                                        glorot_limit(c.input_dim, c.dim), rng);
    const Matrix x0 = features * embed;
    const PreparedGraph unsplit(single_relation(g));
    const PreparedGraph split(split_edges(g, make_scores(c, g, features, rng())));

    for (std::size_t vi = 0; vi < c.variants.size(); ++vi) {
      for (int mrs = 0; mrs < 2; ++mrs) {
        const auto run = vi * 2 + static_cast<std::size_t>(mrs);
        const PreparedGraph& pg = mrs ? split : unsplit;
        SplitMix64 layer_rng(derive_seed(derive_seed(c.seed, gi), 1000 + run));
        auto accumulate = [&](std::size_t iter, const Matrix& x) {
          const double norm = x.norm();
          if (norm == 0.0) return;
          rod_sum[run][iter] += rod(x);
          energy_sum[run][iter] += dirichlet_energy(x / norm, g);
        };
        accumulate(0, x0);
        Matrix x = x0;
        const double bias_limit = rod_trace_bias_limit(c, c.variants[vi]);
        for (std::size_t l = 1; l <= c.layers; ++l) {
          const auto params = sample_layer_params(c.variants[vi], pg.relation_count(), c.dim, c.dim,
                                                  layer_rng, 0.0, 2, bias_limit);
          x = apply_layer(c.variants[vi], x, pg, params, c.activation);
          accumulate(l, x);
        }
      }
    }
  }

  std::vector<RodTracePoint> points;
  const double count = c.graphs == 0 ? 1.0 : static_cast<double>(c.graphs);
  for (std::size_t vi = 0; vi < c.variants.size(); ++vi) {
    for (int mrs = 0; mrs < 2; ++mrs) {
      const auto run = vi * 2 + static_cast<std::size_t>(mrs);
      const std::string name = (mrs ? "mrs-" : "") + std::string(to_string(c.variants[vi]));
      for (std::size_t l = 0; l <= c.layers; ++l)
        points.push_back({l, name, rod_sum[run][l] / count, energy_sum[run][l] / count});
    }
  }
  return points;
}

void write_rod_trace_csv(std::ostream& out, const std::vector<RodTracePoint>& points) {
  out << "iter,variant,rod_mean,dirichlet_mean\n";
  char buf[64];
  for (const auto& p : points) {
    out << p.iter << ',' << p.variant << ',';
    std::snprintf(buf, sizeof buf, "%.17g", p.rod_mean);
    out << buf << ',';
    std::snprintf(buf, sizeof buf, "%.17g", p.dirichlet_mean);
    out << buf << '\n';
  }
}

}  // namespace mrs
