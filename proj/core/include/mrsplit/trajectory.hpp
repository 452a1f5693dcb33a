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
#include <iosfwd>
#include <string>
#include <vector>

#include "mrsplit/convolution.hpp"
#include "mrsplit/ensemble.hpp"
#include "mrsplit/ordering.hpp"

namespace mrs {

/// Deep-iteration experiment: random connected graphs, a linear embedding of
/// random input features to `dim`, then `layers` message-passing steps with
/// fresh transforms per layer, each followed by `activation`. Every base
/// variant runs on the unsplit graph and its MRS counterpart on the split.
struct RodTraceConfig {
  std::size_t graphs = 50;
  RandomGraphParams graph_params{};
  std::size_t layers = 128;
  Eigen::Index dim = 16;
  Eigen::Index input_dim = 16;
  Activation activation = Activation::relu();
  OrderingMethod ordering = OrderingMethod::degree;
  double ppr_alpha = 0.1;
  int ppr_iters = 15;
  std::vector<Variant> variants{Variant::gcn, Variant::sage};
  /// Follow the usual library initialisation for biases: SAGE layers draw
  /// theirs uniform in +-1/sqrt(dim), every other variant starts at zero.
  /// When false no layer has a bias.
  bool default_bias = true;
  std::uint64_t seed = 0;
};

/// Bias limit a layer of `variant` gets under `config` (0 means no bias).
double rod_trace_bias_limit(const RodTraceConfig& config, Variant variant);

struct RodTracePoint {
  std::size_t iter = 0;
  std::string variant;  // "gcn" or "mrs-gcn", ...
  double rod_mean = 0.0;
  /// Mean Dirichlet energy of X / ||X||_F.
  double dirichlet_mean = 0.0;
};

/// Iteration 0 is the embedded input. A state that reaches exactly zero
/// counts as rank-one collapsed (ROD 0, energy 0).
std::vector<RodTracePoint> rod_trace(const RodTraceConfig& config);

/// CSV with header "iter,variant,rod_mean,dirichlet_mean", rows grouped by
/// variant, values printed with 17 significant digits.
void write_rod_trace_csv(std::ostream& out, const std::vector<RodTracePoint>& points);

}  // namespace mrs
