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

#include <benchmark/benchmark.h>

#include "mrsplit/convolution.hpp"
#include "mrsplit/diagnostics.hpp"
#include "mrsplit/ensemble.hpp"
#include "mrsplit/trainer.hpp"

namespace {

using namespace mrs;

Graph graph_of(std::size_t n) {
  SplitMix64 rng(n);
  return random_connected_graph(n, 0.125, rng);
}

void BM_SplitDegree(benchmark::State& state) {
  const Graph g = graph_of(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(split_edges(g, order_degree(g)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.num_edges()));
}
BENCHMARK(BM_SplitDegree)->RangeMultiplier(8)->Range(32, 16384);

void BM_OrderPpr(benchmark::State& state) {
  const Graph g = graph_of(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(order_ppr(g));
}
BENCHMARK(BM_OrderPpr)->RangeMultiplier(8)->Range(32, 16384);

void BM_Layer(benchmark::State& state) {
  const auto variant = static_cast<Variant>(state.range(0));
  const Graph g = graph_of(static_cast<std::size_t>(state.range(1)));
  const PreparedGraph pg(split_edges(g, order_degree(g)));
  SplitMix64 rng(1);
  const LayerParams p = sample_layer_params(variant, 3, 32, 32, rng);
  const Matrix x = uniform_matrix(static_cast<Eigen::Index>(g.num_nodes()), 32, -1, 1, rng);
  for (auto _ : state) benchmark::DoNotOptimize(apply_layer(variant, x, pg, p, Activation::relu()));
  state.SetLabel(std::string(to_string(variant)));
}
BENCHMARK(BM_Layer)->ArgsProduct({{static_cast<int>(Variant::gcn), static_cast<int>(Variant::sage),
                                   static_cast<int>(Variant::gat), static_cast<int>(Variant::gin),
                                   static_cast<int>(Variant::gatedgcn)},
                                  {256, 4096}});

void BM_Rod(benchmark::State& state) {
  SplitMix64 rng(2);
  const Matrix x = uniform_matrix(state.range(0), 16, -1, 1, rng);
  for (auto _ : state) benchmark::DoNotOptimize(rod(x));
}
BENCHMARK(BM_Rod)->RangeMultiplier(4)->Range(16, 4096);

void BM_ExactRank(benchmark::State& state) {
  SplitMix64 rng(3);
  const auto n = state.range(0);
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> m(n, n);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = static_cast<std::int64_t>(rng.below(19)) - 9;
  for (auto _ : state) benchmark::DoNotOptimize(exact_rank_small(m));
}
BENCHMARK(BM_ExactRank)->DenseRange(8, 32, 8);

void BM_TrainEpoch(benchmark::State& state) {
  SyntheticTaskParams tp;
  const auto task = make_synthetic_task(tp);
  ModelConfig c;
  c.multi_relational = state.range(0) != 0;
  const Batch b = make_batch(task.samples, c);
  const Model m = init_model(c, b.graph.relation_count(), b.features.cols());
  ForwardCache cache = forward(m, b);
  for (auto _ : state) {
    forward(m, b, cache);
    const Matrix& pred = cache.tape.value(cache.prediction);
    benchmark::DoNotOptimize(backward(cache, mae_gradient(pred, b.targets)));
  }
  state.SetLabel(c.multi_relational ? "mrs-gcn" : "gcn");
}
BENCHMARK(BM_TrainEpoch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

// The packaged benchmark_main archive is LTO bytecode tied to another
// compiler build, so the entry point is defined here.
BENCHMARK_MAIN();
