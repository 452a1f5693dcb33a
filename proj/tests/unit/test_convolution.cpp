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

#include <gtest/gtest.h>

#include <cmath>

#include "mrsplit/convolution.hpp"
#include "mrsplit/ensemble.hpp"
#include "mrsplit/error.hpp"

namespace mrs {
namespace {

Matrix m1(std::initializer_list<double> v) {
  Matrix x(static_cast<Eigen::Index>(v.size()), 1);
  Eigen::Index i = 0;
  for (double d : v) x(i++, 0) = d;
  return x;
}

Matrix scalar(double v) { return Matrix::Constant(1, 1, v); }

Graph path3() { return Graph::from_edges(3, {{0, 1}, {1, 2}}, true); }

PreparedGraph split_path() { return PreparedGraph(split_edges(path3(), order_degree(path3()))); }

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

RelationOperator dense_op(const Matrix& a) { return {a.sparseView(), Normalization::raw}; }

TEST(Activation, Values) {
  EXPECT_EQ(Activation::relu()(-2.0), 0.0);
  EXPECT_EQ(Activation::relu()(3.0), 3.0);
  EXPECT_DOUBLE_EQ(Activation::leaky_relu(0.1)(-2.0), -0.2);
  EXPECT_DOUBLE_EQ(Activation::sigmoid()(0.0), 0.5);
  EXPECT_EQ(Activation::identity()(-4.0), -4.0);
  EXPECT_THROW(Activation::leaky_relu(1.5), Error);
  EXPECT_THROW(Activation::leaky_relu(0.0), Error);
}

TEST(Activation, ParsesNames) {
  EXPECT_EQ(parse_activation("relu").kind, ActivationKind::relu);
  EXPECT_DOUBLE_EQ(parse_activation("leaky_relu:0.2").slope, 0.2);
  EXPECT_EQ(to_string(parse_activation("leaky_relu")), "leaky_relu");
  EXPECT_THROW(parse_activation("tanh"), Error);
  EXPECT_THROW(parse_activation("leaky_relu:x"), Error);
}

TEST(Variant, RoundTripsNames) {
  for (auto v : {Variant::gcn, Variant::sage, Variant::gat, Variant::gin, Variant::gatedgcn})
    EXPECT_EQ(parse_variant(to_string(v)), v);
  EXPECT_THROW(parse_variant("mlp"), Error);
}

TEST(LinearLayer, ZeroInputGivesZero) {
  const auto pg = split_path();
  const std::vector<Matrix> ws(3, Matrix::Random(4, 5));
  for (auto act : {Activation::relu(), Activation::leaky_relu(), Activation::identity()})
    EXPECT_EQ(max_abs(mrs_linear_layer(Matrix::Zero(3, 4), pg.sym_gcn(), ws, act)), 0.0);
}

TEST(LinearLayer, IdentityCase) {
  const Matrix x = Matrix::Random(4, 3);
  const std::vector<RelationOperator> ops{dense_op(Matrix::Identity(4, 4))};
  const std::vector<Matrix> ws{Matrix::Identity(3, 3)};
  EXPECT_EQ(max_abs(mrs_linear_layer(x, ops, ws, Activation::identity()) - x), 0.0);
}

TEST(LinearLayer, TwoRelationHandProduct) {
  Matrix a1(2, 2);
  a1 << 0, 0, 1, 0;
  const std::vector<RelationOperator> ops{dense_op(a1), dense_op(a1.transpose())};
  const std::vector<Matrix> ws{scalar(2), scalar(3)};
  const Matrix out = mrs_linear_layer(m1({1, 2}), ops, ws, Activation::identity());
  EXPECT_EQ(out, m1({6, 2}));
}

TEST(LinearLayer, RejectsMismatchedShapes) {
  const auto pg = split_path();
  const std::vector<Matrix> two(2, Matrix::Ones(1, 1));
  EXPECT_THROW(mrs_linear_layer(m1({1, 2, 3}), pg.sym_gcn(), two, Activation::identity()), DimensionError);
  const std::vector<Matrix> wide(3, Matrix::Ones(2, 1));
  EXPECT_THROW(mrs_linear_layer(m1({1, 2, 3}), pg.sym_gcn(), wide, Activation::identity()), DimensionError);
}

TEST(Gcn, PathWithDistinctTransforms) {
  LayerParams p;
  p.relation = {scalar(2), scalar(5), scalar(11)};
  const Matrix out = mrs_gcn(m1({1, 4, 7}), split_path(), p, Activation::identity());
  // numpy oracle: node 1 = (W_1 x_0 + W_1 x_2)/sqrt 2, leaves = W_2 x_1/sqrt 2.
  EXPECT_NEAR(out(0, 0), 14.14213562373095, 1e-12);
  EXPECT_NEAR(out(1, 0), 11.31370849898476, 1e-12);
  EXPECT_NEAR(out(2, 0), 14.14213562373095, 1e-12);
}

TEST(Gcn, DegreeZeroNodeHasZeroRow) {
  const Graph g = Graph::from_edges(3, {{0, 1}, {1, 2}});
  const PreparedGraph pg(single_relation(g));
  LayerParams p;
  p.relation = {Matrix::Ones(2, 2)};
  const Matrix out = mrs_gcn(Matrix::Ones(3, 2), pg, p, Activation::identity());
  // Node 0 has no in-edges, so it also contributes nothing to node 1.
  EXPECT_EQ(out.row(0).norm(), 0.0);
  EXPECT_EQ(out.row(1).norm(), 0.0);
  EXPECT_NEAR(out(2, 0), 2.0, 1e-15);
}

TEST(Sage, EdgelessGivesSelfTransform) {
  const PreparedGraph pg(split_edges(Graph::from_edges(3, {}), order_random(3, 1)));
  SplitMix64 rng(1);
  const LayerParams p = sample_layer_params(Variant::sage, 3, 4, 2, rng);
  const Matrix x = uniform_matrix(3, 4, -1, 1, rng);
  const auto act = Activation::leaky_relu();
  EXPECT_LE(max_abs(mrs_sage(x, pg, p, act) - act.apply(x * p.self)), 1e-15);
}

TEST(Sage, ZeroNeighbourTransforms) {
  const auto pg = split_path();
  SplitMix64 rng(2);
  LayerParams p = sample_layer_params(Variant::sage, 3, 4, 2, rng);
  for (auto& w : p.relation) w.setZero();
  const Matrix x = uniform_matrix(3, 4, -1, 1, rng);
  EXPECT_LE(max_abs(mrs_sage(x, pg, p, Activation::relu()) - Activation::relu().apply(x * p.self)), 1e-15);
}

TEST(Sage, PathWithDistinctTransforms) {
  LayerParams p;
  p.self = scalar(0);
  p.relation = {scalar(2), scalar(5), scalar(11)};
  const Matrix out = mrs_sage(m1({1, 4, 7}), split_path(), p, Activation::identity());
  EXPECT_EQ(out, m1({20, 8, 20}));
}

TEST(Gat, SingleNeighbourGetsFullWeight) {
  const Graph g = Graph::from_edges(2, {{0, 1}});
  const PreparedGraph pg(single_relation(g));
  SplitMix64 rng(4);
  LayerParams p = sample_layer_params(Variant::gat, 1, 3, 4, rng);
  const Matrix x = uniform_matrix(2, 3, -1, 1, rng);
  const Matrix out = mrs_gat(x, pg, p, Activation::identity());
  for (std::size_t h = 0; h < 2; ++h) {
    const Matrix z = x * p.heads[h].relation[0];
    EXPECT_LE((out.row(1).segment(2 * static_cast<Eigen::Index>(h), 2) - z.row(0)).norm(), 1e-14);
  }
  EXPECT_EQ(out.row(0).norm(), 0.0);  // no in-neighbours
}

TEST(Gat, ZeroAttentionIsPlainMean) {
  const auto pg = split_path();
  SplitMix64 rng(5);
  LayerParams p = sample_layer_params(Variant::gat, 3, 3, 4, rng);
  for (auto& head : p.heads) head.attention.setZero();
  const Matrix x = uniform_matrix(3, 3, -1, 1, rng);
  const Matrix out = mrs_gat(x, pg, p, Activation::identity());
  // Node 1 has in-neighbours 0 and 2, both in the forward relation.
  for (std::size_t h = 0; h < 2; ++h) {
    const Matrix z = x * p.heads[h].relation[kForward];
    const Eigen::RowVectorXd mean = 0.5 * (z.row(0) + z.row(2));
    EXPECT_LE((out.row(1).segment(2 * static_cast<Eigen::Index>(h), 2) - mean).norm(), 1e-14);
  }
}

TEST(Gat, TwoNeighbourSoftmaxMatchesClosedForm) {
  // Node 0 hears node 1 through relation 0 and node 2 through relation 1.
  const Graph g = Graph::from_edges(3, {{1, 0}, {2, 0}});
  const PreparedGraph pg(MultiRelGraph(g, {0, 1}, 2, order_random(3, 0)));
  LayerParams p;
  GatHead head;
  head.relation = {scalar(2), scalar(-1)};
  head.attention = Eigen::Vector2d(0.5, 1.0);
  p.heads = {head};
  const Matrix out = mrs_gat(m1({1, 2, 3}), pg, p, Activation::identity());
  EXPECT_NEAR(out(0, 0), 3.976656348848106, 1e-14);  // numpy oracle
}

TEST(Gin, EdgelessIdentityMlpsTripleTheInput) {
  const PreparedGraph pg(split_edges(Graph::from_edges(3, {}), order_random(3, 2)));
  LayerParams p;
  p.mlps.assign(3, GinMlp{Matrix::Identity(2, 2), Matrix::Identity(2, 2), 0.0});
  Matrix x(3, 2);
  x << 1, 2, 0.5, 3, 4, 0.25;
  EXPECT_LE(max_abs(mrs_gin(x, pg, p, Activation::identity()) - 3.0 * x), 1e-15);
}

TEST(Gin, EmptyRelationsContributeOnlySelfTerms) {
  // All edges in relation 0: the split output is a single GIN on E1 plus
  // the self terms of the two empty relations.
  const Graph g = Graph::from_edges(3, {{0, 1}, {1, 2}});
  const PreparedGraph split(MultiRelGraph(g, {0, 0}, 3, order_random(3, 0)));
  const PreparedGraph single(single_relation(g));
  SplitMix64 rng(6);
  const LayerParams p = sample_layer_params(Variant::gin, 3, 2, 2, rng);
  LayerParams first;
  first.mlps = {p.mlps[0]};
  const Matrix x = uniform_matrix(3, 2, -1, 1, rng);
  Matrix expect = mrs_gin(x, single, first, Activation::identity());
  for (std::size_t k = 1; k < 3; ++k)
    expect += ((1.0 + p.mlps[k].eps) * x * p.mlps[k].hidden).cwiseMax(0.0) * p.mlps[k].output;
  EXPECT_LE(max_abs(mrs_gin(x, split, p, Activation::identity()) - expect), 1e-14);
}

TEST(GatedGcn, EdgelessGivesSelfTransform) {
  const PreparedGraph pg(single_relation(Graph::from_edges(2, {})));
  SplitMix64 rng(7);
  const LayerParams p = sample_layer_params(Variant::gatedgcn, 1, 3, 3, rng);
  const Matrix x = uniform_matrix(2, 3, -1, 1, rng);
  EXPECT_LE(max_abs(mrs_gatedgcn(x, Matrix(), pg, p, Activation::identity()) - x * p.self), 1e-15);
}

TEST(GatedGcn, ZeroGateInputsAverageNeighbours) {
  const auto pg = split_path();
  SplitMix64 rng(8);
  LayerParams p = sample_layer_params(Variant::gatedgcn, 3, 2, 2, rng);
  p.gate_dst.setZero();
  p.gate_src.setZero();
  const Matrix x = uniform_matrix(3, 2, -1, 1, rng);
  const Matrix out = mrs_gatedgcn(x, Matrix(), pg, p, Activation::identity());
  const Matrix b = x * p.relation[kForward];
  const Eigen::RowVectorXd expect = (x * p.self).row(1) + (0.5 * (b.row(0) + b.row(2))) / (1.0 + p.gate_eps);
  EXPECT_LE((out.row(1) - expect).norm(), 1e-14);
}

TEST(GatedGcn, SingleNeighbourMatchesClosedForm) {
  const Graph g = Graph::from_edges(2, {{0, 1}});
  const PreparedGraph pg(single_relation(g));
  LayerParams p;
  p.self = scalar(0.5);
  p.relation = {scalar(2)};
  p.gate_dst = scalar(1);
  p.gate_src = scalar(-1);
  const Matrix out = mrs_gatedgcn(m1({1, 3}), Matrix(), pg, p, Activation::identity());
  EXPECT_NEAR(out(1, 0), 3.4999977293320113, 1e-14);  // numpy oracle
}

TEST(GatedGcn, EdgeAttributesFeedTheGate) {
  const Graph g = Graph::from_edges(2, {{0, 1}});
  const PreparedGraph pg(single_relation(g));
  LayerParams p;
  p.self = scalar(0);
  p.relation = {scalar(1)};
  p.gate_dst = scalar(0);
  p.gate_src = scalar(0);
  p.gate_edge = scalar(1);
  p.gate_eps = 1.0;
  const Matrix out = mrs_gatedgcn(m1({2, 0}), scalar(3), pg, p, Activation::identity());
  const double gate = 1.0 / (1.0 + std::exp(-3.0));
  EXPECT_NEAR(out(1, 0), gate * 2.0 / (gate + 1.0), 1e-15);
}

class AllVariants : public ::testing::TestWithParam<Variant> {};

TEST_P(AllVariants, PermutationEquivariance) {
  const Variant v = GetParam();
  SplitMix64 rng(10 + static_cast<int>(v));
  const Graph g = random_connected_graph(RandomGraphParams{8, 12, 0.3}, rng);
  const auto n = g.num_nodes();
  std::vector<NodeId> perm(n);
  for (NodeId i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
  const Graph pg_graph = relabel(g, perm);

  const auto scores = order_degree(g);
  OrderingScores permuted = scores;
  for (NodeId i = 0; i < n; ++i) permuted.scores[perm[i]] = scores.scores[i];
  const PreparedGraph a(split_edges(g, scores));
  const PreparedGraph b(split_edges(pg_graph, permuted));

  const LayerParams p = sample_layer_params(v, 3, 4, 4, rng);
  const Matrix x = uniform_matrix(static_cast<Eigen::Index>(n), 4, -1, 1, rng);
  Matrix px(x.rows(), x.cols());
  for (NodeId i = 0; i < n; ++i) px.row(perm[i]) = x.row(i);
  const Matrix out = apply_layer(v, x, a, p, Activation::leaky_relu());
  const Matrix pout = apply_layer(v, px, b, p, Activation::leaky_relu());
  for (NodeId i = 0; i < n; ++i) EXPECT_LE((pout.row(perm[i]) - out.row(i)).norm(), 1e-12);
}

TEST_P(AllVariants, ZeroInputStaysZero) {
  const Variant v = GetParam();
  SplitMix64 rng(20);
  const PreparedGraph pg(split_edges(path3(), order_degree(path3())));
  const LayerParams p = sample_layer_params(v, 3, 4, 4, rng);
  for (auto act : {Activation::relu(), Activation::leaky_relu(), Activation::identity()}) {
    const Matrix out = apply_layer(v, Matrix::Zero(3, 4), pg, p, act);
    EXPECT_EQ(max_abs(out), 0.0);
  }
}

TEST_P(AllVariants, BiasShiftsEveryRow) {
  const Variant v = GetParam();
  SplitMix64 rng(21);
  const PreparedGraph pg(split_edges(path3(), order_degree(path3())));
  LayerParams p = sample_layer_params(v, 3, 4, 4, rng, 0.0, 2, 0.5);
  ASSERT_EQ(p.bias.size(), 4);
  const Matrix x = uniform_matrix(3, 4, -1, 1, rng);
  const Matrix with = apply_layer(v, x, pg, p, Activation::identity());
  const Eigen::RowVectorXd bias = p.bias;
  p.bias.resize(0);
  const Matrix without = apply_layer(v, x, pg, p, Activation::identity());
  for (Eigen::Index i = 0; i < 3; ++i) EXPECT_LE((with.row(i) - without.row(i) - bias).norm(), 1e-14);
  EXPECT_GT(bias.norm(), 0.0);
}

INSTANTIATE_TEST_SUITE_P(Convolution, AllVariants,
                         ::testing::Values(Variant::gcn, Variant::sage, Variant::gat, Variant::gin, Variant::gatedgcn),
                         [](const auto& info) { return std::string(to_string(info.param)); });

class TiedVariants : public ::testing::TestWithParam<Variant> {};

TEST_P(TiedVariants, TiedTransformsReduceToBase) {
  const Variant v = GetParam();
  for (std::uint64_t s = 0; s < 10; ++s) {
    SplitMix64 rng(derive_seed(s, 30));
    const Graph g = random_connected_graph(RandomGraphParams{}, rng);
    const PreparedGraph split(split_edges(g, order_degree(g)));
    const PreparedGraph base(single_relation(g));
    const LayerParams p1 = sample_layer_params(v, 1, 6, 6, rng);
    const LayerParams p3 = tie_relations(p1, 3);
    const Matrix x = uniform_matrix(static_cast<Eigen::Index>(g.num_nodes()), 6, -1, 1, rng);
    const Matrix a = apply_layer(v, x, split, p3, Activation::relu());
    const Matrix b = apply_layer(v, x, base, p1, Activation::relu());
    EXPECT_LE(max_abs(a - b), 1e-10) << to_string(v);
  }
}

INSTANTIATE_TEST_SUITE_P(Convolution, TiedVariants,
                         ::testing::Values(Variant::gcn, Variant::sage, Variant::gat, Variant::gatedgcn),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(SampleLayerParams, GatSplitsWidthAcrossHeads) {
  SplitMix64 rng(1);
  const auto p = sample_layer_params(Variant::gat, 3, 5, 8, rng);
  ASSERT_EQ(p.heads.size(), 2u);
  EXPECT_EQ(p.heads[0].relation.size(), 3u);
  EXPECT_EQ(p.heads[0].relation[0].cols(), 4);
  EXPECT_EQ(p.heads[0].attention.size(), 8);
  EXPECT_THROW(sample_layer_params(Variant::gat, 1, 5, 7, rng), DimensionError);
}

TEST(SampleLayerParams, GlorotLimitBoundsEntries) {
  SplitMix64 rng(2);
  const auto p = sample_layer_params(Variant::gcn, 2, 10, 6, rng);
  for (const auto& w : p.relation) EXPECT_LT(max_abs(w), glorot_limit(10, 6));
  EXPECT_DOUBLE_EQ(glorot_limit(10, 6), std::sqrt(6.0 / 16.0));
}

TEST(Iterate, SingleLayerMatchesDirectCall) {
  const auto pg = split_path();
  SplitMix64 rng(3);
  const auto p = sample_layer_params(Variant::gcn, 3, 2, 2, rng);
  const Matrix x = uniform_matrix(3, 2, -1, 1, rng);
  const auto states = iterate(x, 1, [&](const Matrix& h, std::size_t) { return mrs_gcn(h, pg, p, Activation::relu()); });
  ASSERT_EQ(states.size(), 1u);
  EXPECT_EQ(states[0], mrs_gcn(x, pg, p, Activation::relu()));
  EXPECT_THROW(iterate(x, 0, [](const Matrix& h, std::size_t) { return h; }), Error);
}

TEST(Iterate, ChainDagReachesExactZero) {
  const Graph chain = Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}});
  const std::vector<RelationOperator> ops{graph_operator(chain, Normalization::row_mean)};
  SplitMix64 rng(4);
  const Matrix x = uniform_matrix(4, 3, -1, 1, rng);
  const auto states = iterate(x, longest_path_length(chain) + 1, [&](const Matrix& h, std::size_t) {
    const std::vector<Matrix> w{uniform_matrix(3, 3, -1, 1, rng)};
    return mrs_linear_layer(h, ops, w, Activation::relu());
  });
  EXPECT_EQ(max_abs(states.back()), 0.0);
}

TEST(Iterate, LeafSelfLoopKeepsLeafAlive) {
  const Graph chain = add_leaf_self_loops(Graph::from_edges(3, {{0, 1}, {1, 2}}));
  const std::vector<RelationOperator> ops{graph_operator(chain, Normalization::row_mean)};
  const std::vector<Matrix> w{Matrix::Identity(2, 2)};
  Matrix x(3, 2);
  x << 1, 2, 3, 4, 5, 6;
  const auto states = iterate(x, 10, [&](const Matrix& h, std::size_t) {
    return mrs_linear_layer(h, ops, w, Activation::identity());
  });
  // Row 2 averages itself and its parent, so it stays non-zero while the
  // root (no in-edges) is already zero after one step.
  for (const auto& s : states) {
    EXPECT_GT(s.row(2).norm(), 0.0);
    EXPECT_EQ(s.row(0).norm(), 0.0);
  }
  // By hand: row 2 is (4, 5) then (2.5, 3.5), and halves on every later step.
  EXPECT_DOUBLE_EQ(states.back()(2, 0), 2.5 / 256.0);
  EXPECT_DOUBLE_EQ(states.back()(2, 1), 3.5 / 256.0);
}

}  // namespace
}  // namespace mrs
