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
#include <deque>
#include <functional>
#include <span>
#include <vector>

#include "mrsplit/convolution.hpp"
#include "mrsplit/split.hpp"

namespace mrs::ad {

/// Handle to a value recorded on a Tape.
struct Var {
  std::size_t id = 0;
};

/// Reverse-mode tape over dense matrices. Operations append nodes in
/// evaluation order; backward() walks them in reverse. Sparse operators
/// passed to spmm() are held by pointer and must outlive the recording.
/// reset() forgets the recording but keeps node storage, so re-recording
/// the same computation allocates nothing large.
class Tape {
 public:
  /// Input or parameter. Every recorded value receives a gradient.
  Var leaf(const Matrix& value);

  const Matrix& value(Var v) const { return node(v).value; }
  /// Gradient of the last backward() root with respect to `v`.
  const Matrix& grad(Var v) const { return node(v).grad; }
  std::size_t size() const noexcept { return used_; }
  void reset() noexcept { used_ = 0; }

  Var matmul(Var a, Var b);
  /// a * x with a constant sparse a.
  Var spmm(const SparseMatrix& a, Var x);
  Var add(Var a, Var b);
  /// Adds a 1 x d row to every row of `a`.
  Var add_row(Var a, Var row);
  Var scale(Var a, double s);
  Var activation(Var a, Activation act);
  /// Row r of the result is the mean of the rows i with segment[i] == r.
  /// Empty segments pool to zero.
  Var mean_pool(Var a, std::span<const std::size_t> segment, std::size_t segments);
  Var concat_cols(std::span<const Var> parts);
  /// Elementwise maximum; the lowest-index argument wins ties.
  Var max(std::span<const Var> parts);
  /// Mean absolute error over all entries, as a 1 x 1 value. The
  /// subgradient at a zero residual is 0.
  Var mae(Var pred, const Matrix& target);
  /// Half the summed squared error, as a 1 x 1 value.
  Var half_sse(Var pred, const Matrix& target);

  /// Seeds d root = `seed` (same shape as the root) and accumulates every
  /// gradient. Earlier gradients are cleared first.
  void backward(Var root, const Matrix& seed);
  /// backward() with a ones seed.
  void backward(Var root);

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    std::function<void(Tape&, const Node&)> pull;  // pushes grad to parents
  };

  /// Next node, sized rows x cols. Gradients are zeroed by backward().
  Node& open(Eigen::Index rows, Eigen::Index cols);
  Var last() const noexcept { return Var{used_ - 1}; }
  const Node& node(Var v) const;
  Matrix& grad_ref(Var v) { return nodes_[v.id].grad; }

  std::deque<Node> nodes_;  // stable references while recording
  std::size_t used_ = 0;
};

}  // namespace mrs::ad
