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

#include "mrsplit/autodiff.hpp"

#include <string>

#include "mrsplit/error.hpp"

namespace mrs::ad {
namespace {

void require(bool ok, const char* what) {
  if (!ok) throw DimensionError(what);
}

double activation_slope(const Activation& act, double pre, double post) {
  switch (act.kind) {
    case ActivationKind::identity:
      return 1.0;
    case ActivationKind::relu:
      return pre > 0.0 ? 1.0 : 0.0;
    case ActivationKind::leaky_relu:
      return pre > 0.0 ? 1.0 : act.slope;
    case ActivationKind::sigmoid:
      return post * (1.0 - post);
  }
  return 1.0;
}

}  // namespace

const Tape::Node& Tape::node(Var v) const {
  if (v.id >= used_) throw Error("variable is not on this tape");
  return nodes_[v.id];
}

Tape::Node& Tape::open(Eigen::Index rows, Eigen::Index cols) {
  if (used_ == nodes_.size()) nodes_.emplace_back();
  Node& n = nodes_[used_++];
  n.value.resize(rows, cols);
  n.grad.resize(rows, cols);
  n.pull = nullptr;
  return n;
}

Var Tape::leaf(const Matrix& value) {
  Node& n = open(value.rows(), value.cols());
  n.value = value;
  return last();
}

Var Tape::matmul(Var a, Var b) {
  require(value(a).cols() == value(b).rows(), "matmul: inner dimensions differ");
  Node& n = open(value(a).rows(), value(b).cols());
  n.value.noalias() = value(a) * value(b);
  n.pull = [a, b](Tape& t, const Node& n) {
    t.grad_ref(a).noalias() += n.grad * t.value(b).transpose();
    t.grad_ref(b).noalias() += t.value(a).transpose() * n.grad;
  };
  return last();
}

Var Tape::spmm(const SparseMatrix& a, Var x) {
  require(a.cols() == value(x).rows(), "spmm: operator does not match rows");
  Node& n = open(a.rows(), value(x).cols());
  n.value.noalias() = a * value(x);
  const SparseMatrix* op = &a;
  n.pull = [op, x](Tape& t, const Node& n) { t.grad_ref(x).noalias() += op->transpose() * n.grad; };
  return last();
}

Var Tape::add(Var a, Var b) {
  require(value(a).rows() == value(b).rows() && value(a).cols() == value(b).cols(),
          "add: shapes differ");
  Node& n = open(value(a).rows(), value(a).cols());
  n.value = value(a) + value(b);
  n.pull = [a, b](Tape& t, const Node& n) {
    t.grad_ref(a) += n.grad;
    t.grad_ref(b) += n.grad;
  };
  return last();
}

Var Tape::add_row(Var a, Var row) {
  require(value(row).rows() == 1 && value(row).cols() == value(a).cols(),
          "add_row: row must be 1 x cols");
  Node& n = open(value(a).rows(), value(a).cols());
  n.value = value(a);
  n.value.rowwise() += value(row).row(0);
  n.pull = [a, row](Tape& t, const Node& n) {
    t.grad_ref(a) += n.grad;
    t.grad_ref(row) += n.grad.colwise().sum();
  };
  return last();
}

Var Tape::scale(Var a, double s) {
  Node& n = open(value(a).rows(), value(a).cols());
  n.value = s * value(a);
  n.pull = [a, s](Tape& t, const Node& n) { t.grad_ref(a) += s * n.grad; };
  return last();
}

Var Tape::activation(Var a, Activation act) {
  const Matrix& pre = value(a);
  Node& n = open(pre.rows(), pre.cols());
  if (act.kind == ActivationKind::identity) {
    n.value = pre;
  } else {
    const auto count = pre.size();
    for (Eigen::Index i = 0; i < count; ++i) n.value.data()[i] = act(pre.data()[i]);
  }
  n.pull = [a, act](Tape& t, const Node& n) {
    Matrix& g = t.grad_ref(a);
    if (act.kind == ActivationKind::identity) {
      g += n.grad;
      return;
    }
    const double* pre = t.value(a).data();
    const auto count = g.size();
    for (Eigen::Index i = 0; i < count; ++i)
      g.data()[i] += n.grad.data()[i] * activation_slope(act, pre[i], n.value.data()[i]);
  };
  return last();
}

Var Tape::mean_pool(Var a, std::span<const std::size_t> segment, std::size_t segments) {
  const Matrix& x = value(a);
  require(static_cast<Eigen::Index>(segment.size()) == x.rows(), "mean_pool: one segment per row");
  std::vector<double> count(segments, 0.0);
  for (auto s : segment) {
    require(s < segments, "mean_pool: segment id out of range");
    count[s] += 1.0;
  }
  Node& n = open(static_cast<Eigen::Index>(segments), x.cols());
  n.value.setZero();
  for (std::size_t i = 0; i < segment.size(); ++i)
    n.value.row(static_cast<Eigen::Index>(segment[i])) += x.row(static_cast<Eigen::Index>(i));
  for (std::size_t s = 0; s < segments; ++s)
    if (count[s] > 0.0) n.value.row(static_cast<Eigen::Index>(s)) /= count[s];
  std::vector<std::size_t> seg(segment.begin(), segment.end());
  n.pull = [a, seg = std::move(seg), count = std::move(count)](Tape& t, const Node& n) {
    Matrix& g = t.grad_ref(a);
    for (std::size_t i = 0; i < seg.size(); ++i)
      g.row(static_cast<Eigen::Index>(i)) += n.grad.row(static_cast<Eigen::Index>(seg[i])) / count[seg[i]];
  };
  return last();
}

Var Tape::concat_cols(std::span<const Var> parts) {
  require(!parts.empty(), "concat_cols: nothing to concatenate");
  const auto rows = value(parts.front()).rows();
  Eigen::Index cols = 0;
  for (auto p : parts) {
    require(value(p).rows() == rows, "concat_cols: row counts differ");
    cols += value(p).cols();
  }
  Node& n = open(rows, cols);
  Eigen::Index at = 0;
  for (auto p : parts) {
    n.value.middleCols(at, value(p).cols()) = value(p);
    at += value(p).cols();
  }
  std::vector<Var> ps(parts.begin(), parts.end());
  n.pull = [ps = std::move(ps)](Tape& t, const Node& n) {
    Eigen::Index at = 0;
    for (auto p : ps) {
      const auto c = t.value(p).cols();
      t.grad_ref(p) += n.grad.middleCols(at, c);
      at += c;
    }
  };
  return last();
}

Var Tape::max(std::span<const Var> parts) {
  require(!parts.empty(), "max: no arguments");
  const Matrix& first = value(parts.front());
  for (auto p : parts)
    require(value(p).rows() == first.rows() && value(p).cols() == first.cols(), "max: shapes differ");
  Node& n = open(first.rows(), first.cols());
  n.value = first;
  Eigen::MatrixXi winner = Eigen::MatrixXi::Zero(first.rows(), first.cols());
  for (std::size_t k = 1; k < parts.size(); ++k) {
    const Matrix& v = value(parts[k]);
    for (Eigen::Index i = 0; i < v.size(); ++i)
      if (v.data()[i] > n.value.data()[i]) {
        n.value.data()[i] = v.data()[i];
        winner.data()[i] = static_cast<int>(k);
      }
  }
  std::vector<Var> ps(parts.begin(), parts.end());
  n.pull = [ps = std::move(ps), winner = std::move(winner)](Tape& t, const Node& n) {
    for (Eigen::Index i = 0; i < winner.size(); ++i)
      t.grad_ref(ps[static_cast<std::size_t>(winner.data()[i])]).data()[i] += n.grad.data()[i];
  };
  return last();
}

Var Tape::mae(Var pred, const Matrix& target) {
  const Matrix& p = value(pred);
  require(p.rows() == target.rows() && p.cols() == target.cols(), "mae: target shape differs");
  require(p.size() > 0, "mae: empty prediction");
  const double loss = (p - target).cwiseAbs().mean();
  Node& n = open(1, 1);
  n.value(0, 0) = loss;
  n.pull = [pred, target](Tape& t, const Node& n) {
    const Matrix r = t.value(pred) - target;
    const double w = n.grad(0, 0) / static_cast<double>(r.size());
    t.grad_ref(pred) += r.unaryExpr([w](double v) { return v > 0.0 ? w : (v < 0.0 ? -w : 0.0); });
  };
  return last();
}

Var Tape::half_sse(Var pred, const Matrix& target) {
  const Matrix& p = value(pred);
  require(p.rows() == target.rows() && p.cols() == target.cols(), "half_sse: target shape differs");
  const double loss = 0.5 * (p - target).squaredNorm();
  Node& n = open(1, 1);
  n.value(0, 0) = loss;
  n.pull = [pred, target](Tape& t, const Node& n) {
    t.grad_ref(pred) += n.grad(0, 0) * (t.value(pred) - target);
  };
  return last();
}

void Tape::backward(Var root, const Matrix& seed) {
  require(root.id < used_, "backward: root is not on this tape");
  require(seed.rows() == value(root).rows() && seed.cols() == value(root).cols(),
          "backward: seed shape differs from root");
  for (std::size_t i = 0; i < used_; ++i) nodes_[i].grad.setZero();
  nodes_[root.id].grad = seed;
  for (std::size_t i = root.id + 1; i-- > 0;) {
    const Node& n = nodes_[i];
    if (n.pull) n.pull(*this, n);
  }
}

void Tape::backward(Var root) {
  backward(root, Matrix::Ones(value(root).rows(), value(root).cols()));
}

}  // namespace mrs::ad
