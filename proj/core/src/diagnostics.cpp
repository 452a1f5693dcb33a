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

#include "mrsplit/diagnostics.hpp"

#include <cmath>
#include <string>

#include "mrsplit/error.hpp"

namespace mrs {

Matrix in_degree_matrix(std::span<const RelationOperator> ops) {
  if (ops.empty()) return Matrix(0, 0);
  const auto n = ops.front().matrix.rows();
  Matrix e(n, static_cast<Eigen::Index>(ops.size()));
  for (std::size_t k = 0; k < ops.size(); ++k) {
    const auto& a = ops[k].matrix;
    if (a.rows() != n || a.cols() != n) throw DimensionError("in_degree_matrix: operators must share n");
    for (Eigen::Index i = 0; i < n; ++i) {
      double s = 0.0;
      for (SparseMatrix::InnerIterator it(a, i); it; ++it) s += it.value();
      e(i, static_cast<Eigen::Index>(k)) = s;
    }
  }
  return e;
}

bool structurally_independent(const Eigen::VectorXd& di, const Eigen::VectorXd& dj, double rel_tol) {
  if (di.size() != dj.size() || di.size() == 0)
    throw DimensionError("structurally_independent: vectors must share a positive length");
  Matrix pair(2, di.size());
  pair.row(0) = di.transpose();
  pair.row(1) = dj.transpose();
  return numeric_rank(pair, rel_tol) == 2;
}

Eigen::VectorXd singular_values(const Matrix& m) {
  if (m.size() == 0) return Eigen::VectorXd();
  return Eigen::BDCSVD<Matrix>(m).singularValues();
}

std::size_t numeric_rank(const Matrix& m, double rel_tol) {
  const auto s = singular_values(m);
  if (s.size() == 0 || !(s(0) > 0.0)) return 0;
  const double cutoff = rel_tol * s(0);
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cutoff) ++rank;
  return rank;
}

double nuclear_norm(const Matrix& m) { return singular_values(m).sum(); }

double rod(const Matrix& x) {
  if (x.size() == 0 || x.cwiseAbs().maxCoeff() == 0.0)
    throw Error("rod is undefined for a zero matrix");
  Eigen::Index col = 0;
  Eigen::Index row = 0;
  // Strict comparisons keep the lowest index among equal norms.
  const Eigen::RowVectorXd col_norms = x.colwise().squaredNorm();
  for (Eigen::Index c = 1; c < col_norms.size(); ++c)
    if (col_norms(c) > col_norms(col)) col = c;
  const Eigen::VectorXd row_norms = x.rowwise().squaredNorm();
  for (Eigen::Index r = 1; r < row_norms.size(); ++r)
    if (row_norms(r) > row_norms(row)) row = r;

  const Eigen::VectorXd u = x.col(col);
  const Eigen::RowVectorXd v = x.row(row);
  double outer_norm = u.norm() * v.norm();  // nuclear norm of a rank-one matrix
  if (x(row, col) < 0.0) outer_norm = -outer_norm;
  const Matrix diff = x / nuclear_norm(x) - (u * v) / outer_norm;
  return nuclear_norm(diff);
}

double dirichlet_energy(const Matrix& x, const Graph& g) {
  if (static_cast<std::size_t>(x.rows()) != g.num_nodes())
    throw DimensionError("dirichlet_energy: feature rows must match node count");
  double energy = 0.0;
  for (const auto& e : g.edges()) energy += (x.row(e.src) - x.row(e.dst)).squaredNorm();
  return energy;
}

bool rows_nonzero(const Matrix& x, double tol) {
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    if (!(x.row(i).norm() > tol)) return false;
  return true;
}

}  // namespace mrs
