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

#include <algorithm>
#include <string>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

#include "mrsplit/diagnostics.hpp"
#include "mrsplit/error.hpp"

namespace mrs {
namespace {

using BigInt = boost::multiprecision::cpp_int;

std::size_t bareiss_rank(std::vector<std::vector<BigInt>> a) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows == 0 ? 0 : a.front().size();
  BigInt prev_pivot = 1;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows && a[pivot][c] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(a[pivot], a[rank]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      for (std::size_t k = c + 1; k < cols; ++k) {
        // Exact division: Sylvester's identity makes every entry a minor.
        a[r][k] = (a[r][k] * a[rank][c] - a[r][c] * a[rank][k]) / prev_pivot;
      }
      a[r][c] = 0;
    }
    prev_pivot = a[rank][c];
    ++rank;
  }
  return rank;
}

void check_dims(std::size_t rows, std::size_t cols) {
  if (rows > kExactRankMaxDim || cols > kExactRankMaxDim)
    throw DimensionError("exact_rank_small supports at most " + std::to_string(kExactRankMaxDim) +
                         " rows and columns");
}

}  // namespace

std::size_t exact_rank_small(const RationalMatrix& m) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows == 0 ? 0 : m.front().size();
  check_dims(rows, cols);
  // Scaling a row by the product of its denominators leaves the rank alone.
  std::vector<std::vector<BigInt>> ints(rows, std::vector<BigInt>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (m[r].size() != cols) throw DimensionError("exact_rank_small: ragged rows");
    BigInt scale = 1;
    for (const auto& q : m[r]) {
      if (q.den == 0) throw Error("exact_rank_small: zero denominator");
      scale *= BigInt(q.den);
    }
    for (std::size_t c = 0; c < cols; ++c) ints[r][c] = BigInt(m[r][c].num) * (scale / BigInt(m[r][c].den));
  }
  return bareiss_rank(std::move(ints));
}

std::size_t exact_rank_small(const Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>& m) {
  check_dims(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  std::vector<std::vector<BigInt>> ints(static_cast<std::size_t>(m.rows()),
                                        std::vector<BigInt>(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      ints[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = m(r, c);
  return bareiss_rank(std::move(ints));
}

}  // namespace mrs
