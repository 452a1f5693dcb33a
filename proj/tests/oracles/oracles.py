#!/usr/bin/env python3
# Copyright 2026 The mrsplit Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Independent reference values frozen into the C++ unit tests.

Everything here is written against numpy / networkx / fractions and shares
no code with the library. Run it to regenerate the constants; the test files
quote the printed values verbatim.
"""

from fractions import Fraction

import networkx as nx
import numpy as np

MASK = (1 << 64) - 1


def splitmix64(seed, count):
    out, state = [], seed
    for _ in range(count):
        state = (state + 0x9E3779B97F4A7C15) & MASK
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        out.append(z ^ (z >> 31))
    return out


def ppr(n, arcs, alpha=0.1, iters=15):
    """Power iteration p <- alpha*u + (1-alpha)*(P^T p) with uniform dangling."""
    p_mat = np.zeros((n, n))
    for s, d in arcs:
        p_mat[s, d] = 1.0
    out = p_mat.sum(axis=1)
    for v in range(n):
        p_mat[v] = p_mat[v] / out[v] if out[v] > 0 else np.full(n, 1.0 / n)
    u = np.full(n, 1.0 / n)
    p = u.copy()
    for _ in range(iters):
        p = alpha * u + (1 - alpha) * p_mat.T @ p
    return p


def rod(x):
    x = np.asarray(x, dtype=float)
    col = int(np.argmax(np.linalg.norm(x, axis=0)))
    row = int(np.argmax(np.linalg.norm(x, axis=1)))
    outer = np.outer(x[:, col], x[row, :])
    nuc = lambda m: np.linalg.svd(m, compute_uv=False).sum()
    # Orient the rank-one component along X itself.
    sign = 1.0 if x[row, col] >= 0 else -1.0
    return nuc(x / nuc(x) - sign * outer / nuc(outer))


def exact_rank(rows):
    m = [[Fraction(v) for v in r] for r in rows]
    rank, cols = 0, len(m[0]) if m else 0
    for c in range(cols):
        pivot = next((r for r in range(rank, len(m)) if m[r][c] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][c] != 0:
                f = m[r][c] / m[rank][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def leaky(v, s=0.2):
    return v if v > 0 else s * v


def main():
    print("splitmix64(0)[:3] =", [hex(v) for v in splitmix64(0, 3)])
    print("splitmix64(42)[:2] =", [hex(v) for v in splitmix64(42, 2)])

    print("ppr 0->1 =", [repr(v) for v in ppr(2, [(0, 1)])])
    arcs = [(0, 1), (0, 2), (1, 2), (2, 0), (3, 2)]
    print("ppr 4-node =", [repr(v) for v in ppr(4, arcs)])
    print("ppr 4-node alpha=0.3 iters=5 =", [repr(v) for v in ppr(4, arcs, 0.3, 5)])

    print("rod([[1,2],[3,4],[5,7]]) =", repr(rod([[1, 2], [3, 4], [5, 7]])))
    print("rod([[1,-2,0],[0,1,3]]) =", repr(rod([[1, -2, 0], [0, 1, 3]])))
    print("rod(I2) =", repr(rod(np.eye(2))))
    print("rod(-outer) =", repr(rod(-np.outer([1, 2, 3], [4, 5]))))

    print("rank [[1,2],[2,4],[3,5]] =", exact_rank([[1, 2], [2, 4], [3, 5]]),
          np.linalg.matrix_rank(np.array([[1, 2], [2, 4], [3, 5]])))

    diamond = nx.DiGraph([(0, 1), (0, 2), (1, 3), (2, 3)])
    print("diamond longest path =", nx.dag_longest_path_length(diamond))
    g = nx.DiGraph([(0, 1), (1, 2), (0, 3), (3, 4), (4, 2), (5, 4)])
    print("6-node dag longest path =", nx.dag_longest_path_length(g),
          "topo(lex) =", list(nx.lexicographical_topological_sort(g)))

    # GAT on one head, d = d' = 1: node 0 aggregates from 1 (relation A,
    # W = 2) and 2 (relation B, W = -1); a = [a_dst, a_src] = [0.5, 1.0].
    x = {0: 1.0, 1: 2.0, 2: 3.0}
    wa, wb, a_dst, a_src = 2.0, -1.0, 0.5, 1.0
    z1 = (wa * x[0], wa * x[1])
    z2 = (wb * x[0], wb * x[2])
    e1 = leaky(a_dst * z1[0] + a_src * z1[1])
    e2 = leaky(a_dst * z2[0] + a_src * z2[1])
    w1, w2 = np.exp(e1) / (np.exp(e1) + np.exp(e2)), np.exp(e2) / (np.exp(e1) + np.exp(e2))
    print("gat logits =", e1, e2, "alpha =", repr(w1), repr(w2),
          "out =", repr(w1 * z1[1] + w2 * z2[1]))

    # GatedGCN, node 1 with the single in-neighbour 0, d = d' = 1:
    # A = 0.5, B = 2, D = 1, E = -1, x = [1, 3].
    a, b, d, e, eps = 0.5, 2.0, 1.0, -1.0, 1e-6
    x0, x1 = 1.0, 3.0
    gate = 1.0 / (1.0 + np.exp(-(d * x1 + e * x0)))
    print("gatedgcn node1 =", repr(a * x1 + gate * b * x0 / (gate + eps)))

    # SAGE on the path 0-1-2 under degree ordering, d = 1, W_self = 0,
    # W1 = 2, W2 = 5, x = [1, 4, 7]: node 1 gets (1/2) (W1 x0 + W1 x2),
    # nodes 0 and 2 get W2 x1 (their single in-neighbour ranks higher).
    print("sage path =", [repr(5 * 4.0), repr(0.5 * (2 * 1 + 2 * 7)), repr(5 * 4.0)])
    # GCN with sym normalisation on the same path and transforms.
    s = 1 / np.sqrt(2)
    print("gcn path =", [repr(s * 5 * 4.0), repr(s * (2 * 1 + 2 * 7)), repr(s * 5 * 4.0)])

    # Dirichlet energy, path 0-1-2 (both arcs), X = [[0],[1],[0]].
    print("dirichlet path =", 4 * 1.0)


if __name__ == "__main__":
    main()
