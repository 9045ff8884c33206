"""Exact Laplacians and spanning-tree counts for the best-response graphs.

All arithmetic is on Python ints.  Matrices are tuples of row tuples.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from .graph import (
    CondensedGraph,
    FullGraph,
    SizeGuardError,
    build_full_graph,
    condense_psne,
    node_count,
)

IntMatrix = tuple[tuple[int, ...], ...]

# Bareiss is cubic in pure Python; (4, 4) has 256 nodes and takes well under a second.
MAX_KIRCHHOFF_NODES = 512


class UnsupportedCaseError(ValueError):
    pass


def as_int_matrix(rows: Sequence[Sequence[int]]) -> IntMatrix:
    mat = tuple(tuple(int(x) for x in row) for row in rows)
    if any(len(row) != len(mat) for row in mat):
        raise ValueError("matrix must be square")
    return mat


def laplacian(graph: Union[FullGraph, CondensedGraph]) -> IntMatrix:
    """Out-degree Laplacian; parallel edges add up."""
    if isinstance(graph, FullGraph):
        out = [graph.successors(v) for v in range(graph.node_count)]
    else:
        out = [list(row) for row in graph.out_edges]
    size = len(out)
    rows = []
    for v, targets in enumerate(out):
        row = [0] * size
        row[v] = len(targets)
        for w in targets:
            if w == v:
                raise ValueError(f"self-loop at node {v}")
            row[w] -= 1
        rows.append(tuple(row))
    return tuple(rows)


def block_laplacian_full(n: int, m: int) -> IntMatrix:
    """Laplacian of the full graph assembled block by block.

    Player ``k`` feeds player ``k+1`` through a block-diagonal of ``m**k``
    copies of an ``m x m`` grid of ``-I`` blocks; the last player feeds the
    first through the shift block, where environment ``(s_1, ..., s_{n-1})``
    points at ``(s_2, ..., s_{n-1}, t)`` for every ``t``.
    """
    if n < 3:
        raise UnsupportedCaseError("block layout needs n >= 3; use laplacian(build_full_graph(2, m))")
    if node_count(n, m) > MAX_KIRCHHOFF_NODES * 8:
        raise SizeGuardError(f"block Laplacian for (n={n}, m={m}) too large")
    side = m ** (n - 1)
    L = np.zeros((n * side, n * side), dtype=np.int64)
    L[np.diag_indices(n * side)] = m
    for k in range(n - 1):
        grid = np.kron(np.ones((m, m), dtype=np.int64), np.eye(m ** (n - 2 - k), dtype=np.int64))
        block = -np.kron(np.eye(m**k, dtype=np.int64), grid)
        L[k * side:(k + 1) * side, (k + 1) * side:(k + 2) * side] = block
    shift = np.zeros((side, side), dtype=np.int64)
    for i in range(side):
        tail = i % m ** (n - 2)
        shift[i, tail * m:(tail + 1) * m] = -1
    L[(n - 1) * side:, :side] = shift
    return as_int_matrix(L.tolist())


def det_exact(mat: Sequence[Sequence[int]]) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    a = [list(map(int, row)) for row in mat]
    size = len(a)
    if any(len(row) != size for row in a):
        raise ValueError("matrix must be square")
    if size == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(size - 1):
        if a[k][k] == 0:
            for r in range(k + 1, size):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        row_k = a[k]
        for i in range(k + 1, size):
            row_i = a[i]
            lead = row_i[k]
            for j in range(k + 1, size):
                row_i[j] = (pivot * row_i[j] - lead * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * a[-1][-1]


def reduced(mat: IntMatrix, index: int = 0) -> IntMatrix:
    """Drop row and column ``index``."""
    return tuple(row[:index] + row[index + 1:] for r, row in enumerate(mat) if r != index)


def spanning_tree_count(cond: CondensedGraph) -> int:
    """Number of spanning arborescences directed into the sink."""
    return det_exact(reduced(laplacian(cond), cond.sink))


def type_a_frequency_via_kirchhoff(n: int, m: int, max_nodes: int = MAX_KIRCHHOFF_NODES) -> Fraction:
    """Unique-PSNE convergent frequency from a spanning-tree count.

    Each of the ``m**n`` PSNE positions contributes the same number of
    arborescences; divide by all ``m**(n m**(n-1))`` configurations.
    """
    if node_count(n, m) > max_nodes:
        raise SizeGuardError(f"Kirchhoff count for (n={n}, m={m}) needs {node_count(n, m)} nodes > {max_nodes}")
    trees = spanning_tree_count(condense_psne(build_full_graph(n, m), (0,) * n))
    return Fraction(m**n * trees, m ** node_count(n, m))
