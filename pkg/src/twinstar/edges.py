"""Edge indexing for the complete graph on 2d vertices.

Edges are unordered pairs (i, j) with 1 <= i < j <= 2d.  Throughout the
package an edge is identified by its rank in lexicographic order of (i, j):
(1,2) -> 0, (1,3) -> 1, ..., (1,2d) -> 2d-2, (2,3) -> 2d-1, ...  This rank is
the position of the edge's color in a partition's ``colors`` array and in the
on-disk formats.
"""

from __future__ import annotations

from functools import lru_cache

from .errors import InputError


def num_edges(d: int) -> int:
    return d * (2 * d - 1)


@lru_cache(maxsize=None)
def edge_pairs(d: int) -> tuple[tuple[int, int], ...]:
    """All edges of K_{2d} as (i, j) pairs in lexicographic order."""
    n = 2 * d
    return tuple((i, j) for i in range(1, n) for j in range(i + 1, n + 1))


@lru_cache(maxsize=None)
def _edge_index_map(d: int) -> dict[tuple[int, int], int]:
    return {pair: k for k, pair in enumerate(edge_pairs(d))}


def edge_encode(i: int, j: int, d: int) -> int:
    """Lexicographic rank of the pair (i, j) among the edges of K_{2d}."""
    if d < 1:
        raise InputError(f"d must be >= 1, got {d}")
    if not (1 <= i < j <= 2 * d):
        raise InputError(f"need 1 <= i < j <= {2*d}, got ({i}, {j})")
    return _edge_index_map(d)[(i, j)]


def edge_decode(index: int, d: int) -> tuple[int, int]:
    """Inverse of :func:`edge_encode`."""
    pairs = edge_pairs(d)
    if not (0 <= index < len(pairs)):
        raise InputError(f"edge index {index} out of range for d={d}")
    return pairs[index]
