"""Seeded random cycle-free partitions for tests.

Self-contained randomized backtracking (library-independent): edges are
colored in lexicographic order, candidate colors are tried in a shuffled
order, and a partial coloring is abandoned when a class stops being a forest,
exceeds 2d-1 edges, or when some vertex has fewer uncolored edges left than
classes still missing it (every class of a full cycle-free partition is a
spanning tree, so each class needs an edge at every vertex).
"""

from __future__ import annotations

from twinstar.edges import edge_pairs
from twinstar.partition import Partition

from .oracles import forest_dfs


def random_cycle_free(d: int, rng) -> Partition:
    pairs = edge_pairs(d)
    n = 2 * d
    classes = {k: [] for k in range(1, d + 1)}
    deg = [[0] * (n + 1) for _ in range(d + 1)]   # deg[c][v]
    missing = [d] * (n + 1)                       # classes with no edge at v
    rem = [0] * (n + 1)                           # uncolored edges at v
    for i, j in pairs:
        rem[i] += 1
        rem[j] += 1

    def extend(e: int):
        if e == len(pairs):
            return True
        i, j = pairs[e]
        rem[i] -= 1
        rem[j] -= 1
        order = list(range(1, d + 1))
        rng.shuffle(order)
        for c in order:
            if len(classes[c]) == 2 * d - 1:
                continue
            classes[c].append(pairs[e])
            for v in (i, j):
                deg[c][v] += 1
                if deg[c][v] == 1:
                    missing[v] -= 1
            if (
                rem[i] >= missing[i]
                and rem[j] >= missing[j]
                and forest_dfs(classes[c], n)
                and extend(e + 1)
            ):
                return True
            classes[c].pop()
            for v in (i, j):
                deg[c][v] -= 1
                if deg[c][v] == 0:
                    missing[v] += 1
        rem[i] += 1
        rem[j] += 1
        return False

    assert extend(0)
    colors = [0] * len(pairs)
    eindex = {pair: k for k, pair in enumerate(pairs)}
    for c, edges in classes.items():
        for pair in edges:
            colors[eindex[pair]] = c
    return Partition(d, tuple(colors))
