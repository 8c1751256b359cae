"""Independent brute-force oracles used to pin expected values.

Everything in here is deliberately naive and shares no code path with the
library implementations it checks: forests via edge-by-edge DFS, involutions
via the full d^3 assignment scan, enumeration via filtering all d^m total
assignments, canonical forms via a full group scan, tree types via Prufer
sequences.
"""

from __future__ import annotations

from itertools import permutations, product

from twinstar.edges import edge_pairs, num_edges
from twinstar.partition import Partition


def forest_dfs(edges, n: int) -> bool:
    """Cycle detection by DFS, no union-find."""
    adj = {v: [] for v in range(1, n + 1)}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    seen = set()
    for root in range(1, n + 1):
        if root in seen:
            continue
        stack = [(root, 0)]
        seen.add(root)
        while stack:
            v, parent = stack.pop()
            skipped_parent = False
            for w in adj[v]:
                if w == parent and not skipped_parent:
                    skipped_parent = True
                    continue
                if w in seen:
                    return False
                seen.add(w)
                stack.append((w, v))
    return True


def cycle_free_naive(p: Partition) -> bool:
    return all(
        forest_dfs(p.class_edges(k), 2 * p.d) for k in range(1, p.d + 1)
    )


def all_total_assignments(d: int):
    """Every function from edges to colors, as Partition objects."""
    m = num_edges(d)
    for colors in product(range(1, d + 1), repeat=m):
        yield Partition(d, colors)


def enumerate_naive(d: int) -> list[Partition]:
    """All cycle-free d-partitions by filtering the full d^m space."""
    return [p for p in all_total_assignments(d) if cycle_free_naive(p)]


def involution_naive(p: Partition, triple) -> Partition:
    """Full d^3 scan over the triple's edge colors, filtered by the
    at-least-two-differences rule and by cycle-freeness of the whole result."""
    x, y, z = triple
    pairs = edge_pairs(p.d)
    eindex = {pair: k for k, pair in enumerate(pairs)}
    ids = [eindex[(x, y)], eindex[(x, z)], eindex[(y, z)]]
    current = tuple(p.colors[e] for e in ids)
    survivors = []
    for cand in product(range(1, p.d + 1), repeat=3):
        ndiff = sum(1 for a, b in zip(cand, current) if a != b)
        if ndiff < 2:
            continue
        colors = list(p.colors)
        for e, c in zip(ids, cand):
            colors[e] = c
        q = Partition(p.d, tuple(colors))
        if cycle_free_naive(q):
            survivors.append(q)
    assert len(survivors) == 1, f"expected unique survivor, got {len(survivors)}"
    return survivors[0]


def act_naive(p: Partition, sigma, tau) -> Partition:
    """Rebuild the partition edge set by edge set."""
    n = 2 * p.d
    new_classes = {k: set() for k in range(1, p.d + 1)}
    for k in range(1, p.d + 1):
        for (i, j) in p.class_edges(k):
            u, v = sigma[i - 1], sigma[j - 1]
            new_classes[tau[k - 1]].add((min(u, v), max(u, v)))
    pairs = edge_pairs(p.d)
    colors = []
    for pair in pairs:
        owner = [k for k in range(1, p.d + 1) if pair in new_classes[k]]
        assert len(owner) == 1
        colors.append(owner[0])
    return Partition(p.d, tuple(colors))


def canonical_scan_naive(p: Partition) -> tuple:
    """Minimum color sequence over the whole (2d)! x d! group, edge order
    fixed to lexicographic (i, j)."""
    n, d = 2 * p.d, p.d
    pairs = edge_pairs(d)
    best = None
    for sigma in permutations(range(1, n + 1)):
        for tau in permutations(range(1, d + 1)):
            q = act_naive(p, sigma, tau)
            enc = q.colors
            if best is None or enc < best:
                best = enc
    return best


def prufer_to_tree(seq, n: int) -> list[tuple[int, int]]:
    """Decode a Prufer sequence over labels 1..n into a labeled tree."""
    degree = [1] * (n + 1)
    for v in seq:
        degree[v] += 1
    edges = []
    leaves = sorted(v for v in range(1, n + 1) if degree[v] == 1)
    import heapq

    heapq.heapify(leaves)
    for v in seq:
        leaf = heapq.heappop(leaves)
        edges.append((min(leaf, v), max(leaf, v)))
        degree[v] -= 1
        if degree[v] == 1:
            heapq.heappush(leaves, v)
    u = heapq.heappop(leaves)
    v = heapq.heappop(leaves)
    edges.append((min(u, v), max(u, v)))
    return edges


def all_labeled_trees(n: int):
    """All n^(n-2) labeled trees on 1..n via Prufer decoding."""
    if n == 1:
        yield []
        return
    if n == 2:
        yield [(1, 2)]
        return
    for seq in product(range(1, n + 1), repeat=n - 2):
        yield prufer_to_tree(seq, n)
