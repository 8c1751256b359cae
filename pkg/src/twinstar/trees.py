"""Unlabeled-tree certificates, the 8-vertex tree catalog, and diameter paths.

A tree's certificate is its center-rooted canonical code (children sorted
recursively; for bicentral trees the smaller of the two rooted codes), so two
labeled trees on the same vertex count get equal certificates exactly when
they are isomorphic.

Trees on 8 vertices additionally carry a type label T_1..T_23.  The catalog
is built by growing all isomorphism classes of trees leaf by leaf (there are
exactly 23 classes on 8 vertices).  Ten labels are pinned to explicitly
labeled representatives that the reduction pipeline manipulates; one more
(T_9, the only 8-vertex tree with a degree-5 vertex among the pipeline's
possible outputs) is pinned because the pipeline treats meeting it as a hard
error.  The remaining labels are assigned deterministically by certificate
order and flagged as unanchored; nothing keys on them.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .errors import InputError


def _normalize_edges(edges: Iterable) -> list[tuple[int, int]]:
    out = []
    for (a, b) in edges:
        a, b = int(a), int(b)
        if a == b:
            raise InputError(f"loop edge ({a}, {b})")
        out.append((min(a, b), max(a, b)))
    if len(set(out)) != len(out):
        raise InputError("repeated edge")
    return out


def _adjacency(edges: Sequence[tuple[int, int]], n: int) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(n + 1)]
    for a, b in edges:
        if not (1 <= a <= n and 1 <= b <= n):
            raise InputError(f"edge ({a}, {b}) not on vertices 1..{n}")
        adj[a].append(b)
        adj[b].append(a)
    return adj


def is_tree(edges: Iterable, n: int) -> bool:
    edges = _normalize_edges(edges)
    if len(edges) != n - 1:
        return False
    adj = _adjacency(edges, n)
    seen = {1}
    stack = [1]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def _centers(adj: list[list[int]], n: int) -> list[int]:
    deg = [len(adj[v]) for v in range(n + 1)]
    layer = [v for v in range(1, n + 1) if deg[v] <= 1]
    alive = n
    while alive > 2:
        nxt = []
        for v in layer:
            deg[v] = 0
            for w in adj[v]:
                if deg[w] > 0:
                    deg[w] -= 1
                    if deg[w] == 1:
                        nxt.append(w)
        alive -= len(layer)
        layer = nxt
    return layer


def _rooted_code(root: int, parent: int, adj: list[list[int]]) -> bytes:
    kids = sorted(
        _rooted_code(w, root, adj) for w in adj[root] if w != parent
    )
    return b"(" + b"".join(kids) + b")"


@dataclass(frozen=True)
class TreeCertificate:
    """Canonical identity of an unlabeled tree."""

    canon: bytes
    degree_seq: tuple[int, ...]
    t_label: Optional[int] = None
    t_label_anchored: Optional[bool] = None

    def same_shape(self, other: "TreeCertificate") -> bool:
        return self.canon == other.canon


def _canon(edges: Sequence[tuple[int, int]], n: int) -> bytes:
    adj = _adjacency(edges, n)
    return min(_rooted_code(c, 0, adj) for c in _centers(adj, n))


def tree_certificate(edges: Iterable, n: int) -> TreeCertificate:
    """Certificate of a tree given by its edge set on vertices 1..n."""
    edges = _normalize_edges(edges)
    if not is_tree(edges, n):
        raise InputError(f"edge set is not a tree on {n} vertices")
    adj = _adjacency(edges, n)
    canon = min(_rooted_code(c, 0, adj) for c in _centers(adj, n))
    degree_seq = tuple(sorted((len(adj[v]) for v in range(1, n + 1)), reverse=True))
    cert = TreeCertificate(canon, degree_seq)
    if n == 8:
        label = _catalog8().label_of[canon]
        cert = TreeCertificate(
            canon, degree_seq, label, label in ANCHORED_TREES
        )
    return cert


def path_edges(n: int) -> list[tuple[int, int]]:
    return [(i, i + 1) for i in range(1, n)]


def twin_star_edges(d: int) -> list[tuple[int, int]]:
    """Two adjacent centers 1, 2; odd vertices hang off 1, even off 2."""
    edges = [(1, 2)]
    edges += [(1, v) for v in range(3, 2 * d + 1, 2)]
    edges += [(2, v) for v in range(4, 2 * d + 1, 2)]
    return edges


@lru_cache(maxsize=None)
def path_certificate(n: int) -> TreeCertificate:
    return tree_certificate(path_edges(n), n)


@lru_cache(maxsize=None)
def twin_star_certificate(d: int) -> TreeCertificate:
    return tree_certificate(twin_star_edges(d), 2 * d)


# Labeled representatives the 8-vertex reduction steps are written against.
ANCHORED_TREES: dict[int, tuple[tuple[int, int], ...]] = {
    1: tuple(path_edges(8)),
    2: ((1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (6, 8)),
    3: ((1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (5, 8)),
    6: ((1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (5, 7), (5, 8)),
    9: ((1, 2), (2, 3), (3, 5), (4, 5), (5, 6), (5, 7), (5, 8)),
    14: ((1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7), (4, 8)),
    16: ((1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (3, 7), (4, 8)),
    17: ((1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7), (3, 8)),
    19: ((1, 2), (2, 4), (2, 7), (3, 4), (4, 5), (4, 8), (5, 6)),
    20: ((1, 2), (2, 3), (3, 4), (4, 5), (3, 6), (4, 7), (4, 8)),
    23: ((1, 2), (2, 3), (3, 4), (4, 5), (2, 6), (3, 7), (4, 8)),
}


def all_tree_classes(n: int) -> list[tuple[tuple[int, int], ...]]:
    """One labeled representative per isomorphism class of trees on 1..n,
    grown leaf by leaf from the single-vertex tree."""
    reps: list[tuple[tuple[int, int], ...]] = [()]
    for k in range(1, n):
        seen = {}
        for rep in reps:
            for v in range(1, k + 1):
                grown = rep + ((v, k + 1),)
                canon = _canon(grown, k + 1)
                if canon not in seen:
                    seen[canon] = grown
        reps = [seen[c] for c in sorted(seen)]
    return reps


class _Catalog8:
    def __init__(self):
        reps = all_tree_classes(8)
        canon_of = {_canon(_normalize_edges(rep), 8): rep for rep in reps}
        if len(canon_of) != 23:
            raise InputError(
                f"tree catalog on 8 vertices has {len(canon_of)} classes, expected 23"
            )
        label_of: dict[bytes, int] = {}
        for label, edges in ANCHORED_TREES.items():
            canon = _canon(_normalize_edges(edges), 8)
            if canon in label_of:
                raise InputError("two anchored trees are isomorphic")
            label_of[canon] = label
        free_labels = sorted(set(range(1, 24)) - set(ANCHORED_TREES))
        free_canons = sorted(set(canon_of) - set(label_of))
        for label, canon in zip(free_labels, free_canons):
            label_of[canon] = label
        self.label_of = label_of
        self.rep_of = {label_of[c]: canon_of[c] for c in canon_of}


@lru_cache(maxsize=None)
def _catalog8() -> _Catalog8:
    return _Catalog8()


def catalog8_representatives() -> dict[int, tuple[tuple[int, int], ...]]:
    """Label -> a labeled representative (anchored labels use the standard
    labeling the reduction steps assume)."""
    cat = _catalog8()
    out = dict(cat.rep_of)
    out.update(ANCHORED_TREES)
    return out


def standard_tree(label: int) -> tuple[tuple[int, int], ...]:
    if label not in ANCHORED_TREES:
        raise InputError(f"T_{label} has no anchored standard labeling")
    return ANCHORED_TREES[label]


def all_longest_paths(edges: Iterable, n: int) -> list[tuple[int, ...]]:
    """Every maximum-length path, both orientations included."""
    edges = _normalize_edges(edges)
    if not is_tree(edges, n):
        raise InputError(f"edge set is not a tree on {n} vertices")
    adj = _adjacency(edges, n)
    if n == 1:
        return [(1,)]
    paths = []
    best = -1
    for start in range(1, n + 1):
        parent = {start: 0}
        order = [start]
        i = 0
        while i < len(order):
            v = order[i]
            i += 1
            for w in adj[v]:
                if w not in parent:
                    parent[w] = v
                    order.append(w)
        for end in range(1, n + 1):
            if end == start:
                continue
            seq = [end]
            while seq[-1] != start:
                seq.append(parent[seq[-1]])
            seq.reverse()
            if len(seq) - 1 > best:
                best = len(seq) - 1
                paths = [tuple(seq)]
            elif len(seq) - 1 == best:
                paths.append(tuple(seq))
    return paths


def diameter_path(edges: Iterable, n: int) -> tuple[int, ...]:
    """One longest path; among all of them the lexicographically smallest
    vertex sequence, each path compared against its own reversal first."""
    candidates = {
        min(p, tuple(reversed(p))) for p in all_longest_paths(edges, n)
    }
    return min(candidates)
