"""Canonical forms for partitions under vertex and color relabeling.

Two partitions p, q satisfy ``canonical_key(p) == canonical_key(q)`` exactly
when q can be obtained from p by some vertex permutation plus color
permutation.  The key is the minimum, over all vertex permutations, of the
relabeled color sequence read along the edge order (1,2),(1,3),(2,3),(1,4),...
(edges sorted by larger endpoint first, so edges among the first k relabeled
vertices form a prefix), with colors renamed by first appearance.  Renaming by
first appearance is itself the minimum over color permutations, so the d!
factor never has to be enumerated.

Two engines compute the same key:

* a vectorized full scan over all (2d)! vertex permutations (d <= 3, where
  the scan is 720 rows at most);
* depth-first branch and bound assigning one relabeled vertex at a time and
  pruning any branch whose encoding prefix already exceeds the best known
  (any d, required for d >= 4).

Both also return a witnessing (sigma, tau) with act(p, sigma, tau) equal to
the canonical representative.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations

import numpy as np

from .partition import Partition, act, context


@lru_cache(maxsize=None)
def _canon_edge_order(d: int) -> tuple[tuple[int, int], ...]:
    n = 2 * d
    return tuple((i, j) for j in range(2, n + 1) for i in range(1, j))


@dataclass(frozen=True)
class CanonicalForm:
    key: bytes
    sigma: tuple[int, ...]
    tau: tuple[int, ...]


def _greedy_tau(d: int, seq) -> tuple[int, ...]:
    """Color permutation renaming colors by first appearance in seq."""
    rename = {}
    for c in seq:
        if c not in rename:
            rename[c] = len(rename) + 1
    for c in range(1, d + 1):
        if c not in rename:
            rename[c] = len(rename) + 1
    return tuple(rename[c] for c in range(1, d + 1))


# --- full scan (d <= 3) ------------------------------------------------------


@lru_cache(maxsize=None)
def _scan_tables(d: int):
    ctx = context(d)
    n = ctx.n
    perms = list(permutations(range(1, n + 1)))
    order = _canon_edge_order(d)
    idx = np.empty((len(perms), ctx.m), dtype=np.int16)
    for r, sigma in enumerate(perms):
        inv = [0] * (n + 1)
        for v, img in enumerate(sigma, start=1):
            inv[img] = v
        for k, (i, j) in enumerate(order):
            a, b = inv[i], inv[j]
            if a > b:
                a, b = b, a
            idx[r, k] = ctx.eindex[(a, b)]
    return perms, idx


def _canonical_scan(p: Partition) -> CanonicalForm:
    d = p.d
    perms, idx = _scan_tables(d)
    colors = np.asarray(p.colors, dtype=np.int16)
    m = colors[idx]  # (n!, m) raw colors in canonical edge order
    # first occurrence of each color per row; absent colors sort last, by id
    fo = np.empty((m.shape[0], d), dtype=np.int32)
    for c in range(1, d + 1):
        hit = m == c
        fo[:, c - 1] = np.where(hit.any(axis=1), hit.argmax(axis=1), m.shape[1] + c)
    ranks = np.argsort(np.argsort(fo, axis=1), axis=1)  # color c -> rank
    relabeled = np.take_along_axis(ranks, m - 1, axis=1) + 1
    r = int(np.lexsort(relabeled.T[::-1])[0])
    key = bytes(relabeled[r].astype(np.uint8))
    tau = tuple(int(x) + 1 for x in ranks[r])
    return CanonicalForm(key, tuple(perms[r]), tau)


# --- branch and bound (any d) ------------------------------------------------


def _canonical_bnb(p: Partition) -> CanonicalForm:
    ctx = context(p.d)
    n, d = ctx.n, ctx.d
    colors = p.colors
    eindex = ctx.eindex

    # vertex invariant: per-class degree profile; richer profiles first so a
    # competitive bound appears early (ordering only, never exclusion)
    prof = {}
    for v in range(1, n + 1):
        degs = [0] * (d + 1)
        for w in range(1, n + 1):
            if w != v:
                a, b = (v, w) if v < w else (w, v)
                degs[colors[eindex[(a, b)]]] += 1
        prof[v] = tuple(sorted(degs[1:], reverse=True))
    vertex_order = sorted(range(1, n + 1), key=lambda v: (prof[v], -v), reverse=True)

    best: list[int] | None = None
    best_sigma: tuple[int, ...] | None = None
    best_tau: tuple[int, ...] | None = None

    assign: list[int] = []
    used = [False] * (n + 1)
    cmap = [0] * (d + 1)
    enc: list[int] = []

    def leaf_tau() -> tuple[int, ...]:
        seen = max(cmap)
        out = [0] * d
        nxt = seen
        for c in range(1, d + 1):
            if cmap[c]:
                out[c - 1] = cmap[c]
            else:
                nxt += 1
                out[c - 1] = nxt
        return tuple(out)

    def dfs(k: int, tight: bool) -> bool:
        """Extend the assignment to new label k; returns True when best was
        replaced somewhere below (the caller's prefix then matches best)."""
        nonlocal best, best_sigma, best_tau
        if k > n:
            if best is None or enc < best:
                best = list(enc)
                sigma = [0] * n
                for newlab, old in enumerate(assign, start=1):
                    sigma[old - 1] = newlab
                best_sigma = tuple(sigma)
                best_tau = leaf_tau()
                return True
            return False
        updated_any = False
        for v in vertex_order:
            if used[v]:
                continue
            pos = len(enc)
            newly: list[int] = []
            ok = True
            sl = not tight
            for i in range(k - 1):
                u = assign[i]
                a, b = (u, v) if u < v else (v, u)
                c = colors[eindex[(a, b)]]
                if cmap[c] == 0:
                    cmap[c] = max(cmap) + 1
                    newly.append(c)
                x = cmap[c]
                if not sl and best is not None:
                    b0 = best[pos + i]
                    if x > b0:
                        ok = False
                        break
                    if x < b0:
                        sl = True
                enc.append(x)
            if ok:
                assign.append(v)
                used[v] = True
                if dfs(k + 1, not sl):
                    updated_any = True
                    tight = True  # our prefix is a prefix of the new best
                assign.pop()
                used[v] = False
            del enc[pos:]
            for c in newly:
                cmap[c] = 0
        return updated_any

    dfs(1, True)
    assert best is not None and best_sigma is not None and best_tau is not None
    return CanonicalForm(bytes(best), best_sigma, best_tau)


def canonical_form(p: Partition) -> CanonicalForm:
    # branch and bound wins at every d; the full scan stays as a second route
    # for d <= 3 and is held against this one in the tests
    return _canonical_bnb(p)


def canonical_form_by_scan(p: Partition) -> CanonicalForm:
    if p.d > 3:
        raise ValueError("full permutation scan is only sized for d <= 3")
    return _canonical_scan(p)


def canonical_key(p: Partition) -> bytes:
    return canonical_form(p).key


def canonical_representative(p: Partition) -> Partition:
    """The orbit member whose canonical-order encoding equals the key."""
    form = canonical_form(p)
    return act(p, form.sigma, form.tau)


def representative_from_key(d: int, key: bytes) -> Partition:
    ctx = context(d)
    order = _canon_edge_order(d)
    colors = [0] * ctx.m
    for pos, pair in enumerate(order):
        colors[ctx.eindex[pair]] = key[pos]
    return Partition(d, tuple(colors))
