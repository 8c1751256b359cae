"""Edge partitions of K_{2d} into d color classes, and the triple involution.

Conventions
-----------
* A partition assigns every edge of K_{2d} exactly one color in 1..d; color k
  means the edge belongs to class k.  Colors are stored in EdgeId order (see
  :mod:`twinstar.edges`).
* A partition is *cycle-free* when every color class is a forest.  Because
  K_{2d} has d(2d-1) edges and a forest on 2d vertices has at most 2d-1 edges,
  a cycle-free partition automatically has exactly 2d-1 edges per class, i.e.
  every class is a spanning tree.
* The *reference partition* gives edge (i, j) (with i < j, blocks
  S_a = {2a-1, 2a}) the color of i's block when i+j is even and the color of
  j's block when i+j is odd.  Every class is then a twin-star: the two block
  vertices 2t-1, 2t are adjacent centers and every other vertex hangs off one
  of them.
* For three vertices x < y < z of a cycle-free partition there is exactly one
  cycle-free partition that agrees everywhere except on the edges (x,y),
  (x,z), (y,z) and differs on at least two of them.  ``involution`` computes
  it; applying the same triple twice returns the original partition.

The packed-key helpers at the bottom are the hot path for orbit searches: a
partition is a single int with ceil(log2 d) bits per edge, class membership is
a bitmask per color, and forest checks are table lookups.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from .edges import edge_pairs, num_edges
from .errors import InputError, InvariantError
from .perms import check_perm


def _union_find_forest(edge_iter, n: int) -> bool:
    """True when the edges contain no cycle (vertices labeled 1..n)."""
    parent = list(range(n + 1))
    for i, j in edge_iter:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        while parent[j] != j:
            parent[j] = parent[parent[j]]
            j = parent[j]
        if i == j:
            return False
        parent[j] = i
    return True


def is_forest(edge_set, n: int) -> bool:
    """Cycle check for an explicit edge set on vertices 1..n."""
    edges = list(edge_set)
    for i, j in edges:
        if not (1 <= i <= n and 1 <= j <= n and i != j):
            raise InputError(f"edge ({i}, {j}) not on vertices 1..{n}")
    if len(edges) >= n:
        return False
    return _union_find_forest(edges, n)


class DimContext:
    """Per-d lookup tables shared by everything that works on packed keys."""

    def __init__(self, d: int):
        if d < 1:
            raise InputError(f"d must be >= 1, got {d}")
        self.d = d
        self.n = 2 * d
        self.m = num_edges(d)
        self.pairs = edge_pairs(d)
        self.eindex = {pair: k for k, pair in enumerate(self.pairs)}
        self.bits = max(1, (d - 1).bit_length())
        self.cmask = (1 << self.bits) - 1
        self.shifts = tuple(self.bits * e for e in range(self.m))
        self.triples = tuple(combinations(range(1, self.n + 1), 3))
        self.triple_edges = tuple(
            (self.eindex[(x, y)], self.eindex[(x, z)], self.eindex[(y, z)])
            for (x, y, z) in self.triples
        )
        self.triple_index = {t: k for k, t in enumerate(self.triples)}
        # Forest oracle on edge bitmasks.  Up to 15 edges (d <= 3) the full
        # table fits in memory; beyond that results are memoized on demand.
        if self.m <= 15:
            self._forest_table = self._build_forest_table()
            self._forest_cache = None
        else:
            self._forest_table = None
            self._forest_cache = {}

    def _build_forest_table(self):
        table = [False] * (1 << self.m)
        for mask in range(1 << self.m):
            table[mask] = self._mask_forest_slow(mask)
        return table

    def _mask_forest_slow(self, mask: int) -> bool:
        parent = list(range(self.n + 1))
        pairs = self.pairs
        while mask:
            low = mask & -mask
            mask ^= low
            i, j = pairs[low.bit_length() - 1]
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            while parent[j] != j:
                parent[j] = parent[parent[j]]
                j = parent[j]
            if i == j:
                return False
            parent[j] = i
        return True

    def mask_is_forest(self, mask: int) -> bool:
        if self._forest_table is not None:
            return self._forest_table[mask]
        cache = self._forest_cache
        hit = cache.get(mask)
        if hit is None:
            hit = cache[mask] = self._mask_forest_slow(mask)
        return hit

    # --- packing -----------------------------------------------------------

    def pack(self, colors) -> int:
        key = 0
        for e, c in enumerate(colors):
            key |= (c - 1) << self.shifts[e]
        return key

    def unpack(self, key: int) -> tuple[int, ...]:
        cmask, bits = self.cmask, self.bits
        return tuple(((key >> (bits * e)) & cmask) + 1 for e in range(self.m))

    def class_masks(self, key: int) -> list[int]:
        """Bitmask of edge ids per color (0-based color index)."""
        masks = [0] * self.d
        cmask, bits = self.cmask, self.bits
        for e in range(self.m):
            masks[(key >> (bits * e)) & cmask] |= 1 << e
        return masks


@lru_cache(maxsize=None)
def context(d: int) -> DimContext:
    return DimContext(d)


@dataclass(frozen=True)
class Partition:
    """Total color assignment for the edges of K_{2d}."""

    d: int
    colors: tuple[int, ...]

    def __post_init__(self):
        m = num_edges(self.d)
        if self.d < 1:
            raise InputError(f"d must be >= 1, got {self.d}")
        if len(self.colors) != m:
            raise InputError(
                f"need {m} edge colors for d={self.d}, got {len(self.colors)}"
            )
        for c in self.colors:
            if not (1 <= c <= self.d):
                raise InputError(f"color {c} out of range 1..{self.d}")

    def color_of(self, i: int, j: int) -> int:
        return self.colors[context(self.d).eindex[(i, j)]]

    def class_edges(self, k: int) -> list[tuple[int, int]]:
        pairs = context(self.d).pairs
        return [pairs[e] for e, c in enumerate(self.colors) if c == k]

    def key(self) -> int:
        return context(self.d).pack(self.colors)

    @classmethod
    def from_key(cls, d: int, key: int) -> "Partition":
        return cls(d, context(d).unpack(key))


def is_cycle_free(p: Partition) -> bool:
    """True iff every color class of p is a forest.

    A positive answer implies each class has exactly 2d-1 edges (a pigeonhole
    consequence, not an extra assumption); that is re-checked here and a
    violation raises InvariantError.
    """
    ctx = context(p.d)
    masks = ctx.class_masks(p.key())
    if not all(ctx.mask_is_forest(mk) for mk in masks):
        return False
    want = 2 * p.d - 1
    for k, mk in enumerate(masks):
        if mk.bit_count() != want:
            raise InvariantError(
                f"all classes are forests but class {k+1} has "
                f"{mk.bit_count()} edges instead of {want}"
            )
    return True


def reference_partition(d: int) -> Partition:
    """The twin-star reference partition of K_{2d}.

    Even-sum edges take the color of the lower endpoint's block, odd-sum
    edges the color of the upper endpoint's block.  (Keying odd-sum edges to
    the *lower* endpoint instead is not a partition rule at all: it would pile
    every edge leaving block 1 into class 1.)
    """
    colors = []
    for i, j in edge_pairs(d):
        if (i + j) % 2 == 0:
            colors.append((i + 1) // 2)
        else:
            colors.append((j + 1) // 2)
    return Partition(d, tuple(colors))


def act(p: Partition, sigma, tau) -> Partition:
    """Relabel vertices by sigma and colors by tau.

    Edge (i, j) of the result has color tau(k) iff (sigma^-1(i), sigma^-1(j))
    has color k in p.
    """
    ctx = context(p.d)
    sigma = check_perm(sigma, ctx.n, "sigma")
    tau = check_perm(tau, ctx.d, "tau")
    new = [0] * ctx.m
    eindex = ctx.eindex
    for e, (i, j) in enumerate(ctx.pairs):
        u, v = sigma[i - 1], sigma[j - 1]
        if u > v:
            u, v = v, u
        new[eindex[(u, v)]] = tau[p.colors[e] - 1]
    return Partition(p.d, tuple(new))


def check_triple(t, d: int) -> tuple[int, int, int]:
    x, y, z = t
    if not (1 <= x < y < z <= 2 * d):
        raise InputError(f"triple must satisfy 1 <= x < y < z <= {2*d}, got {t!r}")
    return (x, y, z)


def sort_triple(a: int, b: int, c: int) -> tuple[int, int, int]:
    if a > b:
        a, b = b, a
    if b > c:
        b, c = c, b
    if a > b:
        a, b = b, a
    return (a, b, c)


# --- packed-key involution core ---------------------------------------------


def involve_key(ctx: DimContext, key: int, masks, tidx: int):
    """Apply triple #tidx to a packed cycle-free partition.

    ``masks`` is the list returned by ``ctx.class_masks(key)``; the function
    returns ``(new_key, new_masks)`` without mutating its inputs.  Exactly one
    reassignment of the triple's three edges can preserve cycle-freeness; zero
    or several survivors mean the input was not cycle-free (or a genuine
    counterexample to the uniqueness this package is built on).
    """
    e1, e2, e3 = ctx.triple_edges[tidx]
    bits, cmask = ctx.bits, ctx.cmask
    sh1, sh2, sh3 = bits * e1, bits * e2, bits * e3
    c1 = (key >> sh1) & cmask
    c2 = (key >> sh2) & cmask
    c3 = (key >> sh3) & cmask

    if c1 == c2 == c3:
        raise InvariantError(
            "triple edges share one color: that class has a triangle"
        )
    # Any reassignment that keeps every class a forest must keep class sizes
    # at 2d-1, so only rearrangements of the current color multiset (in >= 2
    # positions) can survive; enumerating those is the d^3 scan with the
    # impossible candidates skipped.
    if c1 == c2:
        cands = ((c1, c3, c2), (c3, c2, c1))
    elif c1 == c3:
        cands = ((c1, c1, c2), (c2, c1, c1))
    elif c2 == c3:
        cands = ((c2, c1, c3), (c2, c3, c1))
    else:
        cands = (
            (c2, c1, c3),
            (c3, c2, c1),
            (c1, c3, c2),
            (c2, c3, c1),
            (c3, c1, c2),
        )

    b1, b2, b3 = 1 << e1, 1 << e2, 1 << e3
    found = None
    for n1, n2, n3 in cands:
        new_masks = list(masks)
        changed = 0
        if n1 != c1:
            new_masks[c1] ^= b1
            new_masks[n1] ^= b1
            changed |= (1 << c1) | (1 << n1)
        if n2 != c2:
            new_masks[c2] ^= b2
            new_masks[n2] ^= b2
            changed |= (1 << c2) | (1 << n2)
        if n3 != c3:
            new_masks[c3] ^= b3
            new_masks[n3] ^= b3
            changed |= (1 << c3) | (1 << n3)
        ok = True
        k = 0
        while changed:
            if changed & 1 and not ctx.mask_is_forest(new_masks[k]):
                ok = False
                break
            changed >>= 1
            k += 1
        if ok:
            if found is not None:
                raise InvariantError(
                    f"triple {ctx.triples[tidx]} has several cycle-free "
                    "reassignments; input was not a valid cycle-free partition"
                )
            new_key = (
                key
                + ((n1 - c1) << sh1)
                + ((n2 - c2) << sh2)
                + ((n3 - c3) << sh3)
            )
            found = (new_key, new_masks)
    if found is None:
        raise InvariantError(
            f"triple {ctx.triples[tidx]} has no cycle-free reassignment; "
            "input was not a valid cycle-free partition"
        )
    return found


def involution(p: Partition, triple) -> Partition:
    """The unique cycle-free partition equal to p off the triple's three
    edges and different on at least two of them."""
    ctx = context(p.d)
    x, y, z = check_triple(triple, p.d)
    if not is_cycle_free(p):
        raise InputError("involution requires a cycle-free partition")
    key = p.key()
    new_key, _ = involve_key(ctx, key, ctx.class_masks(key), ctx.triple_index[(x, y, z)])
    return Partition.from_key(p.d, new_key)


def apply_word(p: Partition, word, check: bool = True) -> Partition:
    """Apply a sequence of triples left to right."""
    if check and not is_cycle_free(p):
        raise InputError("apply_word requires a cycle-free partition")
    ctx = context(p.d)
    key = p.key()
    masks = ctx.class_masks(key)
    for t in word:
        tidx = ctx.triple_index[check_triple(t, p.d)]
        key, masks = involve_key(ctx, key, masks, tidx)
    return Partition.from_key(p.d, key)
