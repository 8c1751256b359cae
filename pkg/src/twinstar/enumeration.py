"""Exact enumeration and seeded sampling of cycle-free d-partitions.

Backtracking assigns colors in EdgeId order with three sound prunes:

* a class that stops being a forest is dead (checked incrementally on the
  class's edge bitmask);
* a class that already holds 2d-1 edges accepts no more (cycle-free implies
  homogeneous);
* every class of a complete cycle-free partition is a spanning tree, so a
  vertex with fewer uncolored edges left than classes still missing it kills
  the branch.

The search tree can be split at a fixed prefix depth into independent
subtrees (one consistent prefix assignment each) for parallel runs; the union
of the subtree results equals the full enumeration whatever the schedule.
"""

from __future__ import annotations

from random import Random
from typing import Iterator, Optional

from .errors import InputError
from .partition import DimContext, Partition, context


def _check_fixed(ctx: DimContext, fixed: Optional[dict]) -> dict[int, int]:
    if not fixed:
        return {}
    cap = 2 * ctx.d - 1
    clean: dict[int, int] = {}
    masks = [0] * (ctx.d + 1)
    sizes = [0] * (ctx.d + 1)
    for e, c in fixed.items():
        e = int(e)
        c = int(c)
        if not (0 <= e < ctx.m):
            raise InputError(f"fixed edge index {e} out of range for d={ctx.d}")
        if not (1 <= c <= ctx.d):
            raise InputError(f"fixed color {c} out of range 1..{ctx.d}")
        if e in clean and clean[e] != c:
            raise InputError(f"edge {e} fixed to two colors")
        clean[e] = c
    for e, c in clean.items():
        masks[c] |= 1 << e
        sizes[c] += 1
    for c in range(1, ctx.d + 1):
        if sizes[c] > cap:
            raise InputError(f"fixed assignment gives class {c} over {cap} edges")
        if not ctx.mask_is_forest(masks[c]):
            raise InputError(f"fixed assignment gives class {c} a cycle")
    return clean


def _search(
    ctx: DimContext,
    fixed: dict[int, int],
    stop_depth: Optional[int] = None,
    rng: Optional[Random] = None,
) -> Iterator[tuple[int, ...]]:
    """Yield color tuples of all completions (or all prefixes of length
    stop_depth); candidate order is shuffled when an rng is given."""
    d, m, n = ctx.d, ctx.m, ctx.n
    cap = 2 * d - 1
    pairs = ctx.pairs
    forest = ctx.mask_is_forest
    limit = m if stop_depth is None else min(stop_depth, m)

    colors = [0] * m
    masks = [0] * (d + 1)
    sizes = [0] * (d + 1)
    deg = [[0] * (n + 1) for _ in range(d + 1)]
    missing = [d] * (n + 1)
    rem = [0] * (n + 1)
    for i, j in pairs:
        rem[i] += 1
        rem[j] += 1

    def walk(e: int) -> Iterator[tuple[int, ...]]:
        if e == limit:
            yield tuple(colors[:limit])
            return
        i, j = pairs[e]
        bit = 1 << e
        rem[i] -= 1
        rem[j] -= 1
        if e in fixed:
            cands = [fixed[e]]
        elif rng is None:
            cands = range(1, d + 1)
        else:
            cands = list(range(1, d + 1))
            rng.shuffle(cands)
        for c in cands:
            if sizes[c] == cap:
                continue
            new_mask = masks[c] | bit
            if not forest(new_mask):
                continue
            degc = deg[c]
            degc[i] += 1
            degc[j] += 1
            if degc[i] == 1:
                missing[i] -= 1
            if degc[j] == 1:
                missing[j] -= 1
            if rem[i] >= missing[i] and rem[j] >= missing[j]:
                masks[c] = new_mask
                sizes[c] += 1
                colors[e] = c
                yield from walk(e + 1)
                masks[c] ^= bit
                sizes[c] -= 1
            if degc[i] == 1:
                missing[i] += 1
            if degc[j] == 1:
                missing[j] += 1
            degc[i] -= 1
            degc[j] -= 1
        rem[i] += 1
        rem[j] += 1

    return walk(0)


def enumerate_cycle_free(
    d: int, fixed: Optional[dict] = None
) -> Iterator[Partition]:
    """Every cycle-free d-partition of K_{2d} extending the fixed partial
    assignment (EdgeId -> color), each exactly once, in lexicographic order
    of the colors array."""
    ctx = context(d)
    clean = _check_fixed(ctx, fixed)
    for colors in _search(ctx, clean):
        yield Partition(d, colors)


def count_cycle_free(d: int, fixed: Optional[dict] = None) -> int:
    ctx = context(d)
    clean = _check_fixed(ctx, fixed)
    return sum(1 for _ in _search(ctx, clean))


def prefix_assignments(
    d: int, depth: int, fixed: Optional[dict] = None
) -> list[dict[int, int]]:
    """Consistent color assignments of the first ``depth`` edges.

    Enumerating with each returned dict as the fixed assignment visits
    pairwise-disjoint subtrees whose union is the full enumeration.
    """
    ctx = context(d)
    clean = _check_fixed(ctx, fixed)
    if not (0 <= depth <= ctx.m):
        raise InputError(f"split depth must be in 0..{ctx.m}")
    out = []
    for prefix in _search(ctx, clean, stop_depth=depth):
        assign = dict(clean)
        assign.update({e: c for e, c in enumerate(prefix)})
        out.append(assign)
    return out


def sample_cycle_free(
    d: int, rng: Random, fixed: Optional[dict] = None
) -> Partition:
    """First completion found with seeded-random color order per edge."""
    ctx = context(d)
    clean = _check_fixed(ctx, fixed)
    for colors in _search(ctx, clean, rng=rng):
        return Partition(d, colors)
    raise InputError("fixed assignment admits no cycle-free completion")
