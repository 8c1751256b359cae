"""Involution words realizing symmetry actions on the reference partition.

For any vertex permutation sigma and color permutation tau there is a word w
of triples with ``apply_word(E, w) == act(E, sigma, tau)`` where E is the
reference partition.  The construction is local:

* (sigma, tau) is split into adjacent vertex transpositions and adjacent
  color swaps; words for the elementary pieces are conjugated into place (a
  word transported through a vertex permutation maps each triple through it).
* an elementary piece changes E only on edges incident to one block
  {2a-1, 2a} (within-block swap) or to two adjacent blocks (cross-block swap
  and color swap).  Those edges split into complete subgraphs on 4 or 6
  vertices whose induced partitions are cycle-free 2- or 3-partitions, and on
  such subgraphs every pair of cycle-free partitions is involution
  equivalent, so a local breadth-first search finds a connecting word that
  lifts verbatim to the full graph.
* overlaps between the local subgraphs are handled by routing each 6-vertex
  piece to an intermediate state that already agrees with the elementary
  image on the shared 4-vertex core, then fixing the core last.

Words are verified by replay before being returned.
"""

from __future__ import annotations

from functools import lru_cache

from .errors import InputError, InvariantError
from .orbit import involution_path
from .partition import (
    Partition,
    act,
    apply_word,
    context,
    is_cycle_free,
    reference_partition,
    sort_triple,
)
from .perms import (
    adjacent_transposition_word,
    check_perm,
    compose,
    identity,
    transposition,
)

_word_cache: dict = {}


def _restrict(p: Partition, verts: tuple[int, ...]) -> tuple[Partition, list[int]]:
    """Induced partition on a complete subgraph whose edges use exactly
    len(verts)//2 colors; returns it with the sorted color list used."""
    t = len(verts) // 2
    colors_used = sorted(
        {p.color_of(*sorted((u, v))) for i, u in enumerate(verts) for v in verts[i + 1:]}
    )
    if len(colors_used) != t:
        raise InvariantError(
            f"subgraph on {verts} uses {len(colors_used)} colors, wanted {t}"
        )
    cmap = {c: k + 1 for k, c in enumerate(colors_used)}
    sub = context(t)
    cols = [0] * sub.m
    for e, (i, j) in enumerate(sub.pairs):
        u, v = verts[i - 1], verts[j - 1]
        cols[e] = cmap[p.color_of(*sorted((u, v)))]
    return Partition(t, tuple(cols)), colors_used


def _fix_subgraph(p: Partition, verts: tuple[int, ...], target: Partition) -> tuple[Partition, list]:
    """Word of global involutions making p agree with ``target`` (a local
    partition in subgraph labels) on the subgraph, touching nothing else."""
    local, colors_used = _restrict(p, verts)
    if local == target:
        return p, []
    if not (is_cycle_free(local) and is_cycle_free(target)):
        raise InvariantError("local states must be cycle-free")
    cache_key = (verts and len(verts), local.colors, target.colors)
    word_local = _word_cache.get(cache_key)
    if word_local is None:
        word_local = involution_path(local, target)
        _word_cache[cache_key] = word_local
    word = [
        sort_triple(verts[x - 1], verts[y - 1], verts[z - 1])
        for (x, y, z) in word_local
    ]
    before = p
    p = apply_word(p, word)
    # the lift must agree with the local route: same subgraph end state,
    # nothing outside touched
    now, _ = _restrict(p, verts)
    if now != target:
        raise InvariantError("lifted word diverged from the local route")
    vset = set(verts)
    for e, (i, j) in enumerate(context(p.d).pairs):
        if not (i in vset and j in vset):
            if p.colors[e] != before.colors[e]:
                raise InvariantError("lifted word escaped its subgraph")
    return p, word


def _local_target(p_like: Partition, verts: tuple[int, ...]) -> Partition:
    local, _ = _restrict(p_like, verts)
    return local


def _merge_target(outer: Partition, inner: Partition, verts: tuple[int, ...],
                  core: tuple[int, ...]) -> Partition:
    """Local partition on ``verts`` taking core-internal edges from ``inner``
    and everything else from ``outer``."""
    t = len(verts) // 2
    sub = context(t)
    base = _local_target(outer, verts).colors
    over = _local_target(inner, verts).colors
    core_set = set(core)
    cols = list(base)
    for e, (i, j) in enumerate(sub.pairs):
        if verts[i - 1] in core_set and verts[j - 1] in core_set:
            cols[e] = over[e]
    return Partition(t, tuple(cols))


def _elementary_word(d: int, kind: str, a: int) -> list:
    """Word w with apply(E, w) == act(E, s) for one elementary generator s:
    kind "vswap" is the vertex transposition (a, a+1), kind "cswap" the color
    swap (a, a+1)."""
    e = reference_partition(d)
    n = 2 * d
    if kind == "vswap":
        sigma = transposition(n, a, a + 1)
        target = act(e, sigma, identity(d))
    else:
        tau = transposition(d, a, a + 1)
        target = act(e, identity(n), tau)
    if target == e:
        return []

    # build the word from target back to E, then reverse (involutions invert)
    cur = target
    word: list = []
    if kind == "vswap" and a % 2 == 1:
        block = (a + 1) // 2  # swap inside block: (2b-1, 2b)
        for x in range(1, d + 1):
            if x == block:
                continue
            verts = tuple(sorted((2 * block - 1, 2 * block, 2 * x - 1, 2 * x)))
            cur, w = _fix_subgraph(cur, verts, _local_target(e, verts))
            word += w
    else:
        if kind == "vswap":
            lo = a // 2  # swap (2lo, 2lo+1) touches blocks lo, lo+1
        else:
            lo = a
        core = (2 * lo - 1, 2 * lo, 2 * lo + 1, 2 * lo + 2)
        for x in range(1, d + 1):
            if x in (lo, lo + 1):
                continue
            verts = tuple(sorted(core + (2 * x - 1, 2 * x)))
            cur, w = _fix_subgraph(
                cur, verts, _merge_target(e, target, verts, core)
            )
            word += w
        cur, w = _fix_subgraph(cur, core, _local_target(e, core))
        word += w
    if cur != e:
        raise InvariantError("local fixes did not reach the reference partition")
    word.reverse()
    return word


@lru_cache(maxsize=None)
def _elementary_word_cached(d: int, kind: str, a: int) -> tuple:
    return tuple(_elementary_word(d, kind, a))


def symmetry_to_involutions(d: int, sigma, tau) -> list[tuple[int, int, int]]:
    """Word w with apply_word(E, w) == act(E, sigma, tau) for the reference
    partition E of K_{2d}."""
    if d < 1:
        raise InputError(f"d must be >= 1, got {d}")
    n = 2 * d
    sigma = check_perm(sigma, n, "sigma")
    tau = check_perm(tau, d, "tau")
    e = reference_partition(d)
    target = act(e, sigma, tau)
    if target == e:
        return []

    # elementary factors, leftmost applied last: (sigma, tau) =
    # t(a_1)...t(a_m) . c(b_1)...c(b_l) as function composition
    factors: list[tuple[str, int]] = [
        ("vswap", a) for a in adjacent_transposition_word(sigma)
    ] + [("cswap", b) for b in adjacent_transposition_word(tau)]

    word: list[tuple[int, int, int]] = []
    rho_sigma = identity(n)  # vertex part of the prefix processed so far
    rho_tau = identity(d)
    for kind, a in factors:
        piece = _elementary_word_cached(d, kind, a)
        word += [
            sort_triple(rho_sigma[x - 1], rho_sigma[y - 1], rho_sigma[z - 1])
            for (x, y, z) in piece
        ]
        if kind == "vswap":
            rho_sigma = compose(rho_sigma, transposition(n, a, a + 1))
        else:
            rho_tau = compose(rho_tau, transposition(d, a, a + 1))
    if (rho_sigma, rho_tau) != (sigma, tau):
        raise InvariantError("elementary decomposition mismatch")
    if apply_word(e, word) != target:
        raise InvariantError("symmetry word failed its replay check")
    return word
