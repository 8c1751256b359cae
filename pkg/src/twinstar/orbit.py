"""Breadth-first orbit exploration, sign bookkeeping, and shortest words.

States are packed color arrays (one int per partition).  Under
``involutions_only`` the neighbors of a state are its images under all
C(2d,3) triple involutions; under ``involutions_plus_symmetry`` every state
is collapsed to its canonical representative first, so the search walks
orbit classes of the vertex-and-color symmetry group.

The visited set maps each state to its BFS parity.  For the involution
generators the parity bit doubles as the sign: flipping under every
generator is consistent exactly when the state graph is bipartite, which the
search verifies on the fly (one conflicting edge flips ``parity_consistent``
to False and the search carries on).
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

from .canonical import canonical_form
from .checkpoint import CheckpointWriter, load_checkpoint
from .enumeration import count_cycle_free, enumerate_cycle_free
from .errors import GuardError, InputError, InvariantError, NotFoundError
from .partition import (
    Partition,
    act,
    context,
    involve_key,
    is_cycle_free,
)

GENERATOR_SETS = ("involutions_only", "involutions_plus_symmetry")


@dataclass
class OrbitReport:
    start: Partition
    generator_set: str
    size: int
    parity_consistent: Optional[bool]
    diameter_reached: int
    elapsed: float
    complete: bool
    checkpoint_ref: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "start": {"d": self.start.d, "colors": list(self.start.colors)},
            "generator_set": self.generator_set,
            "size": self.size,
            "parity_consistent": self.parity_consistent,
            "diameter_reached": self.diameter_reached,
            "elapsed": self.elapsed,
            "complete": self.complete,
            "checkpoint_ref": self.checkpoint_ref,
        }


@dataclass
class ExploreResult:
    report: OrbitReport
    visited: dict[int, int]  # key -> parity bit


def _expand_involutions(ctx, keys):
    ntriples = len(ctx.triple_edges)
    out = []
    for key in keys:
        masks = ctx.class_masks(key)
        row = []
        for tidx in range(ntriples):
            row.append(involve_key(ctx, key, masks, tidx)[0])
        out.append(row)
    return out


def _expand_collapsed(ctx, keys):
    ntriples = len(ctx.triple_edges)
    out = []
    for key in keys:
        masks = ctx.class_masks(key)
        row = []
        for tidx in range(ntriples):
            nk, _ = involve_key(ctx, key, masks, tidx)
            rep = canonical_form(Partition.from_key(ctx.d, nk))
            row.append(ctx.pack(_rep_colors(ctx, rep.key)))
        out.append(row)
    return out


def _rep_colors(ctx, key_bytes: bytes):
    from .canonical import _canon_edge_order

    order = _canon_edge_order(ctx.d)
    colors = [0] * ctx.m
    for pos, pair in enumerate(order):
        colors[ctx.eindex[pair]] = key_bytes[pos]
    return colors


def explore(
    start: Partition,
    generators: str = "involutions_only",
    max_states: Optional[int] = None,
    max_depth: Optional[int] = None,
    checkpoint_interval: Optional[int] = None,
    checkpoint_path: Optional[str] = None,
    resume: bool = False,
    threads: int = 1,
    progress: Optional[Callable[[str], None]] = None,
) -> ExploreResult:
    if generators not in GENERATOR_SETS:
        raise InputError(f"unknown generator set {generators!r}")
    if not is_cycle_free(start):
        raise InputError("orbit start must be cycle-free")
    ctx = context(start.d)
    track_parity = generators == "involutions_only"
    expand = _expand_involutions if track_parity else _expand_collapsed

    if generators == "involutions_plus_symmetry":
        start_key = ctx.pack(_rep_colors(ctx, canonical_form(start).key))
    else:
        start_key = start.key()

    t0 = time.time()
    visited: dict[int, int] = {start_key: 0}
    frontier: list[int] = [start_key]
    depth = 0
    expanded = 0
    parity_ok = True
    writer = None
    new_since_ckpt: list[tuple[int, int]] = [(start_key, 0)]
    expanded_since_ckpt = 0

    if checkpoint_path:
        if resume and os.path.exists(checkpoint_path):
            state = load_checkpoint(checkpoint_path)
            if (state.d, state.generators, state.start_key) != (
                start.d,
                generators,
                start_key,
            ):
                raise InputError(
                    f"{checkpoint_path} belongs to a different search"
                )
            visited = state.visited
            frontier = state.frontier
            depth = state.depth
            expanded = state.expanded
            parity_ok = state.parity_ok
            new_since_ckpt = []
            writer = CheckpointWriter(
                checkpoint_path, start.d, generators, start_key, append=True
            )
        else:
            writer = CheckpointWriter(
                checkpoint_path, start.d, generators, start_key
            )

    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    complete = True
    try:
        while frontier:
            if max_depth is not None and depth >= max_depth:
                complete = False
                break
            if max_states is not None and len(visited) >= max_states:
                complete = False
                break
            if pool is not None:
                chunk = max(64, (len(frontier) + threads - 1) // threads)
                chunks = [
                    frontier[i : i + chunk] for i in range(0, len(frontier), chunk)
                ]
                rows_per_chunk = pool.map(lambda ks: expand(ctx, ks), chunks)
                all_rows = [row for rows in rows_per_chunk for row in rows]
            else:
                all_rows = expand(ctx, frontier)
            child_parity = (depth + 1) & 1
            next_frontier: list[int] = []
            for src, row in zip(frontier, all_rows):
                for nk in row:
                    prev = visited.get(nk)
                    if prev is None:
                        visited[nk] = child_parity
                        new_since_ckpt.append((nk, child_parity))
                        next_frontier.append(nk)
                        if max_states is not None and len(visited) >= max_states:
                            pass  # finish the layer; cut at the loop top
                    elif track_parity and prev == visited[src]:
                        parity_ok = False
            expanded += len(frontier)
            expanded_since_ckpt += len(frontier)
            frontier = next_frontier
            if frontier:
                depth += 1
            if progress:
                progress(
                    f"depth {depth}: {len(visited)} states, frontier {len(frontier)}"
                )
            if (
                writer is not None
                and checkpoint_interval
                and expanded_since_ckpt >= checkpoint_interval
            ):
                writer.checkpoint(
                    new_since_ckpt, frontier, depth, expanded, parity_ok, depth
                )
                new_since_ckpt = []
                expanded_since_ckpt = 0
        if writer is not None:
            writer.checkpoint(
                new_since_ckpt, frontier, depth, expanded, parity_ok, depth
            )
    finally:
        if pool is not None:
            pool.shutdown()
        if writer is not None:
            writer.close()

    report = OrbitReport(
        start=start,
        generator_set=generators,
        size=len(visited),
        parity_consistent=parity_ok if track_parity else None,
        diameter_reached=depth,
        elapsed=time.time() - t0,
        complete=complete,
        checkpoint_ref=checkpoint_path,
    )
    return ExploreResult(report, visited)


def orbit_bfs(start: Partition, generators: str = "involutions_only", **kw) -> OrbitReport:
    return explore(start, generators, **kw).report


# --- signs -------------------------------------------------------------------


@dataclass
class SignTable:
    """Sign of every explored state: +1 at the base partition and flipping
    across every involution generator (well-defined iff parity_consistent)."""

    d: int
    base: Partition
    signs: dict[int, int]
    parity_consistent: bool


def build_sign_table(base: Partition, threads: int = 1) -> SignTable:
    res = explore(base, "involutions_only", threads=threads)
    signs = {k: (1 if par == 0 else -1) for k, par in res.visited.items()}
    return SignTable(
        d=base.d,
        base=base,
        signs=signs,
        parity_consistent=bool(res.report.parity_consistent),
    )


def sign(p: Partition, table: SignTable) -> int:
    if p.d != table.d:
        raise InputError("partition and sign table have different d")
    try:
        return table.signs[p.key()]
    except KeyError:
        raise NotFoundError("partition is outside the explored orbit") from None


# --- shortest involution words ------------------------------------------------


def involution_path(
    p: Partition, q: Partition, max_states: int = 2_000_000
) -> list[tuple[int, int, int]]:
    """A minimal-length word w with apply_word(p, w) == q, by bidirectional
    BFS; NotFoundError when the states are not connected within the limit."""
    if p.d != q.d:
        raise InputError("partitions have different d")
    for r in (p, q):
        if not is_cycle_free(r):
            raise InputError("involution_path requires cycle-free partitions")
    ctx = context(p.d)
    kp, kq = p.key(), q.key()
    if kp == kq:
        return []
    ntriples = len(ctx.triple_edges)

    parents_a: dict[int, Optional[tuple[int, int]]] = {kp: None}
    parents_b: dict[int, Optional[tuple[int, int]]] = {kq: None}
    frontier_a, frontier_b = [kp], [kq]
    depth_a = depth_b = 0
    best: Optional[tuple[int, int]] = None  # (total length, meet key)

    def expand(frontier, parents, other_parents):
        nonlocal best
        nxt = []
        for key in frontier:
            masks = ctx.class_masks(key)
            for tidx in range(ntriples):
                nk, _ = involve_key(ctx, key, masks, tidx)
                if nk not in parents:
                    parents[nk] = (key, tidx)
                    nxt.append(nk)
                    if nk in other_parents:
                        total = _chain_len(parents, nk) + _chain_len(
                            other_parents, nk
                        )
                        if best is None or total < best[0]:
                            best = (total, nk)
        return nxt

    while frontier_a and frontier_b:
        if best is not None and depth_a + depth_b + 1 >= best[0]:
            break
        if len(parents_a) + len(parents_b) > max_states:
            raise NotFoundError(
                f"no word found within {max_states} explored states"
            )
        if len(frontier_a) <= len(frontier_b):
            frontier_a = expand(frontier_a, parents_a, parents_b)
            depth_a += 1
        else:
            frontier_b = expand(frontier_b, parents_b, parents_a)
            depth_b += 1
    if best is None:
        raise NotFoundError("partitions are not connected by involutions")

    meet = best[1]
    word: list[tuple[int, int, int]] = []
    k = meet
    while parents_a[k] is not None:
        prev, tidx = parents_a[k]
        word.append(ctx.triples[tidx])
        k = prev
    word.reverse()
    k = meet
    while parents_b[k] is not None:
        prev, tidx = parents_b[k]
        word.append(ctx.triples[tidx])
        k = prev

    from .partition import apply_word

    if apply_word(p, word).key() != kq:
        raise InvariantError("reconstructed word does not replay to target")
    return word


def _chain_len(parents, key: int) -> int:
    n = 0
    while parents[key] is not None:
        key = parents[key][0]
        n += 1
    return n


# --- guarded whole-space verifications ----------------------------------------


def verify_transitive(
    d: int,
    allow_long: bool = False,
    threads: int = 1,
    progress: Optional[Callable[[str], None]] = None,
) -> tuple[bool, OrbitReport, int]:
    """Compare the involution orbit of the reference partition against the
    full enumeration count."""
    if d > 3 and not allow_long:
        raise GuardError(
            f"verify_transitive at d={d} enumerates a huge space; "
            "pass allow_long to override"
        )
    from .partition import reference_partition

    report = orbit_bfs(
        reference_partition(d), threads=threads, progress=progress
    )
    total = count_cycle_free(d)
    return report.size == total, report, total


def weak_classes(
    d: int,
    allow_long: bool = False,
    progress: Optional[Callable[[str], None]] = None,
) -> list[tuple[int, Partition]]:
    """Class sizes and representatives of the vertex-and-color symmetry
    action on all cycle-free d-partitions, sorted by canonical key."""
    if d > 3 and not allow_long:
        raise GuardError(
            f"weak_classes at d={d} enumerates a huge space; "
            "pass allow_long to override"
        )
    buckets: dict[bytes, int] = {}
    done = 0
    for p in enumerate_cycle_free(d):
        key = canonical_form(p).key
        buckets[key] = buckets.get(key, 0) + 1
        done += 1
        if progress and done % 10000 == 0:
            progress(f"{done} partitions, {len(buckets)} classes so far")
    from .canonical import representative_from_key

    return [
        (count, representative_from_key(d, key))
        for key, count in sorted(buckets.items())
    ]
