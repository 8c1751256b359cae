"""Constructive reductions of one class of a cycle-free partition.

Three layers:

* ``reduce_to_path`` stretches a chosen class into the path on all 2d
  vertices.  Each round finds a longest path of the class, orients it so the
  branch vertex nearest an end sits nearest the far end ``v_t``, and applies
  one involution: (v_{t-1}, v_t, w) when the branch touches the path's last
  interior vertex, else (v_a, v_{a+1}, w).  Either the path length t grows or
  the branch-to-end gap shrinks, so the pair (t, -gap) strictly increases
  lexicographically until t = 2d-1.  The gap is measured as the minimum over
  all longest paths, which is what makes the strict increase provable rather
  than merely observed.

* the 8-vertex type pipeline drives class 4 of a 4-partition down the tree
  catalog: relabel class 4 onto the standard labeling of its type, apply that
  type's fixed involution, classify, repeat.  Legal moves are a small DAG into
  the sinks T_16, T_19, T_20; the dedicated T_16 and T_20 dispatchers then
  finish at T_19 by case analysis on which of the four critical off-tree
  edges share a color.  Every step validates its transition; anything outside
  the tables raises InvariantError.

* ``verify_twinstar`` searches, per instance with class 4 equal to the fixed
  labeled T_19 representative, for a weakly equivalent partition containing a
  twin-star class, alternating one involution layer with one canonical-
  collapse pass and recording a replayable witness trace.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from random import Random
from typing import Callable, Optional, Union

from .canonical import canonical_form
from .edges import edge_pairs
from .enumeration import enumerate_cycle_free, sample_cycle_free
from .errors import InputError, InvariantError
from .partition import (
    Partition,
    act,
    context,
    involution,
    involve_key,
    is_cycle_free,
    sort_triple,
)
from .perms import identity
from .trees import (
    all_longest_paths,
    standard_tree,
    tree_certificate,
    twin_star_certificate,
)

Triple = tuple[int, int, int]
Symmetry = tuple[tuple[int, ...], tuple[int, ...]]


@dataclass(frozen=True)
class TraceStep:
    kind: str  # "inv" | "sym"
    action: Union[Triple, Symmetry]
    cert_canon: bytes  # certificate of the tracked class after the step
    t_label: Optional[int] = None


@dataclass
class ReductionTrace:
    start: Partition
    class_index: int
    steps: list[TraceStep] = field(default_factory=list)
    final: Optional[Partition] = None

    def to_dict(self) -> dict:
        out_steps = []
        for s in self.steps:
            entry: dict = (
                {"inv": list(s.action)}
                if s.kind == "inv"
                else {"sym": {"sigma": list(s.action[0]), "tau": list(s.action[1])}}
            )
            entry["cert"] = s.cert_canon.decode("ascii")
            if s.t_label is not None:
                entry["t_label"] = s.t_label
            out_steps.append(entry)
        return {
            "start": {"d": self.start.d, "colors": list(self.start.colors)},
            "class_index": self.class_index,
            "steps": out_steps,
            "final": {"d": self.final.d, "colors": list(self.final.colors)},
        }


def apply_step(p: Partition, step: TraceStep) -> Partition:
    if step.kind == "inv":
        return involution(p, step.action)
    sigma, tau = step.action
    return act(p, sigma, tau)


def replay_trace(trace: ReductionTrace) -> Partition:
    """Re-run the steps; raises unless every intermediate state is cycle-free
    and the result equals the recorded final partition."""
    p = trace.start
    for step in trace.steps:
        p = apply_step(p, step)
        if not is_cycle_free(p):
            raise InvariantError("trace passes through a non-cycle-free state")
    if p != trace.final:
        raise InvariantError("trace does not replay to its final partition")
    return p


class _Tracer:
    def __init__(self, p: Partition, class_index: int):
        self.p = p
        self.trace = ReductionTrace(p, class_index)
        self.k = class_index

    def _cert(self):
        return tree_certificate(self.p.class_edges(self.k), 2 * self.p.d)

    def involve(self, triple: Triple):
        self.p = involution(self.p, triple)
        c = self._cert()
        self.trace.steps.append(TraceStep("inv", triple, c.canon, c.t_label))
        return c

    def relabel(self, sigma, tau):
        self.p = act(self.p, sigma, tau)
        c = self._cert()
        self.trace.steps.append(
            TraceStep("sym", (tuple(sigma), tuple(tau)), c.canon, c.t_label)
        )
        return c

    def done(self) -> ReductionTrace:
        self.trace.final = self.p
        return self.trace


# --- reduction to the path ----------------------------------------------------


def _oriented_choice(edges, n):
    """Longest path oriented so a branch vertex sits closest to the far end;
    among all of them minimize that gap, then take the lex-least sequence.
    Returns (path, branch_index, gap)."""
    deg: dict[int, int] = {}
    for a, b in edges:
        deg[a] = deg.get(a, 0) + 1
        deg[b] = deg.get(b, 0) + 1
    best = None
    for path in all_longest_paths(edges, n):
        t = len(path) - 1
        branches = [i for i in range(1, t) if deg.get(path[i], 0) >= 3]
        if not branches:
            continue
        a = max(branches)
        gap = t - a
        cand = (gap, path)
        if best is None or cand < best:
            best = cand
    if best is None:
        return None  # no branch vertex: the class is already the full path
    gap, path = best
    return path, len(path) - 1 - gap, gap


def reduce_to_path(p: Partition, class_index: int) -> ReductionTrace:
    """Involutions turning the chosen class into the path on 2d vertices.

    The trace's potential, (path length, -(branch gap)), strictly increases
    at every step; violation of that or a non-terminating loop is an internal
    error, not an input condition.
    """
    d = p.d
    if not (1 <= class_index <= d):
        raise InputError(f"class index {class_index} out of range 1..{d}")
    if not is_cycle_free(p):
        raise InputError("reduce_to_path requires a cycle-free partition")
    tracer = _Tracer(p, class_index)
    n = 2 * d
    prev_potential = None
    while True:
        edges = tracer.p.class_edges(class_index)
        choice = _oriented_choice(edges, n)
        if choice is None:
            break  # diameter 2d-1: the class is the path
        path, a, gap = choice
        t = len(path) - 1
        potential = (t, -gap)
        if prev_potential is not None and potential <= prev_potential:
            raise InvariantError(
                f"reduction potential failed to increase: {prev_potential} "
                f"-> {potential}"
            )
        prev_potential = potential
        adj = {v: set() for v in range(1, n + 1)}
        for x, y in edges:
            adj[x].add(y)
            adj[y].add(x)
        off = sorted(adj[path[a]] - set(path))
        if not off:
            raise InvariantError("branch vertex has no off-path neighbor")
        w = off[0]
        if gap == 1:
            if adj[w] != {path[a]}:
                raise InvariantError(
                    "off-path neighbor at the penultimate vertex is not a leaf"
                )
            triple = sort_triple(path[t - 1], path[t], w)
        else:
            triple = sort_triple(path[a], path[a + 1], w)
        tracer.involve(triple)
    return tracer.done()


# --- the 8-vertex type pipeline ------------------------------------------------

# involution applied to each standard-labeled type, and the types it may reach
PIPELINE_TRIPLES: dict[int, Triple] = {
    1: (5, 6, 7),
    2: (4, 5, 6),
    3: (2, 3, 4),
    6: (3, 4, 5),
    14: (2, 3, 4),
    17: (3, 4, 5),
    23: (2, 3, 4),
}
PIPELINE_NEXT: dict[int, set[int]] = {
    1: {2, 3},
    2: {6, 17},
    3: {14, 16},
    6: {20},
    14: {19, 20},
    17: {19, 23},
    23: {19},
}
PIPELINE_SINKS = {16, 19, 20}

# (edge pair to compare, edge pair to compare, involution) for the two
# dispatchers; diagonal pairs may instead swap the two edges' colors, after
# which a non-diagonal case applies in the same labeling.
T16_CASES: list[tuple[tuple[int, int], tuple[int, int], Triple]] = [
    ((2, 5), (2, 6), (2, 5, 6)),
    ((1, 5), (2, 5), (1, 2, 5)),
    ((1, 6), (2, 6), (1, 2, 6)),
    ((1, 5), (1, 6), (1, 5, 6)),
    ((1, 5), (2, 6), (2, 5, 6)),
    ((1, 6), (2, 5), (1, 5, 6)),
]
T16_ALLOWED = {16, 17, 23}

T20_CASES: list[tuple[tuple[int, int], tuple[int, int], Optional[Triple]]] = [
    ((1, 8), (2, 8), (1, 2, 8)),
    ((1, 4), (1, 8), (1, 4, 8)),
    ((2, 4), (2, 8), (2, 4, 8)),
    # (1,4) and (2,4) sharing a color is impossible on cycle-free input: the
    # only other edge at vertex 4 outside class 4 is (4,6), and each of the
    # three remaining classes must reach vertex 4
    ((1, 4), (2, 4), None),
    ((2, 4), (1, 8), (1, 2, 4)),
    ((1, 4), (2, 8), (1, 2, 8)),
]
T20_ALLOWED = {17, 19, 20, 23}


def _tree_match(src_edges, dst_edges, n: int) -> tuple[int, ...]:
    """Lexicographically least vertex bijection carrying src onto dst."""
    src = {frozenset(e) for e in src_edges}
    dst = {frozenset(e) for e in dst_edges}
    deg_s: dict[int, int] = {v: 0 for v in range(1, n + 1)}
    deg_d: dict[int, int] = {v: 0 for v in range(1, n + 1)}
    for a, b in src:
        deg_s[a] += 1
        deg_s[b] += 1
    for a, b in dst:
        deg_d[a] += 1
        deg_d[b] += 1
    phi = [0] * (n + 1)
    used = [False] * (n + 1)

    def ok(u: int, v: int) -> bool:
        if deg_s[u] != deg_d[v]:
            return False
        for w in range(1, u):
            same_src = frozenset((u, w)) in src
            same_dst = frozenset((v, phi[w])) in dst
            if same_src != same_dst:
                return False
        return True

    def go(u: int) -> bool:
        if u > n:
            return True
        for v in range(1, n + 1):
            if not used[v] and ok(u, v):
                phi[u] = v
                used[v] = True
                if go(u + 1):
                    return True
                used[v] = False
        return False

    if not go(1):
        raise InvariantError("trees are not isomorphic; no relabeling exists")
    return tuple(phi[1:])


def _to_standard(tracer: _Tracer, label: int):
    """Relabel so the tracked class is exactly the standard labeled tree."""
    d = tracer.p.d
    cur = tracer.p.class_edges(tracer.k)
    sigma = _tree_match(cur, standard_tree(label), 2 * d)
    if tracer.k != d:
        tau = list(range(1, d + 1))
        tau[tracer.k - 1], tau[d - 1] = tau[d - 1], tau[tracer.k - 1]
        tracer.k = d
    else:
        tau = list(identity(d))
    tracer.relabel(sigma, tuple(tau))
    got = set(map(frozenset, tracer.p.class_edges(tracer.k)))
    want = set(map(frozenset, standard_tree(label)))
    if got != want:
        raise InvariantError("relabeling did not produce the standard tree")


def _label_of(tracer: _Tracer) -> int:
    cert = tree_certificate(tracer.p.class_edges(tracer.k), 2 * tracer.p.d)
    assert cert.t_label is not None
    return cert.t_label


def _run_pipeline(tracer: _Tracer) -> int:
    """Drive the tracked class down the type DAG until a sink type."""
    label = _label_of(tracer)
    seen_steps = 0
    while label not in PIPELINE_SINKS:
        if label not in PIPELINE_TRIPLES:
            raise InvariantError(
                f"class reached T_{label}, which the reduction tables exclude"
            )
        _to_standard(tracer, label)
        cert = tracer.involve(PIPELINE_TRIPLES[label])
        nxt = cert.t_label
        if nxt not in PIPELINE_NEXT[label]:
            raise InvariantError(
                f"transition T_{label} -> T_{nxt} is outside the reduction DAG"
            )
        label = nxt
        seen_steps += 1
        if seen_steps > 8:
            raise InvariantError("type pipeline failed to reach a sink")
    return label


def _dispatch_cases(tracer: _Tracer, label: int, cases, allowed: set[int]) -> int:
    """One case-table round: find a same-colored critical pair, involve."""
    _to_standard(tracer, label)
    p = tracer.p
    for (e1, e2, triple) in cases:
        if p.color_of(*e1) == p.color_of(*e2):
            if triple is None:
                raise InvariantError(
                    f"edges {e1} and {e2} share a color in the T_{label} "
                    "standard labeling; impossible for cycle-free input"
                )
            cert = tracer.involve(triple)
            if cert.t_label not in allowed:
                raise InvariantError(
                    f"T_{label} case produced T_{cert.t_label}, outside "
                    f"{sorted(allowed)}"
                )
            return cert.t_label
    raise InvariantError(
        f"no two critical edges of the T_{label} labeling share a color "
        "(pigeonhole violated)"
    )


def _finish_t16(tracer: _Tracer) -> None:
    swaps = 0
    label = 16
    while label != 19:
        if label == 16:
            nxt = _dispatch_cases(tracer, 16, T16_CASES, T16_ALLOWED)
            if nxt == 16:
                swaps += 1
                if swaps > 1:
                    raise InvariantError("T_16 dispatch swapped twice")
            label = nxt
        else:
            label = _run_pipeline(tracer)
            if label not in (19,):
                raise InvariantError(
                    f"T_16 route ended at T_{label} instead of T_19"
                )


def _finish_t20(tracer: _Tracer) -> None:
    swaps = 0
    label = 20
    while label != 19:
        if label == 20:
            nxt = _dispatch_cases(tracer, 20, T20_CASES, T20_ALLOWED)
            if nxt == 20:
                swaps += 1
                if swaps > 1:
                    raise InvariantError("T_20 dispatch swapped twice")
            label = nxt
        else:
            label = _run_pipeline(tracer)
            if label not in (19,):
                raise InvariantError(
                    f"T_20 route ended at T_{label} instead of T_19"
                )


def reduce_path_class_to_targets(p: Partition, class_index: int = 4) -> ReductionTrace:
    """From class 4 equal to the 8-vertex path, walk the type DAG until the
    class is one of T_16, T_19, T_20."""
    _require_d4(p)
    tracer = _Tracer(p, class_index)
    if _label_of(tracer) != 1:
        raise InputError("class must be the 8-vertex path")
    _run_pipeline(tracer)
    return tracer.done()


def reduce_t16(p: Partition, class_index: int = 4) -> ReductionTrace:
    _require_d4(p)
    tracer = _Tracer(p, class_index)
    if _label_of(tracer) != 16:
        raise InputError("class must be of type T_16")
    _finish_t16(tracer)
    return tracer.done()


def reduce_t20(p: Partition, class_index: int = 4) -> ReductionTrace:
    _require_d4(p)
    tracer = _Tracer(p, class_index)
    if _label_of(tracer) != 20:
        raise InputError("class must be of type T_20")
    _finish_t20(tracer)
    return tracer.done()


def reduce_to_t19(p: Partition, class_index: int = 4) -> ReductionTrace:
    """Full route: stretch the class to the path, then down the DAG to T_19."""
    _require_d4(p)
    if not is_cycle_free(p):
        raise InputError("reduce_to_t19 requires a cycle-free partition")
    tracer = _Tracer(p, class_index)
    label = _label_of(tracer)
    if label not in PIPELINE_TRIPLES and label not in PIPELINE_SINKS:
        # outside the DAG: stretch to the path first (type 1), then descend
        path_trace = reduce_to_path(tracer.p, tracer.k)
        for step in path_trace.steps:
            tracer.involve(step.action)  # replays identically
        label = _label_of(tracer)
    while label != 19:
        if label in PIPELINE_TRIPLES:
            label = _run_pipeline(tracer)
        elif label == 16:
            _finish_t16(tracer)
            label = 19
        elif label == 20:
            _finish_t20(tracer)
            label = 19
        else:
            raise InvariantError(f"unexpected type T_{label} on the T_19 route")
    return tracer.done()


def _require_d4(p: Partition):
    if p.d != 4:
        raise InputError("the type pipeline is specific to 4-partitions of K_8")


# --- twin-star search -----------------------------------------------------------

T19_REPRESENTATIVE: tuple[tuple[int, int], ...] = standard_tree(19)


def t19_fixed_assignment() -> dict[int, int]:
    ctx = context(4)
    return {ctx.eindex[e]: 4 for e in T19_REPRESENTATIVE}


def _has_twin_star_class(p: Partition) -> bool:
    want_deg = twin_star_certificate(p.d).degree_seq
    want = twin_star_certificate(p.d).canon
    for k in range(1, p.d + 1):
        edges = p.class_edges(k)
        degs: dict[int, int] = {}
        for a, b in edges:
            degs[a] = degs.get(a, 0) + 1
            degs[b] = degs.get(b, 0) + 1
        seq = tuple(sorted((degs.get(v, 0) for v in range(1, 2 * p.d + 1)), reverse=True))
        if seq == want_deg and tree_certificate(edges, 2 * p.d).canon == want:
            return True
    return False


@dataclass
class TwinStarOutcome:
    index: int
    seed: Optional[str]
    instance: Partition
    status: str  # "success" | "unresolved"
    expanded: int
    elapsed: float
    budget: int
    trace: Optional[ReductionTrace] = None

    def to_dict(self) -> dict:
        out = {
            "index": self.index,
            "seed": self.seed,
            "instance": {"d": 4, "colors": list(self.instance.colors)},
            "status": self.status,
            "expanded": self.expanded,
            "elapsed": self.elapsed,
            "budget": self.budget,
        }
        if self.trace is not None:
            out["trace"] = self.trace.to_dict()
        return out


def search_twin_star(p: Partition, budget: int = 1_000_000) -> tuple[Optional[ReductionTrace], int]:
    """Search the weak-equivalence neighborhood of p for a partition with a
    twin-star class: one involution layer, one canonical-collapse pass,
    repeat.  Returns (witness trace or None, states expanded)."""
    ctx = context(p.d)
    ntriples = len(ctx.triple_edges)
    parents: dict[int, Optional[tuple[int, TraceStep]]] = {p.key(): None}

    def build_trace(key: int) -> ReductionTrace:
        chain = []
        k = key
        while parents[k] is not None:
            prev, step = parents[k]
            chain.append(step)
            k = prev
        chain.reverse()
        trace = ReductionTrace(p, p.d, chain, Partition.from_key(p.d, key))
        replay_trace(trace)
        return trace

    if _has_twin_star_class(p):
        return build_trace(p.key()), 0

    frontier = [p.key()]
    expanded = 0
    while frontier and expanded < budget:
        # involution layer
        inv_layer: list[int] = []
        for key in frontier:
            if expanded >= budget:
                break
            expanded += 1
            masks = ctx.class_masks(key)
            for tidx in range(ntriples):
                nk, _ = involve_key(ctx, key, masks, tidx)
                if nk in parents:
                    continue
                q = Partition.from_key(p.d, nk)
                cert = tree_certificate(q.class_edges(p.d), 2 * p.d)
                parents[nk] = (
                    key,
                    TraceStep("inv", ctx.triples[tidx], cert.canon, cert.t_label),
                )
                if _has_twin_star_class(q):
                    return build_trace(nk), expanded
                inv_layer.append(nk)
        # collapse pass
        next_frontier: list[int] = []
        for key in inv_layer:
            q = Partition.from_key(p.d, key)
            form = canonical_form(q)
            rep = act(q, form.sigma, form.tau)
            rk = rep.key()
            if rk == key:
                next_frontier.append(key)
                continue
            if rk in parents:
                continue
            cert = tree_certificate(rep.class_edges(p.d), 2 * p.d)
            parents[rk] = (
                key,
                TraceStep("sym", (form.sigma, form.tau), cert.canon, cert.t_label),
            )
            next_frontier.append(rk)
        frontier = next_frontier
    return None, expanded


def verify_twinstar(
    count: int = 100,
    seed: int = 0,
    budget: int = 1_000_000,
    threads: int = 1,
    progress: Optional[Callable[[str], None]] = None,
) -> list[TwinStarOutcome]:
    """Sampled twin-star check: ``count`` distinct seeded-random cycle-free
    4-partitions with class 4 equal to the fixed labeled T_19 tree."""
    fixed = t19_fixed_assignment()
    instances: list[tuple[int, str, Partition]] = []
    seen = set()
    attempt = 0
    while len(instances) < count:
        tag = f"{seed}:{attempt}"
        attempt += 1
        if attempt > 50 * count + 100:
            raise InputError("could not sample enough distinct instances")
        p = sample_cycle_free(4, Random(tag), fixed)
        if p.colors in seen:
            continue
        seen.add(p.colors)
        instances.append((len(instances), tag, p))

    def run(item):
        idx, tag, p = item
        t0 = time.time()
        trace, expanded = search_twin_star(p, budget)
        status = "success" if trace is not None else "unresolved"
        return TwinStarOutcome(
            idx, tag, p, status, expanded, time.time() - t0, budget, trace
        )

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(run, instances))
    else:
        outcomes = []
        for item in instances:
            outcomes.append(run(item))
            if progress:
                progress(
                    f"instance {item[0]}: {outcomes[-1].status} "
                    f"({outcomes[-1].expanded} expanded)"
                )
    return outcomes


def verify_twinstar_exhaustive(
    budget: int = 1_000_000,
    jsonl_path: Optional[str] = None,
    resume: bool = False,
    progress: Optional[Callable[[str], None]] = None,
    limit: Optional[int] = None,
):
    """Full run over every cycle-free 4-partition whose class 4 is the fixed
    labeled T_19 representative; one JSONL record per instance, appended as
    results arrive so an interrupted run resumes by index."""
    done: set[int] = set()
    if resume and jsonl_path:
        try:
            with open(jsonl_path) as f:
                for line in f:
                    done.add(json.loads(line)["index"])
        except FileNotFoundError:
            pass
    sink = open(jsonl_path, "a") if jsonl_path else None
    outcomes = []
    try:
        for idx, p in enumerate(enumerate_cycle_free(4, t19_fixed_assignment())):
            if limit is not None and idx >= limit:
                break
            if idx in done:
                continue
            t0 = time.time()
            trace, expanded = search_twin_star(p, budget)
            outcome = TwinStarOutcome(
                idx,
                None,
                p,
                "success" if trace is not None else "unresolved",
                expanded,
                time.time() - t0,
                budget,
                trace,
            )
            outcomes.append(outcome)
            if sink:
                sink.write(json.dumps(outcome.to_dict()) + "\n")
                sink.flush()
            if progress and idx % 100 == 0:
                progress(f"instance {idx}: {outcome.status}")
    finally:
        if sink:
            sink.close()
    return outcomes
