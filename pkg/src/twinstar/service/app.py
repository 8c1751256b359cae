"""FastAPI application exposing the engine's operations.

Handlers are thin adapters over the library: deserialize, call, serialize.
Long computations print progress lines to the server process's stderr; the
results on the wire are deterministic for a given request (witness words are
deterministic too, since every search below is sequential per request).

Sign tables are built on demand and cached per d on the application object.
"""

from __future__ import annotations

import os
import sys
import threading

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..canonical import canonical_form
from ..dets2 import eval_form
from ..enumeration import count_cycle_free, enumerate_cycle_free
from ..errors import GuardError, InputError, InvariantError, NotFoundError
from ..formats import family_from_json_obj
from ..orbit import (
    build_sign_table,
    involution_path,
    orbit_bfs,
    sign,
    verify_transitive,
    weak_classes,
)
from ..partition import (
    Partition,
    act,
    involution,
    reference_partition,
)
from ..perms import check_perm
from ..reduction import (
    T19_REPRESENTATIVE,
    reduce_path_class_to_targets,
    reduce_t16,
    reduce_t20,
    reduce_to_path,
    reduce_to_t19,
    verify_twinstar,
)
from ..symmetry import symmetry_to_involutions
from ..trees import diameter_path, tree_certificate
from . import models as m

CHECKPOINT_DIR_ENV = "TWINSTAR_CHECKPOINT_DIR"


def _progress(msg: str) -> None:
    print(msg, file=sys.stderr, flush=True)


def _trace_response(trace) -> m.TraceResponse:
    steps = []
    for s in trace.steps:
        if s.kind == "inv":
            steps.append(
                m.TraceStepModel(
                    inv=s.action, cert=s.cert_canon.decode("ascii"), t_label=s.t_label
                )
            )
        else:
            steps.append(
                m.TraceStepModel(
                    sym={"sigma": list(s.action[0]), "tau": list(s.action[1])},
                    cert=s.cert_canon.decode("ascii"),
                    t_label=s.t_label,
                )
            )
    return m.TraceResponse(
        start=m.PartitionModel.from_partition(trace.start),
        class_index=trace.class_index,
        steps=steps,
        final=m.PartitionModel.from_partition(trace.final),
    )


def _orbit_response(report) -> m.OrbitResponse:
    return m.OrbitResponse(
        start=m.PartitionModel.from_partition(report.start),
        generator_set=report.generator_set,
        size=report.size,
        parity_consistent=report.parity_consistent,
        diameter_reached=report.diameter_reached,
        elapsed=report.elapsed,
        complete=report.complete,
        checkpoint_ref=report.checkpoint_ref,
    )


def create_app() -> FastAPI:
    app = FastAPI(title="twinstar", version=__version__)
    app.state.sign_tables = {}
    app.state.sign_lock = threading.Lock()

    def sign_table_for(d: int, allow_long: bool):
        if d >= 4:
            raise GuardError(
                "sign tables need the full orbit; d >= 4 has no verified size"
            )
        if d == 3 and not allow_long:
            with app.state.sign_lock:
                if 3 not in app.state.sign_tables:
                    raise GuardError(
                        "building the d=3 sign table walks 66240 states; "
                        "pass allow_long"
                    )
        with app.state.sign_lock:
            if d not in app.state.sign_tables:
                app.state.sign_tables[d] = build_sign_table(reference_partition(d))
            return app.state.sign_tables[d]

    @app.exception_handler(GuardError)
    async def _guard(request: Request, exc: GuardError):
        return JSONResponse(
            status_code=403, content={"error": str(exc), "kind": "guard"}
        )

    @app.exception_handler(InputError)
    async def _input(request: Request, exc: InputError):
        return JSONResponse(
            status_code=400, content={"error": str(exc), "kind": "input"}
        )

    @app.exception_handler(NotFoundError)
    async def _notfound(request: Request, exc: NotFoundError):
        return JSONResponse(
            status_code=404, content={"error": str(exc), "kind": "not-found"}
        )

    @app.exception_handler(InvariantError)
    async def _invariant(request: Request, exc: InvariantError):
        return JSONResponse(
            status_code=500, content={"error": str(exc), "kind": "invariant"}
        )

    @app.get("/v1/health", response_model=m.HealthResponse)
    def health():
        return m.HealthResponse(status="ok", version=__version__)

    @app.post("/v1/enumerate", response_model=m.EnumerateResponse)
    def enumerate_(req: m.EnumerateRequest):
        if req.count_only:
            return m.EnumerateResponse(
                d=req.d, count=count_cycle_free(req.d, req.fixed)
            )
        partitions = []
        truncated = False
        count = 0
        for p in enumerate_cycle_free(req.d, req.fixed):
            count += 1
            if req.limit is not None and len(partitions) >= req.limit:
                truncated = True
                continue
            partitions.append(m.PartitionModel.from_partition(p))
        return m.EnumerateResponse(
            d=req.d, count=count, truncated=truncated, partitions=partitions
        )

    @app.post("/v1/orbit", response_model=m.OrbitResponse)
    def orbit(req: m.OrbitRequest):
        if req.start is not None:
            start = req.start.to_partition()
        elif req.d is not None:
            start = reference_partition(req.d)
        else:
            raise InputError("orbit needs either a start partition or d")
        ckpt = None
        if req.checkpoint:
            base = os.environ.get(CHECKPOINT_DIR_ENV, ".")
            ckpt = (
                req.checkpoint
                if os.path.isabs(req.checkpoint)
                else os.path.join(base, req.checkpoint)
            )
        report = orbit_bfs(
            start,
            req.generators,
            max_states=req.max_states,
            max_depth=req.max_depth,
            checkpoint_interval=req.checkpoint_interval,
            checkpoint_path=ckpt,
            resume=req.resume,
            threads=req.threads,
            progress=_progress,
        )
        return _orbit_response(report)

    @app.post("/v1/verify-transitive", response_model=m.VerifyTransitiveResponse)
    def verify_transitive_(req: m.VerifyTransitiveRequest):
        ok, report, total = verify_transitive(
            req.d, allow_long=req.allow_long, threads=req.threads,
            progress=_progress,
        )
        return m.VerifyTransitiveResponse(
            d=req.d,
            size=report.size,
            total=total,
            transitive=ok,
            report=_orbit_response(report),
        )

    @app.post("/v1/weak-classes", response_model=m.WeakClassesResponse)
    def weak_classes_(req: m.WeakClassesRequest):
        classes = weak_classes(req.d, allow_long=req.allow_long, progress=_progress)
        total = sum(c for c, _ in classes)
        entries = None
        if req.include_representatives:
            entries = [
                m.WeakClassEntry(
                    size=c, representative=m.PartitionModel.from_partition(p)
                )
                for c, p in classes
            ]
        return m.WeakClassesResponse(
            d=req.d, count=len(classes), total=total, classes=entries
        )

    @app.post("/v1/sign", response_model=m.SignResponse)
    def sign_(req: m.SignRequest):
        p = req.partition.to_partition()
        table = sign_table_for(p.d, req.allow_long)
        return m.SignResponse(
            sign=sign(p, table), parity_consistent=table.parity_consistent
        )

    @app.post("/v1/involve", response_model=m.PartitionModel)
    def involve(req: m.InvolveRequest):
        p = req.partition.to_partition()
        return m.PartitionModel.from_partition(involution(p, req.triple))

    @app.post("/v1/act", response_model=m.PartitionModel)
    def act_(req: m.ActRequest):
        p = req.partition.to_partition()
        sigma = check_perm(req.sigma, 2 * p.d, "sigma")
        tau = check_perm(req.tau, p.d, "tau")
        return m.PartitionModel.from_partition(act(p, sigma, tau))

    @app.post("/v1/path", response_model=m.PathResponse)
    def path(req: m.PathRequest):
        word = involution_path(
            req.origin.to_partition(),
            req.target.to_partition(),
            max_states=req.max_states,
        )
        return m.PathResponse(word=word, length=len(word))

    @app.post("/v1/reduce-path", response_model=m.TraceResponse)
    def reduce_path(req: m.ReducePathRequest):
        trace = reduce_to_path(req.partition.to_partition(), req.class_index)
        return _trace_response(trace)

    @app.post("/v1/reduce-d4", response_model=m.TraceResponse)
    def reduce_d4(req: m.ReduceD4Request):
        p = req.partition.to_partition()
        stagefn = {
            "t19": reduce_to_t19,
            "targets": reduce_path_class_to_targets,
            "t16": reduce_t16,
            "t20": reduce_t20,
        }[req.stage]
        return _trace_response(stagefn(p, req.class_index))

    @app.post("/v1/verify-twinstar", response_model=m.TwinstarResponse)
    def verify_twinstar_(req: m.TwinstarRequest):
        outcomes = verify_twinstar(
            count=req.count,
            seed=req.seed,
            budget=req.budget,
            threads=req.threads,
            progress=_progress,
        )
        records = []
        for o in outcomes:
            records.append(
                m.TwinstarRecord(
                    index=o.index,
                    seed=o.seed,
                    instance=m.PartitionModel.from_partition(o.instance),
                    status=o.status,
                    expanded=o.expanded,
                    elapsed=o.elapsed,
                    budget=o.budget,
                    trace=_trace_response(o.trace) if o.trace else None,
                )
            )
        return m.TwinstarResponse(
            representative=list(T19_REPRESENTATIVE),
            records=records,
            successes=sum(1 for o in outcomes if o.status == "success"),
            unresolved=sum(1 for o in outcomes if o.status == "unresolved"),
        )

    @app.post("/v1/eval-dets2", response_model=m.EvalResponse)
    def eval_dets2(req: m.EvalRequest):
        family = family_from_json_obj(req.family)
        table = sign_table_for(family.d, req.allow_long)
        value = eval_form(family, table, allow_long=req.allow_long)
        return m.EvalResponse(
            value=f"{value.numerator}/{value.denominator}"
            if value.denominator != 1
            else str(value.numerator),
            numerator=value.numerator,
            denominator=value.denominator,
        )

    @app.post("/v1/classify-tree", response_model=m.ClassifyTreeResponse)
    def classify_tree(req: m.ClassifyTreeRequest):
        cert = tree_certificate(req.edges, req.n)
        return m.ClassifyTreeResponse(
            canon=cert.canon.decode("ascii"),
            degree_seq=list(cert.degree_seq),
            t_label=cert.t_label,
            t_label_anchored=cert.t_label_anchored,
            diameter_path=list(diameter_path(req.edges, req.n)),
        )

    @app.post("/v1/normalize-symmetry", response_model=m.NormalizeSymmetryResponse)
    def normalize_symmetry(req: m.NormalizeSymmetryRequest):
        word = symmetry_to_involutions(req.d, tuple(req.sigma), tuple(req.tau))
        return m.NormalizeSymmetryResponse(word=word, length=len(word), verified=True)

    return app
