"""Command-line client for the twinstar service.

Every subcommand builds one HTTP request and renders the response.  By
default the service application is mounted in-process (no sockets, results
byte-identical to direct library calls); ``--server URL`` targets a running
instance instead.  ``twinstar serve`` starts one.

Exit codes: 0 success, 1 verification failure (or an internal invariant
violation reported by the service), 2 bad input, bad flags, or a guarded
command without its override.  Long-running commands stream progress to
stderr; stdout carries results only.  Randomized commands echo their seed in
the output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import httpx

from . import __version__

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_INPUT = 2


def _post(args, endpoint: str, payload: dict) -> httpx.Response:
    if getattr(args, "server", None):
        with httpx.Client(base_url=args.server, timeout=None) as client:
            return client.post(f"/v1/{endpoint}", json=payload)

    # default: mount the service in-process (ASGI transport is async-only)
    import asyncio

    from .service import create_app

    async def go():
        transport = httpx.ASGITransport(app=create_app())
        async with httpx.AsyncClient(
            transport=transport, base_url="http://twinstar.internal", timeout=None
        ) as client:
            return await client.post(f"/v1/{endpoint}", json=payload)

    return asyncio.run(go())


def _call(args, endpoint: str, payload: dict) -> dict:
    resp = _post(args, endpoint, payload)
    if resp.status_code == 200:
        return resp.json()
    try:
        detail = resp.json()
    except Exception:
        detail = {"error": resp.text}
    msg = detail.get("error") or json.dumps(detail)
    print(f"error: {msg}", file=sys.stderr)
    if resp.status_code in (400, 403, 404, 422):
        raise SystemExit(EXIT_INPUT)
    raise SystemExit(EXIT_VERIFICATION)


def _read_partition_arg(path: str) -> dict:
    from .formats import load_partition, partition_to_json_obj

    with open(path) as f:
        return partition_to_json_obj(load_partition(f.read()))


def _emit_partition(obj: dict, fmt: str):
    from .formats import partition_from_json_obj, partition_to_text

    if fmt == "json":
        print(json.dumps(obj))
    else:
        sys.stdout.write(partition_to_text(partition_from_json_obj(obj)))


def _parse_perm(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError:
        print(f"error: bad permutation {text!r}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT) from None


def _parse_triple(text: str) -> list[int]:
    vals = _parse_perm(text)
    if len(vals) != 3:
        print(f"error: triple needs three vertices, got {text!r}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)
    return vals


def _parse_fixed(text: str | None) -> dict | None:
    if not text:
        return None
    try:
        obj = json.loads(text)
        return {int(k): int(v) for k, v in obj.items()}
    except (json.JSONDecodeError, AttributeError, ValueError):
        print(f"error: --fixed wants a JSON object, got {text!r}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT) from None


# --- subcommand handlers -------------------------------------------------------


def cmd_enumerate(args):
    payload = {
        "d": args.d,
        "fixed": _parse_fixed(args.fixed),
        "count_only": args.count_only,
        "limit": args.limit,
    }
    out = _call(args, "enumerate", payload)
    if args.count_only:
        print(out["count"])
    elif args.format == "json":
        print(json.dumps(out))
    else:
        print(f"count: {out['count']}" + (" (truncated list)" if out["truncated"] else ""))
        for p in out["partitions"]:
            _emit_partition(p, "text")
    return EXIT_OK


def cmd_orbit(args):
    payload = {
        "d": args.d,
        "start": _read_partition_arg(args.infile) if args.infile else None,
        "generators": "involutions_plus_symmetry" if args.collapse else "involutions_only",
        "max_states": args.max_states,
        "max_depth": args.max_depth,
        "checkpoint": args.checkpoint,
        "checkpoint_interval": args.checkpoint_interval,
        "resume": args.resume,
        "threads": args.threads,
    }
    out = _call(args, "orbit", payload)
    print(json.dumps(out) if args.format == "json" else json.dumps(out, indent=2))
    return EXIT_OK


def cmd_verify_transitive(args):
    out = _call(
        args,
        "verify-transitive",
        {"d": args.d, "allow_long": args.allow_long, "threads": args.threads},
    )
    print(
        json.dumps(
            {"size": out["size"], "total": out["total"], "transitive": out["transitive"]}
        )
    )
    return EXIT_OK if out["transitive"] else EXIT_VERIFICATION


def cmd_weak_classes(args):
    out = _call(
        args,
        "weak-classes",
        {
            "d": args.d,
            "allow_long": args.allow_long,
            "include_representatives": not args.count_only,
        },
    )
    if args.count_only:
        print(out["count"])
    else:
        print(json.dumps(out))
    return EXIT_OK


def cmd_sign(args):
    payload = {
        "partition": _read_partition_arg(args.infile),
        "allow_long": args.allow_long,
    }
    out = _call(args, "sign", payload)
    if args.format == "json":
        print(json.dumps(out))
    else:
        print(f"{out['sign']:+d}")
    return EXIT_OK


def cmd_involve(args):
    payload = {
        "partition": _read_partition_arg(args.infile),
        "triple": _parse_triple(args.triple),
    }
    out = _call(args, "involve", payload)
    _emit_partition(out, args.format)
    return EXIT_OK


def cmd_act(args):
    payload = {
        "partition": _read_partition_arg(args.infile),
        "sigma": _parse_perm(args.sigma),
        "tau": _parse_perm(args.tau),
    }
    out = _call(args, "act", payload)
    _emit_partition(out, args.format)
    return EXIT_OK


def cmd_path(args):
    payload = {
        "origin": _read_partition_arg(args.src),
        "target": _read_partition_arg(args.dst),
        "max_states": args.max_states,
    }
    out = _call(args, "path", payload)
    if args.format == "json":
        print(json.dumps(out))
    else:
        for (x, y, z) in out["word"]:
            print(f"{x} {y} {z}")
    return EXIT_OK


def cmd_reduce_path(args):
    payload = {
        "partition": _read_partition_arg(args.infile),
        "class_index": args.cls,
    }
    out = _call(args, "reduce-path", payload)
    print(json.dumps(out))
    return EXIT_OK


def cmd_reduce_d4(args):
    payload = {
        "partition": _read_partition_arg(args.infile),
        "class_index": args.cls,
        "stage": args.stage,
    }
    out = _call(args, "reduce-d4", payload)
    print(json.dumps(out))
    return EXIT_OK


def cmd_verify_twinstar(args):
    if args.exhaustive:
        # the full multi-hour run stays in-process: it streams to a JSONL
        # file with resume-by-index checkpointing
        if not args.allow_long:
            print(
                "error: the exhaustive run needs --allow-long", file=sys.stderr
            )
            return EXIT_INPUT
        from .reduction import verify_twinstar_exhaustive

        outcomes = verify_twinstar_exhaustive(
            budget=args.budget,
            jsonl_path=args.jsonl,
            resume=args.resume,
            progress=lambda msg: print(msg, file=sys.stderr, flush=True),
            limit=args.limit,
        )
        bad = sum(1 for o in outcomes if o.status != "success")
        for o in outcomes:
            print(json.dumps(o.to_dict()))
        return EXIT_OK if bad == 0 else EXIT_VERIFICATION
    payload = {
        "count": args.count,
        "seed": args.seed,
        "budget": args.budget,
        "threads": args.threads,
    }
    out = _call(args, "verify-twinstar", payload)
    for rec in out["records"]:
        print(json.dumps(rec))
    print(
        f"successes: {out['successes']}/{len(out['records'])} "
        f"(budget {args.budget}, seed {args.seed})",
        file=sys.stderr,
    )
    return EXIT_OK if out["unresolved"] == 0 else EXIT_VERIFICATION


def cmd_eval_dets2(args):
    with open(args.infile) as f:
        family = json.load(f)
    out = _call(args, "eval-dets2", {"family": family, "allow_long": args.allow_long})
    if args.format == "json":
        print(json.dumps(out))
    else:
        print(out["value"])
    return EXIT_OK


def cmd_classify_tree(args):
    edges = []
    for part in args.edges.replace(" ", "").split(","):
        try:
            a, b = part.split("-")
            edges.append((int(a), int(b)))
        except ValueError:
            print(f"error: bad edge {part!r} (want i-j)", file=sys.stderr)
            return EXIT_INPUT
    out = _call(args, "classify-tree", {"edges": edges, "n": args.n})
    print(json.dumps(out))
    return EXIT_OK


def cmd_normalize_symmetry(args):
    payload = {
        "d": args.d,
        "sigma": _parse_perm(args.sigma),
        "tau": _parse_perm(args.tau),
    }
    out = _call(args, "normalize-symmetry", payload)
    if args.format == "json":
        print(json.dumps(out))
    else:
        for (x, y, z) in out["word"]:
            print(f"{x} {y} {z}")
    return EXIT_OK


def cmd_serve(args):
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twinstar",
        description="cycle-free edge partitions of complete graphs: "
        "enumeration, orbits, reductions, exact forms",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--server", help="URL of a running service (default: in-process)")
        p.add_argument(
            "--threads",
            type=int,
            default=os.cpu_count() or 1,
            help="worker pool size for orbit/verify commands",
        )

    p = sub.add_parser("enumerate", help="count or list cycle-free partitions")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--limit", type=int, help="return at most this many partitions")
    p.add_argument("--fixed", help='partial assignment, JSON {"edge_id": color}')
    common(p)
    p.set_defaults(fn=cmd_enumerate)

    p = sub.add_parser("orbit", help="breadth-first involution orbit search")
    p.add_argument("--d", type=int, help="start from the reference partition of K_{2d}")
    p.add_argument("--in", dest="infile", help="start partition file")
    p.add_argument("--collapse", action="store_true",
                   help="collapse states by vertex/color symmetry")
    p.add_argument("--max-states", type=int)
    p.add_argument("--max-depth", type=int)
    p.add_argument("--checkpoint", help="checkpoint file (under $TWINSTAR_CHECKPOINT_DIR)")
    p.add_argument("--checkpoint-interval", type=int)
    p.add_argument("--resume", action="store_true")
    common(p)
    p.set_defaults(fn=cmd_orbit)

    p = sub.add_parser("verify-transitive", help="orbit size vs enumeration count")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--allow-long", action="store_true")
    common(p)
    p.set_defaults(fn=cmd_verify_transitive)

    p = sub.add_parser("weak-classes", help="classes under vertex+color symmetry")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--allow-long", action="store_true")
    common(p)
    p.set_defaults(fn=cmd_weak_classes)

    p = sub.add_parser("sign", help="sign of a partition in the reference orbit")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--allow-long", action="store_true")
    common(p)
    p.set_defaults(fn=cmd_sign)

    p = sub.add_parser("involve", help="apply one triple involution")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--triple", required=True, help="x,y,z")
    common(p)
    p.set_defaults(fn=cmd_involve)

    p = sub.add_parser("act", help="apply a vertex/color relabeling")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--sigma", required=True, help="comma-separated images of 1..2d")
    p.add_argument("--tau", required=True, help="comma-separated images of 1..d")
    common(p)
    p.set_defaults(fn=cmd_act)

    p = sub.add_parser("path", help="minimal involution word between partitions")
    p.add_argument("--from", dest="src", required=True)
    p.add_argument("--to", dest="dst", required=True)
    p.add_argument("--max-states", type=int, default=2_000_000)
    common(p)
    p.set_defaults(fn=cmd_path)

    p = sub.add_parser("reduce-path", help="stretch one class into the full path")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--class", dest="cls", type=int, required=True)
    common(p)
    p.set_defaults(fn=cmd_reduce_path)

    p = sub.add_parser("reduce-d4", help="drive class 4 of a 4-partition to T_19")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--class", dest="cls", type=int, default=4)
    p.add_argument(
        "--stage",
        choices=("t19", "targets", "t16", "t20"),
        default="t19",
        help="t19: full route; targets/t16/t20: individual stages",
    )
    common(p)
    p.set_defaults(fn=cmd_reduce_d4)

    p = sub.add_parser(
        "verify-twinstar",
        help="search weak equivalents of T_19-pinned instances for a twin-star class",
    )
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=1_000_000)
    p.add_argument("--exhaustive", action="store_true",
                   help="all instances instead of a sample (needs --allow-long)")
    p.add_argument("--allow-long", action="store_true")
    p.add_argument("--jsonl", help="JSONL results file for the exhaustive run")
    p.add_argument("--resume", action="store_true")
    p.add_argument("--limit", type=int, help="cap exhaustive instances (testing)")
    common(p)
    p.set_defaults(fn=cmd_verify_twinstar)

    p = sub.add_parser("eval-dets2", help="exact determinant-like form of a family")
    p.add_argument("--in", dest="infile", required=True, help="family JSON file")
    p.add_argument("--allow-long", action="store_true")
    common(p)
    p.set_defaults(fn=cmd_eval_dets2)

    p = sub.add_parser("classify-tree", help="certificate and type of a tree")
    p.add_argument("--edges", required=True, help="comma-separated i-j pairs")
    p.add_argument("--n", type=int, required=True)
    common(p)
    p.set_defaults(fn=cmd_classify_tree)

    p = sub.add_parser(
        "normalize-symmetry",
        help="involution word realizing a symmetry of the reference partition",
    )
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--sigma", required=True)
    p.add_argument("--tau", required=True)
    common(p)
    p.set_defaults(fn=cmd_normalize_symmetry)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv=None) -> int:
    from .errors import InputError

    args = build_parser().parse_args(argv)
    try:
        code = args.fn(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    except (FileNotFoundError, InputError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BrokenPipeError:
        return EXIT_OK
    return code


if __name__ == "__main__":
    sys.exit(main())
