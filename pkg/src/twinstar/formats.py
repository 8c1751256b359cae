"""On-disk formats: partition text/JSON, vector families, reports.

Partition text format, one edge per line in EdgeId order:

    d=3
    1 2 1
    1 3 1
    ...

JSON mirror: ``{"d": d, "colors": [c_0, ...]}`` with colors in EdgeId order.
Both parsers reject non-total or out-of-range input.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

from .dets2 import EdgeVectorFamily
from .edges import edge_pairs, num_edges
from .errors import InputError
from .partition import Partition


def partition_to_text(p: Partition) -> str:
    lines = [f"d={p.d}"]
    for (i, j), c in zip(edge_pairs(p.d), p.colors):
        lines.append(f"{i} {j} {c}")
    return "\n".join(lines) + "\n"


def partition_from_text(text: str) -> Partition:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise InputError("empty partition file")
    m = re.fullmatch(r"d=(\d+)", lines[0])
    if not m:
        raise InputError(f"first line must be d=<d>, got {lines[0]!r}")
    d = int(m.group(1))
    if d < 1:
        raise InputError("d must be >= 1")
    want = {pair: k for k, pair in enumerate(edge_pairs(d))}
    colors = [0] * num_edges(d)
    seen = set()
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 3:
            raise InputError(f"bad edge line {ln!r}")
        try:
            i, j, c = (int(x) for x in parts)
        except ValueError:
            raise InputError(f"bad edge line {ln!r}") from None
        if (i, j) not in want:
            raise InputError(f"({i}, {j}) is not an edge of K_{2*d}")
        if (i, j) in seen:
            raise InputError(f"edge ({i}, {j}) listed twice")
        if not (1 <= c <= d):
            raise InputError(f"color {c} out of range 1..{d}")
        seen.add((i, j))
        colors[want[(i, j)]] = c
    if len(seen) != num_edges(d):
        raise InputError(
            f"partition is not total: {len(seen)} of {num_edges(d)} edges"
        )
    return Partition(d, tuple(colors))


def partition_to_json_obj(p: Partition) -> dict:
    return {"d": p.d, "colors": list(p.colors)}


def partition_from_json_obj(obj) -> Partition:
    try:
        d = int(obj["d"])
        colors = [int(c) for c in obj["colors"]]
    except (KeyError, TypeError, ValueError):
        raise InputError("partition JSON needs integer 'd' and 'colors'") from None
    if d < 1 or len(colors) != num_edges(d):
        raise InputError(
            f"colors array must have {num_edges(d) if d >= 1 else '?'} entries"
        )
    if any(not (1 <= c <= d) for c in colors):
        raise InputError(f"colors out of range 1..{d}")
    return Partition(d, tuple(colors))


def load_partition(text: str) -> Partition:
    """Accept either the text format or the JSON mirror."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"bad JSON: {exc}") from None
        return partition_from_json_obj(obj)
    return partition_from_text(text)


def _fraction_to_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def family_to_json_obj(family: EdgeVectorFamily) -> dict:
    vectors = {}
    for (i, j), vec in zip(edge_pairs(family.d), family.coords):
        vectors[f"{i},{j}"] = [_fraction_to_str(x) for x in vec]
    return {"d": family.d, "vectors": vectors}


def family_from_json_obj(obj) -> EdgeVectorFamily:
    try:
        d = int(obj["d"])
        vectors = obj["vectors"]
    except (KeyError, TypeError, ValueError):
        raise InputError("family JSON needs 'd' and 'vectors'") from None
    if d < 1:
        raise InputError("d must be >= 1")
    rows = []
    for (i, j) in edge_pairs(d):
        key = f"{i},{j}"
        if key not in vectors:
            raise InputError(f"family is missing the vector for edge {key}")
        try:
            rows.append(tuple(Fraction(s) for s in vectors[key]))
        except (ValueError, ZeroDivisionError):
            raise InputError(f"bad rational in vector for edge {key}") from None
    return EdgeVectorFamily(d, tuple(rows))
