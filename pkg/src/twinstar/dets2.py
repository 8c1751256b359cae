"""Exact evaluation of the determinant-like form det^{S2}.

The form takes one length-d rational vector per edge of K_{2d} and expands
as a sum over all cycle-free d-partitions: each partition contributes its
sign times the product, over edges, of the edge vector's coordinate at the
edge's color.  Signs come from a SignTable anchored at the reference
partition (+1 there, flipping across every involution), which is exactly
what makes the form vanish whenever three mutually adjacent edges carry
equal vectors: those terms pair up under one involution with opposite signs.

Everything is Fraction arithmetic; zero tests are exact by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .edges import num_edges
from .enumeration import enumerate_cycle_free
from .errors import GuardError, InputError, NotFoundError
from .orbit import SignTable
from .partition import Partition


@dataclass(frozen=True)
class EdgeVectorFamily:
    """One exact-rational coordinate vector per edge, in EdgeId order."""

    d: int
    coords: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if len(self.coords) != num_edges(self.d):
            raise InputError(
                f"need {num_edges(self.d)} vectors for d={self.d}, "
                f"got {len(self.coords)}"
            )
        for vec in self.coords:
            if len(vec) != self.d:
                raise InputError(f"vector {vec!r} is not length {self.d}")


def family_from_rows(d: int, rows: Iterable[Iterable]) -> EdgeVectorFamily:
    coords = tuple(tuple(Fraction(x) for x in row) for row in rows)
    return EdgeVectorFamily(d, coords)


def indicator(p: Partition) -> EdgeVectorFamily:
    """Edge of color k maps to the k-th standard basis vector."""
    coords = tuple(
        tuple(Fraction(1 if t == c else 0) for t in range(1, p.d + 1))
        for c in p.colors
    )
    return EdgeVectorFamily(p.d, coords)


def partition_from_indicator(family: EdgeVectorFamily) -> Partition:
    """Inverse of :func:`indicator`; fails on non-indicator families."""
    colors = []
    for vec in family.coords:
        ones = [t + 1 for t, x in enumerate(vec) if x == 1]
        if len(ones) != 1 or sum(vec) != 1:
            raise InputError("family is not an indicator family")
        colors.append(ones[0])
    return Partition(family.d, tuple(colors))


def eval_form(
    family: EdgeVectorFamily, table: SignTable, allow_long: bool = False
) -> Fraction:
    """Exact value of the expansion over all cycle-free d-partitions."""
    d = family.d
    if d >= 4:
        raise GuardError(
            "the d >= 4 expansion is not materializable (no verified state "
            "count exists); refusing"
        )
    if table.d != d:
        raise InputError("family and sign table have different d")
    if d == 3 and not allow_long:
        raise GuardError(
            "the d=3 expansion sums 66240 terms; pass allow_long to confirm"
        )
    coords = family.coords
    signs = table.signs
    total = Fraction(0)
    for p in enumerate_cycle_free(d):
        term = Fraction(1)
        for e, c in enumerate(p.colors):
            x = coords[e][c - 1]
            if not x:
                break
            term *= x
        else:
            try:
                s = signs[p.key()]
            except KeyError:
                raise NotFoundError(
                    "sign table does not cover the enumerated partitions"
                ) from None
            total += s * term
    return total
