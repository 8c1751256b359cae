"""Small permutation helpers (one-line notation, 1-based domains).

A permutation of {1..n} is a tuple ``p`` of length n with ``p[x-1]`` the image
of x.  Composition follows function application: ``compose(p, q)`` maps x to
``p[q[x]]``.
"""

from __future__ import annotations

from random import Random

from .errors import InputError


def identity(n: int) -> tuple[int, ...]:
    return tuple(range(1, n + 1))


def is_perm(p, n: int) -> bool:
    return len(p) == n and sorted(p) == list(range(1, n + 1))


def check_perm(p, n: int, what: str = "permutation") -> tuple[int, ...]:
    p = tuple(p)
    if not is_perm(p, n):
        raise InputError(f"{what} must be a bijection of 1..{n}, got {p!r}")
    return p


def compose(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    """(p o q)(x) = p(q(x))."""
    return tuple(p[q[x] - 1] for x in range(len(p)))


def invert(p: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(p)
    for x, y in enumerate(p, start=1):
        inv[y - 1] = x
    return tuple(inv)


def transposition(n: int, a: int, b: int) -> tuple[int, ...]:
    p = list(range(1, n + 1))
    p[a - 1], p[b - 1] = b, a
    return tuple(p)


def from_cycles(n: int, cycles) -> tuple[int, ...]:
    p = list(range(1, n + 1))
    for cyc in cycles:
        for k in range(len(cyc)):
            p[cyc[k] - 1] = cyc[(k + 1) % len(cyc)]
    return tuple(p)


def random_perm(rng: Random, n: int) -> tuple[int, ...]:
    vals = list(range(1, n + 1))
    rng.shuffle(vals)
    return tuple(vals)


def adjacent_transposition_word(p: tuple[int, ...]) -> list[int]:
    """Positions a_1, ..., a_m with p = t(a_1) o t(a_2) o ... o t(a_m),
    where t(a) swaps a and a+1.

    Bubble-sorting the one-line notation of p yields the word; the identity
    gives the empty word.
    """
    n = len(p)
    arr = list(p)
    word: list[int] = []
    # Selection sort by adjacent swaps: bring value v into slot v from the left.
    for v in range(1, n + 1):
        pos = arr.index(v)
        while pos > v - 1:
            arr[pos - 1], arr[pos] = arr[pos], arr[pos - 1]
            word.append(pos)  # records t(pos): swap of pos, pos+1
            pos -= 1
    # arr is sorted now; applying t(a_m)..t(a_1) to p gave identity, hence
    # p = t(a_1) o ... o t(a_m) read left to right.
    word.reverse()
    q = identity(n)
    for a in word:
        q = compose(q, transposition(n, a, a + 1))
    if q != p:
        raise AssertionError("adjacent transposition decomposition failed")
    return word
