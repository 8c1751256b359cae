import random
from fractions import Fraction
from itertools import product

import pytest

from twinstar.dets2 import (
    EdgeVectorFamily,
    eval_form,
    family_from_rows,
    indicator,
    partition_from_indicator,
)
from twinstar.edges import edge_encode
from twinstar.errors import GuardError, InputError
from twinstar.orbit import build_sign_table, sign
from twinstar.partition import Partition, reference_partition

from .oracles import cycle_free_naive


@pytest.fixture(scope="module")
def table2():
    return build_sign_table(reference_partition(2))


def test_indicator_basics():
    fam = indicator(reference_partition(2))
    assert fam.coords[edge_encode(1, 2, 2)] == (1, 0)
    assert fam.coords[edge_encode(3, 4, 2)] == (0, 1)
    assert partition_from_indicator(fam) == reference_partition(2)


def test_indicator_injective():
    seen = set()
    for colors in product((1, 2), repeat=6):
        fam = indicator(Partition(2, colors))
        assert fam.coords not in seen
        seen.add(fam.coords)


def test_indicator_of_cycle_free_gives_its_sign(table2):
    # all 64 total 2-colorings of K_4: nonzero exactly on the cycle-free ones
    for colors in product((1, 2), repeat=6):
        p = Partition(2, colors)
        value = eval_form(indicator(p), table2)
        if cycle_free_naive(p):
            assert value == sign(p, table2)
            assert value in (1, -1)
        else:
            assert value == 0


def test_reference_indicator_evaluates_to_plus_one(table2):
    assert eval_form(indicator(reference_partition(2)), table2) == 1


def test_equal_triple_forces_exact_zero(table2):
    rng = random.Random(2024)
    from itertools import combinations

    triples = list(combinations(range(1, 5), 3))
    for _ in range(200):
        rows = [
            [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(2)]
            for _ in range(6)
        ]
        x, y, z = rng.choice(triples)
        shared = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(2)]
        for (i, j) in ((x, y), (x, z), (y, z)):
            rows[edge_encode(i, j, 2)] = shared
        assert eval_form(family_from_rows(2, rows), table2) == 0


def test_multilinearity_in_one_edge(table2):
    rng = random.Random(7)
    rows = [
        [Fraction(rng.randint(-5, 5), rng.randint(1, 5)) for _ in range(2)]
        for _ in range(6)
    ]
    fam = family_from_rows(2, rows)
    base = eval_form(fam, table2)
    lam = Fraction(7, 3)
    rows2 = [list(r) for r in rows]
    rows2[3] = [lam * x for x in rows2[3]]
    assert eval_form(family_from_rows(2, rows2), table2) == lam * base


def test_additivity_in_one_edge(table2):
    rng = random.Random(8)

    def rand_rows():
        return [
            [Fraction(rng.randint(-5, 5), rng.randint(1, 5)) for _ in range(2)]
            for _ in range(6)
        ]

    rows = rand_rows()
    u = [Fraction(rng.randint(-5, 5), rng.randint(1, 5)) for _ in range(2)]
    v = [Fraction(rng.randint(-5, 5), rng.randint(1, 5)) for _ in range(2)]
    r_u = [list(r) for r in rows]
    r_u[0] = u
    r_v = [list(r) for r in rows]
    r_v[0] = v
    r_uv = [list(r) for r in rows]
    r_uv[0] = [a + b for a, b in zip(u, v)]
    assert eval_form(family_from_rows(2, r_uv), table2) == eval_form(
        family_from_rows(2, r_u), table2
    ) + eval_form(family_from_rows(2, r_v), table2)


def test_d3_gated_but_exact():
    table3 = build_sign_table(reference_partition(3))
    fam = indicator(reference_partition(3))
    with pytest.raises(GuardError):
        eval_form(fam, table3)
    assert eval_form(fam, table3, allow_long=True) == 1


def test_d4_refused():
    table2_like = build_sign_table(reference_partition(2))
    fam4 = indicator(reference_partition(4))
    with pytest.raises((GuardError, InputError)):
        eval_form(fam4, table2_like, allow_long=True)


def test_family_validation():
    with pytest.raises(InputError):
        EdgeVectorFamily(2, ((Fraction(1),),) * 6)
    with pytest.raises(InputError):
        family_from_rows(2, [[1, 0]] * 5)
