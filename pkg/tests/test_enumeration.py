import random

import pytest

from twinstar.edges import edge_encode
from twinstar.enumeration import (
    count_cycle_free,
    enumerate_cycle_free,
    prefix_assignments,
    sample_cycle_free,
)
from twinstar.errors import InputError
from twinstar.partition import is_cycle_free, reference_partition

from .oracles import enumerate_naive


def test_d2_matches_naive_oracle():
    got = set(enumerate_cycle_free(2))
    assert got == set(enumerate_naive(2))
    assert len(got) == 12


def test_d3_count():
    assert count_cycle_free(3) == 66240


def test_d1_single_partition():
    assert count_cycle_free(1) == 1
    (p,) = list(enumerate_cycle_free(1))
    assert p == reference_partition(1)


def test_no_duplicates_and_all_cycle_free_d3_sample():
    seen = set()
    for k, p in enumerate(enumerate_cycle_free(3)):
        if k >= 500:
            break
        assert p.colors not in seen
        seen.add(p.colors)
        assert is_cycle_free(p)


def test_fixed_assignment_filters_oracle():
    e12 = edge_encode(1, 2, 2)
    expected = {p for p in enumerate_naive(2) if p.colors[e12] == 1}
    got = set(enumerate_cycle_free(2, fixed={e12: 1}))
    assert got == expected
    assert len(got) == 6  # color symmetry halves the 12


def test_fixed_assignment_validation():
    with pytest.raises(InputError):
        count_cycle_free(2, fixed={99: 1})
    with pytest.raises(InputError):
        count_cycle_free(2, fixed={0: 3})
    # fixing a monochromatic triangle on vertices 1,2,3 is inconsistent
    tri = {edge_encode(1, 2, 2): 1, edge_encode(1, 3, 2): 1, edge_encode(2, 3, 2): 1}
    with pytest.raises(InputError):
        count_cycle_free(2, fixed=tri)


@pytest.mark.parametrize("depth", [0, 1, 3, 6])
def test_split_covers_everything_exactly_once(depth):
    full = sorted(p.colors for p in enumerate_cycle_free(2))
    merged = []
    for assign in prefix_assignments(2, depth):
        merged.extend(p.colors for p in enumerate_cycle_free(2, fixed=assign))
    assert sorted(merged) == full


def test_split_at_depth_d3():
    parts = prefix_assignments(3, 2)
    total = sum(count_cycle_free(3, fixed=a) for a in parts)
    assert total == 66240


def test_sampling_is_seed_deterministic_and_valid():
    p1 = sample_cycle_free(3, random.Random(42))
    p2 = sample_cycle_free(3, random.Random(42))
    p3 = sample_cycle_free(3, random.Random(43))
    assert p1 == p2
    assert is_cycle_free(p1)
    assert p1 != p3 or True  # different seeds usually differ; validity matters
    assert is_cycle_free(p3)


def test_sampling_respects_fixed_class():
    target = [(1, 2), (2, 4), (2, 7), (3, 4), (4, 5), (4, 8), (5, 6)]
    fixed = {edge_encode(i, j, 4): 4 for (i, j) in target}
    p = sample_cycle_free(4, random.Random(7), fixed)
    assert set(p.class_edges(4)) == set(target)
    assert is_cycle_free(p)
