import random
from collections import Counter
from itertools import combinations

import pytest

from twinstar.enumeration import enumerate_cycle_free
from twinstar.errors import GuardError, InputError, NotFoundError
from twinstar.orbit import (
    build_sign_table,
    explore,
    involution_path,
    orbit_bfs,
    sign,
    verify_transitive,
    weak_classes,
)
from twinstar.partition import (
    Partition,
    act,
    apply_word,
    involution,
    is_cycle_free,
    reference_partition,
)

from .sampling import random_cycle_free


def test_orbit_d2_full():
    report = orbit_bfs(reference_partition(2))
    assert report.size == 12
    assert report.parity_consistent is True
    assert report.complete


def test_orbit_d1_single_state():
    report = orbit_bfs(reference_partition(1))
    assert report.size == 1
    assert report.diameter_reached == 0


def test_orbit_depth_limit_counts_neighbors():
    e2 = reference_partition(2)
    neighbors = {involution(e2, t).key() for t in combinations(range(1, 5), 3)}
    report = orbit_bfs(e2, max_depth=1)
    assert report.size == 1 + len(neighbors)
    assert report.size <= 1 + 4
    assert not report.complete


def test_orbit_max_states_flags_incomplete():
    report = orbit_bfs(reference_partition(2), max_states=3)
    assert not report.complete
    assert report.size >= 3


def test_orbit_size_independent_of_threads():
    sizes = {
        orbit_bfs(reference_partition(2), threads=t).size for t in (1, 2, 4)
    }
    assert sizes == {12}


def test_orbit_visits_only_cycle_free_states():
    res = explore(reference_partition(2))
    for key in res.visited:
        assert is_cycle_free(Partition.from_key(2, key))


def test_orbit_with_symmetry_collapse_d2():
    # the symmetry action is transitive at d=2: a single collapsed state
    report = orbit_bfs(reference_partition(2), "involutions_plus_symmetry")
    assert report.size == 1
    assert report.parity_consistent is None


def test_orbit_with_symmetry_collapse_d3():
    report = orbit_bfs(reference_partition(3), "involutions_plus_symmetry")
    assert report.size == 19


def test_sign_table_d2():
    tbl = build_sign_table(reference_partition(2))
    assert tbl.parity_consistent
    assert sign(reference_partition(2), tbl) == 1
    for t in combinations(range(1, 5), 3):
        assert sign(involution(reference_partition(2), t), tbl) == -1
    assert Counter(tbl.signs.values()) == Counter({1: 6, -1: 6})


def test_sign_flips_across_every_generator_d2():
    tbl = build_sign_table(reference_partition(2))
    for p in enumerate_cycle_free(2):
        for t in combinations(range(1, 5), 3):
            assert sign(p, tbl) == -sign(involution(p, t), tbl)


def test_sign_outside_orbit():
    tbl = build_sign_table(reference_partition(2))
    with pytest.raises(NotFoundError):
        sign(
            Partition(2, (1, 1, 1, 2, 2, 2)), tbl
        )  # total but not cycle-free, never explored


def test_involution_path_trivial_and_single():
    e2 = reference_partition(2)
    assert involution_path(e2, e2) == []
    q = involution(e2, (1, 2, 3))
    assert involution_path(e2, q) == [(1, 2, 3)]


@pytest.mark.parametrize("seed", range(5))
def test_involution_path_minimal_and_replays(seed):
    rng = random.Random(seed)
    p = random_cycle_free(2, rng)
    q = random_cycle_free(2, rng)
    word = involution_path(p, q)
    assert apply_word(p, word) == q
    # minimality: breadth-first distance from p
    dist = {p.key(): 0}
    frontier = [p]
    triples = list(combinations(range(1, 5), 3))
    while q.key() not in dist:
        nxt = []
        for r in frontier:
            for t in triples:
                s = involution(r, t)
                if s.key() not in dist:
                    dist[s.key()] = dist[r.key()] + 1
                    nxt.append(s)
        frontier = nxt
    assert len(word) == dist[q.key()]


def test_involution_path_reaches_relabeled_reference():
    e2 = reference_partition(2)
    q = act(e2, (2, 1, 3, 4), (1, 2))
    word = involution_path(e2, q)
    assert apply_word(e2, word) == q


def test_verify_transitive_d1_d2():
    ok, report, total = verify_transitive(1)
    assert ok and report.size == total == 1
    ok, report, total = verify_transitive(2)
    assert ok and report.size == total == 12


def test_verify_transitive_guard():
    with pytest.raises(GuardError):
        verify_transitive(4)


def test_weak_classes_d2():
    classes = weak_classes(2)
    assert len(classes) == 1
    assert sum(c for c, _ in classes) == 12


def test_weak_classes_guard():
    with pytest.raises(GuardError):
        weak_classes(4)


def test_explore_rejects_bad_start():
    with pytest.raises(InputError):
        orbit_bfs(Partition(2, (1, 1, 1, 2, 2, 2)))
