import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twinstar.edges import edge_decode, edge_encode, edge_pairs, num_edges
from twinstar.errors import InputError, InvariantError
from twinstar.partition import (
    Partition,
    act,
    apply_word,
    involution,
    is_cycle_free,
    is_forest,
    reference_partition,
)
from twinstar.perms import from_cycles, identity, random_perm

from .oracles import (
    act_naive,
    cycle_free_naive,
    enumerate_naive,
    forest_dfs,
    involution_naive,
)
from .sampling import random_cycle_free


def partition_from_classes(d, classes):
    """Build a Partition from explicit per-color edge sets."""
    eindex = {pair: k for k, pair in enumerate(edge_pairs(d))}
    colors = [0] * num_edges(d)
    for c, edges in enumerate(classes, start=1):
        for (i, j) in edges:
            colors[eindex[(i, j)]] = c
    assert all(colors)
    return Partition(d, tuple(colors))


# Labeled 3-partitions of K_6: one cycle-free, one with a cycle in class 1.
CF3_CLASSES = [
    {(1, 2), (1, 3), (1, 5), (2, 4), (2, 6)},
    {(1, 4), (2, 3), (3, 4), (3, 5), (4, 6)},
    {(1, 6), (2, 5), (3, 6), (4, 5), (5, 6)},
]
CYCLIC3_CLASSES = [
    {(1, 2), (1, 4), (1, 6), (2, 4), (2, 5)},
    {(1, 3), (2, 3), (3, 4), (3, 6), (4, 5)},
    {(1, 5), (2, 6), (3, 5), (4, 6), (5, 6)},
]


def test_edge_encode_examples():
    assert edge_encode(1, 2, 2) == 0
    assert edge_encode(3, 4, 2) == 5
    # rank of (2,5) among lexicographically ordered pairs on 8 vertices
    pairs8 = [(i, j) for i in range(1, 8) for j in range(i + 1, 9)]
    assert pairs8.index((2, 5)) == 9
    assert edge_encode(2, 5, 4) == 9


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_edge_encode_roundtrip(d):
    for k, (i, j) in enumerate(edge_pairs(d)):
        assert edge_encode(i, j, d) == k
        assert edge_decode(k, d) == (i, j)


def test_edge_encode_rejects_bad_input():
    with pytest.raises(InputError):
        edge_encode(2, 2, 2)
    with pytest.raises(InputError):
        edge_encode(3, 1, 2)
    with pytest.raises(InputError):
        edge_encode(1, 5, 2)


def test_is_forest_basics():
    assert is_forest({(1, 2), (2, 3), (3, 4)}, 4)
    assert not is_forest({(1, 2), (2, 3), (1, 3)}, 4)
    # class 1 of the non-cycle-free K_6 partition has the cycle (1,2,4)
    assert not is_forest(CYCLIC3_CLASSES[0], 6)
    with pytest.raises(InputError):
        is_forest({(0, 2)}, 4)


@given(st.integers(2, 7), st.data())
@settings(max_examples=60, deadline=None)
def test_is_forest_matches_dfs_oracle(n, data):
    all_pairs = [(i, j) for i in range(1, n) for j in range(i + 1, n + 1)]
    edges = data.draw(st.sets(st.sampled_from(all_pairs), max_size=len(all_pairs)))
    assert is_forest(edges, n) == forest_dfs(edges, n)


def test_is_cycle_free_figures():
    assert is_cycle_free(partition_from_classes(3, CF3_CLASSES))
    assert not is_cycle_free(partition_from_classes(3, CYCLIC3_CLASSES))


def test_class_of_2d_edges_is_never_cycle_free():
    # 6 edges in one class of a 2-partition of K_4: pigeonhole cycle
    p = Partition(2, (1, 1, 1, 1, 1, 2))
    assert not is_cycle_free(p)


def test_reference_partition_small_cases():
    e2 = reference_partition(2)
    assert set(e2.class_edges(1)) == {(1, 2), (1, 3), (2, 4)}
    assert set(e2.class_edges(2)) == {(1, 4), (2, 3), (3, 4)}

    e3 = reference_partition(3)
    assert partition_from_classes(3, CF3_CLASSES) == e3

    e4 = reference_partition(4)
    assert set(e4.class_edges(4)) == {
        (7, 8), (2, 7), (4, 7), (6, 7), (1, 8), (3, 8), (5, 8),
    }


@pytest.mark.parametrize("d", [1, 2, 3, 4, 5, 6])
def test_reference_partition_is_cycle_free(d):
    assert is_cycle_free(reference_partition(d))


def test_act_identity_and_swap():
    e2 = reference_partition(2)
    assert act(e2, identity(4), identity(2)) == e2
    swapped = act(e2, (2, 1, 3, 4), identity(2))
    assert set(swapped.class_edges(1)) == {(1, 2), (2, 3), (1, 4)}
    assert set(swapped.class_edges(2)) == {(2, 4), (1, 3), (3, 4)}


def test_color_swap_is_not_a_vertex_relabeling_at_d3():
    # For d=3 no vertex permutation turns the reference partition into its
    # color-swapped version; color swaps genuinely need involution words of
    # their own (checked exhaustively over S_6).  At d=2 two permutations
    # happen to work, but neither is of block-swap form.
    from itertools import permutations

    e = reference_partition(3)
    for c in (1, 2):
        tau = from_cycles(3, [(c, c + 1)])
        target = act(e, identity(6), tau)
        assert all(
            act(e, sigma, identity(3)) != target
            for sigma in permutations(range(1, 7))
        )


@pytest.mark.parametrize("seed", range(8))
def test_act_matches_naive(seed):
    import random

    rng = random.Random(seed)
    d = rng.choice([2, 3])
    p = random_cycle_free(d, rng)
    sigma = random_perm(rng, 2 * d)
    tau = random_perm(rng, d)
    assert act(p, sigma, tau) == act_naive(p, sigma, tau)


def test_act_is_group_action():
    import random

    from twinstar.perms import compose

    rng = random.Random(5)
    p = random_cycle_free(3, rng)
    s1, s2 = random_perm(rng, 6), random_perm(rng, 6)
    t1, t2 = random_perm(rng, 3), random_perm(rng, 3)
    assert act(act(p, s2, t2), s1, t1) == act(p, compose(s1, s2), compose(t1, t2))


def test_involution_worked_example():
    p = partition_from_classes(
        2, [{(1, 2), (1, 4), (2, 3)}, {(1, 3), (2, 4), (3, 4)}]
    )
    q = involution(p, (1, 2, 3))
    assert set(q.class_edges(1)) == {(1, 3), (1, 4), (2, 3)}
    assert set(q.class_edges(2)) == {(1, 2), (2, 4), (3, 4)}


def test_involution_of_reference_d2():
    q = involution(reference_partition(2), (1, 2, 3))
    assert set(q.class_edges(1)) == {(1, 3), (2, 3), (2, 4)}
    assert set(q.class_edges(2)) == {(1, 2), (1, 4), (3, 4)}


def test_involution_exhaustive_d2_against_oracle():
    triples = [(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)]
    for p in enumerate_naive(2):
        for t in triples:
            q = involution(p, t)
            assert q == involution_naive(p, t)
            assert involution(q, t) == p


@pytest.mark.parametrize("d,cases", [(3, 60), (4, 25)])
def test_involution_random_against_oracle(d, cases):
    import random

    from itertools import combinations

    rng = random.Random(17 + d)
    triples = list(combinations(range(1, 2 * d + 1), 3))
    for _ in range(cases):
        p = random_cycle_free(d, rng)
        t = rng.choice(triples)
        q = involution(p, t)
        assert q == involution_naive(p, t)
        assert involution(q, t) == p
        diff = [e for e in range(num_edges(d)) if p.colors[e] != q.colors[e]]
        tri_ids = {edge_encode(t[0], t[1], d), edge_encode(t[0], t[2], d),
                   edge_encode(t[1], t[2], d)}
        assert set(diff) <= tri_ids
        assert len(diff) >= 2


def test_involution_rejects_non_cycle_free():
    p = partition_from_classes(3, CYCLIC3_CLASSES)
    with pytest.raises((InputError, InvariantError)):
        involution(p, (1, 2, 3))


def test_apply_word_roundtrip():
    import random

    rng = random.Random(3)
    p = random_cycle_free(3, rng)
    word = [(1, 2, 3), (2, 4, 6), (1, 5, 6)]
    q = apply_word(p, word)
    assert cycle_free_naive(q)
    assert apply_word(q, list(reversed(word))) == p


def test_degenerate_d1():
    p = reference_partition(1)
    assert p.colors == (1,)
    assert is_cycle_free(p)
    assert act(p, identity(2), identity(1)) == p
    assert apply_word(p, []) == p
