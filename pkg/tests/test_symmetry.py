import random

import pytest

from twinstar.partition import act, apply_word, reference_partition
from twinstar.perms import identity, random_perm, transposition
from twinstar.symmetry import symmetry_to_involutions


def test_identity_gives_empty_word():
    assert symmetry_to_involutions(2, identity(4), identity(2)) == []
    assert symmetry_to_involutions(3, identity(6), identity(3)) == []


def test_d1_always_empty():
    # K_2 has one edge and one color; every symmetry fixes the partition
    assert symmetry_to_involutions(1, (2, 1), (1,)) == []


@pytest.mark.parametrize("d", [2, 3])
def test_all_adjacent_vertex_transpositions_replay(d):
    e = reference_partition(d)
    for a in range(1, 2 * d):
        sigma = transposition(2 * d, a, a + 1)
        word = symmetry_to_involutions(d, sigma, identity(d))
        assert apply_word(e, word) == act(e, sigma, identity(d))


@pytest.mark.parametrize("d", [2, 3])
def test_all_adjacent_color_swaps_replay(d):
    e = reference_partition(d)
    for c in range(1, d):
        tau = transposition(d, c, c + 1)
        word = symmetry_to_involutions(d, identity(2 * d), tau)
        assert apply_word(e, word) == act(e, identity(2 * d), tau)


@pytest.mark.parametrize("d,seed", [(2, 0), (2, 1), (3, 0), (3, 1), (4, 0)])
def test_random_symmetry_elements_replay(d, seed):
    rng = random.Random(seed)
    e = reference_partition(d)
    sigma, tau = random_perm(rng, 2 * d), random_perm(rng, d)
    word = symmetry_to_involutions(d, sigma, tau)
    assert apply_word(e, word) == act(e, sigma, tau)


def test_within_block_swap_stays_in_its_squares():
    # the word for swapping 3 and 4 (block 2 of d=3) must only use triples
    # inside K_4(3,4,1,2) or K_4(3,4,5,6)
    word = symmetry_to_involutions(3, transposition(6, 3, 4), identity(3))
    assert word  # the swap genuinely moves the reference partition
    squares = [{3, 4, 1, 2}, {3, 4, 5, 6}]
    for triple in word:
        assert any(set(triple) <= sq for sq in squares)


def test_transposition_at_the_top_vertex():
    e = reference_partition(3)
    sigma = transposition(6, 5, 6)
    word = symmetry_to_involutions(3, sigma, identity(3))
    assert apply_word(e, word) == act(e, sigma, identity(3))
