import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spforge.errors import BadParams, DiagonalBlockNonzero, NotAnUnfolding, NotDivisible
from spforge.quivers import ExchangeMatrix
from spforge.unfold import (
    Unfolding,
    _balanced_maps,
    candidate_count,
    check_unfolding,
    composite_mutate,
    construct_divisible,
    family_block_sizes,
    nonunfoldable_family,
    obstruction_witness,
    structured_candidate,
)


def naive_mutation(C, k):
    """Entrywise mutation rule, written independently of the library."""
    n = len(C)
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if k in (i, j):
                out[i][j] = -C[i][j]
            else:
                sign = (C[i][k] > 0) - (C[i][k] < 0)
                out[i][j] = C[i][j] + sign * max(C[i][k] * C[k][j], 0)
    return out


def test_divisible_construction_golden():
    B = ExchangeMatrix(((0, -2), (1, 0)), (1, 2))
    u = construct_divisible(B, (2, 1))
    assert u.C.tolist() == [[0, 0, -1], [0, 0, -1], [1, 1, 0]]
    assert check_unfolding(u) == []


def test_divisible_construction_errors():
    B = ExchangeMatrix(((0, -2), (1, 0)), (1, 2))
    with pytest.raises(NotDivisible):
        construct_divisible(B, (4, 2))
    with pytest.raises(BadParams):
        construct_divisible(B, (1, 1))
    with pytest.raises(BadParams):
        construct_divisible(B, (2,))


def test_check_unfolding_reports_each_violation():
    B = ExchangeMatrix(((0, -2), (1, 0)), (1, 2))
    good = construct_divisible(B, (2, 1)).C
    not_skew = good.copy()
    not_skew[0, 2] = 0
    assert any("skew" in m for m in check_unfolding(Unfolding(B, (2, 1), not_skew)))
    wrong_sign = np.array([[0, 0, 1], [0, 0, -3], [-1, 3, 0]])
    msgs = check_unfolding(Unfolding(B, (2, 1), wrong_sign))
    assert any("negative entry" in m for m in msgs)
    assert check_unfolding(Unfolding(B, (2, 2), np.zeros((4, 4))))  # e does not symmetrize B


def test_composite_mutation_is_an_involution():
    u = construct_divisible(ExchangeMatrix(((0, 2, -2), (-1, 0, 1), (1, -1, 0)), (1, 2, 2)), (2, 1, 1))
    for k in (1, 2, 3):
        back = composite_mutate(composite_mutate(u, k), k)
        assert np.array_equal(back.C, u.C) and back.base == u.base


def test_composite_mutation_agrees_with_the_naive_rule():
    u = structured_candidate(2, 3, 6)
    C = u.C.tolist()
    for kb in u.blocks[3]:
        C = naive_mutation(C, kb)
    assert composite_mutate(u, 4).C.tolist() == C


def test_composite_mutation_needs_a_zero_diagonal_block():
    B = ExchangeMatrix(((0, 0), (0, 0)), (1, 1))
    C = np.array([[0, 1, 0], [-1, 0, 0], [0, 0, 0]])
    with pytest.raises(DiagonalBlockNonzero):
        composite_mutate(Unfolding(B, (2, 1), C), 1)
    with pytest.raises(BadParams):
        composite_mutate(Unfolding(B, (2, 1), C), 3)


def test_family_parameters():
    assert nonunfoldable_family(2, 3).B == ((0, -2, 0, 3), (1, 0, -1, 0), (0, 2, 0, -3), (-1, 0, 1, 0))
    assert family_block_sizes(2, 3, 6) == (6, 3, 6, 2)
    with pytest.raises(BadParams):
        family_block_sizes(2, 3, 4)
    with pytest.raises(BadParams):
        nonunfoldable_family(3, 2)
    with pytest.raises(BadParams):
        obstruction_witness(2, 4, 4, structured_candidate(2, 4, 4))


def test_structured_candidate_and_its_obstruction():
    u = structured_candidate(2, 3, 6)
    assert check_unfolding(u) == []
    assert set(np.unique(u.C)) <= {-1, 0, 1}
    w = obstruction_witness(2, 3, 6, u)
    assert w.block[w.positive] == 1 and w.block[w.negative] == -1
    # independent route: the naive rule over E_4 then E_2
    C = u.C.tolist()
    for kb in list(u.blocks[3]) + list(u.blocks[1]):
        C = naive_mutation(C, kb)
    rows, cols = list(u.blocks[0]), list(u.blocks[2])
    block = [[C[i][j] for j in cols] for i in rows]
    assert w.block.tolist() == block
    assert block == [
        [0, 0, 1, 0, 0, 0],
        [0, 0, 1, 0, 0, 0],
        [1, 1, 0, -1, 0, 0],
        [0, 0, -1, 0, 1, 1],
        [0, 0, 0, 1, 0, 0],
        [0, 0, 0, 1, 0, 0],
    ]


def test_obstruction_rejects_non_unfoldings():
    u = structured_candidate(2, 3, 6)
    broken = u.C.copy()
    broken[0, 6] = broken[6, 0] = 0
    with pytest.raises(NotAnUnfolding):
        obstruction_witness(2, 3, 6, Unfolding(u.base, u.e, broken))
    with pytest.raises(NotAnUnfolding):
        obstruction_witness(2, 3, 12, u)


def test_candidate_space_size():
    assert candidate_count(2, 3, 6) == 90
    maps = list(_balanced_maps(6, 3, 2))
    assert len(maps) == 90 == len(set(maps))
    assert all(sorted(m) == [0, 0, 1, 1, 2, 2] for m in maps)


@st.composite
def divisible_pairs(draw):
    """(B, e) with e_i | b_ij and b_ij e_j = -b_ji e_i."""
    n = draw(st.integers(2, 4))
    e = [draw(st.integers(1, 3)) for _ in range(n)]
    D = [math.lcm(*e) // x for x in e]  # D_i e_i constant, so D B skew iff B e-symmetric
    B = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            t = draw(st.integers(-2, 2))
            # e_i | b_ij, and b_ji = -b_ij e_j / e_i is an integer divisible by e_j
            B[i, j] = t * e[i] * (e[j] // math.gcd(e[i], e[j]))
            B[j, i] = -B[i, j] * e[j] // e[i]
    return ExchangeMatrix.from_array(B, D), tuple(e)


@given(divisible_pairs(), st.lists(st.integers(0, 3), min_size=1, max_size=8))
@settings(max_examples=40, deadline=None)
def test_divisible_unfoldings_survive_mutation(pair, seq):
    B, e = pair
    u = construct_divisible(B, e)
    assert check_unfolding(u) == []
    prev = None
    for raw in seq:
        k = raw % B.n + 1
        if k == prev:
            continue
        prev = k
        u = composite_mutate(u, k)
        assert check_unfolding(u) == []
