import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spforge.errors import Has2Cycle, InputError, NotSkewSymmetrizable
from spforge.quivers import (
    Arrow,
    ExchangeMatrix,
    WeightedQuiver,
    composite_arrow_count,
    composite_name,
    matrix_to_wq,
    mutate_matrix,
    mutate_wq,
    premutate_wq,
    star,
    wq_to_matrix,
)
from spforge.samples import running_quiver

B_RUNNING = ((0, -2, 0, 3), (1, 0, -1, 0), (0, 2, 0, -3), (-1, 0, 1, 0))
MU4_B_RUNNING = ((0, -2, 3, -3), (1, 0, -1, 0), (-3, 2, 0, 3), (1, 0, -1, 0))


@pytest.fixture
def B():
    return ExchangeMatrix(B_RUNNING, (1, 2, 1, 3))


def test_matrix_mutation_golden(B):
    assert mutate_matrix(B, 4).B == MU4_B_RUNNING
    assert mutate_matrix(mutate_matrix(B, 4), 4) == B


def test_running_matrix_and_quiver_correspond(B):
    assert wq_to_matrix(running_quiver()) == B
    assert matrix_to_wq(B).isomorphic_ignoring_names(running_quiver())


def test_quiver_mutation_golden(B):
    mu = mutate_wq(running_quiver(), 4)
    counts = mu.count_matrix()  # [head-1, tail-1]
    assert counts[0, 2] == 3  # three arrows 3 -> 1
    expected = {(1, 2): 1, (2, 3): 1, (4, 3): 1, (1, 4): 1, (3, 1): 3}
    got = {(t + 1, h + 1): int(counts[h, t]) for h in range(4) for t in range(4) if counts[h, t]}
    assert got == expected
    assert wq_to_matrix(mu) == mutate_matrix(B, 4)
    names = {a.name for a in mu.arrows}
    assert {"[alpha.beta]", "[alpha.v^2.beta]", "[alpha.v^4.beta]", "beta*", "alpha*"} <= names


def test_star_and_composite_names():
    assert star("a") == "a*"
    assert star("a*") == "a"
    assert composite_name("b", 0, "a") == "[b.a]"
    assert composite_name("b", 2, "a") == "[b.v^2.a]"


def test_composite_arrow_count_formula():
    # gcd(d_i, d_j) d_k / (gcd(d_i, d_k) gcd(d_k, d_j))
    assert composite_arrow_count(1, 3, 1) == 3
    assert composite_arrow_count(2, 1, 3) == 1
    assert composite_arrow_count(2, 3, 1) == 3


def test_invalid_matrices_and_quivers():
    with pytest.raises(NotSkewSymmetrizable):
        ExchangeMatrix(((0, 1), (1, 0)), (1, 1))
    with pytest.raises(InputError):
        WeightedQuiver((1, 1), (Arrow("a", 1, 1),))
    with pytest.raises(InputError):
        WeightedQuiver((1, 1), (Arrow("a", 1, 2), Arrow("a", 2, 1)))
    q = WeightedQuiver((1, 1), (Arrow("a", 1, 2), Arrow("b", 2, 1)))
    with pytest.raises(Has2Cycle):
        wq_to_matrix(q)
    with pytest.raises(Has2Cycle):
        mutate_wq(q, 1)


@st.composite
def skew_symmetrizable(draw, coprime=False):
    n = draw(st.integers(2, 5))
    if coprime:
        pool = [1, 2, 3, 5]
        D = []
        for _ in range(n):
            opts = [x for x in pool if all(math.gcd(x, y) == 1 for y in D)] or [1]
            D.append(draw(st.sampled_from(opts)))
    else:
        D = [draw(st.integers(1, 4)) for _ in range(n)]
    B = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            t = draw(st.integers(-2, 2))
            s = t * math.lcm(D[i], D[j])  # the entry of DB
            B[i, j] = s // D[i]
            B[j, i] = -s // D[j]
    return ExchangeMatrix.from_array(B, D)


@given(skew_symmetrizable(), st.data())
@settings(max_examples=80, deadline=None)
def test_matrix_mutation_is_an_involution(B, data):
    k = data.draw(st.integers(1, B.n))
    once = mutate_matrix(B, k)
    D = np.diag(B.D)
    assert np.array_equal(D @ once.array, -(D @ once.array).T)
    assert mutate_matrix(once, k) == B


@given(skew_symmetrizable(coprime=True), st.data())
@settings(max_examples=80, deadline=None)
def test_quiver_route_agrees_with_matrix_route(B, data):
    k = data.draw(st.integers(1, B.n))
    Q = matrix_to_wq(B)
    assert wq_to_matrix(Q) == B
    assert wq_to_matrix(mutate_wq(Q, k)) == mutate_matrix(B, k)
    assert mutate_wq(mutate_wq(Q, k), k).isomorphic_ignoring_names(Q)


@given(skew_symmetrizable(coprime=True), st.data())
@settings(max_examples=40, deadline=None)
def test_premutation_reverses_exactly_the_arrows_at_k(B, data):
    k = data.draw(st.integers(1, B.n))
    Q = matrix_to_wq(B)
    base, composites = premutate_wq(Q, k)
    assert len(base) == len(Q.arrows)
    for old, new in zip(Q.arrows, base):
        if k in (old.head, old.tail):
            assert (new.tail, new.head) == (old.head, old.tail)
        else:
            assert new == old
    for c in composites:
        assert k not in (c.head, c.tail)
