import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spforge.errors import InvalidPath, NotInvertible, UnknownArrow
from spforge.pathalg import (
    PathAlgebra,
    apply_morphism,
    compose,
    default_trunc,
    format_path,
    Morphism,
    identity_morphism,
    invert_morphism,
)
from spforge.samples import random_automorphism, random_path_elem, random_sp, running_quiver, running_tower


@pytest.fixture(scope="module")
def alg():
    return PathAlgebra(running_quiver(), running_tower(), 8)


def test_v_to_the_d_is_c(alg):
    # v^6 = 3 in GF(7)[v]/(v^6 - 3)
    plain = alg.parse_term("alpha beta gamma delta")
    assert alg.parse_term("v^6 alpha beta gamma delta") == alg.parse_term("alpha beta gamma delta", 3)
    assert alg.parse_term("v^3 v^3 alpha beta gamma delta") == plain.scale(3)
    assert alg.parse_term("alpha v^8 beta gamma delta") == alg.parse_term("alpha v^2 beta gamma delta", 3)
    assert alg.parse_term("alpha v^14 beta gamma delta") == alg.parse_term("alpha v^2 beta gamma delta", 2)


def test_slot_products_follow_the_eigenbasis(alg):
    # v^4 · v^4 = v^8 = c v^2 at the weight-3 vertex
    x = alg.slot(4, 4)
    assert x * x == alg.slot(4, 2, 3)
    assert alg.slot(2, 3) * alg.slot(2, 3) == alg.idem(2).scale(3)


def test_parse_rejects_bad_input(alg):
    with pytest.raises(InvalidPath):
        alg.parse_term("alpha v^-2 beta")
    with pytest.raises(InvalidPath):
        alg.parse_term("alpha v beta")  # v is not in the subfield at vertex 4
    with pytest.raises(InvalidPath):
        alg.parse_term("alpha gamma")
    with pytest.raises(UnknownArrow):
        alg.parse_term("alpha epsilon")


def test_format_path(alg):
    p = next(iter(alg.parse_term("alpha v^2 beta gamma v^3 delta").terms))
    assert format_path(p) == "alpha v^2 beta gamma v^3 delta"
    assert (p.head, p.tail, p.length) == (1, 1, 4)


def test_truncation_drops_long_paths():
    short = PathAlgebra(running_quiver(), running_tower(), 3)
    a = short.parse_term("alpha beta")
    b = short.parse_term("gamma delta")
    assert (a * b).is_zero()
    assert short.parse_term("alpha beta gamma delta").is_zero()


def test_truncation_environment_override(monkeypatch):
    monkeypatch.setenv("SPFORGE_TRUNC", "11")
    assert default_trunc() == 11
    assert PathAlgebra(running_quiver(), running_tower()).trunc == 11
    monkeypatch.delenv("SPFORGE_TRUNC")
    assert default_trunc() == 24


def test_path_counts_match_enumeration(alg):
    for ell in range(5):
        assert alg.count_paths(ell) == sum(1 for _ in alg.paths(ell))
    # one cycle per start vertex, with 3·2 slot choices on the interior of a 4-cycle
    assert all(p.head == p.tail for p in alg.paths(4, head=1, tail=1))


def _chain(rng, sample, count=3):
    """Random elements x_1, ..., x_count with x_r x_{r+1} composable."""
    alg = sample.alg
    vs = [rng.choice(list(sample.quiver.vertices)) for _ in range(count + 1)]
    return [random_path_elem(rng, alg, vs[r], vs[r + 1], lengths=(0, 1, 2)) for r in range(count)], vs


@given(st.integers(0, 10_000))
@settings(max_examples=30, deadline=None)
def test_multiplication_is_associative_and_distributive(seed):
    rng = random.Random(seed)
    sample = random_sp(rng, trunc=6)
    (x, y, z), vs = _chain(rng, sample)
    assert (x * y) * z == x * (y * z)
    w = random_path_elem(rng, sample.alg, vs[1], vs[2], lengths=(1, 2))
    assert x * (y + w) == x * y + x * w


@given(st.integers(0, 10_000))
@settings(max_examples=25, deadline=None)
def test_morphisms_are_multiplicative_and_invertible(seed):
    rng = random.Random(seed)
    sample = random_sp(rng, trunc=5)
    alg = sample.alg
    phi = random_automorphism(rng, alg)
    (x, y), _ = _chain(rng, sample, 2)
    assert apply_morphism(phi, x * y) == apply_morphism(phi, x) * apply_morphism(phi, y)
    psi = invert_morphism(phi)
    assert compose(psi, phi).is_identity()
    assert compose(phi, psi).is_identity()


def test_identity_and_singular_linear_part(alg):
    ident = identity_morphism(alg)
    x = alg.parse_term("alpha v^2 beta gamma")
    assert ident(x) == x
    images = {a: alg.arrow(a) for a in alg.quiver.arrow_names}
    images["beta"] = alg.zero()
    with pytest.raises(NotInvertible):
        invert_morphism(Morphism(alg, alg, images))
