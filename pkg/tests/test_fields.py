import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spforge.errors import DivisionByZero, NotCoprime, NotPrime, Reducible, RootOfUnityMissing
from spforge.fields import (
    PolyField,
    binomial_irreducible,
    default_c,
    extend_base,
    is_irreducible_mod_p,
    make_tower,
    smallest_irreducible,
    smallest_prime_1_mod,
)


def brute_has_root_of(p, d, c):
    """True iff X^d - c has a factor of degree < d over GF(p), by brute force on small cases."""
    # monic polynomials of degree 1..d-1, checked by polynomial division
    for deg in range(1, d // 2 + 1):
        for tail in itertools.product(range(p), repeat=deg):
            g = list(tail) + [1]  # low to high
            r = [(-c) % p] + [0] * (d - 1) + [1]
            for top in range(d, deg - 1, -1):
                q = r[top]
                if q:
                    for i, gi in enumerate(g):
                        r[top - deg + i] = (r[top - deg + i] - q * gi) % p
            if not any(r[:deg]):
                return True
    return False


def test_running_tower_data(tower):
    assert (tower.p, tower.d, tower.c) == (7, 6, 3)
    assert tower.subfield_basis(2) == [0, 3]
    assert tower.subfield_basis(3) == [0, 2, 4]
    assert tower.c_inv == 5


@pytest.mark.parametrize("p,d", [(7, 6), (7, 3), (7, 2), (11, 10), (11, 5), (13, 4), (31, 15), (13, 12)])
def test_binomial_irreducibility_matches_brute_force(p, d):
    for c in range(1, p):
        ok, _ = binomial_irreducible(p, d, c)
        if d <= 6:
            assert ok == (not brute_has_root_of(p, d, c)), (p, d, c)
        else:
            assert ok == is_irreducible_mod_p([(-c) % p] + [0] * (d - 1) + [1], p)


def test_default_c_is_smallest_admissible():
    for d in (6, 10, 15):
        p = smallest_prime_1_mod(d)
        c = default_c(p, d)
        assert binomial_irreducible(p, d, c)[0]
        assert not any(binomial_irreducible(p, d, x)[0] for x in range(2, c))


def test_smallest_prime_one_mod():
    assert [smallest_prime_1_mod(d) for d in (6, 10, 15)] == [7, 11, 31]


def test_make_tower_errors():
    with pytest.raises(NotPrime):
        make_tower(9, 2, 2)
    with pytest.raises(RootOfUnityMissing):
        make_tower(7, 5, 3)
    with pytest.raises(Reducible):
        make_tower(7, 6, 1)
    with pytest.raises(Reducible):
        make_tower(7, 2, 2)  # 2 = 3^2 is a square mod 7


def test_eigenbasis_products(tower):
    for i in range(6):
        for j in range(6):
            f, m = tower.eig_mul(i, j)
            assert m == (i + j) % 6
            assert f == (3 if i + j >= 6 else 1)
    for j in range(1, 6):
        f, m = tower.eig_inv(j)
        g, one = tower.eig_mul(j, m)
        assert one == 0 and (f * g) % 7 == 1


def test_v_to_the_d_is_c(tower):
    v = tower.ext_monomial(1)
    assert tower.ext_pow(v, 6) == tower.ext_from_ints([3])


def test_one_plus_v5_is_invertible(tower):
    x = tower.ext_from_ints([1, 0, 0, 0, 0, 1])
    assert tower.ext_mul(x, tower.ext_inv(x)) == tower.ext_one()
    with pytest.raises(DivisionByZero):
        tower.ext_inv(tower.ext_zero())


def _divides(g, f, p):
    """Does monic g divide f (coefficients low to high)?"""
    r = list(f)
    dg = len(g) - 1
    for top in range(len(r) - 1, dg - 1, -1):
        q = r[top]
        if q:
            for i, gi in enumerate(g):
                r[top - dg + i] = (r[top - dg + i] - q * gi) % p
    return not any(r[:dg])


def _brute_irreducible_quintic(f, p):
    for deg in (1, 2):
        for tail in itertools.product(range(p), repeat=deg):
            if _divides(list(tail) + [1], f, p):
                return False
    return True


def test_smallest_irreducible_quintic_over_gf7():
    # oracle: walk (a4, a3, a2, a1, a0) lexicographically, test by trial division
    for high_first in itertools.product(range(7), repeat=5):
        f = tuple(reversed(high_first)) + (1,)
        if f[0] and _brute_irreducible_quintic(f, 7):
            break
    assert smallest_irreducible(7, 5) == f == (3, 1, 0, 0, 0, 1)  # y^5 + y + 3


def test_extend_base_requires_coprime_degree(tower):
    with pytest.raises(NotCoprime):
        extend_base(tower, 2)
    with pytest.raises(NotCoprime):
        extend_base(tower, 3)
    K = extend_base(tower, 5).base
    assert K.order == 7**5
    assert extend_base(tower, 1) is tower


elements = st.tuples(*[st.integers(0, 6)] * 6)


@given(elements, elements, elements)
@settings(max_examples=60, deadline=None)
def test_extension_field_axioms(x, y, z):
    tw = make_tower(7, 6, 3)
    mul, add = tw.ext_mul, tw.ext_add
    assert mul(x, y) == mul(y, x)
    assert mul(mul(x, y), z) == mul(x, mul(y, z))
    assert mul(x, add(y, z)) == add(mul(x, y), mul(x, z))
    if not tw.ext_is_zero(x):
        assert mul(x, tw.ext_inv(x)) == tw.ext_one()


@given(st.integers(0, 7**5 - 1), st.integers(0, 7**5 - 1))
@settings(max_examples=60, deadline=None)
def test_polyfield_inverse_and_commutativity(a, b):
    K = PolyField(7, smallest_irreducible(7, 5))
    x = tuple((a // 7**i) % 7 for i in range(5))
    y = tuple((b // 7**i) % 7 for i in range(5))
    assert K.mul(x, y) == K.mul(y, x)
    if not K.is_zero(x):
        assert K.mul(x, K.inv(x)) == K.one


def test_subfield_membership_is_closed_under_products():
    tw = make_tower(7, 6, 3)
    rng = random.Random(3)
    for w in (1, 2, 3, 6):
        for _ in range(10):
            x, y = tw.ext_random(rng, w), tw.ext_random(rng, w)
            assert tw.ext_in_subfield(tw.ext_mul(x, y), w)
