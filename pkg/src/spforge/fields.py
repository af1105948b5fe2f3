"""Exact arithmetic in the Kummer tower GF(p) = F ⊂ F_i ⊂ E = F[v]/(v^d - c).

Scalars live in a *base field*: either the prime field GF(p) itself
(:class:`PrimeField`, elements are ints) or a finite extension
K = GF(p)[y]/(g) of coprime degree (:class:`PolyField`, elements are tuples).
Elements of E are dense length-d tuples of base-field scalars, position j
holding the coefficient of v^j.  The power basis {v^j} is an eigenbasis for
the Galois group, so basis products are scalar multiples of basis elements:
v^i v^j = c^{floor((i+j)/d)} v^{(i+j) mod d}.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

from .errors import (
    DivisionByZero,
    NotCoprime,
    NotDivisor,
    NotPrime,
    Reducible,
    RootOfUnityMissing,
)

ExtElem = tuple


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    q = 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        out.append(n)
    return out


class PrimeField:
    """GF(p) with elements represented by ints in [0, p)."""

    degree = 1
    zero = 0
    one = 1

    def __init__(self, p: int):
        self.p = p

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"

    @property
    def order(self) -> int:
        return self.p

    def from_int(self, n: int) -> int:
        return n % self.p

    def add(self, x, y):
        return (x + y) % self.p

    def sub(self, x, y):
        return (x - y) % self.p

    def neg(self, x):
        return -x % self.p

    def mul(self, x, y):
        return x * y % self.p

    def inv(self, x):
        if x % self.p == 0:
            raise DivisionByZero("inverse of 0 in GF(%d)" % self.p)
        return pow(x, -1, self.p)

    def is_zero(self, x) -> bool:
        return x == 0

    def random(self, rng: random.Random):
        return rng.randrange(self.p)

    def elements(self) -> Iterator[int]:
        return iter(range(self.p))

    def fmt(self, x) -> str:
        return str(x)

    def embed_prime(self, x: int):
        return x % self.p


def _poly_trim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mulmod_int(a: Sequence[int], b: Sequence[int], g: Sequence[int], p: int) -> list[int]:
    """Product of a and b modulo the monic polynomial g over GF(p)."""
    m = len(g) - 1
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for k in range(len(prod) - 1, m - 1, -1):
        t = prod[k]
        if t:
            for s in range(m + 1):
                prod[k - m + s] = (prod[k - m + s] - t * g[s]) % p
    return _poly_trim(prod[:m])


def _poly_mod_int(a: list[int], g: Sequence[int], p: int) -> list[int]:
    a = list(a)
    dg = len(g) - 1
    inv_lead = pow(g[-1], -1, p)
    while len(_poly_trim(a)) - 1 >= dg:
        t = a[-1] * inv_lead % p
        shift = len(a) - 1 - dg
        for s in range(dg + 1):
            a[shift + s] = (a[shift + s] - t * g[s]) % p
    return a


def _poly_gcd_int(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _poly_trim(list(a)), _poly_trim(list(b))
    while b:
        a, b = b, _poly_trim(_poly_mod_int(a, b, p))
    if a:
        inv = pow(a[-1], -1, p)
        a = [x * inv % p for x in a]
    return a


def is_irreducible_mod_p(g: Sequence[int], p: int) -> bool:
    """Rabin-style test: monic g of degree m has no factor of degree <= m/2."""
    m = len(g) - 1
    if m <= 0:
        return False
    if m == 1:
        return True
    x = [0, 1]
    power = x
    for _ in range(1, m // 2 + 1):
        # power <- power^p mod g
        result = [1]
        base = power
        e = p
        while e:
            if e & 1:
                result = _poly_mulmod_int(result, base, g, p)
            base = _poly_mulmod_int(base, base, g, p)
            e >>= 1
        power = result
        diff = list(power) + [0] * max(0, 2 - len(power))
        diff[1] = (diff[1] - 1) % p
        if len(_poly_gcd_int(list(g), _poly_trim(diff), p)) != 1:
            return False
    return True


def smallest_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree m over GF(p).

    Candidates y^m + a_{m-1} y^{m-1} + ... + a_0 are ordered lexicographically
    by (a_{m-1}, ..., a_0).  Returned low-to-high, including the leading 1.
    """
    for n in range(p**m):
        digits = []
        for _ in range(m):
            digits.append(n % p)
            n //= p
        high_first = digits[::-1]  # a_{m-1} ... a_0 read as a base-p numeral
        coeffs = tuple(reversed(high_first)) + (1,)
        if coeffs[0] == 0 and m > 1:
            continue
        if is_irreducible_mod_p(coeffs, p):
            return coeffs
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class PolyField:
    """GF(p^m) = GF(p)[y]/(g) with elements as length-m coefficient tuples."""

    def __init__(self, p: int, modulus: Sequence[int]):
        self.p = p
        self.modulus = tuple(int(x) % p for x in modulus)
        self.degree = len(self.modulus) - 1
        self.zero = (0,) * self.degree
        self.one = (1,) + (0,) * (self.degree - 1)

    def __eq__(self, other):
        return isinstance(other, PolyField) and (other.p, other.modulus) == (self.p, self.modulus)

    def __hash__(self):
        return hash(("GFq", self.p, self.modulus))

    def __repr__(self):
        return f"GF({self.p}^{self.degree})"

    @property
    def order(self) -> int:
        return self.p**self.degree

    def from_int(self, n: int):
        return (n % self.p,) + (0,) * (self.degree - 1)

    embed_prime = from_int

    def add(self, x, y):
        p = self.p
        return tuple((a + b) % p for a, b in zip(x, y))

    def sub(self, x, y):
        p = self.p
        return tuple((a - b) % p for a, b in zip(x, y))

    def neg(self, x):
        p = self.p
        return tuple(-a % p for a in x)

    def mul(self, x, y):
        r = _poly_mulmod_int(x, y, self.modulus, self.p)
        return tuple(r) + (0,) * (self.degree - len(r))

    def inv(self, x):
        if not any(x):
            raise DivisionByZero(f"inverse of 0 in {self!r}")
        # x^(q-2) is the inverse in a field of order q
        return self.pow(x, self.order - 2)

    def pow(self, x, e: int):
        result = self.one
        base = x
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def is_zero(self, x) -> bool:
        return not any(x)

    def random(self, rng: random.Random):
        return tuple(rng.randrange(self.p) for _ in range(self.degree))

    def elements(self):
        for n in range(self.order):
            digits = []
            for _ in range(self.degree):
                digits.append(n % self.p)
                n //= self.p
            yield tuple(digits)

    def fmt(self, x) -> str:
        return "(" + ",".join(str(a) for a in x) + ")"


BaseField = PrimeField | PolyField  # type: ignore[operator]


def binomial_irreducible(p: int, d: int, c: int) -> tuple[bool, str]:
    """Irreducibility of X^d - c over GF(p), assuming p = 1 mod d.

    Returns (ok, reason); reason names the failing prime q or the 4 | d case.
    """
    c %= p
    if c == 0:
        return False, "c = 0"
    for q in prime_factors(d):
        if pow(c, (p - 1) // q, p) == 1:
            return False, f"c is a {q}-th power mod {p}"
    if d % 4 == 0:
        # c in -4 (F^x)^4  <=>  -c/4 is a fourth power
        t = (-c * pow(4, -1, p)) % p
        if pow(t, (p - 1) // 4, p) == 1:
            return False, "c lies in -4*(F^x)^4"
    return True, ""


def default_c(p: int, d: int) -> int:
    """Smallest c >= 2 making X^d - c irreducible over GF(p)."""
    for c in range(2, p):
        if binomial_irreducible(p, d, c)[0]:
            return c
    raise Reducible(f"no c in [2, {p}) makes X^{d} - c irreducible mod {p}")


@dataclass(frozen=True, eq=False)
class FieldTower:
    """The data (p, d, c, base) of F ⊂ F_i ⊂ E = F[v]/(v^d - c).

    ``base`` is the scalar field: GF(p) by default, GF(p^m) after
    :func:`extend_base`.  Instances are immutable.
    """

    p: int
    d: int
    c: int
    base: PrimeField | PolyField = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.base is None:
            object.__setattr__(self, "base", PrimeField(self.p))

    def __eq__(self, other):
        return (
            isinstance(other, FieldTower)
            and (self.p, self.d, self.c) == (other.p, other.d, other.c)
            and self.base == other.base
        )

    def __hash__(self):
        return hash((self.p, self.d, self.c, self.base))

    def __repr__(self):
        return f"FieldTower(p={self.p}, d={self.d}, c={self.c}, base={self.base!r})"

    # eigenbasis -----------------------------------------------------------

    @cached_property
    def _eig_table(self):
        F = self.base
        cpow = [F.from_int(pow(self.c, k, self.p)) for k in range(3)]
        d = self.d
        return tuple(
            tuple((cpow[(i + j) // d], (i + j) % d) for j in range(d)) for i in range(d)
        )

    @cached_property
    def c_inv(self):
        return self.base.from_int(pow(self.c, -1, self.p))

    def eig_mul(self, j1: int, j2: int):
        """v^{j1} v^{j2} = f v^m; returns (f, m) with f a base-field scalar."""
        return self._eig_table[j1][j2]

    def eig_inv(self, j: int):
        """(v^j)^{-1} = f v^m; returns (f, m)."""
        if j % self.d == 0:
            return self.base.one, 0
        return self.c_inv, self.d - j

    def step(self, weight: int) -> int:
        """Exponent step d/d_i of the eigenbasis B_i of F_i."""
        if weight <= 0 or self.d % weight:
            raise NotDivisor(f"weight {weight} does not divide d={self.d}")
        return self.d // weight

    def subfield_basis(self, weight: int) -> list[int]:
        s = self.step(weight)
        return list(range(0, self.d, s))

    def in_subfield(self, j: int, weight: int) -> bool:
        return j % self.step(weight) == 0

    # dense elements of E ----------------------------------------------------

    def ext_zero(self) -> ExtElem:
        return (self.base.zero,) * self.d

    def ext_one(self) -> ExtElem:
        return self.ext_monomial(0)

    def ext_monomial(self, j: int, coeff=None) -> ExtElem:
        F = self.base
        out = [F.zero] * self.d
        out[j % self.d] = F.one if coeff is None else coeff
        return tuple(out)

    def ext_from_base(self, x) -> ExtElem:
        return self.ext_monomial(0, x)

    def ext_from_ints(self, coeffs: Sequence[int]) -> ExtElem:
        F = self.base
        out = [F.from_int(a) for a in coeffs] + [F.zero] * (self.d - len(coeffs))
        return tuple(out[: self.d])

    def ext_add(self, x: ExtElem, y: ExtElem) -> ExtElem:
        add = self.base.add
        return tuple(add(a, b) for a, b in zip(x, y))

    def ext_sub(self, x: ExtElem, y: ExtElem) -> ExtElem:
        sub = self.base.sub
        return tuple(sub(a, b) for a, b in zip(x, y))

    def ext_neg(self, x: ExtElem) -> ExtElem:
        neg = self.base.neg
        return tuple(neg(a) for a in x)

    def ext_scale(self, s, x: ExtElem) -> ExtElem:
        mul = self.base.mul
        return tuple(mul(s, a) for a in x)

    def ext_mul(self, x: ExtElem, y: ExtElem) -> ExtElem:
        F = self.base
        out = [F.zero] * self.d
        table = self._eig_table
        for i, a in enumerate(x):
            if F.is_zero(a):
                continue
            row = table[i]
            for j, b in enumerate(y):
                if F.is_zero(b):
                    continue
                f, m = row[j]
                out[m] = F.add(out[m], F.mul(F.mul(a, b), f))
        return tuple(out)

    def ext_is_zero(self, x: ExtElem) -> bool:
        return all(self.base.is_zero(a) for a in x)

    def ext_pow(self, x: ExtElem, e: int) -> ExtElem:
        result = self.ext_one()
        base = x
        while e:
            if e & 1:
                result = self.ext_mul(result, base)
            base = self.ext_mul(base, base)
            e >>= 1
        return result

    def ext_inv(self, x: ExtElem) -> ExtElem:
        """Inverse by the extended Euclidean algorithm against v^d - c."""
        if self.ext_is_zero(x):
            raise DivisionByZero("inverse of 0 in E")
        F = self.base
        modulus = [F.neg(F.from_int(self.c))] + [F.zero] * (self.d - 1) + [F.one]
        r0, r1 = _gtrim(F, modulus), _gtrim(F, list(x))
        s0, s1 = [], [F.one]
        while r1:
            q, r = _gdivmod(F, r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _gsub(F, s0, _gmul(F, q, s1))
        # r0 is a nonzero constant since X^d - c is irreducible
        if len(r0) != 1:
            raise Reducible("v^d - c is not irreducible over the base")
        inv_c = F.inv(r0[0])
        coeffs = [F.mul(inv_c, a) for a in s0] + [F.zero] * self.d
        return tuple(coeffs[: self.d])

    def ext_in_subfield(self, x: ExtElem, weight: int) -> bool:
        s = self.step(weight)
        return all(self.base.is_zero(a) for j, a in enumerate(x) if j % s)

    def ext_random(self, rng: random.Random, weight: int | None = None) -> ExtElem:
        F = self.base
        s = 1 if weight is None else self.step(weight)
        return tuple(F.random(rng) if j % s == 0 else F.zero for j in range(self.d))

    def ext_embed(self, x: ExtElem, target: "FieldTower") -> ExtElem:
        """Embed an element of this tower coefficientwise into ``target``."""
        if self.base == target.base:
            return x
        if not isinstance(self.base, PrimeField):
            raise NotCoprime("can only embed from a prime base")
        return tuple(target.base.from_int(a) for a in x)

    def fmt_ext(self, x: ExtElem) -> str:
        F = self.base
        parts = []
        for j, a in enumerate(x):
            if F.is_zero(a):
                continue
            mono = "1" if j == 0 else ("v" if j == 1 else f"v^{j}")
            if a == F.one:
                parts.append(mono)
            else:
                parts.append(f"{F.fmt(a)}*{mono}" if j else F.fmt(a))
        return " + ".join(parts) if parts else "0"

    @property
    def base_degree(self) -> int:
        return self.base.degree


def _gtrim(F, a: list) -> list:
    a = list(a)
    while a and F.is_zero(a[-1]):
        a.pop()
    return a


def _gsub(F, a: list, b: list) -> list:
    n = max(len(a), len(b))
    a = a + [F.zero] * (n - len(a))
    b = b + [F.zero] * (n - len(b))
    return _gtrim(F, [F.sub(x, y) for x, y in zip(a, b)])


def _gmul(F, a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [F.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = F.add(out[i + j], F.mul(x, y))
    return _gtrim(F, out)


def _gdivmod(F, a: list, b: list):
    a = _gtrim(F, a)
    q = [F.zero] * max(0, len(a) - len(b) + 1)
    inv_lead = F.inv(b[-1])
    while len(a) >= len(b) and a:
        t = F.mul(a[-1], inv_lead)
        shift = len(a) - len(b)
        q[shift] = t
        for i, y in enumerate(b):
            a[shift + i] = F.sub(a[shift + i], F.mul(t, y))
        a = _gtrim(F, a)
    return _gtrim(F, q), a


def make_tower(p: int, d: int, c: int | None = None) -> FieldTower:
    """Validated tower GF(p) ⊂ E = GF(p)[v]/(v^d - c).

    With ``c`` omitted the smallest admissible c >= 2 is chosen.
    """
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if d < 1:
        raise NotDivisor(f"degree d={d} must be positive")
    if (p - 1) % d:
        raise RootOfUnityMissing(f"p={p} is not 1 mod d={d}")
    if c is None:
        c = default_c(p, d)
    c %= p
    if d > 1:
        ok, reason = binomial_irreducible(p, d, c)
        if not ok:
            raise Reducible(f"X^{d} - {c} is reducible over GF({p}): {reason}")
    elif c == 0:
        raise Reducible("c must be nonzero")
    return FieldTower(p, d, c)


def subfield_basis(tower: FieldTower, weight: int) -> list[int]:
    """Exponents of the eigenbasis B_i of the subfield F_i of degree ``weight``."""
    return tower.subfield_basis(weight)


def extend_base(tower: FieldTower, m: int) -> FieldTower:
    """Same (p, d, c) over the base K = GF(p^m); needs gcd(m, d) = 1."""
    if m < 1 or math.gcd(m, tower.d) != 1:
        raise NotCoprime(f"gcd({m}, {tower.d}) != 1")
    if m == 1:
        return tower
    if not isinstance(tower.base, PrimeField):
        raise NotCoprime("base is already extended")
    g = smallest_irreducible(tower.p, m)
    return FieldTower(tower.p, tower.d, tower.c, PolyField(tower.p, g))


def smallest_prime_1_mod(d: int) -> int:
    p = d + 1
    while not is_prime(p):
        p += d
    return p
