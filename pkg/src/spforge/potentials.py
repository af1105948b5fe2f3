"""Potentials, cyclic derivatives and truncated Jacobian algebras.

A potential is stored in cyclic normal form: every term is a cyclic path with
trailing slot 1, rotated to the smallest rotation under the canonical path
order.  Rotating a trailing-1 cycle costs no scalar; only absorbing a
nontrivial trailing slot into the leading one does.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import NotCyclic, NotThroughK, UnknownArrow
from .pathalg import Elem, Path, PathAlgebra, _add_into, _mul_terms, path_key

Bitensor = dict  # (Path, Path) -> scalar


def _absorb_trailing(alg: PathAlgebra, p: Path):
    """ω_0 a_1 ... a_ℓ ω_ℓ  ~  f(ω_ℓ, ω_0) · m(ω_ℓ, ω_0) a_1 ... a_ℓ."""
    if p.slots[-1] == 0:
        return alg.F.one, p
    f, m = alg.tower.eig_mul(p.slots[-1], p.slots[0])
    return f, Path(p.head, p.tail, p.arrows, (m,) + p.slots[1:-1] + (0,))


def rotations(alg: PathAlgebra, p: Path) -> list[Path]:
    """All rotations of a trailing-1 cyclic path (rotation r starts at a_{r+1})."""
    ell = len(p.arrows)
    out = []
    ends = alg.ends
    body = p.slots[:-1]
    for r in range(ell):
        arrows = p.arrows[r:] + p.arrows[:r]
        slots = body[r:] + body[:r] + (0,)
        v = ends[arrows[0]][1]
        out.append(Path(v, v, arrows, slots))
    return out


def canonical_rotation(alg: PathAlgebra, p: Path, avoid: int | None = None) -> tuple[object, Path]:
    """(scalar, representative) for a cyclic path; ``avoid`` bars a base vertex."""
    f, q = _absorb_trailing(alg, p)
    rots = rotations(alg, q)
    if avoid is not None:
        rots = [r for r in rots if r.head != avoid] or rots
    return f, min(rots, key=path_key)


def normalize_cyclic(x: Elem, avoid: int | None = None) -> Elem:
    """Cyclic normal form of an element supported on cyclic paths."""
    alg = x.alg
    F = alg.F
    acc: dict = {}
    for p, c in x.terms.items():
        if not p.is_cyclic():
            raise NotCyclic(f"term {p} is not a cyclic path")
        f, q = canonical_rotation(alg, p, avoid)
        _add_into(F, acc, {q: F.mul(c, f)})
    return Elem(alg, acc)


def cyclically_equivalent(x: Elem, y: Elem) -> bool:
    return normalize_cyclic(x - y).is_zero()


def is_potential(x: Elem) -> bool:
    return all(p.is_cyclic() for p in x.terms)


def _check_arrow(alg: PathAlgebra, a: str):
    if a not in alg.ends:
        raise UnknownArrow(f"unknown arrow {a}")


def cyc_deriv(S: Elem, a: str) -> Elem:
    """Cyclic derivative ∂_a, extended linearly (non-cyclic paths give 0)."""
    alg = S.alg
    _check_arrow(alg, a)
    F = alg.F
    t_a, h_a = alg.ends[a]
    table = alg.tower._eig_table
    acc: dict = {}
    for p, c in S.terms.items():
        if not p.arrows or p.head != p.tail:
            continue
        A, W = p.arrows, p.slots
        ell = len(A)
        for i in range(ell):
            if A[i] != a:
                continue
            f, m = table[W[ell]][W[0]]
            q = Path(t_a, h_a, A[i + 1 :] + A[:i], W[i + 1 : ell] + (m,) + W[1 : i + 1])
            _add_into(F, acc, {q: F.mul(c, f)})
    return Elem(alg, acc)


def delta(h: Elem, a: str) -> Bitensor:
    """Δ_a: split every path at each occurrence of a into (left ⊗ right)."""
    alg = h.alg
    _check_arrow(alg, a)
    F = alg.F
    t_a, h_a = alg.ends[a]
    ends = alg.ends
    out: dict = {}
    for p, c in h.terms.items():
        A, W = p.arrows, p.slots
        for i, x in enumerate(A):
            if x != a:
                continue
            u = Path(p.head, h_a, A[:i], W[: i + 1])
            v_arrows = A[i + 1 :]
            v = Path(t_a, ends[v_arrows[-1]][0] if v_arrows else t_a, v_arrows, W[i + 1 :])
            key = (u, v)
            s = F.add(out[key], c) if key in out else c
            if F.is_zero(s):
                out.pop(key, None)
            else:
                out[key] = s
    return out


def box(bt: Bitensor, g: Elem) -> Elem:
    """(u ⊗ v) □ g = v g u, extended linearly."""
    alg = g.alg
    F = alg.F
    N = alg.trunc
    acc: dict = {}
    for (u, v), c in bt.items():
        prod = _mul_terms(alg, _mul_terms(alg, {v: c}, g.terms, N), {u: F.one}, N)
        _add_into(F, acc, prod)
    return Elem(alg, acc)


def second_deriv(S: Elem, b: str, omega: int, a: str) -> Elem:
    """∂_{b ω a}: remove each factor b ω a (a then b through k) from the cycles."""
    alg = S.alg
    _check_arrow(alg, a)
    _check_arrow(alg, b)
    t_a, h_a = alg.ends[a]
    t_b, h_b = alg.ends[b]
    if h_a != t_b:
        raise NotThroughK(f"{a} does not end where {b} starts")
    if not alg.slot_ok(h_a, omega):
        raise NotThroughK(f"v^{omega} is not in the eigenbasis at vertex {h_a}")
    F = alg.F
    table = alg.tower._eig_table
    acc: dict = {}
    for p, c in S.terms.items():
        if not p.is_cyclic():
            continue
        ell = len(p.arrows)
        f, m = table[p.slots[-1]][p.slots[0]]
        C = p.arrows
        Wt = p.slots[1:ell] + (m,)  # slot after C[i]
        for i in range(ell):
            if C[i] != b or Wt[i] != omega or C[(i + 1) % ell] != a:
                continue
            arrows = tuple(C[(i + s) % ell] for s in range(2, ell))
            slots = tuple(Wt[(i + s) % ell] for s in range(1, ell))
            q = Path(t_a, h_b, arrows, slots)
            _add_into(F, acc, {q: F.mul(c, f)})
    return Elem(alg, acc)


# Jacobian algebra -------------------------------------------------------------


class JacobianDim(NamedTuple):
    dim: int
    stabilized: bool


class JacobianData(NamedTuple):
    """Standard-monomial data of the degree-<=N quotient by the Jacobian ideal.

    ``zero_from`` is the first length L whose paths all lie in the ideal; the
    ideal then contains m^L, so the quotient is the whole Jacobian algebra.
    ``leading`` only lists leading paths shorter than L.
    """

    N: int
    total_by_length: list[int]
    leading: frozenset
    quotient_by_length: list[int]
    alg: PathAlgebra
    zero_from: int | None = None

    @property
    def dim(self) -> int:
        return sum(self.quotient_by_length)

    @property
    def stabilized(self) -> bool:
        return self.zero_from is not None

    def restricted_dim(self, exclude: set[int]) -> int:
        """Dimension of e P e with e the sum of idempotents outside ``exclude``."""
        top = self.N if self.zero_from is None else min(self.N, self.zero_from - 1)
        total = _count_paths_between(self.alg, top, exclude)
        lead = sum(
            1
            for p in self.leading
            if len(p.arrows) <= top and p.head not in exclude and p.tail not in exclude
        )
        return total - lead


def _count_matrix_powers(alg: PathAlgebra, N: int) -> list[np.ndarray]:
    q = alg.quiver
    n = q.n
    d = [int(w) for w in q.weights]
    W = np.zeros((n, n), dtype=object)
    for a in q.arrows:
        W[a.head - 1, a.tail - 1] += d[a.tail - 1]
    cur = np.diag(np.array(d, dtype=object))
    out = [cur]
    for _ in range(N):
        cur = cur.dot(W)
        out.append(cur)
    return out


def _count_paths_between(alg: PathAlgebra, N: int, exclude: set[int]) -> int:
    keep = [i - 1 for i in alg.quiver.vertices if i not in exclude]
    total = 0
    for C in _count_matrix_powers(alg, N):
        total += int(sum(C[i, j] for i in keep for j in keep))
    return total


def _leading_paths(S: Elem, N: int) -> dict:
    """Leading paths (shortest first) of the ideal generated by all ∂_a S in A / m^{N+1}."""
    alg = S.alg.with_trunc(N)
    S = alg.rehome(S) if S.alg.trunc >= N else Elem(alg, dict(S.terms))
    F = alg.F
    q = alg.quiver
    left_letters: dict[int, list[dict]] = {}
    right_letters: dict[int, list[dict]] = {}
    for v in q.vertices:
        for j in alg.basis_exponents(v):
            if j:
                left_letters.setdefault(v, []).append({Path(v, v, (), (j,)): F.one})
                right_letters.setdefault(v, []).append({Path(v, v, (), (j,)): F.one})
    for x in q.arrows:
        for j in alg.basis_exponents(x.head):
            left_letters.setdefault(x.tail, []).append({Path(x.head, x.tail, (x.name,), (j, 0)): F.one})
        for j in alg.basis_exponents(x.tail):
            right_letters.setdefault(x.head, []).append({Path(x.head, x.tail, (x.name,), (0, j)): F.one})

    pivots: dict[Path, dict] = {}
    keycache: dict[Path, tuple] = {}

    def key(p):
        k = keycache.get(p)
        if k is None:
            k = keycache[p] = path_key(p)
        return k

    def reduce(vec: dict):
        vec = dict(vec)
        while vec:
            lead = min(vec, key=key)
            piv = pivots.get(lead)
            if piv is None:
                inv = F.inv(vec[lead])
                return lead, {p: F.mul(inv, c) for p, c in vec.items()}
            _add_into(F, vec, piv, F.neg(vec[lead]))
        return None, None

    queue: list[dict] = []
    for a in q.arrows:
        g = cyc_deriv(S, a.name).terms
        if not g:
            continue
        t_a, h_a = a.tail, a.head
        for w in alg.basis_exponents(t_a):
            left = {Path(t_a, t_a, (), (w,)): F.one}
            for w2 in alg.basis_exponents(h_a):
                right = {Path(h_a, h_a, (), (w2,)): F.one}
                queue.append(_mul_terms(alg, _mul_terms(alg, left, g, N), right, N))
    while queue:
        vec = queue.pop()
        if not vec:
            continue
        lead, red = reduce(vec)
        if lead is None:
            continue
        pivots[lead] = red
        heads = {p.head for p in red}
        tails = {p.tail for p in red}
        for h in heads:
            for letter in left_letters.get(h, ()):
                prod = _mul_terms(alg, letter, red, N)
                if prod:
                    queue.append(prod)
        for t in tails:
            for letter in right_letters.get(t, ()):
                prod = _mul_terms(alg, red, letter, N)
                if prod:
                    queue.append(prod)
    return pivots


def jacobian_data(S: Elem, N: int) -> JacobianData:
    """Jacobian quotient data up to length N.

    Leading paths of length <= n do not depend on the truncation as long as it
    is at least n, so the truncation grows one step at a time and stops at the
    first length with nothing left in the quotient.
    """
    alg = S.alg.with_trunc(N)
    totals = [int(C.sum()) for C in _count_matrix_powers(alg, N)]
    pivots: dict = {}
    zero_from = None
    for n in range(1, N + 1):
        pivots = _leading_paths(S, n)
        at_n = sum(1 for p in pivots if len(p.arrows) == n)
        if at_n == totals[n]:
            zero_from = n
            break
    lead_by_len = [0] * (N + 1)
    for p in pivots:
        lead_by_len[len(p.arrows)] += 1
    quotient = [t - l for t, l in zip(totals, lead_by_len)]
    if zero_from is not None:
        quotient[zero_from:] = [0] * (N + 1 - zero_from)
    return JacobianData(N, totals, frozenset(pivots), quotient, alg, zero_from)


def jacobian_dim(S: Elem, N: int) -> JacobianDim:
    """GF(p^m)-dimension of the degree-<=N Jacobian quotient, and whether it stabilized."""
    data = jacobian_data(S, N)
    return JacobianDim(data.dim, data.stabilized)
