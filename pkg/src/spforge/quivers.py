"""Weighted quivers, skew-symmetrizable matrices and their mutations.

Vertices are numbered 1..n as in the usual matrix conventions; the matrix
entry b_ij therefore lives at ``B[i-1][j-1]``.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from functools import cached_property, reduce
from typing import Iterable, Sequence

import numpy as np

from .errors import Has2Cycle, InputError, NotSkewSymmetrizable


@dataclass(frozen=True)
class Arrow:
    name: str
    tail: int
    head: int


def star(name: str) -> str:
    """Reverse-arrow name: a -> a*, a* -> a."""
    return name[:-1] if name.endswith("*") else name + "*"


def composite_name(b: str, exponent: int, a: str) -> str:
    """Name of the composite arrow [b v^exponent a] (a first, then b)."""
    return f"[{b}.{a}]" if exponent == 0 else f"[{b}.v^{exponent}.{a}]"


@dataclass(frozen=True)
class WeightedQuiver:
    weights: tuple[int, ...]
    arrows: tuple[Arrow, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        object.__setattr__(self, "arrows", tuple(self.arrows))
        n = len(self.weights)
        if any(w < 1 for w in self.weights):
            raise InputError("vertex weights must be positive")
        seen = set()
        for a in self.arrows:
            if not (1 <= a.tail <= n and 1 <= a.head <= n):
                raise InputError(f"arrow {a.name} has an endpoint outside 1..{n}")
            if a.tail == a.head:
                raise InputError(f"arrow {a.name} is a loop")
            if a.name in seen:
                raise InputError(f"duplicate arrow name {a.name}")
            seen.add(a.name)

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def weight(self, i: int) -> int:
        return self.weights[i - 1]

    @cached_property
    def arrow_map(self) -> dict[str, Arrow]:
        return {a.name: a for a in self.arrows}

    def arrow(self, name: str) -> Arrow:
        return self.arrow_map[name]

    @property
    def arrow_names(self) -> list[str]:
        return [a.name for a in self.arrows]

    @property
    def strongly_primitive(self) -> bool:
        w = self.weights
        return all(math.gcd(w[i], w[j]) == 1 for i in range(len(w)) for j in range(i + 1, len(w)))

    def arrows_between(self, tail: int, head: int) -> list[Arrow]:
        return [a for a in self.arrows if a.tail == tail and a.head == head]

    def incoming(self, k: int) -> list[Arrow]:
        return [a for a in self.arrows if a.head == k]

    def outgoing(self, k: int) -> list[Arrow]:
        return [a for a in self.arrows if a.tail == k]

    def count_matrix(self) -> np.ndarray:
        """Entry [i-1, j-1] counts arrows j -> i."""
        m = np.zeros((self.n, self.n), dtype=np.int64)
        for a in self.arrows:
            m[a.head - 1, a.tail - 1] += 1
        return m

    def two_cycle_pairs(self) -> list[tuple[int, int]]:
        m = self.count_matrix()
        return [(i + 1, j + 1) for i in range(self.n) for j in range(i + 1, self.n) if m[i, j] and m[j, i]]

    def is_2acyclic(self) -> bool:
        return not self.two_cycle_pairs()

    def lcm_weight(self) -> int:
        return reduce(lambda x, y: x * y // math.gcd(x, y), self.weights, 1)

    def replace_arrows(self, arrows: Iterable[Arrow]) -> "WeightedQuiver":
        return WeightedQuiver(self.weights, tuple(arrows))

    def isomorphic_ignoring_names(self, other: "WeightedQuiver") -> bool:
        return self.weights == other.weights and np.array_equal(self.count_matrix(), other.count_matrix())


@dataclass(frozen=True)
class ExchangeMatrix:
    B: tuple[tuple[int, ...], ...]
    D: tuple[int, ...]

    def __post_init__(self):
        B = tuple(tuple(int(x) for x in row) for row in self.B)
        D = tuple(int(x) for x in self.D)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "D", D)
        n = len(D)
        if len(B) != n or any(len(row) != n for row in B):
            raise NotSkewSymmetrizable("B must be square with the size of D")
        if any(x <= 0 for x in D):
            raise NotSkewSymmetrizable("skew-symmetrizer entries must be positive")
        for i in range(n):
            for j in range(n):
                if D[i] * B[i][j] != -D[j] * B[j][i]:
                    raise NotSkewSymmetrizable(f"DB is not skew-symmetric at ({i + 1},{j + 1})")

    @classmethod
    def from_array(cls, B, D: Sequence[int]) -> "ExchangeMatrix":
        return cls(tuple(tuple(int(x) for x in row) for row in np.asarray(B)), tuple(D))

    @property
    def n(self) -> int:
        return len(self.D)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.B, dtype=np.int64).reshape(self.n, self.n)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.B[i - 1][j - 1]


def composite_arrow_count(di: int, dk: int, dj: int) -> int:
    """Number of composite arrows j -> i created by a pair j -> k -> i."""
    num = math.gcd(di, dj) * dk
    den = math.gcd(di, dk) * math.gcd(dk, dj)
    assert num % den == 0, "composite arrow count must be integral"
    return num // den


def mutate_matrix(B: ExchangeMatrix, k: int) -> ExchangeMatrix:
    """Matrix mutation at vertex k (1-based)."""
    b = B.array
    n = B.n
    if not 1 <= k <= n:
        raise InputError(f"vertex {k} outside 1..{n}")
    kk = k - 1
    col = b[:, kk]
    row = b[kk, :]
    out = b + (np.outer(col, np.abs(row)) + np.outer(np.abs(col), row)) // 2
    out[kk, :] = -row
    out[:, kk] = -col
    return ExchangeMatrix.from_array(out, B.D)


def matrix_to_wq(B: ExchangeMatrix, names: dict[tuple[int, int], Sequence[str]] | None = None) -> WeightedQuiver:
    """Weighted quiver with gcd(d_i,d_j) b_ij / d_j arrows j -> i for b_ij > 0."""
    D = B.D
    n = B.n
    arrows = []
    for j in range(1, n + 1):
        for i in range(1, n + 1):
            bij = B[i, j]
            if bij <= 0:
                continue
            g = math.gcd(D[i - 1], D[j - 1])
            num = g * bij
            if num % D[j - 1]:
                raise NotSkewSymmetrizable(f"non-integral arrow count at ({i},{j})")
            cnt = num // D[j - 1]
            given = (names or {}).get((j, i))
            for t in range(cnt):
                if given is not None:
                    nm = given[t]
                else:
                    nm = f"a{j}_{i}" if cnt == 1 else f"a{j}_{i}_{t + 1}"
                arrows.append(Arrow(nm, j, i))
    return WeightedQuiver(D, tuple(arrows))


def wq_to_matrix(Q: WeightedQuiver) -> ExchangeMatrix:
    """Inverse of :func:`matrix_to_wq` on 2-acyclic weighted quivers."""
    pairs = Q.two_cycle_pairs()
    if pairs:
        raise Has2Cycle(f"2-cycles between vertex pairs {pairs}")
    m = Q.count_matrix()
    d = Q.weights
    n = Q.n
    out = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            net = int(m[i, j] - m[j, i])
            out[i, j] = net * d[j] // math.gcd(d[i], d[j])
    return ExchangeMatrix.from_array(out, d)


def _cancel_two_cycles(arrows: list[Arrow]) -> list[Arrow]:
    """Remove a maximal set of disjoint 2-cycles, earliest-created arrows first."""
    by_pair: dict[tuple[int, int], list[int]] = {}
    for idx, a in enumerate(arrows):
        by_pair.setdefault((a.tail, a.head), []).append(idx)
    drop = set()
    for (t, h) in sorted({(min(a.tail, a.head), max(a.tail, a.head)) for a in arrows}):
        fwd = by_pair.get((t, h), [])
        bwd = by_pair.get((h, t), [])
        n = min(len(fwd), len(bwd))
        drop.update(fwd[:n])
        drop.update(bwd[:n])
    return [a for idx, a in enumerate(arrows) if idx not in drop]


def premutate_wq(Q: WeightedQuiver, k: int) -> tuple[list[Arrow], list[Arrow]]:
    """Steps 1 and 2 of weighted-quiver mutation, without 2-cycle removal.

    Returns (kept and reversed arrows in original order, composite arrows).
    """
    if not 1 <= k <= Q.n:
        raise InputError(f"vertex {k} outside 1..{Q.n}")
    d = Q.weights
    dk = d[k - 1]
    lcm = Q.lcm_weight()
    base = []
    for a in Q.arrows:
        if a.head == k or a.tail == k:
            base.append(Arrow(star(a.name), a.head, a.tail))
        else:
            base.append(a)
    composites = []
    for a in Q.incoming(k):
        for b in Q.outgoing(k):
            j, i = a.tail, b.head
            cnt = composite_arrow_count(d[i - 1], dk, d[j - 1])
            for t in range(cnt):
                if cnt == dk and Q.strongly_primitive:
                    nm = composite_name(b.name, t * (lcm // dk), a.name)
                else:
                    nm = f"[{b.name}.#{t}.{a.name}]"
                composites.append(Arrow(nm, j, i))
    return base, composites


def mutate_wq(Q: WeightedQuiver, k: int) -> WeightedQuiver:
    """Weighted-quiver mutation at k: composites, reversal, 2-cycle removal."""
    pairs = Q.two_cycle_pairs()
    if pairs:
        raise Has2Cycle(f"2-cycles between vertex pairs {pairs}")
    base, composites = premutate_wq(Q, k)
    return WeightedQuiver(Q.weights, tuple(_cancel_two_cycles(base + composites)))


def counter_of_arrows(Q: WeightedQuiver) -> Counter:
    return Counter((a.tail, a.head) for a in Q.arrows)
