"""Unfoldings of skew-symmetrizable matrices and composite mutations.

The index set of C is the union of consecutive ranges E_1, ..., E_n of
sizes e_1, ..., e_n.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (
    BadParams,
    DiagonalBlockNonzero,
    InternalError,
    NotAnUnfolding,
    NotDivisible,
    UnexpectedlyClean,
)
from .quivers import ExchangeMatrix, mutate_matrix


def block_ranges(e) -> list[range]:
    out, start = [], 0
    for size in e:
        out.append(range(start, start + size))
        start += size
    return out


@dataclass(frozen=True, eq=False)
class Unfolding:
    base: ExchangeMatrix
    e: tuple[int, ...]
    C: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "e", tuple(int(x) for x in self.e))
        object.__setattr__(self, "C", np.asarray(self.C, dtype=np.int64))

    @property
    def blocks(self) -> list[range]:
        return block_ranges(self.e)

    def block(self, i: int, j: int) -> np.ndarray:
        """The E_i x E_j block (1-based)."""
        E = self.blocks
        return self.C[np.ix_(list(E[i - 1]), list(E[j - 1]))]


def check_unfolding(u: Unfolding) -> list[str]:
    """All violations of the unfolding conditions (empty when clean)."""
    B = u.base.array
    n = u.base.n
    e = u.e
    out = []
    if len(e) != n or min(e, default=1) < 1:
        return [f"need {n} positive block sizes, got {e}"]
    size = sum(e)
    C = u.C
    if C.shape != (size, size):
        return [f"C must be {size}x{size}, got {C.shape}"]
    if not np.array_equal(C, -C.T):
        bad = np.argwhere(C != -C.T)
        i, j = bad[0]
        out.append(f"C is not skew-symmetric at ({i},{j})")
    for i in range(n):
        for j in range(n):
            if B[i, j] * e[j] != -B[j, i] * e[i]:
                out.append(f"b_{i + 1}{j + 1} e_{j + 1} != -b_{j + 1}{i + 1} e_{i + 1}")
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            blk = u.block(i, j)
            sums = blk.sum(axis=0)
            for col, s in enumerate(sums):
                if s != B[i - 1, j - 1]:
                    out.append(f"block ({i},{j}) column {col} sums to {s}, expected {B[i - 1, j - 1]}")
            if B[i - 1, j - 1] >= 0 and (blk < 0).any():
                out.append(f"block ({i},{j}) has a negative entry although b_{i}{j} >= 0")
    return out


def is_unfolding(u: Unfolding) -> bool:
    return not check_unfolding(u)


def _skew_mutate(C: np.ndarray, k: int) -> np.ndarray:
    col = C[:, k]
    row = C[k, :]
    out = C + (np.outer(col, np.abs(row)) + np.outer(np.abs(col), row)) // 2
    out[k, :] = -row
    out[:, k] = -col
    return out


def composite_mutate(u: Unfolding, k: int, check_order: bool = True) -> Unfolding:
    """μ_k on B and the product of μ_{k̄}, k̄ ∈ E_k, on C."""
    if not 1 <= k <= u.base.n:
        raise BadParams(f"vertex {k} outside 1..{u.base.n}")
    if u.block(k, k).any():
        raise DiagonalBlockNonzero(f"diagonal block E_{k} x E_{k} is nonzero")
    Ek = list(u.blocks[k - 1])
    C = u.C
    for kb in Ek:
        C = _skew_mutate(C, kb)
    if check_order and len(Ek) > 1:
        C2 = u.C
        for kb in reversed(Ek):
            C2 = _skew_mutate(C2, kb)
        if not np.array_equal(C, C2):
            raise InternalError("composite mutation depends on the order of its factors")
    return Unfolding(mutate_matrix(u.base, k), u.e, C)


def construct_divisible(B: ExchangeMatrix, e) -> Unfolding:
    """Constant blocks c_{ī j̄} = b_ij / e_i."""
    e = tuple(int(x) for x in e)
    n = B.n
    if len(e) != n or min(e) < 1:
        raise BadParams("one positive block size per vertex is required")
    b = B.array
    for i in range(n):
        for j in range(n):
            if b[i, j] * e[j] != -b[j, i] * e[i]:
                raise BadParams(f"b_{i + 1}{j + 1} e_{j + 1} != -b_{j + 1}{i + 1} e_{i + 1}")
            if b[i, j] % e[i]:
                raise NotDivisible(f"e_{i + 1} = {e[i]} does not divide b_{i + 1}{j + 1} = {b[i, j]}")
    E = block_ranges(e)
    size = sum(e)
    C = np.zeros((size, size), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            C[np.ix_(list(E[i]), list(E[j]))] = b[i, j] // e[i]
    return Unfolding(B, e, C)


def nonunfoldable_family(a: int, b: int) -> ExchangeMatrix:
    if not 0 < a < b:
        raise BadParams("the family needs 0 < a < b")
    B = ((0, -a, 0, b), (1, 0, -1, 0), (0, a, 0, -b), (-1, 0, 1, 0))
    return ExchangeMatrix(B, (1, a, 1, b))


def family_block_sizes(a: int, b: int, N: int) -> tuple[int, int, int, int]:
    if N % a or N % b:
        raise BadParams(f"N = {N} is not a common multiple of {a} and {b}")
    return (N, N // a, N, N // b)


def _assignment(fn, rows: int) -> np.ndarray:
    """0/1 matrix with a single 1 in each column j, at row fn[j]."""
    M = np.zeros((rows, len(fn)), dtype=np.int64)
    for j, i in enumerate(fn):
        M[i, j] = 1
    return M


def family_candidate(a: int, b: int, N: int, f2, g4, g2, f4) -> Unfolding:
    """Unfolding candidate of the family built from four block assignments.

    f2: E_1 -> E_2 and g4: E_1 -> E_4 give the columns of C_21 and -C_41;
    g2: E_3 -> E_2 and f4: E_3 -> E_4 give the columns of -C_23 and C_43.
    """
    B = nonunfoldable_family(a, b)
    e = family_block_sizes(a, b, N)
    E = block_ranges(e)
    size = sum(e)
    C = np.zeros((size, size), dtype=np.int64)

    def put(i, j, M):
        C[np.ix_(list(E[i - 1]), list(E[j - 1]))] = M
        C[np.ix_(list(E[j - 1]), list(E[i - 1]))] = -M.T

    put(2, 1, _assignment(f2, e[1]))
    put(4, 1, -_assignment(g4, e[3]))
    put(2, 3, -_assignment(g2, e[1]))
    put(4, 3, _assignment(f4, e[3]))
    return Unfolding(B, e, C)


def structured_candidate(a: int, b: int, N: int) -> Unfolding:
    """The candidate whose products C_14 C_43 and C_12 C_23 are block diagonal."""
    f2 = [i // a for i in range(N)]
    g4 = [i // b for i in range(N)]
    return family_candidate(a, b, N, f2, g4, f2, g4)


class ObstructionWitness(NamedTuple):
    positive: tuple[int, int]  # position inside the E_1 x E_3 block
    negative: tuple[int, int]
    block: np.ndarray  # the E_1 x E_3 block of μ_2 μ_4 (C)
    mutated: Unfolding


def _check_family_params(a: int, b: int, N: int):
    if not 0 < a < b:
        raise BadParams("the obstruction needs 0 < a < b")
    if b % a == 0:
        raise BadParams(f"{a} divides {b}; the family may unfold")
    family_block_sizes(a, b, N)


def obstruction_witness(a: int, b: int, N: int, C: Unfolding) -> ObstructionWitness:
    """Mixed signs in the E_1 x E_3 block after composite mutation at 4 then 2."""
    _check_family_params(a, b, N)
    if C.base != nonunfoldable_family(a, b) or C.e != family_block_sizes(a, b, N):
        raise NotAnUnfolding("candidate does not match the family matrix and block sizes")
    bad = check_unfolding(C)
    if bad:
        raise NotAnUnfolding("; ".join(bad))
    if not np.isin(C.C, (-1, 0, 1)).all():
        raise InternalError("an unfolding of the family has an entry outside {-1, 0, 1}")
    mutated = composite_mutate(composite_mutate(C, 4), 2)
    blk = mutated.block(1, 3)
    pos = np.argwhere(blk > 0)
    neg = np.argwhere(blk < 0)
    if not len(pos) or not len(neg):
        raise UnexpectedlyClean("the E_1 x E_3 block has no sign clash")
    return ObstructionWitness(tuple(int(x) for x in pos[0]), tuple(int(x) for x in neg[0]), blk, mutated)


def _balanced_maps(n: int, parts: int, fiber: int):
    """All maps range(n) -> range(parts) whose fibers all have size ``fiber``."""
    counts = [0] * parts
    cur = [0] * n

    def rec(i):
        if i == n:
            yield tuple(cur)
            return
        for v in range(parts):
            if counts[v] < fiber:
                counts[v] += 1
                cur[i] = v
                yield from rec(i + 1)
                counts[v] -= 1

    yield from rec(0)


class SearchReport(NamedTuple):
    examined: int
    counterexamples: list


def exhaustive_obstruction_search(a: int, b: int, N: int) -> SearchReport:
    """Run obstruction_witness on every structured candidate up to relabeling.

    Any b-to-1 map E_1 -> E_4 is a relabeling of E_1 away from the standard
    one, and likewise for E_3 -> E_4, so g4 and f4 are fixed and f2, g2 range
    over all a-to-1 maps.
    """
    _check_family_params(a, b, N)
    g4 = [i // b for i in range(N)]
    f4 = list(g4)
    maps = list(_balanced_maps(N, N // a, a))
    examined = 0
    bad = []
    for f2, g2 in itertools.product(maps, maps):
        cand = family_candidate(a, b, N, f2, g4, g2, f4)
        examined += 1
        try:
            obstruction_witness(a, b, N, cand)
        except UnexpectedlyClean:
            bad.append((f2, g2))
    return SearchReport(examined, bad)


def candidate_count(a: int, b: int, N: int) -> int:
    """Number of a-to-1 maps from an N-set onto N/a labels."""
    return math.factorial(N) // (math.factorial(a) ** (N // a))
