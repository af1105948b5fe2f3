"""Dense linear algebra over finite fields.

Two flavours: generic routines taking a field object (``add``/``mul``/``inv``
...) and operating on lists of lists, used for small systems over GF(p^m)
or E; and numpy routines over a prime field for the representation code,
where matrices reach a few hundred columns.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import NotInvertible


# generic -------------------------------------------------------------------


def rref(F, M: Sequence[Sequence]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form and pivot columns."""
    A = [list(row) for row in M]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if not F.is_zero(A[i][c])), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = F.inv(A[r][c])
        A[r] = [F.mul(inv, x) for x in A[r]]
        for i in range(rows):
            if i != r and not F.is_zero(A[i][c]):
                t = A[i][c]
                A[i] = [F.sub(x, F.mul(t, y)) for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return A, pivots


def rank(F, M) -> int:
    return len(rref(F, M)[1]) if M else 0


def inverse(F, M: Sequence[Sequence]) -> list[list]:
    n = len(M)
    if any(len(row) != n for row in M):
        raise NotInvertible("matrix is not square")
    aug = [list(row) + [F.one if i == j else F.zero for j in range(n)] for i, row in enumerate(M)]
    R, piv = rref(F, aug)
    if piv[:n] != list(range(n)):
        raise NotInvertible("matrix is singular")
    return [row[n:] for row in R]


def determinant(F, M: Sequence[Sequence]):
    A = [list(row) for row in M]
    n = len(A)
    det = F.one
    for c in range(n):
        piv = next((i for i in range(c, n) if not F.is_zero(A[i][c])), None)
        if piv is None:
            return F.zero
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = F.neg(det)
        det = F.mul(det, A[c][c])
        inv = F.inv(A[c][c])
        for i in range(c + 1, n):
            if not F.is_zero(A[i][c]):
                t = F.mul(A[i][c], inv)
                A[i] = [F.sub(x, F.mul(t, y)) for x, y in zip(A[i], A[c])]
    return det


class ExtField:
    """Adapter exposing E = F[v]/(v^d - c) of a tower through the field protocol."""

    def __init__(self, tower):
        self.tower = tower
        self.zero = tower.ext_zero()
        self.one = tower.ext_one()

    def add(self, x, y):
        return self.tower.ext_add(x, y)

    def sub(self, x, y):
        return self.tower.ext_sub(x, y)

    def neg(self, x):
        return self.tower.ext_neg(x)

    def mul(self, x, y):
        return self.tower.ext_mul(x, y)

    def inv(self, x):
        return self.tower.ext_inv(x)

    def is_zero(self, x):
        return self.tower.ext_is_zero(x)


# numpy over GF(p) ------------------------------------------------------------


def np_rref(A: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    A = np.array(A, dtype=np.int64) % p
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        A[r] = A[r] * pow(int(A[r, c]), -1, p) % p
        col = A[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            A[nzr] = (A[nzr] - np.outer(col[nzr], A[r])) % p
        pivots.append(c)
        r += 1
    return A, pivots


def np_rank(A: np.ndarray, p: int) -> int:
    if A.size == 0:
        return 0
    return len(np_rref(A, p)[1])


def np_nullspace(A: np.ndarray, p: int) -> np.ndarray:
    """Columns spanning {x : A x = 0}."""
    rows, cols = A.shape
    if cols == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if rows == 0:
        return np.eye(cols, dtype=np.int64)
    R, piv = np_rref(A, p)
    free = [c for c in range(cols) if c not in piv]
    N = np.zeros((cols, len(free)), dtype=np.int64)
    for t, f in enumerate(free):
        N[f, t] = 1
        for r, pc in enumerate(piv):
            N[pc, t] = -R[r, f] % p
    return N


def np_colspace(A: np.ndarray, p: int) -> np.ndarray:
    """Independent columns of A spanning its column space (subset of A's columns)."""
    if A.size == 0:
        return np.zeros((A.shape[0], 0), dtype=np.int64)
    _, piv = np_rref(A, p)
    return A[:, piv] % p


def np_solve(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """Some X with A X = B; raises NotInvertible if inconsistent."""
    rows, cols = A.shape
    B = np.asarray(B, dtype=np.int64).reshape(rows, -1)
    aug = np.concatenate([A % p, B % p], axis=1)
    R, piv = np_rref(aug, p)
    if any(c >= cols for c in piv):
        raise NotInvertible("inconsistent linear system")
    X = np.zeros((cols, B.shape[1]), dtype=np.int64)
    for r, c in enumerate(piv):
        X[c] = R[r, cols:]
    return X % p


def np_inverse(A: np.ndarray, p: int) -> np.ndarray:
    n = A.shape[0]
    if A.shape != (n, n):
        raise NotInvertible("matrix is not square")
    if n == 0:
        return np.zeros((0, 0), dtype=np.int64)
    R, piv = np_rref(np.concatenate([A % p, np.eye(n, dtype=np.int64)], axis=1), p)
    if piv[:n] != list(range(n)):
        raise NotInvertible("matrix is singular")
    return R[:, n:] % p
