"""Decorated representations of species with potentials and their mutations.

M_i is an F_i-space of F_i-dimension n_i.  It is stored through the F-basis
v_i^s e_q (index q*d_i + s, with v_i = v^(d/d_i)), so every arrow acts by an
ordinary matrix over F = GF(p).  Tensor spaces F_k (x) M_j use the same layout
with the F-basis of M_j in place of the e_q.  Only prime base fields are
supported here.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import InputError, InternalError, NotSinkOrSource
from .fields import FieldTower
from .linalg import np_colspace, np_inverse, np_nullspace, np_rank
from .pathalg import Elem, Morphism, Path
from .potentials import cyc_deriv, second_deriv
from .quivers import WeightedQuiver, composite_name, star
from .spmut import SpeciesWithPotential, check_no_two_cycle_at, premutate, split


def _companion_power(dk: int, t: int, c: int, p: int) -> np.ndarray:
    """Multiplication by v_k^t on F_k in the basis 1, v_k, ..., v_k^(dk-1)."""
    C = np.zeros((dk, dk), dtype=np.int64)
    for s in range(dk):
        q, r = divmod(s + t, dk)
        C[r, s] = pow(c, q, p)
    return C


def _fk_slots(n: int, dk: int, c: int, p: int) -> list[np.ndarray]:
    """[v_k^t acting on an n-dimensional F_k-coordinate space] for t < dk."""
    eye = np.eye(n, dtype=np.int64)
    return [np.kron(eye, _companion_power(dk, t, c, p)) % p for t in range(dk)]


@dataclass(frozen=True, eq=False)
class DecoratedRep:
    quiver: WeightedQuiver
    tower: FieldTower
    dims: tuple[int, ...]
    maps: dict[str, np.ndarray]
    deco: tuple[int, ...]
    _slots: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.tower.base.degree != 1:
            raise InputError("decorated representations need a prime base field")
        q = self.quiver
        object.__setattr__(self, "dims", tuple(int(x) for x in self.dims))
        object.__setattr__(self, "deco", tuple(int(x) for x in self.deco))
        if len(self.dims) != q.n or len(self.deco) != q.n:
            raise InputError("one dimension and one decoration per vertex are required")
        if min(self.dims + self.deco, default=0) < 0:
            raise InputError("dimensions must be nonnegative")
        p = self.tower.p
        maps = {}
        for a in q.arrows:
            m = self.maps.get(a.name)
            shape = (self.fdim(a.head), self.fdim(a.tail))
            m = np.zeros(shape, dtype=np.int64) if m is None else np.asarray(m, dtype=np.int64) % p
            if m.shape != shape:
                raise InputError(f"arrow {a.name} needs a {shape[0]}x{shape[1]} matrix, got {m.shape}")
            maps[a.name] = m
        extra = set(self.maps) - set(maps)
        if extra:
            raise InputError(f"maps for unknown arrows {sorted(extra)}")
        object.__setattr__(self, "maps", maps)

    @property
    def p(self) -> int:
        return self.tower.p

    def fdim(self, i: int) -> int:
        return self.dims[i - 1] * self.quiver.weight(i)

    def slot(self, i: int, j: int) -> np.ndarray:
        """Matrix of v^j acting on M_i (j a global exponent in B_i)."""
        key = (i, j)
        got = self._slots.get(key)
        if got is None:
            di = self.quiver.weight(i)
            step = self.tower.d // di
            if j % step:
                raise InputError(f"v^{j} does not lie in F_{i}")
            got = _fk_slots(self.dims[i - 1], di, self.tower.c, self.p)[j // step]
            self._slots[key] = got
        return got

    def dim_vector(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return self.dims, self.deco

    def is_zero(self) -> bool:
        return not any(self.dims) and not any(self.deco)

    def path_action(self, path: Path) -> np.ndarray:
        p = self.p
        out = self.slot(path.head, path.slots[0])
        for r, a in enumerate(path.arrows):
            t = self.quiver.arrow(a).tail
            out = out @ self.maps[a] % p
            out = out @ self.slot(t, path.slots[r + 1]) % p
        return out

    def action(self, x: Elem, head: int, tail: int) -> np.ndarray:
        """Matrix of x: M_tail -> M_head (terms with other endpoints ignored)."""
        p = self.p
        F = x.alg.F
        out = np.zeros((self.fdim(head), self.fdim(tail)), dtype=np.int64)
        for path, c in x.terms.items():
            if path.head == head and path.tail == tail:
                out = (out + int(F.mul(c, F.one)) * self.path_action(path)) % p
        return out

    def __repr__(self):
        return f"DecoratedRep(dims={self.dims}, deco={self.deco})"


def zero_rep(quiver: WeightedQuiver, tower: FieldTower) -> DecoratedRep:
    return DecoratedRep(quiver, tower, (0,) * quiver.n, {}, (0,) * quiver.n)


def simple(quiver: WeightedQuiver, tower: FieldTower, k: int) -> DecoratedRep:
    """S_k: F_k at vertex k, zero elsewhere, no decoration."""
    dims = tuple(1 if i == k else 0 for i in quiver.vertices)
    return DecoratedRep(quiver, tower, dims, {}, (0,) * quiver.n)


def negative_simple(quiver: WeightedQuiver, tower: FieldTower, k: int) -> DecoratedRep:
    """S_k^-: zero module with a one-dimensional decoration at k."""
    deco = tuple(1 if i == k else 0 for i in quiver.vertices)
    return DecoratedRep(quiver, tower, (0,) * quiver.n, {}, deco)


def direct_sum(x: DecoratedRep, y: DecoratedRep) -> DecoratedRep:
    """Block sum; the F_i-basis of x comes first at every vertex."""
    q = x.quiver
    if y.quiver != q or y.tower != x.tower:
        raise InputError("direct sum needs representations of the same quiver")
    maps = {}
    for a in q.arrows:
        A, B = x.maps[a.name], y.maps[a.name]
        m = np.zeros((A.shape[0] + B.shape[0], A.shape[1] + B.shape[1]), dtype=np.int64)
        m[: A.shape[0], : A.shape[1]] = A
        m[A.shape[0] :, A.shape[1] :] = B
        maps[a.name] = m
    dims = tuple(a + b for a, b in zip(x.dims, y.dims))
    deco = tuple(a + b for a, b in zip(x.deco, y.deco))
    return DecoratedRep(q, x.tower, dims, maps, deco)


# validation ----------------------------------------------------------------


def _slot_closure(rep: DecoratedRep, i: int, cols: np.ndarray) -> np.ndarray:
    if cols.shape[1] == 0:
        return cols
    di = rep.quiver.weight(i)
    step = rep.tower.d // di
    span = np.concatenate([rep.slot(i, t * step) @ cols % rep.p for t in range(di)], axis=1)
    return np_colspace(span, rep.p)


def nilpotency_index(rep: DecoratedRep) -> int | None:
    """Smallest r with every path of length r acting as zero; None if none exists."""
    q = rep.quiver
    p = rep.p
    W = {i: np.eye(rep.fdim(i), dtype=np.int64) for i in q.vertices}
    total = sum(rep.fdim(i) for i in q.vertices)
    for r in range(total + 2):
        if all(W[i].shape[1] == 0 for i in q.vertices):
            return r
        new = {}
        for i in q.vertices:
            parts = [rep.maps[a.name] @ W[a.tail] % p for a in q.incoming(i) if W[a.tail].shape[1]]
            cols = np.concatenate(parts, axis=1) if parts else np.zeros((rep.fdim(i), 0), dtype=np.int64)
            new[i] = _slot_closure(rep, i, np_colspace(cols, p) if cols.shape[1] else cols)
        W = new
    return None


def validate_rep(rep: DecoratedRep, sp: SpeciesWithPotential) -> list[str]:
    """Violations of nilpotency and of the Jacobian relations (empty when valid)."""
    out = []
    if rep.quiver != sp.quiver:
        return ["representation and SP have different quivers"]
    if rep.tower != sp.tower:
        return ["representation and SP have different towers"]
    r = nilpotency_index(rep)
    if r is None:
        out.append("not nilpotent")
        return out
    if r > sp.trunc + 1:
        out.append(f"Loewy length {r} exceeds truncation {sp.trunc}")
    for a in sp.quiver.arrows:
        g = cyc_deriv(sp.S, a.name)
        if g.is_zero():
            continue
        if np.any(rep.action(g, a.tail, a.head)):
            out.append(f"relation d_{a.name} S is violated")
    return out


def is_valid_rep(rep: DecoratedRep, sp: SpeciesWithPotential) -> bool:
    return not validate_rep(rep, sp)


# the triangle --------------------------------------------------------------


class Triangle(NamedTuple):
    k: int
    alpha: np.ndarray  # M_in -> M_k
    beta: np.ndarray  # M_k -> M_out
    gamma: np.ndarray  # M_out -> M_in
    in_blocks: list  # (arrow name, F-offset, F-dim of M_t(a)) in M_in
    out_blocks: list  # (arrow name, F-offset, F-dim of M_h(b)) in M_out
    dk: int


def triangle(rep: DecoratedRep, sp: SpeciesWithPotential, k: int) -> Triangle:
    q = sp.quiver
    tw = sp.tower
    p = tw.p
    check_no_two_cycle_at(q, k)
    dk = q.weight(k)
    step = tw.d // dk
    Lk = [rep.slot(k, t * step) for t in range(dk)]
    ins, outs = q.incoming(k), q.outgoing(k)
    in_blocks, off = [], 0
    for a in ins:
        fj = rep.fdim(a.tail)
        in_blocks.append((a.name, off, fj))
        off += fj * dk
    n_in = off
    out_blocks, off = [], 0
    for b in outs:
        fh = rep.fdim(b.head)
        out_blocks.append((b.name, off, fh))
        off += fh * dk
    n_out = off
    fk = rep.fdim(k)
    alpha = np.zeros((fk, n_in), dtype=np.int64)
    for name, o, fj in in_blocks:
        Ma = rep.maps[name]
        for u in range(dk):
            alpha[:, o + u : o + fj * dk : dk] = Lk[u] @ Ma % p
    beta = np.zeros((n_out, fk), dtype=np.int64)
    for name, o, fh in out_blocks:
        Mb = rep.maps[name]
        for t in range(dk):
            f, m = tw.eig_inv(t * step)
            u = m // step
            beta[o + u : o + fh * dk : dk, :] += int(f) * (Mb @ Lk[t] % p)
    beta %= p
    gamma = np.zeros((n_in, n_out), dtype=np.int64)
    for (aname, io, fj), a in zip(in_blocks, ins):
        for (bname, oo, fh), b in zip(out_blocks, outs):
            for t in range(dk):
                w = t * step
                D = rep.action(second_deriv(sp.S, bname, w, aname), a.tail, b.head)
                if not D.any():
                    continue
                for u in range(dk):
                    f, m = tw.eig_mul(u * step, w)
                    u2 = m // step
                    rows = io + np.arange(fj) * dk + u2
                    cols = oo + np.arange(fh) * dk + u
                    gamma[np.ix_(rows, cols)] += int(f) * D
    gamma %= p
    return Triangle(k, alpha, beta, gamma, in_blocks, out_blocks, dk)


# F_k-subspaces ---------------------------------------------------------------


def _orbit(L: list[np.ndarray], vecs: list[np.ndarray], p: int, n: int) -> np.ndarray:
    if not vecs:
        return np.zeros((n, 0), dtype=np.int64)
    return np.stack([Lt @ v % p for v in vecs for Lt in L], axis=1)


def _fk_extend(L: list[np.ndarray], base: np.ndarray, candidates: np.ndarray, p: int) -> list[np.ndarray]:
    """Greedy F_k-basis of span(base, candidates) modulo the F_k-span of base."""
    n = L[0].shape[0] if L else base.shape[0]
    chosen: list[np.ndarray] = []
    cur = base
    r = np_rank(cur, p) if cur.size else 0
    for j in range(candidates.shape[1]):
        x = candidates[:, j] % p
        trial = np.concatenate([cur, x[:, None]], axis=1)
        if np_rank(trial, p) > r:
            chosen.append(x)
            cur = np.concatenate([cur, _orbit(L, [x], p, n)], axis=1)
            r = np_rank(cur, p)
    return chosen


def _fk_dims(T: Triangle, p: int) -> dict[str, int]:
    rk = lambda A: np_rank(A, p) if A.size else 0  # noqa: E731
    dk = T.dk
    n_in, n_out, fk = T.gamma.shape[0], T.gamma.shape[1], T.alpha.shape[0]
    ra, rb, rg = rk(T.alpha), rk(T.beta), rk(T.gamma)
    rba = rk(T.beta @ T.alpha % p) if T.alpha.size and T.beta.size else 0
    return {
        "ker_gamma/im_beta": (n_out - rg - rb) // dk,
        "im_gamma": rg // dk,
        "ker_alpha/im_gamma": (n_in - ra - rg) // dk,
        "new_decoration": (fk - rb - ra + rba) // dk,
    }


@dataclass(frozen=True, eq=False)
class TildeMutation:
    sp: SpeciesWithPotential  # the premutation
    rep: DecoratedRep
    triangle: Triangle


def premutate_rep(
    rep: DecoratedRep,
    sp: SpeciesWithPotential,
    k: int,
    splitting: str = "pivot",
    rng: random.Random | None = None,
    pre: SpeciesWithPotential | None = None,
) -> TildeMutation:
    """μ̃_k of a decorated representation, as a representation of μ̃_k(A,S)."""
    if splitting not in ("pivot", "random"):
        raise InputError("splitting must be 'pivot' or 'random'")
    if splitting == "random" and rng is None:
        rng = random.Random(0)
    tw = sp.tower
    p = tw.p
    q = sp.quiver
    T = triangle(rep, sp, k)
    dk = T.dk
    n_in, n_out = T.gamma.shape
    Lin = _fk_slots(n_in // dk, dk, tw.c, p) if n_in else []
    Lout = _fk_slots(n_out // dk, dk, tw.c, p) if n_out else []

    def basis_of(M):
        return np_colspace(M, p) if M.size else np.zeros((M.shape[0], 0), dtype=np.int64)

    # M_out = im β ⊕ Q1 ⊕ C with ker γ = im β ⊕ Q1
    ker_g = np_nullspace(T.gamma, p) if n_out else np.zeros((0, 0), dtype=np.int64)
    im_b = basis_of(T.beta)
    std_out = np.eye(n_out, dtype=np.int64)[:, ::dk] if n_out else np.zeros((0, 0), dtype=np.int64)
    if n_out:
        B_imb = _fk_extend(Lout, np.zeros((n_out, 0), dtype=np.int64), im_b, p)
        O_imb = _orbit(Lout, B_imb, p, n_out)
        B_q1 = _fk_extend(Lout, O_imb, ker_g, p)
        O_q1 = _orbit(Lout, B_q1, p, n_out)
        B_c = _fk_extend(Lout, np.concatenate([O_imb, O_q1], axis=1), std_out, p)
        if splitting == "random" and ker_g.shape[1]:
            B_c = [(c + ker_g @ np.array([rng.randrange(p) for _ in range(ker_g.shape[1])])) % p for c in B_c]
        O_c = _orbit(Lout, B_c, p, n_out)
        P_out = np.concatenate([O_imb, O_q1, O_c], axis=1)
        P_out_inv = np_inverse(P_out, p)
    else:
        B_q1, O_imb, O_q1 = [], np.zeros((0, 0)), np.zeros((0, 0))
    # M_in = im γ ⊕ Q3 ⊕ D with ker α = im γ ⊕ Q3
    ker_a = np_nullspace(T.alpha, p) if n_in else np.zeros((0, 0), dtype=np.int64)
    im_g = basis_of(T.gamma) if n_in else np.zeros((0, 0), dtype=np.int64)
    std_in = np.eye(n_in, dtype=np.int64)[:, ::dk] if n_in else np.zeros((0, 0), dtype=np.int64)
    if n_in:
        B_img = _fk_extend(Lin, np.zeros((n_in, 0), dtype=np.int64), im_g, p)
        O_img = _orbit(Lin, B_img, p, n_in)
        B_q3 = _fk_extend(Lin, O_img, ker_a, p)
        if splitting == "random" and im_g.shape[1]:
            B_q3 = [(x + im_g @ np.array([rng.randrange(p) for _ in range(im_g.shape[1])])) % p for x in B_q3]
        O_q3 = _orbit(Lin, B_q3, p, n_in)
        B_d = _fk_extend(Lin, np.concatenate([O_img, O_q3], axis=1), std_in, p)
        O_d = _orbit(Lin, B_d, p, n_in)
        P_in_inv = np_inverse(np.concatenate([O_img, O_q3, O_d], axis=1), p)
    else:
        B_img, B_q3 = [], []
        O_img = O_q3 = np.zeros((0, 0), dtype=np.int64)
    n1, n2, n3, n4 = len(B_q1), len(B_img), len(B_q3), rep.deco[k - 1]
    new_fk = (n1 + n2 + n3 + n4) * dk
    # ᾱ = (-πρ, -γ, 0, 0)^T : M_out -> new M_k
    abar = np.zeros((new_fk, n_out), dtype=np.int64)
    if n_out:
        r0 = O_imb.shape[1]
        abar[: n1 * dk] = -P_out_inv[r0 : r0 + n1 * dk]
        if n2:
            abar[n1 * dk : (n1 + n2) * dk] = -(P_in_inv[: n2 * dk] @ T.gamma % p)
    abar %= p
    # β̄ = (0, ι, ισ, 0) : new M_k -> M_in
    bbar = np.zeros((n_in, new_fk), dtype=np.int64)
    if n_in:
        bbar[:, n1 * dk : (n1 + n2) * dk] = O_img
        bbar[:, (n1 + n2) * dk : (n1 + n2 + n3) * dk] = O_q3
    dims_check = _fk_dims(T, p)
    if (n1, n2, n3) != (dims_check["ker_gamma/im_beta"], dims_check["im_gamma"], dims_check["ker_alpha/im_gamma"]):
        raise InternalError("F_k-dimension bookkeeping is inconsistent")
    new_deco_k = dims_check["new_decoration"]

    if pre is None:
        pre = premutate(sp, k)
    maps: dict[str, np.ndarray] = {}
    ins, outs = q.incoming(k), q.outgoing(k)
    for a in q.arrows:
        if k not in (a.head, a.tail):
            maps[a.name] = rep.maps[a.name]
    for name, o, fh in T.out_blocks:
        maps[star(name)] = abar[:, o : o + fh * dk : dk]
    for name, o, fj in T.in_blocks:
        maps[star(name)] = bbar[o : o + fj * dk : dk, :]
    step = tw.d // dk
    for a in ins:
        for b in outs:
            for t in range(dk):
                maps[composite_name(b.name, t * step, a.name)] = (
                    rep.maps[b.name] @ rep.slot(k, t * step) % p @ rep.maps[a.name] % p
                )
    dims = tuple(n1 + n2 + n3 + n4 if i == k else rep.dims[i - 1] for i in q.vertices)
    deco = tuple(new_deco_k if i == k else rep.deco[i - 1] for i in q.vertices)
    return TildeMutation(pre, DecoratedRep(pre.quiver, tw, dims, maps, deco), T)


def transport(rep: DecoratedRep, phi: Morphism, quiver: WeightedQuiver) -> DecoratedRep:
    """Pull rep back along φ: the arrow c of ``quiver`` acts by φ(c)."""
    alg = phi.source
    maps = {}
    for c in quiver.arrows:
        maps[c.name] = rep.action(phi(alg.arrow(c.name)), c.head, c.tail)
    return DecoratedRep(quiver, rep.tower, rep.dims, maps, rep.deco)


def _check_loewy(rep: DecoratedRep, trunc: int):
    r = nilpotency_index(rep)
    if r is None or r > trunc + 1:
        raise InputError(f"Loewy length {r} exceeds the truncation {trunc}; raise N")


def mutate_decorated(
    rep: DecoratedRep,
    sp: SpeciesWithPotential,
    k: int,
    splitting: str = "pivot",
    rng: random.Random | None = None,
    validate: bool = True,
) -> tuple[SpeciesWithPotential, DecoratedRep]:
    """(μ_k(A,S), μ_k(M,V)); the reduction goes through the split witness."""
    tilde = premutate_rep(rep, sp, k, splitting, rng)
    res = split(tilde.sp)
    if not res.pairing:
        out = tilde.rep
    else:
        _check_loewy(tilde.rep, sp.trunc)
        out = transport(tilde.rep, res.witness, res.reduced.quiver)
    if validate:
        bad = validate_rep(out, res.reduced)
        if bad:
            raise InternalError("mutated representation is invalid: " + "; ".join(bad))
    return res.reduced, out


def mutate_rep(rep, sp, k, splitting="pivot", rng=None) -> DecoratedRep:
    return mutate_decorated(rep, sp, k, splitting, rng)[1]


# isomorphism -----------------------------------------------------------------


def _hom_space(x: DecoratedRep, y: DecoratedRep) -> tuple[np.ndarray, list[tuple[int, int, int]]]:
    """Nullspace basis of the intertwiner equations for F_i-linear maps x -> y."""
    q = x.quiver
    p = x.p
    layout, off = [], 0
    for i in q.vertices:
        r, c = y.fdim(i), x.fdim(i)
        layout.append((off, r, c))
        off += r * c
    nvar = off
    rows = []
    for i in q.vertices:
        o, r, c = layout[i - 1]
        if not r * c:
            continue
        di = q.weight(i)
        step = x.tower.d // di
        if di > 1:
            # ψ_i v_i = v_i ψ_i
            Lx, Ly = x.slot(i, step), y.slot(i, step)
            blk = np.zeros((r * c, nvar), dtype=np.int64)
            blk[:, o : o + r * c] = (np.kron(np.eye(r, dtype=np.int64), Lx.T) - np.kron(Ly, np.eye(c, dtype=np.int64))) % p
            rows.append(blk)
    for a in q.arrows:
        oh, rh, ch = layout[a.head - 1]
        ot, rt, ct = layout[a.tail - 1]
        # ψ_h x_a - y_a ψ_t = 0, an rh x ct system
        if not rh * ct:
            continue
        blk = np.zeros((rh * ct, nvar), dtype=np.int64)
        if rh * ch:
            blk[:, oh : oh + rh * ch] += np.kron(np.eye(rh, dtype=np.int64), x.maps[a.name].T)
        if rt * ct:
            blk[:, ot : ot + rt * ct] -= np.kron(y.maps[a.name], np.eye(ct, dtype=np.int64))
        rows.append(blk % p)
    if not nvar:
        return np.zeros((0, 0), dtype=np.int64), layout
    A = np.concatenate(rows, axis=0) if rows else np.zeros((0, nvar), dtype=np.int64)
    return np_nullspace(A, p), layout


def find_isomorphism(x: DecoratedRep, y: DecoratedRep, tries: int = 40, seed: int = 0) -> dict[int, np.ndarray] | None:
    """An invertible intertwiner x -> y (per-vertex F-matrices), or None."""
    if x.quiver != y.quiver or x.dims != y.dims or x.deco != y.deco:
        return None
    p = x.p
    N, layout = _hom_space(x, y)
    q = x.quiver
    if all(r * c == 0 for _, r, c in layout):
        return {i: np.zeros((0, 0), dtype=np.int64) for i in q.vertices}
    rng = random.Random(seed)
    for _ in range(tries):
        coeffs = np.array([rng.randrange(p) for _ in range(N.shape[1])], dtype=np.int64)
        vec = N @ coeffs % p if N.shape[1] else np.zeros(N.shape[0], dtype=np.int64)
        psi = {}
        ok = True
        for i in q.vertices:
            o, r, c = layout[i - 1]
            m = vec[o : o + r * c].reshape(r, c)
            if r and np_rank(m, p) < r:
                ok = False
                break
            psi[i] = m
        if ok:
            return psi
    return None


def are_isomorphic(x: DecoratedRep, y: DecoratedRep) -> bool:
    return find_isomorphism(x, y) is not None


# reflection functors ----------------------------------------------------------


def _is_sink(q: WeightedQuiver, k: int) -> bool:
    return not q.outgoing(k)


def _is_source(q: WeightedQuiver, k: int) -> bool:
    return not q.incoming(k)


def reflect_sink(rep: DecoratedRep, sp: SpeciesWithPotential, k: int) -> DecoratedRep:
    """ρ^+_k: ker α at k, a_s* acting through the s-th projection of ker α."""
    q = sp.quiver
    if not _is_sink(q, k):
        raise NotSinkOrSource(f"vertex {k} is not a sink")
    tw = sp.tower
    p = tw.p
    T = triangle(rep, sp, k)
    dk = T.dk
    n_in = T.alpha.shape[1]
    maps = {a.name: rep.maps[a.name] for a in q.arrows if k not in (a.head, a.tail)}
    if n_in:
        Lin = _fk_slots(n_in // dk, dk, tw.c, p)
        ker_a = np_nullspace(T.alpha, p)
        B = _fk_extend(Lin, np.zeros((n_in, 0), dtype=np.int64), ker_a, p)
        O = _orbit(Lin, B, p, n_in)
    else:
        B, O = [], np.zeros((0, 0), dtype=np.int64)
    for name, o, fj in T.in_blocks:
        maps[star(name)] = O[o : o + fj * dk : dk, :] if n_in else np.zeros((fj, 0), dtype=np.int64)
    pre = premutate(sp, k)
    dims = tuple(len(B) if i == k else rep.dims[i - 1] for i in q.vertices)
    return DecoratedRep(pre.quiver, tw, dims, maps, (0,) * q.n)


def reflect_source(rep: DecoratedRep, sp: SpeciesWithPotential, k: int) -> DecoratedRep:
    """ρ^-_k: coker β at k, b_s* acting through the projection onto coker β."""
    q = sp.quiver
    if not _is_source(q, k):
        raise NotSinkOrSource(f"vertex {k} is not a source")
    tw = sp.tower
    p = tw.p
    T = triangle(rep, sp, k)
    dk = T.dk
    n_out = T.beta.shape[0]
    maps = {a.name: rep.maps[a.name] for a in q.arrows if k not in (a.head, a.tail)}
    nq = 0
    if n_out:
        Lout = _fk_slots(n_out // dk, dk, tw.c, p)
        im_b = np_colspace(T.beta, p) if T.beta.size else np.zeros((n_out, 0), dtype=np.int64)
        B_imb = _fk_extend(Lout, np.zeros((n_out, 0), dtype=np.int64), im_b, p)
        O_imb = _orbit(Lout, B_imb, p, n_out)
        std = np.eye(n_out, dtype=np.int64)[:, ::dk]
        B_c = _fk_extend(Lout, O_imb, std, p)
        O_c = _orbit(Lout, B_c, p, n_out)
        Pinv = np_inverse(np.concatenate([O_imb, O_c], axis=1), p)
        proj = Pinv[O_imb.shape[1] :]
        nq = len(B_c)
    for name, o, fh in T.out_blocks:
        maps[star(name)] = proj[:, o : o + fh * dk : dk] if n_out else np.zeros((0, fh), dtype=np.int64)
    pre = premutate(sp, k)
    dims = tuple(nq if i == k else rep.dims[i - 1] for i in q.vertices)
    return DecoratedRep(pre.quiver, tw, dims, maps, (0,) * q.n)


def cokernel_alpha_dim(rep: DecoratedRep, sp: SpeciesWithPotential, k: int) -> int:
    T = triangle(rep, sp, k)
    ra = np_rank(T.alpha, rep.p) if T.alpha.size else 0
    return (T.alpha.shape[0] - ra) // T.dk


def kernel_beta_dim(rep: DecoratedRep, sp: SpeciesWithPotential, k: int) -> int:
    T = triangle(rep, sp, k)
    rb = np_rank(T.beta, rep.p) if T.beta.size else 0
    return (T.beta.shape[1] - rb) // T.dk


def drop_decoration(rep: DecoratedRep) -> DecoratedRep:
    return DecoratedRep(rep.quiver, rep.tower, rep.dims, rep.maps, (0,) * rep.quiver.n)


# double mutation --------------------------------------------------------------


def double_mutation_back(rep: DecoratedRep, sp: SpeciesWithPotential, k: int) -> DecoratedRep:
    """μ_k μ_k (M,V) carried back to (A,S) through the involution witness.

    Needs μ̃_k(A,S) to be reduced already, so that μ_k = μ̃_k on the first step.
    """
    from .pathalg import invert_morphism
    from .spmut import involution_witness

    first = premutate_rep(rep, sp, k)
    if not first.sp.is_reduced():
        raise InputError("the first premutation is not reduced")
    second = premutate_rep(first.rep, first.sp, k)
    iw = involution_witness(sp, k)
    psi = invert_morphism(iw.chain)
    _check_loewy(second.rep, sp.trunc)
    return transport(second.rep, psi, sp.quiver)


# random valid representations ------------------------------------------------------


def _support_acyclic(q: WeightedQuiver, names: set[str]) -> bool:
    adj: dict[int, list[int]] = {}
    for a in q.arrows:
        if a.name in names:
            adj.setdefault(a.tail, []).append(a.head)
    state: dict[int, int] = {}

    def dfs(v):
        state[v] = 1
        for w in adj.get(v, ()):
            s = state.get(w, 0)
            if s == 1 or (s == 0 and not dfs(w)):
                return False
        state[v] = 2
        return True

    return all(state.get(v, 0) == 2 or dfs(v) for v in q.vertices)


def random_rep(
    sp: SpeciesWithPotential,
    rng: random.Random,
    max_dim: int = 3,
    keep_prob: float = 0.7,
    dims: tuple[int, ...] | None = None,
) -> DecoratedRep:
    """A random valid representation: acyclic support, and every term of S
    keeps at least two vanishing arrow occurrences so all ∂_a S act as zero."""
    q = sp.quiver
    p = sp.tower.p
    if dims is None:
        dims = tuple(rng.randint(0, max_dim) for _ in q.vertices)
    terms = [p_.arrows for p_ in sp.S.terms]
    order = list(q.arrows)
    rng.shuffle(order)
    live: set[str] = set()
    for a in order:
        if rng.random() > keep_prob:
            continue
        trial = live | {a.name}
        if not _support_acyclic(q, trial):
            continue
        if any(sum(1 for x in arrows if x not in trial) < 2 for arrows in terms if a.name in arrows):
            continue
        live = trial
    maps = {}
    for a in q.arrows:
        shape = (dims[a.head - 1] * q.weight(a.head), dims[a.tail - 1] * q.weight(a.tail))
        if a.name in live:
            maps[a.name] = np.array([[rng.randrange(p) for _ in range(shape[1])] for _ in range(shape[0])], dtype=np.int64).reshape(shape)
        else:
            maps[a.name] = np.zeros(shape, dtype=np.int64)
    return DecoratedRep(q, sp.tower, dims, maps, (0,) * q.n)


def extended_rank(matrix: np.ndarray, tower: FieldTower, m: int) -> int:
    """Rank of an F-matrix viewed over K = GF(p^m), by elimination in K."""
    from .fields import extend_base
    from .linalg import rank

    K = extend_base(tower, m).base
    M = [[K.from_int(int(x)) for x in row] for row in matrix]
    return rank(K, M) if M and M[0] else 0

