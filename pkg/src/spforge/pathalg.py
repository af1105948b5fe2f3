"""Truncated complete path algebras of weighted quivers over a field tower.

A path ω_0 a_1 ω_1 ... a_ℓ ω_ℓ is written left to right and composes right to
left: a_ℓ is traversed first.  Slot ω_r is an eigenbasis exponent of the
subfield at the vertex it sits on (ω_0 at h(a_1), ω_r at t(a_r)).  Elements
are finite scalar combinations of paths, exact modulo paths of length > N.
"""

from __future__ import annotations

import os
from typing import Iterable, Iterator, NamedTuple

from .errors import (
    ArrowUnmapped,
    InvalidPath,
    NotInvertible,
    TowerMismatch,
    TruncMismatch,
    UnknownArrow,
)
from .fields import FieldTower
from .linalg import inverse
from .quivers import WeightedQuiver

DEFAULT_TRUNC = 24


def default_trunc() -> int:
    env = os.environ.get("SPFORGE_TRUNC")
    return int(env) if env else DEFAULT_TRUNC


class Path(NamedTuple):
    head: int
    tail: int
    arrows: tuple[str, ...]
    slots: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.arrows)

    def is_cyclic(self) -> bool:
        return bool(self.arrows) and self.head == self.tail


def path_key(p: Path):
    """Canonical ordering: length, tail vertex, arrow names, slot exponents."""
    return (len(p.arrows), p.tail, p.arrows, p.slots)


def format_path(p: Path) -> str:
    if not p.arrows:
        return f"{'1' if p.slots[0] == 0 else 'v^%d' % p.slots[0]}@{p.head}"
    toks = []
    for r, a in enumerate(p.arrows):
        if p.slots[r]:
            toks.append(f"v^{p.slots[r]}")
        toks.append(a)
    if p.slots[-1]:
        toks.append(f"v^{p.slots[-1]}")
    return " ".join(toks)


class PathAlgebra:
    """The algebra R<<A>> / m^{N+1} for a weighted quiver over a tower."""

    def __init__(self, quiver: WeightedQuiver, tower: FieldTower, trunc: int | None = None):
        self.quiver = quiver
        self.tower = tower
        self.trunc = default_trunc() if trunc is None else int(trunc)
        self.F = tower.base
        for w in quiver.weights:
            tower.step(w)
        self.ends = {a.name: (a.tail, a.head) for a in quiver.arrows}
        self.steps = tuple(tower.d // w for w in quiver.weights)

    def __eq__(self, other):
        return (
            isinstance(other, PathAlgebra)
            and self.trunc == other.trunc
            and self.tower == other.tower
            and self.quiver == other.quiver
        )

    def __hash__(self):
        return hash((self.quiver, self.tower, self.trunc))

    def __repr__(self):
        return f"PathAlgebra(n={self.quiver.n}, arrows={len(self.ends)}, {self.tower!r}, N={self.trunc})"

    def with_trunc(self, trunc: int) -> "PathAlgebra":
        return PathAlgebra(self.quiver, self.tower, trunc)

    def with_quiver(self, quiver: WeightedQuiver) -> "PathAlgebra":
        return PathAlgebra(quiver, self.tower, self.trunc)

    def with_tower(self, tower: FieldTower) -> "PathAlgebra":
        return PathAlgebra(self.quiver, tower, self.trunc)

    def basis_exponents(self, vertex: int) -> range:
        return range(0, self.tower.d, self.steps[vertex - 1])

    def slot_ok(self, vertex: int, j: int) -> bool:
        return 0 <= j < self.tower.d and j % self.steps[vertex - 1] == 0

    # constructors -------------------------------------------------------

    def elem(self, terms: dict | None = None) -> "Elem":
        return Elem(self, {} if terms is None else {p: c for p, c in terms.items() if not self.F.is_zero(c)})

    def zero(self) -> "Elem":
        return Elem(self, {})

    def scalar(self, x) -> object:
        return self.F.from_int(x) if isinstance(x, int) else x

    def slot(self, vertex: int, j: int = 0, coeff=None) -> "Elem":
        if not self.slot_ok(vertex, j):
            raise InvalidPath(f"v^{j} is not in the eigenbasis at vertex {vertex}")
        c = self.F.one if coeff is None else self.scalar(coeff)
        return self.elem({Path(vertex, vertex, (), (j,)): c})

    def idem(self, vertex: int) -> "Elem":
        return self.slot(vertex, 0)

    def one(self) -> "Elem":
        return self.elem({Path(i, i, (), (0,)): self.F.one for i in self.quiver.vertices})

    def arrow(self, name: str, coeff=None) -> "Elem":
        return self.term(coeff, [name], [0, 0])

    def make_path(self, arrows: Iterable[str], slots: Iterable[int] | None = None) -> Path:
        arrows = tuple(arrows)
        if not arrows:
            raise InvalidPath("use slot() for length-0 paths")
        slots = (0,) * (len(arrows) + 1) if slots is None else tuple(slots)
        if len(slots) != len(arrows) + 1:
            raise InvalidPath("need one more slot than arrows")
        for a in arrows:
            if a not in self.ends:
                raise UnknownArrow(f"unknown arrow {a}")
        for r in range(len(arrows) - 1):
            if self.ends[arrows[r]][0] != self.ends[arrows[r + 1]][1]:
                raise InvalidPath(f"{arrows[r]} cannot follow {arrows[r + 1]}")
        head = self.ends[arrows[0]][1]
        verts = [head] + [self.ends[a][0] for a in arrows]
        for v, j in zip(verts, slots):
            if not self.slot_ok(v, j):
                raise InvalidPath(f"v^{j} is not in the eigenbasis at vertex {v}")
        return Path(head, verts[-1], arrows, slots)

    def term(self, coeff, arrows: Iterable[str], slots: Iterable[int] | None = None) -> "Elem":
        p = self.make_path(arrows, slots)
        c = self.F.one if coeff is None else self.scalar(coeff)
        if len(p.arrows) > self.trunc:
            return self.zero()
        return self.elem({p: c})

    def parse_term(self, text: str, coeff=None) -> "Elem":
        """Parse ``"v^2 alpha beta v^3 gamma"``; slots default to 1."""
        arrows: list[str] = []
        slots: list[int] = [0]
        for tok in text.split():
            if tok.startswith("v^") or tok == "v":
                j = 1 if tok == "v" else int(tok[2:])
                if j < 0:
                    raise InvalidPath(f"negative exponent in {tok}; enter 1/v^d as the scalar 1/c")
                q, r = divmod(j, self.tower.d)
                f, m = self.tower.eig_mul(slots[-1], r)
                # v^d = c, and a repeated slot picks up powers of c
                f = self.F.mul(f, self.F.from_int(pow(self.tower.c, q, self.tower.p)))
                if f != self.F.one:
                    coeff = self.F.mul(self.F.one if coeff is None else self.scalar(coeff), f)
                slots[-1] = m
            else:
                arrows.append(tok)
                slots.append(0)
        return self.term(coeff, arrows, slots)

    def rehome(self, x: "Elem") -> "Elem":
        """View x in this algebra (same tower, arrows present), truncating."""
        if x.alg is self:
            return x
        if x.alg.tower != self.tower:
            raise TowerMismatch("elements live over different towers")
        for p in x.terms:
            for a in p.arrows:
                if a not in self.ends or self.ends[a] != x.alg.ends[a]:
                    raise UnknownArrow(f"arrow {a} is not in the target algebra")
        N = self.trunc
        return Elem(self, {p: c for p, c in x.terms.items() if len(p.arrows) <= N})

    # enumeration --------------------------------------------------------

    def paths(self, length: int, head: int | None = None, tail: int | None = None) -> Iterator[Path]:
        """All basis paths of a given length (optionally fixing endpoints)."""
        if length == 0:
            for v in self.quiver.vertices:
                if (head is None or v == head) and (tail is None or v == tail):
                    for j in self.basis_exponents(v):
                        yield Path(v, v, (), (j,))
            return
        by_head: dict[int, list] = {}
        for a in self.quiver.arrows:
            by_head.setdefault(a.head, []).append(a)

        def extend(prefix_arrows, prefix_slots, cur, remaining):
            for a in by_head.get(cur, []):
                nxt = a.tail
                for j in self.basis_exponents(nxt):
                    if remaining == 1:
                        if tail is None or nxt == tail:
                            yield prefix_arrows + (a.name,), prefix_slots + (j,), nxt
                    else:
                        yield from extend(prefix_arrows + (a.name,), prefix_slots + (j,), nxt, remaining - 1)

        heads = self.quiver.vertices if head is None else [head]
        for h in heads:
            for j0 in self.basis_exponents(h):
                for arrows, slots, t in extend((), (j0,), h, length):
                    yield Path(h, t, arrows, slots)

    def count_paths(self, length: int) -> int:
        return sum(1 for _ in self.paths(length))


# low-level term arithmetic ------------------------------------------------


def _mul_terms(alg: PathAlgebra, xt: dict, yt: dict, bound: int) -> dict:
    """Product of term dicts keeping paths of length <= bound."""
    if not xt or not yt:
        return {}
    F = alg.F
    table = alg.tower._eig_table
    mul, add, is_zero = F.mul, F.add, F.is_zero
    by_head: dict[int, list] = {}
    for p2, c2 in yt.items():
        by_head.setdefault(p2.head, []).append((len(p2.arrows), p2, c2))
    for lst in by_head.values():
        lst.sort(key=lambda t: t[0])
    out: dict = {}
    for p1, c1 in xt.items():
        ys = by_head.get(p1.tail)
        if not ys:
            continue
        room = bound - len(p1.arrows)
        if room < 0:
            continue
        row = table[p1.slots[-1]]
        pre_s = p1.slots[:-1]
        for l2, p2, c2 in ys:
            if l2 > room:
                break
            f, m = row[p2.slots[0]]
            path = Path(p1.head, p2.tail, p1.arrows + p2.arrows, pre_s + (m,) + p2.slots[1:])
            c = mul(mul(c1, c2), f)
            if path in out:
                out[path] = add(out[path], c)
            else:
                out[path] = c
    return {p: c for p, c in out.items() if not is_zero(c)}


def _add_into(F, acc: dict, terms: dict, scale=None) -> None:
    add, mul, is_zero = F.add, F.mul, F.is_zero
    for p, c in terms.items():
        if scale is not None:
            c = mul(scale, c)
        if p in acc:
            s = add(acc[p], c)
            if is_zero(s):
                del acc[p]
            else:
                acc[p] = s
        elif not is_zero(c):
            acc[p] = c


def path_mul(alg: PathAlgebra, x: Path, y: Path):
    """(scalar, path) for x*y, or None when t(x) != h(y)."""
    if x.tail != y.head:
        return None
    f, m = alg.tower.eig_mul(x.slots[-1], y.slots[0])
    return f, Path(x.head, y.tail, x.arrows + y.arrows, x.slots[:-1] + (m,) + y.slots[1:])


class Elem:
    """An element of a truncated path algebra; treat as immutable."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: PathAlgebra, terms: dict):
        self.alg = alg
        self.terms = terms

    def _coerce(self, other) -> "Elem":
        if isinstance(other, Elem):
            if other.alg is self.alg:
                return other
            if other.alg.tower != self.alg.tower:
                raise TowerMismatch("elements live over different towers")
            if other.alg.trunc != self.alg.trunc:
                raise TruncMismatch(f"truncations {self.alg.trunc} and {other.alg.trunc} differ")
            if other.alg.quiver != self.alg.quiver:
                raise TowerMismatch("elements live in different path algebras")
            return other
        raise TypeError(f"cannot combine Elem with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        acc = dict(self.terms)
        _add_into(self.alg.F, acc, other.terms)
        return Elem(self.alg, acc)

    def __sub__(self, other):
        other = self._coerce(other)
        acc = dict(self.terms)
        _add_into(self.alg.F, acc, other.terms, self.alg.F.neg(self.alg.F.one))
        return Elem(self.alg, acc)

    def __neg__(self):
        neg = self.alg.F.neg
        return Elem(self.alg, {p: neg(c) for p, c in self.terms.items()})

    def scale(self, s) -> "Elem":
        F = self.alg.F
        s = self.alg.scalar(s)
        if F.is_zero(s):
            return Elem(self.alg, {})
        return Elem(self.alg, {p: F.mul(s, c) for p, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Elem):
            other = self._coerce(other)
            return Elem(self.alg, _mul_terms(self.alg, self.terms, other.terms, self.alg.trunc))
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, Elem):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def coeff(self, path: Path):
        return self.terms.get(path, self.alg.F.zero)

    def min_degree(self) -> float:
        return min((len(p.arrows) for p in self.terms), default=float("inf"))

    def max_degree(self) -> int:
        return max((len(p.arrows) for p in self.terms), default=-1)

    def truncate(self, n: int) -> "Elem":
        return Elem(self.alg, {p: c for p, c in self.terms.items() if len(p.arrows) <= n})

    def degree_part(self, n: int) -> "Elem":
        return Elem(self.alg, {p: c for p, c in self.terms.items() if len(p.arrows) == n})

    def sorted_terms(self) -> list[tuple[Path, object]]:
        return sorted(self.terms.items(), key=lambda t: path_key(t[0]))

    def arrows_used(self) -> set[str]:
        return {a for p in self.terms for a in p.arrows}

    def __repr__(self):
        if not self.terms:
            return "0"
        F = self.alg.F
        return " + ".join(f"{F.fmt(c)}*({format_path(p)})" for p, c in self.sorted_terms())


def elem_add(x: Elem, y: Elem) -> Elem:
    return x + y


def elem_mul(x: Elem, y: Elem) -> Elem:
    return x * y


def min_degree(x: Elem) -> float:
    return x.min_degree()


def slot_left(alg: PathAlgebra, j: int, terms: dict) -> dict:
    """ω·x for a slot exponent j (applied at each path's head)."""
    F = alg.F
    table = alg.tower._eig_table[j]
    out = {}
    for p, c in terms.items():
        f, m = table[p.slots[0]]
        out[Path(p.head, p.tail, p.arrows, (m,) + p.slots[1:])] = F.mul(c, f)
    return out


def slot_right(alg: PathAlgebra, terms: dict, j: int) -> dict:
    """x·ω for a slot exponent j (applied at each path's tail)."""
    F = alg.F
    table = alg.tower._eig_table
    out = {}
    for p, c in terms.items():
        f, m = table[p.slots[-1]][j]
        out[Path(p.head, p.tail, p.arrows, p.slots[:-1] + (m,))] = F.mul(c, f)
    return out


# morphisms -----------------------------------------------------------------


class Morphism:
    """Continuous R-algebra map determined by arrow images φ(a) ∈ m'."""

    def __init__(self, source: PathAlgebra, target: PathAlgebra, images: dict[str, Elem]):
        if source.tower != target.tower:
            raise TowerMismatch("source and target towers differ")
        if source.trunc != target.trunc:
            raise TruncMismatch("source and target truncations differ")
        if source.quiver.weights != target.quiver.weights:
            raise TowerMismatch("source and target vertex weights differ")
        self.source = source
        self.target = target
        self.images: dict[str, Elem] = {}
        for a in source.quiver.arrows:
            if a.name not in images:
                raise ArrowUnmapped(f"no image for arrow {a.name}")
            img = target.rehome(images[a.name]) if images[a.name].alg is not target else images[a.name]
            for p in img.terms:
                if not p.arrows:
                    raise ArrowUnmapped(f"image of {a.name} has a degree-0 part")
                if p.head != a.head or p.tail != a.tail:
                    raise ArrowUnmapped(f"image of {a.name} leaves e_{a.head} m e_{a.tail}")
            self.images[a.name] = img
        self._cache: dict = {}

    def __call__(self, x: Elem) -> Elem:
        return apply_morphism(self, x)

    def __repr__(self):
        return "Morphism(" + ", ".join(f"{a} -> {img!r}" for a, img in self.images.items()) + ")"

    def linear_part(self, name: str) -> Elem:
        return self.images[name].degree_part(1)

    def is_identity(self) -> bool:
        src = self.source
        return all(
            img.terms == {Path(src.ends[a][1], src.ends[a][0], (a,), (0, 0)): src.F.one}
            for a, img in self.images.items()
        )

    def _factor(self, a: str, j: int) -> dict:
        key = (a, j)
        got = self._cache.get(key)
        if got is None:
            got = slot_right(self.target, self.images[a].terms, j) if j else self.images[a].terms
            self._cache[key] = got
        return got


def identity_morphism(alg: PathAlgebra) -> Morphism:
    return Morphism(alg, alg, {a.name: alg.arrow(a.name) for a in alg.quiver.arrows})


def apply_morphism(phi: Morphism, x: Elem) -> Elem:
    """Substitute φ(a) for every arrow, keeping slots; exact modulo m^{N+1}."""
    tgt = phi.target
    if x.alg is not phi.source:
        if x.alg.tower != phi.source.tower:
            raise TowerMismatch("element and morphism towers differ")
        x = phi.source.rehome(x)
    N = tgt.trunc
    F = tgt.F
    acc: dict = {}
    for p, c in x.terms.items():
        ell = len(p.arrows)
        if ell == 0:
            _add_into(F, acc, {p: c})
            continue
        cur = {Path(p.head, p.head, (), (p.slots[0],)): c}
        for r, a in enumerate(p.arrows):
            remaining = ell - r - 1
            cur = _mul_terms(tgt, cur, phi._factor(a, p.slots[r + 1]), N - remaining)
            if not cur:
                break
        _add_into(F, acc, cur)
    return Elem(tgt, acc)


def compose(phi: Morphism, psi: Morphism) -> Morphism:
    """φ∘ψ: a ↦ φ(ψ(a))."""
    if psi.target != phi.source:
        raise TowerMismatch("morphisms are not composable")
    return Morphism(psi.source, phi.target, {a: apply_morphism(phi, img) for a, img in psi.images.items()})


def _linear_block_inverse(phi: Morphism) -> Morphism:
    """Inverse of the degree-one part φ^(1), computed blockwise over F."""
    src, tgt = phi.source, phi.target
    F = src.F
    blocks: dict[tuple[int, int], tuple[list[str], list[str]]] = {}
    for a in src.quiver.arrows:
        blocks.setdefault((a.tail, a.head), ([], []))[0].append(a.name)
    for b in tgt.quiver.arrows:
        blocks.setdefault((b.tail, b.head), ([], []))[1].append(b.name)
    images: dict[str, Elem] = {}
    for (t, h), (sa, ta) in blocks.items():
        if len(sa) != len(ta):
            raise NotInvertible(f"arrow counts {t}->{h} differ between source and target")
        if not sa:
            continue
        Bh = list(src.basis_exponents(h))
        Bt = list(src.basis_exponents(t))
        s_basis = [(a, w, w2) for a in sa for w in Bh for w2 in Bt]
        t_index = {(b, w, w2): i for i, (b, w, w2) in enumerate((b, w, w2) for b in ta for w in Bh for w2 in Bt)}
        n = len(s_basis)
        M = [[F.zero] * n for _ in range(n)]
        for col, (a, w, w2) in enumerate(s_basis):
            lin = phi.images[a].degree_part(1).terms
            vec = slot_right(tgt, slot_left(tgt, w, lin), w2)
            for p, c in vec.items():
                M[t_index[(p.arrows[0], p.slots[0], p.slots[1])]][col] = F.add(
                    M[t_index[(p.arrows[0], p.slots[0], p.slots[1])]][col], c
                )
        Minv = inverse(F, M)
        for b in ta:
            row = t_index[(b, 0, 0)]
            terms = {}
            for col, (a, w, w2) in enumerate(s_basis):
                x = Minv[col][row]
                if not F.is_zero(x):
                    terms[Path(h, t, (a,), (w, w2))] = x
            images[b] = Elem(src, terms)
    return Morphism(tgt, src, images)


def invert_morphism(phi: Morphism) -> Morphism:
    """ψ with ψ∘φ = φ∘ψ = id modulo m^{N+1}.

    φ^(1) is inverted blockwise; the remaining unitriangular map θ = φ∘ψ1 is
    inverted by the fixed-point iteration χ <- χ - (θ(χ) - id), which gains at
    least one degree per round.
    """
    psi1 = _linear_block_inverse(phi)
    theta = compose(phi, psi1)
    tgt = phi.target
    chi_images = {b: tgt.arrow(b) for b in theta.images}
    for _ in range(tgt.trunc + 1):
        chi = Morphism(tgt, tgt, chi_images)
        changed = False
        new_images = {}
        for b, img in chi_images.items():
            err = apply_morphism(theta, img) - tgt.arrow(b)
            if err.terms:
                changed = True
                new_images[b] = img - err
            else:
                new_images[b] = img
        chi_images = new_images
        if not changed:
            break
    else:  # pragma: no cover - depth argument guarantees convergence
        raise NotInvertible("unitriangular inversion did not converge")
    chi = Morphism(tgt, tgt, chi_images)
    return compose(psi1, chi)
