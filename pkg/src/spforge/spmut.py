"""Species with potentials: splitting, premutation, mutation and restriction.

All results are exact modulo paths longer than the truncation N of the
underlying path algebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .errors import (
    BadPairing,
    EmptySubset,
    InputError,
    NoValidPairing,
    TwoCycleAtK,
    WitnessFailed,
)
from .fields import FieldTower, extend_base
from .linalg import ExtField, determinant, inverse
from .pathalg import (
    Elem,
    Morphism,
    Path,
    PathAlgebra,
    apply_morphism,
    compose,
    identity_morphism,
    invert_morphism,
)
from .potentials import normalize_cyclic
from .quivers import Arrow, WeightedQuiver, composite_name, star


@dataclass(frozen=True, eq=False)
class SpeciesWithPotential:
    """A weighted quiver over a tower together with a potential in normal form."""

    alg: PathAlgebra
    S: Elem

    def __post_init__(self):
        if not self.alg.quiver.strongly_primitive:
            raise InputError("vertex weights must be pairwise coprime")
        S = self.S if self.S.alg is self.alg else self.alg.rehome(self.S)
        object.__setattr__(self, "S", normalize_cyclic(S))

    @classmethod
    def build(cls, quiver: WeightedQuiver, tower: FieldTower, terms=(), trunc: int | None = None):
        """Build from (coefficient, term-string) pairs such as (1, "a v^2 b")."""
        alg = PathAlgebra(quiver, tower, trunc)
        S = alg.zero()
        for coeff, text in terms:
            S = S + alg.parse_term(text, coeff)
        return cls(alg, S)

    @property
    def quiver(self) -> WeightedQuiver:
        return self.alg.quiver

    @property
    def tower(self) -> FieldTower:
        return self.alg.tower

    @property
    def trunc(self) -> int:
        return self.alg.trunc

    def is_2acyclic(self) -> bool:
        return self.quiver.is_2acyclic()

    def is_reduced(self) -> bool:
        return self.S.degree_part(2).is_zero()

    def with_potential(self, S: Elem) -> "SpeciesWithPotential":
        return SpeciesWithPotential(self.alg, S)

    def same_as(self, other: "SpeciesWithPotential") -> bool:
        """Literal equality: same arrows and termwise equal normalized potentials."""
        return (
            self.quiver == other.quiver
            and self.tower == other.tower
            and self.S.terms == other.S.terms
        )

    def __repr__(self):
        return f"SP(arrows={self.quiver.arrow_names}, S={self.S!r})"


SP = SpeciesWithPotential


# E-multiples of arrows ---------------------------------------------------------


def _exponent_split(alg: PathAlgebra, head: int, tail: int) -> dict[int, tuple[int, int, object]]:
    """For v^m ∈ F_head F_tail, the unique (ω1, ω2, f) with ω1 ω2 = f v^m."""
    out = {}
    for w1 in alg.basis_exponents(head):
        for w2 in alg.basis_exponents(tail):
            f, m = alg.tower.eig_mul(w1, w2)
            out[m] = (w1, w2, f)
    return out


def ext_times_arrow(alg: PathAlgebra, e, arrow: str) -> Elem:
    """The element e·arrow for e ∈ F_h F_t, written as Σ y ω1 arrow ω2."""
    t, h = alg.ends[arrow]
    split = _exponent_split(alg, h, t)
    F = alg.F
    terms = {}
    for m, x in enumerate(e):
        if F.is_zero(x):
            continue
        if m not in split:
            raise InputError(f"coefficient v^{m} is outside F_{h}F_{t}")
        w1, w2, f = split[m]
        terms[Path(h, t, (arrow,), (w1, w2))] = F.mul(x, F.inv(f))
    return Elem(alg, terms)


def _two_cycle_value(alg: PathAlgebra, p: Path):
    """E-value ω_0 ω_1 of a 2-cycle ω_0 x ω_1 y ω_2 (trailing slot absorbed)."""
    tw = alg.tower
    F = alg.F
    f0, m0 = tw.eig_mul(p.slots[2], p.slots[0])
    f1, m1 = tw.eig_mul(m0, p.slots[1])
    return F.mul(f0, f1), m1


def _vertex_pairs(quiver: WeightedQuiver):
    """For each vertex pair i < j with arrows both ways: (rows j->i, cols i->j)."""
    out = {}
    for i in quiver.vertices:
        for j in quiver.vertices:
            if i < j:
                rows = [a.name for a in quiver.arrows_between(j, i)]
                cols = [a.name for a in quiver.arrows_between(i, j)]
                if rows and cols:
                    out[(i, j)] = (rows, cols)
    return out


def lambda_matrix(sp: SpeciesWithPotential, rows: list[str], cols: list[str]) -> list[list]:
    """Matrix over E whose (t, l) entry is Σ x ω1ω2 over 2-cycles ω1 rows[t] ω2 cols[l]."""
    alg = sp.alg
    tw = alg.tower
    F = alg.F
    ridx = {a: i for i, a in enumerate(rows)}
    cidx = {b: i for i, b in enumerate(cols)}
    L = [[tw.ext_zero() for _ in cols] for _ in rows]
    for p, c in sp.S.degree_part(2).terms.items():
        x, y = p.arrows
        if x in ridx and y in cidx:
            r, s = ridx[x], cidx[y]
        elif y in ridx and x in cidx:
            r, s = ridx[y], cidx[x]
        else:
            continue
        f, m = _two_cycle_value(alg, p)
        L[r][s] = tw.ext_add(L[r][s], tw.ext_monomial(m, F.mul(c, f)))
    return L


def two_acyclicity_certificate(sp: SpeciesWithPotential, pairing: list[tuple[str, str]]) -> list:
    """Per vertex pair, det of the Λ-submatrix selected by the pairing (elements of E)."""
    alg = sp.alg
    used = [x for pr in pairing for x in pr]
    if len(set(used)) != len(used):
        raise BadPairing("pairing arrows must be distinct")
    groups: dict[tuple[int, int], tuple[list[str], list[str]]] = {}
    for a, b in pairing:
        if a not in alg.ends or b not in alg.ends:
            raise BadPairing(f"unknown arrow in pair ({a}, {b})")
        ta, ha = alg.ends[a]
        tb, hb = alg.ends[b]
        if not (ha == tb and hb == ta):
            raise BadPairing(f"({a}, {b}) is not a 2-cycle")
        key = (min(ta, ha), max(ta, ha))
        rows, cols = groups.setdefault(key, ([], []))
        if rows and alg.ends[rows[0]] != (ta, ha):
            raise BadPairing(f"mixed orientations in the pairing for vertices {key}")
        rows.append(a)
        cols.append(b)
    E = ExtField(alg.tower)
    return [determinant(E, lambda_matrix(sp, *groups[key])) for key in sorted(groups)]


# splitting ---------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SplitResult:
    reduced: SpeciesWithPotential
    trivial: SpeciesWithPotential
    witness: Morphism  # sends S_red + S_triv to a cyclic equivalent of S
    pairing: list[tuple[str, str]] = field(default_factory=list)
    normalizer: Morphism | None = None  # inverse of the witness


def _choose_pairing(sp: SpeciesWithPotential):
    """Lexicographically first pairing with all Λ-minors nonzero, per vertex pair."""
    E = ExtField(sp.tower)
    plan = []
    for key, (rows, cols) in sorted(_vertex_pairs(sp.quiver).items()):
        L = lambda_matrix(sp, rows, cols)
        r = len(_rank_rows(E, L))
        if r == 0:
            continue
        found = None
        for P in combinations(range(len(rows)), r):
            for Qc in combinations(range(len(cols)), r):
                sub = [[L[p][q] for q in Qc] for p in P]
                if not E.is_zero(determinant(E, sub)):
                    found = (P, Qc)
                    break
            if found:
                break
        if found is None:  # pragma: no cover - a rank-r matrix has a nonzero r-minor
            raise NoValidPairing(f"no nonsingular minor for vertices {key}")
        plan.append((rows, cols, L, found[0], found[1]))
    return plan


def _rank_rows(E, L):
    from .linalg import rref

    if not L or not L[0]:
        return []
    return rref(E, L)[1]


def _change_of_arrows(sp: SpeciesWithPotential, plan) -> tuple[Morphism, list[tuple[str, str]]]:
    """φ with S^(2) = φ(Σ a_k b_k) cyclically, and the resulting pairing."""
    alg = sp.alg
    tw = alg.tower
    E = ExtField(tw)
    images = {a.name: alg.arrow(a.name) for a in alg.quiver.arrows}
    pairing = []
    for rows, cols, L, P, Qc in plan:
        sub = [[L[p][q] for q in Qc] for p in P]
        sub_inv = inverse(E, sub)
        for s, (p, q) in enumerate(zip(P, Qc)):
            new_b = alg.zero()
            for ell, b in enumerate(cols):
                if not E.is_zero(L[p][ell]):
                    new_b = new_b + ext_times_arrow(alg, L[p][ell], b)
            images[cols[q]] = new_b
            pairing.append((rows[p], cols[q]))
        for t in range(len(rows)):
            if t in P:
                continue
            lam_tQ = [L[t][q] for q in Qc]
            mu = [E.zero] * len(P)
            for s in range(len(P)):
                acc = E.zero
                for u in range(len(P)):
                    acc = E.add(acc, E.mul(lam_tQ[u], sub_inv[u][s]))
                mu[s] = acc
            for s, p in enumerate(P):
                if not E.is_zero(mu[s]):
                    images[rows[p]] = images[rows[p]] + ext_times_arrow(alg, mu[s], rows[t])
    return Morphism(alg, alg, images), pairing


def _peel_first(alg: PathAlgebra, p: Path, marked: set[str]):
    """Rotate a trailing-1 cycle so its first marked arrow x leads: returns (x, R) with p ~ x R."""
    A, W = p.arrows, p.slots
    ell = len(A)
    i = next(i for i, x in enumerate(A) if x in marked)
    body = W[:-1]
    arrows = A[i:] + A[:i]
    slots = body[i:] + body[:i]
    # leading slot moves to the end: x ω_{i+1} ... a ω_i
    x = arrows[0]
    t_x, h_x = alg.ends[x]
    rest_arrows = arrows[1:]
    rest_slots = slots[1:] + (slots[0],)
    R = Path(t_x, h_x, rest_arrows, rest_slots)
    return x, R


def split(sp: SpeciesWithPotential) -> SplitResult:
    """Right-equivalence (A,S) ≅ (A_red,S_red) ⊕ (A_triv,S_triv) with its witness."""
    alg = sp.alg
    F = alg.F
    N = alg.trunc
    plan = _choose_pairing(sp)
    if not plan:
        return SplitResult(sp, _sub_sp(sp, [], alg.zero()), identity_morphism(alg), [], identity_morphism(alg))
    phi_lin, pairing = _change_of_arrows(sp, plan)
    psi = invert_morphism(phi_lin)
    theta = psi
    S_cur = normalize_cyclic(apply_morphism(psi, sp.S))
    T2 = alg.zero()
    for a, b in pairing:
        T2 = T2 + alg.arrow(a) * alg.arrow(b)
    T2 = normalize_cyclic(T2)
    if not normalize_cyclic(S_cur.degree_part(2) - T2).is_zero():
        raise WitnessFailed("change of arrows did not diagonalize the degree-2 part")
    marked = {x for pr in pairing for x in pr}
    role = {a: ("a", k) for k, (a, _) in enumerate(pairing)}
    role.update({b: ("b", k) for k, (_, b) in enumerate(pairing)})
    for _ in range(N + 1):
        H = S_cur - T2
        mixed = {p: c for p, c in H.terms.items() if marked.intersection(p.arrows)}
        if not mixed:
            break
        u = [dict() for _ in pairing]
        v = [dict() for _ in pairing]
        for p, c in mixed.items():
            x, R = _peel_first(alg, p, marked)
            kind, k = role[x]
            target = u[k] if kind == "a" else v[k]
            target[R] = F.add(target[R], c) if R in target else c
        images = {a.name: alg.arrow(a.name) for a in alg.quiver.arrows}
        for k, (a, b) in enumerate(pairing):
            if v[k]:
                images[a] = images[a] - alg.elem(v[k])
            if u[k]:
                images[b] = images[b] - alg.elem(u[k])
        phi = Morphism(alg, alg, images)
        S_cur = normalize_cyclic(apply_morphism(phi, S_cur))
        theta = compose(phi, theta)
    else:
        raise WitnessFailed("elimination did not terminate within N rounds")
    red_terms = {p: c for p, c in S_cur.terms.items() if not marked.intersection(p.arrows)}
    red_arrows = [a.name for a in alg.quiver.arrows if a.name not in marked]
    reduced = _sub_sp(sp, red_arrows, Elem(alg, red_terms))
    trivial = _sub_sp(sp, [x for pr in pairing for x in pr], T2)
    witness = invert_morphism(theta)
    return SplitResult(reduced, trivial, witness, pairing, theta)


def _sub_sp(sp: SpeciesWithPotential, names: list[str], S: Elem) -> SpeciesWithPotential:
    keep = set(names)
    q = sp.quiver.replace_arrows([a for a in sp.quiver.arrows if a.name in keep])
    alg = sp.alg.with_quiver(q)
    return SpeciesWithPotential(alg, Elem(alg, dict(S.terms)))


def direct_sum_potential(res: SplitResult) -> Elem:
    """S_red + S_triv as an element of the original algebra."""
    alg = res.witness.source
    return Elem(alg, dict(res.reduced.S.terms)) + Elem(alg, dict(res.trivial.S.terms))


# premutation and mutation ----------------------------------------------------------


def check_no_two_cycle_at(quiver: WeightedQuiver, k: int) -> None:
    ins = {a.tail for a in quiver.incoming(k)}
    outs = {a.head for a in quiver.outgoing(k)}
    both = ins & outs
    if both:
        raise TwoCycleAtK(f"oriented 2-cycle between {k} and {sorted(both)}")


def premutated_quiver(quiver: WeightedQuiver, tower: FieldTower, k: int) -> WeightedQuiver:
    base = []
    for a in quiver.arrows:
        if a.head == k or a.tail == k:
            base.append(Arrow(star(a.name), a.head, a.tail))
        else:
            base.append(a)
    step = tower.d // quiver.weight(k)
    comps = []
    for a in quiver.incoming(k):
        for b in quiver.outgoing(k):
            for w in range(0, tower.d, step):
                comps.append(Arrow(composite_name(b.name, w, a.name), a.tail, b.head))
    return WeightedQuiver(quiver.weights, tuple(base + comps))


def bracket(sp: SpeciesWithPotential, k: int, target: PathAlgebra) -> Elem:
    """[S]: every passage b ω a through k becomes the composite arrow [b ω a]."""
    S = normalize_cyclic(sp.S, avoid=k)
    ends = sp.alg.ends
    terms = {}
    F = target.F
    for p, c in S.terms.items():
        if p.head == k:
            raise WitnessFailed("cycle could not be rotated away from k")
        arrows, slots = [], [p.slots[0]]
        A, W = p.arrows, p.slots
        i = 0
        while i < len(A):
            if ends[A[i]][0] == k:
                arrows.append(composite_name(A[i], W[i + 1], A[i + 1]))
                slots.append(W[i + 2])
                i += 2
            else:
                arrows.append(A[i] if k not in ends[A[i]] else star(A[i]))
                slots.append(W[i + 1])
                i += 1
        q = Path(p.head, p.tail, tuple(arrows), tuple(slots))
        terms[q] = F.add(terms[q], c) if q in terms else c
    return Elem(target, {p: c for p, c in terms.items() if not F.is_zero(c)})


def triangle_term(sp: SpeciesWithPotential, k: int, target: PathAlgebra) -> Elem:
    """Σ_{a,b} Σ_{ω ∈ B_k} ω^{-1} b* [b ω a] a*."""
    q = sp.quiver
    tw = sp.tower
    terms = {}
    for a in q.incoming(k):
        for b in q.outgoing(k):
            for w in target.basis_exponents(k):
                f, m = tw.eig_inv(w)
                path = Path(k, k, (star(b.name), composite_name(b.name, w, a.name), star(a.name)), (m, 0, 0, 0))
                terms[path] = f
    return Elem(target, terms)


def premutate(sp: SpeciesWithPotential, k: int) -> SpeciesWithPotential:
    """μ̃_k: composite arrows, reversal at k, potential [S] + Σ ω^{-1} b*[bωa]a*."""
    q = sp.quiver
    if not 1 <= k <= q.n:
        raise InputError(f"vertex {k} outside 1..{q.n}")
    check_no_two_cycle_at(q, k)
    new_q = premutated_quiver(q, sp.tower, k)
    alg = sp.alg.with_quiver(new_q)
    S = bracket(sp, k, alg) + triangle_term(sp, k, alg)
    return SpeciesWithPotential(alg, S)


def mutate(sp: SpeciesWithPotential, k: int) -> SpeciesWithPotential:
    """μ_k: the reduced part of the premutation."""
    return split(premutate(sp, k)).reduced


def mutate_sequence(sp: SpeciesWithPotential, seq) -> SpeciesWithPotential:
    for k in seq:
        sp = mutate(sp, k)
    return sp


def base_change(sp: SpeciesWithPotential, m: int) -> SpeciesWithPotential:
    """The same quiver and potential over GF(p^m); coefficients must lie in GF(p)."""
    tower = extend_base(sp.tower, m)
    if tower is sp.tower:
        return sp
    alg = sp.alg.with_tower(tower)
    K = alg.F
    return SpeciesWithPotential(alg, Elem(alg, {p: K.embed_prime(c) for p, c in sp.S.terms.items()}))


def restrict(sp: SpeciesWithPotential, I) -> SpeciesWithPotential:
    """Delete arrows touching vertices outside I and every term through them.

    Vertices outside I stay as isolated vertices so that labels are stable.
    """
    I = set(I)
    if not I:
        raise EmptySubset("restriction needs a nonempty vertex set")
    if not I <= set(sp.quiver.vertices):
        raise InputError(f"vertices {sorted(I - set(sp.quiver.vertices))} do not exist")
    keep = [a.name for a in sp.quiver.arrows if a.head in I and a.tail in I]
    ks = set(keep)
    S = Elem(sp.alg, {p: c for p, c in sp.S.terms.items() if ks.issuperset(p.arrows)})
    return _sub_sp(sp, keep, S)


# involutivity witness ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class InvolutionWitness:
    double: SpeciesWithPotential  # μ̃_k μ̃_k (A, S)
    phi1: Morphism
    phi2: Morphism
    phi3: Morphism
    trivial_arrows: list[str]
    T: Elem  # trivial potential on the composite arrows
    target: Elem  # S + T in the algebra of ``double``

    @property
    def chain(self) -> Morphism:
        return compose(self.phi3, compose(self.phi2, self.phi1))


def involution_witness(sp: SpeciesWithPotential, k: int) -> InvolutionWitness:
    """Automorphisms φ1, φ2, φ3 with φ3φ2φ1(μ̃_kμ̃_k S) ~ S + T, verified."""
    if not sp.is_reduced():
        raise InputError("involution witness needs a reduced SP")
    check_no_two_cycle_at(sp.quiver, k)
    q = sp.quiver
    tw = sp.tower
    once = premutate(sp, k)
    twice = premutate(once, k)
    alg = twice.alg
    F = alg.F
    ins, outs = q.incoming(k), q.outgoing(k)
    Bk = list(alg.basis_exponents(k))
    first = [(a.name, b.name, w) for a in ins for b in outs for w in Bk]
    comp1 = {composite_name(b, w, a): (a, b, w) for a, b, w in first}

    def comp2(a, b, w):
        # [a* ω̄ b*] paired with [b ω a], ω̄ = ω^{-1} up to the scalar c^{-1}
        wbar = (tw.d - w) % tw.d
        return composite_name(star(a), wbar, star(b))

    ident = {x.name: alg.arrow(x.name) for x in alg.quiver.arrows}
    minus_one = F.neg(F.one)
    phi1 = Morphism(alg, alg, {**ident, **{b.name: alg.arrow(b.name, minus_one) for b in outs}})
    S2 = normalize_cyclic(apply_morphism(phi1, twice.S))
    im2 = dict(ident)
    for name, (a, b, w) in comp1.items():
        im2[name] = alg.arrow(name) + alg.term(None, [b, a], [0, w, 0])
    phi2 = Morphism(alg, alg, im2)
    S3 = normalize_cyclic(apply_morphism(phi2, S2))
    S_home = normalize_cyclic(Elem(alg, dict(sp.S.terms)))
    R = S3 - S_home
    collected: dict[str, dict] = {name: {} for name in comp1}
    marked = set(comp1)
    for p, c in R.terms.items():
        if not marked.intersection(p.arrows):
            raise WitnessFailed(f"term {p} of φ2φ1(S1) - S carries no composite arrow")
        x, rest = _peel_first(alg, p, marked)
        bucket = collected[x]
        bucket[rest] = F.add(bucket[rest], c) if rest in bucket else c
    T = alg.zero()
    im3 = dict(ident)
    c_base = F.from_int(tw.c)
    for name, (a, b, w) in comp1.items():
        scale = F.one if w == 0 else tw.c_inv
        partner = comp2(a, b, w)
        T = T + alg.arrow(name) * alg.arrow(partner, scale)
        g = Elem(alg, collected[name])
        g = g.scale(F.one if w == 0 else c_base)
        f = g - alg.arrow(partner)
        im3[partner] = alg.arrow(partner) - f
    phi3 = Morphism(alg, alg, im3)
    final = normalize_cyclic(apply_morphism(phi3, S3))
    T = normalize_cyclic(T)
    target = normalize_cyclic(S_home + T)
    if not (final - target).is_zero():
        raise WitnessFailed("φ3φ2φ1(S1) differs from S + T")
    trivial_arrows = list(comp1) + [comp2(a, b, w) for a, b, w in first]
    return InvolutionWitness(twice, phi1, phi2, phi3, trivial_arrows, T, target)
