"""Random search for potentials that stay 2-acyclic along a mutation sequence."""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import Exhausted, InputError, MathError
from .fields import FieldTower, extend_base
from .pathalg import Elem, PathAlgebra, format_path, path_key
from .potentials import canonical_rotation
from .quivers import WeightedQuiver
from .spmut import SpeciesWithPotential, mutate


def potential_hash(S: Elem) -> str:
    F = S.alg.F
    text = ";".join(f"{F.fmt(c)}*{format_path(p)}" for p, c in S.sorted_terms())
    return hashlib.sha256(text.encode()).hexdigest()


class TraceStep(NamedTuple):
    step: int
    k: int | None  # None for the starting SP
    quiver: WeightedQuiver
    potential_hash: str


@dataclass
class NondegResult:
    ok: bool
    trace: list[TraceStep] = field(default_factory=list)
    failed_step: int | None = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def _check_sequence(quiver: WeightedQuiver, seq) -> tuple[int, ...]:
    seq = tuple(int(k) for k in seq)
    for k in seq:
        if not 1 <= k <= quiver.n:
            raise InputError(f"vertex {k} outside 1..{quiver.n}")
    for a, b in zip(seq, seq[1:]):
        if a == b:
            raise InputError("consecutive entries of the sequence must differ")
    return seq


def is_sequence_nondegenerate(sp: SpeciesWithPotential, seq) -> NondegResult:
    """Mutate along ``seq`` (applied left to right), requiring 2-acyclicity at every stage."""
    seq = _check_sequence(sp.quiver, seq)
    if not sp.is_2acyclic():
        raise InputError("the starting quiver has a 2-cycle")
    res = NondegResult(True, [TraceStep(0, None, sp.quiver, potential_hash(sp.S))])
    cur = sp
    for t, k in enumerate(seq, start=1):
        try:
            cur = mutate(cur, k)
        except MathError as exc:
            return NondegResult(False, res.trace, t, f"degenerate at step {t}: {exc}")
        res.trace.append(TraceStep(t, k, cur.quiver, potential_hash(cur.S)))
        if not cur.is_2acyclic():
            pairs = cur.quiver.two_cycle_pairs()
            return NondegResult(False, res.trace, t, f"degenerate at step {t}: 2-cycles between {pairs}")
    return res


def candidate_cycles(alg: PathAlgebra, max_len: int) -> list:
    """Representatives of cyclic paths of length 2..max_len up to rotation."""
    reps = {}
    for ell in range(2, min(max_len, alg.trunc) + 1):
        for p in alg.paths(ell):
            if p.head != p.tail or p.slots[-1] != 0:
                continue
            _, q = canonical_rotation(alg, p)
            reps[q] = None
    return sorted(reps, key=path_key)


@dataclass(frozen=True)
class SequenceQuery:
    quiver: WeightedQuiver
    tower: FieldTower
    seq: tuple[int, ...]
    max_len: int = 6
    budget: int = 50
    seed: int = 1
    max_m: int = 25
    trunc: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "seq", _check_sequence(self.quiver, self.seq))
        if not self.quiver.is_2acyclic():
            raise InputError("the quiver must be 2-acyclic")
        if self.budget < 1:
            raise InputError("budget must be positive")


class SearchResult(NamedTuple):
    sp: SpeciesWithPotential
    tower: FieldTower
    m: int
    attempts: int
    check: NondegResult


def escalation_degrees(d: int, max_m: int) -> list[int]:
    """1 followed by every m in 2..max_m coprime to d."""
    return [1] + [m for m in range(2, max_m + 1) if math.gcd(m, d) == 1]


def search_sequence_nondegenerate(q: SequenceQuery) -> SearchResult:
    """First sampled potential that verifies, escalating the base field on failure."""
    rng = random.Random(q.seed)
    attempts = 0
    for m in escalation_degrees(q.tower.d, q.max_m):
        tower = extend_base(q.tower, m)
        alg = PathAlgebra(q.quiver, tower, q.trunc)
        F = alg.F
        cycles = candidate_cycles(alg, q.max_len)
        for _ in range(q.budget if cycles else 1):
            attempts += 1
            S = alg.elem({p: F.random(rng) for p in cycles})
            sp = SpeciesWithPotential(alg, S)
            check = is_sequence_nondegenerate(sp, q.seq)
            if check.ok:
                return SearchResult(sp, tower, m, attempts, check)
    raise Exhausted(f"no nondegenerate potential after {attempts} samples up to m={q.max_m}")
