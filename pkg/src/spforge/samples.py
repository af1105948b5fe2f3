"""Ready-made and random species with potentials for tests, demos and ``verify``."""

from __future__ import annotations

import math
import random
from itertools import combinations

from .fields import FieldTower, default_c, make_tower, smallest_prime_1_mod
from .pathalg import Elem, Morphism, PathAlgebra
from .quivers import Arrow, WeightedQuiver
from .spmut import SpeciesWithPotential


def running_tower() -> FieldTower:
    return make_tower(7, 6, 3)


def running_quiver() -> WeightedQuiver:
    """The oriented 4-cycle 1 -> 2 -> 3 -> 4 -> 1 with weights (1, 2, 1, 3)."""
    return WeightedQuiver(
        (1, 2, 1, 3),
        (Arrow("delta", 1, 2), Arrow("gamma", 2, 3), Arrow("beta", 3, 4), Arrow("alpha", 4, 1)),
    )


def running_example(trunc: int | None = None) -> SpeciesWithPotential:
    """S = αβγδ + α v² β γ v³ δ over GF(7) ⊂ GF(7)[v]/(v⁶ - 3)."""
    return SpeciesWithPotential.build(
        running_quiver(),
        running_tower(),
        [(1, "alpha beta gamma delta"), (1, "alpha v^2 beta gamma v^3 delta")],
        trunc=trunc,
    )


def tower_for_degree(d: int) -> FieldTower:
    p = smallest_prime_1_mod(d)
    return make_tower(p, d, default_c(p, d))


def random_coprime_weights(rng: random.Random, d: int, n: int) -> tuple[int, ...]:
    """n pairwise-coprime proper divisors of d, at least one of them nontrivial."""
    divisors = [x for x in range(2, d) if d % x == 0]
    while True:
        w = []
        for _ in range(n):
            opts = [x for x in divisors if all(math.gcd(x, y) == 1 for y in w)]
            w.append(rng.choice(opts) if opts and rng.random() < 0.5 else 1)
        if any(x > 1 for x in w) or not divisors:
            return tuple(w)


def random_quiver(
    rng: random.Random,
    weights: tuple[int, ...],
    max_parallel: int = 1,
    two_cycles: bool = False,
) -> WeightedQuiver:
    """A directed cycle through all vertices plus random extra arrows.

    Extra arrows follow a random orientation of each vertex pair, so the
    quiver is 2-acyclic unless ``two_cycles`` adds reversed arrows.
    """
    n = len(weights)
    order = list(range(1, n + 1))
    rng.shuffle(order)
    arrows = []

    def add(tail, head):
        arrows.append(Arrow(f"x{len(arrows) + 1}", tail, head))

    direction = {}
    for r in range(n):
        tail, head = order[r], order[(r + 1) % n]
        add(tail, head)
        direction[frozenset((tail, head))] = (tail, head)
    for i, j in combinations(range(1, n + 1), 2):
        tail, head = direction.get(frozenset((i, j)), (i, j) if rng.random() < 0.5 else (j, i))
        for _ in range(rng.randint(0, max_parallel)):
            add(tail, head)
        if two_cycles and rng.random() < 0.5:
            add(head, tail)
    return WeightedQuiver(weights, arrows)


def arrow_cycles(quiver: WeightedQuiver, max_len: int) -> list[tuple[str, ...]]:
    """Closed walks of length 2..max_len as arrow tuples, one per rotation class."""
    into: dict[int, list] = {v: [] for v in quiver.vertices}
    for a in quiver.arrows:
        into[a.head].append(a)
    found = set()

    def walk(start, at, arrows):
        if arrows and at == start and len(arrows) >= 2:
            found.add(min(arrows[r:] + arrows[:r] for r in range(len(arrows))))
        if len(arrows) == max_len:
            return
        for a in into[at]:
            walk(start, a.tail, arrows + (a.name,))

    for v in quiver.vertices:
        walk(v, v, ())
    return sorted(found)


def random_potential(
    rng: random.Random,
    alg: PathAlgebra,
    max_len: int = 6,
    terms: int = 6,
) -> Elem:
    """Up to ``terms`` random cycles with random slots and coefficients."""
    cycles = arrow_cycles(alg.quiver, min(max_len, alg.trunc))
    F = alg.F
    S = alg.zero()
    for arrows in rng.sample(cycles, min(terms, len(cycles))):
        heads = [alg.ends[a][1] for a in arrows]
        slots = [rng.choice(list(alg.basis_exponents(v))) for v in heads] + [0]
        S = S + alg.term(F.random(rng), arrows, slots)
    return S


def random_sp(
    rng: random.Random,
    n: int | None = None,
    d: int | None = None,
    two_cycles: bool = False,
    max_len: int = 6,
    terms: int = 6,
    trunc: int = 8,
) -> SpeciesWithPotential:
    """Random SP on 3-5 vertices with weights dividing d ∈ {6, 10, 15}."""
    n = rng.randint(3, 5) if n is None else n
    d = rng.choice((6, 10, 15)) if d is None else d
    tower = tower_for_degree(d)
    weights = random_coprime_weights(rng, d, n)
    q = random_quiver(rng, weights, max_parallel=1 if n > 3 else 2, two_cycles=two_cycles)
    alg = PathAlgebra(q, tower, trunc)
    return SpeciesWithPotential(alg, random_potential(rng, alg, max_len, terms))


def random_path_elem(rng: random.Random, alg: PathAlgebra, head: int, tail: int, lengths=(2, 3), count: int = 2) -> Elem:
    F = alg.F
    out: dict = {}
    for ell in lengths:
        paths = list(alg.paths(ell, head=head, tail=tail))
        for p in rng.sample(paths, min(count, len(paths))):
            out[p] = F.random(rng)
    return alg.elem(out)


def random_automorphism(rng: random.Random, alg: PathAlgebra, higher: bool = True) -> Morphism:
    """Unitriangular-on-parallel-arrows linear part plus random higher terms."""
    F = alg.F
    q = alg.quiver
    images = {}
    for idx, a in enumerate(q.arrows):
        lam = F.random(rng)
        while F.is_zero(lam):
            lam = F.random(rng)
        img = alg.arrow(a.name, lam)
        for b in q.arrows[:idx]:
            if (b.tail, b.head) == (a.tail, a.head) and rng.random() < 0.5:
                img = img + alg.arrow(b.name, F.random(rng))
        if higher:
            img = img + random_path_elem(rng, alg, a.head, a.tail)
        images[a.name] = img
    return Morphism(alg, alg, images)
