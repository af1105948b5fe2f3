"""Randomized self-checks behind ``spforge verify``.

Each suite draws its own random objects from a seeded generator and checks
an identity that holds by construction; any failure indicates a bug.
"""

from __future__ import annotations

import random
from typing import Callable, NamedTuple

from .dreps import (
    are_isomorphic,
    double_mutation_back,
    mutate_decorated,
    mutate_rep,
    random_rep,
    triangle,
    validate_rep,
)
from .errors import SpforgeError
from .pathalg import apply_morphism
from .potentials import cyc_deriv, cyclically_equivalent, normalize_cyclic
from .quivers import ExchangeMatrix, matrix_to_wq, mutate_matrix, mutate_wq, wq_to_matrix
from .samples import random_sp, running_example
from .spmut import direct_sum_potential, involution_witness, mutate, premutate, split
from .unfold import check_unfolding, composite_mutate, construct_divisible


class SuiteReport(NamedTuple):
    name: str
    trials: int
    failures: list[str]

    @property
    def ok(self) -> bool:
        return not self.failures


def _involution(rng: random.Random, trial: int) -> list[str]:
    sp = random_sp(rng, trunc=6)
    k = rng.choice(list(sp.quiver.vertices))
    involution_witness(sp, k)
    out = []
    once = mutate(sp, k)
    if once.is_2acyclic():
        twice = mutate(once, k)
        if not twice.quiver.isomorphic_ignoring_names(sp.quiver):
            out.append(f"trial {trial}: μ_{k}μ_{k} changed the quiver")
    return out


def _split(rng: random.Random, trial: int) -> list[str]:
    sp = random_sp(rng, two_cycles=True, trunc=6)
    res = split(sp)
    out = []
    if not res.reduced.is_reduced():
        out.append(f"trial {trial}: reduced part has a degree-2 term")
    image = apply_morphism(res.witness, direct_sum_potential(res))
    if not cyclically_equivalent(image, sp.S):
        out.append(f"trial {trial}: witness does not carry S_red + S_triv to S")
    again = split(res.reduced)
    if again.pairing or not again.reduced.same_as(res.reduced):
        out.append(f"trial {trial}: splitting is not idempotent")
    return out


def _derivatives(rng: random.Random, trial: int) -> list[str]:
    sp = random_sp(rng, trunc=6)
    out = []
    alg = sp.alg
    rotated = alg.zero()
    # rotate every term by one arrow: a_1 ... a_l -> a_2 ... a_l a_1
    for p, c in sp.S.terms.items():
        head = alg.term(None, p.arrows[:1], p.slots[:2])
        tail = alg.term(c, p.arrows[1:], (0,) + p.slots[2:])
        rotated = rotated + tail * head
    if not normalize_cyclic(rotated) == sp.S:
        out.append(f"trial {trial}: rotation changed the normal form")
    for a in sp.quiver.arrow_names:
        if cyc_deriv(rotated, a) != cyc_deriv(sp.S, a):
            out.append(f"trial {trial}: ∂_{a} differs on a cyclically equivalent potential")
    return out


def _rep_mutation(rng: random.Random, trial: int) -> list[str]:
    base = running_example(trunc=10)
    if trial % 2:
        base = mutate(base, 4)
    rep = random_rep(base, rng, max_dim=3)
    out = []
    p = base.tower.p
    for k in base.quiver.vertices:
        T = triangle(rep, base, k)
        if (T.gamma @ T.beta % p).any() or (T.alpha @ T.gamma % p).any():
            out.append(f"trial {trial}, k={k}: triangle does not compose to zero")
        spk, once = mutate_decorated(rep, base, k)
        if validate_rep(once, spk):
            out.append(f"trial {trial}, k={k}: mutated representation is invalid")
        if not spk.is_2acyclic():
            continue
        _, twice = mutate_decorated(once, spk, k)
        if (twice.dims, twice.deco) != (rep.dims, rep.deco):
            out.append(f"trial {trial}, k={k}: double mutation changed the dimension vector")
        if premutate(base, k).is_reduced() and not are_isomorphic(rep, double_mutation_back(rep, base, k)):
            out.append(f"trial {trial}, k={k}: double mutation is not isomorphic to the input")
        other = mutate_rep(rep, base, k, splitting="random", rng=rng)
        if not are_isomorphic(once, other):
            out.append(f"trial {trial}, k={k}: result depends on the splitting data")
    return out


def _unfolding(rng: random.Random, trial: int) -> list[str]:
    samples = [
        (ExchangeMatrix(((0, -2), (1, 0)), (1, 2)), (2, 1)),
        (ExchangeMatrix(((0, 2, -2), (-1, 0, 1), (1, -1, 0)), (1, 2, 2)), (2, 1, 1)),
    ]
    B, e = samples[trial % len(samples)]
    u = construct_divisible(B, e)
    out = []
    length = rng.randint(1, 8)
    prev = None
    for step in range(length):
        k = rng.choice([x for x in range(1, B.n + 1) if x != prev])
        prev = k
        u = composite_mutate(u, k)
        bad = check_unfolding(u)
        if bad:
            out.append(f"trial {trial}, step {step}: {bad[0]}")
            break
    return out


def _matrix(rng: random.Random, trial: int) -> list[str]:
    sp = random_sp(rng, trunc=4)
    q = sp.quiver
    B = wq_to_matrix(q)
    k = rng.choice(list(q.vertices))
    out = []
    if mutate_matrix(mutate_matrix(B, k), k) != B:
        out.append(f"trial {trial}: μ_{k} is not an involution on B")
    if wq_to_matrix(mutate_wq(q, k)) != mutate_matrix(B, k):
        out.append(f"trial {trial}: quiver and matrix mutation disagree at {k}")
    if not matrix_to_wq(B).isomorphic_ignoring_names(q):
        out.append(f"trial {trial}: the quiver is not recovered from its matrix")
    return out


SUITES: dict[str, Callable[[random.Random, int], list[str]]] = {
    "involution": _involution,
    "split": _split,
    "derivatives": _derivatives,
    "rep-mutation": _rep_mutation,
    "unfolding": _unfolding,
    "matrix": _matrix,
}


def run_suite(name: str, trials: int = 20, seed: int = 1) -> SuiteReport:
    if name not in SUITES:
        raise KeyError(name)
    check = SUITES[name]
    rng = random.Random(seed)
    failures: list[str] = []
    for t in range(trials):
        try:
            failures.extend(check(rng, t))
        except SpforgeError as exc:
            failures.append(f"trial {t}: {type(exc).__name__}: {exc}")
    return SuiteReport(name, trials, failures)

