"""Divisible unfoldings survive mutation; the (2, 3) family has no unfolding."""

from spforge.quivers import ExchangeMatrix
from spforge.unfold import (
    candidate_count,
    check_unfolding,
    composite_mutate,
    construct_divisible,
    exhaustive_obstruction_search,
    obstruction_witness,
    structured_candidate,
)

B = ExchangeMatrix(((0, 2, -2), (-1, 0, 1), (1, -1, 0)), (1, 2, 2))
u = construct_divisible(B, (2, 1, 1))
print("divisible unfolding of B:")
print(u.C)
seq = [1, 2, 3, 1, 3, 2]
for k in seq:
    u = composite_mutate(u, k)
print("after", seq, "violations:", check_unfolding(u) or "none")

print()
cand = structured_candidate(2, 3, 6)
w = obstruction_witness(2, 3, 6, cand)
print("E_1 x E_3 block after mu_2 mu_4 of the structured candidate:")
print(w.block)
print("positive entry at", w.positive, "negative entry at", w.negative)

report = exhaustive_obstruction_search(2, 3, 6)
print()
print(f"{report.examined} candidates up to relabeling "
      f"({candidate_count(2, 3, 6)} choices per block), "
      f"{len(report.counterexamples)} escape the sign clash")
