"""Mutate decorated representations and compare with reflection functors."""

import random

from spforge.dreps import (
    are_isomorphic,
    mutate_decorated,
    negative_simple,
    random_rep,
    reflect_sink,
    simple,
)
from spforge.quivers import Arrow, WeightedQuiver
from spforge.samples import running_example, running_tower
from spforge.spmut import SpeciesWithPotential

rng = random.Random(3)
sp = running_example(trunc=24)

rep = random_rep(sp, rng, max_dim=3)
print("random representation, dims", rep.dims)
for k in sp.quiver.vertices:
    new_sp, out = mutate_decorated(rep, sp, k)
    print(f"  mu_{k}: dims {out.dims}, decoration {out.deco}")

print()
for k in sp.quiver.vertices:
    new_sp, out = mutate_decorated(simple(sp.quiver, sp.tower, k), sp, k)
    same = are_isomorphic(out, negative_simple(new_sp.quiver, sp.tower, k))
    print(f"simple S_{k} goes to the negative simple: {same}")

# on an A_3-shaped line with zero potential, vertex 3 is a sink
line = SpeciesWithPotential.build(
    WeightedQuiver((2, 3, 1), (Arrow("a", 1, 2), Arrow("b", 2, 3))),
    running_tower(),
    [],
    trunc=24,
)
rep = random_rep(line, rng, max_dim=3, keep_prob=1.0)
_, mutated = mutate_decorated(rep, line, 3)
print()
print("line representation, dims", rep.dims)
print("  mu_3 dims", mutated.dims, "decoration", mutated.deco)
print("  reflection at the sink dims", reflect_sink(rep, line, 3).dims)
