"""Walk the 4-cycle over GF(7) through mu_4, mu_2 and back.

Run with ``python demos/running_example.py``.
"""

from spforge import involution_witness, mutate, premutate, running_example, split
from spforge.cli import format_potential
from spforge.potentials import jacobian_data
from spforge.quivers import wq_to_matrix


def show(title, sp):
    print(f"== {title}")
    print("B =", wq_to_matrix(sp.quiver).B)
    for line in format_potential(sp.S):
        print("  ", line)
    jd = jacobian_data(sp.S, sp.alg.trunc)
    print(f"   Jacobian dimension {jd.dim}, by path length {jd.quotient_by_length[:8]}")
    print()


sp = running_example(trunc=24)
show("start", sp)

pre = premutate(sp, 4)
show("premutation at 4 (already reduced)", pre)

mu4 = mutate(sp, 4)
show("mu_4", mu4)

# mu_2 of that creates 2-cycles; the splitting removes them
pre2 = premutate(mu4, 2)
res = split(pre2)
print("== trivial part cancelled at mu_2")
for line in format_potential(res.trivial.S):
    print("  ", line)
print()
show("mu_2 mu_4", res.reduced)

iw = involution_witness(sp, 4)
print("== mu_4 mu_4 returns to the start plus a trivial part")
for line in format_potential(iw.T):
    print("  ", line)
show("mu_4 mu_4 after splitting", mutate(mu4, 4))
