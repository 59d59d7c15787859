"""Subspaces of F_q^n as a lattice: build, inspect, export."""
import numpy as np

from latticecodes import gfcore
from latticecodes import lattice_core as lc
from latticecodes import lattice_props as lp
from latticecodes.linear_lattice import build_projective_lattice, metric_equivalence_check

# the plane over GF(2): zero, three lines, the whole plane
P = build_projective_lattice(2, 2)
L = P.lattice
print(L.size, "subspaces:", L.labels)
print(lc.hasse_export(L, "plane"))

# it is modular but the three lines form a diamond
print(lp.is_modular(L))
print(lp.is_distributive(L))

# the top has more than one irredundant atom decomposition
rep = lp.is_uniquely_atomistic(L)
print(rep.witness.kind, rep.witness.sets)

# bigger: F_2^3 and F_3^3
for q, n in [(2, 3), (3, 3), (2, 4)]:
    P = build_projective_lattice(q, n)
    W = lc.whitney_numbers(P.lattice)
    print(f"q={q} n={n}: {P.size} subspaces, Whitney {W}",
          [gfcore.gaussian_binomial(n, k, q) for k in range(n + 1)])

# height difference of join and meet is the subspace distance
P = build_projective_lattice(3, 2)
h = P.lattice.heights
d = h[P.lattice.join] - h[P.lattice.meet]
print(d)
print(metric_equivalence_check(P).ok)

# GF(4) has nontrivial arithmetic (x encoded as 2)
F = gfcore.get_field(4)
print(np.array(F.mul))
X = gfcore.span([(1, 2, 3), (2, 3, 1)], 4, 3)
print(X, X.dim, len(X.points()))
