"""How big can a distributive sublattice of a geometric lattice be?

Scan every subset of P_2(3) (2^16 of them), keep the sublattices, and sort
out the distributive ones.  The answer is 2^3 = 8, hit once per unordered
basis of F_2^3.
"""
from collections import Counter
from math import comb

from latticecodes import gfcore
from latticecodes import lattice_core as lc
from latticecodes import theorem_lab as tl

P = tl.projective(2, 3)
L = P.lattice
res = tl.enumerate_sublattices(L, "exhaustive", name="P2(3)")
print(res.to_json() | {"extremal_sublattices": len(res.extremal_sublattices)})

sizes = Counter(len(S) for S in res.distributive_sublattices)
print(sorted(sizes.items()))

# each maximal one is spanned by three independent lines
for S in res.extremal_sublattices[:3]:
    print([P.subspaces[i].label() for i in sorted(S)])

rep = tl.verify_T2(L, res)
print(rep.ok, rep.details)

# a distributive sublattice with one atom, an atom of the host, and the top:
# still only 3 elements
e1 = P.index_of[gfcore.span([(1, 0, 0)], 2, 3)]
S = frozenset({L.bottom, e1, L.top})
print(S in res.distributive_sublattices, tl.sub_atoms(L, S))

# Whitney numbers of each distributive sublattice stay under C(3, k)
for S in res.extremal_sublattices[:1] + res.distributive_sublattices[100:103]:
    M = lc.restrict(L, S)[0]
    print(lc.whitney_numbers(M), [comb(3, k) for k in range(4)])

# Pi_4 is geometric but not modular; the same bound holds
Pi = lc.partition_lattice(4)
res = tl.enumerate_sublattices(Pi, "exhaustive", name="Pi4")
print(res.max_distributive_size, len(res.extremal_sublattices))
