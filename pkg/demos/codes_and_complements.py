"""Linear subspace codes from partitions of an independent set."""
from latticecodes import gfcore
from latticecodes import lattice_props as lp
from latticecodes import subspace_codes as sc
from latticecodes.linear_lattice import build_projective_lattice

F3 = gfcore.field_spec(3)
E = ((1, 0, 0, 0), (0, 1, 2, 0), (0, 0, 1, 1))
pc = sc.PartitionCodeSpec(F3, 4, E, ((0, 2), (1,)))
C = sc.build_partition_code(pc)
for w, idx in zip(C.codewords, C.index_sets):
    print(sorted(idx), w)
print(C.boxplus_table)
print(sc.verify_linear(C).axioms)

# the codewords form a Boolean sublattice
print(lp.is_distributive(sc.code_lattice(C)))

# with all of F_2^3 as a codeword a complement exists: X -> X ⊞ F_2^3
C = sc.canonical_complement(sc.fixed_basis_code(2, 3))
print(C.complement_map, sc.verify_complement(C).ok)
print(sc.one_dim_bound_check(C.codewords, q=2, complement=C.complement_map))

# no complement on all of P_2(2): three lines, each would need a partner line
print(sc.search_complement(build_projective_lattice(2, 2).subspaces))

# breaking one table entry is caught
t = sc.fixed_basis_code(2, 3).boxplus_table.copy()
t[1, 2] = 0
rep = sc.verify_linear(sc.make_code(C.codewords, boxplus=t))
print(rep.failed, rep.witness)

# rebuild a code from a Boolean sublattice of P_2(3)
words = [gfcore.span(v, 2, 3) for v in ([], [(1, 1, 0)], [(0, 0, 1)], [(1, 1, 0), (0, 0, 1)])]
print(sc.code_from_distributive_sublattice(words).blocks)
