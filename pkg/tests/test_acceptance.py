"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line with its runtime; the lines are printed
in the terminal summary (see conftest.py).  Run directly with
``python tests/test_acceptance.py`` for the lines alone.
"""
import itertools
import time
from math import comb

import numpy as np
import pytest

from latticecodes import gfcore
from latticecodes import lattice_core as lc
from latticecodes import lattice_props as lp
from latticecodes import subspace_codes as sc
from latticecodes import theorem_lab as tl
from latticecodes.errors import PreconditionError
from latticecodes.linear_lattice import build_projective_lattice, metric_equivalence_check

import oracles

RESULTS = []


def run(number, title, limit, body):
    # cold caches so the timing covers every build the criterion needs
    tl.build_catalog.cache_clear()
    tl.projective.cache_clear()
    t0 = time.perf_counter()
    err = None
    try:
        body()
    except AssertionError as exc:
        err = exc
    elapsed = time.perf_counter() - t0
    ok = err is None and elapsed < limit
    note = "" if err is None else f" ({err})"
    if err is None and elapsed >= limit:
        note = f" (exceeded {limit:g} s)"
    RESULTS.append(f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {elapsed:7.2f} s  {title}{note}")
    if err is not None:
        raise err
    assert elapsed < limit, f"criterion {number} took {elapsed:.2f} s, limit {limit} s"


def population():
    return tl.build_population(samples=500, seed=0)


def p23_survey():
    P = tl.projective(2, 3)
    return P, tl.enumerate_sublattices(P.lattice, "exhaustive", name="P2(3)")


def test_criterion_01_small_linear_lattice():
    def body():
        P = build_projective_lattice(2, 2)
        L = P.lattice
        assert L.size == 5 and len(L.atoms) == 3
        assert lp.is_modular(L).holds
        d = lp.is_distributive(L)
        lines = tuple(i for i, s in enumerate(P.subspaces) if s.dim == 1)
        assert not d.holds and d.witness.kind == "M3" and tuple(sorted(d.witness.elements)) == lines
        assert lp.is_geometric(L).holds
        u = lp.is_uniquely_atomistic(L)
        assert not u.holds and u.witness.kind == "ambiguous_decomposition"
        assert u.witness.elements == (P.index_of[gfcore.full_space(2, 2)],)
        assert lp.verify_witness(L, u.witness) and lp.verify_witness(L, d.witness)
    run(1, "P_2(2): 5 elements, modular, M3 witness, geometric, ambiguous top", 1.0, body)


def test_criterion_02_pattern_equivalence():
    def body():
        pop = population()
        checked = 0
        for name, L in pop.instances:
            modular = lp.is_modular(L).holds
            assert modular == (lp.find_N5(L) is None), name
            if modular:
                assert lp.is_distributive(L).holds == (lp.find_M3(L) is None), name
            checked += 1
        assert checked >= len(tl.build_catalog()) + 500
    run(2, "modular iff no N5; distributive iff no M3 (catalog + 500 samples)", 60.0, body)


def test_criterion_03_unique_atomisticity():
    def body():
        pop = population()
        for name, L in pop.instances:
            ua = lp.is_uniquely_atomistic(L, cross_check=False).holds
            if len(L.atoms) <= lp.ORACLE_MAX_ATOMS:
                assert ua == lp.uniquely_atomistic_by_subsets(L)[0], name
            if lp.is_atomistic(L).holds:
                assert lp.is_distributive(L).holds == ua, name
            if ua:
                assert lp.is_modular(L).holds and lp.is_geometric(L).holds, name
    run(3, "distributive iff uniquely atomistic; UA implies modular and geometric", 120.0, body)


def test_criterion_04_largest_distributive_sublattices():
    def body():
        P = tl.projective(2, 3)
        L = P.lattice
        res = tl.enumerate_sublattices(L, "exhaustive", name="P2(3)")
        assert res.mode == "exhaustive"
        assert res.max_distributive_size == 8
        full = P.index_of[gfcore.full_space(2, 3)]
        for S in res.extremal_sublattices:
            atoms = [x for x in S if L.heights[x] == 1]
            assert full in S and len(atoms) == 3
            assert gfcore.rank([P.subspaces[a].basis[0] for a in atoms], 2, 3) == 3
        assert len(res.extremal_sublattices) == 28 == 7 * 6 * 4 // 6 == oracles.unordered_bases(2, 3)
        assert tl.verify_T2(L, res).ok
    run(4, "P_2(3) exhaustive: max distributive size 8, 28 extremal", 120.0, body)


def test_criterion_05_height_metric():
    def body():
        for q, top in ((2, 4), (3, 3)):
            for n in range(1, top + 1):
                P = tl.projective(q, n)
                rep = lc.check_valuation(P.lattice, [int(h) for h in P.lattice.heights])
                assert rep.is_valuation and rep.is_isotone and rep.is_positive and rep.metric_ok, (q, n)
                assert metric_equivalence_check(P).agree, (q, n)
        by_dim = [0] * 4
        for pts in oracles.all_subspaces(2, 3):
            by_dim[oracles.point_dim(pts, 2)] += 1
        assert lc.whitney_numbers(tl.projective(2, 3).lattice) == by_dim == [1, 7, 7, 1]
    run(5, "height is a valuation; d_h = d_S on P_2(n<=4), P_3(n<=3)", 120.0, body)


def test_criterion_06_partition_codes():
    def body():
        for q in (2, 3):
            for n in range(1, 5):
                count, failures, details = tl.check_partition_codes(q, n)
                assert not failures, failures[:2]
                assert details["max_size"] == 2 ** n
                assert any(len(E) < n for E in tl.independent_sets(gfcore.field_spec(q), n)) or n == 1
    run(6, "partition codes: linear, closed under intersection, distributive, max 2^n at r=m=n", 120.0, body)


def test_criterion_07_complements():
    def body():
        for q in (2, 3):
            for n in range(1, 5):
                C = sc.canonical_complement(sc.fixed_basis_code(q, n))
                assert sc.verify_complement(C).ok, (q, n)
                if q == 2 and n >= 2:
                    b = sc.one_dim_bound_check(C.codewords, q=2, complement=C.complement_map)
                    assert b.one_dim_count == n <= 2 ** (n - 1) and b.holds
        P, res = p23_survey()
        full = P.index_of[gfcore.full_space(2, 3)]
        lacking = [S for S in res.distributive_sublattices if full not in S]
        assert lacking
        for S in lacking:
            with pytest.raises(PreconditionError):
                sc.canonical_complement(sc.make_code([P.subspaces[i] for i in S]))
    run(7, "canonical complements valid; |U_1| = n <= 2^(n-1); no full space -> error", 60.0, body)


def test_criterion_08_complement_search():
    def body():
        assert sc.search_complement(build_projective_lattice(2, 2).subspaces) is None
        assert sc.search_complement(sc.fixed_basis_code(2, 3).codewords) is not None
    run(8, "no complement on P_2(2); one found on the fixed-basis code of F_2^3", 10.0, body)


def test_criterion_09_whitney_bounds():
    def body():
        P, res = p23_survey()
        L = P.lattice
        equal = set()
        for S in res.distributive_sublattices:
            M = lc.restrict(L, S)[0]
            W = lc.whitney_numbers(M)
            binoms = [comb(3, k) for k in range(4)]
            assert len(W) <= 4 and all(w <= b for w, b in zip(W, binoms)), (sorted(S), W)
            if W == binoms:
                equal.add(S)
            assert tl.verify_C2(M, L).ok
        assert equal == set(res.extremal_sublattices) and len(equal) == 28
    run(9, "W_k(M) <= C(3,k) on every distributive sublattice of P_2(3); equality on the 28", 60.0, body)


def _recheck_linear(C, axiom, w):
    B = C.boxplus_table
    if axiom == "commutativity":
        x, y = w
        return B[x, y] != B[y, x]
    if axiom == "associativity":
        x, y, z = w
        return B[B[x, y], z] != B[x, B[y, z]]
    raise AssertionError(f"unexpected axiom {axiom}")


def _recheck_complement(C, axiom, w):
    f, words = C.complement_map, C.codewords
    if axiom == "direct_complement":
        (i,) = w
        X, Y = words[i], words[f[i]]
        return gfcore.subspace_intersect(X, Y).dim != 0 or gfcore.subspace_sum(X, Y) != gfcore.full_space(C.field, C.n)
    raise AssertionError(f"unexpected axiom {axiom}")


def test_criterion_10_mutation_detection():
    def body():
        C = sc.fixed_basis_code(2, 3)
        assert sc.verify_linear(C).ok
        table = C.boxplus_table.copy()
        table[1, 2] = table[1, 3]
        bad = sc.make_code(C.codewords, boxplus=table)
        rep = sc.verify_linear(bad)
        assert not rep.ok and _recheck_linear(bad, rep.failed, rep.witness)

        Cc = sc.canonical_complement(C)
        f = list(Cc.complement_map)
        f[1] = f[2]
        bad = sc.make_code(Cc.codewords, boxplus=Cc.boxplus_table, complement=f)
        rep = sc.verify_complement(bad)
        assert not rep.ok and _recheck_complement(bad, rep.failed, rep.witness)

        M = lc.m3()
        assert tl.tl1_check(M) is None
        meet = M.meet.copy()
        meet[1, 2] = 1
        badL = M.replace(meet=meet)
        w = tl.tl1_check(badL)
        assert w is not None and lp.verify_witness(badL, w)
        meet[2, 1] = 1
        badL = M.replace(meet=meet)
        w = tl.tl1_check(badL)
        assert w is not None and lp.verify_witness(badL, w)
    run(10, "corrupted boxplus, complement and meet entries are caught with witnesses", 10.0, body)


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
