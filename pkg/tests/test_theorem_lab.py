import json

import pytest

from latticecodes import gfcore
from latticecodes import lattice_core as lc
from latticecodes import lattice_props as lp
from latticecodes import subspace_codes as sc
from latticecodes import theorem_lab as tl
from latticecodes.errors import BudgetExceeded, PreconditionError

import oracles


@pytest.fixture(scope="module")
def p23():
    P = tl.projective(2, 3)
    return P, tl.enumerate_sublattices(P.lattice, "exhaustive", name="P2(3)")


@pytest.mark.parametrize("L", [lc.m3(), lc.n5(), lc.chain(2), lc.boolean_lattice(3), lc.partition_lattice(4)])
def test_exhaustive_scan_matches_brute_force(L):
    res = tl.enumerate_sublattices(L, "exhaustive")
    brute = oracles.brute_sublattices(L.size, L.join.tolist(), L.meet.tolist())
    assert res.total_sublattices_found == len(brute)
    dist = [S for S in brute
            if lp.is_distributive(lc.restrict(L, S)[0]).holds]
    assert set(res.distributive_sublattices) == set(dist)
    assert res.distributive_count == len(dist)


def test_survey_examples():
    assert tl.enumerate_sublattices(lc.m3(), "exhaustive").max_distributive_size == 4
    ch = tl.enumerate_sublattices(lc.chain(2), "exhaustive")
    assert ch.max_distributive_size == 3 and ch.extremal_sublattices == [frozenset({0, 1, 2})]
    with pytest.raises(BudgetExceeded):
        tl.enumerate_sublattices(lc.boolean_lattice(5), "exhaustive")
    with pytest.raises(ValueError):
        tl.enumerate_sublattices(lc.m3(), "guess")


def test_sampled_survey_is_sound_and_seeded():
    L = tl.projective(2, 4).lattice
    a = tl.enumerate_sublattices(L, "sampled", budget=300, seed=7)
    b = tl.enumerate_sublattices(L, "sampled", budget=300, seed=7)
    assert a.to_json() == b.to_json() and a.seed == 7
    for S in a.distributive_sublattices[:200]:
        assert lc.is_sublattice(L, S)
    assert a.max_distributive_size == 16


def test_size_bound_and_extremal_count_on_p23(p23):
    P, res = p23
    assert res.max_distributive_size == 8
    rep = tl.verify_T2(P.lattice, res)
    assert rep.ok
    assert rep.details["extremal_count"] == 28 == oracles.unordered_bases(2, 3)
    full = P.index_of[gfcore.full_space(2, 3)]
    for S in res.extremal_sublattices:
        atoms = [x for x in S if P.lattice.heights[x] == 1]
        assert full in S and len(atoms) == 3
        assert gfcore.rank([P.subspaces[a].basis[0] for a in atoms], 2, 3) == 3


def test_atoms_and_top_alone_do_not_force_full_size(p23):
    P, res = p23
    e1 = P.index_of[gfcore.span([(1, 0, 0)], 2, 3)]
    S = frozenset({P.lattice.bottom, e1, P.lattice.top})
    assert S in res.distributive_sublattices
    assert tl.sub_atoms(P.lattice, S) == [e1]
    assert tl.verify_T2(P.lattice, res).details["atoms_in_host_and_top_member_but_smaller"] > 0


def test_size_bound_requires_geometric_host():
    with pytest.raises(PreconditionError, match="semimodular"):
        tl.verify_T2(lc.n5(), tl.enumerate_sublattices(lc.n5(), "exhaustive"))
    B3 = lc.boolean_lattice(3)
    rep = tl.verify_T2(B3, tl.enumerate_sublattices(B3, "exhaustive"))
    assert rep.ok and rep.details["extremal_count"] == 1


def test_phi_bijection():
    phi = tl.phi_bijection(lc.boolean_lattice(3))
    assert sorted(phi.image) == list(range(8))
    assert phi(()) == 0 and phi((0, 1, 2)) == 7
    C = sc.fixed_basis_code(2, 3)
    assert len(tl.phi_bijection(sc.code_lattice(C)).image) == 8
    with pytest.raises(PreconditionError) as err:
        tl.phi_bijection(lc.m3())
    assert err.value.witness.kind == "ambiguous_decomposition"


def test_whitney_bound_examples(p23):
    P, _ = p23
    host = P.lattice
    idx = P.index_of
    fixed = [idx[w] for w in sc.fixed_basis_code(2, 3).codewords]
    rep = tl.verify_C2(lc.restrict(host, fixed)[0], host)
    assert rep.ok and rep.details["whitney"] == [1, 3, 3, 1] and rep.details["equality"]
    ends = lc.restrict(host, [host.bottom, host.top])[0]
    assert tl.verify_C2(ends, host).details["whitney"] == [1, 1]
    four = [host.bottom, idx[gfcore.span([(1, 0, 0), (0, 1, 0)], 2, 3)], idx[gfcore.span([(0, 0, 1)], 2, 3)], host.top]
    rep = tl.verify_C2(lc.restrict(host, four)[0], host)
    assert rep.ok and rep.details["whitney"] == [1, 2, 1]
    with pytest.raises(PreconditionError):
        tl.verify_C2(lc.m3(), lc.boolean_lattice(2))


def test_codes_and_complements_from_p23_survey(p23):
    P, res = p23
    rep = tl.verify_T3_T4(P, res)
    assert rep.ok, rep.failures[:3]
    assert rep.details["codes"] > 28


def test_two_element_code_has_no_complement():
    P = tl.projective(2, 3)
    e1 = P.index_of[gfcore.span([(1, 0, 0)], 2, 3)]
    res = tl.SublatticeSurveyResult("x", "exhaustive", 1, 1, 2, [], [frozenset({0, e1})])
    rep = tl.verify_T3_T4(P, res)
    assert rep.ok and rep.details == {"distributive": 1, "with_full_space": 0, "without_full_space": 1,
                                      "not_boolean": 0, "codes": 1}


def test_catalog_contents():
    cat = tl.build_catalog()
    for name in ("B5", "C6", "M3", "N5", "M3/M3", "Pi4", "P2(4)", "P3(3)"):
        assert name in cat.lattices
    assert cat["P2(4)"].size == 67
    pop = tl.build_population(samples=50, seed=3)
    assert len(pop.instances) == len(cat) + 50 and pop.seed == 3


def test_suite_report_and_unknown_name():
    rep = tl.run_theorem_suite("LT1", q=2, n=3)
    d = json.loads(rep.dumps())
    assert set(d) >= {"suite", "seed", "instances", "failures"}
    assert rep.ok and rep.exit_code == 0
    with pytest.raises(ValueError, match="valid suites"):
        tl.run_theorem_suite("BOGUS")


def test_tl1_suite_flags_corrupted_meet():
    M = lc.m3()
    meet = M.meet.copy()
    meet[1, 2] = meet[2, 1] = 1
    pop = tl.Population([("M3", M), ("M3-corrupt", M.replace(meet=meet))], seed=None)
    rep = tl.run_theorem_suite("TL1", pop)
    assert [f["instance"] for f in rep.failures] == ["M3-corrupt"]
    w = rep.failures[0]["witness"]
    assert lp.verify_witness(M.replace(meet=meet), lp.Witness(w["kind"], tuple(w["elements"])))


@pytest.mark.parametrize("suite", ["T1", "UAT", "UAC", "TL1", "TL3", "CP1"])
def test_population_suites_pass(suite):
    rep = tl.run_theorem_suite(suite, samples=200, seed=1)
    assert rep.ok, rep.failures[:3]
    assert rep.seed == 1 and rep.instances > 0


@pytest.mark.parametrize("suite,q,n", [("T2", 3, 2), ("C2", 2, 3), ("T3T4", 3, 2), ("LT1", 3, 4)])
def test_scoped_suites_pass(suite, q, n):
    rep = tl.run_theorem_suite(suite, q=q, n=n)
    assert rep.ok, rep.failures[:3]
