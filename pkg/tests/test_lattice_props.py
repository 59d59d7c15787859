import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from latticecodes import lattice_core as lc
from latticecodes import lattice_props as lp
from latticecodes.errors import ConsistencyError, NotALatticeError, PreconditionError

import oracles

# name: (modular, distributive, atomistic, uniquely atomistic, geometric)
EXPECTED = {
    "B3": (lc.boolean_lattice(3), True, True, True, True, True),
    "C2": (lc.chain(2), True, True, False, False, False),
    "M3": (lc.m3(), True, False, True, False, True),
    "N5": (lc.n5(), False, False, False, False, False),
    "M4": (lc.diamond(4), True, False, True, False, True),
    "Pi4": (lc.partition_lattice(4), False, False, True, False, True),
    "M3/M3": (lc.stack(lc.m3(), lc.m3()), True, False, False, False, False),
    "C1xM3": (lc.product(lc.chain(1), lc.m3()), True, False, True, False, True),
}


@pytest.mark.parametrize("name", EXPECTED)
def test_decider_table(name):
    L, mod, dist, atomistic, ua, geo = EXPECTED[name]
    assert lp.is_modular(L).holds is mod
    assert lp.is_distributive(L).holds is dist
    assert lp.is_atomistic(L).holds is atomistic
    assert lp.is_uniquely_atomistic(L).holds is ua
    assert lp.is_geometric(L).holds is geo
    for prop in lp.DECIDERS:
        rep = lp.decide(L, prop)
        if rep.witness is not None:
            assert lp.verify_witness(L, rep.witness), (prop, rep.witness)


def test_pattern_witnesses():
    assert lp.find_N5(lc.n5()).elements == (0, 1, 2, 3, 4)
    assert lp.find_M3(lc.m3()).elements == (1, 2, 3)
    assert lp.find_N5(lc.m3()) is None
    assert lp.find_M3(lc.boolean_lattice(3)) is None
    w = lp.is_uniquely_atomistic(lc.m3()).witness
    assert w.kind == "ambiguous_decomposition" and w.elements == (4,)
    assert w.sets == ((2, 3), (1, 3))


def test_unknown_property():
    with pytest.raises(ValueError):
        lp.decide(lc.m3(), "lovely")


def test_unique_decomposition_and_meets():
    B = lc.boolean_lattice(3)
    dec = lp.unique_decomposition(B)
    assert dec.decomposition[0] == frozenset()
    for x in range(8):
        assert lp.join_of(B, dec.decomposition[x], dec) == x
    for S1, S2 in itertools.product(dec.decomposition, repeat=2):
        assert lp.meet_via_sets(B, S1, S2, dec) == B.join_all(dec.atoms[i] for i in S1 & S2)
    with pytest.raises(PreconditionError) as err:
        lp.unique_decomposition(lc.m3())
    assert err.value.witness.kind == "ambiguous_decomposition"


def test_tl1_mutation_fixture():
    M = lc.m3()
    meet = M.meet.copy()
    meet[1, 2] = meet[2, 1] = 1
    bad = M.replace(meet=meet)
    with pytest.raises(ConsistencyError) as err:
        lp.is_modular(bad)
    assert lp.verify_witness(bad, err.value.witness)
    w = lp.check_tables(bad)
    assert w.kind == "table_failure" and lp.verify_witness(bad, w)
    assert lp.check_tables(M) is None


def _lattice_from_random(data):
    n, pairs = data
    pairs = [(a, b) for a, b in pairs if a < b]
    # force a bottom and top
    pairs += [(0, i) for i in range(1, n)] + [(i, n - 1) for i in range(n - 1)]
    try:
        return lc.from_covers(n, pairs)
    except NotALatticeError:
        return None


random_posets = st.integers(3, 8).flatmap(
    lambda n: st.tuples(st.just(n), st.sets(st.tuples(st.integers(1, n - 2), st.integers(1, n - 2)), max_size=10)))


@settings(max_examples=200, deadline=None)
@given(random_posets)
def test_deciders_agree_with_brute_identities(data):
    L = _lattice_from_random(data)
    if L is None:
        return
    n, J, M, leq = L.size, L.join.tolist(), L.meet.tolist(), L.leq.tolist()
    mod = oracles.brute_modular(n, J, M, leq)
    dist = oracles.brute_distributive(n, J, M)
    assert lp.is_modular(L).holds is mod
    assert (lp.find_N5(L) is None) is mod
    assert lp.is_distributive(L).holds is dist
    if mod:
        assert (lp.find_M3(L) is None) is dist
    ua = lp.is_uniquely_atomistic(L)
    assert ua.holds is lp.uniquely_atomistic_by_subsets(L)[0]
    if lp.is_atomistic(L).holds:
        assert ua.holds is dist
    for rep in (lp.is_modular(L), lp.is_distributive(L), lp.is_semimodular(L), ua):
        if rep.witness is not None:
            assert lp.verify_witness(L, rep.witness)


def test_semimodular_cover_witness():
    rep = lp.is_semimodular(lc.n5())
    assert not rep.holds and rep.witness.kind == "cover_failure"
    assert lp.is_semimodular(lc.partition_lattice(4)).holds


def test_property_report_json():
    rep = lp.is_distributive(lc.m3())
    d = rep.to_json()
    assert d["holds"] is False and d["witness"]["kind"] == "M3"
    assert lp.is_distributive(lc.boolean_lattice(2)).to_json()["witness"] is None
