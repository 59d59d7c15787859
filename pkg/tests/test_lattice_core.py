import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from latticecodes import lattice_core as lc
from latticecodes.errors import NotALatticeError, NotAPosetError

import oracles

SMALL = {
    "C3": lc.chain(3),
    "B3": lc.boolean_lattice(3),
    "M3": lc.m3(),
    "N5": lc.n5(),
    "M4": lc.diamond(4),
    "M3/B2": lc.stack(lc.m3(), lc.boolean_lattice(2)),
    "C1xN5": lc.product(lc.chain(1), lc.n5()),
    "Pi4": lc.partition_lattice(4),
}


@pytest.mark.parametrize("name", SMALL)
def test_tables_agree_with_brute_force_bounds(name):
    L = SMALL[name]
    leq = oracles.closure_leq(L.size, L.covers)
    assert (np.array(leq) == L.leq).all()
    for x in range(L.size):
        for y in range(L.size):
            assert L.join[x, y] == oracles.lub(leq, (x, y))
            assert L.meet[x, y] == oracles.glb(leq, (x, y))


def test_standard_shapes():
    assert lc.whitney_numbers(lc.boolean_lattice(4)) == [1, 4, 6, 4, 1]
    assert lc.whitney_numbers(lc.chain(4)) == [1] * 5
    assert lc.whitney_numbers(lc.m3()) == [1, 3, 1]
    assert lc.whitney_numbers(lc.partition_lattice(4)) == [1, 6, 7, 1]
    assert lc.partition_lattice(4).size == 15
    assert len(lc.set_partitions(4)) == 15
    N = lc.n5()
    assert [N.label(i) for i in range(5)] == ["O", "a2", "a1", "b", "I"]
    assert N.atoms == (1, 3)
    assert N.heights.tolist() == [0, 1, 2, 1, 3]


def test_bowtie_is_rejected():
    with pytest.raises(NotALatticeError, match=r"pair \(0, 1\) has no unique least upper bound"):
        lc.from_covers(4, [(0, 2), (0, 3), (1, 2), (1, 3)])


def test_cycle_and_range_errors():
    with pytest.raises(NotAPosetError):
        lc.from_covers(3, [(0, 1), (1, 2), (2, 1)])
    with pytest.raises((NotALatticeError, ValueError)):
        lc.from_covers(2, [(0, 5)])


def test_redundant_pairs_are_reduced():
    L = lc.from_covers(3, [(0, 1), (1, 2), (0, 2)])
    assert L.covers == ((0, 1), (1, 2))


def test_json_round_trip_and_dot():
    for L in SMALL.values():
        back = lc.from_json(json.loads(lc.dumps(L)))
        assert back.same_tables(L)
    dot = lc.hasse_export(lc.m3())
    assert dot.startswith("digraph") and "rankdir=BT" in dot
    assert dot.count("->") == 6


def test_sublattice_closure_and_restrict():
    B = lc.boolean_lattice(3)
    S = lc.sublattice_closure(B, [1, 2])
    assert S == frozenset({0, 1, 2, 3})
    assert lc.is_sublattice(B, S)
    assert not lc.is_sublattice(B, [1, 2, 7])
    sub, members = lc.restrict(B, S)
    assert lc.is_isomorphic(sub, lc.boolean_lattice(2))
    assert members == (0, 1, 2, 3)


@pytest.mark.parametrize("name", ["B3", "M3", "N5", "Pi4"])
def test_sublattice_closure_matches_brute_scan(name):
    L = SMALL[name]
    J, M = L.join.tolist(), L.meet.tolist()
    brute = set(oracles.brute_sublattices(L.size, J, M))
    for S in brute:
        assert lc.is_sublattice(L, S)
        assert lc.sublattice_closure(L, S) == S


def test_isomorphism():
    assert lc.is_isomorphic(lc.diamond(3), lc.m3())
    assert not lc.is_isomorphic(lc.m3(), lc.n5())
    assert lc.is_isomorphic(lc.dual(lc.n5()), lc.n5())
    assert lc.is_isomorphic(lc.product(lc.chain(1), lc.chain(1)), lc.boolean_lattice(2))
    assert lc.is_isomorphic(lc.dual(lc.partition_lattice(4)), lc.partition_lattice(4)) is False


def test_valuation():
    B = lc.boolean_lattice(3)
    rep = lc.check_valuation(B, [int(h) for h in B.heights])
    assert rep.all_ok
    N = lc.n5()
    rep = lc.check_valuation(N, [int(h) for h in N.heights])
    assert not rep.is_valuation and rep.failing_tuple is not None
    const = lc.check_valuation(B, [0] * 8)
    assert const.is_valuation and not const.is_positive


random_covers = st.integers(2, 7).flatmap(
    lambda n: st.tuples(st.just(n), st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=12)))


@settings(max_examples=150, deadline=None)
@given(random_covers)
def test_random_relations_accepted_only_if_lattice(data):
    n, pairs = data
    pairs = [(a, b) for a, b in pairs if a < b]
    leq = oracles.closure_leq(n, pairs)
    is_lattice = all(oracles.lub(leq, (x, y)) is not None and oracles.glb(leq, (x, y)) is not None
                     for x in range(n) for y in range(n))
    try:
        L = lc.from_covers(n, pairs)
    except NotALatticeError:
        assert not is_lattice
        return
    assert is_lattice
    J = L.join
    for x, y, z in itertools.product(range(n), repeat=3):
        assert J[x, J[y, z]] == J[J[x, y], z]
        assert L.meet[x, J[x, y]] == x
