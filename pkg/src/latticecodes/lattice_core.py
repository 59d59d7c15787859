"""Finite lattices as dense integer-indexed tables.

Elements are ``0..N-1``.  A :class:`FiniteLattice` carries the order
matrix ``leq`` (``leq[x, y]`` iff x ⪯ y), the ``join`` and ``meet``
tables and the cover relation (the transitive reduction of ``leq``).
Use :func:`from_covers` to build a validated lattice; the bare
constructor trusts its tables, which lets tests feed deliberately
corrupted ones to the deciders.
"""
from __future__ import annotations

import graphlib
import itertools
import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import NotALatticeError, NotAPosetError


def _frozen(a):
    a = np.array(a, copy=True)
    a.flags.writeable = False
    return a


def transitive_reduction(leq: np.ndarray) -> np.ndarray:
    lt = leq.copy()
    np.fill_diagonal(lt, False)
    li = lt.astype(np.int32)
    return lt & ~((li @ li) > 0)


class FiniteLattice:
    """Immutable finite lattice with dense N×N tables."""

    def __init__(self, leq, join, meet, covers=None, labels=None):
        self.leq = _frozen(np.asarray(leq, dtype=bool))
        self.join = _frozen(np.asarray(join, dtype=np.int64))
        self.meet = _frozen(np.asarray(meet, dtype=np.int64))
        n = self.leq.shape[0]
        if self.leq.shape != (n, n) or self.join.shape != (n, n) or self.meet.shape != (n, n):
            raise ValueError("leq, join and meet must all be N×N")
        if covers is None:
            red = transitive_reduction(self.leq)
            covers = zip(*np.nonzero(red))
        self.covers = tuple(sorted((int(a), int(b)) for a, b in covers))
        self.labels = tuple(labels) if labels is not None else None

    @property
    def size(self) -> int:
        return self.leq.shape[0]

    def __len__(self):
        return self.size

    def __repr__(self):
        return f"FiniteLattice(size={self.size}, covers={len(self.covers)})"

    @cached_property
    def bottom(self) -> int:
        return int(np.flatnonzero(self.leq.all(axis=1))[0])

    @cached_property
    def top(self) -> int:
        return int(np.flatnonzero(self.leq.all(axis=0))[0])

    @cached_property
    def cover_matrix(self) -> np.ndarray:
        c = np.zeros_like(self.leq)
        for a, b in self.covers:
            c[a, b] = True
        c.flags.writeable = False
        return c

    @cached_property
    def heights(self) -> np.ndarray:
        h = np.zeros(self.size, dtype=np.int64)
        upper = [[] for _ in range(self.size)]
        for a, b in self.covers:
            upper[a].append(b)
        for x in _topological_order(self.size, self.covers):
            for y in upper[x]:
                h[y] = max(h[y], h[x] + 1)
        h.flags.writeable = False
        return h

    @cached_property
    def atoms(self) -> tuple:
        return tuple(int(x) for x in np.flatnonzero(self.cover_matrix[self.bottom]))

    def label(self, x: int) -> str:
        return self.labels[x] if self.labels is not None else str(x)

    def index(self, label: str) -> int:
        if self.labels is None:
            return int(label)
        return self.labels.index(label)

    def lt(self, x, y) -> bool:
        return x != y and bool(self.leq[x, y])

    def comparable(self, x, y) -> bool:
        return bool(self.leq[x, y] or self.leq[y, x])

    def join_all(self, elements: Iterable[int]) -> int:
        acc = self.bottom
        for e in elements:
            acc = int(self.join[acc, e])
        return acc

    def meet_all(self, elements: Iterable[int]) -> int:
        acc = self.top
        for e in elements:
            acc = int(self.meet[acc, e])
        return acc

    def replace(self, *, join=None, meet=None) -> "FiniteLattice":
        """Copy with substituted tables; no validation (used for mutation fixtures)."""
        return FiniteLattice(
            self.leq,
            self.join if join is None else join,
            self.meet if meet is None else meet,
            covers=self.covers,
            labels=self.labels,
        )

    def same_tables(self, other: "FiniteLattice") -> bool:
        return (
            self.size == other.size
            and bool((self.leq == other.leq).all())
            and bool((self.join == other.join).all())
            and bool((self.meet == other.meet).all())
        )


def _topological_order(n, covers):
    ts = graphlib.TopologicalSorter({x: () for x in range(n)})
    for a, b in covers:
        ts.add(b, a)
    try:
        return list(ts.static_order())
    except graphlib.CycleError as exc:
        raise NotAPosetError(f"cover relation has a cycle through {exc.args[1]}") from None


def _bound_table(order: np.ndarray, kind: str) -> np.ndarray:
    """Least upper bounds under ``order`` (pass ``leq.T`` for meets)."""
    n = order.shape[0]
    n_above = order.sum(axis=1)
    table = np.empty((n, n), dtype=np.int64)
    for x in range(n):
        ub = order[x][None, :] & order
        least = ub & (n_above[None, :] == ub.sum(axis=1)[:, None])
        ok = least.any(axis=1)
        if not ok.all():
            bad = [y for y in np.flatnonzero(~ok)]
            y = int(min(bad, key=lambda y: (min(x, y), max(x, y))))
            pair = (min(x, y), max(x, y))
            bound = "least upper bound" if kind == "join" else "greatest lower bound"
            raise NotALatticeError(f"pair {pair} has no unique {bound}", pair=pair)
        table[x] = least.argmax(axis=1)
    return table


def from_covers(n: int, covers: Iterable[Sequence[int]], labels=None) -> FiniteLattice:
    """Validate a cover relation and build the lattice it generates.

    Redundant pairs (implied by transitivity) are accepted and dropped from
    the stored cover set.
    """
    if n < 1:
        raise NotALatticeError("a lattice needs at least one element")
    pairs = []
    for pair in covers:
        a, b = (int(v) for v in pair)
        if not (0 <= a < n and 0 <= b < n):
            raise ValueError(f"cover pair {(a, b)} references an index outside 0..{n - 1}")
        if a == b:
            raise NotAPosetError(f"cover pair {(a, b)} is a loop")
        pairs.append((a, b))
    if labels is not None and len(labels) != n:
        raise ValueError(f"{len(labels)} labels for {n} elements")
    order = _topological_order(n, pairs)
    upper = [[] for _ in range(n)]
    for a, b in pairs:
        upper[a].append(b)
    leq = np.zeros((n, n), dtype=bool)
    for x in reversed(order):
        leq[x, x] = True
        for y in upper[x]:
            leq[x] |= leq[y]
    # Check pairs first: a missing O or I always shows up as a pair without a bound.
    join = _bound_table(leq, "join")
    meet = _bound_table(leq.T, "meet")
    return FiniteLattice(leq, join, meet, labels=labels)


def from_leq(leq, labels=None) -> FiniteLattice:
    leq = np.asarray(leq, dtype=bool)
    red = transitive_reduction(leq)
    return from_covers(leq.shape[0], zip(*np.nonzero(red)), labels=labels)


@dataclass(frozen=True)
class HeightProfile:
    heights: tuple
    lattice_height: int


def height(L: FiniteLattice) -> HeightProfile:
    return HeightProfile(tuple(int(h) for h in L.heights), int(L.heights[L.top]))


def atoms(L: FiniteLattice) -> tuple:
    return L.atoms


def whitney_numbers(L: FiniteLattice) -> list:
    return [int(c) for c in np.bincount(L.heights, minlength=int(L.heights[L.top]) + 1)]


def sublattice_closure(L: FiniteLattice, seed: Iterable[int]) -> frozenset:
    """Smallest superset of ``seed`` closed under join and meet."""
    current = np.zeros(L.size, dtype=bool)
    current[list(seed)] = True
    while True:
        idx = np.flatnonzero(current)
        if idx.size == 0:
            return frozenset()
        sub = np.ix_(idx, idx)
        nxt = current.copy()
        nxt[L.join[sub].ravel()] = True
        nxt[L.meet[sub].ravel()] = True
        if (nxt == current).all():
            return frozenset(int(i) for i in idx)
        current = nxt


def is_sublattice(L: FiniteLattice, elements: Iterable[int]) -> bool:
    idx = np.array(sorted(set(elements)), dtype=np.int64)
    if idx.size == 0:
        return True
    mask = np.zeros(L.size, dtype=bool)
    mask[idx] = True
    sub = np.ix_(idx, idx)
    return bool(mask[L.join[sub]].all() and mask[L.meet[sub]].all())


def restrict(L: FiniteLattice, elements: Iterable[int]) -> tuple[FiniteLattice, tuple]:
    """A sublattice as a lattice of its own.

    Returns the new lattice and the tuple of host indices, so that new
    element ``i`` is host element ``members[i]``.
    """
    members = tuple(sorted(set(int(e) for e in elements)))
    if not members:
        raise NotALatticeError("the empty set is not a lattice")
    if not is_sublattice(L, members):
        raise NotALatticeError(f"{members} is not closed under join and meet")
    idx = np.array(members)
    pos = np.full(L.size, -1, dtype=np.int64)
    pos[idx] = np.arange(len(members))
    sub = np.ix_(idx, idx)
    labels = [L.label(m) for m in members]
    return FiniteLattice(L.leq[sub], pos[L.join[sub]], pos[L.meet[sub]], labels=labels), members


def dual(L: FiniteLattice) -> FiniteLattice:
    return FiniteLattice(L.leq.T, L.meet, L.join, covers=[(b, a) for a, b in L.covers], labels=L.labels)


@dataclass(frozen=True)
class ValuationReport:
    is_valuation: bool
    is_isotone: bool
    is_positive: bool
    metric_ok: bool
    failing_tuple: tuple | None = None
    failing_check: str | None = None

    @property
    def all_ok(self) -> bool:
        return self.is_valuation and self.is_isotone and self.is_positive and self.metric_ok


def _first_true(mask):
    hits = np.argwhere(mask)
    return tuple(int(i) for i in hits[0]) if len(hits) else None


def check_valuation(L: FiniteLattice, v: Sequence) -> ValuationReport:
    """Check the valuation identity, isotonicity, positivity and the induced metric.

    Values are compared exactly; pass ints or Fractions.
    """
    if len(v) != L.size:
        raise ValueError(f"valuation has {len(v)} values for {L.size} elements")
    vals = np.array(v, dtype=np.int64 if all(isinstance(x, (int, np.integer)) for x in v) else object)
    lt = L.leq & ~np.eye(L.size, dtype=bool)
    failures = {}

    bad = vals[L.join] + vals[L.meet] != vals[:, None] + vals[None, :]
    failures["valuation"] = _first_true(bad)
    failures["isotone"] = _first_true(L.leq & (vals[:, None] > vals[None, :]))
    failures["positive"] = _first_true(lt & (vals[:, None] >= vals[None, :]))

    d = vals[L.join] - vals[L.meet]
    metric_fail = _first_true(d < 0)
    if metric_fail is None:
        metric_fail = _first_true((d == 0) & ~np.eye(L.size, dtype=bool))
    if metric_fail is None:
        metric_fail = _first_true(d != d.T)
    if metric_fail is None:
        for y in range(L.size):
            tri = d[:, y][:, None] + d[y][None, :] < d
            hit = _first_true(tri)
            if hit is not None:
                metric_fail = (hit[0], y, hit[1])
                break
    failures["metric"] = metric_fail

    first = next(((k, w) for k, w in failures.items() if w is not None), (None, None))
    return ValuationReport(
        is_valuation=failures["valuation"] is None,
        is_isotone=failures["isotone"] is None,
        is_positive=failures["positive"] is None,
        metric_ok=failures["metric"] is None,
        failing_tuple=first[1],
        failing_check=first[0],
    )


def hasse_export(L: FiniteLattice, name: str = "lattice") -> str:
    """Graphviz DOT for the Hasse diagram, one rank per height."""
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=plaintext];"]
    for x in range(L.size):
        lines.append(f'  {x} [label="{L.label(x)}"];')
    hs = L.heights
    for k in range(int(hs.max()) + 1):
        members = "; ".join(str(x) for x in np.flatnonzero(hs == k))
        lines.append(f"  {{ rank=same; {members}; }}")
    for a, b in L.covers:
        lines.append(f"  {a} -> {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_json(L: FiniteLattice) -> dict:
    return {
        "n": L.size,
        "covers": [list(c) for c in L.covers],
        "labels": list(L.labels) if L.labels is not None else None,
    }


def dumps(L: FiniteLattice) -> str:
    return json.dumps(to_json(L))


def from_json(data) -> FiniteLattice:
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    if not isinstance(data, dict) or "n" not in data or "covers" not in data:
        raise ValueError("lattice JSON needs keys 'n' and 'covers'")
    return from_covers(int(data["n"]), data["covers"], labels=data.get("labels"))


def is_isomorphic(A: FiniteLattice, B: FiniteLattice) -> bool:
    """Backtracking isomorphism test respecting height levels (small lattices)."""
    if A.size != B.size or len(A.covers) != len(B.covers):
        return False
    if whitney_numbers(A) != whitney_numbers(B):
        return False
    ha, hb = A.heights, B.heights
    order = sorted(range(A.size), key=lambda x: ha[x])
    image = [-1] * A.size
    used = [False] * B.size

    def extend(k):
        if k == A.size:
            return True
        x = order[k]
        for y in range(B.size):
            if used[y] or hb[y] != ha[x]:
                continue
            if all(A.leq[x, order[j]] == B.leq[y, image[order[j]]]
                   and A.leq[order[j], x] == B.leq[image[order[j]], y] for j in range(k)):
                image[x] = y
                used[y] = True
                if extend(k + 1):
                    return True
                used[y] = False
        image[x] = -1
        return False

    return extend(0)


# -- standard small lattices ---------------------------------------------------

def chain(length: int) -> FiniteLattice:
    """0 ⋖ 1 ⋖ ... ⋖ length."""
    return from_covers(length + 1, [(i, i + 1) for i in range(length)])


def boolean_lattice(n: int) -> FiniteLattice:
    """Subsets of {1..n}, element index = bitmask."""
    size = 1 << n
    covers = [(s, s | (1 << i)) for s in range(size) for i in range(n) if not s & (1 << i)]
    labels = ["{" + ",".join(str(i + 1) for i in range(n) if s >> i & 1) + "}" for s in range(size)]
    return from_covers(size, covers, labels=labels)


def diamond(k: int = 3) -> FiniteLattice:
    """M_k: bottom 0, atoms 1..k, top k+1.  ``diamond(3)`` is M3."""
    top = k + 1
    covers = [(0, a) for a in range(1, top)] + [(a, top) for a in range(1, top)]
    labels = ["O"] + [f"a{i}" for i in range(1, top)] + ["I"]
    return from_covers(k + 2, covers, labels=labels)


def m3() -> FiniteLattice:
    return diamond(3)


def n5() -> FiniteLattice:
    """Pentagon: O=0, a2=1, a1=2 (a2 ≺ a1), b=3, I=4."""
    return from_covers(5, [(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)], labels=["O", "a2", "a1", "b", "I"])


def stack(lower: FiniteLattice, upper: FiniteLattice) -> FiniteLattice:
    """Glue ``upper``'s bottom onto ``lower``'s top (ordinal sum with identification)."""
    remap = {}
    k = lower.size
    for x in range(upper.size):
        if x == upper.bottom:
            remap[x] = lower.top
        else:
            remap[x] = k
            k += 1
    covers = list(lower.covers) + [(remap[a], remap[b]) for a, b in upper.covers]
    labels = [f"L{lower.label(x)}" for x in range(lower.size)] + [
        f"U{upper.label(x)}" for x in range(upper.size) if x != upper.bottom
    ]
    return from_covers(k, covers, labels=labels)


def product(A: FiniteLattice, B: FiniteLattice) -> FiniteLattice:
    """Direct product, element (a, b) at index a * |B| + b."""
    nb = B.size
    covers = [(a * nb + b, c * nb + b) for a, c in A.covers for b in range(nb)]
    covers += [(a * nb + b, a * nb + d) for a in range(A.size) for b, d in B.covers]
    labels = [f"({A.label(a)},{B.label(b)})" for a in range(A.size) for b in range(nb)]
    return from_covers(A.size * nb, covers, labels=labels)


def _set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def set_partitions(n: int) -> list:
    """All partitions of {0..n-1} as sorted tuples of sorted tuples."""
    parts = {tuple(sorted(tuple(sorted(b)) for b in p)) for p in _set_partitions(list(range(n)))}
    return sorted(parts, key=lambda p: (-len(p), p))


def partition_lattice(n: int) -> FiniteLattice:
    """Π_n ordered by refinement; finest partition is the bottom."""
    parts = set_partitions(n)
    index = {p: i for i, p in enumerate(parts)}
    covers = []
    for p in parts:
        for i, j in itertools.combinations(range(len(p)), 2):
            merged = [b for k, b in enumerate(p) if k not in (i, j)] + [tuple(sorted(p[i] + p[j]))]
            covers.append((index[p], index[tuple(sorted(merged))]))
    labels = ["|".join("".join(str(e + 1) for e in b) for b in p) for p in parts]
    return from_covers(len(parts), covers, labels=labels)
