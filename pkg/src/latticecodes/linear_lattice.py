"""The linear lattice of all subspaces of GF(q)^n, as a FiniteLattice."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import gfcore
from .errors import BudgetExceeded, ShapeError
from .gfcore import FieldSpec, SubspaceRepr
from .lattice_core import FiniteLattice, check_valuation, from_covers

# P_2(5) has 374 elements, P_2(6) 2825; P_3(4) 212, P_3(5) 2664.
DEFAULT_MAX_ELEMENTS = 1000


@dataclass(frozen=True)
class ProjectiveSpaceLattice:
    spec: FieldSpec
    n: int
    lattice: FiniteLattice
    subspaces: tuple
    index_of: dict = field(repr=False)

    def subspace_of(self, i: int) -> SubspaceRepr:
        return self.subspaces[i]

    @property
    def size(self) -> int:
        return self.lattice.size

    def to_json(self) -> dict:
        L = self.lattice
        return {"n": L.size, "covers": [list(c) for c in L.covers], "labels": list(L.labels)}

    def subspace_table_json(self) -> dict:
        return {
            "q": self.spec.q,
            "modulus": list(self.spec.modulus) if self.spec.modulus else None,
            "n": self.n,
            "subspaces": [[list(r) for r in s.basis] for s in self.subspaces],
        }


@dataclass(frozen=True)
class GrassmannianSlice:
    k: int
    members: tuple


def _point_masks(subspaces, q):
    masks = []
    for s in subspaces:
        m = 0
        for v in s.points():
            m |= 1 << gfcore.vector_index(v, q)
        masks.append(m)
    return masks


def build_projective_lattice(field, n: int, max_elements: int = DEFAULT_MAX_ELEMENTS,
                             verify: bool = True) -> ProjectiveSpaceLattice:
    """Enumerate P_q(n) and build its lattice.

    Covers are containments between consecutive dimensions.  With
    ``verify`` the join/meet tables (derived from the order) are checked
    against subspace sum/intersection on every pair.
    """
    spec = gfcore.as_spec(field)
    total = gfcore.count_subspaces(spec.q, n)
    if total > max_elements:
        raise BudgetExceeded(f"P_{spec.q}({n})", max_elements, total)
    subs = gfcore.enumerate_subspaces(spec, n)
    index_of = {s: i for i, s in enumerate(subs)}
    masks = _point_masks(subs, spec.q)
    dims = [s.dim for s in subs]
    by_dim = [[i for i, d in enumerate(dims) if d == k] for k in range(n + 1)]
    covers = []
    for k in range(n):
        for i in by_dim[k]:
            for j in by_dim[k + 1]:
                if masks[i] & ~masks[j] == 0:
                    covers.append((i, j))
    labels = [s.label() for s in subs]
    L = from_covers(len(subs), covers, labels=labels)
    P = ProjectiveSpaceLattice(spec, n, L, tuple(subs), index_of)
    if verify:
        _verify_against_gfcore(P, masks)
    return P


def _verify_against_gfcore(P: ProjectiveSpaceLattice, masks):
    L, subs = P.lattice, P.subspaces
    mask_index = {m: i for i, m in enumerate(masks)}
    if len(mask_index) != len(subs):
        raise AssertionError("two enumerated subspaces share a point set")
    for i, X in enumerate(subs):
        if L.heights[i] != X.dim:
            raise AssertionError(f"height of {X} is {L.heights[i]}, dimension {X.dim}")
        for j in range(i, len(subs)):
            Y = subs[j]
            s = P.index_of[gfcore.subspace_sum(X, Y)]
            m = P.index_of[gfcore.subspace_intersect(X, Y)]
            if L.join[i, j] != s or L.meet[i, j] != m:
                raise AssertionError(f"lattice tables disagree with + / ∩ on {X}, {Y}")
            if mask_index[masks[i] & masks[j]] != m:
                raise AssertionError(f"point-set intersection disagrees on {X}, {Y}")


def subspace_distance(X: SubspaceRepr, Y: SubspaceRepr) -> int:
    """dim(X+Y) - dim(X∩Y)."""
    if X.n != Y.n:
        raise ShapeError(f"ambient dimensions differ: {X.n} vs {Y.n}")
    return gfcore.subspace_sum(X, Y).dim - gfcore.subspace_intersect(X, Y).dim


def grassmannian(P: ProjectiveSpaceLattice, k: int) -> GrassmannianSlice:
    if not 0 <= k <= P.n:
        raise ValueError(f"dimension k={k} outside 0..{P.n}")
    return GrassmannianSlice(k, tuple(int(i) for i in np.flatnonzero(P.lattice.heights == k)))


@dataclass(frozen=True)
class MetricReport:
    pairs_checked: int
    agree: bool
    valuation_ok: bool
    witness: tuple | None = None

    @property
    def ok(self) -> bool:
        return self.agree and self.valuation_ok


def distance_matrix(subspaces) -> np.ndarray:
    subs = list(subspaces)
    D = np.zeros((len(subs), len(subs)), dtype=np.int64)
    for i, X in enumerate(subs):
        for j in range(i + 1, len(subs)):
            D[i, j] = D[j, i] = subspace_distance(X, subs[j])
    return D


def metric_equivalence_check(P: ProjectiveSpaceLattice) -> MetricReport:
    """Compare the height metric h(x∨y) - h(x∧y) with the subspace distance on all pairs."""
    L = P.lattice
    h = L.heights
    d_h = h[L.join] - h[L.meet]
    d_s = distance_matrix(P.subspaces)
    bad = np.argwhere(d_h != d_s)
    val = check_valuation(L, [int(x) for x in h])
    witness = tuple(int(i) for i in bad[0]) if len(bad) else val.failing_tuple
    return MetricReport(L.size * L.size, len(bad) == 0, val.all_ok, witness)


def dumps_subspace_table(P: ProjectiveSpaceLattice) -> str:
    return json.dumps(P.subspace_table_json())
