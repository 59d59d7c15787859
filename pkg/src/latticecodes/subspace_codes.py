"""Linear subspace codes closed under intersection, and complement maps.

Codes built from a partition of an independent set carry an index set
``I ⊆ {0..m-1}`` per codeword; their addition is symmetric difference of
index sets, and the canonical complement is ``X ⊞ F_q^n``.  The
``verify_*`` functions check the axioms exhaustively by table lookup and
never trust the construction.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Sequence

import numpy as np

from . import gfcore
from .errors import BudgetExceeded, MembershipError, PartitionError, PreconditionError, RankError
from .gfcore import FieldSpec, SubspaceRepr
from .lattice_core import FiniteLattice, from_leq
from .linear_lattice import distance_matrix

SEARCH_COMPLEMENT_LIMIT = 64


@dataclass(frozen=True)
class PartitionCodeSpec:
    """Independent vectors e_0..e_{r-1} and a partition of their positions into blocks."""

    spec: FieldSpec
    n: int
    independent_set: tuple
    blocks: tuple

    def __post_init__(self):
        vecs = tuple(tuple(v) for v in self.independent_set)
        if any(len(v) != self.n for v in vecs):
            raise RankError(f"every vector must have length {self.n}")
        if gfcore.rank(vecs, self.spec, self.n) != len(vecs):
            raise RankError(f"vectors {vecs} are linearly dependent")
        blocks = tuple(tuple(sorted(b)) for b in self.blocks)
        flat = [i for b in blocks for i in b]
        if any(not b for b in blocks):
            raise PartitionError("blocks must be nonempty")
        if sorted(flat) != list(range(len(vecs))):
            raise PartitionError(f"blocks {blocks} do not partition 0..{len(vecs) - 1}")
        object.__setattr__(self, "independent_set", vecs)
        object.__setattr__(self, "blocks", blocks)

    @property
    def r(self) -> int:
        return len(self.independent_set)

    @property
    def m(self) -> int:
        return len(self.blocks)


@dataclass(frozen=True, eq=False)
class SubspaceCode:
    codewords: tuple
    index_sets: tuple | None = None
    boxplus_table: np.ndarray | None = None
    complement_map: tuple | None = None
    blocks: tuple | None = None

    def __len__(self):
        return len(self.codewords)

    @property
    def n(self) -> int:
        return self.codewords[0].n

    @property
    def field(self) -> FieldSpec:
        return self.codewords[0].field

    def index(self, X: SubspaceRepr) -> int:
        try:
            return self._positions[X]
        except KeyError:
            raise MembershipError(f"{X!r} is not a codeword") from None

    @cached_property
    def _positions(self):
        return {c: i for i, c in enumerate(self.codewords)}

    def __contains__(self, X) -> bool:
        return X in self._positions

    def to_json(self) -> dict:
        spec = self.field
        return {
            "q": spec.q,
            "n": self.n,
            "codewords": [c.to_json() for c in self.codewords],
            "boxplus": self.boxplus_table.tolist() if self.boxplus_table is not None else None,
            "complement": list(self.complement_map) if self.complement_map is not None else None,
            "blocks": [list(b) for b in self.blocks] if self.blocks is not None else None,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data) -> "SubspaceCode":
        if isinstance(data, (str, bytes)):
            data = json.loads(data)
        words = tuple(SubspaceRepr.from_json(c) for c in data["codewords"])
        table = data.get("boxplus")
        comp = data.get("complement")
        blocks = data.get("blocks")
        return cls(
            words,
            boxplus_table=_frozen_table(table) if table is not None else None,
            complement_map=tuple(comp) if comp is not None else None,
            blocks=tuple(tuple(b) for b in blocks) if blocks is not None else None,
        )


def _frozen_table(t):
    a = np.array(t, dtype=np.int64)
    a.flags.writeable = False
    return a


def make_code(codewords: Sequence[SubspaceRepr], boxplus=None, complement=None) -> SubspaceCode:
    """A code from explicit codewords, deduplicated and sorted by (dim, RREF key).

    ``boxplus`` and ``complement`` are indexed by position in the sorted list.
    """
    words = tuple(sorted(set(codewords), key=lambda s: s.sort_key))
    if len(words) != len(codewords) and (boxplus is not None or complement is not None):
        raise ValueError("tables need distinct codewords")
    return SubspaceCode(
        words,
        boxplus_table=_frozen_table(boxplus) if boxplus is not None else None,
        complement_map=tuple(complement) if complement is not None else None,
    )


def build_partition_code(pc: PartitionCodeSpec) -> SubspaceCode:
    """{⟨E_I⟩ : I ⊆ blocks} with Y1 ⊞ Y2 = ⟨E_{I1 △ I2}⟩."""
    m = pc.m
    spans = []
    for mask in range(1 << m):
        vecs = [pc.independent_set[i] for b in range(m) if mask >> b & 1 for i in pc.blocks[b]]
        spans.append((gfcore.span(vecs, pc.spec, pc.n), mask))
    spans.sort(key=lambda t: t[0].sort_key)
    words = tuple(s for s, _ in spans)
    if len(set(words)) != len(words):
        raise AssertionError("distinct block unions spanned the same subspace")
    masks = [mk for _, mk in spans]
    pos = {mk: i for i, mk in enumerate(masks)}
    table = [[pos[a ^ b] for b in masks] for a in masks]
    index_sets = tuple(frozenset(b for b in range(m) if mk >> b & 1) for mk in masks)
    return SubspaceCode(words, index_sets, _frozen_table(table), None, pc.blocks)


def boxplus(C: SubspaceCode, X: SubspaceRepr, Y: SubspaceRepr) -> SubspaceRepr:
    if C.boxplus_table is None:
        raise PreconditionError("code has no addition table")
    return C.codewords[C.boxplus_table[C.index(X), C.index(Y)]]


@dataclass(frozen=True)
class AxiomReport:
    axioms: dict
    witness: tuple | None = None
    failed: str | None = None

    @property
    def ok(self) -> bool:
        return all(self.axioms.values())

    def to_json(self) -> dict:
        return {"axioms": dict(self.axioms), "holds": self.ok,
                "witness": {"axiom": self.failed, "elements": list(self.witness)}
                if self.witness is not None else None}


def _first(mask):
    hits = np.argwhere(mask)
    return tuple(int(i) for i in hits[0]) if len(hits) else None


def verify_linear(C: SubspaceCode) -> AxiomReport:
    """Exhaustive group axioms plus translation invariance of the subspace distance."""
    if C.boxplus_table is None:
        raise PreconditionError("code has no addition table")
    B = np.asarray(C.boxplus_table)
    k = len(C)
    results, witness, failed = {}, None, None

    def record(name, w):
        nonlocal witness, failed
        results[name] = w is None
        if w is not None and witness is None:
            witness, failed = w, name

    zero = gfcore.zero_subspace(C.field, C.n)
    record("zero_codeword", None if zero in C else ())
    if B.shape != (k, k) or ((B < 0) | (B >= k)).any():
        record("closure", (_first((B < 0) | (B >= k)) or ()))
        return AxiomReport(results, witness, failed)
    record("closure", None)
    record("commutativity", _first(B != B.T))
    assoc = None
    for x in range(k):
        bad = B[B[x]] != B[x][B]  # [y, w]: (x⊞y)⊞w vs x⊞(y⊞w)
        hit = _first(bad)
        if hit is not None:
            assoc = (x, *hit)
            break
    record("associativity", assoc)
    if zero in C:
        z = C.index(zero)
        record("identity", _first(B[:, z] != np.arange(k)))
    else:
        record("identity", ())
    diag = B[np.arange(k), np.arange(k)]
    record("self_inverse", _first(diag != (C.index(zero) if zero in C else -1)))
    D = distance_matrix(C.codewords)
    inv = None
    for w in range(k):
        shifted = D[B[:, w][:, None], B[:, w][None, :]]
        hit = _first(shifted != D)
        if hit is not None:
            inv = (*hit, w)
            break
    record("translation_invariance", inv)
    return AxiomReport(results, witness, failed)


def verify_closed_under_intersection(C: SubspaceCode) -> AxiomReport:
    words = C.codewords
    members = set(words)
    for i, X in enumerate(words):
        for j in range(i + 1, len(words)):
            if gfcore.subspace_intersect(X, words[j]) not in members:
                return AxiomReport({"closed_under_intersection": False}, (i, j), "closed_under_intersection")
    return AxiomReport({"closed_under_intersection": True})


def verify_closed_under_sum(C: SubspaceCode) -> AxiomReport:
    words = C.codewords
    members = set(words)
    for i, X in enumerate(words):
        for j in range(i + 1, len(words)):
            if gfcore.subspace_sum(X, words[j]) not in members:
                return AxiomReport({"closed_under_sum": False}, (i, j), "closed_under_sum")
    return AxiomReport({"closed_under_sum": True})


def canonical_complement(C: SubspaceCode) -> SubspaceCode:
    """Install f(X) = X ⊞ F_q^n."""
    full = gfcore.full_space(C.field, C.n)
    if full not in C:
        raise PreconditionError("the full space is not a codeword, so no complement exists")
    if C.boxplus_table is None:
        raise PreconditionError("code has no addition table")
    top = C.index(full)
    f = tuple(int(C.boxplus_table[i, top]) for i in range(len(C)))
    return replace(C, complement_map=f)


def verify_complement(C: SubspaceCode) -> AxiomReport:
    """Complement axioms: trivial meet and full sum, dimension swap, involution, isometry."""
    if C.complement_map is None:
        raise PreconditionError("code has no complement map")
    f = C.complement_map
    words, n, k = C.codewords, C.n, len(C)
    results, witness, failed = {}, None, None

    def record(name, w):
        nonlocal witness, failed
        results[name] = w is None
        if w is not None and witness is None:
            witness, failed = w, name

    if len(f) != k or any(not 0 <= y < k for y in f):
        record("well_defined", (next((i for i, y in enumerate(f) if not 0 <= y < k), len(f)),))
        return AxiomReport(results, witness, failed)
    full = gfcore.full_space(C.field, n)
    w = None
    for i, X in enumerate(words):
        Y = words[f[i]]
        if gfcore.subspace_intersect(X, Y).dim != 0 or gfcore.subspace_sum(X, Y) != full:
            w = (i,)
            break
    record("direct_complement", w)
    w = next(((i,) for i in range(k) if words[f[i]].dim != n - words[i].dim), None)
    if w is None:
        seen = {}
        for i in range(k):
            if f[i] in seen:
                w = (seen[f[i]], i)
                break
            seen[f[i]] = i
    record("dimension_swap", w)
    record("involution", next(((i,) for i in range(k) if f[f[i]] != i), None))
    D = distance_matrix(words)
    fa = np.array(f)
    record("isometry", _first(D[fa[:, None], fa[None, :]] != D))
    return AxiomReport(results, witness, failed)


def search_complement(U: Sequence[SubspaceRepr], limit: int = SEARCH_COMPLEMENT_LIMIT):
    """Find any complement map on ``U`` (as a tuple of positions), or None.

    Backtracking over perfect matchings of the 'direct complement' graph,
    pruning on distance preservation against already-matched pairs.
    """
    U = list(U)
    if len(U) > limit:
        raise BudgetExceeded("complement search", limit, len(U))
    if not U:
        return ()
    n = U[0].n
    full = gfcore.full_space(U[0].field, n)
    k = len(U)
    partners = [
        [j for j in range(k)
         if U[j].dim == n - U[i].dim
         and gfcore.subspace_intersect(U[i], U[j]).dim == 0
         and gfcore.subspace_sum(U[i], U[j]) == full]
        for i in range(k)
    ]
    D = distance_matrix(U)
    f = [-1] * k

    def consistent(i, j):
        for a in range(k):
            if f[a] >= 0 and (D[i, a] != D[j, f[a]] or D[j, a] != D[i, f[a]]):
                return False
        return D[i, j] == D[j, i]

    def solve():
        i = next((a for a in range(k) if f[a] < 0), None)
        if i is None:
            return True
        for j in partners[i]:
            if f[j] >= 0 or not consistent(i, j):
                continue
            f[i], f[j] = j, i
            if solve():
                return True
            f[i] = f[j] = -1
        return False

    return tuple(f) if solve() else None


@dataclass(frozen=True)
class BoundReport:
    one_dim_count: int
    bound: int | None
    holds: bool | None


def one_dim_bound_check(U: Sequence[SubspaceRepr], q: int = 2, complement=None) -> BoundReport:
    """|U_1| ≤ 2^(n-1) for codes in P_2(n) admitting a complement.

    For q ≠ 2 only the count is reported.
    """
    U = list(U)
    if complement is None:
        complement = search_complement(U)
        if complement is None:
            raise PreconditionError("no complement exists on this set")
    count = sum(1 for X in U if X.dim == 1)
    if q != 2:
        return BoundReport(count, None, None)
    n = U[0].n
    bound = 2 ** (n - 1)
    return BoundReport(count, bound, count <= bound)


# -- codes from sublattices --------------------------------------------------------

def code_lattice(C: SubspaceCode) -> FiniteLattice:
    """Codewords ordered by containment, as a lattice (needs closure under + and ∩)."""
    words = C.codewords
    k = len(words)
    leq = np.zeros((k, k), dtype=bool)
    for i in range(k):
        for j in range(k):
            leq[i, j] = gfcore.contains(words[j], words[i])
    return from_leq(leq, labels=[w.label() for w in words])


def code_from_distributive_sublattice(words: Sequence[SubspaceRepr]) -> SubspaceCode:
    """Partition code reproducing a distributive sublattice of P_q(n).

    Takes a basis of each atom, concatenates them into an independent set
    and uses the atoms as blocks.  The result's codewords equal ``words``.
    """
    from .lattice_props import is_distributive, unique_decomposition

    C0 = make_code(words)
    closed = verify_closed_under_sum(C0).ok and verify_closed_under_intersection(C0).ok
    if not closed:
        raise PreconditionError("codewords are not a sublattice of the linear lattice")
    L = code_lattice(C0)
    report = is_distributive(L)
    if not report.holds:
        raise PreconditionError("sublattice is not distributive", witness=report.witness)
    dec = unique_decomposition(L)
    vectors, blocks = [], []
    for a in dec.atoms:
        basis = C0.codewords[a].basis
        blocks.append(tuple(range(len(vectors), len(vectors) + len(basis))))
        vectors.extend(basis)
    pc = PartitionCodeSpec(C0.field, C0.n, tuple(vectors), tuple(blocks))
    C = build_partition_code(pc)
    if C.codewords != C0.codewords:
        raise AssertionError("partition code differs from the sublattice it was built from")
    return C


def fixed_basis_code(field, n: int) -> SubspaceCode:
    """Spans of all subsets of the standard basis (2^n codewords)."""
    spec = gfcore.as_spec(field)
    basis = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    return build_partition_code(PartitionCodeSpec(spec, n, basis, tuple((i,) for i in range(n))))
