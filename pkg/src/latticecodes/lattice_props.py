"""Decision procedures for lattice classes, with checkable witnesses.

Every decider returns a :class:`PropertyReport`.  A failing report always
carries a :class:`Witness` that :func:`verify_witness` can re-check against
the raw tables without going through the decider that produced it.

Where two routes decide the same thing (identity check vs. forbidden
pentagon/diamond search, irredundancy criterion vs. the subset oracle),
both run and any disagreement raises :class:`ConsistencyError`.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import ConsistencyError, PreconditionError
from .lattice_core import FiniteLattice

ORACLE_MAX_ATOMS = 20


@dataclass(frozen=True)
class Witness:
    kind: str
    elements: tuple
    detail: str = ""
    sets: tuple = field(default=())

    def to_json(self) -> dict:
        d = asdict(self)
        d["elements"] = list(self.elements)
        d["sets"] = [list(s) for s in self.sets]
        return d


@dataclass(frozen=True)
class PropertyReport:
    property: str
    holds: bool
    witness: Witness | None = None

    def __bool__(self):
        return self.holds

    def to_json(self) -> dict:
        return {
            "property": self.property,
            "holds": self.holds,
            "witness": self.witness.to_json() if self.witness else None,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())


# -- forbidden sublattices ------------------------------------------------------

def find_N5(L: FiniteLattice) -> Witness | None:
    """Least (a2, a1, b) with a2 ≺ a1, b incomparable to both, equal joins and meets.

    Witness elements are ``(a2∧b, a2, a1, b, a1∨b)``.
    """
    n = L.size
    comp = L.leq | L.leq.T
    J, M = L.join, L.meet
    for a2 in range(n):
        above = np.flatnonzero(L.leq[a2])
        above = above[above != a2]
        if above.size == 0:
            continue
        # rows: a1 candidates, columns: b
        ok = ~comp[above] & ~comp[a2][None, :]
        ok &= J[above] == J[a2][None, :]
        ok &= M[above] == M[a2][None, :]
        hits = np.argwhere(ok)
        if len(hits):
            i, b = hits[0]
            a1 = int(above[i])
            b = int(b)
            return Witness(
                "N5",
                (int(M[a2, b]), a2, a1, b, int(J[a1, b])),
                f"{a2} < {a1}, {b} incomparable to both; joins {J[a1, b]}, meets {M[a1, b]}",
            )
    return None


def find_M3(L: FiniteLattice) -> Witness | None:
    """Least pairwise-incomparable (y1, y2, y3) with all pairwise joins and meets equal."""
    n = L.size
    comp = L.leq | L.leq.T
    J, M = L.join, L.meet
    for y1 in range(n):
        cand = np.flatnonzero(~comp[y1])
        cand = cand[cand > y1]
        if cand.size < 2:
            continue
        top, bot = J[y1, cand], M[y1, cand]
        # y2, y3 drawn from cand with matching pairwise join/meet
        ok = (top[:, None] == top[None, :]) & (bot[:, None] == bot[None, :])
        ok &= ~comp[np.ix_(cand, cand)]
        ok &= J[np.ix_(cand, cand)] == top[:, None]
        ok &= M[np.ix_(cand, cand)] == bot[:, None]
        ok &= cand[:, None] < cand[None, :]
        hits = np.argwhere(ok)
        if len(hits):
            i, j = hits[0]
            y2, y3 = int(cand[i]), int(cand[j])
            return Witness(
                "M3",
                (y1, y2, y3),
                f"pairwise joins {top[i]}, pairwise meets {bot[i]}",
            )
    return None


# -- identity checks -------------------------------------------------------------

def _modular_identity_failure(L: FiniteLattice):
    """First (x, y, z) with x ⪯ z and x∨(y∧z) ≠ (x∨y)∧z."""
    J, M = L.join, L.meet
    cols = np.arange(L.size)
    for x in range(L.size):
        lhs = J[x][M]                       # [y, z] -> x ∨ (y ∧ z)
        rhs = M[J[x][:, None], cols[None, :]]  # [y, z] -> (x ∨ y) ∧ z
        bad = (lhs != rhs) & L.leq[x][None, :]
        hits = np.argwhere(bad)
        if len(hits):
            return (x, int(hits[0][0]), int(hits[0][1]))
    return None


def _distributive_identity_failure(L: FiniteLattice):
    """First (x, y, z) with x∧(y∨z) ≠ (x∧y)∨(x∧z)."""
    J, M = L.join, L.meet
    for x in range(L.size):
        lhs = M[x][J]
        rhs = J[M[x][:, None], M[x][None, :]]
        hits = np.argwhere(lhs != rhs)
        if len(hits):
            return (x, int(hits[0][0]), int(hits[0][1]))
    return None


def is_modular(L: FiniteLattice) -> PropertyReport:
    failure = _modular_identity_failure(L)
    pentagon = find_N5(L)
    if (failure is None) != (pentagon is None):
        if failure is not None:
            w = Witness("identity_failure", failure, "modular identity fails but no pentagon found")
        else:
            w = pentagon
        raise ConsistencyError("modular identity and pentagon search disagree", witness=w)
    return PropertyReport("modular", failure is None, pentagon)


def is_semimodular(L: FiniteLattice) -> PropertyReport:
    """x∧y ⋖ x, y  ⟹  x, y ⋖ x∨y, over all pairs."""
    C = L.cover_matrix
    n = L.size
    xs, ys = np.triu_indices(n, k=1)
    m, j = L.meet[xs, ys], L.join[xs, ys]
    premise = C[m, xs] & C[m, ys]
    concl = C[xs, j] & C[ys, j]
    bad = np.flatnonzero(premise & ~concl)
    if bad.size:
        x, y = int(xs[bad[0]]), int(ys[bad[0]])
        return PropertyReport(
            "semimodular", False,
            Witness("cover_failure", (x, y),
                    f"{m[bad[0]]} is covered by {x} and {y} but {j[bad[0]]} does not cover both"),
        )
    return PropertyReport("semimodular", True)


def is_distributive(L: FiniteLattice) -> PropertyReport:
    failure = _distributive_identity_failure(L)
    modular = is_modular(L)
    if not modular.holds:
        if failure is None:
            raise ConsistencyError("distributive identity holds on a lattice with a pentagon",
                                   witness=modular.witness)
        return PropertyReport("distributive", False, modular.witness)
    diamond = find_M3(L)
    if (failure is None) != (diamond is None):
        w = diamond or Witness("identity_failure", failure, "distributive identity fails but no diamond found")
        raise ConsistencyError("distributive identity and diamond search disagree", witness=w)
    return PropertyReport("distributive", failure is None, diamond)


def _atoms_below(L: FiniteLattice):
    at = np.array(L.atoms, dtype=np.int64)
    return at, L.leq[at].T  # [x, i] -> atom i ⪯ x


def is_atomic(L: FiniteLattice) -> PropertyReport:
    at, below = _atoms_below(L)
    for x in range(L.size):
        if x != L.bottom and not below[x].any():
            return PropertyReport("atomic", False, Witness("non_atomistic_element", (x,), "no atom below"))
    return PropertyReport("atomic", True)


def is_atomistic(L: FiniteLattice) -> PropertyReport:
    at, below = _atoms_below(L)
    for x in range(L.size):
        j = L.join_all(at[below[x]])
        if j != x:
            return PropertyReport(
                "atomistic", False,
                Witness("non_atomistic_element", (x,), f"join of atoms below {x} is {j}"),
            )
    return PropertyReport("atomistic", True)


def _minimal_decomposition(L, x, start, keep=None):
    chosen = list(start)
    for a in list(chosen):
        if a == keep:
            continue
        trial = [b for b in chosen if b != a]
        if L.join_all(trial) == x:
            chosen = trial
    return tuple(sorted(chosen))


def subset_join_table(L: FiniteLattice) -> np.ndarray:
    """``out[mask]`` = join of the atoms whose positions are set in ``mask``."""
    at = L.atoms
    out = np.full(1 << len(at), L.bottom, dtype=np.int64)
    for i, a in enumerate(at):
        half = 1 << i
        out[half:2 * half] = L.join[out[:half], a]
    return out


def uniquely_atomistic_by_subsets(L: FiniteLattice) -> tuple[bool, Witness | None]:
    """Exponential oracle: every element is the join of exactly one atom subset."""
    m = len(L.atoms)
    if m > ORACLE_MAX_ATOMS:
        raise PreconditionError(f"subset oracle limited to {ORACLE_MAX_ATOMS} atoms, lattice has {m}")
    joins = subset_join_table(L)
    counts = np.bincount(joins, minlength=L.size)
    if (counts == 1).all():
        return True, None
    missing = np.flatnonzero(counts == 0)
    if missing.size:
        return False, Witness("non_atomistic_element", (int(missing[0]),), "no atom subset joins to it")
    x = int(np.flatnonzero(counts > 1)[0])
    masks = np.flatnonzero(joins == x)[:2]
    sets = tuple(tuple(L.atoms[i] for i in range(m) if mk >> i & 1) for mk in masks)
    return False, Witness("ambiguous_decomposition", (x,), f"{x} has {counts[x]} atom decompositions", sets)


def is_uniquely_atomistic(L: FiniteLattice, cross_check: bool = True) -> PropertyReport:
    """Atomistic, and dropping any atom below x drops the join strictly below x."""
    atomistic = is_atomistic(L)
    witness = atomistic.witness
    if atomistic.holds:
        at, below = _atoms_below(L)
        for x in range(L.size):
            mine = [int(a) for a in at[below[x]]]
            for a in mine:
                rest = [b for b in mine if b != a]
                if L.join_all(rest) == x:
                    s1 = _minimal_decomposition(L, x, rest)
                    s2 = _minimal_decomposition(L, x, s1 + (a,), keep=a)
                    witness = Witness(
                        "ambiguous_decomposition", (x,),
                        f"{x} = join{list(s1)} = join{list(s2)}", (s1, s2),
                    )
                    break
            if witness is not None:
                break
    holds = witness is None
    if cross_check and len(L.atoms) <= ORACLE_MAX_ATOMS:
        oracle, _ = uniquely_atomistic_by_subsets(L)
        if oracle != holds:
            raise ConsistencyError("irredundancy criterion and subset oracle disagree", witness=witness)
    return PropertyReport("uniquely_atomistic", holds, witness)


def is_geometric(L: FiniteLattice) -> PropertyReport:
    semi = is_semimodular(L)
    if not semi.holds:
        return PropertyReport("geometric", False, semi.witness)
    atomistic = is_atomistic(L)
    return PropertyReport("geometric", atomistic.holds, atomistic.witness)


DECIDERS = {
    "modular": is_modular,
    "semimodular": is_semimodular,
    "distributive": is_distributive,
    "atomic": is_atomic,
    "atomistic": is_atomistic,
    "uniquely_atomistic": is_uniquely_atomistic,
    "geometric": is_geometric,
}


def decide(L: FiniteLattice, prop: str) -> PropertyReport:
    try:
        return DECIDERS[prop](L)
    except KeyError:
        raise ValueError(f"unknown property {prop!r}; choose from {sorted(DECIDERS)}") from None


# -- independent witness checking --------------------------------------------------

def _lub(L, xs):
    """Least upper bound from the order matrix alone."""
    ub = np.logical_and.reduce([L.leq[x] for x in xs])
    cands = [u for u in np.flatnonzero(ub) if (L.leq[u] | ~ub).all()]
    return int(cands[0]) if len(cands) == 1 else None


def _glb(L, xs):
    lb = np.logical_and.reduce([L.leq[:, x] for x in xs])
    cands = [u for u in np.flatnonzero(lb) if (L.leq[:, u] | ~lb).all()]
    return int(cands[0]) if len(cands) == 1 else None


def verify_witness(L: FiniteLattice, w: Witness) -> bool:
    """Re-check a witness from ``leq`` and the raw tables, independent of the deciders."""
    e = w.elements
    leq, J, M = L.leq, L.join, L.meet
    if w.kind == "N5":
        mu, a2, a1, b, top = e
        if len(set(e)) != 5 or not (leq[a2, a1] and a2 != a1):
            return False
        if leq[a1, b] or leq[b, a1] or leq[a2, b] or leq[b, a2]:
            return False
        return bool(J[a1, b] == J[a2, b] == top and M[a1, b] == M[a2, b] == mu)
    if w.kind == "M3":
        y = e
        if len(set(y)) != 3 or any(leq[i, j] for i in y for j in y if i != j):
            return False
        joins = {int(J[i, j]) for i in y for j in y if i < j}
        meets = {int(M[i, j]) for i in y for j in y if i < j}
        return len(joins) == 1 and len(meets) == 1
    if w.kind == "identity_failure":
        x, y, z = e
        if leq[x, z] and J[x, M[y, z]] != M[J[x, y], z]:
            return True
        return bool(M[x, J[y, z]] != J[M[x, y], M[x, z]])
    if w.kind == "table_failure":
        x, y = e
        return J[x, y] != _lub(L, (x, y)) or M[x, y] != _glb(L, (x, y))
    if w.kind == "cover_failure":
        x, y = e
        C = L.cover_matrix
        m, j = M[x, y], J[x, y]
        return bool(C[m, x] and C[m, y] and not (C[x, j] and C[y, j]))
    if w.kind == "non_atomistic_element":
        (x,) = e
        below = [a for a in L.atoms if leq[a, x]]
        return (_lub(L, below) if below else L.bottom) != x
    if w.kind == "ambiguous_decomposition":
        (x,) = e
        s1, s2 = w.sets
        atoms = set(L.atoms)
        if set(s1) == set(s2) or not (set(s1) | set(s2)) <= atoms:
            return False
        return all((_lub(L, s) if s else L.bottom) == x for s in (s1, s2))
    raise ValueError(f"unknown witness kind {w.kind!r}")


def check_tables(L: FiniteLattice) -> Witness | None:
    """First pair whose join/meet entry disagrees with the order matrix."""
    for x in range(L.size):
        for y in range(x, L.size):
            if L.join[x, y] != _lub(L, (x, y)) or L.meet[x, y] != _glb(L, (x, y)) \
                    or L.join[x, y] != L.join[y, x] or L.meet[x, y] != L.meet[y, x]:
                return Witness("table_failure", (x, y), "table entry disagrees with the order")
    return None


# -- unique decomposition ---------------------------------------------------------

@dataclass(frozen=True)
class AtomDecomposition:
    """``decomposition[x]`` is the set of atom positions i with atoms[i] ⪯ x."""

    atoms: tuple
    decomposition: tuple

    def elements_of(self, x) -> tuple:
        return tuple(self.atoms[i] for i in sorted(self.decomposition[x]))

    def element_for(self, S) -> int:
        return self._inverse[frozenset(S)]

    @property
    def _inverse(self):
        return {s: x for x, s in enumerate(self.decomposition)}


def unique_decomposition(L: FiniteLattice) -> AtomDecomposition:
    report = is_uniquely_atomistic(L)
    if not report.holds:
        raise PreconditionError("lattice is not uniquely atomistic", witness=report.witness)
    at, below = _atoms_below(L)
    dec = tuple(frozenset(int(i) for i in np.flatnonzero(below[x])) for x in range(L.size))
    for x, s in enumerate(dec):
        if L.join_all(at[sorted(s)]) != x:
            raise ConsistencyError(f"decomposition of {x} does not join back to it")
    if len(set(dec)) != L.size:
        raise ConsistencyError("atom decomposition is not injective")
    return AtomDecomposition(tuple(int(a) for a in at), dec)


def join_of(L: FiniteLattice, S, decomposition: AtomDecomposition | None = None) -> int:
    """sup S for a set S of atom positions."""
    dec = decomposition or unique_decomposition(L)
    return L.join_all(dec.atoms[i] for i in S)


def meet_via_sets(L: FiniteLattice, S1, S2, decomposition: AtomDecomposition | None = None) -> int:
    """sup(S1 ∩ S2); asserted equal to sup S1 ∧ sup S2."""
    dec = decomposition or unique_decomposition(L)
    via_sets = join_of(L, set(S1) & set(S2), dec)
    direct = int(L.meet[join_of(L, S1, dec), join_of(L, S2, dec)])
    if via_sets != direct:
        raise ConsistencyError(f"sup(S1∩S2)={via_sets} but sup S1 ∧ sup S2={direct}")
    return via_sets
