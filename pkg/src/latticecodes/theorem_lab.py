"""Exhaustive and sampled checks of the unique-decomposition results.

The population is a fixed catalog of named lattices plus seeded random
sublattices of them.  Each suite in :data:`SUITES` walks the population,
applies one family of claims and collects failures with witnesses.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

import numpy as np

from . import gfcore
from . import lattice_core as lc
from . import lattice_props as lp
from . import subspace_codes as sc
from .errors import ConsistencyError, PreconditionError
from .lattice_core import FiniteLattice
from .linear_lattice import ProjectiveSpaceLattice, build_projective_lattice, metric_equivalence_check

EXHAUSTIVE_MAX = 16
DEFAULT_SAMPLES = 500
DEFAULT_SEED = 0


# -- catalog --------------------------------------------------------------------

@dataclass
class LatticeCatalog:
    lattices: dict
    projective: dict = field(default_factory=dict)

    def __iter__(self):
        return iter(self.lattices.items())

    def __len__(self):
        return len(self.lattices)

    def __getitem__(self, name) -> FiniteLattice:
        return self.lattices[name]


@lru_cache(maxsize=None)
def projective(q: int, n: int) -> ProjectiveSpaceLattice:
    return build_projective_lattice(q, n)


@lru_cache(maxsize=None)
def build_catalog() -> LatticeCatalog:
    L = {}
    for n in range(1, 6):
        L[f"B{n}"] = lc.boolean_lattice(n)
    for k in range(1, 7):
        L[f"C{k}"] = lc.chain(k)
    L["M3"] = lc.m3()
    L["N5"] = lc.n5()
    L["M4"] = lc.diamond(4)
    L["M3/M3"] = lc.stack(lc.m3(), lc.m3())
    L["B2/M3"] = lc.stack(lc.boolean_lattice(2), lc.m3())
    L["M3/B2"] = lc.stack(lc.m3(), lc.boolean_lattice(2))
    L["N5/M3"] = lc.stack(lc.n5(), lc.m3())
    L["C1xM3"] = lc.product(lc.chain(1), lc.m3())
    L["C2xC2"] = lc.product(lc.chain(2), lc.chain(2))
    L["Pi4"] = lc.partition_lattice(4)
    proj = {}
    for q, top in ((2, 4), (3, 3)):
        for n in range(1, top + 1):
            name = f"P{q}({n})"
            proj[name] = projective(q, n)
            L[name] = proj[name].lattice
    return LatticeCatalog(L, proj)


def sample_sublattices(catalog: LatticeCatalog, count: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED,
                       max_seed_size: int = 6) -> list:
    """Seeded closures of random element sets, as ``(name, lattice)`` pairs."""
    rng = np.random.default_rng(seed)
    hosts = [(name, L) for name, L in catalog if L.size >= 4]
    seen = set()
    out = []
    attempts = 0
    while len(out) < count and attempts < 50 * count:
        attempts += 1
        name, L = hosts[attempts % len(hosts)]
        k = int(rng.integers(1, max_seed_size + 1))
        seed_set = rng.choice(L.size, size=min(k, L.size), replace=False)
        elems = lc.sublattice_closure(L, seed_set.tolist())
        key = (name, elems)
        if len(elems) < 2 or key in seen:
            continue
        seen.add(key)
        sub, members = lc.restrict(L, elems)
        out.append((f"{name}/sub{len(out)}", sub))
    return out


@dataclass
class Population:
    instances: list
    seed: int | None


def build_population(samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED) -> Population:
    cat = build_catalog()
    return Population(list(cat) + sample_sublattices(cat, samples, seed), seed)


# -- sublattice surveys -------------------------------------------------------------

@dataclass
class SublatticeSurveyResult:
    host: str
    mode: str
    total_sublattices_found: int
    distributive_count: int
    max_distributive_size: int
    extremal_sublattices: list
    distributive_sublattices: list
    seed: int | None = None

    def to_json(self) -> dict:
        return {
            "host": self.host,
            "mode": self.mode,
            "seed": self.seed,
            "total_sublattices_found": self.total_sublattices_found,
            "distributive_count": self.distributive_count,
            "max_distributive_size": self.max_distributive_size,
            "extremal_sublattices": [sorted(s) for s in self.extremal_sublattices],
        }


def _closed_masks(L: FiniteLattice) -> np.ndarray:
    N = L.size
    masks = np.arange(1 << N, dtype=np.int64)
    bits = [((masks >> i) & 1).astype(bool) for i in range(N)]
    closed = np.ones(1 << N, dtype=bool)
    closed[0] = False
    for i in range(N):
        for j in range(i + 1, N):
            closed &= ~(bits[i] & bits[j]) | (bits[int(L.join[i, j])] & bits[int(L.meet[i, j])])
    return masks[closed]


def subset_is_distributive(L: FiniteLattice, elements) -> bool:
    idx = np.array(sorted(elements))
    J, M = L.join, L.meet
    mxy = M[np.ix_(idx, idx)]
    lhs = M[idx[:, None, None], J[np.ix_(idx, idx)][None, :, :]]
    rhs = J[mxy[:, :, None], mxy[:, None, :]]
    return bool((lhs == rhs).all())


def enumerate_sublattices(L: FiniteLattice, mode: str = "exhaustive", budget: int = 2000,
                          seed: int = DEFAULT_SEED, name: str = "L") -> SublatticeSurveyResult:
    """Survey the nonempty sublattices of ``L`` and their distributive members.

    ``exhaustive`` scans all 2^N subsets (N ≤ 16).  ``sampled`` closes
    ``budget`` random seeds of at most 6 elements plus every set of at most
    h(I) atoms.
    """
    if mode == "exhaustive":
        if L.size > EXHAUSTIVE_MAX:
            from .errors import BudgetExceeded
            raise BudgetExceeded("exhaustive sublattice scan", EXHAUSTIVE_MAX, L.size)
        sets = [frozenset(i for i in range(L.size) if mk >> i & 1) for mk in _closed_masks(L).tolist()]
        used_seed = None
    elif mode == "sampled":
        rng = np.random.default_rng(seed)
        found = set()
        for _ in range(budget):
            k = int(rng.integers(1, 7))
            seed_set = rng.choice(L.size, size=min(k, L.size), replace=False)
            found.add(lc.sublattice_closure(L, seed_set.tolist()))
        import itertools
        n = int(L.heights[L.top])
        for k in range(n + 1):
            for combo in itertools.combinations(L.atoms, k):
                found.add(lc.sublattice_closure(L, combo + (L.bottom,)))
        sets = sorted(found, key=lambda s: (len(s), sorted(s)))
        used_seed = seed
    else:
        raise ValueError(f"unknown survey mode {mode!r}")
    dist = [s for s in sets if subset_is_distributive(L, s)]
    best = max((len(s) for s in dist), default=0)
    extremal = [s for s in dist if len(s) == best]
    return SublatticeSurveyResult(name, mode, len(sets), len(dist), best, extremal, dist, used_seed)


def survey(name: str, L: FiniteLattice, seed: int = DEFAULT_SEED, budget: int = 2000) -> SublatticeSurveyResult:
    mode = "exhaustive" if L.size <= EXHAUSTIVE_MAX else "sampled"
    return enumerate_sublattices(L, mode, budget=budget, seed=seed, name=name)


def sub_atoms(L: FiniteLattice, elements) -> list:
    """Atoms of the sublattice ``elements`` in its own order."""
    S = sorted(elements)
    bottom = L.meet_all(S)
    return [x for x in S if x != bottom
            and not any(y not in (x, bottom) and L.leq[y, x] for y in S)]


# -- individual theorem checks --------------------------------------------------------

@dataclass
class CheckReport:
    name: str
    ok: bool
    details: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)


def _require_geometric(L):
    for conj in ("semimodular", "atomistic"):
        rep = lp.decide(L, conj)
        if not rep.holds:
            raise PreconditionError(f"host is not geometric: {conj} fails", witness=rep.witness)


def verify_T2(L: FiniteLattice, result: SublatticeSurveyResult) -> CheckReport:
    """Size bound 2^h(I) and the extremal characterisation on a survey of ``L``."""
    _require_geometric(L)
    n = int(L.heights[L.top])
    bound = 2 ** n
    host_atoms = set(L.atoms)
    failures = []
    literal_counterexamples = []
    extremal = []
    for S in result.distributive_sublattices:
        own_atoms = sub_atoms(L, S)
        atoms_are_host_atoms = set(own_atoms) <= host_atoms
        has_top = L.top in S
        n_host_atoms = len(set(own_atoms) & host_atoms)
        joins_to_top = L.join_all(own_atoms) == L.top
        if len(S) > bound:
            failures.append({"claim": "size bound", "elements": sorted(S)})
        if len(S) == bound:
            extremal.append(S)
            if not (atoms_are_host_atoms and has_top and n_host_atoms == n):
                failures.append({"claim": "extremal characterisation", "elements": sorted(S)})
        if (n_host_atoms == n) != (len(S) == bound):
            failures.append({"claim": "size 2^n iff n host atoms", "elements": sorted(S)})
        if atoms_are_host_atoms and joins_to_top and len(S) != bound:
            failures.append({"claim": "host atoms joining to I give size 2^n", "elements": sorted(S)})
        if atoms_are_host_atoms and has_top and len(S) != bound:
            literal_counterexamples.append(sorted(S))
    details = {
        "height": n,
        "bound": bound,
        "max_distributive_size": result.max_distributive_size,
        "extremal_count": len(extremal),
        "atoms_in_host_and_top_member_but_smaller": len(literal_counterexamples),
    }
    return CheckReport("T2", not failures, details, failures)


@dataclass(frozen=True)
class PhiMap:
    atoms: tuple
    image: tuple  # image[mask] = element

    def __call__(self, subset) -> int:
        return self.image[sum(1 << i for i in subset)]


def phi_bijection(M: FiniteLattice) -> PhiMap:
    """Φ(I) = join of the atoms indexed by I, checked to be a bijection onto M."""
    dec = lp.unique_decomposition(M)
    image = tuple(int(x) for x in lp.subset_join_table(M))
    m = len(dec.atoms)
    if len(image) != 2 ** m or len(set(image)) != len(image) or set(image) != set(range(M.size)):
        raise ConsistencyError("Φ is not a bijection")
    if image[0] != M.bottom or image[-1] != M.top:
        raise ConsistencyError("Φ does not send ∅ to O and the ground set to I")
    return PhiMap(dec.atoms, image)


def verify_C2(M: FiniteLattice, host: FiniteLattice) -> CheckReport:
    """W_k(M) ≤ C(n, k) with M's own heights; equality everywhere iff M has n atoms."""
    _require_geometric(host)
    rep = lp.is_distributive(M)
    if not rep.holds:
        raise PreconditionError("sublattice is not distributive", witness=rep.witness)
    n = int(host.heights[host.top])
    W = lc.whitney_numbers(M)
    binoms = [comb(n, k) for k in range(n + 1)]
    padded = W + [0] * (n + 1 - len(W))
    within = len(W) <= n + 1 and all(w <= b for w, b in zip(padded, binoms))
    equal = padded == binoms
    has_n_atoms = len(M.atoms) == n
    details = {"whitney": W, "binomials": binoms, "equality": equal, "atoms": len(M.atoms)}
    failures = []
    if not within:
        failures.append({"claim": "W_k(M) <= C(n,k)", "whitney": W})
    if equal != has_n_atoms:
        failures.append({"claim": "equality iff n atoms", "whitney": W})
    return CheckReport("C2", not failures, details, failures)


def verify_T3_T4(host: ProjectiveSpaceLattice, result: SublatticeSurveyResult) -> CheckReport:
    """Rebuild each surveyed distributive sublattice as a partition code, then test complements.

    Only sublattices that hold {0} and are atomistic (hence Boolean) can carry
    a ⊞ table: X ⊞ X = {0} makes the code an elementary abelian 2-group.  The
    others are counted, and only the complement precondition is checked on them.
    """
    L = host.lattice
    full = gfcore.full_space(host.spec, host.n)
    failures = []
    with_full = without_full = not_boolean = 0
    for S in result.distributive_sublattices:
        words = [host.subspaces[i] for i in sorted(S)]
        if full not in words:
            without_full += 1
            try:
                sc.canonical_complement(sc.make_code(words))
                failures.append({"claim": "complement needs the full space", "elements": sorted(S)})
            except PreconditionError:
                pass
        else:
            with_full += 1
        M, _members = lc.restrict(L, S)
        if L.bottom not in S or not lp.is_atomistic(M).holds:
            not_boolean += 1
            continue
        try:
            C = sc.code_from_distributive_sublattice(words)
        except (PreconditionError, AssertionError) as exc:
            failures.append({"claim": "partition code construction", "elements": sorted(S), "error": str(exc)})
            continue
        lin = sc.verify_linear(C)
        cap = sc.verify_closed_under_intersection(C)
        if not (lin.ok and cap.ok):
            failures.append({"claim": "linear code axioms", "elements": sorted(S),
                             "witness": (lin.to_json() if not lin.ok else cap.to_json())})
            continue
        if sc.SubspaceCode.from_json(json.loads(C.dumps())).codewords != C.codewords:
            failures.append({"claim": "code JSON round trip", "elements": sorted(S)})
        if full in C:
            comp = sc.verify_complement(sc.canonical_complement(C))
            if not comp.ok:
                failures.append({"claim": "complement axioms", "elements": sorted(S), "witness": comp.to_json()})
    details = {"distributive": len(result.distributive_sublattices), "with_full_space": with_full,
               "without_full_space": without_full, "not_boolean": not_boolean,
               "codes": len(result.distributive_sublattices) - not_boolean}
    return CheckReport("T3T4", not failures, details, failures)


# -- suites -----------------------------------------------------------------------

@dataclass
class SuiteReport:
    suite: str
    seed: int | None
    instances: int
    failures: list
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def to_json(self) -> dict:
        return {"suite": self.suite, "seed": self.seed, "instances": self.instances,
                "failures": self.failures, "details": self.details}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True, default=_jsonable)


def _jsonable(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (set, frozenset, tuple)):
        return sorted(o)
    if isinstance(o, lp.Witness):
        return o.to_json()
    raise TypeError(f"not JSON serialisable: {type(o).__name__}")


def _failure(instance, witness):
    if isinstance(witness, lp.Witness):
        witness = witness.to_json()
    return {"instance": instance, "witness": witness}


def _suite_T1(pop, **_):
    failures, checked = [], 0
    for name, L in pop.instances:
        if not lp.is_atomistic(L).holds:
            continue
        checked += 1
        d, u = lp.is_distributive(L), lp.is_uniquely_atomistic(L)
        if d.holds != u.holds:
            failures.append(_failure(name, (d.witness or u.witness)))
    return checked, failures, {}


def _suite_UAT(pop, **_):
    failures, checked, ua = [], 0, 0
    for name, L in pop.instances:
        checked += 1
        if lp.is_uniquely_atomistic(L).holds:
            ua += 1
            m = lp.is_modular(L)
            if not m.holds:
                failures.append(_failure(name, m.witness))
    return checked, failures, {"uniquely_atomistic": ua}


def _suite_UAC(pop, **_):
    failures, checked = [], 0
    for name, L in pop.instances:
        checked += 1
        if lp.is_uniquely_atomistic(L).holds:
            g = lp.is_geometric(L)
            if not g.holds:
                failures.append(_failure(name, g.witness))
    return checked, failures, {}


def tl1_check(L: FiniteLattice):
    """Witness of a TL1 violation or table corruption on one lattice, else None."""
    bad = lp.check_tables(L)
    if bad is not None:
        return bad
    try:
        modular = lp.is_modular(L)
        if modular.holds != (lp.find_N5(L) is None):
            return modular.witness
        if modular.holds:
            dist = lp.is_distributive(L)
            if dist.holds != (lp.find_M3(L) is None):
                return dist.witness
    except ConsistencyError as exc:
        return exc.witness
    return None


def _suite_TL1(pop, **_):
    failures = []
    for name, L in pop.instances:
        w = tl1_check(L)
        if w is not None:
            failures.append(_failure(name, w))
    return len(pop.instances), failures, {}


def _suite_TL3(pop, **_):
    failures, checked = [], 0
    for name, L in pop.instances:
        if not lp.is_modular(L).holds:
            continue
        checked += 1
        val = lc.check_valuation(L, [int(h) for h in L.heights])
        if not val.all_ok:
            failures.append(_failure(name, {"check": val.failing_check, "elements": val.failing_tuple}))
        h = L.heights
        bad = [(a, b) for a, b in L.covers if h[b] != h[a] + 1]
        if bad:
            failures.append(_failure(name, {"check": "cover height step", "elements": bad[0]}))
    for name, P in build_catalog().projective.items():
        rep = metric_equivalence_check(P)
        if not rep.ok:
            failures.append(_failure(name, {"check": "d_h = d_S", "elements": rep.witness}))
    return checked, failures, {}


def _hosts(q=None, n=None):
    cat = build_catalog()
    if q is not None and n is not None:
        P = projective(q, n)
        return [(f"P{q}({n})", P.lattice, P)]
    out = []
    for name, L in cat:
        if lp.is_geometric(L).holds and L.size <= 70:
            out.append((name, L, cat.projective.get(name)))
    return out


def _suite_T2(pop, q=None, n=None, seed=DEFAULT_SEED, **_):
    failures, details = [], {}
    hosts = _hosts(q, n)
    for name, L, _ in hosts:
        res = survey(name, L, seed=seed)
        rep = verify_T2(L, res)
        details[name] = dict(rep.details, mode=res.mode, distributive=res.distributive_count)
        failures += [_failure(name, f) for f in rep.failures]
    return len(hosts), failures, details


def _suite_C2(pop, q=None, n=None, seed=DEFAULT_SEED, **_):
    failures, details, checked = [], {}, 0
    for name, L, _ in _hosts(q, n):
        res = survey(name, L, seed=seed)
        eq = 0
        for S in res.distributive_sublattices:
            M, _members = lc.restrict(L, S)
            rep = verify_C2(M, L)
            checked += 1
            eq += rep.details["equality"]
            failures += [_failure(name, dict(f, elements=sorted(S))) for f in rep.failures]
        details[name] = {"distributive": res.distributive_count, "equality_cases": eq}
    return checked, failures, details


def _suite_T3T4(pop, q=None, n=None, seed=DEFAULT_SEED, **_):
    failures, details = [], {}
    cat = build_catalog()
    hosts = [(f"P{q}({n})", projective(q, n))] if q is not None and n is not None else list(cat.projective.items())
    for name, P in hosts:
        res = survey(name, P.lattice, seed=seed)
        rep = verify_T3_T4(P, res)
        details[name] = dict(rep.details, mode=res.mode)
        failures += [_failure(name, f) for f in rep.failures]
    return len(hosts), failures, details


def independent_sets(field, n: int) -> list:
    """Standard bases of every size plus one non-standard full basis and one proper set."""
    out = [tuple(tuple(int(i == j) for j in range(n)) for i in range(r)) for r in range(1, n + 1)]
    if n >= 2:
        # upper unitriangular all-ones basis
        out.append(tuple(tuple(int(j >= i) for j in range(n)) for i in range(n)))
        out.append(tuple(tuple(int(j in (i, i + 1)) for j in range(n)) for i in range(n - 1)))
    return out


def check_partition_codes(q: int, n: int) -> tuple[int, list, dict]:
    """Every partition of each tested independent set: axioms, closure, distributivity, sizes."""
    spec = gfcore.field_spec(q)
    failures, count, max_size, max_at = [], 0, 0, set()
    for E in independent_sets(spec, n):
        r = len(E)
        for blocks in lc.set_partitions(r):
            pc = sc.PartitionCodeSpec(spec, n, E, blocks)
            C = sc.build_partition_code(pc)
            count += 1
            tag = {"q": q, "n": n, "r": r, "blocks": [list(b) for b in blocks]}
            if len(C) != 2 ** pc.m:
                failures.append(dict(tag, claim="size 2^m"))
            for rep in (sc.verify_linear(C), sc.verify_closed_under_intersection(C), sc.verify_closed_under_sum(C)):
                if not rep.ok:
                    failures.append(dict(tag, claim=rep.failed, witness=rep.witness))
            if not lp.is_distributive(sc.code_lattice(C)).holds:
                failures.append(dict(tag, claim="distributive sublattice"))
            zero = gfcore.zero_subspace(spec, n)
            for X in C.codewords:
                for Y in C.codewords:
                    if gfcore.subspace_intersect(X, Y) == zero and sc.boxplus(C, X, Y) != gfcore.subspace_sum(X, Y):
                        failures.append(dict(tag, claim="disjoint addition is sum"))
            if len(C) > max_size:
                max_size, max_at = len(C), set()
            if len(C) == max_size:
                max_at.add((r, pc.m))
    if max_size != 2 ** n or max_at != {(n, n)}:
        failures.append({"q": q, "n": n, "claim": "maximum 2^n exactly at r = m = n",
                         "max": max_size, "attained_at": sorted(max_at)})
    return count, failures, {"codes": count, "max_size": max_size}


def _suite_LT1(pop, q=None, n=None, **_):
    failures, details, checked = [], {}, 0
    fields = [q] if q is not None else [2, 3]
    dims = [n] if n is not None else [1, 2, 3, 4]
    for qq in fields:
        for nn in dims:
            c, f, d = check_partition_codes(qq, nn)
            checked += c
            failures += [_failure(f"q={qq},n={nn}", x) for x in f]
            details[f"q={qq},n={nn}"] = d
    return checked, failures, details


def _suite_CP1(pop, q=None, n=None, **_):
    failures, details, checked = [], {}, 0
    fields = [q] if q is not None else [2, 3]
    dims = [n] if n is not None else [1, 2, 3, 4]
    for qq in fields:
        for nn in dims:
            C = sc.canonical_complement(sc.fixed_basis_code(qq, nn))
            checked += 1
            comp = sc.verify_complement(C)
            if not comp.ok:
                failures.append(_failure(f"q={qq},n={nn}", comp.to_json()))
            bound = sc.one_dim_bound_check(C.codewords, q=qq, complement=C.complement_map)
            if bound.one_dim_count != nn or bound.holds is False:
                failures.append(_failure(f"q={qq},n={nn}", {"one_dim": bound.one_dim_count, "bound": bound.bound}))
            details[f"q={qq},n={nn}"] = {"one_dim": bound.one_dim_count, "bound": bound.bound}
    return checked, failures, details


SUITES = {
    "T1": _suite_T1,
    "UAT": _suite_UAT,
    "UAC": _suite_UAC,
    "TL1": _suite_TL1,
    "TL3": _suite_TL3,
    "T2": _suite_T2,
    "C2": _suite_C2,
    "T3T4": _suite_T3T4,
    "LT1": _suite_LT1,
    "CP1": _suite_CP1,
}


def run_theorem_suite(name: str, population: Population | None = None, *, q=None, n=None,
                      seed: int = DEFAULT_SEED, samples: int = DEFAULT_SAMPLES) -> SuiteReport:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; valid suites: {', '.join(SUITES)}")
    if population is None and name in ("T1", "UAT", "UAC", "TL1", "TL3"):
        population = build_population(samples, seed)
    checked, failures, details = SUITES[name](population, q=q, n=n, seed=seed)
    used_seed = population.seed if population is not None else seed
    return SuiteReport(name, used_seed, checked, failures, details)
