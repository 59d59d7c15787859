"""Exact linear algebra over small finite fields GF(q), q <= 256.

Field elements are plain ints in ``range(q)``.  For an extension field
GF(p^e) the int ``a`` encodes the polynomial ``sum(c_i * x**i)`` whose
base-``p`` digits are ``c_0, c_1, ...`` (least significant first), so in
GF(4) the element ``x`` is ``2`` and ``x + 1`` is ``3``.

Subspaces of GF(q)^n are held as :class:`SubspaceRepr`, a canonical
reduced row echelon basis.  Two subspaces are equal exactly when their
RREF matrices are identical.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import BudgetExceeded, FieldError, ShapeError

DEFAULT_ENUMERATION_BUDGET = 2_000_000

Vector = tuple  # tuple[int, ...] of field elements


def _factor_prime_power(q: int) -> tuple[int, int]:
    if not isinstance(q, int) or q < 2:
        raise FieldError(f"field size must be an integer >= 2, got {q!r}")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise FieldError(f"{q} is not a prime power")
    return p, e


# -- polynomials over GF(p) as coefficient lists, lowest degree first ---------

def _poly_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, m, p):
    a = _poly_trim(a)
    m = _poly_trim(m)
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) >= len(m):
        c = a[-1] * inv_lead % p
        shift = len(a) - len(m)
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        a = _poly_trim(a)
    return a


def _is_irreducible(modulus, p):
    e = len(modulus) - 1
    for d in range(1, e // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _poly_mod(modulus, list(low) + [1], p):
                return False
    return True


def _x_order(modulus, p, q):
    """Multiplicative order of x modulo ``modulus``, or 0 if x never returns to 1."""
    e = len(modulus) - 1
    acc = [1]
    for k in range(1, q):
        acc = _poly_mod([0] + acc, modulus, p)
        if acc == [1]:
            return k
    return 0


def _default_modulus(p, e):
    # Least monic primitive polynomial, lower coefficients read as a base-p
    # number with c_0 least significant.
    q = p**e
    for v in range(1, p**e):
        low = [(v // p**i) % p for i in range(e)]
        if low[0] == 0:
            continue
        mod = low + [1]
        if _x_order(mod, p, q) == q - 1:
            return tuple(mod)
    raise FieldError(f"no primitive polynomial found for GF({p}^{e})")  # pragma: no cover


@dataclass(frozen=True)
class FieldSpec:
    """Identifies GF(q).  ``modulus`` lists coefficients lowest degree first."""

    q: int
    p: int
    e: int
    modulus: tuple | None = None

    def __post_init__(self):
        p, e = _factor_prime_power(self.q)
        if (p, e) != (self.p, self.e):
            raise FieldError(f"q={self.q} is {p}^{e}, not {self.p}^{self.e}")
        if e == 1:
            if self.modulus is not None:
                raise FieldError("prime fields take no modulus")
            return
        mod = self.modulus
        if mod is None or len(mod) != e + 1 or mod[-1] != 1:
            raise FieldError(f"GF({self.q}) needs a monic modulus of degree {e}")
        if any(not 0 <= c < p for c in mod):
            raise FieldError(f"modulus coefficients must lie in range({p})")
        if not _is_irreducible(list(mod), p):
            raise FieldError(f"modulus {list(mod)} is reducible over GF({p})")


def field_spec(q: int, modulus: Sequence[int] | None = None) -> FieldSpec:
    """Build the FieldSpec for GF(q), picking the default modulus when needed."""
    p, e = _factor_prime_power(q)
    if q > 256:
        raise FieldError(f"fields with q > 256 are not supported (q={q})")
    if e == 1:
        if modulus is not None:
            raise FieldError("prime fields take no modulus")
        return FieldSpec(q, p, 1, None)
    if modulus is None:
        modulus = _default_modulus(p, e)
    return FieldSpec(q, p, e, tuple(int(c) for c in modulus))


def as_spec(field) -> FieldSpec:
    if isinstance(field, FieldSpec):
        return field
    if isinstance(field, GF):
        return field.spec
    return field_spec(field)


class GF:
    """Arithmetic tables for one finite field.  Use :func:`get_field`."""

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        q, p = spec.q, spec.p
        self.q = q
        self.p = p
        if spec.e == 1:
            self.add = [[(a + b) % q for b in range(q)] for a in range(q)]
            self.mul = [[a * b % q for b in range(q)] for a in range(q)]
            self.exp = self.log = None
        else:
            digits = [[(a // p**i) % p for i in range(spec.e)] for a in range(q)]
            weights = [p**i for i in range(spec.e)]
            self.add = [
                [sum(((da[i] + db[i]) % p) * w for i, w in enumerate(weights)) for db in digits]
                for da in digits
            ]
            self.exp, self.log = self._exp_log(spec, digits, weights)
            exp, log = self.exp, self.log
            self.mul = [[0] * q for _ in range(q)]
            for a in range(1, q):
                for b in range(1, q):
                    self.mul[a][b] = exp[(log[a] + log[b]) % (q - 1)]
        self.neg = [next(b for b in range(q) if self.add[a][b] == 0) for a in range(q)]
        self.sub = [[self.add[a][self.neg[b]] for b in range(q)] for a in range(q)]
        self.inv = [None] + [next(b for b in range(1, q) if self.mul[a][b] == 1) for a in range(1, q)]

    @staticmethod
    def _exp_log(spec, digits, weights):
        p, q, mod = spec.p, spec.q, list(spec.modulus)

        def encode(poly):
            return sum(c * w for c, w in zip(poly, weights))

        def times(a, b):
            prod = [0] * (2 * spec.e)
            for i, ca in enumerate(digits[a]):
                if ca:
                    for j, cb in enumerate(digits[b]):
                        prod[i + j] = (prod[i + j] + ca * cb) % p
            return encode(_poly_mod(prod, mod, p))

        for g in range(2, q):
            exp = [1]
            while len(exp) < q:
                nxt = times(exp[-1], g)
                if nxt == 1:
                    break
                exp.append(nxt)
            if len(exp) == q - 1:
                log = [None] * q
                for k, a in enumerate(exp):
                    log[a] = k
                return exp, log
        raise FieldError(f"GF({q}) has no primitive element; modulus invalid")  # pragma: no cover

    def __repr__(self):
        return f"GF({self.q})"

    def check(self, a) -> int:
        if not isinstance(a, int) or not 0 <= a < self.q:
            raise FieldError(f"{a!r} is not an element of GF({self.q})")
        return a

    def op(self, a, b, kind):
        """Apply ``kind`` in {'add', 'mul', 'inv', 'neg'}; unary kinds ignore ``b``."""
        a = self.check(a)
        if kind == "add":
            return self.add[a][self.check(b)]
        if kind == "mul":
            return self.mul[a][self.check(b)]
        if kind == "neg":
            return self.neg[a]
        if kind == "inv":
            if a == 0:
                raise ZeroDivisionError(f"0 has no inverse in GF({self.q})")
            return self.inv[a]
        raise ValueError(f"unknown field operation {kind!r}")


@lru_cache(maxsize=None)
def _field_from_spec(spec: FieldSpec) -> GF:
    return GF(spec)


def get_field(field) -> GF:
    """Return the cached :class:`GF` for a q, a FieldSpec or a GF."""
    if isinstance(field, GF):
        return field
    return _field_from_spec(as_spec(field))


def field_ops(field, a, b=None, kind="add"):
    return get_field(field).op(a, b, kind)


# -- subspaces ----------------------------------------------------------------

@dataclass(frozen=True)
class SubspaceRepr:
    """A subspace of GF(q)^n held by its RREF basis."""

    field: FieldSpec
    n: int
    basis: tuple

    def __post_init__(self):
        if not _is_rref(self.basis, self.n, self.field.q):
            raise ShapeError(f"rows are not a reduced row echelon basis: {self.basis}")

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def pivots(self) -> tuple:
        return tuple(row.index(next(c for c in row if c)) for row in self.basis)

    @property
    def key(self) -> tuple:
        """Flattened RREF entries; big-endian digits of the ordering code."""
        return tuple(c for row in self.basis for c in row)

    @property
    def sort_key(self):
        return (self.dim, self.key)

    def label(self) -> str:
        if not self.basis:
            return "0"
        sep = "" if self.q <= 10 else "."
        return sep.join(str(c) for c in self.key)

    def points(self) -> frozenset:
        """Every vector of the subspace (q**dim of them)."""
        F = get_field(self.field)
        pts = set()
        for coeffs in itertools.product(range(F.q), repeat=self.dim):
            v = [0] * self.n
            for c, row in zip(coeffs, self.basis):
                if c:
                    v = [F.add[x][F.mul[c][y]] for x, y in zip(v, row)]
            pts.add(tuple(v))
        return frozenset(pts)

    def __contains__(self, vector) -> bool:
        return rref(self.basis + (tuple(vector),), self.field, n=self.n).dim == self.dim

    def __repr__(self):
        rows = ",".join("(" + ",".join(map(str, r)) + ")" for r in self.basis)
        return f"<{rows}>_GF({self.q})^{self.n}" if rows else f"{{0}}_GF({self.q})^{self.n}"

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "modulus": list(self.field.modulus) if self.field.modulus else None,
            "n": self.n,
            "rows": [list(r) for r in self.basis],
        }

    @classmethod
    def from_json(cls, data) -> "SubspaceRepr":
        if isinstance(data, str):
            data = json.loads(data)
        spec = field_spec(int(data["q"]), data.get("modulus"))
        rows = tuple(tuple(int(c) for c in r) for r in data["rows"])
        n = int(data["n"])
        if any(len(r) != n for r in rows):
            raise ShapeError(f"every row must have length n={n}")
        return cls(spec, n, rows)


def _is_rref(rows, n, q) -> bool:
    last = -1
    pivots = []
    for row in rows:
        if len(row) != n or any(not isinstance(c, int) or not 0 <= c < q for c in row):
            return False
        nz = [j for j, c in enumerate(row) if c]
        if not nz or nz[0] <= last or row[nz[0]] != 1:
            return False
        last = nz[0]
        pivots.append(last)
    for i, pc in enumerate(pivots):
        if any(rows[k][pc] for k in range(len(rows)) if k != i):
            return False
    return True


def _eliminate(rows, F: GF, n: int):
    """In-place Gauss-Jordan; returns the list of nonzero RREF rows."""
    m = [list(r) for r in rows]
    add, mul, sub, inv = F.add, F.mul, F.sub, F.inv
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        prow = m[r]
        c = prow[col]
        if c != 1:
            ic = inv[c]
            prow = m[r] = [mul[ic][x] for x in prow]
        for i in range(len(m)):
            if i != r:
                f = m[i][col]
                if f:
                    mf = mul[f]
                    m[i] = [sub[x][mf[y]] for x, y in zip(m[i], prow)]
        r += 1
        if r == len(m):
            break
    return m[:r]


def rref(rows: Iterable[Sequence[int]], field, n: int | None = None) -> SubspaceRepr:
    """Canonical RREF basis of the span of ``rows``.

    ``n`` is required when ``rows`` may be empty.
    """
    rows = [tuple(r) for r in rows]
    lengths = {len(r) for r in rows}
    if n is None:
        if not lengths:
            raise ShapeError("ambient dimension unknown for an empty row list")
        n = next(iter(lengths))
    if lengths - {n}:
        raise ShapeError(f"rows of lengths {sorted(lengths)} in ambient dimension {n}")
    F = get_field(field)
    for r in rows:
        for c in r:
            F.check(c)
    return SubspaceRepr(F.spec, n, tuple(tuple(r) for r in _eliminate(rows, F, n)))


def rank(rows, field, n: int) -> int:
    return rref(rows, field, n=n).dim


def span(vectors, field, n: int) -> SubspaceRepr:
    return rref(vectors, field, n=n)


def zero_subspace(field, n: int) -> SubspaceRepr:
    return SubspaceRepr(as_spec(field), n, ())


def full_space(field, n: int) -> SubspaceRepr:
    return SubspaceRepr(as_spec(field), n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))


def _check_pair(X: SubspaceRepr, Y: SubspaceRepr):
    if X.n != Y.n:
        raise ShapeError(f"ambient dimensions differ: {X.n} vs {Y.n}")
    if X.field != Y.field:
        raise ShapeError(f"fields differ: GF({X.q}) vs GF({Y.q})")


def subspace_sum(X: SubspaceRepr, Y: SubspaceRepr) -> SubspaceRepr:
    _check_pair(X, Y)
    if not Y.basis:
        return X
    if not X.basis:
        return Y
    return rref(X.basis + Y.basis, X.field, n=X.n)


def subspace_intersect(X: SubspaceRepr, Y: SubspaceRepr) -> SubspaceRepr:
    """Zassenhaus: reduce [[X | X], [Y | 0]]; rows with zero left half span X ∩ Y."""
    _check_pair(X, Y)
    n = X.n
    if not X.basis or not Y.basis:
        return zero_subspace(X.field, n)
    F = get_field(X.field)
    stacked = [r + r for r in X.basis] + [r + (0,) * n for r in Y.basis]
    reduced = _eliminate(stacked, F, 2 * n)
    meet = [r[n:] for r in reduced if not any(r[:n])]
    return rref(meet, F, n=n)


def contains(X: SubspaceRepr, Y: SubspaceRepr) -> bool:
    """True when Y ⊆ X."""
    return subspace_sum(X, Y).dim == X.dim


def gaussian_binomial(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def count_subspaces(q: int, n: int, k: int | None = None) -> int:
    if k is not None:
        return gaussian_binomial(n, k, q)
    return sum(gaussian_binomial(n, j, q) for j in range(n + 1))


def enumerate_subspaces(field, n: int, k: int | None = None,
                        budget: int = DEFAULT_ENUMERATION_BUDGET) -> list[SubspaceRepr]:
    """Every subspace of GF(q)^n (or of dimension ``k``), sorted by (dim, RREF key)."""
    spec = as_spec(field)
    q = spec.q
    if k is not None and not 0 <= k <= n:
        raise ValueError(f"dimension k={k} outside 0..{n}")
    total = count_subspaces(q, n, k)
    if total > budget:
        raise BudgetExceeded(f"enumeration of subspaces of GF({q})^{n}", budget, total)
    dims = range(n + 1) if k is None else [k]
    out = []
    for d in dims:
        layer = []
        for pivots in itertools.combinations(range(n), d):
            free = [(i, j) for i, p in enumerate(pivots) for j in range(p + 1, n) if j not in pivots]
            for values in itertools.product(range(q), repeat=len(free)):
                rows = [[0] * n for _ in range(d)]
                for i, p in enumerate(pivots):
                    rows[i][p] = 1
                for (i, j), v in zip(free, values):
                    rows[i][j] = v
                layer.append(SubspaceRepr(spec, n, tuple(tuple(r) for r in rows)))
        layer.sort(key=lambda s: s.key)
        out.extend(layer)
    return out


def vector_index(v: Sequence[int], q: int) -> int:
    """Position of ``v`` when GF(q)^n is listed in big-endian base-q order."""
    idx = 0
    for c in v:
        idx = idx * q + c
    return idx
