"""Exact linear algebra over QQ, ZZ and GF(p).

Vectors are sparse ``dict[int, scalar]`` with zero entries never stored.
Scalars are ``fractions.Fraction`` over QQ and plain ``int`` over ZZ and
GF(p) (residues in ``range(p)``).  Everything in the package funnels its
linear algebra through the functions here, so pivoting is deterministic:
rows are consumed in order and the pivot of a row is its smallest nonzero
column (or largest, when ``prefer="last"``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import DimensionError, RingError, RingMapError

Vector = dict


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class GroundRing:
    kind: str
    characteristic: int = 0

    def __post_init__(self):
        if self.kind not in ("Q", "Z", "Fp"):
            raise RingError(f"unknown ring kind {self.kind!r}")
        if self.kind == "Fp":
            if not _is_prime(self.characteristic):
                raise RingError(f"characteristic {self.characteristic} is not prime")
        elif self.characteristic != 0:
            raise RingError(f"{self.kind} has characteristic 0")

    @classmethod
    def Q(cls):
        return cls("Q")

    @classmethod
    def Z(cls):
        return cls("Z")

    @classmethod
    def F(cls, p: int):
        return cls("Fp", p)

    @property
    def is_field(self) -> bool:
        return self.kind != "Z"

    @property
    def name(self) -> str:
        return {"Q": "QQ", "Z": "ZZ"}.get(self.kind) or f"GF({self.characteristic})"

    def __str__(self):
        return self.name

    @property
    def zero(self):
        return Fraction(0) if self.kind == "Q" else 0

    @property
    def one(self):
        return Fraction(1) if self.kind == "Q" else 1

    def __call__(self, x):
        """Coerce an int or Fraction into this ring."""
        if self.kind == "Q":
            return Fraction(x)
        if self.kind == "Z":
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise RingError(f"{x} is not an integer")
                return x.numerator
            return int(x)
        p = self.characteristic
        if isinstance(x, Fraction):
            if x.denominator % p == 0:
                raise RingError(f"{x} has no image in GF({p})")
            return x.numerator * pow(x.denominator, -1, p) % p
        return int(x) % p

    def norm(self, x):
        if self.kind == "Fp":
            return x % self.characteristic
        return x

    def inv(self, x):
        if self.kind == "Q":
            return 1 / Fraction(x)
        if self.kind == "Fp":
            return pow(x, -1, self.characteristic)
        if x in (1, -1):
            return x
        raise RingError(f"{x} is not a unit in ZZ")

    def fraction_field(self) -> "GroundRing":
        return GroundRing.Q() if self.kind == "Z" else self

    def has_map_to(self, other: "GroundRing") -> bool:
        if self == other or self.kind == "Z":
            return True
        return False

    def map_to(self, other: "GroundRing", x):
        if not self.has_map_to(other):
            raise RingMapError(f"no canonical map {self} -> {other}")
        return other(x)

    def signed(self, x):
        """Representative used for printing: GF(p) residues in (-p/2, p/2]."""
        if self.kind == "Fp":
            p = self.characteristic
            return x - p if x > p // 2 else x
        return x


QQ = GroundRing.Q()
ZZ = GroundRing.Z()


def parse_ring(text: str) -> GroundRing:
    t = text.strip().upper().replace(" ", "")
    if t in ("Q", "QQ"):
        return QQ
    if t in ("Z", "ZZ"):
        return ZZ
    for prefix in ("GF(", "F(", "FP(", "GF", "FP", "F"):
        if t.startswith(prefix):
            digits = t[len(prefix):].rstrip(")")
            if digits.isdigit():
                return GroundRing.F(int(digits))
    raise RingError(f"cannot parse ring {text!r}")


# -- sparse vectors -----------------------------------------------------------

def axpy(ring: GroundRing, target: dict, c, src: dict) -> dict:
    """target += c * src, in place."""
    if not c:
        return target
    fp = ring.characteristic if ring.kind == "Fp" else 0
    for k, v in src.items():
        x = target.get(k, 0) + c * v
        if fp:
            x %= fp
        if x:
            target[k] = x
        else:
            target.pop(k, None)
    return target


def vadd(ring, u: dict, v: dict, c=1) -> dict:
    return axpy(ring, dict(u), c, v)


def vscale(ring, c, u: dict) -> dict:
    if not c:
        return {}
    out = {}
    for k, v in u.items():
        x = ring.norm(c * v)
        if x:
            out[k] = x
    return out


def vclean(ring, u: dict) -> dict:
    out = {}
    for k, v in u.items():
        x = ring.norm(ring(v))
        if x:
            out[k] = x
    return out


def vcombine(ring, terms: Iterable) -> dict:
    """Sum of c * vec over (c, vec) pairs."""
    out: dict = {}
    for c, vec in terms:
        axpy(ring, out, c, vec)
    return out


# -- matrices -----------------------------------------------------------------

@dataclass(frozen=True)
class ExactMatrix:
    ring: GroundRing
    rows: int
    cols: int
    entries: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        clean = {}
        for (i, j), v in self.entries.items():
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise DimensionError(f"entry ({i},{j}) outside {self.rows}x{self.cols}")
            x = self.ring.norm(self.ring(v))
            if x:
                clean[(i, j)] = x
        object.__setattr__(self, "entries", clean)

    def __eq__(self, other):
        return (isinstance(other, ExactMatrix) and self.ring == other.ring
                and self.rows == other.rows and self.cols == other.cols
                and self.entries == other.entries)

    def __hash__(self):
        return hash((self.ring, self.rows, self.cols, frozenset(self.entries.items())))

    @classmethod
    def from_rows(cls, ring, rows: Sequence[Sequence], cols: int | None = None):
        n = len(rows)
        m = cols if cols is not None else (len(rows[0]) if rows else 0)
        ent = {(i, j): v for i, r in enumerate(rows) for j, v in enumerate(r) if v}
        return cls(ring, n, m, ent)

    @classmethod
    def from_sparse_rows(cls, ring, rows: Sequence[dict], cols: int):
        ent = {(i, j): v for i, r in enumerate(rows) for j, v in r.items()}
        return cls(ring, len(rows), cols, ent)

    @classmethod
    def from_columns(cls, ring, columns: Sequence[dict], rows: int):
        ent = {(i, j): v for j, c in enumerate(columns) for i, v in c.items()}
        return cls(ring, rows, len(columns), ent)

    @classmethod
    def identity(cls, ring, n: int):
        return cls(ring, n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def zero(cls, ring, rows: int, cols: int):
        return cls(ring, rows, cols, {})

    def row_dicts(self) -> list[dict]:
        out = [dict() for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def column_dicts(self) -> list[dict]:
        out = [dict() for _ in range(self.cols)]
        for (i, j), v in self.entries.items():
            out[j][i] = v
        return out

    def to_dense(self) -> list[list]:
        out = [[self.ring.zero] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def __getitem__(self, ij):
        return self.entries.get(ij, self.ring.zero)

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(self.ring, self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()})

    def __matmul__(self, other):
        if isinstance(other, dict):
            return self.apply(other)
        if self.cols != other.rows:
            raise DimensionError(f"{self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        orows = other.row_dicts()
        ent: dict = {}
        for i, r in enumerate(self.row_dicts()):
            acc: dict = {}
            for k, a in r.items():
                axpy(self.ring, acc, a, orows[k])
            for j, v in acc.items():
                ent[(i, j)] = v
        return ExactMatrix(self.ring, self.rows, other.cols, ent)

    def apply(self, vec: dict) -> dict:
        out: dict = {}
        cols = self.column_dicts()
        for j, c in vec.items():
            if not 0 <= j < self.cols:
                raise DimensionError(f"index {j} outside {self.cols} columns")
            axpy(self.ring, out, c, cols[j])
        return out

    def __sub__(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionError("shape mismatch")
        ent = dict(self.entries)
        for k, v in other.entries.items():
            ent[k] = ent.get(k, 0) - v
        return ExactMatrix(self.ring, self.rows, self.cols, ent)

    def __add__(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionError("shape mismatch")
        ent = dict(self.entries)
        for k, v in other.entries.items():
            ent[k] = ent.get(k, 0) + v
        return ExactMatrix(self.ring, self.rows, self.cols, ent)

    def is_zero(self) -> bool:
        return not self.entries

    def change_ring(self, target: GroundRing) -> "ExactMatrix":
        return ExactMatrix(target, self.rows, self.cols,
                           {k: self.ring.map_to(target, v) for k, v in self.entries.items()})


@dataclass(frozen=True)
class BasedModule:
    """A free module of finite rank with an ordered list of basis labels."""

    ring: GroundRing
    basis_labels: tuple

    def __post_init__(self):
        object.__setattr__(self, "basis_labels", tuple(self.basis_labels))
        if len(set(self.basis_labels)) != len(self.basis_labels):
            raise DimensionError("basis labels must be distinct")

    @property
    def rank(self) -> int:
        return len(self.basis_labels)

    def index(self, label) -> int:
        return self.basis_labels.index(label)


# -- elimination over a field -------------------------------------------------

class _Echelon:
    """Incremental row echelon form over a field.

    Pivot rows are stored with leading coefficient 1; rows are reduced
    against earlier pivots in increasing pivot-column order.
    """

    def __init__(self, ring: GroundRing, order=None):
        if not ring.is_field:
            raise RingError("field elimination over ZZ")
        self.ring = ring
        self.pivots: dict = {}     # column -> row dict
        self.order = order or (lambda c: c)
        self.history: list = []    # pivot columns in discovery order

    def reduce(self, row: dict, track: dict | None = None) -> dict:
        ring = self.ring
        piv = self.pivots
        key = self.order
        row = dict(row)
        while True:
            hits = [c for c in row if c in piv]
            if not hits:
                return row
            c = min(hits, key=key)
            coef = row[c]
            axpy(ring, row, -coef, piv[c])
            if track is not None:
                axpy(ring, track, -coef, self._tracks[c])

    def add(self, row: dict, track: dict | None = None):
        """Reduce and insert; returns the new pivot column or None."""
        r = self.reduce(row, track)
        if not r:
            return None
        c = min(r, key=self.order)
        inv = self.ring.inv(r[c])
        r = vscale(self.ring, inv, r)
        self.pivots[c] = r
        if track is not None:
            self._tracks[c] = vscale(self.ring, inv, track)
        self.history.append(c)
        return c

    def enable_tracking(self):
        self._tracks = {}

    def rref(self) -> dict:
        """Fully reduced pivot rows (column -> row)."""
        ring = self.ring
        cols = sorted(self.pivots, key=self.order, reverse=True)
        done: dict = {}
        for c in cols:
            r = dict(self.pivots[c])
            hits = [k for k in r if k in done and k != c]
            for k in hits:
                if k in r:
                    axpy(ring, r, -r[k], done[k])
            done[c] = r
        return done

    @property
    def rank(self) -> int:
        return len(self.pivots)


def _order(prefer: str, ncols: int):
    if prefer == "last":
        return lambda c: -c
    return None


def _field_of(ring):
    return ring.fraction_field()


def _rows_in(ring_from, ring_to, rows):
    if ring_from == ring_to:
        return rows
    return [{k: ring_to(v) for k, v in r.items()} for r in rows]


def rank_rows(ring: GroundRing, rows: Iterable[dict]) -> int:
    f = _field_of(ring)
    ech = _Echelon(f)
    for r in rows:
        if ring != f:
            r = {k: f(v) for k, v in r.items()}
        ech.add(r)
    return ech.rank


def rank(m: ExactMatrix) -> int:
    """Rank over the fraction field of the ground ring."""
    return rank_rows(m.ring, m.row_dicts())


def rref_rows(ring: GroundRing, rows: Iterable[dict], prefer="first") -> dict:
    f = _field_of(ring)
    ech = _Echelon(f, _order(prefer, 0))
    for r in rows:
        ech.add(_rows_in(ring, f, [r])[0])
    return ech.rref()


def kernel_rows(ring: GroundRing, rows: Sequence[dict], ncols: int) -> list[dict]:
    """Basis of {x : r.x = 0 for every row r}; saturated over ZZ."""
    f = _field_of(ring)
    red = rref_rows(ring, rows)
    pivcols = set(red)
    free = [c for c in range(ncols) if c not in pivcols]
    # column -> list of (pivot col, coefficient)
    by_free: dict = {c: [] for c in free}
    for pc, r in red.items():
        for k, v in r.items():
            if k != pc:
                by_free[k].append((pc, v))
    basis = []
    integral = True
    for c in free:
        vec = {c: f.one}
        for pc, v in by_free[c]:
            vec[pc] = -v
        if ring.kind == "Z" and any(Fraction(x).denominator != 1 for x in vec.values()):
            integral = False
        basis.append(vec)
    if ring.kind != "Z":
        return basis
    if integral:
        return [{k: int(v) for k, v in vec.items()} for vec in basis]
    return _kernel_via_snf(rows, ncols)


def kernel_basis(m: ExactMatrix) -> list[dict]:
    return kernel_rows(m.ring, m.row_dicts(), m.cols)


def solve_rows(ring: GroundRing, rows: Sequence[dict], rhs: Sequence, ncols: int):
    """A particular solution x of rows . x = rhs, or None if inconsistent.

    Free variables are set to zero.  Over ZZ an integral solution is
    returned when one exists.
    """
    f = _field_of(ring)
    aug = ncols
    ech = _Echelon(f, lambda c: (c == aug, c))
    for r, b in zip(rows, rhs):
        row = {k: f(v) for k, v in r.items()}
        if b:
            row[aug] = f(b)
        ech.add(row)
    if aug in ech.pivots:
        return None
    red = ech.rref()
    x = {}
    for pc, r in red.items():
        v = r.get(aug, 0)
        if v:
            x[pc] = v
    if ring.kind != "Z":
        return x
    if all(Fraction(v).denominator == 1 for v in x.values()):
        return {k: int(v) for k, v in x.items()}
    return _solve_via_snf(rows, rhs, ncols)


# -- integer elimination ------------------------------------------------------

def _sparse_diagonal(rows: Sequence[dict]) -> list[int]:
    """Nonzero diagonal of an equivalent diagonal form (no divisibility)."""
    R = [dict(r) for r in rows if r]
    cols: dict = {}
    for i, r in enumerate(R):
        for j in r:
            cols.setdefault(j, set()).add(i)
    alive = set(range(len(R)))
    diag = []

    def setrow(i, new):
        old = R[i]
        for j in old:
            if j not in new:
                cols[j].discard(i)
        for j in new:
            if j not in old:
                cols.setdefault(j, set()).add(i)
        R[i] = new

    while alive:
        # smallest |entry|, ties by (row, col); unit pivots are taken at once
        best = None
        for i in sorted(alive):
            r = R[i]
            if not r:
                continue
            for j, v in r.items():
                a = abs(v)
                if best is None or (a, i, j) < best:
                    best = (a, i, j)
                    if a == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        p = R[pi][pj]
        clean = True
        for i in sorted(cols.get(pj, ()) - {pi}):
            r = R[i]
            q = r[pj] // p
            new = dict(r)
            for j, v in R[pi].items():
                x = new.get(j, 0) - q * v
                if x:
                    new[j] = x
                else:
                    new.pop(j, None)
            setrow(i, new)
            if pj in new:
                clean = False
        if not clean:
            continue
        # column is clear; clear the pivot row by column operations
        prow = R[pi]
        rest = {j: v for j, v in prow.items() if j != pj}
        new = {pj: p}
        for j, v in rest.items():
            rmd = v - (v // p) * p
            if rmd:
                new[j] = rmd
        setrow(pi, new)
        if len(new) > 1:
            continue
        diag.append(abs(p))
        setrow(pi, {})
        alive.discard(pi)
        for i in list(alive):
            if not R[i]:
                alive.discard(i)
    return diag


def _normalize_diagonal(diag: list[int]) -> list[int]:
    ones = [d for d in diag if d == 1]
    rest = sorted(d for d in diag if d != 1)
    n = len(rest)
    for i in range(n):
        for j in range(i + 1, n):
            a, b = rest[i], rest[j]
            g = gcd(a, b)
            rest[i], rest[j] = g, a // g * b
    rest.sort()
    return ones + rest


def invariant_factors_rows(ring: GroundRing, rows: Sequence[dict]) -> list[int]:
    """Nonzero invariant factors d_1 | d_2 | ... of an integer matrix."""
    if ring.kind != "Z":
        raise RingError("invariant factors are computed over ZZ")
    return _normalize_diagonal(_sparse_diagonal(rows))


def smith_normal_form(m: ExactMatrix):
    """Return (D, U, V) with U @ m @ V == D, U and V unimodular.

    D is diagonal with d_i | d_{i+1} and nonnegative entries.
    """
    if m.ring.kind != "Z":
        raise RingError("Smith normal form needs ZZ")
    A = [list(r) for r in m.to_dense()]
    nr, nc = m.rows, m.cols
    U = [[int(i == j) for j in range(nr)] for i in range(nr)]
    V = [[int(i == j) for j in range(nc)] for i in range(nc)]

    def rowop(i, k, q):        # row_i -= q row_k
        A[i] = [a - q * b for a, b in zip(A[i], A[k])]
        U[i] = [a - q * b for a, b in zip(U[i], U[k])]

    def colop(j, k, q):        # col_j -= q col_k
        for r in A:
            r[j] -= q * r[k]
        for r in V:
            r[j] -= q * r[k]

    def swaprows(i, k):
        A[i], A[k] = A[k], A[i]
        U[i], U[k] = U[k], U[i]

    def swapcols(j, k):
        for r in A:
            r[j], r[k] = r[k], r[j]
        for r in V:
            r[j], r[k] = r[k], r[j]

    t = 0
    while t < min(nr, nc):
        nz = [(abs(A[i][j]), i, j) for i in range(t, nr) for j in range(t, nc) if A[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swaprows(t, i)
        swapcols(t, j)
        while True:
            done = True
            for i in range(t + 1, nr):
                if A[i][t]:
                    rowop(i, t, A[i][t] // A[t][t])
                    if A[i][t]:
                        done = False
            for j in range(t + 1, nc):
                if A[t][j]:
                    colop(j, t, A[t][j] // A[t][t])
                    if A[t][j]:
                        done = False
            if done:
                # divisibility: fold any non-divisible entry into row t
                bad = next(((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc)
                            if A[i][j] % A[t][t]), None)
                if bad is None:
                    break
                A_i = bad[0]
                A[t] = [a + b for a, b in zip(A[t], A[A_i])]
                U[t] = [a + b for a, b in zip(U[t], U[A_i])]
                continue
            nz = [(abs(A[i][t]), i, t) for i in range(t, nr) if A[i][t]]
            nz += [(abs(A[t][j]), t, j) for j in range(t, nc) if A[t][j]]
            _, i, j = min(nz)
            swaprows(t, i)
            swapcols(t, j)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    D = ExactMatrix.from_rows(ZZ, A, nc)
    return D, ExactMatrix.from_rows(ZZ, U, nr), ExactMatrix.from_rows(ZZ, V, nc)


def _kernel_via_snf(rows, ncols):
    m = ExactMatrix.from_sparse_rows(ZZ, [{k: int(v) for k, v in r.items()} for r in rows], ncols)
    D, _, V = smith_normal_form(m)
    r = sum(1 for i in range(min(D.rows, D.cols)) if D[i, i])
    cols = V.column_dicts()
    return [cols[j] for j in range(r, ncols)]


def _solve_via_snf(rows, rhs, ncols):
    m = ExactMatrix.from_sparse_rows(ZZ, [{k: int(v) for k, v in r.items()} for r in rows], ncols)
    D, U, V = smith_normal_form(m)
    b = {i: int(v) for i, v in enumerate(rhs) if v}
    ub = U.apply(b)
    y = {}
    for i, v in ub.items():
        d = D[i, i] if i < min(D.rows, D.cols) else 0
        if d == 0 or v % d:
            return None
        y[i] = v // d
    return V.apply(y)


# -- derived operations -------------------------------------------------------

def image_rank_and_torsion(ring: GroundRing, rows: Sequence[dict]):
    """(rank, torsion) of the cokernel contribution of a relation matrix."""
    if ring.kind == "Z":
        inv = invariant_factors_rows(ring, rows)
        return len(inv), [d for d in inv if d != 1]
    return rank_rows(ring, rows), []


@dataclass(frozen=True)
class Quotient:
    """Result of ``coinvariants``: a quotient module and its projection."""

    module: BasedModule
    projection: ExactMatrix
    torsion: tuple = ()
    representatives: tuple = ()   # source index lifting each quotient basis vector
    lift_vectors: tuple = ()      # used when classes have no single-label representative

    def project(self, vec: dict) -> dict:
        return self.projection.apply(vec)

    def lift(self, k: int) -> dict:
        """A source vector projecting to the k-th quotient basis vector."""
        if self.representatives:
            return {self.representatives[k]: self.module.ring.one}
        return dict(self.lift_vectors[k])


def quotient_by_relations(mod: BasedModule, relations: Sequence[dict], prefer="last") -> Quotient:
    """Quotient of a based module by the span of relation vectors.

    The quotient basis consists of the source basis vectors whose columns
    are not pivots; with ``prefer="last"`` pivots sit on late columns, so
    the earliest label of each class is kept.  Over ZZ the quotient must be
    free with an integral projection; torsion and non-integral cases fall
    back to a Smith normal form basis with torsion reported.
    """
    ring = mod.ring
    n = mod.rank
    red = rref_rows(ring, relations, prefer=prefer)
    free = [c for c in range(n) if c not in red]
    pos = {c: k for k, c in enumerate(free)}
    integral = True
    ent = {}
    for c in free:
        ent[(pos[c], c)] = 1
    for pc, r in red.items():
        for k, v in r.items():
            if k != pc:
                if ring.kind == "Z" and Fraction(v).denominator != 1:
                    integral = False
                ent[(pos[k], pc)] = -v
    torsion: tuple = ()
    if ring.kind == "Z":
        inv = invariant_factors_rows(ring, relations) if relations else []
        torsion = tuple(d for d in inv if d != 1)
        if torsion or not integral:
            return _quotient_via_snf(mod, relations, torsion)
        ent = {k: int(v) for k, v in ent.items()}
    labels = tuple(mod.basis_labels[c] for c in free)
    proj = ExactMatrix(ring, len(free), n, ent)
    return Quotient(BasedModule(ring, labels), proj, torsion, tuple(free))


def _quotient_via_snf(mod, relations, torsion):
    n = mod.rank
    # relations as columns: quotient Z^n / im(R)
    R = ExactMatrix.from_columns(ZZ, [{k: int(v) for k, v in r.items()} for r in relations], n)
    D, U, _ = smith_normal_form(R)
    r = sum(1 for i in range(min(D.rows, D.cols)) if D[i, i])
    rows = U.row_dicts()[r:]
    labels = tuple(("snf", k) for k in range(len(rows)))
    proj = ExactMatrix.from_sparse_rows(ZZ, rows, n)
    allrows = U.row_dicts()
    lifts = tuple(solve_rows(ZZ, allrows, [1 if i == r + k else 0 for i in range(n)], n)
                  for k in range(len(rows)))
    return Quotient(BasedModule(ZZ, labels), proj, torsion, (), lifts)


def coinvariants(mod: BasedModule, actions: Sequence[ExactMatrix]) -> Quotient:
    """Quotient of ``mod`` by the span of (g - 1) v over generators g, basis v."""
    n = mod.rank
    rels = []
    for g in actions:
        if g.rows != n or g.cols != n:
            raise DimensionError(f"action is {g.rows}x{g.cols}, module rank {n}")
        for c, col in enumerate(g.column_dicts()):
            rel = dict(col)
            axpy(mod.ring, rel, -1, {c: 1})
            if rel:
                rels.append(rel)
    return quotient_by_relations(mod, rels)


def homology_at(ring: GroundRing, d_out: Sequence[dict] | None, d_in: Sequence[dict] | None,
                dim: int):
    """Homology of C_{n+1} -> C_n -> C_{n-1} at C_n.

    ``d_out`` and ``d_in`` are given as row lists (rows index the target).
    Returns (free rank, torsion invariant factors).
    """
    r_out = rank_rows(ring, d_out) if d_out else 0
    if d_in:
        r_in, torsion = image_rank_and_torsion(ring, d_in)
    else:
        r_in, torsion = 0, []
    return dim - r_out - r_in, torsion


def integer_echelon(rows: Sequence[dict], order=None) -> dict:
    """Row echelon form of an integer lattice (Hermite style, unimodular row ops).

    Returns ``{pivot column: row}`` with positive pivots.  ``order`` ranks
    columns; the pivot of a row is its minimal column under ``order``.  For
    any threshold, the rows whose pivot lies beyond it form a basis of the
    lattice intersected with the span of those trailing columns.
    """
    key = order or (lambda c: c)
    piv: dict = {}
    for r0 in rows:
        row = {k: int(v) for k, v in r0.items() if v}
        while row:
            c = min(row, key=key)
            a = row[c]
            if c not in piv:
                if a < 0:
                    row = {k: -v for k, v in row.items()}
                piv[c] = row
                break
            p = piv[c]
            b = p[c]
            if a % b == 0:
                q = a // b
                row = {k: v for k, v in _lin(row, 1, p, -q).items()}
                continue
            g, s, t = _xgcd(b, a)
            new = _lin(p, s, row, t)                # leading coefficient g
            other = _lin(p, a // g, row, -(b // g))  # leading coefficient 0
            piv[c] = new
            row = other
    return piv


def _lin(u: dict, a: int, v: dict, b: int) -> dict:
    out = {k: a * x for k, x in u.items()} if a != 1 else dict(u)
    for k, y in v.items():
        z = out.get(k, 0) + b * y
        if z:
            out[k] = z
        else:
            out.pop(k, None)
    return {k: x for k, x in out.items() if x}


def _xgcd(a: int, b: int):
    """(g, s, t) with s a + t b = g = gcd(a, b) > 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0
