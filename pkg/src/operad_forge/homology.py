"""Chain complexes, the Koszul resolution of S(g), Hochschild cochains and
bimodule Ext by two routes.

Index conventions: ``ext(A, M, n, j)`` is the internal-degree ``j`` piece of
``Ext^n_{A (x) A}(A, M)`` = classical Hochschild ``HH^n``.  ``cohomology_H(i)``
is ``Ext^{i+1}`` for ``i >= 1`` and the derivations for ``i = 0``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .algebra import GradedAlgebra, Unknown
from .amodule import AModule, derivations
from .errors import ChainError, OperadKindError, ScopeError
from .linalg import (BasedModule, ExactMatrix, GroundRing, axpy, image_rank_and_torsion,
                     kernel_rows, rank_rows, rref_rows)
from .operad import perm_sign
from .report import CheckReport


# -- generic complexes ----------------------------------------------------------

class ChainComplex:
    """``terms[n]`` are BasedModules, ``diffs[n]`` maps C_n -> C_{n-1}
    (chain) or C^n -> C^{n+1} (``cochain=True``), stored as ExactMatrix
    with rows indexing the target.  ``internal[n]`` optionally gives an
    internal degree for every basis element; differentials preserve it.
    """

    def __init__(self, ring: GroundRing, terms: dict, diffs: dict, cochain: bool = False,
                 internal: dict | None = None, check: bool = True):
        self.ring = ring
        self.terms = terms
        self.diffs = diffs
        self.cochain = cochain
        self.internal = internal or {}
        if check:
            self.check_d_squared()

    def _target(self, n):
        return n + 1 if self.cochain else n - 1

    def check_d_squared(self):
        for n, d in self.diffs.items():
            t = self._target(n)
            if t in self.diffs:
                comp = self.diffs[t] @ d
                if not comp.is_zero():
                    raise ChainError(f"d o d != 0 at position {n}")

    def homology(self, n: int, internal_degree=None):
        """(free rank, torsion invariant factors) at position n."""
        src_n = n - 1 if self.cochain else n + 1
        dim = self.terms[n].rank if n in self.terms else 0
        keep = None
        if internal_degree is not None:
            keep = [k for k, d in enumerate(self.internal.get(n, [])) if d == internal_degree]
            dim = len(keep)
        d_out = self.diffs.get(n)
        d_in = self.diffs.get(src_n)
        out_rows = _restrict_rows(d_out, keep, self.internal.get(self._target(n)),
                                  internal_degree, cols_side=True) if d_out else []
        in_rows = _restrict_rows(d_in, keep, self.internal.get(src_n), internal_degree,
                                 cols_side=False) if d_in else []
        r_out = rank_rows(self.ring, out_rows) if out_rows else 0
        if in_rows:
            r_in, torsion = image_rank_and_torsion(self.ring, in_rows)
        else:
            r_in, torsion = 0, []
        return dim - r_out - r_in, torsion


def _restrict_rows(mat: ExactMatrix, keep, other_internal, deg, cols_side):
    """Rows of ``mat`` restricted to an internal-degree block.

    ``cols_side``: the position of interest is the source (columns) of ``mat``.
    """
    rows = mat.row_dicts()
    if keep is None:
        return [r for r in rows if r]
    pos = {k: i for i, k in enumerate(keep)}
    if cols_side:
        out = []
        for ridx, r in enumerate(rows):
            if other_internal is not None and other_internal[ridx] != deg:
                continue
            v = {pos[c]: x for c, x in r.items() if c in pos}
            if v:
                out.append(v)
        return out
    out = []
    for ridx, r in enumerate(rows):
        if ridx not in pos:
            continue
        v = {c: x for c, x in r.items()
             if other_internal is None or other_internal[c] == deg}
        if v:
            out.append(v)
    # rows index the target (our position); transpose view is fine for rank/torsion
    return out


# -- Koszul complex -----------------------------------------------------------------

def _mono_mul(a: tuple, j: int) -> tuple:
    return tuple(sorted(a + (j,)))


def _monomials(r, d):
    return list(itertools.combinations_with_replacement(range(r), d))


def koszul_complex(g: BasedModule | int, D: int, ring: GroundRing | None = None,
                   augmented: bool = False) -> ChainComplex:
    """S (x) Lambda^i (x) S, i = 0..rank, internal degrees <= D.

    d(a (x) x_I (x) b) = sum_j (-1)^(j-1) (a x_{I_j} (x) x_{I - I_j} (x) b
                                            - a (x) x_{I - I_j} (x) x_{I_j} b).
    With ``augmented`` the multiplication S (x) S -> S sits at position -1.
    """
    if isinstance(g, int):
        r = g
        ring = ring or GroundRing.Q()
    else:
        r = g.rank
        ring = g.ring
    terms, internal, index = {}, {}, {}
    for i in range(0, r + 1):
        labels, degs = [], []
        for I in itertools.combinations(range(r), i):
            for d in range(i, D + 1):
                for p in range(0, d - i + 1):
                    for a in _monomials(r, p):
                        for b in _monomials(r, d - i - p):
                            labels.append((a, I, b))
                            degs.append(d)
        terms[i] = BasedModule(ring, tuple(labels))
        internal[i] = degs
        index[i] = {l: k for k, l in enumerate(labels)}
    diffs = {}
    for i in range(1, r + 1):
        ent = {}
        for col, (a, I, b) in enumerate(terms[i].basis_labels):
            for jpos, x in enumerate(I):
                rest = I[:jpos] + I[jpos + 1:]
                s = 1 if jpos % 2 == 0 else -1
                t1 = index[i - 1][(_mono_mul(a, x), rest, b)]
                t2 = index[i - 1][(a, rest, _mono_mul(b, x))]
                ent[(t1, col)] = ring.norm(ent.get((t1, col), 0) + s)
                ent[(t2, col)] = ring.norm(ent.get((t2, col), 0) - s)
        ent = {k: v for k, v in ent.items() if v}
        diffs[i] = ExactMatrix(ring, terms[i - 1].rank, terms[i].rank, ent)
    if augmented:
        labels, degs = [], []
        for d in range(0, D + 1):
            for a in _monomials(r, d):
                labels.append(a)
                degs.append(d)
        terms[-1] = BasedModule(ring, tuple(labels))
        internal[-1] = degs
        sidx = {l: k for k, l in enumerate(labels)}
        ent = {}
        for col, (a, I, b) in enumerate(terms[0].basis_labels):
            ent[(sidx[tuple(sorted(a + b))], col)] = ring.one
        diffs[0] = ExactMatrix(ring, len(labels), terms[0].rank, ent)
    return ChainComplex(ring, terms, diffs, cochain=False, internal=internal)


def koszul_exactness(r: int, D: int, ring: GroundRing) -> CheckReport:
    """d^2 = 0 and vanishing homology in positive positions for internal degrees <= D;
    H_0 = S through the augmentation."""
    rep = CheckReport("Koszul complex", details={"rank": r, "D": D, "ring": str(ring)})
    try:
        K = koszul_complex(r, D, ring, augmented=True)
        rep.record("d^2 = 0", True)
    except ChainError:
        rep.record("d^2 = 0", False)
        return rep
    ok = True
    for i in range(0, r + 1):
        for d in range(0, D + 1):
            rank, tors = K.homology(i, d)
            if rank or tors:
                ok = False
                rep.witness("exact", (i, d, rank, tors))
    # the augmented complex is exact at 0 iff H_0(K) = S via multiplication;
    # also exact at -1 (the augmentation is onto)
    for d in range(0, D + 1):
        rank, tors = K.homology(-1, d)
        if rank or tors:
            ok = False
            rep.witness("exact", (-1, d, rank, tors))
    rep.record("exact", ok)
    return rep


# -- Hochschild cochains --------------------------------------------------------------

def _require_ass(A):
    if A.operad.name != "ass" or A.unit is None:
        raise OperadKindError("Hochschild cochains need a unital associative algebra")


def _bar_tuples(A: GradedAlgebra, n: int, W, normalized=True):
    """n-tuples of basis indices (unit excluded when normalized) of weight <= W,
    in lexicographic order."""
    basis = [k for k in range(A.rank) if not (normalized and k == A.unit)]
    if W is None:
        return list(itertools.product(basis, repeat=n))
    least = min((A.degrees[k] for k in basis), default=0)
    out = []

    def extend(prefix, budget, left):
        if left == 0:
            out.append(prefix)
            return
        for k in basis:
            rest = budget - A.degrees[k]
            if rest >= least * (left - 1):
                extend(prefix + (k,), rest, left - 1)

    extend((), W, n)
    return out


@dataclass
class CochainSpace:
    n: int
    j: int
    variables: list          # (tuple, m)
    index: dict


def _cochain_space(A, M, n, j, W, normalized=True):
    variables = []
    for t in _bar_tuples(A, n, W, normalized):
        d = sum(A.degrees[a] for a in t) + j
        if not M.in_range(d):
            continue
        for m in M.basis_of_degree(d):
            variables.append((t, m))
    return CochainSpace(n, j, variables, {v: k for k, v in enumerate(variables)})


def _left(M, a, m):
    return M.action(0, 2, a, m)


def _right(M, a, m):
    return M.action(0, 1, a, m)


def hochschild_differential(A: GradedAlgebra, M: AModule, src: CochainSpace,
                            tgt: CochainSpace, normalized=True) -> list[dict]:
    """Rows (indexed by target variables) of delta: C^n -> C^{n+1}."""
    ring = A.ring
    n = src.n
    rows = []
    for (s, mp) in tgt.variables:
        row: dict = {}
        # a_1 f(a_2..)
        t = s[1:]
        for m in M.basis_of_degree(sum(A.degrees[a] for a in t) + src.j):
            key = (t, m)
            if key in src.index:
                c = _left(M, s[0], m).get(mp)
                if c:
                    axpy(ring, row, c, {src.index[key]: ring.one})
        # internal products
        for i in range(n):
            try:
                prod = A.product_vec(A.e(s[i]), A.e(s[i + 1]))
            except Unknown:
                raise ScopeError("product outside the algebra truncation") from None
            sign = -1 if (i + 1) % 2 else 1
            for z, c in prod.items():
                if normalized and z == A.unit:
                    continue
                key = (s[:i] + (z,) + s[i + 2:], mp)
                if key in src.index:
                    axpy(ring, row, sign * c, {src.index[key]: ring.one})
        # f(a_1..a_n) a_{n+1}
        t = s[:n]
        sign = -1 if (n + 1) % 2 else 1
        for m in M.basis_of_degree(sum(A.degrees[a] for a in t) + src.j):
            key = (t, m)
            if key in src.index:
                c = _right(M, s[n], m).get(mp)
                if c:
                    axpy(ring, row, sign * c, {src.index[key]: ring.one})
        rows.append(row)
    return rows


def hochschild_cochain_complex(A: GradedAlgebra, M: AModule, n_max: int, j: int,
                               W: int | None = None, normalized: bool = True) -> ChainComplex:
    """C^0..C^{n_max+1} of internal degree j with input weight <= W."""
    _require_ass(A)
    ring = A.ring
    spaces = {n: _cochain_space(A, M, n, j, W, normalized) for n in range(0, n_max + 2)}
    terms = {n: BasedModule(ring, tuple(sp.variables)) for n, sp in spaces.items()}
    diffs = {}
    for n in range(0, n_max + 1):
        rows = hochschild_differential(A, M, spaces[n], spaces[n + 1], normalized)
        diffs[n] = ExactMatrix.from_sparse_rows(ring, rows, len(spaces[n].variables))
    return ChainComplex(ring, terms, diffs, cochain=True)


@dataclass
class ExtEntry:
    n: int
    j: int
    rank: int
    torsion: list
    route: str
    cocycles: list = field(default_factory=list)
    coboundaries: list = field(default_factory=list)
    details: dict = field(default_factory=dict)


def _default_weight(A, n):
    if not A.truncated:
        return None
    return n + 1


def ext_by_cochains(A: GradedAlgebra, M: AModule, n: int, j: int, W: int | None = None,
                    normalized: bool = True, bases: bool = False) -> ExtEntry:
    """(Ext^n)_j through normalized Hochschild cochains with input weight <= W.

    For connected graded Koszul A (S(g), dual numbers) the weight-w part of
    the bar complex is acyclic off w = n, so W = n + 1 suffices.
    """
    _require_ass(A)
    if W is None:
        W = _default_weight(A, n)
    if W is not None and A.truncated:
        need = W + max(j, 0)
        if need > A.max_degree or (M.truncated and W + j > M.max_degree):
            raise ScopeError(f"truncation D={A.max_degree} too small for weight {W}, degree {j}")
    ring = A.ring
    sp = {k: _cochain_space(A, M, k, j, W, normalized) for k in (n - 1, n, n + 1) if k >= 0}
    d_out = hochschild_differential(A, M, sp[n], sp[n + 1], normalized)
    d_in = hochschild_differential(A, M, sp[n - 1], sp[n], normalized) if n >= 1 else []
    dim = len(sp[n].variables)
    r_out = rank_rows(ring, d_out) if d_out else 0
    if d_in:
        # d_in rows are indexed by C^n variables; image = column space
        cols = _columns(d_in, len(sp[n - 1].variables))
        r_in, torsion = image_rank_and_torsion(ring, cols)
    else:
        cols, r_in, torsion = [], 0, []
    entry = ExtEntry(n, j, dim - r_out - r_in, torsion, "cochain",
                     details={"W": W, "dim C^n": dim})
    if bases:
        entry.cocycles = kernel_rows(ring, d_out, dim)
        entry.coboundaries = [c for c in cols if c]
        entry.details["space"] = sp[n]
    return entry


def _columns(rows, ncols):
    cols = [dict() for _ in range(ncols)]
    for r, row in enumerate(rows):
        for c, v in row.items():
            cols[c][r] = v
    return cols


# -- Koszul route for S(g) --------------------------------------------------------------

def _koszul_space(A, M, i, j):
    r = len(A.gen_index)
    out = []
    for I in itertools.combinations(range(r), i):
        d = i + j
        if not M.in_range(d):
            continue
        for m in M.basis_of_degree(d):
            out.append((I, m))
    return out


def ext_by_koszul(A: GradedAlgebra, M: AModule, n: int, j: int, bases: bool = False) -> ExtEntry:
    """(Ext^n)_j = H^n of Hom(Lambda^* g, M) with
    (delta f)(x_I) = sum_k (-1)^(k-1) (x_k f(x_{I-k}) - f(x_{I-k}) x_k)."""
    if not hasattr(A, "gen_index"):
        raise ScopeError("Koszul route needs A = S(g)")
    ring = A.ring
    gens = A.gen_index
    sp = {k: _koszul_space(A, M, k, j) for k in (n - 1, n, n + 1) if k >= 0}
    idx = {k: {v: t for t, v in enumerate(s)} for k, s in sp.items()}

    def diff(k):
        rows = []
        for (I, mp) in sp[k + 1]:
            row: dict = {}
            for pos, x in enumerate(I):
                rest = I[:pos] + I[pos + 1:]
                s = 1 if pos % 2 == 0 else -1
                for m in M.basis_of_degree(k + j):
                    key = (rest, m)
                    if key not in idx[k]:
                        continue
                    c = _left(M, gens[x], m).get(mp, 0) - _right(M, gens[x], m).get(mp, 0)
                    if c:
                        axpy(ring, row, s * c, {idx[k][key]: ring.one})
            rows.append(row)
        return rows

    dim = len(sp[n])
    d_out = diff(n) if (n + 1) in sp else []
    d_in = diff(n - 1) if (n - 1) in sp else []
    r_out = rank_rows(ring, d_out) if d_out else 0
    if d_in:
        cols = _columns(d_in, len(sp[n - 1]))
        r_in, torsion = image_rank_and_torsion(ring, cols)
    else:
        cols, r_in, torsion = [], 0, []
    entry = ExtEntry(n, j, dim - r_out - r_in, torsion, "koszul", details={"dim Hom": dim})
    if bases:
        entry.cocycles = kernel_rows(ring, d_out, dim)
        entry.coboundaries = [c for c in cols if c]
        entry.details["space"] = sp[n]
    return entry


def ext_bimodule(A: GradedAlgebra, M: AModule, n: int, j: int, route: str = "auto",
                 **kw) -> ExtEntry:
    if route == "auto":
        route = "koszul" if hasattr(A, "gen_index") and A.operad.name == "ass" else "cochain"
    if route == "koszul":
        return ext_by_koszul(A, M, n, j, **{k: v for k, v in kw.items() if k == "bases"})
    if route == "cochain":
        return ext_by_cochains(A, M, n, j, **kw)
    raise ScopeError(f"unknown route {route!r}")


def cohomology_H(A: GradedAlgebra, M: AModule, i: int, j: int, route: str = "auto") -> ExtEntry:
    """H^i(A, M)_j: derivations for i = 0, Ext^{i+1} otherwise."""
    if i < 0:
        raise ScopeError("H^i needs i >= 0")
    if i == 0:
        ders = derivations(A, M, j)
        return ExtEntry(0, j, ders.rank, [], "derivations", details={"Ext index": 1})
    e = ext_bimodule(A, M, i + 1, j, route)
    e.details["H index"] = i
    return e


def quillen_consistency(A: GradedAlgebra, M: AModule, n: int, j: int) -> CheckReport:
    k = ext_by_koszul(A, M, n, j)
    c = ext_by_cochains(A, M, n, j)
    rep = CheckReport("Koszul route = cochain route",
                      details={"Ext index": n, "H index": n - 1, "j": j,
                               "koszul": k.rank, "cochain": c.rank})
    rep.record("ranks agree", k.rank == c.rank and k.torsion == c.torsion)
    return rep


def comparison_iso(A: GradedAlgebra, M: AModule, n: int, j: int) -> CheckReport:
    """The restriction of bar cochains along Lambda^n g -> Abar^{(x)n}
    (alternating sums of generators) maps cocycles onto Hom(Lambda^n g, M)
    cocycles and kills coboundaries, inducing an isomorphism."""
    ring = A.ring
    c = ext_by_cochains(A, M, n, j, bases=True)
    k = ext_by_koszul(A, M, n, j, bases=True)
    csp: CochainSpace = c.details["space"]
    ksp = k.details["space"]
    gens = A.gen_index

    def restrict(vec):
        out: dict = {}
        for t, (I, m) in enumerate(ksp):
            val = 0
            for p in itertools.permutations(range(n)):
                tup = tuple(gens[I[x]] for x in p)
                key = (tup, m)
                if key in csp.index:
                    coef = vec.get(csp.index[key], 0)
                    if coef:
                        val += perm_sign(tuple(x + 1 for x in p)) * coef
            val = ring.norm(ring(val))
            if val:
                out[t] = val
        return out

    z = [restrict(v) for v in c.cocycles]
    b = [restrict(v) for v in c.coboundaries]
    kcoc = k.cocycles
    rep = CheckReport("cochain cocycles -> Hom(Lambda g, M)",
                      details={"n": n, "j": j, "rank": c.rank})
    rep.record("coboundaries map to zero", all(not v for v in b))
    # image of cocycles lies in Koszul cocycles and has full rank there
    rk_z = rank_rows(ring, [v for v in z if v])
    rk_k = len(kcoc)
    both = rank_rows(ring, [v for v in z if v] + kcoc)
    rep.record("cocycles map into Koszul cocycles", both == rk_k)
    kb = rank_rows(ring, k.coboundaries) if k.coboundaries else 0
    rep.record("induced map is an isomorphism", rk_z == rk_k and c.rank == k.rank
               and rk_k - kb == c.rank)
    rep.details["image basis"] = [v for v in rref_rows(ring, [v for v in z if v]).values()]
    return rep


def hochschild_total(A: GradedAlgebra, M: AModule, n: int, normalized=True) -> int:
    """Total rank of HH^n for finite-rank A and M (sum over internal degrees)."""
    if A.truncated:
        raise ScopeError("total Hochschild rank needs a finite (untruncated) algebra")
    lo = min(M.degrees, default=0) - n * max(A.degrees, default=0) - 1
    hi = max(M.degrees, default=0) + 1
    return sum(ext_by_cochains(A, M, n, j, W=None, normalized=normalized).rank
               for j in range(lo, hi + 1))


__all__ = [
    "ChainComplex", "koszul_complex", "koszul_exactness", "hochschild_cochain_complex",
    "hochschild_differential", "ext_by_cochains", "ext_by_koszul", "ext_bimodule", "cohomology_H",
    "quillen_consistency", "comparison_iso", "hochschild_total", "ExtEntry",
]
