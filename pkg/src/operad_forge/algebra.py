"""Algebras over a truncated operad, given by structure constants.

Only the arity-2 operations are stored; higher arities are evaluated
through the operad's decomposition of ``O(n)`` into binary operations.
Whether that is consistent is exactly what :func:`check_algebra` tests.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

from .errors import (AntisymmetryError, DegreeError, RingError, SetupError,
                     TruncationError)
from .linalg import (BasedModule, ExactMatrix, GroundRing, axpy, quotient_by_relations,
                     rank_rows, vclean, vscale)
from .operad import FinOperad, adjacent, build_standard, left_normed, perm_sign
from .report import CheckReport


class Unknown(Exception):
    """A product left the truncation window."""


class GradedAlgebra:
    """Degreewise finite algebra over ``operad``.

    ``tables[b]`` maps ordered pairs of basis indices to the sparse vector
    ``b(e_i, e_j)``; missing pairs are zero.  Basis elements are split into
    *parts* (one for an ordinary algebra, two for ``A (+) M``); each part has
    its own truncation degree, and ``square_zero`` lists parts whose mutual
    products vanish identically.
    """

    def __init__(self, operad: FinOperad, labels, degrees, tables: dict, *, unit=None,
                 augmented=False, max_degree=None, truncated=True, parts=None,
                 part_max=None, part_truncated=None, square_zero=(), names=None):
        self.operad = operad
        self.ring = operad.ring
        self.labels = tuple(labels)
        if len(set(self.labels)) != len(self.labels):
            raise SetupError("basis labels must be distinct")
        self.degrees = tuple(degrees)
        if len(self.degrees) != len(self.labels):
            raise SetupError("one degree per basis label")
        self.tables = {b: {ij: vclean(self.ring, v) for ij, v in t.items()}
                       for b, t in tables.items()}
        self.tables = {b: {ij: v for ij, v in t.items() if v} for b, t in self.tables.items()}
        self.unit = unit
        self.augmented = augmented
        self.max_degree = max(self.degrees, default=0) if max_degree is None else max_degree
        self.truncated = truncated
        self.parts = tuple(parts) if parts is not None else (0,) * len(self.labels)
        self.part_max = tuple(part_max) if part_max is not None else (self.max_degree,)
        self.part_truncated = (tuple(part_truncated) if part_truncated is not None
                               else (truncated,) * len(self.part_max))
        self.square_zero = frozenset(square_zero)
        self.names = tuple(names) if names is not None else tuple(str(l) for l in self.labels)
        self._index = {l: k for k, l in enumerate(self.labels)}
        self._by_degree: dict = {}
        for k, d in enumerate(self.degrees):
            self._by_degree.setdefault(d, []).append(k)

    # -- basics ---------------------------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.labels)

    def index(self, label) -> int:
        return self._index[label]

    def basis_of_degree(self, d: int) -> list[int]:
        return list(self._by_degree.get(d, []))

    def component(self, d: int) -> BasedModule:
        return BasedModule(self.ring, tuple(self.labels[k] for k in self._by_degree.get(d, [])))

    def ranks(self, lo: int | None = None, hi: int | None = None) -> list[int]:
        lo = min(self.degrees, default=0) if lo is None else lo
        hi = self.max_degree if hi is None else hi
        return [len(self._by_degree.get(d, [])) for d in range(lo, hi + 1)]

    def degree_of(self, vec: dict):
        degs = {self.degrees[k] for k in vec}
        if len(degs) > 1:
            raise DegreeError("inhomogeneous vector")
        return degs.pop() if degs else None

    def __repr__(self):
        return f"GradedAlgebra({self.operad.name}, rank={self.rank}, D={self.max_degree})"

    # -- products -------------------------------------------------------------

    def known(self, i: int, j: int) -> bool:
        pi, pj = self.parts[i], self.parts[j]
        if pi == pj and pi in self.square_zero:
            return True
        p = max(pi, pj)
        return not self.part_truncated[p] or self.degrees[i] + self.degrees[j] <= self.part_max[p]

    def product_basis(self, b: int, i: int, j: int) -> dict:
        if not self.known(i, j):
            raise Unknown((b, i, j))
        return self.tables.get(b, {}).get((i, j), {})

    def mul(self, b: int, u: dict, v: dict) -> dict:
        ring = self.ring
        out: dict = {}
        tab = self.tables.get(b, {})
        for i, x in u.items():
            for j, y in v.items():
                if not self.known(i, j):
                    raise Unknown((b, i, j))
                w = tab.get((i, j))
                if w:
                    axpy(ring, out, x * y, w)
        return out

    def act(self, n: int, coords: dict, inputs) -> dict:
        """Evaluate an element of O(n) (given by coordinates) on n input vectors.

        Raises :class:`Unknown` if an intermediate product is outside the
        truncation.
        """
        ring = self.ring
        if len(inputs) != n:
            raise SetupError("wrong number of inputs")
        if n == 1:
            out: dict = {}
            for k, c in coords.items():
                axpy(ring, out, c * ring.one, self._act1(k, inputs[0]))
            return out
        out = {}
        if n == 2:
            for k, c in coords.items():
                axpy(ring, out, c, self.mul(k, inputs[0], inputs[1]))
            return out
        dec = self.operad.decomposition(n)
        for k, c in coords.items():
            for (c2, tau, b, f) in dec[k]:
                ys = [inputs[t - 1] for t in tau]
                inner = self.act(n - 1, {f: ring.one}, ys[:-1])
                axpy(ring, out, c * c2, self.mul(b, inner, ys[-1]))
        return out

    def _act1(self, k, v):
        if self.operad.rank(1) != 1:
            raise SetupError("operads with O(1) of rank > 1 are not supported by algebras")
        return dict(v)

    def e(self, k: int) -> dict:
        return {k: self.ring.one}

    def unit_vec(self) -> dict:
        if self.unit is None:
            raise SetupError("algebra is not unital")
        return self.e(self.unit)

    def product_vec(self, u: dict, v: dict) -> dict:
        """The first binary operation (the product for com/ass, bracket for lie)."""
        return self.mul(0, u, v)

    def structure_dump(self) -> list[str]:
        """Deterministic text dump of the binary structure constants."""
        lines = []
        for b in sorted(self.tables):
            for (i, j) in sorted(self.tables[b]):
                v = self.tables[b][(i, j)]
                terms = " + ".join(f"{v[k]}*{self.names[k]}" for k in sorted(v))
                lines.append(f"op{b}({self.names[i]}, {self.names[j]}) = {terms}")
        return lines


# -- checks -------------------------------------------------------------------

def _tuples(alg: GradedAlgebra, length: int, D: int, part_limit=None):
    """Basis tuples of the given length and total degree <= D."""
    idx = sorted(range(alg.rank), key=lambda k: (alg.degrees[k], k))
    mindeg = min(alg.degrees, default=0)

    def rec(prefix, total, npart):
        if len(prefix) == length:
            yield tuple(prefix)
            return
        rest = length - len(prefix) - 1
        for k in idx:
            d = alg.degrees[k]
            if total + d + rest * mindeg > D:
                if mindeg >= 0:
                    break
                continue
            np_ = npart + (1 if alg.parts[k] else 0)
            if part_limit is not None and np_ > part_limit:
                continue
            prefix.append(k)
            yield from rec(prefix, total + d, np_)
            prefix.pop()

    yield from rec([], 0, 0)


def check_algebra(alg: GradedAlgebra, D: int | None = None, max_arity: int = 3,
                  part_limit: int | None = None) -> CheckReport:
    """Compatibility of the structure maps with operad composition and the
    symmetric-group action, on all basis tuples of total degree <= D.

    Compositions ``f o_i g`` with f, g of arity >= 2 and ``m + n - 1 <=
    max_arity`` are tested; the arity-1 part is the identity by construction.
    """
    op = alg.operad
    D = alg.max_degree if D is None else D
    N = min(max_arity, op.max_arity)
    ring = alg.ring
    rep = CheckReport("algebra", details={"max_degree": D, "max_arity": N})
    ok = True
    # unit
    if alg.unit is not None:
        u = alg.unit_vec()
        for k in range(alg.rank):
            for b in range(op.rank(2)):
                try:
                    l = alg.mul(b, u, alg.e(k))
                    r = alg.mul(b, alg.e(k), u)
                except Unknown:
                    continue
                if l != alg.e(k) or r != alg.e(k):
                    ok = False
                    rep.witness("unit", (alg.names[k], b))
    rep.record("unit", ok)

    # degree additivity
    ok = True
    for b, tab in alg.tables.items():
        for (i, j), v in tab.items():
            for k in v:
                if alg.degrees[k] != alg.degrees[i] + alg.degrees[j]:
                    ok = False
                    rep.witness("degree", (b, alg.names[i], alg.names[j], alg.names[k]))
    rep.record("degree", ok)

    # binary equivariance
    ok = True
    s = (2, 1)
    for b in range(op.rank(2)):
        sb = op.act_vec(s, {b: ring.one})
        for (i, j) in _tuples(alg, 2, D, part_limit):
            try:
                lhs = alg.act(2, sb, [alg.e(i), alg.e(j)])
                rhs = alg.act(2, {b: ring.one}, [alg.e(j), alg.e(i)])
            except Unknown:
                continue
            if lhs != rhs:
                ok = False
                rep.witness("equivariance", (b, alg.names[i], alg.names[j]))
    rep.record("equivariance", ok)

    # composition square
    ok = True
    for m in range(2, N + 1):
        for n in range(2, N + 2 - m):
            L = m + n - 1
            tuples = list(_tuples(alg, L, D, part_limit))
            for f in range(op.rank(m)):
                for g in range(op.rank(n)):
                    for i in range(1, m + 1):
                        fg = op.compose_vec(m, i, n, {f: ring.one}, {g: ring.one})
                        for t in tuples:
                            xs = [alg.e(k) for k in t]
                            try:
                                lhs = alg.act(L, fg, xs)
                                inner = alg.act(n, {g: ring.one}, xs[i - 1:i - 1 + n])
                                rhs = alg.act(m, {f: ring.one},
                                              xs[:i - 1] + [inner] + xs[i - 1 + n:])
                            except Unknown:
                                continue
                            if lhs != rhs:
                                ok = False
                                rep.witness("composition",
                                            ((m, f), i, (n, g), tuple(alg.names[k] for k in t)))
    rep.record("composition", ok)
    return rep


# -- homomorphisms ------------------------------------------------------------

@dataclass
class AlgebraHom:
    """Linear map given on basis elements; ``images[k]`` is a target vector."""

    source: GradedAlgebra
    target: GradedAlgebra
    images: list
    degree_factor: int = 1    # source degree n goes to target degree factor * n

    def apply(self, vec: dict) -> dict:
        out: dict = {}
        for k, c in vec.items():
            axpy(self.target.ring, out, c, self.images[k])
        return out

    def matrix(self, d: int) -> ExactMatrix:
        """Matrix of the degree-d component (columns = source basis of degree d)."""
        src = self.source.basis_of_degree(d)
        tgt = self.target.basis_of_degree(self.degree_factor * d)
        pos = {k: r for r, k in enumerate(tgt)}
        cols = [{pos[k]: v for k, v in self.images[s].items()} for s in src]
        return ExactMatrix.from_columns(self.target.ring, cols, len(tgt))

    def check(self, D: int | None = None) -> CheckReport:
        S, T = self.source, self.target
        D = S.max_degree if D is None else D
        rep = CheckReport("algebra hom", details={"max_degree": D})
        ok = True
        for k in range(S.rank):
            for t in self.images[k]:
                if T.degrees[t] != self.degree_factor * S.degrees[k]:
                    ok = False
                    rep.witness("degree", S.names[k])
        rep.record("degree", ok)
        ok = True
        if S.unit is not None and T.unit is not None:
            ok = self.images[S.unit] == T.unit_vec()
        rep.record("unit", ok)
        ok = True
        for b in range(S.operad.rank(2)):
            for (i, j) in _tuples(S, 2, D):
                try:
                    lhs = self.apply(S.mul(b, S.e(i), S.e(j)))
                    rhs = T.mul(b, self.images[i], self.images[j])
                except Unknown:
                    continue
                if lhs != rhs:
                    ok = False
                    rep.witness("multiplicative", (b, S.names[i], S.names[j]))
        rep.record("multiplicative", ok)
        return rep


# -- free algebras --------------------------------------------------------------

class FreeAlgebra(GradedAlgebra):
    """Free algebra with stored lifts of every basis class to ``(word, op basis)``."""

    generators: tuple
    lifts: list


def _monomial_name(gen_names, word):
    return "*".join(gen_names[a] for a in word)


def _free_name(op: FinOperad, gen_names, w, k):
    n = len(w)
    base = op.name
    if base == "com":
        parts = []
        for a in sorted(set(w)):
            e = w.count(a)
            parts.append(gen_names[a] + (f"^{e}" if e > 1 else ""))
        return "*".join(parts)
    if base == "ass":
        u = op.spaces[n].basis_labels[k]
        return "*".join(gen_names[w[x - 1]] for x in u)
    if base == "lie":
        lab = op.spaces[n].basis_labels[k]
        tree = left_normed([gen_names[w[x - 1]] for x in lab])

        def show(t):
            return t if isinstance(t, str) else f"[{show(t[0])},{show(t[1])}]"
        return show(tree)
    return f"{tuple(gen_names[a] for a in w)}:{k}"


def free_algebra(op: FinOperad, v: BasedModule | int, D: int, *, unital: bool | None = None,
                 weights=None, gen_names=None) -> GradedAlgebra:
    """Free ``op``-algebra on ``v`` up to degree ``D``.

    The arity-n part is the coinvariant module of ``V^{(x)n} (x) O(n)`` under
    ``(w, mu) ~ (w o s, s . mu)``, computed one letter-content block at a
    time.  Generators sit in degree ``weights[a]`` (default 1).
    """
    ring = op.ring
    if isinstance(v, int):
        v = BasedModule(ring, tuple(f"x{a + 1}" for a in range(v)))
    r = v.rank
    weights = tuple(weights) if weights is not None else (1,) * r
    if any(w < 1 for w in weights):
        raise DegreeError("generator weights must be positive")
    gen_names = tuple(gen_names or (str(l) for l in v.basis_labels))
    unital = op.unital if unital is None else unital
    if unital and op.name not in ("com", "ass"):
        raise RingError(f"no unital free algebra for operad {op.name}")
    min_w = min(weights, default=1)
    if r and D // min_w > op.max_arity:
        raise TruncationError(f"degree {D} needs arity {D // min_w} > {op.max_arity}")

    labels, degrees, names, lifts = [], [], [], []
    lookup: dict = {}       # (w, k) -> (block key, source index)
    blocks: dict = {}       # content -> (source labels, Quotient, first global index)
    if unital:
        labels.append(("1",))
        degrees.append(0)
        names.append("1")
        lifts.append(None)
    max_n = min(op.max_arity, D // min_w) if r else 0
    for n in range(1, max_n + 1):
        contents = [c for c in itertools.combinations_with_replacement(range(r), n)
                    if sum(weights[a] for a in c) <= D]
        for content in contents:
            words = sorted(set(itertools.permutations(content)))
            src = [(w, k) for w in words for k in range(op.rank(n))]
            sidx = {s: t for t, s in enumerate(src)}
            rels = []
            for (w, k) in src:
                for j in range(1, n):
                    s = adjacent(n, j)
                    w2 = tuple(w[x - 1] for x in s)
                    rel = {sidx[(w2, k)]: ring.one}
                    for kk, c in op.act_vec(s, {k: ring.one}).items():
                        axpy(ring, rel, -c, {sidx[(w, kk)]: ring.one})
                    if rel:
                        rels.append(rel)
            q = quotient_by_relations(BasedModule(ring, tuple(src)), rels)
            if q.torsion:
                raise RingError(f"free {op.name}-algebra has torsion {list(q.torsion)} "
                                f"in arity {n}; not a free module over {ring}")
            start = len(labels)
            blocks[content] = (src, sidx, q, start)
            for t in range(q.module.rank):
                lift = q.lift(t)
                labels.append(("free", content, t) if not q.representatives
                              else src[q.representatives[t]])
                degrees.append(sum(weights[a] for a in content))
                if q.representatives:
                    w, k = src[q.representatives[t]]
                    names.append(_free_name(op, gen_names, w, k))
                else:
                    names.append(f"{content}#{t}")
                lifts.append({src[s]: c for s, c in lift.items()})

    def project(w, vec):
        content = tuple(sorted(w))
        src, sidx, q, start = blocks[content]
        out: dict = {}
        img = q.project({sidx[(w, k)]: c for k, c in vec.items()})
        for t, c in img.items():
            out[start + t] = c
        return out

    nb = len(labels)
    tables: dict = {b: {} for b in range(op.rank(2))}
    for i in range(nb):
        for j in range(nb):
            di, dj = degrees[i], degrees[j]
            if di + dj > D:
                continue
            for b in range(op.rank(2)):
                if lifts[i] is None or lifts[j] is None:
                    if lifts[i] is None and lifts[j] is None:
                        tables[b][(i, j)] = {0: ring.one}
                    else:
                        tables[b][(i, j)] = {j if lifts[i] is None else i: ring.one}
                    continue
                out: dict = {}
                for (w1, k1), c1 in lifts[i].items():
                    n1 = len(w1)
                    for (w2, k2), c2 in lifts[j].items():
                        n2 = len(w2)
                        mu = op.compose_vec(2, 2, n2, {b: ring.one}, {k2: ring.one})
                        mu = op.compose_vec(1 + n2, 1, n1, mu, {k1: ring.one})
                        axpy(ring, out, c1 * c2, project(w1 + w2, mu))
                if out:
                    tables[b][(i, j)] = out
    alg = GradedAlgebra(op, labels, degrees, tables, unit=0 if unital else None,
                        augmented=unital, max_degree=D, truncated=True, names=names)
    alg.generators = tuple(lookup.get(a) for a in range(r))
    gens = []
    for a in range(r):
        content = (a,)
        if content in blocks and blocks[content][2].module.rank:
            gens.append(blocks[content][3])
        else:
            gens.append(None)
    alg.generators = tuple(gens)
    alg.lifts = lifts
    alg.gen_module = v
    alg.weights = weights
    alg.is_free = True
    return alg


def extend_from_generators(free: GradedAlgebra, target: GradedAlgebra, images,
                           degree: int = 1) -> AlgebraHom:
    """The unique algebra map out of a free algebra with given generator images.

    ``images[a]`` is a target vector for generator ``a``; it must be
    homogeneous of degree ``degree * weight(a)``.
    """
    if not getattr(free, "is_free", False):
        raise SetupError("source must come from free_algebra")
    if free.operad.name != target.operad.name:
        raise SetupError("source and target live over different operads")
    ring = target.ring
    for a, vec in enumerate(images):
        vec = vclean(ring, vec)
        for k in vec:
            if target.degrees[k] != degree * free.weights[a]:
                raise DegreeError(f"image of generator {a} is not of degree "
                                  f"{degree * free.weights[a]}")
    out = []
    for k in range(free.rank):
        lift = free.lifts[k]
        if lift is None:
            out.append(target.unit_vec())
            continue
        val: dict = {}
        for (w, opk), c in lift.items():
            try:
                val_w = target.act(len(w), {opk: ring.one}, [images[a] for a in w])
            except Unknown:
                raise TruncationError("target truncation too small for the image") from None
            axpy(ring, val, c, val_w)
        out.append(val)
    return AlgebraHom(free, target, out, degree)


def restrict_to_generators(hom: AlgebraHom) -> list[dict]:
    return [dict(hom.images[g]) if g is not None else {} for g in hom.source.generators]


def generated_by_generators(free: GradedAlgebra) -> bool:
    """Whether iterated products of generators span every component."""
    span = {g for g in free.generators if g is not None}
    vecs = {g: free.e(g) for g in span}
    ring = free.ring
    ok = True
    for d in range(1, free.max_degree + 1):
        rows = []
        for k, vec in vecs.items():
            if free.degrees[k] == d:
                rows.append(vec)
        for i in range(free.rank):
            for g in span:
                if free.degrees[i] + free.degrees[g] != d or free.degrees[i] == 0:
                    continue
                for b in range(free.operad.rank(2)):
                    rows.append(free.mul(b, free.e(i), free.e(g)))
        comp = free.basis_of_degree(d)
        if rank_rows(ring, rows) != len(comp):
            ok = False
    return ok


# -- symmetric and exterior powers ------------------------------------------------

def symmetric_algebra(g: BasedModule | int, D: int, ring: GroundRing | None = None,
                      operad: str = "com") -> GradedAlgebra:
    """S(g) up to degree D as the free unital commutative algebra.

    Basis labels are nondecreasing index tuples.  With ``operad="ass"`` the
    same algebra is returned viewed as an associative algebra.
    """
    if isinstance(g, int):
        ring = ring or GroundRing.Q()
        g = BasedModule(ring, tuple(f"x{a + 1}" for a in range(g)))
    ring = g.ring
    op = build_standard("com", ring, max(D, 1), unital=True)
    free = free_algebra(op, g, D, unital=True)
    labels = [() if l == ("1",) else tuple(l[0]) for l in free.labels]
    if operad == "com":
        alg = GradedAlgebra(op, labels, free.degrees, free.tables, unit=0, augmented=True,
                            max_degree=D, truncated=True, names=free.names)
    else:
        alg = as_associative(GradedAlgebra(op, labels, free.degrees, free.tables, unit=0,
                                           augmented=True, max_degree=D, truncated=True,
                                           names=free.names))
    alg.gen_names = tuple(str(l) for l in g.basis_labels)
    alg.gen_index = tuple(alg.index((a,)) for a in range(g.rank))
    return alg


def polynomial_algebra(ring: GroundRing, gen_names, D: int, operad: str = "ass",
                       weights=None) -> GradedAlgebra:
    """Commutative polynomial algebra built directly from monomials (fast path).

    Labels are nondecreasing index tuples exactly as in
    :func:`symmetric_algebra`; the two constructions are cross-checked in tests.
    """
    r = len(gen_names)
    weights = tuple(weights) if weights is not None else (1,) * r
    labels, degrees = [], []
    for n in range(0, D + 1):
        for c in itertools.combinations_with_replacement(range(r), n):
            d = sum(weights[a] for a in c)
            if d <= D:
                labels.append(c)
                degrees.append(d)
    order = sorted(range(len(labels)), key=lambda k: (degrees[k], len(labels[k]), labels[k]))
    labels = [labels[k] for k in order]
    degrees = [degrees[k] for k in order]
    idx = {l: k for k, l in enumerate(labels)}
    tab = {}
    for i, a in enumerate(labels):
        for j, b in enumerate(labels):
            if degrees[i] + degrees[j] <= D:
                tab[(i, j)] = {idx[tuple(sorted(a + b))]: ring.one}
    names = [_poly_name(gen_names, l) for l in labels]
    op = build_standard(operad, ring, max(D, 3), unital=True)
    tables = {b: tab for b in range(op.rank(2))}
    alg = GradedAlgebra(op, labels, degrees, tables, unit=0, augmented=True, max_degree=D,
                        truncated=True, names=names)
    alg.gen_names = tuple(gen_names)
    alg.gen_index = tuple(idx[(a,)] for a in range(r))
    return alg


def _poly_name(gen_names, mono):
    if not mono:
        return "1"
    parts = []
    for a in sorted(set(mono)):
        e = mono.count(a)
        parts.append(gen_names[a] + (f"^{e}" if e > 1 else ""))
    return "*".join(parts)


def as_associative(alg: GradedAlgebra) -> GradedAlgebra:
    """A commutative algebra viewed over the associative operad."""
    if alg.operad.name != "com":
        raise SetupError("only commutative algebras can be reinterpreted")
    op = build_standard("ass", alg.ring, max(alg.operad.max_arity, 3), unital=True)
    t = alg.tables.get(0, {})
    out = GradedAlgebra(op, alg.labels, alg.degrees, {0: dict(t), 1: dict(t)}, unit=alg.unit,
                        augmented=alg.augmented, max_degree=alg.max_degree,
                        truncated=alg.truncated, names=alg.names)
    for attr in ("gen_names", "gen_index"):
        if hasattr(alg, attr):
            setattr(out, attr, getattr(alg, attr))
    return out


def exterior_power(g: BasedModule, i: int):
    """Lambda^i g with its inclusion into g^{(x)i} by alternating sums.

    The tensor power is indexed by ``itertools.product(range(rank), repeat=i)``.
    """
    r = g.rank
    ring = g.ring
    labels = tuple(itertools.combinations(range(r), i)) if i >= 0 else ()
    tidx = {t: k for k, t in enumerate(itertools.product(range(r), repeat=i))}
    cols = []
    for lab in labels:
        col = {}
        for p in itertools.permutations(range(i)):
            t = tuple(lab[x] for x in p)
            col[tidx[t]] = ring(perm_sign(tuple(x + 1 for x in p)))
        cols.append(col)
    inc = ExactMatrix.from_columns(ring, cols, r ** i)
    return BasedModule(ring, labels), inc


# -- Lie algebras ---------------------------------------------------------------

@dataclass
class LieAlgebraData:
    """Structure constants ``brackets[(a, b)] = {k: c}`` for a < b or any order.

    Entries are completed by antisymmetry on construction; an explicit
    non-antisymmetric table raises E_ANTISYM.
    """

    ring: GroundRing
    names: tuple
    brackets: dict
    jacobi: bool | None = None
    name: str = "g"

    def __post_init__(self):
        self.names = tuple(self.names)
        ring = self.ring
        full: dict = {}
        for (a, b), v in self.brackets.items():
            v = vclean(ring, v)
            if a == b:
                if v:
                    raise AntisymmetryError(f"[{self.names[a]},{self.names[a]}] must vanish",
                                            pair=(a, b))
                continue
            if (b, a) in self.brackets:
                other = vclean(ring, self.brackets[(b, a)])
                if vscale(ring, -1, other) != v:
                    raise AntisymmetryError(
                        f"[{self.names[a]},{self.names[b]}] != -[{self.names[b]},{self.names[a]}]",
                        pair=(a, b))
            full[(a, b)] = v
            full[(b, a)] = vscale(ring, -1, v)
        self.brackets = {k: v for k, v in full.items() if v}

    @property
    def rank(self) -> int:
        return len(self.names)

    def bracket(self, u: dict, v: dict) -> dict:
        out: dict = {}
        for a, x in u.items():
            for b, y in v.items():
                w = self.brackets.get((a, b))
                if w:
                    axpy(self.ring, out, x * y, w)
        return out

    def e(self, a):
        return {a: self.ring.one}

    def module(self) -> BasedModule:
        return BasedModule(self.ring, self.names)

    def base_change(self, ring: GroundRing) -> "LieAlgebraData":
        return LieAlgebraData(ring, self.names,
                              {k: {i: ring(x) for i, x in v.items()} for k, v in self.brackets.items()},
                              name=self.name)


def jacobiator(g: LieAlgebraData) -> dict:
    """J(x_a, x_b, x_c) = [[x_a,x_b],x_c] + [[x_b,x_c],x_a] + [[x_c,x_a],x_b] for a<b<c.

    Nonzero values only.
    """
    out = {}
    for a, b, c in itertools.combinations(range(g.rank), 3):
        x, y, z = g.e(a), g.e(b), g.e(c)
        j: dict = {}
        for p, q, r in ((x, y, z), (y, z, x), (z, x, y)):
            axpy(g.ring, j, 1, g.bracket(g.bracket(p, q), r))
        if j:
            out[(a, b, c)] = j
    return out


def lie_from_constants(g: LieAlgebraData) -> LieAlgebraData:
    g.jacobi = not jacobiator(g)
    return g


def lie_as_algebra(g: LieAlgebraData, max_arity: int = 3) -> GradedAlgebra:
    """g as an ungraded algebra over the Lie operad (everything in degree 0)."""
    op = build_standard("lie", g.ring, max_arity)
    tab = {k: v for k, v in g.brackets.items()}
    alg = GradedAlgebra(op, g.names, (0,) * g.rank, {0: tab}, max_degree=0, truncated=False,
                        names=g.names)
    alg.lie = g
    return alg


def standard_lie(name: str, ring: GroundRing) -> LieAlgebraData:
    """Named test brackets: sl2, heisenberg, solvable2, abelianN, nonjacobi, nonjacobi2."""
    one = ring.one
    if name == "sl2":
        data = LieAlgebraData(ring, ("e", "f", "h"),
                              {(0, 1): {2: one}, (2, 0): {0: 2 * one}, (2, 1): {1: -2 * one}},
                              name=name)
    elif name == "heisenberg":
        data = LieAlgebraData(ring, ("x", "y", "z"), {(0, 1): {2: one}}, name=name)
    elif name == "solvable2":
        data = LieAlgebraData(ring, ("x", "y"), {(0, 1): {1: one}}, name=name)
    elif name.startswith("abelian") and (name[7:] == "" or name[7:].isdigit()):
        r = int(name[7:] or 2)
        if not 1 <= r <= 8:
            raise SetupError(f"abelian rank {r} outside 1..8")
        data = LieAlgebraData(ring, tuple(f"x{a + 1}" for a in range(r)), {}, name=name)
    elif name == "nonjacobi":
        data = LieAlgebraData(ring, ("e1", "e2", "e3"),
                              {(0, 1): {0: one}, (1, 2): {1: one}, (2, 0): {2: one}}, name=name)
    elif name == "nonjacobi2":
        data = LieAlgebraData(ring, ("a", "b", "c"),
                              {(0, 1): {0: one}, (0, 2): {1: one}}, name=name)
    elif name == "so3":
        data = LieAlgebraData(ring, ("x", "y", "z"),
                              {(0, 1): {2: one}, (1, 2): {0: one}, (2, 0): {1: one}}, name=name)
    else:
        raise SetupError(f"unknown Lie algebra {name!r}")
    return lie_from_constants(data)


def binomial_ranks(r: int, D: int) -> list[int]:
    return [comb(r + n - 1, n) for n in range(D + 1)]


__all__ = [
    "GradedAlgebra", "AlgebraHom", "Unknown", "check_algebra", "free_algebra",
    "extend_from_generators", "restrict_to_generators", "generated_by_generators",
    "symmetric_algebra", "polynomial_algebra", "as_associative", "exterior_power",
    "LieAlgebraData", "jacobiator", "lie_from_constants", "lie_as_algebra", "standard_lie",
    "binomial_ranks",
]
