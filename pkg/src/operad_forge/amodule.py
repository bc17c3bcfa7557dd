"""Modules over an operad algebra (operadic modules with one module slot).

A module ``M`` over ``A`` is stored through its arity-2 action tables:
``tables[(b, s)][(a, m)]`` is ``b(m, a)`` for ``s == 1`` and ``b(a, m)`` for
``s == 2``.  Everything else is read off the square-zero extension
``A (+) M``, which is an ordinary algebra over the same operad.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .algebra import AlgebraHom, GradedAlgebra, Unknown, check_algebra
from .errors import OperadKindError, SetupError, TruncationError
from .linalg import (BasedModule, axpy, kernel_rows, quotient_by_relations, rank_rows,
                     vclean)
from .operad import adjacent, build_standard, unit_insert
from .report import CheckReport


class AModule:
    def __init__(self, algebra: GradedAlgebra, labels, degrees, tables: dict, *,
                 max_degree=None, truncated=None, names=None, name="M"):
        self.algebra = algebra
        self.ring = algebra.ring
        self.labels = tuple(labels)
        self.degrees = tuple(degrees)
        self.tables = {k: {am: v for am, v in ((am, vclean(self.ring, v)) for am, v in t.items()) if v}
                       for k, t in tables.items()}
        self.max_degree = (max(self.degrees, default=0) if max_degree is None else max_degree)
        self.truncated = algebra.truncated if truncated is None else truncated
        self.names = tuple(names) if names is not None else tuple(str(l) for l in self.labels)
        self.name = name
        self._by_degree: dict = {}
        for k, d in enumerate(self.degrees):
            self._by_degree.setdefault(d, []).append(k)

    @property
    def rank(self) -> int:
        return len(self.labels)

    def basis_of_degree(self, d):
        return list(self._by_degree.get(d, []))

    def ranks(self, lo, hi):
        return [len(self._by_degree.get(d, [])) for d in range(lo, hi + 1)]

    def in_range(self, d) -> bool:
        return not self.truncated or d <= self.max_degree

    def action(self, b: int, slot: int, a: int, m: int) -> dict:
        return self.tables.get((b, slot), {}).get((a, m), {})

    def act_vec(self, b, slot, avec: dict, mvec: dict) -> dict:
        out: dict = {}
        tab = self.tables.get((b, slot), {})
        for a, x in avec.items():
            for m, y in mvec.items():
                w = tab.get((a, m))
                if w:
                    axpy(self.ring, out, x * y, w)
        return out

    def __repr__(self):
        return f"AModule({self.name}, rank={self.rank})"


# -- constructions ----------------------------------------------------------------

def square_zero_extension(A: GradedAlgebra, M: AModule) -> GradedAlgebra:
    """A (+) M with M . M = 0, as an algebra over the same operad."""
    if M.algebra is not A:
        raise SetupError("module lives over a different algebra")
    nA = A.rank
    labels = [("A", l) for l in A.labels] + [("M", l) for l in M.labels]
    degrees = list(A.degrees) + list(M.degrees)
    names = list(A.names) + [f"({n})" for n in M.names]
    tables = {}
    for b in range(A.operad.rank(2)):
        t = dict(A.tables.get(b, {}))
        for (a, m), v in M.tables.get((b, 2), {}).items():
            t[(a, nA + m)] = {nA + k: c for k, c in v.items()}
        for (a, m), v in M.tables.get((b, 1), {}).items():
            t[(nA + m, a)] = {nA + k: c for k, c in v.items()}
        tables[b] = t
    E = GradedAlgebra(A.operad, labels, degrees, tables, unit=A.unit, augmented=A.augmented,
                      max_degree=max(A.max_degree, M.max_degree), truncated=A.truncated,
                      parts=[0] * nA + [1] * M.rank, part_max=(A.max_degree, M.max_degree),
                      part_truncated=(A.truncated, M.truncated), square_zero={1}, names=names)
    E.base, E.module = A, M
    return E


def extension_projection(E: GradedAlgebra) -> AlgebraHom:
    A = E.base
    images = [A.e(k) if k < A.rank else {} for k in range(E.rank)]
    return AlgebraHom(E, A, images)


def check_module(M: AModule, D: int | None = None, max_arity: int = 3) -> CheckReport:
    """Module axioms, read as the algebra axioms of A (+) M on tuples with one M entry."""
    E = square_zero_extension(M.algebra, M)
    D = E.max_degree if D is None else D
    rep = check_algebra(E, D, max_arity=max_arity, part_limit=1)
    rep.name = "module"
    return rep


def _regular_tables(A: GradedAlgebra, keep):
    """Action tables of A on the span of basis indices ``keep``."""
    pos = {k: t for t, k in enumerate(keep)}
    tables = {}
    for b in range(A.operad.rank(2)):
        t1, t2 = {}, {}
        for a in range(A.rank):
            for m in keep:
                if A.known(m, a):
                    v = A.tables.get(b, {}).get((m, a), {})
                    if any(k not in pos for k in v):
                        raise SetupError("span is not stable under the action")
                    if v:
                        t1[(a, pos[m])] = {pos[k]: c for k, c in v.items()}
                if A.known(a, m):
                    v = A.tables.get(b, {}).get((a, m), {})
                    if any(k not in pos for k in v):
                        raise SetupError("span is not stable under the action")
                    if v:
                        t2[(a, pos[m])] = {pos[k]: c for k, c in v.items()}
        tables[(b, 1)] = t1
        tables[(b, 2)] = t2
    return tables


def regular_module(A: GradedAlgebra) -> AModule:
    """A as a module over itself (bimodule, adjoint representation ...)."""
    keep = list(range(A.rank))
    return AModule(A, A.labels, A.degrees, _regular_tables(A, keep), max_degree=A.max_degree,
                   truncated=A.truncated, names=A.names, name="A")


adjoint_module = regular_module


def augmentation_ideal(A: GradedAlgebra) -> AModule:
    """A_+ : the positive-degree part of an augmented algebra."""
    keep = [k for k in range(A.rank) if A.degrees[k] > 0]
    return AModule(A, [A.labels[k] for k in keep], [A.degrees[k] for k in keep],
                   _regular_tables(A, keep), max_degree=A.max_degree, truncated=A.truncated,
                   names=[A.names[k] for k in keep], name="A_+")


def trivial_module(A: GradedAlgebra, rank: int, degree: int = 0, names=None) -> AModule:
    """Rank-``rank`` module in one degree on which A_+ acts by zero.

    For unital associative/commutative A the unit acts as the identity.
    """
    tables = {}
    for b in range(A.operad.rank(2)):
        t1, t2 = {}, {}
        if A.unit is not None:
            for m in range(rank):
                t1[(A.unit, m)] = {m: A.ring.one}
                t2[(A.unit, m)] = {m: A.ring.one}
        tables[(b, 1)] = t1
        tables[(b, 2)] = t2
    names = names or [f"m{k + 1}" for k in range(rank)]
    return AModule(A, [("m", k) for k in range(rank)], [degree] * rank, tables,
                   max_degree=degree, truncated=False, names=names, name="trivial")


def shift(M: AModule, j: int) -> AModule:
    """T^j M: the element of degree n in M has degree n - j."""
    return AModule(M.algebra, M.labels, [d - j for d in M.degrees], M.tables,
                   max_degree=M.max_degree - j, truncated=M.truncated, names=M.names,
                   name=f"T^{j}{M.name}")


def restrict_module(M: AModule, hom: AlgebraHom) -> AModule:
    """Pull a module back along an algebra map B -> A."""
    if hom.target is not M.algebra:
        raise SetupError("hom target is not the module's algebra")
    B = hom.source
    tables = {}
    for (b, s), tab in M.tables.items():
        out = {}
        for x in range(B.rank):
            img = hom.images[x]
            for m in range(M.rank):
                v: dict = {}
                for a, c in img.items():
                    w = tab.get((a, m))
                    if w:
                        axpy(M.ring, v, c, w)
                if v:
                    out[(x, m)] = v
        tables[(b, s)] = out
    return AModule(B, M.labels, M.degrees, tables, max_degree=M.max_degree,
                   truncated=M.truncated, names=M.names, name=M.name)


def module_from_actions(A: GradedAlgebra, names, degrees, left=None, right=None,
                        bracket=None) -> AModule:
    """Module from explicit left/right actions (ass/com) or a bracket action (lie).

    ``left[(a, m)]`` is ``a . m``, ``right[(a, m)]`` is ``m . a`` and
    ``bracket[(a, m)]`` is ``[a, m]``.  The unit action is added automatically.
    """
    ring = A.ring
    name = A.operad.name
    left = dict(left or {})
    right = dict(right or {})
    if name == "com" and right and right != left:
        raise SetupError("commutative modules have one action")
    if A.unit is not None:
        for m in range(len(names)):
            left.setdefault((A.unit, m), {m: ring.one})
            right.setdefault((A.unit, m), {m: ring.one})
    tables = {}
    if name == "ass":
        tables[(0, 2)] = left            # x1 x2 with m in slot 2: a.m
        tables[(0, 1)] = right           # m.a
        tables[(1, 2)] = right           # x2 x1 with m in slot 2: m.a
        tables[(1, 1)] = left
    elif name == "com":
        tables[(0, 1)] = left
        tables[(0, 2)] = left
    elif name == "lie":
        br = dict(bracket or {})
        tables[(0, 2)] = br
        tables[(0, 1)] = {k: {i: -c for i, c in v.items()} for k, v in br.items()}
    else:
        raise OperadKindError(f"no explicit module format for operad {name}")
    return AModule(A, [("m", k) for k in range(len(names))], degrees, tables, names=names,
                   truncated=False)


# -- derivations ----------------------------------------------------------------

@dataclass
class DerivationSpace:
    degree: int
    basis: list            # each: {source basis index: module vector}
    variables: list
    equations: int

    @property
    def rank(self) -> int:
        return len(self.basis)


def derivations(A: GradedAlgebra, M: AModule, j: int) -> DerivationSpace:
    """Degree-j derivations A -> M: phi(b(x,y)) = b(phi x, y) + b(x, phi y).

    Equations are imposed for every binary basis operation and every pair
    whose product is inside both truncations.
    """
    if M.algebra is not A:
        raise SetupError("module lives over a different algebra")
    ring = A.ring
    var = {}
    variables = []
    for x in range(A.rank):
        d = A.degrees[x] + j
        if not M.in_range(d):
            continue
        for m in M.basis_of_degree(d):
            var[(x, m)] = len(variables)
            variables.append((x, m))
    rows = []
    for b in range(A.operad.rank(2)):
        tab = A.tables.get(b, {})
        for x in range(A.rank):
            for y in range(A.rank):
                d = A.degrees[x] + A.degrees[y]
                if not A.known(x, y) or not M.in_range(d + j):
                    continue
                # per output basis element of M: coefficient rows
                eq: dict = {}
                for z, c in tab.get((x, y), {}).items():
                    for m in M.basis_of_degree(A.degrees[z] + j):
                        eq.setdefault(m, {})
                        axpy(ring, eq[m], c, {var[(z, m)]: ring.one})
                # b(phi x, y): module in slot 1
                for m in M.basis_of_degree(A.degrees[x] + j):
                    for k, c in M.action(b, 1, y, m).items():
                        eq.setdefault(k, {})
                        axpy(ring, eq[k], -c, {var[(x, m)]: ring.one})
                for m in M.basis_of_degree(A.degrees[y] + j):
                    for k, c in M.action(b, 2, x, m).items():
                        eq.setdefault(k, {})
                        axpy(ring, eq[k], -c, {var[(y, m)]: ring.one})
                rows.extend(r for r in eq.values() if r)
    if A.unit is not None:
        for m in M.basis_of_degree(A.degrees[A.unit] + j):
            if (A.unit, m) in var:
                rows.append({var[(A.unit, m)]: ring.one})
    ker = kernel_rows(ring, rows, len(variables))
    basis = []
    for vec in ker:
        phi: dict = {}
        for v, c in vec.items():
            x, m = variables[v]
            phi.setdefault(x, {})[m] = c
        basis.append(phi)
    return DerivationSpace(j, basis, variables, len(rows))


def is_derivation(A: GradedAlgebra, M: AModule, phi: dict, j: int) -> bool:
    ring = A.ring
    for b in range(A.operad.rank(2)):
        for x in range(A.rank):
            for y in range(A.rank):
                if not A.known(x, y) or not M.in_range(A.degrees[x] + A.degrees[y] + j):
                    continue
                lhs: dict = {}
                for z, c in A.tables.get(b, {}).get((x, y), {}).items():
                    axpy(ring, lhs, c, phi.get(z, {}))
                rhs = M.act_vec(b, 1, A.e(y), phi.get(x, {}))
                axpy(ring, rhs, 1, M.act_vec(b, 2, A.e(x), phi.get(y, {})))
                if vclean(ring, lhs) != vclean(ring, rhs):
                    return False
    return True


# -- square-zero representability -----------------------------------------------------

def squarezero_representability_check(B: GradedAlgebra, hom: AlgebraHom, M: AModule,
                                      j: int = 0) -> CheckReport:
    """Derivations B -> M of degree j versus algebra maps B -> A (+) T^j M over A."""
    A = hom.target
    if M.algebra is not A or hom.source is not B:
        raise SetupError("hom, module and algebras do not match")
    ring = A.ring
    Mb = restrict_module(M, hom)
    ders = derivations(B, Mb, j)
    E = square_zero_extension(A, shift(M, j))
    nA = A.rank
    # unknown M-components of u(x)
    var = {}
    variables = []
    for x in range(B.rank):
        for e in range(nA, E.rank):
            if E.degrees[e] == B.degrees[x]:
                var[(x, e)] = len(variables)
                variables.append((x, e))
    rows, rhs = [], []
    for b in range(B.operad.rank(2)):
        for x in range(B.rank):
            for y in range(B.rank):
                if not B.known(x, y) or not Mb.in_range(B.degrees[x] + B.degrees[y] + j):
                    continue
                # u(b(x,y)) - b(u x, u y); A-part is hom-ness, M-part linear
                eq: dict = {}
                for z, c in B.tables.get(b, {}).get((x, y), {}).items():
                    for e in E.basis_of_degree(B.degrees[z]):
                        if e >= nA:
                            eq.setdefault(e, {})
                            axpy(ring, eq[e], c, {var[(z, e)]: ring.one})
                for e in E.basis_of_degree(B.degrees[x]):
                    if e < nA:
                        continue
                    for k, c in E.mul(b, {e: ring.one}, hom.images[y]).items():
                        eq.setdefault(k, {})
                        axpy(ring, eq[k], -c, {var[(x, e)]: ring.one})
                for e in E.basis_of_degree(B.degrees[y]):
                    if e < nA:
                        continue
                    for k, c in E.mul(b, hom.images[x], {e: ring.one}).items():
                        eq.setdefault(k, {})
                        axpy(ring, eq[k], -c, {var[(y, e)]: ring.one})
                for r in eq.values():
                    if r:
                        rows.append(r)
                        rhs.append(0)
    if B.unit is not None:
        for e in E.basis_of_degree(B.degrees[B.unit]):
            if e >= nA:
                rows.append({var[(B.unit, e)]: ring.one})
                rhs.append(0)
    hom_kernel = kernel_rows(ring, rows, len(variables))
    rep = CheckReport("square-zero representability",
                      details={"degree": j, "derivations": ders.rank, "homs": len(hom_kernel)})
    rep.record("ranks agree", ders.rank == len(hom_kernel))
    # derivation -> hom
    ok = True
    for phi in ders.basis:
        images = []
        for x in range(B.rank):
            img = dict(hom.images[x])
            for m, c in phi.get(x, {}).items():
                img[nA + m] = c
            images.append(img)
        u = AlgebraHom(B, E, images)
        if not u.check().passed:
            ok = False
            rep.witness("derivation gives hom", phi)
    rep.record("derivation gives hom", ok)
    # hom -> derivation
    ok = True
    for vec in hom_kernel:
        phi: dict = {}
        for v, c in vec.items():
            x, e = variables[v]
            phi.setdefault(x, {})[e - nA] = c
        images = []
        for x in range(B.rank):
            img = dict(hom.images[x])
            for m, c in phi.get(x, {}).items():
                img[nA + m] = c
            images.append(img)
        if not AlgebraHom(B, E, images).check().passed or not is_derivation(B, Mb, phi, j):
            ok = False
            rep.witness("hom gives derivation", phi)
    rep.record("hom gives derivation", ok)
    # zero derivation is the graph of hom
    zero = AlgebraHom(B, E, [dict(hom.images[x]) for x in range(B.rank)])
    rep.record("zero derivation", zero.check().passed)
    return rep


# -- module homomorphisms -------------------------------------------------------------

def module_homs(M1: AModule, M2: AModule, degree: int) -> list[dict]:
    """Basis of A-module maps M1 -> M2 raising degree by ``degree``."""
    A = M1.algebra
    if M2.algebra is not A:
        raise SetupError("modules over different algebras")
    ring = A.ring
    var = {}
    variables = []
    for m in range(M1.rank):
        d = M1.degrees[m] + degree
        if not M2.in_range(d):
            continue
        for n in M2.basis_of_degree(d):
            var[(m, n)] = len(variables)
            variables.append((m, n))
    rows = []
    for (b, s), _ in sorted(M1.tables.items()):
        for a in range(A.rank):
            for m in range(M1.rank):
                d = A.degrees[a] + M1.degrees[m]
                if not M1.in_range(d) or not M2.in_range(d + degree):
                    continue
                eq: dict = {}
                for k, c in M1.action(b, s, a, m).items():
                    for n in M2.basis_of_degree(M1.degrees[k] + degree):
                        eq.setdefault(n, {})
                        axpy(ring, eq[n], c, {var[(k, n)]: ring.one})
                for n in M2.basis_of_degree(M1.degrees[m] + degree):
                    for k, c in M2.action(b, s, a, n).items():
                        eq.setdefault(k, {})
                        axpy(ring, eq[k], -c, {var[(m, n)]: ring.one})
                rows.extend(r for r in eq.values() if r)
    ker = kernel_rows(ring, rows, len(variables))
    out = []
    for vec in ker:
        f: dict = {}
        for v, c in vec.items():
            m, n = variables[v]
            f.setdefault(m, {})[n] = c
        out.append(f)
    return out


# -- enveloping algebra ---------------------------------------------------------------

class EnvelopingAlgebra:
    """P_A built as the quotient of operators ``m -> mu(m, a_1, .., a_i)``.

    Basis elements of the big space are pairs ``(mu, inputs)`` with ``mu`` a
    basis index of O(i+1) (module in input 1) and ``inputs`` a tuple of basis
    indices of A other than the unit.  P acts on the right of modules:
    ``(mu; a) * (nu; b) = (nu o_1 mu; a, b)``.
    """

    def __init__(self, A, mode, D, space, index, quotient, relations, weights):
        self.algebra = A
        self.mode = mode
        self.D = D
        self.space = space
        self._index = index
        self.quotient = quotient
        self.relations = relations
        self.ring = A.ring
        self.weights = weights      # filtration/grading weight per quotient basis element
        self.labels = tuple(space[quotient.representatives[k]] if quotient.representatives
                            else ("snf", k) for k in range(quotient.module.rank))
        self._prod_cache: dict = {}

    @property
    def rank(self) -> int:
        return self.quotient.module.rank

    def ranks(self) -> list[int]:
        """Graded ranks (graded mode) or associated-graded ranks (filtered mode)."""
        return [sum(1 for w in self.weights if w == d) for d in range(self.D + 1)]

    def filtered_ranks(self) -> list[int]:
        out, tot = [], 0
        for r in self.ranks():
            tot += r
            out.append(tot)
        return out

    def weight_of(self, key) -> int:
        mu, inputs = key
        if self.mode == "graded":
            return sum(self.algebra.degrees[a] for a in inputs)
        return len(inputs)

    def project_space(self, vec: dict) -> dict:
        return self.quotient.project({self._index[k]: c for k, c in vec.items()})

    def element(self, mu: int, inputs) -> dict:
        """Class of the operator (mu; inputs) with inputs given as basis indices."""
        A = self.algebra
        vec = normalize_operator(A, len(inputs), {mu: self.ring.one},
                                 [A.e(a) for a in inputs])
        return self.project_space(vec)

    def lift(self, k: int) -> dict:
        return {self.space[s]: c for s, c in self.quotient.lift(k).items()}

    def mul_basis(self, p: int, q: int) -> dict:
        key = (p, q)
        if key in self._prod_cache:
            return self._prod_cache[key]
        if self.weights[p] + self.weights[q] > self.D:
            raise Unknown(key)
        op = self.algebra.operad
        ring = self.ring
        out: dict = {}
        for (mu, a), c1 in self.lift(p).items():
            for (nu, b), c2 in self.lift(q).items():
                i, j = len(a), len(b)
                comp = op.compose_vec(j + 1, 1, i + 1, {nu: ring.one}, {mu: ring.one})
                vec = {(k, a + b): c for k, c in comp.items()}
                axpy(ring, out, c1 * c2, self.project_space(vec))
        self._prod_cache[key] = out
        return out

    def mul(self, u: dict, v: dict) -> dict:
        out: dict = {}
        for p, x in u.items():
            for q, y in v.items():
                axpy(self.ring, out, x * y, self.mul_basis(p, q))
        return out

    def unit_vec(self) -> dict:
        return self.element(0, ())

    def check_associative(self) -> CheckReport:
        rep = CheckReport("enveloping algebra", details={"mode": self.mode, "D": self.D})
        e = lambda k: {k: self.ring.one}  # noqa: E731
        one = self.unit_vec()
        ok = all(self.mul(one, e(k)) == e(k) and self.mul(e(k), one) == e(k)
                 for k in range(self.rank))
        rep.record("unit", ok)
        ok = True
        for p in range(self.rank):
            for q in range(self.rank):
                for r in range(self.rank):
                    if self.weights[p] + self.weights[q] + self.weights[r] > self.D:
                        continue
                    if self.mul(self.mul(e(p), e(q)), e(r)) != self.mul(e(p), self.mul(e(q), e(r))):
                        ok = False
                        rep.witness("associativity", (p, q, r))
        rep.record("associativity", ok)
        return rep

    def structure_constants(self) -> dict:
        out = {}
        for p in range(self.rank):
            for q in range(self.rank):
                try:
                    out[(p, q)] = self.mul_basis(p, q)
                except Unknown:
                    pass
        return out

    def extension(self, M: AModule) -> GradedAlgebra:
        """A (+) M over the (possibly enlarged) operad used to build P."""
        if M.algebra is not self.original and M.algebra is not self.algebra:
            raise SetupError("module lives over a different algebra")
        key = id(M)
        cache = self.__dict__.setdefault("_ext_cache", {})
        if key not in cache:
            cache[key] = (M, _with_operad(square_zero_extension(M.algebra, M), self.algebra.operad))
        return cache[key][1]

    def right_action_on(self, M: AModule, p_vec: dict, m_vec: dict) -> dict:
        """m . p computed from the module structure of M."""
        A = self.algebra
        E = self.extension(M)
        ring = self.ring
        nA = A.rank
        out: dict = {}
        for p, c in p_vec.items():
            for (mu, a), c2 in self.lift(p).items():
                val = operator_on(E, mu, a, {nA + m: x for m, x in m_vec.items()})
                axpy(ring, out, c * c2, {k - nA: y for k, y in val.items()})
        return out


def operator_on(E: GradedAlgebra, mu: int, inputs, mvec: dict) -> dict:
    n = len(inputs) + 1
    return E.act(n, {mu: E.ring.one}, [mvec] + [E.e(a) for a in inputs])


def normalize_operator(A: GradedAlgebra, i: int, mu_vec: dict, input_vecs) -> dict:
    """Expand (mu; v_1..v_i) multilinearly into the (mu, inputs) basis.

    Unit components of inputs are removed by inserting the operad unit.
    """
    ring = A.ring
    op = A.operad
    out: dict = {}

    def rec(pos, mu_vec, arity, chosen, coef):
        if pos == len(input_vecs):
            for k, c in mu_vec.items():
                key = (k, tuple(chosen))
                out[key] = ring.norm(out.get(key, 0) + coef * c)
            return
        for a, x in input_vecs[pos].items():
            if A.unit is not None and a == A.unit:
                # delete input at operad position len(chosen) + 2
                new = unit_insert(op, arity, mu_vec, len(chosen) + 2)
                rec(pos + 1, new, arity - 1, chosen, coef * x)
            else:
                rec(pos + 1, mu_vec, arity, chosen + [a], coef * x)

    rec(0, mu_vec, i + 1, [], ring.one)
    return {k: c for k, c in out.items() if c}


def enveloping(A: GradedAlgebra, D: int, mode: str | None = None) -> EnvelopingAlgebra:
    """P_A up to degree D by generators-and-relations on operators.

    ``mode="graded"`` weights operators by internal degree (connected graded
    A); ``mode="filtered"`` weights them by the number of algebra inputs and
    keeps relations whose longer side has weight <= D.
    """
    original = A
    op = A.operad
    ring = A.ring
    if mode is None:
        positive = all(A.degrees[k] > 0 for k in range(A.rank) if k != A.unit)
        mode = "graded" if positive else "filtered"
    bar = [k for k in range(A.rank) if k != A.unit]
    if mode == "graded":
        maxlen = D // max(1, min((A.degrees[k] for k in bar), default=1))
        if A.truncated and D > A.max_degree:
            raise TruncationError("enveloping degree exceeds algebra truncation")
    else:
        maxlen = D
    if maxlen + 2 > op.max_arity:
        op = build_standard(op.name, ring, maxlen + 2, unital=op.unital) if op.name else op
        if op.max_arity < maxlen + 2:
            raise TruncationError("operad truncation too small for the enveloping algebra")
        A = _with_operad(A, op)

    def weight(inputs):
        return sum(A.degrees[a] for a in inputs) if mode == "graded" else len(inputs)

    space = []
    for i in range(0, maxlen + 1):
        for inputs in itertools.product(bar, repeat=i):
            if weight(inputs) > D:
                continue
            for mu in range(op.rank(i + 1)):
                space.append((mu, inputs))
    space.sort(key=lambda s: (weight(s[1]), len(s[1]), s[1], s[0]))
    index = {s: k for k, s in enumerate(space)}
    rels = []
    for (mu, inputs) in space:
        i = len(inputs)
        for k in range(2, i + 1):
            s = adjacent(i + 1, k)
            swapped = list(inputs)
            swapped[k - 2], swapped[k - 1] = swapped[k - 1], swapped[k - 2]
            rel = {index[(mu, tuple(swapped))]: ring.one}
            for nu, c in op.act_vec(s, {mu: ring.one}).items():
                axpy(ring, rel, -c, {index[(nu, inputs)]: ring.one})
            if rel:
                rels.append(rel)
    # composition relations: (mu o_p beta; .., c, d, ..) = (mu; .., beta(c, d), ..)
    for L in range(2, maxlen + 1):             # number of inputs on the long side
        for others in itertools.product(bar, repeat=L - 2):
            for c_, d_ in itertools.product(bar, repeat=2):
                for pos in range(L - 1):       # beta occupies algebra input pos (0-based)
                    inputs = others[:pos] + (c_, d_) + others[pos:]
                    if weight(inputs) > D:
                        continue
                    for beta in range(op.rank(2)):
                        try:
                            prod = A.mul(beta, A.e(c_), A.e(d_))
                        except Unknown:
                            continue
                        ins = [A.e(a) for a in others[:pos]] + [prod] + \
                              [A.e(a) for a in others[pos:]]
                        for mu in range(op.rank(L)):
                            long_vec = op.compose_vec(L, pos + 2, 2, {mu: ring.one},
                                                      {beta: ring.one})
                            rel = {}
                            for nu, c in long_vec.items():
                                axpy(ring, rel, c, {index[(nu, inputs)]: ring.one})
                            for key, c in normalize_operator(A, L - 1, {mu: ring.one}, ins).items():
                                if key not in index:
                                    raise TruncationError("relation leaves the window")
                                axpy(ring, rel, -c, {index[key]: ring.one})
                            if rel:
                                rels.append(rel)
    q = quotient_by_relations(BasedModule(ring, tuple(space)), rels)
    if q.representatives:
        weights = [weight(space[s][1]) for s in q.representatives]
    else:
        weights = [0] * q.module.rank
    P = EnvelopingAlgebra(A, mode, D, space, index, q, rels, weights)
    P.original = original
    return P


def _with_operad(A: GradedAlgebra, op) -> GradedAlgebra:
    B = GradedAlgebra(op, A.labels, A.degrees, A.tables, unit=A.unit, augmented=A.augmented,
                      max_degree=A.max_degree, truncated=A.truncated, parts=A.parts,
                      part_max=A.part_max, part_truncated=A.part_truncated,
                      square_zero=A.square_zero, names=A.names)
    for attr in ("gen_names", "gen_index", "lie"):
        if hasattr(A, attr):
            setattr(B, attr, getattr(A, attr))
    return B


def tensor_opposite_oracle(A: GradedAlgebra):
    """Structure constants of A^op (x) A on pairs (a, b): (a,b)(c,d) = (ca, bd)."""
    ring = A.ring
    basis = [(a, b) for a in range(A.rank) for b in range(A.rank)]
    idx = {p: k for k, p in enumerate(basis)}
    table = {}
    for (a, b) in basis:
        for (c, d) in basis:
            try:
                ca = A.product_vec(A.e(c), A.e(a))
                bd = A.product_vec(A.e(b), A.e(d))
            except Unknown:
                continue
            out: dict = {}
            for x, s in ca.items():
                for y, t in bd.items():
                    axpy(ring, out, s * t, {idx[(x, y)]: ring.one})
            table[(idx[(a, b)], idx[(c, d)])] = out
    return basis, table


def compare_with_tensor_oracle(P: EnvelopingAlgebra) -> CheckReport:
    """Map a (x) b to the operator m -> a m b and compare with A^op (x) A."""
    A = P.algebra
    if A.operad.name != "ass" or A.unit is None:
        raise OperadKindError("oracle needs a unital associative algebra")
    ring = A.ring
    basis, table = tensor_opposite_oracle(A)
    word = A.operad.spaces[3].index((2, 1, 3))
    images = []
    for (a, b) in basis:
        vec = normalize_operator(A, 2, {word: ring.one}, [A.e(a), A.e(b)])
        images.append(P.project_space(vec))
    rep = CheckReport("enveloping vs tensor oracle",
                      details={"rank P": P.rank, "rank oracle": len(basis)})
    rep.record("rank", P.rank == len(basis))
    n = len(basis)
    rep.record("bijective", rank_rows(ring, images) == n == P.rank)
    ok = True
    for (s, t), v in table.items():
        lhs = P.mul(images[s], images[t])
        rhs: dict = {}
        for k, c in v.items():
            axpy(ring, rhs, c, images[k])
        if vclean(ring, lhs) != vclean(ring, rhs):
            ok = False
            rep.witness("multiplicative", (basis[s], basis[t]))
    rep.record("multiplicative", ok)
    rep.record("unit", images[basis.index((A.unit, A.unit))] == P.unit_vec())
    return rep


def hom_from_P_check(P: EnvelopingAlgebra, M: AModule) -> CheckReport:
    """Hom_P(P, M) = M through f -> f(1) and m -> (p -> m . p)."""
    ring = P.ring
    rep = CheckReport("Hom(P_A, M) = M", details={"rank M": M.rank})
    # relations act by zero, so the action is well defined
    ok = True
    nA = P.algebra.rank
    E = P.extension(M)
    for rel in P.relations:
        for m in range(M.rank):
            val: dict = {}
            for s, c in rel.items():
                mu, a = P.space[s]
                try:
                    v = operator_on(E, mu, a, {nA + m: ring.one})
                except Unknown:
                    val = None
                    break
                axpy(ring, val, c, v)
            if val:
                ok = False
                rep.witness("relations act by zero", (rel, M.names[m]))
    rep.record("relations act by zero", ok)
    e = lambda k: {k: ring.one}  # noqa: E731
    ok = True
    for m in range(M.rank):
        for p in range(P.rank):
            for q in range(P.rank):
                try:
                    pq = P.mul(e(p), e(q))
                    lhs = P.right_action_on(M, pq, e(m))
                    rhs = P.right_action_on(M, e(q), P.right_action_on(M, e(p), e(m)))
                except Unknown:
                    continue
                if lhs != rhs:
                    ok = False
                    rep.witness("m -> (p -> m.p) is a module map", (M.names[m], p, q))
    rep.record("m -> (p -> m.p) is a module map", ok)
    rep.record("f(1) recovers m", all(P.right_action_on(M, P.unit_vec(), e(m)) == e(m)
                                      for m in range(M.rank)))
    # rank of Hom_P(P, M): unknown f(p) in M, f(p q) = f(p) . q
    var = {(p, m): p * M.rank + m for p in range(P.rank) for m in range(M.rank)}
    rows = []
    for p in range(P.rank):
        for q in range(P.rank):
            try:
                pq = P.mul(e(p), e(q))
            except Unknown:
                continue
            eq: dict = {}
            for n in range(M.rank):
                for r, c in pq.items():
                    eq.setdefault(n, {})
                    axpy(ring, eq[n], c, {var[(r, n)]: ring.one})
            for m in range(M.rank):
                for n, c in P.right_action_on(M, e(q), e(m)).items():
                    eq.setdefault(n, {})
                    axpy(ring, eq[n], -c, {var[(p, m)]: ring.one})
            rows.extend(v for v in eq.values() if v)
    dim = len(var) - rank_rows(ring, rows)
    rep.details["rank Hom"] = dim
    rep.record("rank Hom = rank M", dim == M.rank)
    return rep


# -- free modules ------------------------------------------------------------------

def free_module(A: GradedAlgebra, U: BasedModule | int, D: int, P: EnvelopingAlgebra | None = None,
                u_degrees=None) -> AModule:
    """F(U) = P_A (x) U with A acting through P_A (graded mode)."""
    ring = A.ring
    if isinstance(U, int):
        U = BasedModule(ring, tuple(f"u{k + 1}" for k in range(U)))
    P = P or enveloping(A, D)
    if P.mode != "graded":
        raise SetupError("free modules need a graded enveloping algebra")
    u_degrees = list(u_degrees or [0] * U.rank)
    labels, degrees, names = [], [], []
    pos = {}
    for p in range(P.rank):
        for u in range(U.rank):
            d = P.weights[p] + u_degrees[u]
            if d > D:
                continue
            pos[(p, u)] = len(labels)
            labels.append((p, u))
            degrees.append(d)
            names.append(f"{_p_name(P, p)}|{U.basis_labels[u]}")
    op = P.algebra.operad
    tables = {}
    for b in range(A.operad.rank(2)):
        for slot in (1, 2):
            # slot 1: b(m, a) = (b; a); slot 2: b(a, m) = ((21).b; a)
            mu = {b: ring.one} if slot == 1 else op.act_vec((2, 1), {b: ring.one})
            tab = {}
            for a in range(A.rank):
                opvec: dict = {}
                for k, c in mu.items():
                    for key, x in normalize_operator(P.algebra, 1, {k: ring.one}, [A.e(a)]).items():
                        axpy(ring, opvec, c * x, {key: ring.one})
                if not all(key in P._index for key in opvec):
                    continue
                pa = P.project_space(opvec)
                for (p, u), m in pos.items():
                    try:
                        prod = P.mul({p: ring.one}, pa)
                    except Unknown:
                        continue
                    out = {}
                    for r, c in prod.items():
                        if (r, u) in pos:
                            out[pos[(r, u)]] = c
                    if out:
                        tab[(a, m)] = out
            tables[(b, slot)] = tab
    return AModule(A, labels, degrees, tables, max_degree=D, truncated=True, names=names,
                   name="F(U)")


def _p_name(P, p):
    if not P.quotient.representatives:
        return f"p{p}"
    mu, inputs = P.labels[p]
    return f"{mu}:" + ",".join(P.algebra.names[a] for a in inputs)


# -- the representing module I_A --------------------------------------------------------

@dataclass
class IdealModel:
    module: AModule
    universal: dict        # basis index of A -> vector in module (the derivation d)
    kind: str


def ideal_IA(A: GradedAlgebra, D: int | None = None) -> IdealModel:
    """The module representing derivations out of A, in the concrete models
    ker(A (x) A -> A), I/I^2 and U(g)_+ for ass, com and lie."""
    name = A.operad.name
    if name == "ass" and A.unit is not None:
        return _ideal_ass(A, D)
    if name == "com" and A.unit is not None:
        return _ideal_com(A, D)
    if name == "lie":
        return _ideal_lie(A, D)
    raise OperadKindError(f"no model of I_A for operad {name} (unital={A.unit is not None})")


def _tensor_basis(A, D):
    pairs = [(a, b) for a in range(A.rank) for b in range(A.rank)
             if not A.truncated or A.degrees[a] + A.degrees[b] <= D]
    return pairs


def _ideal_ass(A, D):
    ring = A.ring
    D = A.max_degree if D is None else D
    u = A.unit
    labels = [(a, b) for (a, b) in _tensor_basis(A, D) if b != u]
    pos = {l: k for k, l in enumerate(labels)}
    degrees = [A.degrees[a] + A.degrees[b] for a, b in labels]

    def coords(tvec):
        """Coordinates of a kernel element given on a (x) b: read b != 1 terms."""
        return {pos[(a, b)]: c for (a, b), c in tvec.items() if b != u and c}

    def basis_tensor(k):
        a, b = labels[k]
        out = {(a, b): ring.one}
        for z, c in A.product_vec(A.e(a), A.e(b)).items():
            out[(z, u)] = ring.norm(out.get((z, u), 0) - c)
        return {k2: v for k2, v in out.items() if v}

    left, right = {}, {}
    for c in range(A.rank):
        for k in range(len(labels)):
            t = basis_tensor(k)
            lv: dict = {}
            rv: dict = {}
            ok_l = ok_r = True
            for (a, b), x in t.items():
                try:
                    for z, y in A.product_vec(A.e(c), A.e(a)).items():
                        lv[(z, b)] = ring.norm(lv.get((z, b), 0) + x * y)
                except Unknown:
                    ok_l = False
                try:
                    for z, y in A.product_vec(A.e(b), A.e(c)).items():
                        rv[(a, z)] = ring.norm(rv.get((a, z), 0) + x * y)
                except Unknown:
                    ok_r = False
            if ok_l and all(A.degrees[a] + A.degrees[b] <= D or not A.truncated for (a, b) in lv):
                v = coords(lv)
                if v:
                    left[(c, k)] = v
            if ok_r and all(A.degrees[a] + A.degrees[b] <= D or not A.truncated for (a, b) in rv):
                v = coords(rv)
                if v:
                    right[(c, k)] = v
    names = [f"{A.names[a]}(x){A.names[b]}-{A.names[a]}{A.names[b]}(x)1" for a, b in labels]
    M = module_from_actions(A, names, degrees, left=left, right=right)
    M.labels = tuple(labels)
    M.max_degree, M.truncated = D, A.truncated
    # universal derivation d(a) = a (x) 1 - 1 (x) a = -(1 (x) a - a (x) 1)
    universal = {}
    for a in range(A.rank):
        if a == u:
            universal[a] = {}
        elif (u, a) in pos:
            universal[a] = {pos[(u, a)]: -ring.one}
    return IdealModel(M, universal, "ker(A(x)A->A)")


def _ideal_com(A, D):
    """I/I^2 for commutative unital A, truncated at total degree D."""
    ring = A.ring
    D = A.max_degree if D is None else D
    u = A.unit
    tb = _tensor_basis(A, D)
    tidx = {p: k for k, p in enumerate(tb)}
    # I spanned by a (x) b - ab (x) 1, b != 1
    gens = []
    for (a, b) in tb:
        if b == u:
            continue
        v = {tidx[(a, b)]: ring.one}
        for z, c in A.product_vec(A.e(a), A.e(b)).items():
            axpy(ring, v, -c, {tidx[(z, u)]: ring.one})
        gens.append(v)

    def tmul(x, y):
        out: dict = {}
        for p, s in x.items():
            a, b = tb[p]
            for q, t in y.items():
                c, d = tb[q]
                if A.truncated and (A.degrees[a] + A.degrees[b] + A.degrees[c] + A.degrees[d] > D):
                    continue
                for z1, s1 in A.product_vec(A.e(a), A.e(c)).items():
                    for z2, s2 in A.product_vec(A.e(b), A.e(d)).items():
                        axpy(ring, out, s * t * s1 * s2, {tidx[(z1, z2)]: ring.one})
        return out

    sq = [tmul(x, y) for x in gens for y in gens]
    sq = [v for v in sq if v]
    # quotient of I by I^2: coordinates in I first (gens are independent)
    gdeg = [A.degrees[a] + A.degrees[b] for (a, b) in tb if b != u]
    # express I^2 elements in the gens basis: leading a (x) b with b != 1
    glabels = [(a, b) for (a, b) in tb if b != u]
    gpos = {l: k for k, l in enumerate(glabels)}

    def in_gens(v):
        return {gpos[tb[p]]: c for p, c in v.items() if tb[p][1] != u and c}

    q = quotient_by_relations(BasedModule(ring, tuple(glabels)), [in_gens(v) for v in sq])
    labels = list(q.module.basis_labels)
    degrees = [gdeg[gpos[l]] for l in labels] if q.representatives else [0] * len(labels)
    left = {}
    for c in range(A.rank):
        for k in range(q.module.rank):
            g = gens[q.representatives[k]]
            # (c (x) 1) . g
            prod: dict = {}
            ok = True
            for p, s in g.items():
                a, b = tb[p]
                if A.truncated and A.degrees[c] + A.degrees[a] + A.degrees[b] > D:
                    ok = False
                    break
                for z, t in A.product_vec(A.e(c), A.e(a)).items():
                    axpy(ring, prod, s * t, {tidx[(z, b)]: ring.one})
            if not ok:
                continue
            v = q.project(in_gens(prod))
            if v:
                left[(c, k)] = v
    names = [f"d({A.names[b]})*{A.names[a]}" if a != u else f"d({A.names[b]})" for a, b in labels]
    M = module_from_actions(A, names, degrees, left=left)
    M.labels = tuple(labels)
    M.max_degree, M.truncated = D, A.truncated
    universal = {}
    for a in range(A.rank):
        if a == u:
            universal[a] = {}
            continue
        # d(a) = 1 (x) a - a (x) 1 (sign convention: class of gens[(u, a)])
        universal[a] = q.project({gpos[(u, a)]: ring.one}) if (u, a) in gpos else {}
    return IdealModel(M, universal, "I/I^2")


def _ideal_lie(A, D):
    """U(g)_+ with left multiplication, via PBW normal forms."""
    from .pbw import RewritingSystem
    g = A.lie
    D = 2 if D is None else D
    rs = RewritingSystem(g, D)
    monos = [m for m in rs.monomials() if 1 <= len(m) <= D]
    pos = {m: k for k, m in enumerate(monos)}
    ring = A.ring
    bracket = {}
    for x in range(g.rank):
        for k, m in enumerate(monos):
            if len(m) + 1 > D:
                continue
            nf = rs.normal_form({(x,) + m: ring.one})
            v = {pos[w]: c for w, c in nf.items() if w}
            if v:
                bracket[(x, k)] = v
    names = ["*".join(g.names[a] for a in m) for m in monos]
    M = module_from_actions(A, names, [0] * len(monos), bracket=bracket)
    M.max_degree, M.truncated = 0, False
    M.filtration = [len(m) for m in monos]
    M.filtration_bound = D
    universal = {x: {pos[(x,)]: ring.one} for x in range(g.rank)}
    return IdealModel(M, universal, "U(g)_+")


def lie_module_homs_filtered(I: IdealModel, M: AModule) -> list[dict]:
    """Module maps U(g)_+ -> M on the filtration-truncated model.

    Equations f(x . u) = x . f(u) are imposed for u of filtration < bound.
    """
    src = I.module
    ring = src.ring
    A = src.algebra
    var = {(m, n): m * M.rank + n for m in range(src.rank) for n in range(M.rank)}
    rows = []
    for x in range(A.rank):
        for m in range(src.rank):
            if src.filtration[m] + 1 > src.filtration_bound:
                continue
            eq: dict = {}
            for k, c in src.action(0, 2, x, m).items():
                for n in range(M.rank):
                    eq.setdefault(n, {})
                    axpy(ring, eq[n], c, {var[(k, n)]: ring.one})
            for n in range(M.rank):
                for k, c in M.action(0, 2, x, n).items():
                    eq.setdefault(k, {})
                    axpy(ring, eq[k], -c, {var[(m, n)]: ring.one})
            rows.extend(r for r in eq.values() if r)
    ker = kernel_rows(ring, rows, len(var))
    out = []
    for vec in ker:
        f: dict = {}
        for v, c in vec.items():
            m, n = divmod(v, M.rank)
            f.setdefault(m, {})[n] = c
        out.append(f)
    return out


__all__ = [
    "AModule", "square_zero_extension", "extension_projection", "check_module",
    "regular_module", "adjoint_module", "augmentation_ideal", "trivial_module", "shift",
    "restrict_module", "module_from_actions", "derivations", "is_derivation",
    "DerivationSpace", "squarezero_representability_check", "module_homs",
    "EnvelopingAlgebra", "enveloping", "compare_with_tensor_oracle", "hom_from_P_check",
    "tensor_opposite_oracle", "free_module", "ideal_IA", "IdealModel",
]
