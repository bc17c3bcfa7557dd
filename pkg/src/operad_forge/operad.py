"""Finite-arity symmetric operads stored as explicit tables.

Conventions
-----------
Arity-n operations act on inputs ``x_1 .. x_n``.  A permutation ``tau``
(tuple of images, 1-based) acts on the left by relabelling inputs::

    (tau . mu)(x_1, .., x_n) = mu(x_tau(1), .., x_tau(n))

and ``f o_i g`` plugs ``g`` into input ``i`` of ``f``.  The associative
operad has one basis element per word ``w`` (a permutation of 1..n),
meaning ``x_w1 x_w2 .. x_wn``.  The Lie operad is the span of bracket
expansions inside it, with the left-normed basis
``[[..[x_1, x_s2], ..], x_sn]``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import ArityError, RingError, RingMapError
from .linalg import (BasedModule, ExactMatrix, GroundRing, QQ, _Echelon, axpy,
                     solve_rows, vclean, vscale)
from .report import CheckReport


@dataclass(frozen=True)
class OperadElement:
    arity: int
    coords: dict = field(default_factory=dict, compare=False, hash=False)

    def __eq__(self, other):
        return (isinstance(other, OperadElement) and self.arity == other.arity
                and self.coords == other.coords)

    def __hash__(self):
        return hash((self.arity, frozenset(self.coords.items())))


def adjacent(n: int, k: int) -> tuple:
    """The transposition (k k+1) in S_n as an image tuple."""
    p = list(range(1, n + 1))
    p[k - 1], p[k] = p[k], p[k - 1]
    return tuple(p)


def compose_perm(s, t):
    """(s o t)(x) = s(t(x))."""
    return tuple(s[x - 1] for x in t)


def perm_inverse(p):
    out = [0] * len(p)
    for i, x in enumerate(p, 1):
        out[x - 1] = i
    return tuple(out)


def perm_sign(p) -> int:
    sign = 1
    seen = [False] * len(p)
    for i in range(len(p)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = p[j] - 1
                length += 1
            if length % 2 == 0:
                sign = -sign
    return sign


def block_perm_inner(m: int, i: int, n: int, sigma) -> tuple:
    """Permutation of 1..m+n-1 acting as sigma on the block plugged at slot i."""
    out = list(range(1, m + n))
    for k in range(n):
        out[i - 1 + k] = i - 1 + sigma[k]
    return tuple(out)


def block_perm_outer(m: int, i: int, n: int, tau) -> tuple:
    """tau~ with (tau . f) o_i g == tau~ . (f o_{tau^-1(i)} g)."""
    def varlist(j):
        if j < i:
            return [j]
        if j == i:
            return list(range(i, i + n))
        return [j + n - 1]
    out = []
    for k in range(m):
        out.extend(varlist(tau[k]))
    return tuple(out)


class FinOperad:
    """Truncation of a symmetric operad to arities 1..max_arity.

    ``compositions[(m, i, n)]`` maps a pair of basis indices ``(a, b)`` of
    ``O(m)`` and ``O(n)`` to the sparse vector ``e_a o_i e_b`` in
    ``O(m+n-1)``.  ``sym_actions[n]`` lists the matrices of the adjacent
    transpositions ``(k k+1)``, k = 1..n-1.
    """

    def __init__(self, ring: GroundRing, max_arity: int, spaces: dict, sym_actions: dict,
                 unit: dict, compositions: dict, name: str | None = None, unital: bool = False,
                 decompositions: dict | None = None):
        if max_arity < 1:
            raise ArityError("max_arity must be >= 1")
        self.ring = ring
        self.max_arity = max_arity
        self.spaces = spaces
        self.sym_actions = sym_actions
        self.unit = vclean(ring, unit)
        self.compositions = {k: {ab: vclean(ring, v) for ab, v in tab.items()}
                             for k, tab in compositions.items()}
        self.name = name
        self.unital = unital
        self._decomp = dict(decompositions or {})
        self._act_cache: dict = {}

    def __repr__(self):
        return f"FinOperad({self.name or 'custom'}, {self.ring}, N={self.max_arity})"

    def rank(self, n: int) -> int:
        return self.spaces[n].rank

    def ranks(self) -> list[int]:
        return [self.rank(n) for n in range(1, self.max_arity + 1)]

    def basis(self, n: int, k: int) -> OperadElement:
        return OperadElement(n, {k: self.ring.one})

    # -- composition ----------------------------------------------------------

    def compose_vec(self, m: int, i: int, n: int, f: dict, g: dict) -> dict:
        if not 1 <= i <= m:
            raise ArityError(f"slot {i} outside arity {m}")
        if m + n - 1 > self.max_arity:
            raise ArityError(f"arity {m + n - 1} exceeds truncation {self.max_arity}")
        tab = self.compositions[(m, i, n)]
        out: dict = {}
        for a, x in f.items():
            for b, y in g.items():
                v = tab.get((a, b))
                if v:
                    axpy(self.ring, out, x * y, v)
        return out

    def partial_compose(self, f: OperadElement, i: int, g: OperadElement) -> OperadElement:
        return OperadElement(f.arity + g.arity - 1,
                             self.compose_vec(f.arity, i, g.arity, f.coords, g.coords))

    # -- symmetric group ----------------------------------------------------

    def act_vec(self, perm, vec: dict) -> dict:
        """Left action of a permutation on a vector of O(len(perm))."""
        n = len(perm)
        perm = tuple(perm)
        for k in range(n - 1):
            if perm[k] > perm[k + 1]:
                # perm = perm' o s_k with fewer inversions
                s = adjacent(n, k + 1)
                rest = compose_perm(perm, s)
                return self.act_vec(rest, self._act_adjacent(n, k + 1, vec))
        return dict(vec)

    def _act_adjacent(self, n, k, vec):
        mat = self.sym_actions[n][k - 1]
        return mat.apply(vec)

    def act(self, perm, f: OperadElement) -> OperadElement:
        if len(perm) != f.arity:
            raise ArityError("permutation size differs from arity")
        return OperadElement(f.arity, self.act_vec(perm, f.coords))

    # -- decomposition into binary operations ------------------------------

    def decomposition(self, n: int) -> dict:
        """Express each basis element of O(n) through arity-2 operations.

        Returns ``{k: [(c, tau, b, f), ...]}`` meaning
        ``e_k = sum c * tau . (e_b o_1 e_f)`` with ``b`` in O(2), ``f`` in O(n-1).
        """
        if n in self._decomp:
            return self._decomp[n]
        if n < 2:
            raise ArityError("no decomposition below arity 2")
        dim = self.rank(n)
        field_ring = self.ring.fraction_field()
        ech = _Echelon(field_ring)
        cols = []
        vecs = []
        for tau in itertools.permutations(range(1, n + 1)):
            for b in range(self.rank(2)):
                for f in range(self.rank(n - 1)):
                    v = self.act_vec(tau, self.compose_vec(2, 1, n - 1, {b: 1}, {f: 1}))
                    if ech.add({k: field_ring(x) for k, x in v.items()}) is not None:
                        cols.append((tau, b, f))
                        vecs.append(v)
                    if ech.rank == dim:
                        break
                if ech.rank == dim:
                    break
            if ech.rank == dim:
                break
        if ech.rank < dim:
            raise ArityError(f"O({n}) is not generated by arity-2 operations")
        rows = [dict() for _ in range(dim)]
        for j, v in enumerate(vecs):
            for k, x in v.items():
                rows[k][j] = x
        out = {}
        for k in range(dim):
            sol = solve_rows(self.ring, rows, [1 if r == k else 0 for r in range(dim)], len(vecs))
            if sol is None:
                raise RingError(f"basis element {k} of O({n}) has no integral decomposition")
            out[k] = [(c, cols[j][0], cols[j][1], cols[j][2]) for j, c in sorted(sol.items())]
        self._decomp[n] = out
        return out

    # -- base change ----------------------------------------------------------

    def base_change(self, target: GroundRing) -> "FinOperad":
        if not self.ring.has_map_to(target):
            raise RingMapError(f"no canonical map {self.ring} -> {target}")
        conv = lambda v: {k: target(x) for k, x in v.items()}  # noqa: E731
        spaces = {n: BasedModule(target, s.basis_labels) for n, s in self.spaces.items()}
        acts = {n: [m.change_ring(target) for m in ms] for n, ms in self.sym_actions.items()}
        comps = {key: {ab: conv(v) for ab, v in tab.items()} for key, tab in self.compositions.items()}
        op = FinOperad(target, self.max_arity, spaces, acts, conv(self.unit), comps,
                       name=self.name, unital=self.unital)
        if self.name is not None:
            op._embed = getattr(self, "_embed", None)
        return op

    def with_composition_entry(self, key, ab, vec) -> "FinOperad":
        """Copy with one composition table entry replaced (for failure tests)."""
        comps = {k: dict(t) for k, t in self.compositions.items()}
        comps[key][ab] = vec
        return FinOperad(self.ring, self.max_arity, self.spaces, self.sym_actions, self.unit,
                         comps, name=None, unital=self.unital)


# -- axiom checks --------------------------------------------------------------

def check_axioms(op: FinOperad, max_arity: int | None = None) -> CheckReport:
    """Exhaustive unit, associativity and equivariance check on basis elements."""
    N = min(max_arity or op.max_arity, op.max_arity)
    rep = CheckReport("operad axioms", details={"max_arity": N, "ring": str(op.ring)})
    ring = op.ring
    e = lambda k: {k: ring.one}  # noqa: E731

    ok = True
    for n in range(1, N + 1):
        for k in range(op.rank(n)):
            left = op.compose_vec(1, 1, n, op.unit, e(k))
            if left != e(k):
                ok = False
                rep.witness("unit", ("1 o_1 f", n, k))
            for i in range(1, n + 1):
                if op.compose_vec(n, i, 1, e(k), op.unit) != e(k):
                    ok = False
                    rep.witness("unit", ("f o_i 1", n, k, i))
    rep.record("unit", ok)

    ok = True
    for l in range(1, N + 1):
        for m in range(1, N + 2 - l):
            for n in range(1, N + 3 - l - m):
                if l + m + n - 2 > N:
                    continue
                for f in range(op.rank(l)):
                    for g in range(op.rank(m)):
                        for h in range(op.rank(n)):
                            w = _assoc_triple(op, l, m, n, e(f), e(g), e(h))
                            if w is not None:
                                ok = False
                                rep.witness("associativity", ((l, f), (m, g), (n, h)) + w)
    rep.record("associativity", ok)

    ok = True
    for m in range(1, N + 1):
        for n in range(1, N + 2 - m):
            for f in range(op.rank(m)):
                for g in range(op.rank(n)):
                    for i in range(1, m + 1):
                        fg = op.compose_vec(m, i, n, e(f), e(g))
                        for k in range(1, n):
                            s = adjacent(n, k)
                            lhs = op.compose_vec(m, i, n, e(f), op.act_vec(s, e(g)))
                            rhs = op.act_vec(block_perm_inner(m, i, n, s), fg)
                            if lhs != rhs:
                                ok = False
                                rep.witness("equivariance", ("inner", (m, f), i, (n, g), k))
                        for k in range(1, m):
                            t = adjacent(m, k)
                            lhs = op.compose_vec(m, i, n, op.act_vec(t, e(f)), e(g))
                            j = perm_inverse(t)[i - 1]
                            rhs = op.act_vec(block_perm_outer(m, i, n, t),
                                             op.compose_vec(m, j, n, e(f), e(g)))
                            if lhs != rhs:
                                ok = False
                                rep.witness("equivariance", ("outer", (m, f), i, (n, g), k))
    rep.record("equivariance", ok)
    return rep


def _assoc_triple(op, l, m, n, f, g, h):
    for i in range(1, l + 1):
        fg = op.compose_vec(l, i, m, f, g)
        for j in range(1, m + 1):
            lhs = op.compose_vec(l + m - 1, i + j - 1, n, fg, h)
            rhs = op.compose_vec(l, i, m + n - 1, f, op.compose_vec(m, j, n, g, h))
            if lhs != rhs:
                return ("sequential", i, j)
        for k in range(1, l + 1):
            if k == i:
                continue
            fh = op.compose_vec(l, k, n, f, h)
            if k < i:
                lhs = op.compose_vec(l + m - 1, k, n, fg, h)
                rhs = op.compose_vec(l + n - 1, i + n - 1, m, fh, g)
            else:
                lhs = op.compose_vec(l + m - 1, k + m - 1, n, fg, h)
                rhs = op.compose_vec(l + n - 1, i, m, fh, g)
            if lhs != rhs:
                return ("parallel", i, k)
    return None


# -- built-in operads -----------------------------------------------------------

@lru_cache(maxsize=None)
def _words(n: int) -> tuple:
    return tuple(itertools.permutations(range(1, n + 1)))


@lru_cache(maxsize=None)
def _word_index(n: int) -> dict:
    return {w: k for k, w in enumerate(_words(n))}


def substitute_word(w, i, u):
    """The word of (x_w) o_i (x_u)."""
    n = len(u)
    out = []
    for x in w:
        if x < i:
            out.append(x)
        elif x == i:
            out.extend(y + i - 1 for y in u)
        else:
            out.append(x + n - 1)
    return tuple(out)


def delete_letter(w, k):
    """Insert the unit at input k of the word operation x_w."""
    return tuple(x if x < k else x - 1 for x in w if x != k)


def lie_expand(tree) -> dict:
    """Expansion of a bracket tree (ints are inputs) into words."""
    if isinstance(tree, int):
        return {(tree,): 1}
    a, b = (lie_expand(t) for t in tree)
    out: dict = {}
    for u, x in a.items():
        for v, y in b.items():
            for w, c in ((u + v, x * y), (v + u, -x * y)):
                z = out.get(w, 0) + c
                if z:
                    out[w] = z
                else:
                    out.pop(w, None)
    return out


@lru_cache(maxsize=None)
def _lie_labels(n: int) -> tuple:
    if n == 1:
        return ((1,),)
    return tuple((1,) + p for p in itertools.permutations(range(2, n + 1)))


def left_normed(seq):
    tree = seq[0]
    for x in seq[1:]:
        tree = (tree, x)
    return tree


@lru_cache(maxsize=None)
def _lie_embedding(n: int) -> tuple:
    """Word expansions (word -> int coefficient) of the left-normed basis."""
    return tuple(lie_expand(left_normed(lab)) for lab in _lie_labels(n))


def _lie_project(n: int, word_vec: dict, ring: GroundRing) -> dict:
    """Coordinates in the left-normed basis of a Lie element given in words."""
    labels = _lie_labels(n)
    coords = {k: ring(word_vec[lab]) for k, lab in enumerate(labels) if word_vec.get(lab)}
    back: dict = {}
    emb = _lie_embedding(n)
    for k, c in coords.items():
        axpy(ring, back, c, {w: ring(x) for w, x in emb[k].items()})
    target = {w: ring(x) for w, x in word_vec.items() if ring.norm(ring(x))}
    target = {w: x for w, x in target.items() if x}
    if back != target:
        raise RingError(f"element of ass({n}) is not in the span of Lie brackets")
    return coords


def _ass_compose(w, i, u):
    return substitute_word(w, i, u)


def build_standard(name: str, ring: GroundRing = QQ, max_arity: int = 5,
                   unital: bool | None = None) -> FinOperad:
    """Built-in ``com``, ``ass`` or ``lie`` operad truncated at ``max_arity``.

    ``name`` may carry a ``-unital`` suffix; the flag is only metadata for
    algebras (Lie has no unital variant).
    """
    if max_arity < 1:
        raise ArityError("max_arity must be >= 1")
    base = name.lower()
    if base.endswith("-unital") or base.endswith("_unital"):
        base = base[:-7]
        unital = True
    if unital is None:
        unital = False
    if base == "lie" and unital:
        raise RingError("the Lie operad has no unital variant")
    N = max_arity
    if base == "com":
        spaces = {n: BasedModule(ring, (("com", n),)) for n in range(1, N + 1)}
        acts = {n: [ExactMatrix.identity(ring, 1) for _ in range(n - 1)] for n in range(1, N + 1)}
        comps = {(m, i, n): {(0, 0): {0: 1}}
                 for m in range(1, N + 1) for n in range(1, N + 2 - m) for i in range(1, m + 1)}
        decomp = {n: {0: [(ring.one, tuple(range(1, n + 1)), 0, 0)]} for n in range(2, N + 1)}
        op = FinOperad(ring, N, spaces, acts, {0: 1}, comps, "com", unital, decomp)
    elif base == "ass":
        spaces = {n: BasedModule(ring, _words(n)) for n in range(1, N + 1)}
        acts = {}
        for n in range(1, N + 1):
            idx = _word_index(n)
            mats = []
            for k in range(1, n):
                s = adjacent(n, k)
                ent = {(idx[tuple(s[x - 1] for x in w)], j): 1 for j, w in enumerate(_words(n))}
                mats.append(ExactMatrix(ring, len(idx), len(idx), ent))
            acts[n] = mats
        comps = {}
        for m in range(1, N + 1):
            for n in range(1, N + 2 - m):
                out_idx = _word_index(m + n - 1)
                for i in range(1, m + 1):
                    comps[(m, i, n)] = {(a, b): {out_idx[_ass_compose(w, i, u)]: 1}
                                        for a, w in enumerate(_words(m))
                                        for b, u in enumerate(_words(n))}
        decomp = {}
        for n in range(2, N + 1):
            ident = _word_index(n - 1)[tuple(range(1, n))]
            # x_w = w . (x_1 .. x_n) and x_1..x_n = (x_1 x_2) o_1 (x_1..x_{n-1})
            decomp[n] = {k: [(ring.one, w, 0, ident)] for k, w in enumerate(_words(n))}
        op = FinOperad(ring, N, spaces, acts, {0: 1}, comps, "ass", unital, decomp)
    elif base == "lie":
        spaces = {n: BasedModule(ring, _lie_labels(n)) for n in range(1, N + 1)}
        emb = {n: [{w: ring(c) for w, c in e.items()} for e in _lie_embedding(n)]
               for n in range(1, N + 1)}
        acts = {}
        for n in range(1, N + 1):
            mats = []
            for k in range(1, n):
                s = adjacent(n, k)
                cols = []
                for vec in emb[n]:
                    moved = {tuple(s[x - 1] for x in w): c for w, c in vec.items()}
                    cols.append(_lie_project(n, moved, ring))
                mats.append(ExactMatrix.from_columns(ring, cols, len(emb[n])))
            acts[n] = mats
        comps = {}
        for m in range(1, N + 1):
            for n in range(1, N + 2 - m):
                for i in range(1, m + 1):
                    tab = {}
                    for a, va in enumerate(emb[m]):
                        for b, vb in enumerate(emb[n]):
                            words: dict = {}
                            for w, x in va.items():
                                for u, y in vb.items():
                                    key = _ass_compose(w, i, u)
                                    words[key] = ring.norm(words.get(key, 0) + x * y)
                            tab[(a, b)] = _lie_project(m + n - 1, words, ring)
                    comps[(m, i, n)] = tab
        decomp = {}
        for n in range(2, N + 1):
            ident = 0   # left-normed [[x1,x2],..,x_{n-1}] is label (1,2,..,n-1) = index 0
            # [[.., x_s2], .., x_sn] = tau . ([x1, x2] o_1 l_{n-1}) with tau = (1, s2, .., sn)
            decomp[n] = {k: [(ring.one, lab, 0, ident)] for k, lab in enumerate(_lie_labels(n))}
        op = FinOperad(ring, N, spaces, acts, {0: 1}, comps, "lie", False, decomp)
    else:
        raise RingError(f"unknown operad {name!r}")
    return op


def lie_to_words(op: FinOperad, n: int, vec: dict) -> dict:
    """Word expansion of a vector of the built-in Lie operad."""
    out: dict = {}
    for k, c in vec.items():
        axpy(op.ring, out, c, {w: op.ring(x) for w, x in _lie_embedding(n)[k].items()})
    return out


def unit_insert(op: FinOperad, n: int, vec: dict, k: int) -> dict:
    """Plug the unit of a unital algebra into input ``k`` of an arity-n vector.

    Only meaningful for the unital ``com`` and ``ass`` operads, where it
    deletes the input.
    """
    if op.name == "com":
        return dict(vec)
    if op.name == "ass":
        idx = _word_index(n - 1)
        out: dict = {}
        for a, c in vec.items():
            w = delete_letter(_words(n)[a], k)
            axpy(op.ring, out, c, {idx[w]: 1})
        return out
    raise RingError(f"operad {op.name} has no unit insertion")


def word_of(op: FinOperad, n: int, k: int):
    return op.spaces[n].basis_labels[k]


def scale(ring, c, vec):
    return vscale(ring, c, vec)


__all__ = [
    "FinOperad", "OperadElement", "build_standard", "check_axioms", "adjacent",
    "compose_perm", "perm_inverse", "perm_sign", "substitute_word", "unit_insert",
    "lie_expand", "left_normed", "lie_to_words",
]
