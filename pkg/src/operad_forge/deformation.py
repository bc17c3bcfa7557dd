"""Graded deformations of an augmented associative algebra, order by order.

A level-i tower stores corrections ``mu_1 .. mu_i``; ``mu_k`` lowers the
internal degree by ``k`` (deg t = 1) and the level-i algebra is
``A[t]/t^(i+1)`` with product ``sum_k t^k mu_k``.  Everything is stored on
basis pairs of total degree ``<= D``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .algebra import GradedAlgebra, LieAlgebraData, jacobiator, polynomial_algebra
from .amodule import augmentation_ideal, derivations
from .errors import AntisymmetryError, ChainError, SetupError
from .homology import _cochain_space, _columns, ext_by_cochains, hochschild_differential
from .linalg import axpy, kernel_rows, rank_rows, solve_rows, vclean
from .operad import perm_sign
from .report import CheckReport, format_vec


class DeformationTower:
    def __init__(self, base: GradedAlgebra, corrections: list, D: int, bracket=None):
        if base.operad.name != "ass" or base.unit is None or not base.augmented:
            raise SetupError("deformations need a unital augmented associative algebra")
        self.base = base
        self.ring = base.ring
        self.mus = [dict(m) for m in corrections]     # mus[k-1] = mu_k
        self.D = D
        self.bracket = bracket

    @property
    def level(self) -> int:
        return len(self.mus)

    def mu(self, k: int, u: dict, v: dict) -> dict:
        """mu_k on vectors (mu_0 is the base product)."""
        A = self.base
        if k == 0:
            return A.product_vec(u, v)
        tab = self.mus[k - 1]
        out: dict = {}
        for i, x in u.items():
            for j, y in v.items():
                w = tab.get((i, j))
                if w:
                    axpy(self.ring, out, x * y, w)
        return out

    def associator(self, n: int, a: int, b: int, c: int, skip_ends=False) -> dict:
        """sum_{p+q=n} mu_p(mu_q(a,b),c) - mu_p(a,mu_q(b,c)) (p, q >= 1 if skip_ends)."""
        A = self.base
        ring = self.ring
        out: dict = {}
        lo = 1 if skip_ends else 0
        for p in range(lo, n - lo + 1):
            q = n - p
            if p > self.level or q > self.level:
                continue
            axpy(ring, out, 1, self.mu(p, self.mu(q, A.e(a), A.e(b)), A.e(c)))
            axpy(ring, out, -1, self.mu(p, A.e(a), self.mu(q, A.e(b), A.e(c))))
        return out

    def triples(self):
        A = self.base
        idx = range(A.rank)
        for a in idx:
            for b in idx:
                if A.degrees[a] + A.degrees[b] > self.D:
                    continue
                for c in idx:
                    if A.degrees[a] + A.degrees[b] + A.degrees[c] <= self.D:
                        yield a, b, c

    def check_associativity(self) -> CheckReport:
        rep = CheckReport("tower associativity", details={"level": self.level, "D": self.D})
        for n in range(0, self.level + 1):
            ok = True
            for a, b, c in self.triples():
                if self.associator(n, a, b, c):
                    ok = False
                    rep.witness(f"order {n}", tuple(self.base.names[x] for x in (a, b, c)))
            rep.record(f"order {n}", ok)
        ok = True
        A = self.base
        for k, tab in enumerate(self.mus, 1):
            for (i, j), v in tab.items():
                if i == A.unit or j == A.unit:
                    ok = ok and not v
                for z in v:
                    if A.degrees[z] != A.degrees[i] + A.degrees[j] - k or A.degrees[z] == 0:
                        ok = False
        rep.record("degree and augmentation", ok)
        return rep

    def dump(self) -> list[str]:
        A = self.base
        lines = []
        for k, tab in enumerate(self.mus, 1):
            for (i, j) in sorted(tab):
                v = tab[(i, j)]
                if v:
                    lines.append(f"mu{k}({A.names[i]}, {A.names[j]}) = {format_vec(A.names, v)}")
        return lines


# -- level one ------------------------------------------------------------------------

def symmetric_base(g: LieAlgebraData, D: int) -> GradedAlgebra:
    return polynomial_algebra(g.ring, list(g.names), D, "ass")


def _first_order_nf(g, memo, w):
    """t-coefficient of the straightening of the word w (x_b x_a -> x_a x_b + t[x_b,x_a])."""
    hit = memo.get(w)
    if hit is not None:
        return hit
    ring = g.ring
    for i in range(len(w) - 1):
        if w[i] > w[i + 1]:
            b, a = w[i], w[i + 1]
            swapped = w[:i] + (a, b) + w[i + 2:]
            out = dict(_first_order_nf(g, memo, swapped))
            for k, c in g.brackets.get((b, a), {}).items():
                key = tuple(sorted(w[:i] + (k,) + w[i + 2:]))
                out[key] = ring.norm(out.get(key, 0) + c)
            res = {k: v for k, v in out.items() if v}
            break
    else:
        res = {}
    memo[w] = res
    return res


def level_one_from_bracket(g: LieAlgebraData, D: int) -> DeformationTower:
    """mu_1 = order-t part of straightening on PBW monomials; any antisymmetric bracket."""
    for (a, b), v in g.brackets.items():
        if vclean(g.ring, {k: -c for k, c in g.brackets.get((b, a), {}).items()}) != v:
            raise AntisymmetryError("bracket is not antisymmetric", pair=(a, b))
    A = symmetric_base(g, D)
    idx = {l: k for k, l in enumerate(A.labels)}
    memo: dict = {}
    mu1 = {}
    for i, u in enumerate(A.labels):
        for j, v in enumerate(A.labels):
            if A.degrees[i] + A.degrees[j] > D:
                continue
            nf = _first_order_nf(g, memo, tuple(u) + tuple(v))
            if nf:
                mu1[(i, j)] = {idx[w]: c for w, c in nf.items()}
    return DeformationTower(A, [mu1], D, bracket=g)


def trivial_tower(A: GradedAlgebra, level: int, D: int) -> DeformationTower:
    return DeformationTower(A, [{} for _ in range(level)], D)


# -- obstruction and prolongation -------------------------------------------------------

@dataclass
class ObstructionClass:
    level: int                  # obstruction to going from this level to level + 1
    cochain: dict               # (a, b, c) -> vector, nonzero values only
    is_cocycle: bool
    vanishes: bool              # class is zero in (HH^3)_{-(level+1)} = shifted H^2
    restriction: dict = field(default_factory=dict)   # generator triple -> vector
    factor: object = None       # restriction = factor * jacobiator, when comparable

    @property
    def degree(self) -> int:
        return -(self.level + 1)


@dataclass
class ProlongResult:
    obstructed: bool
    obstruction: ObstructionClass
    tower: DeformationTower | None = None
    space_rank: int | None = None        # rank (shifted H^1)_{-(i+1)} = (Ext^2)_{-(i+1)}
    alternative: DeformationTower | None = None
    isomorphism: dict | None = None      # h with id + t^{i+1} h between the two solutions


def _cochain_setup(tower, n):
    A = tower.base
    M = augmentation_ideal(A)
    j = -(tower.level + 1)
    W = tower.D
    return A, M, j, W


def obstruction(tower: DeformationTower) -> ObstructionClass:
    A, M, j, W = _cochain_setup(tower, 3)
    ring = tower.ring
    n = tower.level + 1
    cochain = {}
    for a, b, c in tower.triples():
        v = tower.associator(n, a, b, c, skip_ends=True)
        if v:
            cochain[(a, b, c)] = v
    # cocycle test and class: work with C^2 -> C^3 -> C^4 at degree j
    c2 = _cochain_space(A, M, 2, j, W)
    c3 = _cochain_space(A, M, 3, j, W)
    c4 = _cochain_space(A, M, 4, j, W)
    ovec = _to_cochain_vec(A, M, c3, cochain)
    d34 = hochschild_differential(A, M, c3, c4)
    is_cocycle = all(not _dot(ring, row, ovec) for row in d34)
    d23 = hochschild_differential(A, M, c2, c3)
    sol = solve_rows(ring, d23, [ovec.get(k, 0) for k in range(len(c3.variables))],
                     len(c2.variables))
    restriction, factor = _restrict_to_generators(tower, cochain)
    return ObstructionClass(tower.level, cochain, is_cocycle, sol is not None, restriction, factor)


def _dot(ring, row, vec):
    s = 0
    for k, c in row.items():
        x = vec.get(k)
        if x:
            s += c * x
    return ring.norm(ring(s))


def _to_cochain_vec(A, M, space, cochain):
    """Cochain {(tuple): A-vector} -> vector over space variables (values in A_+)."""
    # A_+ keeps A's positive-degree basis in order
    a_to_m = {}
    t = 0
    for k in range(A.rank):
        if A.degrees[k] > 0:
            a_to_m[k] = t
            t += 1
    out = {}
    for tup, vec in cochain.items():
        for z, c in vec.items():
            key = (tup, a_to_m[z])
            if key not in space.index:
                raise ChainError("cochain value outside the truncated cochain space")
            out[space.index[key]] = c
    return out


def _from_cochain_vec(A, space, vec):
    m_to_a = [k for k in range(A.rank) if A.degrees[k] > 0]
    out: dict = {}
    for v, c in vec.items():
        tup, m = space.variables[v]
        out.setdefault(tup, {})[m_to_a[m]] = c
    return out


def _restrict_to_generators(tower, cochain):
    """Alternating restriction of a 3-cochain to generator triples, and its
    ratio to the Jacobiator when both are available."""
    A = tower.base
    g = tower.bracket
    ring = tower.ring
    if g is None or not hasattr(A, "gen_index"):
        return {}, None
    gens = A.gen_index
    out = {}
    for I in itertools.combinations(range(len(gens)), 3):
        val: dict = {}
        for p in itertools.permutations(range(3)):
            key = tuple(gens[I[x]] for x in p)
            v = cochain.get(key)
            if v:
                axpy(ring, val, perm_sign(tuple(x + 1 for x in p)), v)
        if val:
            out[I] = {A.labels[z][0]: c for z, c in val.items()}
    J = jacobiator(g)
    factor = None
    for I, jv in J.items():
        rv = out.get(I, {})
        k = next(iter(jv))
        if k in rv and ring.norm(jv[k]):
            f = rv[k] * ring.inv(jv[k]) if ring.is_field else _zdiv(rv[k], jv[k])
            if f is not None and all(ring.norm(rv.get(x, 0) - f * y) == 0 for x, y in jv.items()) \
                    and set(rv) <= set(jv):
                factor = f if factor is None or factor == f else "inconsistent"
            else:
                factor = "inconsistent"
        else:
            factor = "inconsistent"
    if not J and out:
        factor = "inconsistent"
    return out, factor


def _zdiv(a, b):
    return a // b if b and a % b == 0 else None


def prolong(tower: DeformationTower, prefer: str = "first", alternative: bool = False) -> ProlongResult:
    """Solve delta mu_{i+1} = o_{i+1}; obstructed if o is not a coboundary.

    With ``alternative`` a second particular solution (opposite pivot
    preference) is computed and compared: the difference is a 2-cocycle and,
    when it is a coboundary delta h, ``id + t^{i+1} h`` is returned.
    """
    obs = obstruction(tower)
    A, M, j, W = _cochain_setup(tower, 2)
    if not obs.vanishes:
        return ProlongResult(True, obs)
    ring = tower.ring
    c2 = _cochain_space(A, M, 2, j, W)
    c3 = _cochain_space(A, M, 3, j, W)
    d23 = hochschild_differential(A, M, c2, c3)
    ovec = _to_cochain_vec(A, M, c3, obs.cochain)
    rhs = [ovec.get(k, 0) for k in range(len(c3.variables))]
    sol = _solve_pref(ring, d23, rhs, len(c2.variables), prefer)
    new = DeformationTower(A, tower.mus + [_table(A, c2, sol)], tower.D, tower.bracket)
    ext = ext_by_cochains(A, M, 2, j)
    res = ProlongResult(False, obs, new, ext.rank)
    if alternative:
        other = "last" if prefer == "first" else "first"
        sol2 = _solve_pref(ring, d23, rhs, len(c2.variables), other)
        res.alternative = DeformationTower(A, tower.mus + [_table(A, c2, sol2)], tower.D,
                                           tower.bracket)
        diff = dict(sol)
        axpy(ring, diff, -1, sol2)
        c1 = _cochain_space(A, M, 1, j, W)
        d12 = hochschild_differential(A, M, c1, c2)
        h = solve_rows(ring, d12, [diff.get(k, 0) for k in range(len(c2.variables))],
                       len(c1.variables))
        c3rows = d23
        res.isomorphism = None if h is None else _from_cochain_vec(A, c1, h)
        res.difference_is_cocycle = all(not _dot(ring, row, diff) for row in c3rows)
    return res


def _solve_pref(ring, rows, rhs, ncols, prefer):
    if prefer == "first":
        return solve_rows(ring, rows, rhs, ncols)
    # reverse the column order so free variables sit at the front
    rev = [{ncols - 1 - k: v for k, v in r.items()} for r in rows]
    sol = solve_rows(ring, rev, rhs, ncols)
    return None if sol is None else {ncols - 1 - k: v for k, v in sol.items()}


def _table(A, space, vec):
    tab = {}
    for tup, v in _from_cochain_vec(A, space, vec).items():
        tab[tup] = v
    return tab


def apply_isomorphism(tower_a: DeformationTower, tower_b: DeformationTower, h: dict) -> bool:
    """Check that id + t^n h maps tower_a's product to tower_b's (n = top level).

    At order n: h(ab) + mu_n^a(a,b) = mu_n^b(a,b) + h(a) b + a h(b), i.e.
    mu_n^a - mu_n^b = -delta h with the Hochschild sign convention.
    """
    A = tower_a.base
    ring = A.ring
    n = tower_a.level
    for (a, b) in itertools.product(range(A.rank), repeat=2):
        if A.degrees[a] + A.degrees[b] > tower_a.D:
            continue
        lhs: dict = {}
        for z, c in A.product_vec(A.e(a), A.e(b)).items():
            axpy(ring, lhs, c, h.get((z,), {}))
        axpy(ring, lhs, 1, tower_a.mu(n, A.e(a), A.e(b)))
        rhs = dict(tower_b.mu(n, A.e(a), A.e(b)))
        axpy(ring, rhs, 1, A.product_vec(h.get((a,), {}), A.e(b)))
        axpy(ring, rhs, 1, A.product_vec(A.e(a), h.get((b,), {})))
        if vclean(ring, lhs) != vclean(ring, rhs):
            return False
    return True


# -- automorphisms ----------------------------------------------------------------------

def tower_automorphisms(tower: DeformationTower) -> CheckReport:
    """Automorphisms id + t^n d of the top level (n = level) that are the
    identity modulo t^n, solved from the tower product, against
    derivations A -> A_+ of degree -n."""
    A = tower.base
    ring = tower.ring
    n = tower.level
    M = augmentation_ideal(A)
    m_to_a = [k for k in range(A.rank) if A.degrees[k] > 0]
    var = {}
    variables = []
    for x in range(A.rank):
        for m in M.basis_of_degree(A.degrees[x] - n):
            var[(x, m_to_a[m])] = len(variables)
            variables.append((x, m_to_a[m]))
    rows = []
    for a in range(A.rank):
        for b in range(A.rank):
            if A.degrees[a] + A.degrees[b] > tower.D:
                continue
            # order-n coefficient of phi(mu_t(a,b)) - mu_t(phi a, phi b), phi = id + t^n d
            eq: dict = {}
            for z, c in A.product_vec(A.e(a), A.e(b)).items():
                for (x, y), v in var.items():
                    if x == z:
                        eq.setdefault(y, {})
                        axpy(ring, eq[y], c, {v: ring.one})
            for (x, y), v in var.items():
                if x == a:
                    for z, c in tower.mu(0, A.e(y), A.e(b)).items():
                        eq.setdefault(z, {})
                        axpy(ring, eq[z], -c, {v: ring.one})
                if x == b:
                    for z, c in tower.mu(0, A.e(a), A.e(y)).items():
                        eq.setdefault(z, {})
                        axpy(ring, eq[z], -c, {v: ring.one})
            # mu_n(a,b) appears on both sides and cancels; higher mu_k terms are
            # beyond order n
            rows.extend(r for r in eq.values() if r)
    ker = kernel_rows(ring, rows, len(variables))
    ders = derivations(A, M, -n)
    rep = CheckReport("tower automorphisms",
                      details={"level": n, "automorphisms": len(ker), "derivations": ders.rank})
    rep.record("equals derivations A -> A_+", len(ker) == ders.rank)
    return rep


def level_one_classification(r: int, ring, D: int = 3) -> CheckReport:
    """beta -> class of mu_1(beta) in (HH^2)_{-1}(S, S_+) over a basis of
    antisymmetric brackets on rank r: injective, and the classes span the
    whole group, whose rank is r * C(r, 2)."""
    names = [f"x{k + 1}" for k in range(r)]
    pairs = list(itertools.combinations(range(r), 2))
    betas = []
    for (a, b) in pairs:
        for k in range(r):
            betas.append(LieAlgebraData(ring, names, {(a, b): {k: ring.one}}))
    towers = [level_one_from_bracket(g, D) for g in betas]
    A = towers[0].base
    M = augmentation_ideal(A)
    c1 = _cochain_space(A, M, 1, -1, D)
    c2 = _cochain_space(A, M, 2, -1, D)
    c3 = _cochain_space(A, M, 3, -1, D)
    d12 = hochschild_differential(A, M, c1, c2)
    d23 = hochschild_differential(A, M, c2, c3)
    cocycles = [_to_cochain_vec(A, M, c2, t.mus[0]) for t in towers]
    all_cocycles = all(all(not _dot(ring, row, z) for row in d23) for z in cocycles)
    bound = _columns(d12, len(c1.variables))
    rb = rank_rows(ring, bound)
    rz = rank_rows(ring, bound + cocycles)
    ext = ext_by_cochains(A, M, 2, -1)
    expected = r * len(pairs)
    rep = CheckReport("level-one classification",
                      details={"rank": r, "brackets": len(betas), "classes": rz - rb,
                               "ext rank": ext.rank, "hom rank": expected})
    rep.record("cocycles", all_cocycles)
    rep.record("injective", rz - rb == len(betas))
    rep.record("class count = rank Hom(L^2 g, g)", ext.rank == expected == rz - rb)
    return rep


# -- specialization ----------------------------------------------------------------------

@dataclass
class Specialization:
    tower: DeformationTower
    D: int

    def mul_t(self, u: dict, v: dict) -> dict:
        """Product in A_t as {k: vector} (coefficient of t^k)."""
        out = {}
        for k in range(0, self.tower.level + 1):
            w = self.tower.mu(k, u, v)
            if w:
                out[k] = w
        return out

    def mul1(self, u: dict, v: dict) -> dict:
        """Product in A_1 = A_t / (t - 1)."""
        ring = self.tower.ring
        out: dict = {}
        for k in range(0, self.tower.level + 1):
            axpy(ring, out, 1, self.tower.mu(k, u, v))
        return out

    @property
    def A1(self):
        return self

    def filtered_ranks(self) -> list[int]:
        A = self.tower.base
        return [sum(1 for k in range(A.rank) if A.degrees[k] <= n) for n in range(self.D + 1)]

    def gr_ranks(self) -> list[int]:
        A = self.tower.base
        return [len(A.basis_of_degree(n)) for n in range(self.D + 1)]

    def check(self) -> CheckReport:
        """Filtration compatibility and gr(A_1) = A on structure constants."""
        A = self.tower.base
        rep = CheckReport("specialization", details={"D": self.D})
        filt = True
        gr = True
        for a in range(A.rank):
            for b in range(A.rank):
                d = A.degrees[a] + A.degrees[b]
                if d > self.D:
                    continue
                p = self.mul1(A.e(a), A.e(b))
                if any(A.degrees[z] > d for z in p):
                    filt = False
                top = {z: c for z, c in p.items() if A.degrees[z] == d}
                if top != vclean(A.ring, A.product_vec(A.e(a), A.e(b))):
                    gr = False
        rep.record("filtration", filt)
        rep.record("gr(A_1) = A", gr)
        rep.details["gr ranks"] = self.gr_ranks()
        rep.details["filtered ranks"] = self.filtered_ranks()
        return rep


def specialize(towers, D: int | None = None) -> Specialization:
    """A_t and A_1 from a tower (or a compatible chain of towers, checked)."""
    if isinstance(towers, DeformationTower):
        towers = [towers]
    towers = list(towers)
    for lo, hi in zip(towers, towers[1:]):
        if hi.level < lo.level or any(hi.mus[k] != lo.mus[k] for k in range(lo.level)):
            raise ChainError("towers do not reduce to each other")
    top = towers[-1]
    return Specialization(top, top.D if D is None else D)


def run_tower(g: LieAlgebraData, D: int, levels: int):
    """Level-1 tower and successive prolongations; stops at an obstruction."""
    tower = level_one_from_bracket(g, D)
    history = [tower]
    while tower.level < levels:
        res = prolong(tower)
        if res.obstructed:
            return history, res
        tower = res.tower
        history.append(tower)
    return history, None


__all__ = [
    "DeformationTower", "level_one_from_bracket", "trivial_tower", "obstruction", "prolong",
    "ObstructionClass", "ProlongResult", "level_one_classification", "tower_automorphisms", "specialize", "Specialization",
    "apply_isomorphism", "run_tower", "symmetric_base",
]
