"""operad-forge command line.

Exit codes: 0 when every verdict passes, 1 when the mathematics says no
(a failed verdict, an obstruction, a Jacobi violation), 2 for usage,
parse and validation errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction

from .algebra import Unknown
from .errors import ForgeError, JacobiError, ObstructedError
from .inputs import (_int, algebra_from_block, lie_from_block, module_from_block, operad_from_block,
                     parse_spec)
from .parallel import ENV, pmap, thread_count
from .report import format_vec

COMMANDS = ("operad-check", "free-algebra", "derivations", "hochschild", "ext", "koszul-check",
            "deform", "pbw-verify", "pbw-deform", "envelope")


class UsageError(Exception):
    pass


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    if isinstance(x, (list, tuple)):
        return [_jsonable(y) for y in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    return x


def _text(x):
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (list, tuple)):
        return "[" + ", ".join(_text(y) for y in x) + "]" if x else "-"
    if isinstance(x, dict):
        return "{" + ", ".join(f"{k}: {_text(v)}" for k, v in x.items()) + "}"
    return str(x)


class Report:
    def __init__(self, command: str, source: str, digest: str):
        self.records = [{"kind": "header", "command": command, "input": source,
                         "sha256": digest}]
        self.failed = False

    def info(self, key, value):
        self.records.append({"kind": "info", "key": key, "value": _jsonable(value)})

    def table(self, name, columns, rows):
        self.records.append({"kind": "table", "name": name, "columns": list(columns),
                             "rows": [_jsonable(list(r)) for r in rows]})

    def verdict(self, statement, ok, witnesses=()):
        ok = bool(ok)
        self.failed = self.failed or not ok
        self.records.append({"kind": "verdict", "statement": statement, "ok": ok,
                             "witnesses": [repr(w) for w in witnesses]})

    def check(self, rep, statements: dict | None = None):
        """Turn a CheckReport into verdict lines."""
        for key in sorted(rep.results):
            label = (statements or {}).get(key, f"{rep.name}: {key}")
            self.verdict(label, rep.results[key], rep.witnesses.get(key, ()))

    def render(self, fmt: str) -> str:
        if fmt == "records":
            return "".join(json.dumps(r, sort_keys=True) + "\n" for r in self.records)
        out = []
        for r in self.records:
            k = r["kind"]
            if k == "header":
                out.append(f"operad-forge {r['command']}")
                out.append(f"input {r['input']} sha256 {r['sha256']}")
            elif k == "info":
                out.append(f"{r['key']}: {_text(r['value'])}")
            elif k == "table":
                out.append(f"table {r['name']}")
                out.append("  " + " | ".join(r["columns"]))
                for row in r["rows"]:
                    out.append("  " + " | ".join(_text(c) for c in row))
            elif k == "verdict":
                out.append(f"verdict {r['statement']}: {'pass' if r['ok'] else 'fail'}")
                for w in r["witnesses"]:
                    out.append(f"  witness {w}")
        verdicts = [r for r in self.records if r["kind"] == "verdict"]
        out.append(f"summary {sum(r['ok'] for r in verdicts)}/{len(verdicts)} verdicts pass")
        return "\n".join(out) + "\n"


# -- shared setup ------------------------------------------------------------------------

def _need_lie(spec):
    if spec.lie is None:
        raise UsageError("this command needs a lie block")
    return lie_from_block(spec)


def _algebra_and_module(spec, D):
    """(A, M): an algebra block with optional module, or S(g) for a lie block."""
    from .algebra import polynomial_algebra
    from .amodule import augmentation_ideal, regular_module
    if spec.lie is not None:
        g = lie_from_block(spec)
        A = polynomial_algebra(spec.ring, list(g.names), D, "ass")
        return A, augmentation_ideal(A)
    if spec.algebra is None:
        raise UsageError("this command needs an algebra or lie block")
    A = algebra_from_block(spec, D)
    if spec.module is not None:
        return A, module_from_block(spec, A)
    return A, augmentation_ideal(A) if A.augmented else regular_module(A)


def _opt(args, spec, name, default):
    key = {"max_deg": "max_degree"}.get(name, name)
    v = getattr(args, name.replace("-", "_"), None)
    if v is not None:
        return _int(v, key)
    return spec.int_option(key, default)


# -- commands ----------------------------------------------------------------------------

def cmd_operad_check(spec, args, rep):
    from .operad import build_standard, check_axioms
    if spec.operad is not None:
        ops = [operad_from_block(spec)]
    else:
        N = _int(_opt(args, spec, "max_deg", 5), "max_arity")
        names = (spec.option("operad") or "com ass lie").split()
        ops = [build_standard(n, spec.ring, N) for n in names]
    results = pmap(lambda op: check_axioms(op), ops)
    for op, res in zip(ops, results):
        label = op.name or "custom"
        rep.table(f"{label} ranks", ["arity", "rank"],
                  [(n, op.rank(n)) for n in range(1, op.max_arity + 1)])
        rep.check(res, {k: f"{label}: {k} axiom holds up to arity {op.max_arity}"
                        for k in res.results})


def cmd_free_algebra(spec, args, rep):
    from .algebra import (extend_from_generators, free_algebra, generated_by_generators,
                          restrict_to_generators)
    from .amodule import derivations, trivial_module
    from .operad import build_standard
    D = _opt(args, spec, "max_deg", 4)
    opname = spec.option("operad") or "com"
    gens = spec.option("generators")
    if gens:
        names, weights = [], []
        for item in gens.split():
            nm, _, w = item.partition(":")
            names.append(nm)
            weights.append(int(w or 1))
    else:
        r = spec.int_option("rank", 2)
        names, weights = [f"x{k + 1}" for k in range(r)], [1] * r
    op = build_standard(opname, spec.ring, max(D, 3))
    F = free_algebra(op, len(names), D, weights=weights, gen_names=names)
    rep.info("operad", opname)
    rep.info("generators", [f"{n}:{w}" for n, w in zip(names, weights)])
    rep.table("ranks", ["degree", "rank"], [(d, len(F.basis_of_degree(d))) for d in range(D + 1)])
    rep.verdict("Free(V) is generated by V", generated_by_generators(F))
    # Hom(Free V, Free V) -> Hom(V, Free V) on a basis of the right-hand side
    ok = True
    count = 0
    for a in range(len(names)):
        for y in F.basis_of_degree(weights[a]):
            images = [dict() for _ in names]
            images[a] = {y: spec.ring.one}
            hom = extend_from_generators(F, F, images)
            ok = ok and hom.check().passed and restrict_to_generators(hom) == images
            count += 1
    rep.info("rank Hom(V, Free V)", count)
    rep.verdict("restriction to V inverts extension from V", ok)
    rows = []
    ok = True
    for j in range(-max(weights), D - 1):
        M = trivial_module(F, 1, 1)
        om = derivations(F, M, j).rank
        hom = sum(1 for w in weights if w + j == 1)
        rows.append((j, om, hom))
        ok = ok and om == hom
    rep.table("derivations into a trivial module in degree 1", ["j", "rank Omega", "rank Hom(V,M)"],
              rows)
    rep.verdict("Omega(Free V, M) = Hom(V, M)", ok)


def cmd_derivations(spec, args, rep):
    from .algebra import lie_as_algebra
    from .amodule import derivations, regular_module
    j = args.j if args.j is not None else spec.int_option("j", 0)
    D = _opt(args, spec, "max_deg", 4)
    if spec.lie is not None:
        g = lie_from_block(spec)
        A = lie_as_algebra(g)
        M = regular_module(A)
    else:
        A, M = _algebra_and_module(spec, D)
        if spec.module is None:
            M = regular_module(A)
    ders = derivations(A, M, j)
    rep.info("degree", j)
    rep.info("rank", ders.rank)
    rows = []
    for k, phi in enumerate(ders.basis):
        for x in sorted(phi):
            v = phi[x]
            if v:
                rows.append((k, A.names[x], format_vec(M.names, v)))
    rep.table("basis", ["derivation", "input", "value"], rows)


def _ext_common(spec, args, rep, shifted):
    from .homology import ext_by_cochains, ext_by_koszul, cohomology_H
    i = args.i if args.i is not None else spec.int_option("i", 1)
    j = args.j if args.j is not None else spec.int_option("j", -1)
    n = i + 1 if shifted else i
    D = _opt(args, spec, "max_deg", max(4, n + 2 + max(j, 0)))
    A, M = _algebra_and_module(spec, D)
    rep.info("algebra", getattr(A, "spec_name", None) or "S(g)")
    rep.info("module", M.name if getattr(M, "name", None) else "M")
    rep.info("D", D)
    if shifted and i == 0:
        e = cohomology_H(A, M, 0, j)
        rep.table("H", ["i", "j", "rank", "route"], [(0, j, e.rank, e.route)])
        return
    routes = ["cochain"]
    if hasattr(A, "gen_index") and A.operad.name == "ass":
        routes = ["koszul", "cochain"]
    fn = {"koszul": lambda: ext_by_koszul(A, M, n, j),
          "cochain": lambda: ext_by_cochains(A, M, n, j)}
    res = pmap(lambda r: fn[r](), routes)
    rows = []
    for r, e in zip(routes, res):
        rows.append((i, j, e.rank, e.torsion, r) if shifted else (n, j, e.rank, e.torsion, r))
    rep.table("H (Ext index i+1)" if shifted else "Ext", ["i" if shifted else "n", "j",
              "rank", "torsion", "route"], rows)
    if len(res) == 2:
        rep.verdict("Koszul route agrees with the normalized cochain route",
                    res[0].rank == res[1].rank and res[0].torsion == res[1].torsion)


def cmd_hochschild(spec, args, rep):
    _ext_common(spec, args, rep, shifted=True)


def cmd_ext(spec, args, rep):
    _ext_common(spec, args, rep, shifted=False)


def cmd_koszul_check(spec, args, rep):
    from .homology import koszul_exactness
    D = _opt(args, spec, "max_deg", 6)
    if spec.lie is not None:
        r = len(lie_from_block(spec).names)
    else:
        r = spec.int_option("rank", 2)
    res = koszul_exactness(r, D, spec.ring)
    rep.info("rank", r)
    rep.info("D", D)
    rep.check(res, {"d^2 = 0": "Koszul differential squares to zero",
                    "exact": "augmented Koszul complex S (x) L(g) (x) S -> S is exact"})


def cmd_deform(spec, args, rep):
    from .algebra import jacobiator
    from .deformation import level_one_from_bracket, prolong, tower_automorphisms
    g = _need_lie(spec)
    L = _opt(args, spec, "levels", 2)
    D = _opt(args, spec, "max_deg", 4)
    tower = level_one_from_bracket(g, D)
    rep.info("D", D)
    rep.info("levels", L)
    rep.info("jacobiator", {",".join(g.names[x] for x in k): format_vec(g.names, v)
                            for k, v in sorted(jacobiator(g).items())})
    rep.verdict("level-1 tower is associative to order 1", tower.check_associativity().passed)
    rows = []
    while tower.level < L:
        res = prolong(tower)
        o = res.obstruction
        if res.obstructed:
            rows.append((tower.level + 1, "obstructed", "-", "-"))
            rep.table("levels", ["level", "status", "rank H^1 part", "automorphisms"], rows)
            rep.info(f"obstruction class at level {tower.level + 1}",
                     {",".join(g.names[x] for x in k): format_vec(g.names, v)
                      for k, v in sorted(o.restriction.items())})
            rep.verdict("obstruction is a Hochschild 3-cocycle", o.is_cocycle)
            rep.verdict("obstruction restricted to L^3 g equals the Jacobiator",
                        o.factor == 1 or (not o.restriction and not jacobiator(g)))
            rep.verdict(f"Obstructed at level {tower.level + 1}: no prolongation exists", False)
            return
        tower = res.tower
        auts = tower_automorphisms(tower)
        rows.append((tower.level, "prolonged", res.space_rank, auts.details["automorphisms"]))
        rep.verdict(f"level-{tower.level} tower is associative",
                    tower.check_associativity().passed)
        rep.verdict(f"level-{tower.level} automorphisms are derivations A -> A_+ of degree "
                    f"-{tower.level}", auts.passed)
    rep.table("levels", ["level", "status", "rank H^1 part", "automorphisms"], rows)
    rep.table("corrections", ["entry"], [(line,) for line in tower.dump()])


def cmd_pbw_verify(spec, args, rep):
    from .pbw import pbw_verify
    g = _need_lie(spec)
    D = _opt(args, spec, "max_deg", 4 if spec.ring.kind == "Z" else 6)
    rows = pbw_verify(g, D)
    rep.info("D", D)
    rep.table("PBW", ["degree", "rank gr U", "rank S", "torsion", "is_iso"],
              [(r.degree, r.gr_rank, r.sym_rank, r.torsion, r.is_iso) for r in rows])
    rep.verdict(f"S^n(g) -> gr U(g)_n is an isomorphism for n <= {D}", all(r.is_iso for r in rows))


def cmd_pbw_deform(spec, args, rep):
    from .pbw import pbw_via_deformation
    g = _need_lie(spec)
    D = _opt(args, spec, "max_deg", 4)
    res = pbw_via_deformation(g, D)
    rep.info("D", D)
    rep.check(res, {k: f"deformation route: {k}" for k in res.results})


def cmd_envelope(spec, args, rep):
    from .algebra import lie_as_algebra
    from .amodule import compare_with_tensor_oracle, enveloping
    from .pbw import enveloping_by_rewriting
    if spec.lie is not None:
        D = _opt(args, spec, "max_deg", 3)
        g = lie_from_block(spec)
        P = enveloping(lie_as_algebra(g), D, mode="filtered")
        U = enveloping_by_rewriting(g, D)
        rep.info("mode", P.mode)
        rep.table("filtered ranks", ["degree", "rank P_g", "rank U(g)"],
                  [(d, a, b) for d, (a, b) in enumerate(zip(P.filtered_ranks(), U.filtered_ranks()))])
        rep.verdict("P_g and U(g) have equal filtered ranks", P.filtered_ranks() == U.filtered_ranks())
        rep.check(P.check_associative(), {"unit": "P_g is unital",
                                          "associativity": "P_g is associative"})
        return
    D = _opt(args, spec, "max_deg", 4)
    A = algebra_from_block(spec, D)
    P = enveloping(A, D)
    rep.info("mode", P.mode)
    rep.table("ranks", ["degree", "rank"], list(enumerate(P.ranks())))
    rep.check(P.check_associative(), {"unit": "P_A is unital", "associativity": "P_A is associative"})
    if A.operad.name == "ass" and A.unit is not None and not A.truncated:
        rep.check(compare_with_tensor_oracle(P),
                  {k: f"P_A = A (x) A^op: {k}" for k in ("rank", "bijective", "multiplicative", "unit")})


HANDLERS = {
    "operad-check": cmd_operad_check, "free-algebra": cmd_free_algebra,
    "derivations": cmd_derivations, "hochschild": cmd_hochschild, "ext": cmd_ext,
    "koszul-check": cmd_koszul_check, "deform": cmd_deform, "pbw-verify": cmd_pbw_verify,
    "pbw-deform": cmd_pbw_deform, "envelope": cmd_envelope,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="operad-forge",
        description="Exact computations with operads, their algebras, modules, "
                    "deformations and enveloping algebras.",
        epilog=f"Environment: {ENV} sets the worker count (positive integer, default 1); "
               "output does not depend on it. Exit status: 0 pass, 1 mathematical failure, "
               "2 usage or input error.")
    p.add_argument("command", choices=COMMANDS, help="computation to run")
    p.add_argument("spec", help="input file (see docs/input-grammar.ebnf)")
    p.add_argument("--max-deg", type=int, dest="max_deg",
                   help="degree bound D (arity bound for operad-check)")
    p.add_argument("--levels", type=int, help="deformation levels to build (deform)")
    p.add_argument("--i", type=int, help="cohomological index (H^i for hochschild, Ext^i for ext)")
    p.add_argument("--j", type=int, help="internal degree")
    p.add_argument("--ring", help="override the ring: QQ, ZZ or GF(p)")
    p.add_argument("--out", help="also write the report to this file")
    p.add_argument("--format", choices=("text", "records"), default="text",
                   help="text report or one JSON record per line")
    return p


def run(command: str, spec, args) -> tuple[Report, int]:
    rep = Report(command, args.spec, hashlib.sha256(spec.text.encode()).hexdigest()[:16])
    rep.info("ring", str(spec.ring))
    try:
        HANDLERS[command](spec, args, rep)
    except JacobiError as exc:
        rep.verdict("Jacobi identity holds (hypothesis)", False, [str(exc)])
    except ObstructedError as exc:
        rep.verdict("prolongation is unobstructed", False, [str(exc)])
    return rep, (1 if rep.failed else 0)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        thread_count()
        spec = parse_spec(args.spec, args.ring)
        rep, code = run(args.command, spec, args)
    except (ForgeError, UsageError) as exc:
        print(f"operad-forge: error: {exc}", file=sys.stderr)
        return 2
    except Unknown:
        print("operad-forge: error: E_TRUNC: a product left the degree window; "
              "raise --max-deg", file=sys.stderr)
        return 2
    text = rep.render(args.format)
    sys.stdout.write(text)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
