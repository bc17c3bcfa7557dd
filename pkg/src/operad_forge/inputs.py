"""Reader for the line-oriented input format (grammar in docs/input-grammar.ebnf).

Example::

    ring QQ
    lie sl2 {
      basis e f h
      bracket e f = h
      bracket h e = 2*e
      bracket h f = -2*f
    }
    options {
      max_degree 4
    }
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import AntisymmetryError, ForgeError, ParseError, ValidationError
from .linalg import GroundRing, parse_ring

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_TERM = re.compile(r"\s*([+-])?\s*(?:(\d+(?:/\d+)?)\s*\*?\s*)?([A-Za-z_][A-Za-z0-9_]*|\d+(?:/\d+)?)?\s*")
_BLOCKS = ("lie", "algebra", "module", "operad", "options")
_OPTION_KEYS = {"max_degree", "levels", "i", "j", "operad", "generators", "rank", "route",
                "mode", "max_arity", "weight"}
# size guards: inputs beyond these run out of memory long before they finish
LIMITS = {"max_degree": (0, 12), "levels": (1, 8), "i": (0, 6), "j": (-12, 12), "rank": (1, 6),
          "max_arity": (1, 6), "weight": (0, 12), "degree": (0, 12),
          "trivial": (1, 16), "lie_rank": (1, 8)}


def _int(text, key, ln=None, col=None):
    try:
        v = int(text)
    except (TypeError, ValueError):
        raise ParseError(f"{key} must be an integer, got {text!r}", ln or 0, col or 0) from None
    lo, hi = LIMITS.get(key, (None, None))
    if lo is not None and not lo <= v <= hi:
        raise ValidationError(f"{key} must lie in [{lo}, {hi}], got {v}", line=ln, column=col)
    return v


@dataclass
class Block:
    kind: str
    name: str | None
    line: int
    over: str | None = None
    entries: list = field(default_factory=list)   # (keyword, rest, line, column)
    rest_col: dict = field(default_factory=dict)  # line -> column where rest starts


@dataclass
class InputSpec:
    ring: GroundRing
    ring_line: int | None
    blocks: dict
    text: str

    @property
    def lie(self):
        return self.blocks.get("lie")

    @property
    def algebra(self):
        return self.blocks.get("algebra")

    @property
    def module(self):
        return self.blocks.get("module")

    @property
    def operad(self):
        return self.blocks.get("operad")

    def option(self, key, default=None):
        b = self.blocks.get("options")
        if b is None:
            return default
        for kw, rest, _, _ in b.entries:
            if kw == key:
                return rest
        return default

    def int_option(self, key, default=None):
        b = self.blocks.get("options")
        for kw, rest, ln, col in (b.entries if b is not None else ()):
            if kw == key:
                return _int(rest, key, ln, col)
        return default


def _strip(line: str) -> str:
    return line.split("#", 1)[0].rstrip()


def parse_text(text: str, ring_override: str | None = None) -> InputSpec:
    ring = None
    ring_line = None
    blocks: dict = {}
    current: Block | None = None
    for ln, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line.strip():
            continue
        col = len(line) - len(line.lstrip()) + 1
        words = line.split()
        if current is not None:
            if words == ["}"]:
                blocks[current.kind] = current
                current = None
                continue
            kw = words[0]
            after = line[col - 1 + len(kw):]
            rest = after.strip()
            current.entries.append((kw, rest, ln, col))
            current.rest_col[ln] = col + len(kw) + len(after) - len(after.lstrip())
            continue
        kw = words[0]
        if kw == "ring":
            if len(words) != 2:
                raise ParseError("expected: ring <QQ|ZZ|GF(p)>", ln, col)
            if ring is not None:
                raise ParseError("ring declared twice", ln, col)
            ring = _ring(words[1], ln, col + 5)
            ring_line = ln
            continue
        if kw in _BLOCKS:
            if words[-1] != "{":
                raise ParseError(f"expected '{{' to open the {kw} block", ln, len(line))
            head = words[1:-1]
            name = over = None
            if len(head) >= 1:
                name = head[0]
            if len(head) == 3 and head[1] == "over":
                over = head[2]
            elif len(head) not in (0, 1):
                raise ParseError(f"malformed {kw} header", ln, col)
            if name is not None and not _NAME.fullmatch(name):
                raise ParseError(f"bad name {name!r}", ln, col)
            if kw in blocks:
                raise ParseError(f"second {kw} block", ln, col)
            current = Block(kw, name, ln, over)
            continue
        raise ParseError(f"unexpected {kw!r}", ln, col)
    if current is not None:
        raise ParseError(f"unterminated {current.kind} block", current.line, 1)
    if ring_override is not None:
        ring = _ring(ring_override, 0, 0)
    if ring is None:
        raise ValidationError("missing ring declaration")
    spec = InputSpec(ring, ring_line, blocks, text)
    validate(spec)
    return spec


def parse_spec(path: str, ring_override: str | None = None) -> InputSpec:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    return parse_text(text, ring_override)


def _ring(word, ln, col) -> GroundRing:
    try:
        return parse_ring(word)
    except ForgeError as exc:
        raise ValidationError(str(exc), line=ln, column=col) from None


def validate(spec: InputSpec):
    if spec.lie is not None and spec.algebra is not None:
        raise ValidationError("give a lie block or an algebra block, not both")
    if spec.module is not None:
        host = spec.algebra
        if host is None:
            raise ValidationError("module block needs an algebra block", line=spec.module.line)
        if spec.module.over is not None and spec.module.over != host.name:
            raise ValidationError(f"module is over unknown algebra {spec.module.over!r}",
                                  line=spec.module.line)
    opts = spec.blocks.get("options")
    if opts is not None:
        for kw, _, ln, col in opts.entries:
            if kw not in _OPTION_KEYS:
                raise ValidationError(f"unknown option {kw!r}", line=ln, column=col)
    if spec.lie is not None:
        lie_from_block(spec)           # raises E_ANTISYM / E_VALIDATE early
    if spec.algebra is not None:
        algebra_from_block(spec, 2)


# -- expressions ------------------------------------------------------------------------

def parse_expr(text: str, names, ring: GroundRing, ln: int = 0, col: int = 0) -> dict:
    """Linear combination like ``2*e - f + 1/2*h`` or ``0``."""
    idx = {n: k for k, n in enumerate(names)}
    s = text.strip()
    if s == "0":
        return {}
    lead = len(text) - len(text.lstrip())

    def at(p):
        return col + lead + p + len(s[p:]) - len(s[p:].lstrip())

    out: dict = {}
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ParseError(f"cannot read expression {s!r}", ln, at(pos))
        sign, coeff, atom = m.groups()
        if sign is None and not first:
            raise ParseError(f"missing operator in {s!r}", ln, at(pos))
        if atom is None:
            raise ParseError(f"missing basis name in {s!r}", ln, at(m.end()))
        if re.fullmatch(r"\d+(?:/\d+)?", atom):
            raise ParseError(f"number without basis name in {s!r}", ln, at(m.start(3)))
        if atom not in idx:
            raise ValidationError(f"unknown basis name {atom!r}", line=ln, column=at(m.start(3)))
        c = Fraction(coeff) if coeff else Fraction(1)
        if sign == "-":
            c = -c
        if c.denominator != 1 and not ring.is_field:
            raise ValidationError(f"non-integral coefficient over {ring}", line=ln, column=at(pos))
        k = idx[atom]
        out[k] = ring.norm(out.get(k, 0) + ring(c))
        pos = m.end()
        first = False
    return {k: v for k, v in out.items() if v}


def _equation(rest, ln, col, arity=2):
    if "=" not in rest:
        raise ParseError("expected '='", ln, col)
    lhs, rhs = rest.split("=", 1)
    args = lhs.split()
    if len(args) != arity:
        raise ParseError(f"expected {arity} names before '='", ln, col)
    return args, rhs, col + len(lhs) + 1


# -- blocks ---------------------------------------------------------------------------

def lie_from_block(spec: InputSpec):
    from .algebra import LieAlgebraData, lie_from_constants, standard_lie
    b = spec.lie
    if b is None:
        raise ValidationError("this command needs a lie block")
    ring = spec.ring
    names = None
    brackets: dict = {}
    builtin = None
    for kw, rest, ln, col in b.entries:
        if kw == "builtin":
            builtin = rest
        elif kw == "basis":
            names = rest.split()
            if len(set(names)) != len(names) or not all(_NAME.fullmatch(n) for n in names):
                raise ValidationError("basis names must be distinct identifiers", line=ln)
            _int(len(names), "lie_rank", ln, col)
        elif kw == "bracket":
            if names is None:
                raise ValidationError("bracket before basis", line=ln, column=col)
            args, rhs, rc = _equation(rest, ln, b.rest_col[ln])
            for a in args:
                if a not in names:
                    raise ValidationError(f"unknown basis name {a!r}", line=ln, column=col)
            i, j = names.index(args[0]), names.index(args[1])
            v = parse_expr(rhs, names, ring, ln, rc)
            if i == j and v:
                raise AntisymmetryError(f"[{args[0]},{args[0]}] must vanish", pair=(i, j))
            if (i, j) in brackets:
                raise ValidationError(f"bracket {args[0]} {args[1]} given twice", line=ln)
            brackets[(i, j)] = v
        else:
            raise ParseError(f"unknown lie entry {kw!r}", ln, col)
    if builtin is not None:
        try:
            return standard_lie(builtin, ring)
        except ForgeError as exc:
            raise ValidationError(str(exc), line=b.line) from None
    if names is None:
        raise ValidationError("lie block needs a basis", line=b.line)
    return lie_from_constants(LieAlgebraData(ring, names, brackets, name=b.name or "g"))


def _flag(v, ln):
    if v in ("yes", "true"):
        return True
    if v in ("no", "false"):
        return False
    raise ValidationError(f"expected yes/no, got {v!r}", line=ln)


def algebra_from_block(spec: InputSpec, D: int):
    """Builtins: ``symmetric R``, ``free OPERAD R``; otherwise explicit tables."""
    from .algebra import GradedAlgebra, free_algebra, polynomial_algebra
    from .operad import build_standard
    b = spec.algebra
    if b is None:
        raise ValidationError("this command needs an algebra block")
    ring = spec.ring
    opname = "ass"
    names, degrees = None, None
    products = []
    unit = None
    augmented = None
    max_degree = None
    builtin = None
    for kw, rest, ln, col in b.entries:
        if kw == "builtin":
            builtin = (rest.split(), ln)
        elif kw == "operad":
            if rest not in ("ass", "com"):
                raise ValidationError("explicit algebras are ass or com", line=ln, column=col)
            opname = rest
        elif kw == "basis":
            names, degrees = [], []
            for item in rest.split():
                nm, _, dg = item.partition(":")
                if not _NAME.fullmatch(nm):
                    raise ParseError(f"bad basis name {nm!r}", ln, col)
                d = _int(dg or 0, "degree", ln, col)
                names.append(nm)
                degrees.append(d)
            if len(set(names)) != len(names):
                raise ValidationError("basis names must be distinct", line=ln)
        elif kw == "unit":
            unit = (rest, ln)
        elif kw == "augmented":
            augmented = _flag(rest, ln)
        elif kw == "max_degree":
            max_degree = _int(rest, "max_degree", ln, col)
        elif kw == "product":
            products.append((rest, ln, col))
        else:
            raise ParseError(f"unknown algebra entry {kw!r}", ln, col)
    if builtin is not None:
        words, ln = builtin
        if words and words[0] == "symmetric" and len(words) == 2:
            r = _int(words[1], "rank", ln)
            A = polynomial_algebra(ring, [f"x{k + 1}" for k in range(r)], D, "ass")
        elif words and words[0] == "free" and len(words) == 3:
            r = _int(words[2], "rank", ln)
            try:
                op = build_standard(words[1], ring, max(D, 3))
            except ForgeError as exc:
                raise ValidationError(str(exc), line=ln) from None
            A = free_algebra(op, r, D)
        else:
            raise ValidationError(f"unknown builtin {' '.join(words)!r}", line=ln)
        A.spec_name = b.name or words[0]
        return A
    if names is None:
        raise ValidationError("algebra block needs a basis or a builtin", line=b.line)
    tab: dict = {}
    for rest, ln, col in products:
        args, rhs, rc = _equation(rest, ln, b.rest_col[ln])
        for a in args:
            if a not in names:
                raise ValidationError(f"unknown basis name {a!r}", line=ln, column=col)
        key = (names.index(args[0]), names.index(args[1]))
        if key in tab:
            raise ValidationError(f"product {args[0]} {args[1]} given twice", line=ln)
        tab[key] = parse_expr(rhs, names, ring, ln, rc)
        for k in tab[key]:
            if degrees[k] != degrees[key[0]] + degrees[key[1]]:
                raise ValidationError(f"product {args[0]} {args[1]} is not homogeneous", line=ln)
    uidx = None
    if unit is not None:
        if unit[0] not in names:
            raise ValidationError(f"unknown unit {unit[0]!r}", line=unit[1])
        uidx = names.index(unit[0])
        if degrees[uidx] != 0:
            raise ValidationError("the unit has degree 0", line=unit[1])
        for k in range(len(names)):
            for key in ((uidx, k), (k, uidx)):
                if key in tab and tab[key] != {k: ring.one}:
                    raise ValidationError("unit products disagree with the unit", line=unit[1])
                tab[key] = {k: ring.one}
    full = {}
    for i in range(len(names)):
        for j in range(len(names)):
            v = tab.get((i, j), {})
            if opname == "com" and (j, i) in tab and tab[(j, i)] != v and (i, j) in tab:
                raise ValidationError(f"com product {names[i]} {names[j]} is not symmetric")
            if opname == "com" and (i, j) not in tab:
                v = tab.get((j, i), {})
            full[(i, j)] = v
    if augmented is None:
        augmented = uidx is not None and degrees.count(0) == 1
    op = build_standard(opname, ring, 3, unital=uidx is not None)
    if opname == "ass":
        tables = {0: full, 1: {(i, j): full[(j, i)] for (i, j) in full}}
    else:
        tables = {0: full}
    A = GradedAlgebra(op, names, degrees, tables, unit=uidx, augmented=augmented,
                      max_degree=max_degree, truncated=False, names=names)
    A.spec_name = b.name or "A"
    return A


def module_from_block(spec: InputSpec, A):
    """``builtin regular|augmentation|trivial R DEG`` or explicit ``left``/``right`` actions."""
    from .amodule import (augmentation_ideal, module_from_actions, regular_module,
                          trivial_module)
    b = spec.module
    if b is None:
        raise ValidationError("this command needs a module block")
    ring = spec.ring
    names, degrees = None, None
    left, right = {}, {}
    for kw, rest, ln, col in b.entries:
        if kw == "builtin":
            w = rest.split()
            if w == ["regular"]:
                return regular_module(A)
            if w == ["augmentation"]:
                return augmentation_ideal(A)
            if w and w[0] == "trivial" and len(w) in (2, 3):
                return trivial_module(A, _int(w[1], "trivial", ln),
                                      _int(w[2], "degree", ln) if len(w) == 3 else 0)
            raise ValidationError(f"unknown module builtin {rest!r}", line=ln)
        if kw == "basis":
            names, degrees = [], []
            for item in rest.split():
                nm, _, dg = item.partition(":")
                names.append(nm)
                degrees.append(_int(dg or 0, "degree", ln, col))
        elif kw in ("left", "right"):
            if names is None:
                raise ValidationError("action before basis", line=ln, column=col)
            args, rhs, rc = _equation(rest, ln, b.rest_col[ln])
            if kw == "left":
                a, m = args
            else:
                m, a = args
            if a not in A.names or m not in names:
                raise ValidationError(f"unknown name in {rest!r}", line=ln, column=col)
            target = left if kw == "left" else right
            target[(A.names.index(a), names.index(m))] = parse_expr(rhs, names, ring, ln, rc)
        else:
            raise ParseError(f"unknown module entry {kw!r}", ln, col)
    if names is None:
        raise ValidationError("module block needs a basis or a builtin", line=b.line)
    if A.operad.name == "com" and not right:
        right = None
    return module_from_actions(A, names, degrees, left=left, right=right)


def operad_from_block(spec: InputSpec):
    """``builtin NAME`` with optional ``max_arity`` and ``perturb m i n a b = k:c ...``
    overrides of single composition entries (for exercising failure reports)."""
    from .operad import build_standard
    b = spec.operad
    if b is None:
        raise ValidationError("this command needs an operad block")
    ring = spec.ring
    name = None
    N = 5
    edits = []
    for kw, rest, ln, col in b.entries:
        if kw == "builtin":
            name = rest
        elif kw == "max_arity":
            N = _int(rest, "max_arity", ln, col)
        elif kw == "perturb":
            if "=" not in rest:
                raise ParseError("expected '='", ln, col)
            lhs, rhs = rest.split("=", 1)
            try:
                m, i, n, a, bb = (int(x) for x in lhs.split())
                vec = {}
                for item in rhs.split():
                    k, _, c = item.partition(":")
                    vec[int(k)] = ring(Fraction(c or 1))
            except (ValueError, ZeroDivisionError):
                raise ParseError("perturb m i n a b = k:c ...", ln, col) from None
            edits.append(((m, i, n), (a, bb), vec, ln))
        else:
            raise ParseError(f"unknown operad entry {kw!r}", ln, col)
    if name is None:
        raise ValidationError("operad block needs a builtin name", line=b.line)
    try:
        op = build_standard(name, ring, N)
    except ForgeError as exc:
        raise ValidationError(str(exc), line=b.line) from None
    for key, ab, vec, ln in edits:
        if key not in op.compositions:
            raise ValidationError(f"no composition {key}", line=ln)
        m, _, n = key
        if not (0 <= ab[0] < op.rank(m) and 0 <= ab[1] < op.rank(n)
                and all(0 <= k < op.rank(m + n - 1) for k in vec)):
            raise ValidationError("perturb index out of range", line=ln)
        op = op.with_composition_entry(key, ab, vec)
    return op
