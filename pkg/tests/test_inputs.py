import os
import random

import pytest

from operad_forge.errors import AntisymmetryError, ForgeError, ParseError, ValidationError
from operad_forge.inputs import (algebra_from_block, lie_from_block, module_from_block,
                                 operad_from_block, parse_expr, parse_spec, parse_text)
from operad_forge.linalg import QQ, ZZ

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
SPECS = sorted(f for f in os.listdir(os.path.join(ROOT, "inputs")) if not f.startswith("bad_"))


def spec(name, ring=None):
    return parse_spec(os.path.join(ROOT, "inputs", name), ring)


@pytest.mark.parametrize("name", SPECS)
def test_shipped_inputs_parse(name):
    spec(name)


def test_expressions():
    names = ["e", "f", "h"]
    assert parse_expr("2*e - f + 1/2 h", names, QQ) == {0: 2, 1: -1, 2: QQ(1) / 2}
    assert parse_expr("0", names, QQ) == {}
    assert parse_expr("e - e", names, QQ) == {}
    with pytest.raises(ValidationError):
        parse_expr("1/2*e", names, ZZ)
    with pytest.raises(ValidationError):
        parse_expr("q", names, QQ)
    with pytest.raises(ParseError):
        parse_expr("e f", names, QQ)


def test_parse_error_position():
    text = "ring QQ\nlie g {\n  basis e f\n  bracket e f = 2 * * e\n}\n"
    with pytest.raises(ParseError) as exc:
        parse_text(text)
    assert "line 4, column 21" in str(exc.value)


def test_unknown_name_position():
    text = "ring QQ\nlie g {\n  basis e f\n  bracket e f = 2*e + q\n}\n"
    with pytest.raises(ValidationError) as exc:
        parse_text(text)
    assert "line 4, column 23" in str(exc.value)


def test_antisymmetry_reports_pair():
    with pytest.raises(AntisymmetryError) as exc:
        spec("bad_antisym.spec")
    assert exc.value.context["pair"] == (0, 0)


def test_nonprime_field_rejected():
    with pytest.raises(ValidationError) as exc:
        spec("bad_ring.spec")
    assert "E_RING" in str(exc.value) and "line 1" in str(exc.value)


def test_ring_override():
    assert spec("sl2.spec", "GF(7)").ring.characteristic == 7


def test_structure_rules():
    with pytest.raises(ValidationError):
        parse_text("ring QQ\nlie g {\n builtin sl2\n}\nalgebra A {\n builtin symmetric 2\n}\n")
    with pytest.raises(ValidationError):
        parse_text("ring QQ\nmodule M {\n builtin regular\n}\n")
    with pytest.raises(ValidationError):
        parse_text("ring QQ\noptions {\n colour blue\n}\n")
    with pytest.raises(ValidationError):
        parse_text("lie g {\n builtin sl2\n}\n")
    with pytest.raises(ParseError):
        parse_text("ring QQ\nlie g {\n builtin sl2\n")


def test_size_guards():
    with pytest.raises(ValidationError):
        parse_text("ring QQ\nalgebra A {\n builtin symmetric 40\n}\n")
    with pytest.raises(ValidationError):
        parse_text("ring QQ\noptions {\n max_degree 500\n}\n").int_option("max_degree")
    with pytest.raises(ValidationError):
        parse_text("ring QQ\nlie g {\n builtin abelian99\n}\n")


def test_explicit_algebra_and_module():
    s = spec("dual.spec")
    A = algebra_from_block(s, 3)
    assert A.rank == 2 and A.augmented and not A.truncated
    text = ("ring QQ\nalgebra A {\n operad ass\n basis one:0 x:1\n unit one\n product x x = 0\n}\n"
            "module M over A {\n basis m:0 n:1\n left x m = n\n right m x = n\n}\n")
    s = parse_text(text)
    M = module_from_block(s, algebra_from_block(s, 3))
    assert M.rank == 2


def test_inhomogeneous_product_rejected():
    text = "ring QQ\nalgebra A {\n basis one:0 x:1\n unit one\n product x x = x\n}\n"
    with pytest.raises(ValidationError):
        parse_text(text)


def test_lie_and_operad_blocks():
    g = lie_from_block(spec("sl2.spec"))
    assert g.names == ("e", "f", "h")
    op = operad_from_block(spec("perturbed.spec"))
    assert op.max_arity == 3


def _mutants(seed, count):
    texts = [open(os.path.join(ROOT, "inputs", n)).read() for n in SPECS]
    toks = ["0", "3", "1:1", "x", "1/2", "*", "=", "{", "}", "-1", "lie", "GF(5)", "ZZ",
            "builtin", "trivial", "basis", "a:b", "product", "left", "-", "over", "7"]
    rng = random.Random(seed)
    for _ in range(count):
        lines = rng.choice(texts).split("\n")
        k = rng.randrange(len(lines))
        w = lines[k].split()
        op = rng.randrange(3)
        if op == 0 and w:
            w[rng.randrange(len(w))] = rng.choice(toks)
        elif op == 1:
            w.insert(rng.randrange(len(w) + 1), rng.choice(toks))
        elif w:
            del w[rng.randrange(len(w))]
        lines[k] = " ".join(w)
        yield "\n".join(lines)


def test_mutated_inputs_fail_cleanly():
    for text in _mutants(11, 400):
        try:
            s = parse_text(text)
            if s.algebra is not None:
                A = algebra_from_block(s, 3)
                if s.module is not None:
                    module_from_block(s, A)
            if s.operad is not None:
                operad_from_block(s)
        except ForgeError:
            pass
