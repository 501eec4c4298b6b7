from fractions import Fraction as F

import pytest

from twosorted.space import Apply, Const
from twosorted.structures import (StructureError, UnboundVariable, dump_structure, load_structure, term_eval_h,
                                  term_eval_s)
from twosorted.syntax import Cross, Elem, FunH, HVar, SVar, parse_sterm

TWO = """
[sig]
funS g/1
[domain]
a b
[funS g]
a->1/4 b->3/4
"""

FULL = """
# every section kind
[sig] rel R/2 ; funH f/1 ; funH c/0 ; funS g/1 ; funS d/2
[domain] a b c
[rel R] (a b) (b c)
[funH f] a->b b->c c->a
[funH c] ->a
[funS g] a->1/4 b->3/4 c->1/2
[funS d] (a a)->0 (a b)->1/2 (a c)->1 (b a)->1/2 (b b)->0 (b c)->1/2 (c a)->1 (c b)->1/2 (c c)->0
"""


def test_load_two_elements():
    m = load_structure(TWO)
    assert m.domain == ("a", "b")
    assert m.funcs_s["g"] == {("a",): F(1, 4), ("b",): F(3, 4)}


def test_load_full_format():
    m = load_structure(FULL)
    assert ("a", "b") in m.relations["R"]
    assert m.funcs_h["c"] == {(): "a"}
    assert m.funcs_s["d"][("c", "b")] == F(1, 2)


def test_dump_roundtrip():
    m = load_structure(FULL)
    assert load_structure(dump_structure(m)) == m


@pytest.mark.parametrize("text, needle", [
    (TWO.replace("b->3/4", ""), "not total"),
    (TWO.replace("3/4", "3/2"), "outside"),
    (TWO.replace("[funS g]", "[funS h]"), "unknown"),
    (TWO.replace("a b\n", "a a\n"), "duplicate"),
    ("[sig]\nfunS h/1,1\n[domain]\na\n", "not supported"),
    ("[sig]\nfunS h/0\n[domain]\na\n", "arity"),
])
def test_load_errors(text, needle):
    with pytest.raises(StructureError, match=needle):
        load_structure(text)


def test_term_h():
    m = load_structure(FULL)
    assert term_eval_h(m, FunH("c"), {}) == "a"
    assert term_eval_h(m, FunH("f", (Elem("a"),)), {}) == "b"
    assert term_eval_h(m, FunH("f", (FunH("f", (HVar("x"),)),)), {"x": "a"}) == "c"


def test_term_h_unbound():
    with pytest.raises(UnboundVariable):
        term_eval_h(load_structure(FULL), HVar("x"), {})


def test_term_h_unknown_element():
    with pytest.raises(StructureError):
        term_eval_h(load_structure(FULL), Elem("zz"), {})


def test_term_s_builtins():
    m = load_structure(TWO)
    assert term_eval_s(m, Apply("cdiff", (Const(F(7, 10)), Const(F(1, 5)))), {}) == F(1, 2)
    assert term_eval_s(m, Apply("csum", (Const(F(3, 10)), Const(F(9, 10)))), {}) == 1
    assert term_eval_s(m, Cross("g", (Elem("a"),)), {}) == F(1, 4)


def test_term_s_unbound():
    with pytest.raises(UnboundVariable):
        term_eval_s(load_structure(TWO), SVar("e"), {})


def test_term_s_in_unit_interval():
    m = load_structure(FULL)
    t = parse_sterm("(scale 3 (csum (g x) (d x y)))", m.signature)
    for x in m.domain:
        for y in m.domain:
            assert 0 <= term_eval_s(m, t, {"x": x, "y": y}) <= 1


def test_restrict():
    m = load_structure(TWO)
    sub = m.restrict(["a"])
    assert sub.domain == ("a",) and sub.funcs_s["g"] == {("a",): F(1, 4)}


def test_restrict_not_closed():
    with pytest.raises(StructureError):
        load_structure(FULL).restrict(["a"])
