import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from twosorted import space
from twosorted.generate import DEFAULT_SIGNATURE, FormulaGenerator
from twosorted.syntax import (And, ArityError, Cross, Elem, FormulaClass, FormulaError, HVar, In, Not, Or, ParseError,
                              Quant, Rel, Sort, SortError, SVar, replace_free, classify, format_formula, free_vars, parse_formula,
                              parse_formulas, parse_rational, parse_set, substitute)
from twosorted.transforms import build_sup_formula, strong_negation


def formulas(**kw):
    def make(seed, depth):
        rng = random.Random(seed)
        return FormulaGenerator(rng, **kw).formula(depth, hvars=["x", "y"])
    return st.builds(make, st.integers(0, 10 ** 6), st.integers(0, 4))


class TestParse:
    def test_satom(self):
        phi = parse_formula("(in ((g x)) (box (0 1/2)))")
        assert phi == In((Cross("g", (HVar("x"),)),), space.box((0, F(1, 2))))

    def test_f_formula(self):
        phi = parse_formula("(forallS e (or (in (e) (box (0 0))) (existsH x (in ((g x)) (box (0 1/2))))))")
        assert isinstance(phi, Quant) and phi.kind == "forallS"
        assert classify(phi) is FormulaClass.F

    def test_h_variable_in_s_position(self):
        with pytest.raises(SortError):
            parse_formula("(in (x) (box (0 1)))", sorts={"x": Sort.H})

    def test_h_variable_bound_by_h_quantifier_in_s_position(self):
        with pytest.raises(SortError):
            parse_formula("(forallH x (in (x) (box (0 1))))")

    def test_error_location(self):
        with pytest.raises(ParseError) as exc:
            parse_formula("(and\n  (in ((g x)) (box (0 1/2)))\n  (in ((g x)) (box (0 3/2))))")
        assert exc.value.line == 3

    def test_unbalanced(self):
        with pytest.raises(ParseError):
            parse_formula("(in ((g x)) (box (0 1/2))")

    def test_dimension_mismatch(self):
        with pytest.raises(ArityError):
            parse_formula("(in ((g x) (g y)) (box (0 1)))")

    def test_arity_checked_against_signature(self):
        with pytest.raises(ArityError):
            parse_formula("(R x)", DEFAULT_SIGNATURE)

    def test_arity_consistent_without_signature(self):
        with pytest.raises(ArityError):
            parse_formula("(and (R x y) (R x))")

    def test_decimal_literal(self):
        assert parse_rational("0.25") == F(1, 4)
        assert parse_set("(point 0.5)") == space.point(F(1, 2))

    def test_sugar(self):
        assert parse_set("(diag 2)") == space.diag(2)
        assert format_formula(parse_formula("(in (a b) (diag 2))", sorts=None)) == "(in (a b) (diag 2))"

    def test_element_sigil(self):
        phi = parse_formula("(in ((g @a)) (point 1/4))")
        assert phi.terms[0].args == (Elem("a"),)

    def test_many(self):
        assert len(parse_formulas("(= x y) ; comment\n(R x y)")) == 2


class TestClassify:
    def test_lh(self):
        assert classify(parse_formula("(forallH x (existsH y (R x y)))")) is FormulaClass.LH

    def test_sup_formula_is_f_not_h(self):
        phi = build_sup_formula(Cross("g", (HVar("x"),)), F(3, 4))
        assert classify(phi) is FormulaClass.F

    def test_negated_satom_is_general(self):
        assert classify(parse_formula("(not (in ((g x)) (box (0 1/2))))")) is FormulaClass.L

    def test_negated_lh_inside_f(self):
        phi = parse_formula("(and (not (R x y)) (in ((g x)) (box (0 1/2))))")
        assert classify(phi) is FormulaClass.H

    @given(formulas(), formulas(), st.sampled_from(["and", "or", "forallH", "existsH", "forallS", "existsS"]))
    def test_closure_under_connectives(self, a, b, op):
        if op in ("and", "or"):
            combined = (And if op == "and" else Or)((a, b))
        else:
            combined = Quant(op, "x" if op.endswith("H") else "s", a)
        assert classify(combined) <= FormulaClass.F

    @given(formulas(), st.integers(1, 8))
    def test_sneg_stays_f(self, phi, k):
        assert classify(strong_negation(phi, F(1, 2 ** k))) <= FormulaClass.F


class TestVariables:
    def test_free(self):
        assert free_vars(parse_formula("(in ((g x)) (box (0 1/2)))")) == (["x"], [])

    def test_bound_s(self):
        assert free_vars(parse_formula("(forallS e (in (e n) (diag 2)))")) == ([], ["n"])

    def test_closed(self):
        assert free_vars(parse_formula("(forallH x (R x x))")) == ([], [])

    def test_substitute_element(self):
        phi = substitute(parse_formula("(in ((g x)) (box (0 1/2)))"), {"x": "a"})
        assert format_formula(phi) == "(in ((g @a)) (box (0 1/2)))"

    def test_substitute_rational(self):
        phi = substitute(parse_formula("(in (n) (point 0))"), {"n": F(1, 4)})
        assert phi == In((space.Const(F(1, 4)),), space.point(0))

    def test_substitute_skips_bound(self):
        phi = parse_formula("(forallH x (R x x))")
        assert substitute(phi, {"x": "a"}) == phi

    def test_substitute_unknown(self):
        with pytest.raises(FormulaError):
            substitute(parse_formula("(R x x)"), {"z": "a"})

    def test_substitute_unsorted(self):
        with pytest.raises(FormulaError):
            substitute(parse_formula("(in (n) (point 0))"), {"n": "a"})
        with pytest.raises(FormulaError):
            substitute(parse_formula("(R x x)"), {"x": F(1, 2)})

    def test_capture_avoided(self):
        phi = parse_formula("(existsH y (R x y))")
        out = replace_free(phi, {"x": HVar("y")})
        assert isinstance(out, Quant) and out.var != "y"
        assert free_vars(out) == (["y"], [])

    @given(formulas())
    def test_substitute_closes(self, phi):
        h, s = free_vars(phi)
        binding = {**{x: "a" for x in h}, **{v: F(1, 2) for v in s}}
        assert free_vars(substitute(phi, binding)) == ([], [])


@given(formulas())
def test_roundtrip(phi):
    assert parse_formula(format_formula(phi), DEFAULT_SIGNATURE) == phi


@given(formulas(), st.integers(1, 6))
def test_roundtrip_after_sneg(phi, k):
    psi = strong_negation(phi, F(1, 2 ** k))
    assert parse_formula(format_formula(psi), DEFAULT_SIGNATURE) == psi


def test_structural_equality_of_rel_vs_not():
    assert Not(Rel("R", (HVar("x"),))) != Rel("R", (HVar("x"),))
    assert SVar("x") != HVar("x")
