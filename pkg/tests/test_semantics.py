import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

import oracle
from twosorted.generate import FormulaGenerator, random_env, random_structure
from twosorted.semantics import EpsSchedule, Truth, evaluate, eval_approx_sat, kleene_and, kleene_or
from twosorted.structures import UnboundVariable, load_structure
from twosorted.syntax import Cross, HVar, Quant, format_formula, parse_formula, substitute
from twosorted.transforms import build_sup_formula

M = load_structure("[sig]\nfunS g/1\n[domain]\na b\n[funS g]\na->1/4 b->3/4\n")


def ev(text, m=M, env=None, **kw):
    return evaluate(m, parse_formula(text, m.signature), env, **kw)


def triples(s_quantifiers=True, depth=4):
    def make(seed):
        rng = random.Random(seed)
        m = random_structure(rng)
        phi = FormulaGenerator(rng, m.signature, s_quantifiers=s_quantifiers).formula(
            rng.randint(0, depth), hvars=["x", "y"][: rng.randint(1, 2)])
        return m, phi, random_env(rng, m, phi)
    return st.integers(0, 10 ** 7).map(make)


class TestExamples:
    def test_exists_h(self):
        assert ev("(existsH x (in ((g x)) (box (0 1/2))))").is_true

    def test_forall_h(self):
        assert ev("(forallH x (in ((g x)) (box (0 1/2))))").is_false

    def test_forall_s_branch_and_bound(self):
        v = ev("(forallS e (or (in (e) (box (1/2 1))) (in ((csum (g @a) e)) (box (0 3/4)))))", delta=F(1, 64))
        assert v.is_true
        # the grid cross-check at step 1/256
        phi = parse_formula("(or (in (e) (box (1/2 1))) (in ((csum (g @a) e)) (box (0 3/4))))")
        assert all(oracle.holds(M, phi, {"e": r}) for r in oracle.grid(256))

    def test_sup_formula(self):
        t = Cross("g", (HVar("x"),))
        assert evaluate(M, build_sup_formula(t, F(3, 4))).is_true
        assert evaluate(M, build_sup_formula(t, F(1, 2))).is_false

    def test_false_universal_has_witness(self):
        v = ev("(forallS e (in ((csum (g @a) e)) (box (0 3/4))))")
        assert v.is_false
        (name, r), = v.witness.items()
        assert name == "e" and F(1, 4) + r > F(3, 4)

    def test_budget_exhaustion_is_unknown(self):
        v = ev("(existsS e (in (e e) (halfspace (1 -1) -1/1000)))", budget=10)
        assert v.is_unknown and v.exhausted

    def test_off_grid_witness(self):
        # the only witness is 19/24, which bisection never visits
        v = ev("(existsS s (in ((pwl ((0 0) (3/4 0) (1 3/4)) s)) (point 1/8)))")
        assert v.is_true and v.witness == {"s": F(19, 24)}
        phi = parse_formula("(in ((pwl ((0 0) (3/4 0) (1 3/4)) s)) (point 1/8))")
        assert oracle.holds(M, phi, {"s": F(19, 24)})

    def test_counterexample_in_gap_below_delta(self):
        v = ev("(forallS s (or (in (s) (box (0 333/1000))) (in (s) (box (1/3 1)))))")
        assert v.is_false
        (r,) = v.witness.values()
        assert F(333, 1000) < r < F(1, 3)

    def test_errors(self):
        with pytest.raises(UnboundVariable):
            ev("(in ((g x)) (point 0))")
        with pytest.raises(ValueError):
            ev("(existsS e (in (e) (point 0)))", delta=0)

    def test_not_evaluated_kleene(self):
        assert ev("(not (in ((g x)) (point 1/4)))", env={"x": "b"}).is_true


class TestApproxSat:
    def test_exact_value(self):
        assert eval_approx_sat(M, parse_formula("(in ((g @a)) (point 1/4))")).is_true

    def test_refuted_at_quarter(self):
        v = eval_approx_sat(M, parse_formula("(in ((g @a)) (point 3/4))"))
        assert v.is_false and v.eps == F(1, 4)

    def test_schedule_validation(self):
        with pytest.raises(ValueError):
            EpsSchedule((F(1, 4), F(1, 2)))
        with pytest.raises(ValueError):
            EpsSchedule(())
        with pytest.raises(ValueError):
            EpsSchedule((F(1, 2), F(0)))


def test_kleene_tables():
    T, Fa, U = Truth.TRUE, Truth.FALSE, Truth.UNKNOWN
    assert kleene_and([T, U]) is U and kleene_and([Fa, U]) is Fa
    assert kleene_or([Fa, U]) is U and kleene_or([T, U]) is T
    assert ~U is U and ~T is Fa


@given(triples(s_quantifiers=False))
def test_exact_without_space_quantifiers(t):
    m, phi, env = t
    v = evaluate(m, phi, env)
    assert not v.is_unknown
    assert v.is_true == oracle.holds(m, phi, env)


@given(triples())
def test_sound_against_grid_for_single_space_quantifier(t):
    # with one top-level space quantifier the grid is a sound under/over
    # approximation in the matching direction
    m, phi, env = t
    if not (isinstance(phi, Quant) and phi.kind.endswith("S")):
        return
    v = evaluate(m, phi, env)
    body_env = dict(env)
    grid_vals = [oracle.holds(m, phi.body, {**body_env, phi.var: r}, oracle.grid(32)) for r in oracle.grid(32)]
    if phi.kind == "forallS" and v.is_true:
        assert all(grid_vals)
    if phi.kind == "existsS" and v.is_false:
        assert not any(grid_vals)
    if v.witness:
        (name, r), = v.witness.items()
        assert oracle.holds(m, phi.body, {**env, name: r}, oracle.grid(32)) == (phi.kind == "existsS")


@given(triples(depth=3), st.integers(2, 5))
def test_refinement_monotone(t, k):
    m, phi, env = t
    coarse = evaluate(m, phi, env, delta=F(1, 2 ** k))
    fine = evaluate(m, phi, env, delta=F(1, 2 ** (k + 2)))
    if not coarse.is_unknown:
        assert fine.value is coarse.value


@given(triples(depth=3))
def test_deterministic(t):
    m, phi, env = t
    assert evaluate(m, phi, env) == evaluate(m, phi, env)


@given(triples(s_quantifiers=False, depth=3))
def test_substitution_commutes_with_evaluation(t):
    m, phi, env = t
    assert evaluate(m, substitute(phi, env), {}).value is evaluate(m, phi, env).value


def test_generated_formulas_print():
    rng = random.Random(5)
    gen = FormulaGenerator(rng)
    assert all(format_formula(gen.formula(3)) for _ in range(20))
