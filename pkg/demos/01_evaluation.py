"""Evaluating two-sorted formulas in a small structure.

Run with: python3 demos/01_evaluation.py
"""
from fractions import Fraction

from twosorted.semantics import evaluate, eval_approx_sat
from twosorted.structures import load_structure
from twosorted.syntax import Cross, HVar, classify, format_formula, parse_formula
from twosorted.transforms import build_sup_formula

M = load_structure("""
[sig]
funS g/1
[domain]
a b
[funS g]
a->1/4 b->3/4
""")

# home-sort quantifiers run over the two elements
for text in ["(existsH x (in ((g x)) (box (0 1/2))))",
             "(forallH x (in ((g x)) (box (0 1/2))))"]:
    phi = parse_formula(text, M.signature)
    print(classify(phi).name, evaluate(M, phi).value.value, text)

# a space-sort quantifier is decided by branch-and-bound over [0, 1]
phi = parse_formula("(forallS e (or (in (e) (box (1/2 1))) (in ((csum (g @a) e)) (box (0 3/4)))))")
v = evaluate(M, phi)
print("forallS verdict:", v.value.value, "resolution:", v.resolution)

# a false universal comes with a rational counterexample
v = evaluate(M, parse_formula("(forallS e (in ((csum (g @a) e)) (box (0 3/4))))"))
print("counterexample:", {k: str(r) for k, r in v.witness.items()})

# the supremum of g is definable by an F-formula
g = Cross("g", (HVar("x"),))
for tau in (Fraction(1, 2), Fraction(3, 4)):
    sup = build_sup_formula(g, tau)
    print(f"sup g = {tau}?", evaluate(M, sup).value.value)
print(format_formula(build_sup_formula(g, Fraction(3, 4))))

# approximate satisfaction walks the radii 1/2, 1/4, ..., 1/64
v = eval_approx_sat(M, parse_formula("(in ((g @a)) (point 3/4))"))
print("approx-sat:", v.value.value, "refuted at eps =", v.eps)
