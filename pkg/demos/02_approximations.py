"""Approximations, strong negations and the interpolant chain.

Run with: python3 demos/02_approximations.py
"""
import random
from fractions import Fraction

from twosorted.generate import FormulaGenerator, random_env, random_structure
from twosorted.semantics import evaluate
from twosorted.syntax import format_formula, parse_formula
from twosorted.transforms import approximate, interpolants, strong_negation

phi = parse_formula("(in ((g x)) (point 1/2))")
eps = Fraction(1, 5)
print("phi        ", format_formula(phi))
print("approx     ", format_formula(approximate(phi, eps)))
print("strong neg ", format_formula(strong_negation(phi, eps)))
t0, t1, ap = interpolants(phi, eps)
print("sneg0      ", format_formula(t0))
print("sneg1      ", format_formula(t1))

# density: approximating twice adds the radii
e1, e2 = Fraction(1, 8), Fraction(1, 16)
print("density holds:", approximate(approximate(phi, e1), e2) == approximate(phi, e1 + e2))

# sample random triples and tally the verdict patterns of phi and its strong negation
rng = random.Random(0)
tally = {}
for _ in range(300):
    m = random_structure(rng)
    psi = FormulaGenerator(rng, m.signature).formula(rng.randint(0, 3), hvars=["x"])
    env = random_env(rng, m, psi)
    key = (evaluate(m, psi, env).value.value, evaluate(m, strong_negation(psi, Fraction(1, 8)), env).value.value)
    tally[key] = tally.get(key, 0) + 1
for (a, b), n in sorted(tally.items()):
    print(f"phi={a:<7} sneg={b:<7} {n}")
print("phi and its strong negation never both true:", ("True", "True") not in tally)
