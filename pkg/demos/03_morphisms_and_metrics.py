"""Checking partial maps and finite metric spaces.

Run with: python3 demos/03_morphisms_and_metrics.py
"""
from fractions import Fraction

from twosorted.metric import check_sim_vs_distance, gen_uniform_continuity_sentences, load_metric_space
from twosorted.morphisms import (PartialMap, check_approx_f_elementary, check_f_elementary, generate_corpus,
                                 tarski_vaught_check)
from twosorted.semantics import evaluate
from twosorted.structures import load_structure
from twosorted.syntax import format_formula


def single(value):
    return load_structure(f"[sig]\nfunS g/1\n[domain]\na\n[funS g]\na->{value}\n")


M = single("1/4")
corpus = generate_corpus([M], depth=2)
print("corpus size:", len(corpus.entries))

# moving g(a) a little breaks exact preservation but not approximate preservation
for value in ("1/4", "26/100", "1/2"):
    f = PartialMap(M, single(value), {"a": "a"})
    print(f"g(a) -> {value:<7} exact: {check_f_elementary(f, corpus).status:<5} "
          f"approx: {check_approx_f_elementary(f, corpus).status}")

# Tarski-Vaught for the substructure {a} of a two-element structure
N = load_structure("[sig]\nfunS g/1\n[domain]\na b\n[funS g]\na->1/4 b->3/4\n")
report = tarski_vaught_check(N.restrict(["a"]), N, generate_corpus([N], depth=1))
print(report.summary())

# a pseudometric: a and b are at distance 0, c is elsewhere
X = load_metric_space("""
[sig]
funS d/2
funH f/1
[domain]
a b c
[funS d]
(a a)->0 (a b)->0 (a c)->1/2
(b a)->0 (b b)->0 (b c)->1/2
(c a)->1/2 (c b)->1/2 (c c)->0
[funH f]
a->b b->a c->c
""", pseudometric=True)
for a, b in (("a", "b"), ("a", "c")):
    print(check_sim_vs_distance(X, [a], [b]).lines()[0])

for phi in gen_uniform_continuity_sentences("f", [(Fraction(1, 4), Fraction(1, 4))], X.signature):
    print(evaluate(X, phi).value.value, format_formula(phi))
