"""Finite bounded (pseudo)metric spaces as standard structures.

A metric space is a structure file with a binary cross-sort symbol ``d``.
The module validates the axioms exhaustively, builds the uniform-continuity
sentences for table functions, and checks x ~_t y against d(x, y) = 0.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import space
from .semantics import DEFAULT_DELTA, evaluate
from .structures import StandardStructure, StructureError, load_structure
from .syntax import (Cross, Elem, FormulaError, FunH, HVar, In, Or, forall_h, format_formula, free_vars,
                     replace_free)
from .space import Apply
from .transforms import build_sim_formula

METRIC_SYMBOL = "d"


class MetricAxiomError(StructureError):
    def __init__(self, axiom: str, elements: tuple, msg: str):
        super().__init__(f"{axiom}: {msg}")
        self.axiom = axiom
        self.elements = elements


def metric_violations(m: StandardStructure, pseudometric: bool = False, d: str = METRIC_SYMBOL):
    """Yield every axiom violation as a :class:`MetricAxiomError` (not raised)."""
    table = m.funcs_s[d]
    dom = m.domain
    for a in dom:
        if table[(a, a)] != 0:
            yield MetricAxiomError("reflexivity", (a,), f"d({a},{a}) = {table[(a, a)]} is not 0")
    for a, b in itertools.combinations(dom, 2):
        if table[(a, b)] != table[(b, a)]:
            yield MetricAxiomError("symmetry", (a, b),
                                   f"d({a},{b}) = {table[(a, b)]} but d({b},{a}) = {table[(b, a)]}")
        if not pseudometric and table[(a, b)] == 0:
            yield MetricAxiomError("identity", (a, b), f"d({a},{b}) = 0 for distinct points")
    for a, b, c in itertools.product(dom, repeat=3):
        if table[(a, c)] > table[(a, b)] + table[(b, c)]:
            yield MetricAxiomError(
                "triangle", (a, b, c),
                f"d({a},{c}) = {table[(a, c)]} > d({a},{b}) + d({b},{c}) = {table[(a, b)] + table[(b, c)]}")


def validate_metric(m: StandardStructure, pseudometric: bool = False, d: str = METRIC_SYMBOL) -> None:
    if m.signature.funcs_s.get(d) != 2:
        raise StructureError(f"a metric space needs a binary cross-sort symbol {d!r} ([funS {d}])")
    err = next(metric_violations(m, pseudometric, d), None)
    if err is not None:
        raise err


def load_metric_space(text: str, pseudometric: bool = False) -> StandardStructure:
    m = load_structure(text)
    validate_metric(m, pseudometric)
    return m


def load_metric_space_file(path, pseudometric: bool = False) -> StandardStructure:
    with open(path, encoding="utf-8") as fh:
        return load_metric_space(fh.read(), pseudometric)


def tuple_distance(m: StandardStructure, a: Sequence[str], b: Sequence[str], d: str = METRIC_SYMBOL) -> Fraction:
    """Supremum metric on M^n."""
    if len(a) != len(b):
        raise ValueError("tuples of different length")
    return max((m.funcs_s[d][(x, y)] for x, y in zip(a, b)), default=Fraction(0))


# ---------------------------------------------------------------------------
# uniform continuity


def _check_modulus(eps, delta):
    eps, delta = space.as_fraction(eps), space.as_fraction(delta)
    if not (0 < eps <= 1 and 0 < delta <= 1):
        raise ValueError(f"moduli must lie in (0, 1], got eps={eps}, delta={delta}")
    return eps, delta


def uniform_continuity_sentence(f: str, arity: int, eps, delta, kind: str = "funH", d: str = METRIC_SYMBOL):
    """forall x forall y (d(x,y) in [delta,1] or d(f x, f y) in [0,eps]).

    For tuples, d(x,y) in [delta,1] is the disjunction over components (the
    sup metric is at least delta).  For a cross-sort f the conclusion is
    (f x, f y) in the eps-neighbourhood of the diagonal.
    """
    eps, delta = _check_modulus(eps, delta)
    xs = [f"x{i}" for i in range(1, arity + 1)] if arity != 1 else ["x"]
    ys = [f"y{i}" for i in range(1, arity + 1)] if arity != 1 else ["y"]
    far = [In((Cross(d, (HVar(x), HVar(y))),), space.box((delta, 1))) for x, y in zip(xs, ys)]
    if kind == "funH":
        fx = FunH(f, tuple(HVar(x) for x in xs))
        fy = FunH(f, tuple(HVar(y) for y in ys))
        close = In((Cross(d, (fx, fy)),), space.box((0, eps)))
    elif kind == "funS":
        fx = Cross(f, tuple(HVar(x) for x in xs))
        fy = Cross(f, tuple(HVar(y) for y in ys))
        # diagonal fattening widens |u - v| by twice the radius
        close = In((fx, fy), space.set_fatten(space.diag(2), eps / 2))
    else:
        raise ValueError(f"unknown function kind {kind!r}")
    phi = Or(tuple(far) + (close,))
    for v in reversed(xs + ys):
        phi = forall_h(v, phi)
    return phi


def gen_uniform_continuity_sentences(f: str, moduli, signature) -> list:
    """One sentence per (eps, delta) pair for the H- or cross-sort symbol f."""
    if f in signature.funcs_h:
        kind, k = "funH", signature.funcs_h[f]
    elif f in signature.funcs_s and f != METRIC_SYMBOL:
        kind, k = "funS", signature.funcs_s[f]
    else:
        raise FormulaError(f"{f!r} is not a declared function symbol")
    if k == 0:
        raise FormulaError(f"{f} is a constant; uniform continuity is vacuous")
    return [uniform_continuity_sentence(f, k, e, dl, kind) for e, dl in moduli]


def lipschitz_violation(m: StandardStructure, f: str, constant=1, d: str = METRIC_SYMBOL):
    """A pair of argument tuples breaking the Lipschitz bound for the table
    function ``f`` (sup metric on arguments), or None."""
    constant = space.as_fraction(constant)
    if f in m.funcs_h:
        table, k = m.funcs_h[f], m.signature.funcs_h[f]

        def dist(u, v):
            return m.funcs_s[d][(u, v)]
    else:
        table, k = m.funcs_s[f], m.signature.funcs_s[f]

        def dist(u, v):
            return abs(u - v)
    for a, b in itertools.product(itertools.product(m.domain, repeat=k), repeat=2):
        if dist(table[a], table[b]) > constant * tuple_distance(m, a, b, d):
            return a, b
    return None


# ---------------------------------------------------------------------------
# ~_t versus distance


def default_term_corpus(params: Sequence[str] = ()) -> list:
    """S-terms t(x, z): the distances d(x, z), d(z, x) and d(x, p) for element
    names p in ``params``, and every csum/cdiff/min/max of two of them."""
    others = [HVar("z")] + [Elem(p) for p in params]
    leaves = [Cross(METRIC_SYMBOL, (HVar("x"), o)) for o in others]
    leaves.append(Cross(METRIC_SYMBOL, (HVar("z"), HVar("x"))))
    out = list(leaves)
    for op in ("csum", "cdiff", "min", "max"):
        out += [Apply(op, (s, t)) for s, t in itertools.permutations(leaves, 2)]
    return out


@dataclass
class SimReport:
    a: tuple
    b: tuple
    distance: Fraction
    direction1: list = field(default_factory=list)  # (term, verdict) for every corpus term
    direction2: object = None  # (term, verdict) for the d(x, z) witness with z := a

    @property
    def direction1_ok(self) -> bool:
        return self.distance != 0 or all(v.is_true for _, v in self.direction1)

    @property
    def direction2_ok(self) -> bool:
        return self.distance == 0 or (self.direction2 is not None and self.direction2[1].is_false)

    @property
    def ok(self) -> bool:
        return self.direction1_ok and self.direction2_ok

    def lines(self) -> list:
        a, b = " ".join(self.a), " ".join(self.b)
        out = [f"summary a=({a}) b=({b}) distance={self.distance} "
               f"direction1={'pass' if self.direction1_ok else 'fail'} "
               f"direction2={'pass' if self.direction2_ok else 'fail'}"]
        for t, v in self.direction1:
            out.append(f"check=sim outcome={v.value.value} formula={format_formula(t)}")
        if self.direction2 is not None:
            t, v = self.direction2
            out.append(f"check=witness outcome={v.value.value} formula={format_formula(t)}")
        return out


def _instantiate(t, n: int):
    """Generalise a corpus term over x to n components: x -> x1..xn joined by max."""
    if n == 1:
        return t
    parts = [replace_free(t, {"x": HVar(f"x{i}")}) for i in range(1, n + 1)]
    out = parts[0]
    for p in parts[1:]:
        out = Apply("max", (out, p))
    return out


def check_sim_vs_distance(m: StandardStructure, a: Sequence[str], b: Sequence[str], term_corpus=None,
                          delta=DEFAULT_DELTA) -> SimReport:
    """Both directions of x ~_S y <-> d(x, y) = 0 on a finite term corpus.

    Direction 1: if d(a, b) = 0 then a ~_t b for every corpus term.
    Direction 2: if d(a, b) > 0 the term d(x, z) with z := a separates a from b.
    """
    a, b = tuple(a), tuple(b)
    if len(a) != len(b):
        raise ValueError("a and b must have the same length")
    if not a:
        raise ValueError("tuples must be nonempty")
    n = len(a)
    xs = [f"x{i}" for i in range(1, n + 1)] if n > 1 else ["x"]
    ys = [f"{x}'" for x in xs]
    dist = tuple_distance(m, a, b)
    report = SimReport(a, b, dist)
    env = {**dict(zip(xs, a)), **dict(zip(ys, b))}
    if dist == 0:
        for t in term_corpus if term_corpus is not None else default_term_corpus(m.domain):
            t = _instantiate(t, n)
            h = free_vars(t)[0]
            zs = [v for v in h if v not in xs]
            phi = build_sim_formula(t, xs, zs, ys=ys)
            report.direction1.append((phi, evaluate(m, phi, env, delta)))
    else:
        t = Cross(METRIC_SYMBOL, (HVar(xs[0]), Elem(a[0])))
        for x, e in zip(xs[1:], a[1:]):
            t = Apply("max", (t, Cross(METRIC_SYMBOL, (HVar(x), Elem(e)))))
        phi = build_sim_formula(t, xs, [], ys=ys)
        report.direction2 = (phi, evaluate(m, phi, env, delta))
    return report
