"""Certified three-valued evaluation in finite standard structures.

Home-sort quantifiers run over the finite domain.  Space-sort quantifiers
range over the whole interval [0, 1] and are decided by branch-and-bound:
the body is evaluated with the quantified variable bound to a rational
interval, and a TRUE/FALSE verdict on an interval is a claim about *every*
point of it.  Undecided intervals are bisected until they are narrower than
``delta``.  TRUE and FALSE are always sound; UNKNOWN is the price of
incompleteness.
"""

from __future__ import annotations

import enum
import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from . import space
from .space import BoxRelation
from .structures import StandardStructure, StructureError, UnboundVariable, term_eval_h, term_eval_s
from .space import Apply, BoxSet, HalfSpace
from .syntax import And, Cross, Eq, In, Not, Or, Quant, Rel, Sort, SVar, free_vars
from .transforms import approximate

DEFAULT_DELTA = Fraction(1, 64)
DEFAULT_BUDGET = 2 ** 20


class Truth(enum.Enum):
    TRUE = "True"
    FALSE = "False"
    UNKNOWN = "Unknown"

    def __invert__(self):
        if self is Truth.TRUE:
            return Truth.FALSE
        if self is Truth.FALSE:
            return Truth.TRUE
        return self

    @staticmethod
    def of(b: bool) -> "Truth":
        return Truth.TRUE if b else Truth.FALSE


def kleene_and(values: Iterable[Truth]) -> Truth:
    unknown = False
    for v in values:
        if v is Truth.FALSE:
            return v
        if v is Truth.UNKNOWN:
            unknown = True
    return Truth.UNKNOWN if unknown else Truth.TRUE


def kleene_or(values: Iterable[Truth]) -> Truth:
    unknown = False
    for v in values:
        if v is Truth.TRUE:
            return v
        if v is Truth.UNKNOWN:
            unknown = True
    return Truth.UNKNOWN if unknown else Truth.FALSE


@dataclass(frozen=True)
class Verdict:
    """Outcome of an evaluation.

    ``resolution`` is the narrowest interval width the evaluator examined.
    ``witness`` is a rational point deciding a top-level space quantifier
    (a counterexample for a false universal, an example for a true
    existential).  ``eps`` is set by :func:`eval_approx_sat` when a specific
    approximation radius refuted the formula.
    """

    value: Truth
    resolution: Fraction = Fraction(1)
    witness: Optional[Mapping[str, Fraction]] = None
    exhausted: bool = False
    eps: Optional[Fraction] = None

    @property
    def is_true(self) -> bool:
        return self.value is Truth.TRUE

    @property
    def is_false(self) -> bool:
        return self.value is Truth.FALSE

    @property
    def is_unknown(self) -> bool:
        return self.value is Truth.UNKNOWN


@dataclass(frozen=True)
class EpsSchedule:
    values: tuple = field(default_factory=lambda: tuple(Fraction(1, 2 ** k) for k in range(1, 7)))

    def __post_init__(self):
        vals = tuple(space.as_fraction(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if not vals:
            raise ValueError("schedule must be nonempty")
        if any(v <= 0 for v in vals):
            raise ValueError("schedule radii must be positive")
        if any(a <= b for a, b in zip(vals, vals[1:])):
            raise ValueError("schedule must be strictly decreasing")

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)


DEFAULT_SCHEDULE = EpsSchedule()


class Evaluator:
    def __init__(self, m: StandardStructure, delta=DEFAULT_DELTA, budget: int = DEFAULT_BUDGET):
        delta = space.as_fraction(delta)
        if delta <= 0:
            raise ValueError(f"delta must be positive, got {delta}")
        self.m = m
        self.delta = delta
        self.budget = budget
        self.boxes = 0
        self.finest = Fraction(1)
        self.exhausted = False
        self._intervals = 0
        self._witness = None

    # entry point
    def run(self, phi, env: Mapping[str, object]) -> Verdict:
        env = self._prepare(phi, env)
        self._witness = None
        value = self._eval(phi, env, top=True)
        return Verdict(value, self.finest, self._witness, self.exhausted and value is Truth.UNKNOWN)

    def _prepare(self, phi, env):
        h, s = free_vars(phi)
        out = {}
        dom = set(self.m.domain)
        for name in h:
            if name not in env:
                raise UnboundVariable(f"free H-variable {name} is not bound")
            if env[name] not in dom:
                raise StructureError(f"{env[name]!r} is not an element of the domain")
            out[name] = env[name]
        for name in s:
            if name not in env:
                raise UnboundVariable(f"free S-variable {name} is not bound")
            r = space.as_fraction(env[name])
            if not 0 <= r <= 1:
                raise ValueError(f"{name} = {r} outside [0, 1]")
            out[name] = r
        return out

    def _eval(self, phi, env, top=False) -> Truth:
        if isinstance(phi, Rel):
            args = tuple(term_eval_h(self.m, a, env) for a in phi.args)
            return Truth.of(args in self.m.relations[phi.name])
        if isinstance(phi, Eq):
            return Truth.of(term_eval_h(self.m, phi.left, env) == term_eval_h(self.m, phi.right, env))
        if isinstance(phi, In):
            return self._atom(phi, env)
        if isinstance(phi, And):
            return kleene_and(self._eval(c, env) for c in phi.children)
        if isinstance(phi, Or):
            return kleene_or(self._eval(c, env) for c in phi.children)
        if isinstance(phi, Not):
            return ~self._eval(phi.child, env)
        if isinstance(phi, Quant):
            if phi.sort is Sort.H:
                vals = (self._eval(phi.body, {**env, phi.var: e}) for e in self.m.domain)
                return kleene_and(vals) if phi.universal else kleene_or(vals)
            return self._space_quantifier(phi, env, top)
        raise TypeError(f"not a formula: {phi!r}")

    def _atom(self, phi: In, env) -> Truth:
        if not self._intervals:
            p = tuple(term_eval_s(self.m, t, env) for t in phi.terms)
            return Truth.of(space.set_member(phi.set, p))

        def leaf(node):
            if isinstance(node, SVar):
                v = env[node.name]
                return v if isinstance(v, tuple) else (v, v)
            if isinstance(node, Cross):
                r = term_eval_s(self.m, node, env)
                return r, r
            raise TypeError(node)

        b = tuple(space.interval_of(t, leaf) for t in phi.terms)
        rel = space.box_test(phi.set, b)
        if rel is BoxRelation.INSIDE:
            return Truth.TRUE
        if rel is BoxRelation.OUTSIDE:
            return Truth.FALSE
        return Truth.UNKNOWN

    def _space_quantifier(self, phi: Quant, env, top: bool) -> Truth:
        decisive = Truth.FALSE if phi.universal else Truth.TRUE
        var, body = phi.var, phi.body
        point_env = self._intervals == 0
        queue = deque([(space.ZERO, space.ONE)])
        unresolved = False
        while queue:
            if self.boxes >= self.budget:
                self.exhausted = True
                unresolved = True
                break
            lo, hi = queue.popleft()
            width = hi - lo
            self.boxes += 1
            if width < self.finest:
                self.finest = width
            self._intervals += 1
            try:
                v = self._eval(body, {**env, var: (lo, hi)})
            finally:
                self._intervals -= 1
            if v is decisive:
                if top:
                    self._witness = {var: lo}
                return v
            if v is not Truth.UNKNOWN:
                continue
            mid = lo + width / 2
            for p in (mid, lo, hi):
                if self._eval(body, {**env, var: p}) is decisive:
                    if top:
                        self._witness = {var: p}
                    return decisive
            if width / 2 >= self.delta:
                queue.append((lo, mid))
                queue.append((mid, hi))
            else:
                unresolved = True
        if unresolved:
            if point_env:
                for p in _crossing_points(self.m, body, var, env):
                    if self._eval(body, {**env, var: p}) is decisive:
                        if top:
                            self._witness = {var: p}
                        return decisive
            return Truth.UNKNOWN
        return ~decisive


# ---------------------------------------------------------------------------
# exact witness candidates
#
# With every other variable at a point value, each S-term of the body is a
# piecewise linear function of the quantified variable with rational
# breakpoints.  Atom truth can only change where a term crosses a set
# boundary, so those crossings (and the gaps between them) are the natural
# witness points that dyadic bisection never reaches.

_MAX_ASSIGNMENTS = 256


def _crossings(fn, knots, c) -> set:
    """Points s where the function fn, linear between consecutive knots, equals c."""
    out = set()
    vals = [fn(k) for k in knots]
    for (k0, v0), (k1, v1) in zip(zip(knots, vals), zip(knots[1:], vals[1:])):
        if v0 == c:
            out.add(k0)
        elif (v0 - c) * (v1 - c) < 0:
            out.add(k0 + (c - v0) * (k1 - k0) / (v1 - v0))
    if vals and vals[-1] == c:
        out.add(knots[-1])
    return out


def _knots(extra) -> list:
    return sorted({space.ZERO, space.ONE} | set(extra))


def _term_breaks(t, ev) -> set:
    """Breakpoints of the term t as a function of the quantified variable."""
    if not isinstance(t, Apply):
        return set()
    inner = set().union(*(_term_breaks(a, ev) for a in t.args))
    knots = _knots(inner)
    a = t.args
    if t.op == "csum":
        inner |= _crossings(lambda s: ev(a[0], s) + ev(a[1], s), knots, 1)
    elif t.op == "cdiff":
        inner |= _crossings(lambda s: ev(a[0], s) - ev(a[1], s), knots, 0)
    elif t.op in ("min", "max"):
        for u, v in itertools.combinations(a, 2):
            inner |= _crossings(lambda s, u=u, v=v: ev(u, s) - ev(v, s), knots, 0)
    elif t.op == "scale":
        for c in (0, 1):
            inner |= _crossings(lambda s: t.param * ev(a[0], s), knots, c)
    elif t.op == "pwl":
        for x, _ in t.param:
            inner |= _crossings(lambda s: ev(a[0], s), knots, x)
    return inner


def _set_crossings(c, terms, ev, knots) -> set:
    if isinstance(c, BoxSet):
        out = set()
        for t, (lo, hi) in zip(terms, c.intervals):
            out |= _crossings(lambda s, t=t: ev(t, s), knots, lo)
            out |= _crossings(lambda s, t=t: ev(t, s), knots, hi)
        return out
    if isinstance(c, HalfSpace):
        return _crossings(lambda s: sum(k * ev(t, s) for k, t in zip(c.coeffs, terms)), knots, c.bound)
    return set().union(*(_set_crossings(ch, terms, ev, knots) for ch in c.children))


def _atoms(phi, bound_s):
    """S-atoms of phi whose terms mention no S-variable bound inside phi."""
    if isinstance(phi, In):
        if not set(free_vars(phi)[1]) & bound_s:
            yield phi
    elif isinstance(phi, (And, Or)):
        for c in phi.children:
            yield from _atoms(c, bound_s)
    elif isinstance(phi, Not):
        yield from _atoms(phi.child, bound_s)
    elif isinstance(phi, Quant):
        yield from _atoms(phi.body, bound_s | {phi.var} if phi.sort is Sort.S else bound_s)


def _crossing_points(m: StandardStructure, body, var: str, env) -> list:
    """Candidate witnesses for a space quantifier over ``var``: every point where
    an atom of the body may change truth, plus the midpoints between them."""
    points = set()
    for atom in _atoms(body, set()):
        h, _ = free_vars(atom)
        open_h = [x for x in h if x not in env]
        if len(m.domain) ** len(open_h) > _MAX_ASSIGNMENTS:
            continue
        for values in itertools.product(m.domain, repeat=len(open_h)):
            local = {**env, **dict(zip(open_h, values))}

            def ev(t, s, local=local):
                return term_eval_s(m, t, {**local, var: s})

            breaks = set().union(*(_term_breaks(t, ev) for t in atom.terms))
            knots = _knots(breaks)
            points |= breaks | _set_crossings(atom.set, atom.terms, ev, knots)
    ordered = _knots(p for p in points if 0 <= p <= 1)
    mids = [(a + b) / 2 for a, b in zip(ordered, ordered[1:])]
    return ordered + mids


def evaluate(m: StandardStructure, phi, env: Optional[Mapping[str, object]] = None,
             delta=DEFAULT_DELTA, budget: int = DEFAULT_BUDGET) -> Verdict:
    """Three-valued truth of ``phi`` in ``m`` under ``env``.

    TRUE means M satisfies phi[env]; FALSE means it does not.
    """
    return Evaluator(m, delta, budget).run(phi, env or {})


def eval_approx_sat(m: StandardStructure, phi, env: Optional[Mapping[str, object]] = None,
                    schedule: EpsSchedule = DEFAULT_SCHEDULE, delta=DEFAULT_DELTA,
                    budget: int = DEFAULT_BUDGET) -> Verdict:
    """Check M |= {phi}' along a finite schedule of approximation radii.

    FALSE as soon as one approximation is certifiably false (the verdict's
    ``eps`` names it); TRUE when the finest approximation is true, which
    makes every coarser one true as well; UNKNOWN otherwise.
    """
    if not isinstance(schedule, EpsSchedule):
        schedule = EpsSchedule(tuple(schedule))
    last = None
    finest = Fraction(1)
    for eps in schedule:
        last = evaluate(m, approximate(phi, eps), env, delta, budget)
        finest = min(finest, last.resolution)
        if last.is_false:
            return Verdict(Truth.FALSE, finest, last.witness, False, eps)
    return Verdict(last.value, finest, last.witness, last.exhausted)
