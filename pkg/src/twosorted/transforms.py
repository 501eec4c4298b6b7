"""Syntactic constructions on F-formulas: approximations, strong negations,
interpolant chains, merged approximations, the sup-encoding and the
indistinguishability formulas x ~_t y."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, NamedTuple, Sequence

from . import space
from .space import ClosedSet, Const
from .syntax import (And, FormulaClass, FormulaError, HVar, In, Not, Or, Quant, SVar, cdiff, classify, csum,
                     exists_h, forall_h, forall_s, free_vars, fresh_name, mentions_space, replace_free)


@dataclass(frozen=True)
class ApproxPolicy:
    """Fattening radius for every S-atom, with optional per-atom overrides
    keyed by the atom's left-to-right position."""

    eps: Fraction
    overrides: Mapping[int, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "eps", space.as_fraction(self.eps))
        object.__setattr__(self, "overrides", {k: space.as_fraction(v) for k, v in self.overrides.items()})
        if self.eps <= 0 or any(v <= 0 for v in self.overrides.values()):
            raise ValueError("approximation radii must be positive")

    def radius(self, index: int) -> Fraction:
        return self.overrides.get(index, self.eps)


def _require_f(phi):
    if classify(phi) is FormulaClass.L:
        raise FormulaError("formula is not in the F class (negation above a space atom)")


def _map_atoms(phi, fn, counter):
    """Rebuild phi, replacing each S-atom's set by ``fn(index, set)``."""
    if not mentions_space(phi):
        return phi
    if isinstance(phi, In):
        i = counter[0]
        counter[0] += 1
        return In(phi.terms, fn(i, phi.set))
    if isinstance(phi, (And, Or)):
        return type(phi)(tuple(_map_atoms(c, fn, counter) for c in phi.children))
    if isinstance(phi, Quant):
        return Quant(phi.kind, phi.var, _map_atoms(phi.body, fn, counter))
    if isinstance(phi, Not):
        return Not(_map_atoms(phi.child, fn, counter))
    return phi


def approximate(phi, policy) -> object:
    """phi' > phi: every S-atom set C replaced by its fattening.

    ``policy`` is an :class:`ApproxPolicy` or a bare radius.  A formula with
    no S-atoms is returned unchanged.
    """
    _require_f(phi)
    if not isinstance(policy, ApproxPolicy):
        policy = ApproxPolicy(policy)
    return _map_atoms(phi, lambda i, c: space.set_fatten(c, policy.radius(i)), [0])


def strong_negation(phi, eps) -> object:
    """A strong negation of phi: S-atom sets replaced by ``set_sneg``,
    maximal L_H subformulas negated, connectives and quantifiers dualised."""
    _require_f(phi)
    eps = space.as_fraction(eps)
    if eps <= 0:
        raise ValueError(f"radius must be positive, got {eps}")
    return _sneg(phi, eps)


_DUAL = {"forallH": "existsH", "existsH": "forallH", "forallS": "existsS", "existsS": "forallS"}


def _sneg(phi, eps):
    if not mentions_space(phi):
        return phi.child if isinstance(phi, Not) else Not(phi)
    if isinstance(phi, In):
        return In(phi.terms, space.set_sneg(phi.set, eps))
    if isinstance(phi, And):
        return Or(tuple(_sneg(c, eps) for c in phi.children))
    if isinstance(phi, Or):
        return And(tuple(_sneg(c, eps) for c in phi.children))
    if isinstance(phi, Quant):
        return Quant(_DUAL[phi.kind], phi.var, _sneg(phi.body, eps))
    raise FormulaError("strong negation of a non-F formula")


class Interpolants(NamedTuple):
    sneg_outer: object  # radius eps
    sneg_inner: object  # radius eps/2
    approx: object


def interpolants(phi, eps) -> Interpolants:
    """(phi~0, phi~1, phi') with phi -> not phi~1 -> not phi~0 -> phi'.

    phi' fattens by ``eps``; phi~0 and phi~1 are strong negations at radii
    ``eps`` and ``eps/2``, so phi~1 is an approximation of phi~0.
    """
    eps = space.as_fraction(eps)
    if eps <= 0:
        raise ValueError(f"radius must be positive, got {eps}")
    return Interpolants(strong_negation(phi, eps), strong_negation(phi, eps / 2), approximate(phi, eps))


def merge_approximations(phi, eps1, eps2):
    """Approximation whose atom sets are fatten(C, eps1) intersected with
    fatten(C, eps2); it implies both single approximations."""
    _require_f(phi)
    return _map_atoms(
        phi,
        lambda i, c: space.intersect_sets(space.set_fatten(c, eps1), space.set_fatten(c, eps2)),
        [0],
    )


ZERO_SET = space.point(0)


def build_sup_formula(t, tau, eps_var: str = "eps"):
    """F-formula saying sup_x t(x) = tau.

    ``t`` is an S-term with exactly one free H-variable; ``tau`` is an
    S-variable name, an :class:`SVar` or a rational.
    """
    h, s = free_vars(t)
    if len(h) != 1:
        raise FormulaError(f"term must have exactly one free H-variable, has {h}")
    if isinstance(tau, str):
        tau = SVar(tau)
    elif not isinstance(tau, (SVar, Const)):
        tau = Const(space.as_fraction(tau))
    x = h[0]
    taken = set(s) | {x} | ({tau.name} if isinstance(tau, SVar) else set())
    e = SVar(fresh_name(eps_var, taken))
    upper = forall_h(x, In((cdiff(t, tau),), ZERO_SET))
    approach = forall_s(e.name, Or((
        In((e,), ZERO_SET),
        exists_h(x, In((cdiff(tau, csum(t, e)),), ZERO_SET)),
    )))
    return And((upper, approach))


def build_sim_formula(t, xs: Sequence[str], zs: Sequence[str], d: ClosedSet = None,
                      ys: Sequence[str] = None):
    """x ~_{t,D} y, i.e. forall z . (t(x,z), t(y,z)) in D.

    With ``d`` omitted (or the diagonal) this is x ~_t y.  ``ys`` defaults to
    primed copies of ``xs``.
    """
    if d is None:
        d = space.diag(2)
    if d.dim != 2:
        raise FormulaError(f"D must have dimension 2, got {d.dim}")
    xs, zs = list(xs), list(zs)
    h, s = free_vars(t)
    if s:
        raise FormulaError(f"term has free S-variables {s}")
    stray = set(h) - set(xs) - set(zs)
    if stray:
        raise FormulaError(f"term mentions undeclared variables {sorted(stray)}")
    if ys is None:
        ys = _primed(xs, set(h) | set(xs) | set(zs))
    if len(ys) != len(xs):
        raise FormulaError("x and y tuples differ in length")
    t_y = replace_free(t, {x: HVar(y) for x, y in zip(xs, ys)})
    phi = In((t, t_y), d)
    for z in reversed(zs):
        phi = forall_h(z, phi)
    return phi


def _primed(xs, taken):
    ys = []
    for x in xs:
        y = fresh_name(x + "'", taken)
        taken.add(y)
        ys.append(y)
    return ys


def build_sim_conjunction(pairs, xs, zs, ys=None):
    """Conjunction of x ~_{t,D} y over (t, D) pairs, sharing one y tuple."""
    if ys is None:
        taken = set(xs) | set(zs)
        for t, _ in pairs:
            taken |= set(free_vars(t)[0])
        ys = _primed(list(xs), taken)
    return And(tuple(build_sim_formula(t, xs, zs, d, ys) for t, d in pairs))
