"""Exact-rational geometry of the space sort X = [0, 1].

Closed subsets of [0,1]^n are expression trees over boxes and halfspaces;
continuous functions are expression trees over a small library of monotone
piecewise-linear builtins.  Everything is computed with ``fractions.Fraction``
so membership and box tests never round.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence, Union

ZERO = Fraction(0)
ONE = Fraction(1)

Interval = tuple  # (lo, hi) pair of Fractions
Box = tuple  # tuple of Intervals


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass a Fraction, int or 'p/q' string")
    return Fraction(value)


def clamp01(r: Fraction) -> Fraction:
    return ZERO if r < 0 else ONE if r > 1 else r


def unit_box(n: int) -> Box:
    return tuple((ZERO, ONE) for _ in range(n))


def point_box(p: Sequence[Fraction]) -> Box:
    return tuple((as_fraction(x), as_fraction(x)) for x in p)


# ---------------------------------------------------------------------------
# closed sets


@dataclass(frozen=True)
class BoxSet:
    """Product of closed intervals with endpoints in [0, 1]."""

    intervals: tuple

    def __post_init__(self):
        if not self.intervals:
            raise ValueError("box needs at least one dimension")
        for lo, hi in self.intervals:
            if not (0 <= lo <= hi <= 1):
                raise ValueError(f"bad box interval [{lo}, {hi}]")

    @property
    def dim(self) -> int:
        return len(self.intervals)


@dataclass(frozen=True)
class HalfSpace:
    """{eta in [0,1]^n : coeffs . eta <= bound}."""

    coeffs: tuple
    bound: Fraction

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("halfspace needs at least one coefficient")

    @property
    def dim(self) -> int:
        return len(self.coeffs)


@dataclass(frozen=True)
class SetUnion:
    children: tuple

    def __post_init__(self):
        _check_children(self.children)

    @property
    def dim(self) -> int:
        return self.children[0].dim


@dataclass(frozen=True)
class SetInter:
    children: tuple

    def __post_init__(self):
        _check_children(self.children)

    @property
    def dim(self) -> int:
        return self.children[0].dim


ClosedSet = Union[BoxSet, HalfSpace, SetUnion, SetInter]


def _check_children(children):
    if not children:
        raise ValueError("union/intersection needs at least one child")
    dims = {c.dim for c in children}
    if len(dims) != 1:
        raise ValueError(f"children of mixed dimensions {sorted(dims)}")


def box(*intervals) -> BoxSet:
    return BoxSet(tuple((as_fraction(lo), as_fraction(hi)) for lo, hi in intervals))


def point(*coords) -> BoxSet:
    return BoxSet(point_box(coords))


def halfspace(coeffs, bound) -> HalfSpace:
    return HalfSpace(tuple(as_fraction(a) for a in coeffs), as_fraction(bound))


def union(*children) -> ClosedSet:
    return children[0] if len(children) == 1 else SetUnion(tuple(children))


def inter(*children) -> ClosedSet:
    return children[0] if len(children) == 1 else SetInter(tuple(children))


def diag(n: int = 2) -> SetInter:
    """The diagonal of X x X, as the intersection of two halfspaces."""
    if n != 2:
        raise ValueError("only (diag 2) is supported")
    return SetInter((halfspace((1, -1), 0), halfspace((-1, 1), 0)))


def whole(n: int) -> BoxSet:
    return BoxSet(unit_box(n))


def empty(n: int) -> HalfSpace:
    # 0 . eta <= -1 has no solutions
    return HalfSpace((ZERO,) * n, Fraction(-1))


def is_diag(c: ClosedSet) -> bool:
    return c == diag(2) if c.dim == 2 else False


def _l1(coeffs) -> Fraction:
    return sum((abs(a) for a in coeffs), ZERO)


def _check_dim(c: ClosedSet, n: int):
    if c.dim != n:
        raise ValueError(f"dimension mismatch: set has dim {c.dim}, got {n}")


def set_member(c: ClosedSet, p: Sequence[Fraction]) -> bool:
    _check_dim(c, len(p))
    return _member(c, tuple(as_fraction(x) for x in p))


def _member(c, p) -> bool:
    if isinstance(c, BoxSet):
        return all(lo <= x <= hi for (lo, hi), x in zip(c.intervals, p))
    if isinstance(c, HalfSpace):
        return sum((a * x for a, x in zip(c.coeffs, p)), ZERO) <= c.bound
    if isinstance(c, SetUnion):
        return any(_member(ch, p) for ch in c.children)
    return all(_member(ch, p) for ch in c.children)


def _check_eps(eps) -> Fraction:
    eps = as_fraction(eps)
    if eps <= 0:
        raise ValueError(f"radius must be positive, got {eps}")
    return eps


def set_fatten(c: ClosedSet, eps) -> ClosedSet:
    """Closed sup-metric neighbourhood of ``c`` relative to [0,1]^n.

    Boxes are widened and clipped, halfspace bounds move out by
    ``eps * ||a||_1``; unions and intersections fatten their children.
    Fattening twice by ``e1`` then ``e2`` gives the same tree as ``e1 + e2``.
    """
    return _fatten(c, _check_eps(eps))


def _fatten(c, eps):
    if isinstance(c, BoxSet):
        return BoxSet(tuple((max(ZERO, lo - eps), min(ONE, hi + eps)) for lo, hi in c.intervals))
    if isinstance(c, HalfSpace):
        return HalfSpace(c.coeffs, c.bound + eps * _l1(c.coeffs))
    return type(c)(tuple(_fatten(ch, eps) for ch in c.children))


def _sneg_margin(eps: Fraction) -> Fraction:
    return eps


def set_sneg(c: ClosedSet, eps) -> ClosedSet:
    """A closed set disjoint from ``c``: the points at distance >= eps from it,
    computed compositionally (unions and intersections swap)."""
    return _sneg(c, _sneg_margin(_check_eps(eps)))


def _sneg(c, eps):
    n = c.dim
    if isinstance(c, BoxSet):
        slabs = []
        for i, (lo, hi) in enumerate(c.intervals):
            if lo - eps >= 0:
                slabs.append(_slab(n, i, ZERO, lo - eps))
            if hi + eps <= 1:
                slabs.append(_slab(n, i, hi + eps, ONE))
        return union(*slabs) if slabs else empty(n)
    if isinstance(c, HalfSpace):
        norm = _l1(c.coeffs)
        if norm == 0:
            return empty(n) if c.bound >= 0 else whole(n)
        return HalfSpace(tuple(-a for a in c.coeffs), -c.bound - eps * norm)
    dual = SetInter if isinstance(c, SetUnion) else SetUnion
    return dual(tuple(_sneg(ch, eps) for ch in c.children))


def _slab(n, i, lo, hi) -> BoxSet:
    return BoxSet(tuple((lo, hi) if j == i else (ZERO, ONE) for j in range(n)))


def intersect_sets(a: ClosedSet, b: ClosedSet) -> ClosedSet:
    """Intersection with light normalisation (equal operands, box with box)."""
    if a == b:
        return a
    if isinstance(a, BoxSet) and isinstance(b, BoxSet) and a.dim == b.dim:
        ivs = tuple((max(l1, l2), min(h1, h2)) for (l1, h1), (l2, h2) in zip(a.intervals, b.intervals))
        if all(lo <= hi for lo, hi in ivs):
            return BoxSet(ivs)
        return empty(a.dim)
    return SetInter((a, b))


class BoxRelation(enum.Enum):
    INSIDE = "Inside"
    OUTSIDE = "Outside"
    BOUNDARY = "Boundary"


def box_test(c: ClosedSet, b: Box) -> BoxRelation:
    """Sound three-way test of a rational box against a closed set.

    INSIDE means ``b`` is a subset of ``c``, OUTSIDE means they are disjoint,
    BOUNDARY claims nothing.  Exact on primitives, incomplete on unions and
    intersections (a union that covers ``b`` only jointly gives BOUNDARY).
    """
    _check_dim(c, len(b))
    return _box_test(c, b)


def _box_test(c, b) -> BoxRelation:
    if isinstance(c, BoxSet):
        inside = True
        for (lo, hi), (blo, bhi) in zip(c.intervals, b):
            if bhi < lo or blo > hi:
                return BoxRelation.OUTSIDE
            if blo < lo or bhi > hi:
                inside = False
        return BoxRelation.INSIDE if inside else BoxRelation.BOUNDARY
    if isinstance(c, HalfSpace):
        lo = hi = ZERO
        for a, (blo, bhi) in zip(c.coeffs, b):
            if a >= 0:
                lo += a * blo
                hi += a * bhi
            else:
                lo += a * bhi
                hi += a * blo
        if hi <= c.bound:
            return BoxRelation.INSIDE
        if lo > c.bound:
            return BoxRelation.OUTSIDE
        return BoxRelation.BOUNDARY
    results = [_box_test(ch, b) for ch in c.children]
    if isinstance(c, SetUnion):
        if BoxRelation.INSIDE in results:
            return BoxRelation.INSIDE
        if all(r is BoxRelation.OUTSIDE for r in results):
            return BoxRelation.OUTSIDE
        return BoxRelation.BOUNDARY
    if BoxRelation.OUTSIDE in results:
        return BoxRelation.OUTSIDE
    if all(r is BoxRelation.INSIDE for r in results):
        return BoxRelation.INSIDE
    return BoxRelation.BOUNDARY


# ---------------------------------------------------------------------------
# continuous functions

BUILTINS = ("csum", "cdiff", "min", "max", "compl", "scale", "pwl")
_ARITY = {"csum": 2, "cdiff": 2, "compl": 1, "scale": 1, "pwl": 1}


@dataclass(frozen=True)
class Const:
    value: Fraction

    def __post_init__(self):
        if not 0 <= self.value <= 1:
            raise ValueError(f"constant {self.value} outside [0, 1]")


@dataclass(frozen=True)
class Proj:
    """The index-th coordinate of the argument tuple."""

    index: int


@dataclass(frozen=True)
class Apply:
    """A builtin applied to argument expressions.

    ``param`` holds the factor for ``scale`` and the breakpoint tuple
    ``((x0, y0), ..., (xk, yk))`` for ``pwl``; it is ``None`` otherwise.
    """

    op: str
    args: tuple
    param: object = None

    def __post_init__(self):
        if self.op not in BUILTINS:
            raise ValueError(f"unknown builtin {self.op!r}")
        want = _ARITY.get(self.op)
        if want is not None and len(self.args) != want:
            raise ValueError(f"{self.op} takes {want} argument(s), got {len(self.args)}")
        if not self.args:
            raise ValueError(f"{self.op} needs at least one argument")
        if self.op == "pwl":
            check_pwl(self.param)
        elif self.op == "scale" and not isinstance(self.param, Fraction):
            raise ValueError("scale needs a rational factor")


def check_pwl(points):
    xs = [x for x, _ in points]
    if len(points) < 2 or xs[0] != 0 or xs[-1] != 1:
        raise ValueError("pwl breakpoints must start at x=0 and end at x=1")
    if any(a >= b for a, b in zip(xs, xs[1:])):
        raise ValueError("pwl breakpoints must be strictly increasing")
    if any(not 0 <= y <= 1 for _, y in points):
        raise ValueError("pwl values must lie in [0, 1]")


def pwl_value(points, r: Fraction) -> Fraction:
    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        if x0 <= r <= x1:
            return y0 + (y1 - y0) * (r - x0) / (x1 - x0)
    raise ValueError(f"{r} outside [0, 1]")


def apply_point(op: str, param, vals: Sequence[Fraction]) -> Fraction:
    """Exact value of a builtin at a rational point."""
    if op == "csum":
        return min(vals[0] + vals[1], ONE)
    if op == "cdiff":
        return max(vals[0] - vals[1], ZERO)
    if op == "min":
        return min(vals)
    if op == "max":
        return max(vals)
    if op == "compl":
        return ONE - vals[0]
    if op == "scale":
        return clamp01(param * vals[0])
    if op == "pwl":
        return pwl_value(param, vals[0])
    raise ValueError(op)


def apply_interval(op: str, param, ivs: Sequence[Interval]) -> Interval:
    """Image of a box under a builtin; exact since every builtin is monotone
    in each argument (pwl: piecewise monotone, breakpoints are checked)."""
    if op == "csum":
        (a, b), (c, d) = ivs
        return min(a + c, ONE), min(b + d, ONE)
    if op == "cdiff":
        (a, b), (c, d) = ivs
        return max(a - d, ZERO), max(b - c, ZERO)
    if op == "min":
        return min(lo for lo, _ in ivs), min(hi for _, hi in ivs)
    if op == "max":
        return max(lo for lo, _ in ivs), max(hi for _, hi in ivs)
    if op == "compl":
        lo, hi = ivs[0]
        return ONE - hi, ONE - lo
    if op == "scale":
        lo, hi = ivs[0]
        ends = (clamp01(param * lo), clamp01(param * hi))
        return min(ends), max(ends)
    if op == "pwl":
        lo, hi = ivs[0]
        vals = [pwl_value(param, lo), pwl_value(param, hi)]
        vals += [y for x, y in param if lo < x < hi]
        return min(vals), max(vals)
    raise ValueError(op)


def interval_of(expr, leaf: Callable[[object], Interval]) -> Interval:
    """Interval extension of a function tree.  ``leaf`` resolves any node that
    is not a ``Const`` or ``Apply`` (projections, variables, table lookups)."""
    if isinstance(expr, Const):
        return expr.value, expr.value
    if isinstance(expr, Apply):
        return apply_interval(expr.op, expr.param, [interval_of(a, leaf) for a in expr.args])
    return leaf(expr)


def point_of(expr, leaf: Callable[[object], Fraction]) -> Fraction:
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Apply):
        return apply_point(expr.op, expr.param, [point_of(a, leaf) for a in expr.args])
    return leaf(expr)


def arity(expr) -> int:
    if isinstance(expr, Proj):
        return expr.index + 1
    if isinstance(expr, Apply):
        return max((arity(a) for a in expr.args), default=0)
    return 0


def func_hull(f, b: Box) -> Interval:
    """Interval J containing f(b).  J is exactly the image when each
    projection occurs at most once in ``f``."""
    if arity(f) > len(b):
        raise ValueError(f"function of arity {arity(f)} applied to a {len(b)}-box")
    return interval_of(f, lambda p: b[p.index])


def func_eval(f, p: Sequence[Fraction]) -> Fraction:
    if arity(f) > len(p):
        raise ValueError(f"function of arity {arity(f)} applied to {len(p)} values")
    return point_of(f, lambda node: as_fraction(p[node.index]))
