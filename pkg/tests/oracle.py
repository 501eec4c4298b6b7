"""Brute-force reference semantics used as an independent test oracle.

Everything here is re-derived from the definitions (cut sum, cut difference,
halfspace inequalities, ...) and reads only the AST data; it shares no
evaluation code with the package.  Space quantifiers are only supported
through an explicit finite grid, which is a heuristic, not a decision.
"""

from fractions import Fraction
from itertools import product

from twosorted.space import Apply, BoxSet, Const, HalfSpace, SetInter, SetUnion
from twosorted.syntax import And, Cross, Elem, Eq, FunH, HVar, In, Not, Or, Quant, Rel, SVar


def member(c, p):
    if isinstance(c, BoxSet):
        return all(lo <= x <= hi for (lo, hi), x in zip(c.intervals, p))
    if isinstance(c, HalfSpace):
        return sum(a * x for a, x in zip(c.coeffs, p)) <= c.bound
    if isinstance(c, SetUnion):
        return any(member(ch, p) for ch in c.children)
    if isinstance(c, SetInter):
        return all(member(ch, p) for ch in c.children)
    raise TypeError(c)


def _pwl(points, r):
    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        if x0 <= r <= x1:
            return y0 + (r - x0) * (y1 - y0) / (x1 - x0)
    raise AssertionError(r)


def builtin(op, param, vals):
    if op == "csum":
        a, b = vals
        return a + b if a + b < 1 else Fraction(1)
    if op == "cdiff":
        a, b = vals
        return a - b if a > b else Fraction(0)
    if op == "min":
        return min(vals)
    if op == "max":
        return max(vals)
    if op == "compl":
        return 1 - vals[0]
    if op == "scale":
        v = param * vals[0]
        return Fraction(0) if v < 0 else Fraction(1) if v > 1 else v
    if op == "pwl":
        return _pwl(param, vals[0])
    raise AssertionError(op)


def hterm(m, t, env):
    if isinstance(t, HVar):
        return env[t.name]
    if isinstance(t, Elem):
        return t.name
    if isinstance(t, FunH):
        return m.funcs_h[t.name][tuple(hterm(m, a, env) for a in t.args)]
    raise TypeError(t)


def sterm(m, t, env):
    if isinstance(t, SVar):
        return env[t.name]
    if isinstance(t, Const):
        return t.value
    if isinstance(t, Cross):
        return m.funcs_s[t.name][tuple(hterm(m, a, env) for a in t.args)]
    if isinstance(t, Apply):
        return builtin(t.op, t.param, [sterm(m, a, env) for a in t.args])
    raise TypeError(t)


def holds(m, phi, env, grid=None):
    """Classical truth; S-quantifiers range over ``grid`` (required if present)."""
    if isinstance(phi, Rel):
        return tuple(hterm(m, a, env) for a in phi.args) in m.relations[phi.name]
    if isinstance(phi, Eq):
        return hterm(m, phi.left, env) == hterm(m, phi.right, env)
    if isinstance(phi, In):
        return member(phi.set, [sterm(m, t, env) for t in phi.terms])
    if isinstance(phi, And):
        return all(holds(m, c, env, grid) for c in phi.children)
    if isinstance(phi, Or):
        return any(holds(m, c, env, grid) for c in phi.children)
    if isinstance(phi, Not):
        return not holds(m, phi.child, env, grid)
    if isinstance(phi, Quant):
        if phi.kind.endswith("H"):
            rng = m.domain
        else:
            if grid is None:
                raise ValueError("space quantifier without a grid")
            rng = grid
        vals = (holds(m, phi.body, {**env, phi.var: v}, grid) for v in rng)
        return all(vals) if phi.kind.startswith("forall") else any(vals)
    raise TypeError(phi)


def grid(denom):
    return [Fraction(k, denom) for k in range(denom + 1)]


def sup_distance(p, q):
    return max(abs(a - b) for a, b in zip(p, q))


def points(dim, denom):
    return [tuple(p) for p in product(grid(denom), repeat=dim)]


def metric_axioms_hold(dom, d, pseudometric):
    """Brute-force check of the (pseudo)metric axioms on a table dict."""
    for x in dom:
        for y in dom:
            if d[(x, y)] != d[(y, x)]:
                return False
            if x == y and d[(x, y)] != 0:
                return False
            if x != y and d[(x, y)] == 0 and not pseudometric:
                return False
            for z in dom:
                if d[(x, z)] > d[(x, y)] + d[(y, z)]:
                    return False
    return True
