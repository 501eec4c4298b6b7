"""Seeded random structures, environments and F-formulas.

Values are dyadic (denominator ``DENOM``) so that every certified question
the generators pose is decidable at the default resolutions.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Sequence

from . import space
from .space import Apply, Const
from .structures import Signature, StandardStructure
from .syntax import And, Cross, Eq, FunH, HVar, In, Not, Or, Quant, Rel, SVar, free_vars, substitute

DENOM = 16

DEFAULT_SIGNATURE = Signature(
    relations={"P": 1, "R": 2},
    funcs_h={"f": 1},
    funcs_s={"g": 1, "k": 2},
)


def dyadic(rng: random.Random, denom: int = DENOM) -> Fraction:
    return Fraction(rng.randint(0, denom), denom)


def random_structure(rng: random.Random, n_elements: int = None, signature: Signature = DEFAULT_SIGNATURE,
                     denom: int = DENOM, prefix: str = "e") -> StandardStructure:
    n = n_elements or rng.randint(1, 4)
    dom = tuple(f"{prefix}{i}" for i in range(n))
    rels = {r: frozenset(t for t in itertools.product(dom, repeat=k) if rng.random() < 0.5)
            for r, k in signature.relations.items()}
    fh = {f: {t: rng.choice(dom) for t in itertools.product(dom, repeat=k)}
          for f, k in signature.funcs_h.items()}
    fs = {g: {t: dyadic(rng, denom) for t in itertools.product(dom, repeat=k)}
          for g, k in signature.funcs_s.items()}
    return StandardStructure(signature, dom, rels, fh, fs)


def random_env(rng: random.Random, m: StandardStructure, phi, denom: int = DENOM) -> dict:
    h, s = free_vars(phi)
    env = {x: rng.choice(m.domain) for x in h}
    env.update({v: dyadic(rng, denom) for v in s})
    return env


def random_set(rng: random.Random, dim: int, denom: int = 8):
    def iv():
        a, b = sorted((rng.randint(0, denom), rng.randint(0, denom)))
        return Fraction(a, denom), Fraction(b, denom)

    if dim == 1:
        kind = rng.choice(["point", "box", "box", "union", "halfspace"])
        if kind == "point":
            return space.point(Fraction(rng.randint(0, denom), denom))
        if kind == "box":
            return space.box(iv())
        if kind == "union":
            return space.SetUnion((space.box(iv()), space.box(iv())))
        a = rng.choice([1, -1])
        return space.halfspace((a,), a * Fraction(rng.randint(0, denom), denom))
    kind = rng.choice(["diag", "fatdiag", "box", "halfspace", "inter"])
    if kind == "diag":
        return space.diag(2)
    if kind == "fatdiag":
        return space.set_fatten(space.diag(2), Fraction(rng.randint(1, 4), 16))
    if kind == "box":
        return space.box(iv(), iv())
    coeffs = (rng.choice([1, -1, 2]), rng.choice([1, -1]))
    hs = space.halfspace(coeffs, Fraction(rng.randint(-denom, 2 * denom), denom))
    if kind == "halfspace":
        return hs
    return space.SetInter((hs, space.box(iv(), iv())))


class FormulaGenerator:
    """Random F-class formulas over a signature.

    ``s_quantifiers`` allows space quantifiers; ``h_quantifiers`` home ones.
    Space variables occur at most once per atom, which keeps box tests
    exact on the generated atoms.
    """

    def __init__(self, rng: random.Random, signature: Signature = DEFAULT_SIGNATURE,
                 s_quantifiers: bool = True, h_quantifiers: bool = True, negation: bool = True,
                 max_s_nesting: int = 1, const_denom: int = DENOM):
        self.rng = rng
        self.sig = signature
        self.s_quant = s_quantifiers
        self.h_quant = h_quantifiers
        self.negation = negation
        self.max_s_nesting = max_s_nesting
        self.const_denom = const_denom
        self._n = 0

    def _fresh(self, base):
        self._n += 1
        return f"{base}{self._n}"

    def hterm(self, hvars):
        rng = self.rng
        v = HVar(rng.choice(hvars))
        if self.sig.funcs_h and rng.random() < 0.25:
            f, k = rng.choice(sorted(self.sig.funcs_h.items()))
            return FunH(f, tuple(HVar(rng.choice(hvars)) for _ in range(k)))
        return v

    def sterm(self, hvars, svars, depth, use_svar):
        """Term that mentions the S-variable ``use_svar`` (if given) exactly once."""
        rng = self.rng
        if depth <= 0 or rng.random() < 0.4:
            if use_svar is not None:
                return SVar(use_svar)
            if hvars and self.sig.funcs_s and rng.random() < 0.8:
                g, k = rng.choice(sorted(self.sig.funcs_s.items()))
                return Cross(g, tuple(self.hterm(hvars) for _ in range(k)))
            if svars and rng.random() < 0.5:
                return SVar(rng.choice(svars))
            return Const(Fraction(rng.randint(0, self.const_denom), self.const_denom))
        op = rng.choice(["csum", "cdiff", "min", "max", "compl", "scale", "pwl"])
        if op in ("compl", "scale", "pwl"):
            arg = self.sterm(hvars, svars, depth - 1, use_svar)
            if op == "compl":
                return Apply("compl", (arg,))
            if op == "scale":
                return Apply("scale", (arg,), Fraction(rng.choice([1, 2, 3]), 2))
            mid = Fraction(rng.randint(1, 3), 4)
            pts = ((Fraction(0), Fraction(rng.randint(0, 4), 4)), (mid, Fraction(rng.randint(0, 4), 4)),
                   (Fraction(1), Fraction(rng.randint(0, 4), 4)))
            return Apply("pwl", (arg,), pts)
        first = rng.random() < 0.5
        a = self.sterm(hvars, svars, depth - 1, use_svar if first else None)
        b = self.sterm(hvars, svars, depth - 1, None if first else use_svar)
        return Apply(op, (a, b))

    def atom(self, hvars, svars):
        rng = self.rng
        h_atoms = bool(hvars) and (self.sig.relations or len(hvars) > 1 or self.sig.funcs_h)
        if h_atoms and rng.random() < 0.3:
            choices = []
            for r, k in sorted(self.sig.relations.items()):
                choices.append(lambda r=r, k=k: Rel(r, tuple(self.hterm(hvars) for _ in range(k))))
            choices.append(lambda: Eq(self.hterm(hvars), self.hterm(hvars)))
            phi = rng.choice(choices)()
            if self.negation and rng.random() < 0.3:
                phi = Not(phi)
            return phi
        dim = 1 if rng.random() < 0.75 else 2
        # the newest S-variable is the one a quantifier just bound
        focus = svars[-1] if svars and rng.random() < 0.8 else None
        terms = [self.sterm(hvars, [], rng.randint(0, 2), focus)]
        for _ in range(dim - 1):
            terms.append(self.sterm(hvars, [], rng.randint(0, 1), None))
        rng.shuffle(terms)
        return In(tuple(terms), random_set(rng, dim))

    def formula(self, depth: int, hvars: Sequence[str] = ("x",), svars: Sequence[str] = (), s_nesting: int = 0):
        rng = self.rng
        hvars, svars = list(hvars), list(svars)
        if depth <= 0:
            return self.atom(hvars, svars)
        choices = ["atom", "and", "or", "and", "or"]
        if self.h_quant:
            choices += ["qh", "qh"]
        if self.s_quant and s_nesting < self.max_s_nesting:
            choices += ["qs", "qs"]
        kind = rng.choice(choices)
        if kind == "atom":
            return self.atom(hvars, svars)
        if kind in ("and", "or"):
            kids = tuple(self.formula(depth - 1, hvars, svars, s_nesting) for _ in range(2))
            return And(kids) if kind == "and" else Or(kids)
        if kind == "qh":
            v = self._fresh("y")
            body = self.formula(depth - 1, hvars + [v], svars, s_nesting)
            return Quant(rng.choice(["forallH", "existsH"]), v, body)
        v = self._fresh("s")
        body = self.formula(depth - 1, hvars, svars + [v], s_nesting + 1)
        return Quant(rng.choice(["forallS", "existsS"]), v, body)


def elementize(phi, env):
    """phi with its free H-variables replaced by element names."""
    return substitute(phi, {k: v for k, v in env.items() if isinstance(v, str)})


def perturb(rng: random.Random, m: StandardStructure, g: str = "g", at_least=Fraction(1, 4)):
    """Copy of ``m`` with one ``g`` value moved by at least ``at_least``."""
    args = rng.choice(sorted(m.funcs_s[g]))
    old = m.funcs_s[g][args]
    options = [Fraction(i, DENOM) for i in range(DENOM + 1) if abs(Fraction(i, DENOM) - old) >= at_least]
    return m.with_value(g, args, rng.choice(options)), args

