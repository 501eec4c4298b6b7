"""Randomised invariant suite run by ``twosorted selftest``.

Each family draws seeded random structures and formulas and reports the
number of violations.  ``mutation`` patches the kernel to show that a family
can fail: ``sneg-no-eps`` drops the separation radius from strong negation,
which the gap-law family must catch.
"""

from __future__ import annotations

import contextlib
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from . import space
from .generate import FormulaGenerator, random_env, random_set, random_structure
from .semantics import eval_approx_sat, evaluate
from .syntax import And, FormulaClass, Not, Or, Quant, classify, format_formula, parse_formula, skeleton
from .transforms import approximate, interpolants, strong_negation

DEFAULT_SEED = 20240601
EPS = tuple(Fraction(1, 2 ** k) for k in range(1, 7))
MUTATIONS = ("sneg-no-eps",)


@dataclass
class FamilyResult:
    name: str
    checks: int = 0
    failures: list = field(default_factory=list)
    unknown: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        out = f"{status} {self.name} checks={self.checks} failures={len(self.failures)} unknown={self.unknown}"
        if self.failures:
            out += f" first={self.failures[0]}"
        return out


class _Sampler:
    def __init__(self, seed: int):
        self.rng = random.Random(seed)

    def triple(self, s_quantifiers=True, max_depth=3):
        rng = self.rng
        m = random_structure(rng)
        gen = FormulaGenerator(rng, m.signature, s_quantifiers=s_quantifiers)
        phi = gen.formula(rng.randint(0, max_depth), hvars=["x", "y"][: rng.randint(1, 2)])
        return m, phi, random_env(rng, m, phi)


def _approx_monotone(s: _Sampler, n: int, r: FamilyResult):
    for _ in range(n):
        m, phi, env = s.triple()
        v = evaluate(m, phi, env)
        if not v.is_true:
            continue
        for e in EPS:
            r.checks += 1
            w = evaluate(m, approximate(phi, e), env)
            r.unknown += w.is_unknown
            if w.is_false:
                r.failures.append(f"eps={e} {format_formula(phi)}")


def _sneg_sound(s: _Sampler, n: int, r: FamilyResult):
    for _ in range(n):
        m, phi, env = s.triple()
        v = evaluate(m, phi, env)
        for e in EPS:
            r.checks += 1
            w = evaluate(m, strong_negation(phi, e), env)
            if v.is_true and w.is_true:
                r.failures.append(f"eps={e} {format_formula(phi)}")


def _gap_law(s: _Sampler, n: int, r: FamilyResult):
    rng = s.rng
    grid = [Fraction(k, 16) for k in range(17)]
    for _ in range(n):
        dim = rng.choice([1, 1, 2])
        c = random_set(rng, dim)
        e = rng.choice(EPS)
        neg, fat = space.set_sneg(c, e), space.set_fatten(c, e / 2)
        for _ in range(8):
            p = tuple(rng.choice(grid) for _ in range(dim))
            r.checks += 1
            if space.set_member(neg, p) and space.set_member(fat, p):
                r.failures.append(f"set eps={e} point=({' '.join(map(str, p))})")
        m, phi, env = s.triple()
        r.checks += 1
        a = evaluate(m, strong_negation(phi, e), env)
        b = evaluate(m, approximate(phi, e / 2), env)
        if a.is_true and b.is_true:
            r.failures.append(f"eps={e} {format_formula(phi)}")


def _chain(s: _Sampler, n: int, r: FamilyResult):
    for _ in range(n):
        m, phi, env = s.triple()
        e = s.rng.choice(EPS)
        t0, t1, ap = interpolants(phi, e)
        v, v0, v1, vp = (evaluate(m, f, env) for f in (phi, t0, t1, ap))
        r.checks += 3
        r.unknown += sum(x.is_unknown for x in (v, v0, v1, vp))
        if v.is_true and v1.is_true:
            r.failures.append(f"phi and sneg1 eps={e} {format_formula(phi)}")
        if v1.is_false and v0.is_true:
            r.failures.append(f"not sneg1 but sneg0 eps={e} {format_formula(phi)}")
        if v0.is_false and vp.is_false:
            r.failures.append(f"not sneg0 but not approx eps={e} {format_formula(phi)}")


def _density(s: _Sampler, n: int, r: FamilyResult):
    rng = s.rng
    for _ in range(n):
        _, phi, _ = s.triple()
        e1, e2 = Fraction(rng.randint(1, 8), 32), Fraction(rng.randint(1, 8), 32)
        r.checks += 1
        if approximate(approximate(phi, e1), e2) != approximate(phi, e1 + e2):
            r.failures.append(f"e1={e1} e2={e2} {format_formula(phi)}")


def _classes(s: _Sampler, n: int, r: FamilyResult):
    for _ in range(n):
        _, phi, _ = s.triple()
        e = s.rng.choice(EPS)
        r.checks += 2
        if classify(approximate(phi, e)) != classify(phi):
            r.failures.append(f"approx class {format_formula(phi)}")
        twice = strong_negation(strong_negation(phi, e), e)
        if skeleton(twice) != skeleton(phi) or classify(strong_negation(phi, e)) > FormulaClass.F:
            r.failures.append(f"sneg shape {format_formula(phi)}")


def _roundtrip(s: _Sampler, n: int, r: FamilyResult):
    for _ in range(n):
        m, phi, _ = s.triple()
        for f in (phi, strong_negation(phi, Fraction(1, 8))):
            r.checks += 1
            text = format_formula(f)
            back = parse_formula(text, m.signature)
            if format_formula(back) != text:
                r.failures.append(text)


def _exactness(s: _Sampler, n: int, r: FamilyResult):
    for _ in range(n):
        m, phi, env = s.triple(s_quantifiers=False, max_depth=4)
        r.checks += 1
        if evaluate(m, phi, env).is_unknown:
            r.failures.append(format_formula(phi))


def _regularity(s: _Sampler, n: int, r: FamilyResult):
    for _ in range(n):
        m, phi, env = s.triple(s_quantifiers=False)
        if any(True for _ in _quantifiers(phi)):
            continue
        r.checks += 1
        if evaluate(m, phi, env).value is not eval_approx_sat(m, phi, env).value:
            r.failures.append(format_formula(phi))


def _quantifiers(phi):
    if isinstance(phi, Quant):
        yield phi
        yield from _quantifiers(phi.body)
    elif isinstance(phi, (And, Or)):
        for c in phi.children:
            yield from _quantifiers(c)
    elif isinstance(phi, Not):
        yield from _quantifiers(phi.child)


FAMILIES: dict = {
    "exactness": _exactness,
    "approx-monotone": _approx_monotone,
    "sneg-sound": _sneg_sound,
    "gap-law": _gap_law,
    "interpolant-chain": _chain,
    "density": _density,
    "class-preservation": _classes,
    "roundtrip": _roundtrip,
    "regularity": _regularity,
}


@contextlib.contextmanager
def _mutated(name: Optional[str]):
    if name is None:
        yield
        return
    if name != "sneg-no-eps":
        raise ValueError(f"unknown mutation {name!r}; known: {', '.join(MUTATIONS)}")
    saved = space._sneg_margin
    space._sneg_margin = lambda eps: Fraction(0)
    try:
        yield
    finally:
        space._sneg_margin = saved


@dataclass
class SelftestReport:
    results: list
    iterations: int
    seed: int

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def lines(self) -> list:
        out = []
        if self.iterations == 0:
            out.append("WARNING zero iterations: every family passes vacuously")
        out += [r.line() for r in self.results]
        out.append(f"selftest seed={self.seed} iterations={self.iterations} "
                   f"status={'pass' if self.ok else 'fail'}")
        return out


def run_selftest(iterations: int = 50, seed: int = DEFAULT_SEED, mutation: Optional[str] = None,
                 families=None, progress: Optional[Callable[[str], None]] = None) -> SelftestReport:
    if iterations < 0:
        raise ValueError("iterations must be >= 0")
    names = list(families) if families else list(FAMILIES)
    results = []
    with _mutated(mutation):
        for i, name in enumerate(names):
            r = FamilyResult(name)
            # each family gets its own stream so adding one does not shift the others
            FAMILIES[name](_Sampler(seed + i), iterations, r)
            results.append(r)
            if progress:
                progress(r.line())
    return SelftestReport(results, iterations, seed)
