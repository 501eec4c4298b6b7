"""Corpus-based checks of morphism notions between finite standard structures.

The checks quantify over a finite corpus of F-formulas instead of all of F,
so a counterexample is conclusive while a pass is only evidence.  An
undecided evaluation is reported as indeterminate and never counts as a pass.
"""

from __future__ import annotations

import enum
import itertools
import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from . import space
from .generate import FormulaGenerator
from .semantics import (DEFAULT_DELTA, DEFAULT_SCHEDULE, EpsSchedule, Truth, Verdict, eval_approx_sat,
                        evaluate)
from .structures import StandardStructure, StructureError, load_structure_file
from .syntax import (Cross, Eq, FormulaClass, FormulaError, HVar, In, Not, Quant, Rel, classify, format_formula,
                     free_vars, has_h_quantifier)
from .transforms import approximate, strong_negation


@dataclass(frozen=True, eq=False)
class PartialMap:
    source: StandardStructure
    target: StandardStructure
    mapping: Mapping[str, str]

    def __post_init__(self):
        if self.source.signature != self.target.signature:
            raise StructureError("source and target have different signatures")
        for a, b in self.mapping.items():
            if a not in self.source.domain:
                raise StructureError(f"{a!r} is not in the source domain")
            if b not in self.target.domain:
                raise StructureError(f"{b!r} is not in the target domain")

    @property
    def dom(self) -> tuple:
        return tuple(a for a in self.source.domain if a in self.mapping)

    def __call__(self, a: str) -> str:
        return self.mapping[a]

    @classmethod
    def identity(cls, m: StandardStructure, n: StandardStructure = None) -> "PartialMap":
        return cls(m, n if n is not None else m, {a: a for a in m.domain})


@dataclass(frozen=True)
class CorpusEntry:
    formula: object
    hvars: tuple

    @classmethod
    def of(cls, phi) -> "CorpusEntry":
        h, s = free_vars(phi)
        if s:
            raise FormulaError(f"corpus formulas take no free S-variables, got {s}")
        return cls(phi, tuple(h))


@dataclass
class Corpus:
    entries: list
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        self.entries = [e if isinstance(e, CorpusEntry) else CorpusEntry.of(e) for e in self.entries]
        for e in self.entries:
            if classify(e.formula) is FormulaClass.L:
                raise FormulaError(f"corpus formula is not F-class: {format_formula(e.formula)}")

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def without_h_quantifiers(self) -> "Corpus":
        return Corpus([e for e in self.entries if not has_h_quantifier(e.formula)], dict(self.params))

    def h_class(self) -> "Corpus":
        return Corpus([e for e in self.entries if classify(e.formula) <= FormulaClass.H], dict(self.params))


def _pool(structures, denom: int = 4):
    vals = set()
    for m in structures:
        for table in m.funcs_s.values():
            vals.update(table.values())
    return sorted(vals), [space.box((Fraction(k, denom), Fraction(k + 1, denom))) for k in range(denom)]


def atom_corpus(structures: Sequence[StandardStructure], hvars=("x", "y")) -> list:
    """Every atom over ``hvars`` from the signature, with point sets for all
    cross-table values seen in ``structures``, dyadic quarter boxes, and the
    diagonal with two fattenings for pairs of values."""
    sig = structures[0].signature
    points, boxes = _pool(structures)
    out = []
    for r, k in sorted(sig.relations.items()):
        for args in itertools.product(hvars, repeat=k):
            atom = Rel(r, tuple(HVar(v) for v in args))
            out += [atom, Not(atom)]
    if len(hvars) > 1:
        eq = Eq(HVar(hvars[0]), HVar(hvars[1]))
        out += [eq, Not(eq)]
    cross_terms = []
    for g, k in sorted(sig.funcs_s.items()):
        for args in itertools.product(hvars, repeat=k):
            cross_terms.append(Cross(g, tuple(HVar(v) for v in args)))
    for t in cross_terms:
        out += [In((t,), space.point(v)) for v in points]
        out += [In((t,), b) for b in boxes]
    diags = [space.diag(2), space.set_fatten(space.diag(2), Fraction(1, 8)),
             space.set_fatten(space.diag(2), Fraction(1, 4))]
    for t1, t2 in itertools.combinations(cross_terms, 2):
        out += [In((t1, t2), d) for d in diags]
    return out


def generate_corpus(structures: Sequence[StandardStructure], depth: int = 2, per_depth: int = 12,
                    seed: int = 0, s_quantifiers: bool = True, h_quantifiers: bool = True,
                    max_atoms: Optional[int] = None) -> Corpus:
    """Atoms over (x, y) followed by ``per_depth`` random formulas at each
    connective depth 1..``depth``, free variables among x, y."""
    rng = random.Random(seed)
    atoms = atom_corpus(structures)
    if max_atoms is not None and len(atoms) > max_atoms:
        atoms = rng.sample(atoms, max_atoms)
    gen = FormulaGenerator(rng, structures[0].signature, s_quantifiers=s_quantifiers,
                           h_quantifiers=h_quantifiers)
    entries = list(atoms)
    for d in range(1, depth + 1):
        for _ in range(per_depth):
            hv = ["x"] if rng.random() < 0.6 else ["x", "y"]
            entries.append(gen.formula(d, hvars=hv))
    params = dict(depth=depth, per_depth=per_depth, seed=seed, s_quantifiers=s_quantifiers,
                  h_quantifiers=h_quantifiers)
    return Corpus(entries, params)


# ---------------------------------------------------------------------------
# reports


class Outcome(enum.Enum):
    PASS = "pass"
    COUNTEREXAMPLE = "counterexample"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class CheckResult:
    formula: object
    args: tuple
    outcome: Outcome
    label: str = ""
    detail: str = ""
    resolution: Fraction = Fraction(1)

    def line(self) -> str:
        args = " ".join(self.args)
        parts = [f"check={self.label or '-'}", f"outcome={self.outcome.value}", f"args=({args})",
                 f"resolution={self.resolution}"]
        if self.detail:
            parts.append(f"detail={self.detail}")
        parts.append(f"formula={format_formula(self.formula)}")
        return " ".join(parts)


@dataclass
class MorphismReport:
    kind: str
    results: list = field(default_factory=list)
    precondition_ok: bool = True
    note: str = ""

    @property
    def counterexamples(self) -> list:
        return [r for r in self.results if r.outcome is Outcome.COUNTEREXAMPLE]

    @property
    def indeterminate(self) -> list:
        return [r for r in self.results if r.outcome is Outcome.INDETERMINATE]

    @property
    def passed(self) -> list:
        return [r for r in self.results if r.outcome is Outcome.PASS]

    def by_label(self, label: str) -> "MorphismReport":
        return MorphismReport(self.kind, [r for r in self.results if r.label == label], self.precondition_ok)

    @property
    def status(self) -> str:
        if not self.precondition_ok:
            return "precondition-failed"
        if self.counterexamples:
            return "fail"
        if self.indeterminate:
            return "indeterminate"
        return "pass"

    @property
    def ok(self) -> bool:
        return self.status == "pass"

    def summary(self) -> dict:
        return {"kind": self.kind, "status": self.status, "checks": len(self.results),
                "pass": len(self.passed), "counterexample": len(self.counterexamples),
                "indeterminate": len(self.indeterminate)}

    def lines(self) -> list:
        head = " ".join(f"{k}={v}" for k, v in self.summary().items())
        out = [f"summary {head}"]
        if self.note:
            out.append(f"note {self.note}")
        out += [r.line() for r in self.results]
        return out


def _fmt(v: Verdict) -> str:
    return v.value.value


def _tuples(elements, n):
    return itertools.product(elements, repeat=n)


def _env(entry: CorpusEntry, args) -> dict:
    return dict(zip(entry.hvars, args))


# ---------------------------------------------------------------------------
# checks


def check_f_elementary(f: PartialMap, corpus: Corpus, delta=DEFAULT_DELTA) -> MorphismReport:
    """M |= phi(a)  implies  N |= phi(fa), for corpus phi and a over dom f."""
    report = MorphismReport("F-elementary")
    for entry in corpus:
        for a in _tuples(f.dom, len(entry.hvars)):
            vm = evaluate(f.source, entry.formula, _env(entry, a), delta)
            if vm.is_false:
                report.results.append(CheckResult(entry.formula, a, Outcome.PASS, "dagger", "M:False",
                                                  vm.resolution))
                continue
            fa = tuple(f(x) for x in a)
            vn = evaluate(f.target, entry.formula, _env(entry, fa), delta)
            res = min(vm.resolution, vn.resolution)
            detail = f"M:{_fmt(vm)},N:{_fmt(vn)}"
            if vm.is_unknown or vn.is_unknown:
                outcome = Outcome.INDETERMINATE
            else:
                outcome = Outcome.COUNTEREXAMPLE if vn.is_false else Outcome.PASS
            report.results.append(CheckResult(entry.formula, a, outcome, "dagger", detail, res))
    return report


def check_approx_f_elementary(f: PartialMap, corpus: Corpus, schedule: EpsSchedule = DEFAULT_SCHEDULE,
                              delta=DEFAULT_DELTA) -> MorphismReport:
    """M |= phi(a)  implies  N |= {phi(fa)}' along ``schedule``."""
    report = MorphismReport("approx-F-elementary")
    for entry in corpus:
        for a in _tuples(f.dom, len(entry.hvars)):
            vm = evaluate(f.source, entry.formula, _env(entry, a), delta)
            if vm.is_false:
                report.results.append(CheckResult(entry.formula, a, Outcome.PASS, "ddagger", "M:False",
                                                  vm.resolution))
                continue
            fa = tuple(f(x) for x in a)
            vn = eval_approx_sat(f.target, entry.formula, _env(entry, fa), schedule, delta)
            detail = f"M:{_fmt(vm)},N':{_fmt(vn)}"
            if vn.eps is not None:
                detail += f",eps={vn.eps}"
            if vm.is_unknown or vn.is_unknown:
                outcome = Outcome.INDETERMINATE
            else:
                outcome = Outcome.COUNTEREXAMPLE if vn.is_false else Outcome.PASS
            report.results.append(CheckResult(entry.formula, a, outcome, "ddagger", detail,
                                              min(vm.resolution, vn.resolution)))
    return report


def check_partial_f_embedding(f: PartialMap, corpus: Corpus, delta=DEFAULT_DELTA) -> MorphismReport:
    """Both directions of M |= phi(a) <=> N |= phi(fa) on a corpus without
    H-quantifiers; results are labelled ``forward`` and ``backward``."""
    for entry in corpus:
        if has_h_quantifier(entry.formula):
            raise FormulaError(f"H-quantified formula in corpus: {format_formula(entry.formula)}")
    report = MorphismReport("partial-F-embedding")
    for entry in corpus:
        for a in _tuples(f.dom, len(entry.hvars)):
            fa = tuple(f(x) for x in a)
            vm = evaluate(f.source, entry.formula, _env(entry, a), delta)
            vn = evaluate(f.target, entry.formula, _env(entry, fa), delta)
            res = min(vm.resolution, vn.resolution)
            detail = f"M:{_fmt(vm)},N:{_fmt(vn)}"
            for label, premise, conclusion in (("forward", vm, vn), ("backward", vn, vm)):
                if premise.is_false:
                    outcome = Outcome.PASS
                elif premise.is_unknown or conclusion.is_unknown:
                    outcome = Outcome.INDETERMINATE
                else:
                    outcome = Outcome.COUNTEREXAMPLE if conclusion.is_false else Outcome.PASS
                report.results.append(CheckResult(entry.formula, a, outcome, label, detail, res))
    return report


def check_approx_transfer(f: PartialMap, corpus: Corpus, schedule: EpsSchedule = DEFAULT_SCHEDULE,
                          delta=DEFAULT_DELTA) -> MorphismReport:
    """M |= {phi(a)}'  <=>  N |= {phi(fa)}' for an approximately F-elementary f.

    The precondition is checked on the corpus together with the strong
    negations of its formulas at every scheduled radius; a failure is
    reported through ``precondition_ok`` and no biconditional checks run.
    """
    eps_list = list(schedule) if isinstance(schedule, EpsSchedule) else list(EpsSchedule(tuple(schedule)))
    closure = list(corpus.entries)
    for entry in corpus:
        closure += [CorpusEntry(strong_negation(entry.formula, e), entry.hvars) for e in eps_list]
    pre = check_approx_f_elementary(f, Corpus(closure), schedule, delta)
    report = MorphismReport("approx-transfer")
    if pre.counterexamples:
        report.precondition_ok = False
        report.note = f"map is not approximately F-elementary ({len(pre.counterexamples)} counterexample(s))"
        report.results = pre.counterexamples
        return report
    for entry in corpus:
        for a in _tuples(f.dom, len(entry.hvars)):
            fa = tuple(f(x) for x in a)
            vm = eval_approx_sat(f.source, entry.formula, _env(entry, a), schedule, delta)
            vn = eval_approx_sat(f.target, entry.formula, _env(entry, fa), schedule, delta)
            detail = f"M':{_fmt(vm)},N':{_fmt(vn)}"
            if vm.is_unknown or vn.is_unknown:
                outcome = Outcome.INDETERMINATE
            else:
                outcome = Outcome.PASS if vm.value is vn.value else Outcome.COUNTEREXAMPLE
            report.results.append(CheckResult(entry.formula, a, outcome, "approx-iff", detail,
                                              min(vm.resolution, vn.resolution)))
    return report


check_prop_4_4 = check_approx_transfer  # name used by the operation contract


def _exists_closure(phi, hvars):
    for v in reversed(hvars):
        phi = Quant("existsH", v, phi)
    return phi


def tarski_vaught_check(msub: StandardStructure, n: StandardStructure, corpus: Corpus,
                        schedule: EpsSchedule = DEFAULT_SCHEDULE, delta=DEFAULT_DELTA) -> MorphismReport:
    """Conditions (2) and (3) of the Tarski-Vaught analogue, evaluated in N
    with witnesses drawn from the subset ``msub``.

    (2) H-class phi(x): if N |= exists x phi then for each scheduled eps
        some a in msub has N |= approx(phi, eps)(a).
    (3) F-class phi(x): if N |= exists x not phi then some a in msub has
        N |= not phi(a).
    """
    if not set(msub.domain) <= set(n.domain):
        raise StructureError("substructure domain is not contained in the larger domain")
    if n.restrict(msub.domain) != msub:
        raise StructureError("substructure tables disagree with the larger structure")
    report = MorphismReport("tarski-vaught")
    for entry in corpus:
        phi, hv = entry.formula, entry.hvars
        cands = list(_tuples(msub.domain, len(hv)))
        if classify(phi) <= FormulaClass.H:
            ex = evaluate(n, _exists_closure(phi, hv), {}, delta)
            if ex.is_unknown:
                report.results.append(CheckResult(phi, (), Outcome.INDETERMINATE, "tv2", "N:exists=Unknown",
                                                  ex.resolution))
            elif ex.is_true:
                for eps in schedule:
                    approx = approximate(phi, eps)
                    verdicts = [evaluate(n, approx, dict(zip(hv, a)), delta) for a in cands]
                    hit = next((a for a, v in zip(cands, verdicts) if v.is_true), None)
                    res = min([v.resolution for v in verdicts], default=Fraction(1))
                    if hit is not None:
                        report.results.append(CheckResult(phi, hit, Outcome.PASS, "tv2", f"eps={eps}", res))
                    elif any(v.is_unknown for v in verdicts):
                        report.results.append(CheckResult(phi, (), Outcome.INDETERMINATE, "tv2", f"eps={eps}", res))
                    else:
                        report.results.append(CheckResult(phi, (), Outcome.COUNTEREXAMPLE, "tv2",
                                                          f"eps={eps},no-witness-in-substructure", res))
            else:
                report.results.append(CheckResult(phi, (), Outcome.PASS, "tv2", "N:exists=False", ex.resolution))
        neg = Not(phi)
        ex = evaluate(n, _exists_closure(neg, hv), {}, delta)
        if ex.is_unknown:
            report.results.append(CheckResult(phi, (), Outcome.INDETERMINATE, "tv3", "N:exists-not=Unknown",
                                              ex.resolution))
            continue
        if ex.is_false:
            report.results.append(CheckResult(phi, (), Outcome.PASS, "tv3", "N:exists-not=False", ex.resolution))
            continue
        verdicts = [evaluate(n, neg, dict(zip(hv, a)), delta) for a in cands]
        hit = next((a for a, v in zip(cands, verdicts) if v.is_true), None)
        res = min([v.resolution for v in verdicts], default=Fraction(1))
        if hit is not None:
            report.results.append(CheckResult(phi, hit, Outcome.PASS, "tv3", "", res))
        elif any(v.is_unknown for v in verdicts):
            report.results.append(CheckResult(phi, (), Outcome.INDETERMINATE, "tv3", "", res))
        else:
            report.results.append(CheckResult(phi, (), Outcome.COUNTEREXAMPLE, "tv3",
                                              "no-witness-in-substructure", res))
    return report


# ---------------------------------------------------------------------------
# map files


def load_map(text: str, base_dir: str = ".") -> PartialMap:
    """Read a map file::

        [source] m.txt
        [target] n.txt
        [map] a->a' b->b'
    """
    from .structures import _entries, _sections

    src = tgt = None
    mapping = {}
    for head, body in _sections(text):
        if head[0] in ("source", "target"):
            path = body.strip()
            if not path:
                raise StructureError(f"[{head[0]}] needs a file path")
            path = path if os.path.isabs(path) else os.path.join(base_dir, path)
            if head[0] == "source":
                src = load_structure_file(path)
            else:
                tgt = load_structure_file(path)
        elif head[0] == "map":
            for args, val in _entries(body):
                if len(args) != 1:
                    raise StructureError("map entries have the form a->b")
                if args[0] in mapping:
                    raise StructureError(f"{args[0]} mapped twice")
                mapping[args[0]] = val
        else:
            raise StructureError(f"unknown section [{' '.join(head)}] in map file")
    if src is None or tgt is None:
        raise StructureError("map file needs [source] and [target]")
    return PartialMap(src, tgt, mapping)


def load_map_file(path) -> PartialMap:
    with open(path, encoding="utf-8") as fh:
        return load_map(fh.read(), os.path.dirname(os.path.abspath(path)))
