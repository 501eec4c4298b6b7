"""Command-line front end.

Exit codes: 0 true/pass, 1 false/counterexample, 2 unknown/indeterminate,
3 usage or input error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import metric, morphisms, selftest
from .semantics import DEFAULT_BUDGET, DEFAULT_DELTA, DEFAULT_SCHEDULE, EpsSchedule, Truth, evaluate
from .structures import StructureError, load_structure, load_structure_file
from .syntax import (FormulaError, Sort, classify, format_formula, free_vars, parse_formula, parse_formulas,
                     parse_rational, parse_set, parse_sterm)
from .transforms import (build_sim_formula, build_sup_formula, interpolants, approximate, merge_approximations,
                         strong_negation)

EXIT_TRUE, EXIT_FALSE, EXIT_UNKNOWN, EXIT_ERROR = 0, 1, 2, 3
_EXIT = {Truth.TRUE: EXIT_TRUE, Truth.FALSE: EXIT_FALSE, Truth.UNKNOWN: EXIT_UNKNOWN}


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    delta: Fraction = DEFAULT_DELTA
    schedule: EpsSchedule = DEFAULT_SCHEDULE
    budget: int = DEFAULT_BUDGET
    corpus_depth: int = 2
    machine: bool = False
    seed: int = selftest.DEFAULT_SEED

    def __post_init__(self):
        if self.delta <= 0:
            raise UsageError("--delta must be positive")
        if self.budget < 1:
            raise UsageError("--budget must be at least 1")
        if self.corpus_depth < 0:
            raise UsageError("--corpus-depth must be >= 0")

    @classmethod
    def from_args(cls, ns) -> "RunConfig":
        try:
            schedule = EpsSchedule(tuple(parse_rational(t) for t in ns.schedule.split(","))) \
                if ns.schedule else DEFAULT_SCHEDULE
        except ValueError as exc:
            raise UsageError(f"--schedule: {exc}") from None
        return cls(parse_rational(ns.delta), schedule, ns.budget, ns.corpus_depth, ns.format == "machine",
                   ns.seed)


def _read(path_or_text: str) -> str:
    if path_or_text.startswith("@"):
        with open(path_or_text[1:], encoding="utf-8") as fh:
            return fh.read()
    return path_or_text


def _env(pairs: Sequence[str]) -> dict:
    env = {}
    for item in pairs or ():
        if "=" not in item:
            raise UsageError(f"--env expects NAME=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        try:
            env[k] = parse_rational(v)
        except FormulaError:
            env[k] = v
    return env


def _sorts(env: dict) -> dict:
    return {k: Sort.S if isinstance(v, Fraction) else Sort.H for k, v in env.items()}


def _out(lines):
    for line in lines:
        print(line)


# ---------------------------------------------------------------------------
# subcommands


def cmd_check(ns, cfg: RunConfig) -> int:
    sig = load_structure_file(ns.sig).signature if ns.sig else None
    for phi in parse_formulas(_read(ns.formulas), sig):
        h, s = free_vars(phi)
        cls = classify(phi).name
        if cfg.machine:
            print(f"class={cls} free_h=({' '.join(h)}) free_s=({' '.join(s)}) formula={format_formula(phi)}")
        else:
            print(f"{cls}\t{format_formula(phi)}")
    return EXIT_TRUE


def cmd_eval(ns, cfg: RunConfig) -> int:
    m = load_structure_file(ns.structure)
    env = _env(ns.env)
    phi = parse_formula(_read(ns.formula), m.signature, _sorts(env))
    v = evaluate(m, phi, env, cfg.delta, cfg.budget)
    witness = " ".join(f"{k}={r}" for k, r in (v.witness or {}).items())
    if cfg.machine:
        line = f"verdict={v.value.value} resolution={v.resolution}"
        if witness:
            line += f" witness={witness}"
        if v.exhausted:
            line += f" budget-exhausted={cfg.budget}"
        print(line)
    else:
        print(f"{v.value.value} (resolution {v.resolution})")
        if witness:
            kind = "counterexample" if v.is_false else "witness"
            print(f"{kind}: {witness}")
        if v.exhausted:
            print(f"note: subdivision budget of {cfg.budget} boxes exhausted")
    return _EXIT[v.value]


def _eps(ns, name="eps"):
    raw = getattr(ns, name)
    if raw is None:
        raise UsageError(f"--{name} is required for this transform")
    return parse_rational(raw)


def cmd_transform(ns, cfg: RunConfig) -> int:
    sig = load_structure_file(ns.sig).signature if ns.sig else None
    kind = ns.kind
    if kind in ("approx", "sneg", "interp", "merge"):
        if ns.formula is None:
            raise UsageError(f"transform {kind} needs a formula")
        phi = parse_formula(_read(ns.formula), sig)
        if kind == "approx":
            outs = [("approx", approximate(phi, _eps(ns)))]
        elif kind == "sneg":
            outs = [("sneg", strong_negation(phi, _eps(ns)))]
        elif kind == "merge":
            outs = [("merge", merge_approximations(phi, _eps(ns), _eps(ns, "eps2")))]
        else:
            t0, t1, ap = interpolants(phi, _eps(ns))
            outs = [("sneg0", t0), ("sneg1", t1), ("approx", ap)]
    elif kind == "sup":
        if ns.term is None or ns.tau is None:
            raise UsageError("transform sup needs --term and --tau")
        t = parse_sterm(_read(ns.term), sig, {v: Sort.H for v in (ns.x or ["x"])})
        try:
            tau = parse_rational(ns.tau)
        except FormulaError:
            tau = ns.tau
        outs = [("sup", build_sup_formula(t, tau))]
    elif kind == "sim":
        if ns.term is None:
            raise UsageError("transform sim needs --term")
        xs, zs = ns.x or ["x"], ns.z or []
        t = parse_sterm(_read(ns.term), sig, {v: Sort.H for v in xs + zs})
        d = parse_set(ns.set) if ns.set else None
        outs = [("sim", build_sim_formula(t, xs, zs, d))]
    else:  # argparse restricts the choices
        raise UsageError(f"unknown transform {kind}")
    for label, f in outs:
        print(f"{label}={format_formula(f)}" if cfg.machine or len(outs) > 1 else format_formula(f))
    return EXIT_TRUE


def _corpus(ns, cfg: RunConfig, structures, h_quantifiers=True):
    if ns.corpus:
        formulas = parse_formulas(_read(ns.corpus), structures[0].signature)
        return morphisms.Corpus(formulas)
    return morphisms.generate_corpus(structures, depth=cfg.corpus_depth, seed=cfg.seed,
                                     h_quantifiers=h_quantifiers)


def _report_exit(report) -> int:
    return {"pass": EXIT_TRUE, "fail": EXIT_FALSE, "precondition-failed": EXIT_FALSE,
            "indeterminate": EXIT_UNKNOWN}[report.status]


def _print_report(report, cfg: RunConfig):
    lines = report.lines()
    if cfg.machine:
        _out(lines)
        return
    print(lines[0])
    if report.note:
        print(f"note: {report.note}")
    for r in report.counterexamples[:20] + report.indeterminate[:5]:
        print("  " + r.line())


def cmd_morphism(ns, cfg: RunConfig) -> int:
    f = morphisms.load_map_file(ns.map)
    structures = [f.source, f.target]
    if ns.kind == "elementary":
        report = morphisms.check_f_elementary(f, _corpus(ns, cfg, structures), cfg.delta)
    elif ns.kind == "approx":
        report = morphisms.check_approx_f_elementary(f, _corpus(ns, cfg, structures), cfg.schedule, cfg.delta)
    elif ns.kind == "embedding":
        corpus = _corpus(ns, cfg, structures, h_quantifiers=False)
        report = morphisms.check_partial_f_embedding(f, corpus, cfg.delta)
    else:
        report = morphisms.check_approx_transfer(f, _corpus(ns, cfg, structures), cfg.schedule, cfg.delta)
    _print_report(report, cfg)
    return _report_exit(report)


def cmd_tv(ns, cfg: RunConfig) -> int:
    n = load_structure_file(ns.structure)
    if ns.sub:
        msub = load_structure_file(ns.sub)
    elif ns.elements:
        missing = [e for e in ns.elements if e not in n.domain]
        if missing:
            raise UsageError(f"not in the domain: {' '.join(missing)}")
        msub = n.restrict(ns.elements)
    else:
        raise UsageError("tv needs --sub FILE or --elements")
    report = morphisms.tarski_vaught_check(msub, n, _corpus(ns, cfg, [n]), cfg.schedule, cfg.delta)
    _print_report(report, cfg)
    return _report_exit(report)


def _moduli(items):
    out = []
    for item in items or ["1/2:1/2"]:
        if ":" not in item:
            raise UsageError(f"--modulus expects EPS:DELTA, got {item!r}")
        e, d = item.split(":", 1)
        out.append((parse_rational(e), parse_rational(d)))
    return out


def cmd_metric(ns, cfg: RunConfig) -> int:
    if ns.kind == "validate":
        with open(ns.structure, encoding="utf-8") as fh:
            m = load_structure(fh.read())
        try:
            metric.validate_metric(m, ns.pseudometric)
        except metric.MetricAxiomError as exc:
            elems = " ".join(exc.elements)
            print(f"invalid axiom={exc.axiom} elements=({elems}) detail={exc}" if cfg.machine else f"invalid: {exc}")
            return EXIT_FALSE
        kind = "pseudometric" if ns.pseudometric else "metric"
        print(f"valid kind={kind} points={len(m.domain)}" if cfg.machine else f"valid {kind} on {len(m.domain)} points")
        return EXIT_TRUE
    m = metric.load_metric_space_file(ns.structure, ns.pseudometric)
    if ns.kind == "uc":
        if not ns.function:
            raise UsageError("metric uc needs --function")
        moduli = _moduli(ns.modulus)
        values = []
        for (e, d), phi in zip(moduli, metric.gen_uniform_continuity_sentences(ns.function, moduli, m.signature)):
            v = evaluate(m, phi, {}, cfg.delta, cfg.budget)
            values.append(v.value)
            print(f"eps={e} delta={d} verdict={v.value.value} formula={format_formula(phi)}")
        if Truth.FALSE in values:
            return EXIT_FALSE
        return EXIT_UNKNOWN if Truth.UNKNOWN in values else EXIT_TRUE
    if not ns.a or not ns.b:
        raise UsageError("metric sim needs --a and --b")
    rep = metric.check_sim_vs_distance(m, ns.a, ns.b, None, cfg.delta)
    lines = rep.lines()
    _out(lines if cfg.machine else lines[:1] + [ln for ln in lines[1:] if "outcome=True" not in ln][:20])
    if rep.ok:
        return EXIT_TRUE
    unknown = any(v.is_unknown for _, v in rep.direction1) or (rep.direction2 and rep.direction2[1].is_unknown)
    return EXIT_UNKNOWN if unknown else EXIT_FALSE


def cmd_selftest(ns, cfg: RunConfig) -> int:
    report = selftest.run_selftest(ns.iterations, cfg.seed, ns.mutation)
    _out(report.lines())
    return EXIT_TRUE if report.ok else EXIT_FALSE


# ---------------------------------------------------------------------------
# parser


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--delta", default=str(DEFAULT_DELTA), help="branch-and-bound resolution (default 1/64)")
    p.add_argument("--schedule", default=None, help="comma-separated decreasing radii (default 1/2,...,1/64)")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="maximum boxes per evaluation")
    p.add_argument("--corpus-depth", type=int, default=2, help="connective depth of generated corpora")
    p.add_argument("--format", choices=("text", "machine"), default="text")
    p.add_argument("--seed", type=int, default=selftest.DEFAULT_SEED)
    p.add_argument("--pseudometric", action="store_true", help="admit distinct points at distance 0")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="twosorted", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="classify formulas")
    p.add_argument("formulas", help="formula text, or @FILE")
    p.add_argument("--sig", help="structure file supplying the signature")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("eval", parents=[common], help="evaluate a formula in a structure")
    p.add_argument("structure")
    p.add_argument("formula", help="formula text, or @FILE")
    p.add_argument("--env", action="append", metavar="NAME=VALUE", help="bind a free variable")
    p.set_defaults(run=cmd_eval)

    p = sub.add_parser("transform", parents=[common], help="syntactic constructions")
    p.add_argument("kind", choices=("approx", "sneg", "interp", "merge", "sup", "sim"))
    p.add_argument("formula", nargs="?", help="formula text, or @FILE")
    p.add_argument("--eps")
    p.add_argument("--eps2")
    p.add_argument("--term", help="S-term for sup/sim")
    p.add_argument("--tau", help="rational or S-variable name for sup")
    p.add_argument("--x", action="append", help="x variable(s) of a sim term")
    p.add_argument("--z", action="append", help="parameter variable(s) of a sim term")
    p.add_argument("--set", help="closed set D for sim (default the diagonal)")
    p.add_argument("--sig", help="structure file supplying the signature")
    p.set_defaults(run=cmd_transform)

    p = sub.add_parser("morphism", parents=[common], help="check a partial map")
    p.add_argument("kind", choices=("elementary", "approx", "embedding", "transfer"))
    p.add_argument("map", help="map file")
    p.add_argument("--corpus", help="formula corpus text or @FILE (default: generated)")
    p.set_defaults(run=cmd_morphism)

    p = sub.add_parser("tv", parents=[common], help="Tarski-Vaught conditions for a substructure")
    p.add_argument("structure")
    p.add_argument("--sub", help="structure file of the substructure")
    p.add_argument("--elements", nargs="+", help="substructure domain inside STRUCTURE")
    p.add_argument("--corpus")
    p.set_defaults(run=cmd_tv)

    p = sub.add_parser("metric", parents=[common], help="finite (pseudo)metric spaces")
    p.add_argument("kind", choices=("validate", "uc", "sim"))
    p.add_argument("structure")
    p.add_argument("--function", help="function symbol for uc")
    p.add_argument("--modulus", action="append", metavar="EPS:DELTA")
    p.add_argument("--a", nargs="+")
    p.add_argument("--b", nargs="+")
    p.set_defaults(run=cmd_metric)

    p = sub.add_parser("selftest", parents=[common], help="randomised invariant suite")
    p.add_argument("--iterations", type=int, default=50)
    p.add_argument("--mutation", choices=selftest.MUTATIONS)
    p.set_defaults(run=cmd_selftest)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_TRUE if exc.code == 0 else EXIT_ERROR
    try:
        cfg = RunConfig.from_args(ns)
        return ns.run(ns, cfg)
    except (UsageError, FormulaError, StructureError, ValueError, LookupError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
