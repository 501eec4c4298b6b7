"""Finite standard structures <M, [0,1]> and their line-oriented file format.

Example file::

    [sig] rel R/2 ; funH f/1 ; funS g/1 ; funS d/2
    [domain] a b c
    [rel R] (a b) (b c)
    [funH f] a->b b->c c->a
    [funS g] a->1/4 b->3/4 c->1/2
    [funS d] (a a)->0 (a b)->1/2 ...

A section runs until the next ``[header]``; ``#`` starts a comment.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from . import space
from .syntax import Cross, Elem, FunH, HVar, SVar


class StructureError(ValueError):
    pass


class UnboundVariable(LookupError):
    pass


@dataclass(frozen=True)
class Signature:
    relations: Mapping[str, int] = field(default_factory=dict)
    funcs_h: Mapping[str, int] = field(default_factory=dict)
    funcs_s: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        names = list(self.relations) + list(self.funcs_h) + list(self.funcs_s)
        dup = {n for n in names if names.count(n) > 1}
        if dup:
            raise StructureError(f"symbol(s) declared twice: {sorted(dup)}")
        for n in names:
            if n in space.BUILTINS or n in ("in", "and", "or", "not", "="):
                raise StructureError(f"{n!r} is reserved")
        for n, k in itertools.chain(self.relations.items(), self.funcs_h.items()):
            if k < 0:
                raise StructureError(f"{n} has negative arity")
        for n, k in self.funcs_s.items():
            if k < 1:
                raise StructureError(f"cross-sort function {n} needs arity >= 1")


@dataclass(frozen=True, eq=False)
class StandardStructure:
    """A finite home sort with relation/function tables; the space sort is
    always [0, 1] with exact rational cross-sort values."""

    signature: Signature
    domain: tuple
    relations: Mapping[str, frozenset]
    funcs_h: Mapping[str, Mapping[tuple, str]]
    funcs_s: Mapping[str, Mapping[tuple, Fraction]]

    def __post_init__(self):
        validate(self)

    def restrict(self, elements) -> "StandardStructure":
        """Substructure on ``elements``; H-functions must stay inside."""
        keep = set(elements)
        dom = tuple(e for e in self.domain if e in keep)
        rels = {r: frozenset(t for t in ts if set(t) <= keep) for r, ts in self.relations.items()}
        fh = {}
        for f, table in self.funcs_h.items():
            sub = {k: v for k, v in table.items() if set(k) <= keep}
            if any(v not in keep for v in sub.values()):
                raise StructureError(f"{sorted(keep)} is not closed under {f}")
            fh[f] = sub
        fs = {g: {k: v for k, v in table.items() if set(k) <= keep} for g, table in self.funcs_s.items()}
        return StandardStructure(self.signature, dom, rels, fh, fs)

    def with_value(self, g: str, args: tuple, value) -> "StandardStructure":
        fs = {k: dict(v) for k, v in self.funcs_s.items()}
        fs[g][tuple(args)] = space.as_fraction(value)
        return StandardStructure(self.signature, self.domain, self.relations, self.funcs_h, fs)

    def __eq__(self, other):
        if not isinstance(other, StandardStructure):
            return NotImplemented
        return (self.signature == other.signature and self.domain == other.domain
                and dict(self.relations) == dict(other.relations)
                and {k: dict(v) for k, v in self.funcs_h.items()} == {k: dict(v) for k, v in other.funcs_h.items()}
                and {k: dict(v) for k, v in self.funcs_s.items()} == {k: dict(v) for k, v in other.funcs_s.items()})

    __hash__ = None


def validate(m: StandardStructure) -> None:
    sig = m.signature
    if not m.domain:
        raise StructureError("domain must be nonempty")
    seen = set()
    for e in m.domain:
        if e in seen:
            raise StructureError(f"duplicate domain element {e!r}")
        seen.add(e)
    for name in m.relations:
        if name not in sig.relations:
            raise StructureError(f"unknown relation symbol {name!r}")
    for name, tuples in m.relations.items():
        for t in tuples:
            if len(t) != sig.relations[name] or not set(t) <= seen:
                raise StructureError(f"bad tuple {t} in relation {name}")
    for kind, decl, tables in (("funH", sig.funcs_h, m.funcs_h), ("funS", sig.funcs_s, m.funcs_s)):
        for name in tables:
            if name not in decl:
                raise StructureError(f"unknown {kind} symbol {name!r}")
        for name, k in decl.items():
            table = tables.get(name, {})
            for args in itertools.product(m.domain, repeat=k):
                if args not in table:
                    raise StructureError(f"{kind} {name} is not total: missing {_fmt_args(args)}")
            for args, v in table.items():
                if len(args) != k or not set(args) <= seen:
                    raise StructureError(f"bad argument tuple {args} for {name}")
                if kind == "funH" and v not in seen:
                    raise StructureError(f"{name}{_fmt_args(args)} = {v!r} is not a domain element")
                if kind == "funS" and not (isinstance(v, Fraction) and 0 <= v <= 1):
                    raise StructureError(f"{name}{_fmt_args(args)} = {v} is outside [0, 1]")


def _fmt_args(args) -> str:
    return "(" + " ".join(args) + ")"


# ---------------------------------------------------------------------------
# file format

_SECTION = re.compile(r"^\s*\[([^\]]+)\]", re.M)
_ENTRY = re.compile(r"\(([^)]*)\)\s*->\s*([^\s()]+)|([^\s()]+)\s*->\s*([^\s()]+)|(->)\s*([^\s()]+)")
_DECL = re.compile(r"^(rel|funH|funS)\s+([^\s/]+)\s*/\s*(\d+)(?:\s*,\s*(\d+))?$")


def _strip_comments(text: str) -> str:
    return "\n".join(line.split("#", 1)[0] for line in text.splitlines())


def _sections(text: str):
    text = _strip_comments(text)
    heads = list(_SECTION.finditer(text))
    if not heads and text.strip():
        raise StructureError("no [section] headers found")
    if heads and text[: heads[0].start()].strip():
        raise StructureError("text before the first section")
    for h, nxt in zip(heads, heads[1:] + [None]):
        body = text[h.end(): nxt.start() if nxt else len(text)]
        yield h.group(1).split(), body


def parse_signature(body: str) -> Signature:
    rels, fh, fs = {}, {}, {}
    for decl in re.split(r"[;\n]", body):
        decl = decl.strip()
        if not decl:
            continue
        m = _DECL.match(decl)
        if not m:
            raise StructureError(f"bad declaration {decl!r}")
        kind, name, n, m_s = m.group(1), m.group(2), int(m.group(3)), m.group(4)
        if m_s is not None:
            if kind != "funS":
                raise StructureError(f"{decl!r}: only funS takes an H,S arity pair")
            if int(m_s) > 0:
                raise StructureError(
                    f"{name}: functions of sort H^n x S^m -> S with m > 0 are not supported")
        table = {"rel": rels, "funH": fh, "funS": fs}[kind]
        if name in rels or name in fh or name in fs:
            raise StructureError(f"symbol {name!r} declared twice")
        table[name] = n
    return Signature(rels, fh, fs)


def _entries(body: str):
    pos = 0
    body = body.strip()
    for m in _ENTRY.finditer(body):
        if body[pos: m.start()].strip():
            raise StructureError(f"cannot read {body[pos: m.start()].strip()!r}")
        pos = m.end()
        if m.group(1) is not None:
            yield tuple(m.group(1).split()), m.group(2)
        elif m.group(3) is not None:
            yield (m.group(3),), m.group(4)
        else:
            yield (), m.group(6)
    if body[pos:].strip():
        raise StructureError(f"cannot read {body[pos:].strip()!r}")


def load_structure(text: str) -> StandardStructure:
    sig = None
    domain = None
    rels, fh, fs = {}, {}, {}
    for head, body in _sections(text):
        kind = head[0]
        if kind == "sig":
            sig = parse_signature(body)
        elif kind == "domain":
            domain = tuple(body.split())
        elif kind in ("rel", "funH", "funS"):
            if len(head) != 2:
                raise StructureError(f"section [{' '.join(head)}] needs one symbol name")
            if sig is None:
                raise StructureError("[sig] must come before tables")
            name = head[1]
            decl = {"rel": sig.relations, "funH": sig.funcs_h, "funS": sig.funcs_s}[kind]
            if name not in decl:
                raise StructureError(f"unknown {kind} symbol {name!r}")
            if kind == "rel":
                tuples = set()
                for m in re.finditer(r"\(([^)]*)\)|(\S+)", body):
                    tuples.add(tuple(m.group(1).split()) if m.group(1) is not None else (m.group(2),))
                rels[name] = frozenset(tuples)
            else:
                table = fh.setdefault(name, {}) if kind == "funH" else fs.setdefault(name, {})
                for args, val in _entries(body):
                    if args in table:
                        raise StructureError(f"{name}{_fmt_args(args)} given twice")
                    if kind == "funS":
                        try:
                            val = space.as_fraction(val)
                        except (ValueError, ZeroDivisionError):
                            raise StructureError(f"bad value {val!r} for {name}") from None
                    table[args] = val
        else:
            raise StructureError(f"unknown section [{' '.join(head)}]")
    if sig is None:
        raise StructureError("missing [sig] section")
    if domain is None:
        raise StructureError("missing [domain] section")
    for e in domain:
        if e.startswith("@") or "->" in e:
            raise StructureError(f"bad element name {e!r}")
    for r in sig.relations:
        rels.setdefault(r, frozenset())
    return StandardStructure(sig, domain, rels, fh, fs)


def load_structure_file(path) -> StandardStructure:
    with open(path, encoding="utf-8") as fh:
        return load_structure(fh.read())


def dump_structure(m: StandardStructure) -> str:
    sig = m.signature
    decls = ([f"rel {r}/{k}" for r, k in sig.relations.items()]
             + [f"funH {f}/{k}" for f, k in sig.funcs_h.items()]
             + [f"funS {g}/{k}" for g, k in sig.funcs_s.items()])
    lines = ["[sig] " + " ; ".join(decls), "[domain] " + " ".join(m.domain)]

    def key(args):
        return args[0] if len(args) == 1 else _fmt_args(args)

    for r, ts in m.relations.items():
        lines.append(f"[rel {r}] " + " ".join(_fmt_args(t) for t in sorted(ts)))
    for f, table in m.funcs_h.items():
        lines.append(f"[funH {f}] " + " ".join(f"{key(a)}->{v}" for a, v in table.items()))
    for g, table in m.funcs_s.items():
        lines.append(f"[funS {g}] " + " ".join(f"{key(a)}->{v}" for a, v in table.items()))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# term evaluation


def term_eval_h(m: StandardStructure, t, env: Mapping[str, object]) -> str:
    if isinstance(t, Elem):
        if t.name not in _domain_set(m):
            raise StructureError(f"unknown element {t.name!r}")
        return t.name
    if isinstance(t, HVar):
        try:
            return env[t.name]
        except KeyError:
            raise UnboundVariable(t.name) from None
    if isinstance(t, FunH):
        args = tuple(term_eval_h(m, a, env) for a in t.args)
        try:
            return m.funcs_h[t.name][args]
        except KeyError:
            raise StructureError(f"no value for {t.name}{_fmt_args(args)}") from None
    raise TypeError(f"not an H-term: {t!r}")


def _domain_set(m):
    ds = m.__dict__.get("_domset")
    if ds is None:
        ds = frozenset(m.domain)
        object.__setattr__(m, "_domset", ds)
    return ds


def term_eval_s(m: StandardStructure, t, env: Mapping[str, object]) -> Fraction:
    """Exact value of an S-term; S-variables in ``env`` are rationals."""

    def leaf(node):
        if isinstance(node, SVar):
            try:
                v = env[node.name]
            except KeyError:
                raise UnboundVariable(node.name) from None
            if isinstance(v, tuple):
                if v[0] != v[1]:
                    raise TypeError(f"{node.name} is bound to an interval")
                v = v[0]
            return space.as_fraction(v)
        if isinstance(node, Cross):
            args = tuple(term_eval_h(m, a, env) for a in node.args)
            try:
                return m.funcs_s[node.name][args]
            except KeyError:
                raise StructureError(f"no value for {node.name}{_fmt_args(args)}") from None
        raise TypeError(f"not an S-term: {node!r}")

    return space.point_of(t, leaf)
