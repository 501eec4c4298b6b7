"""Terms and formulas of the two-sorted language, with an s-expression
reader/printer and the F / H / L_H classifier.

Grammar::

    formula := (R hterm*) | (= hterm hterm) | (in (sterm+) set)
             | (and f+) | (or f+) | (not f)
             | (forallH v f) | (existsH v f) | (forallS v f) | (existsS v f)
    hterm   := var | @elem | (fH hterm*)
    sterm   := var | rat | (g hterm+) | (csum s s) | (cdiff s s) | (min s+)
             | (max s+) | (compl s) | (scale rat s) | (pwl ((rat rat)+) s)
    set     := (box (rat rat)+) | (halfspace (rat+) rat) | (union set+)
             | (inter set+) | (diag 2) | (point rat+)

``@a`` names the domain element ``a``; plain identifiers are variables (or
0-ary H-functions when a signature declares them).
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Optional, Union

from . import space
from .space import Apply, BoxSet, ClosedSet, Const, HalfSpace, SetInter, SetUnion


class Sort(enum.Enum):
    H = "H"
    S = "S"


class FormulaError(ValueError):
    """Base class for problems with formula text or trees."""


class ParseError(FormulaError):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        super().__init__(f"{msg} (line {line}, column {col})")
        self.line = line
        self.col = col


class SortError(FormulaError):
    pass


class ArityError(FormulaError):
    pass


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class HVar:
    name: str


@dataclass(frozen=True)
class Elem:
    """A name for a domain element (a parameter)."""

    name: str


@dataclass(frozen=True)
class FunH:
    name: str
    args: tuple = ()


@dataclass(frozen=True)
class SVar:
    name: str


@dataclass(frozen=True)
class Cross:
    """Cross-sort function g: H^n -> S applied to home-sort terms."""

    name: str
    args: tuple


TermH = Union[HVar, Elem, FunH]
TermS = Union[SVar, Const, Cross, Apply]


@dataclass(frozen=True)
class Rel:
    name: str
    args: tuple = ()


@dataclass(frozen=True)
class Eq:
    left: TermH
    right: TermH


@dataclass(frozen=True)
class In:
    terms: tuple
    set: ClosedSet

    def __post_init__(self):
        if len(self.terms) != self.set.dim:
            raise FormulaError(f"{len(self.terms)} term(s) against a set of dimension {self.set.dim}")


@dataclass(frozen=True)
class And:
    children: tuple


@dataclass(frozen=True)
class Or:
    children: tuple


@dataclass(frozen=True)
class Not:
    child: object


QUANTIFIERS = ("forallH", "existsH", "forallS", "existsS")


@dataclass(frozen=True)
class Quant:
    kind: str
    var: str
    body: object

    def __post_init__(self):
        if self.kind not in QUANTIFIERS:
            raise FormulaError(f"unknown quantifier {self.kind}")

    @property
    def sort(self) -> Sort:
        return Sort.H if self.kind.endswith("H") else Sort.S

    @property
    def universal(self) -> bool:
        return self.kind.startswith("forall")


Formula = Union[Rel, Eq, In, And, Or, Not, Quant]


def forall_h(var, body):
    return Quant("forallH", var, body)


def exists_h(var, body):
    return Quant("existsH", var, body)


def forall_s(var, body):
    return Quant("forallS", var, body)


def exists_s(var, body):
    return Quant("existsS", var, body)


def conj(*fs):
    return fs[0] if len(fs) == 1 else And(tuple(fs))


def disj(*fs):
    return fs[0] if len(fs) == 1 else Or(tuple(fs))


def csum(a, b):
    return Apply("csum", (a, b))


def cdiff(a, b):
    return Apply("cdiff", (a, b))


def const(r) -> Const:
    return Const(space.as_fraction(r))


# ---------------------------------------------------------------------------
# classification


class FormulaClass(enum.IntEnum):
    """Ordered so that ``LH < H < F < L`` mirrors set inclusion."""

    LH = 0
    H = 1
    F = 2
    L = 3


def mentions_space(phi) -> bool:
    """True iff phi contains an S-atom or an S-quantifier."""
    if isinstance(phi, In):
        return True
    if isinstance(phi, (And, Or)):
        return any(mentions_space(c) for c in phi.children)
    if isinstance(phi, Not):
        return mentions_space(phi.child)
    if isinstance(phi, Quant):
        return phi.sort is Sort.S or mentions_space(phi.body)
    return False


def _has_s_quantifier(phi) -> bool:
    if isinstance(phi, Quant):
        return phi.sort is Sort.S or _has_s_quantifier(phi.body)
    if isinstance(phi, (And, Or)):
        return any(_has_s_quantifier(c) for c in phi.children)
    if isinstance(phi, Not):
        return _has_s_quantifier(phi.child)
    return False


def _positive(phi) -> bool:
    if not mentions_space(phi) or isinstance(phi, In):
        return True
    if isinstance(phi, (And, Or)):
        return all(_positive(c) for c in phi.children)
    if isinstance(phi, Quant):
        return _positive(phi.body)
    return False


def classify(phi) -> FormulaClass:
    if not mentions_space(phi):
        return FormulaClass.LH
    if not _positive(phi):
        return FormulaClass.L
    return FormulaClass.F if _has_s_quantifier(phi) else FormulaClass.H


def is_f_class(phi) -> bool:
    return classify(phi) <= FormulaClass.F


def has_h_quantifier(phi) -> bool:
    if isinstance(phi, Quant):
        return phi.sort is Sort.H or has_h_quantifier(phi.body)
    if isinstance(phi, (And, Or)):
        return any(has_h_quantifier(c) for c in phi.children)
    if isinstance(phi, Not):
        return has_h_quantifier(phi.child)
    return False


# ---------------------------------------------------------------------------
# variables


def _term_vars(t, acc_h, acc_s):
    if isinstance(t, HVar):
        acc_h.add(t.name)
    elif isinstance(t, SVar):
        acc_s.add(t.name)
    elif isinstance(t, (FunH, Cross, Apply)):
        for a in t.args:
            _term_vars(a, acc_h, acc_s)


def _free(phi, bound_h, bound_s, acc_h, acc_s):
    if isinstance(phi, (Rel, In, Eq)):
        terms = (phi.left, phi.right) if isinstance(phi, Eq) else phi.args if isinstance(phi, Rel) else phi.terms
        h, s = set(), set()
        for t in terms:
            _term_vars(t, h, s)
        acc_h |= h - bound_h
        acc_s |= s - bound_s
    elif isinstance(phi, (And, Or)):
        for c in phi.children:
            _free(c, bound_h, bound_s, acc_h, acc_s)
    elif isinstance(phi, Not):
        _free(phi.child, bound_h, bound_s, acc_h, acc_s)
    elif isinstance(phi, Quant):
        if phi.sort is Sort.H:
            _free(phi.body, bound_h | {phi.var}, bound_s, acc_h, acc_s)
        else:
            _free(phi.body, bound_h, bound_s | {phi.var}, acc_h, acc_s)


def free_vars(phi) -> tuple[list[str], list[str]]:
    """Free (H-variables, S-variables), each sorted and duplicate-free."""
    h, s = set(), set()
    if isinstance(phi, (HVar, Elem, FunH, SVar, Const, Cross, Apply)):
        _term_vars(phi, h, s)
    else:
        _free(phi, frozenset(), frozenset(), h, s)
    return sorted(h), sorted(s)


def _all_names(phi, acc):
    if isinstance(phi, (HVar, SVar)):
        acc.add(phi.name)
    elif isinstance(phi, (FunH, Cross, Apply, Rel)):
        for a in phi.args:
            _all_names(a, acc)
    elif isinstance(phi, Eq):
        _all_names(phi.left, acc)
        _all_names(phi.right, acc)
    elif isinstance(phi, In):
        for t in phi.terms:
            _all_names(t, acc)
    elif isinstance(phi, (And, Or)):
        for c in phi.children:
            _all_names(c, acc)
    elif isinstance(phi, Not):
        _all_names(phi.child, acc)
    elif isinstance(phi, Quant):
        acc.add(phi.var)
        _all_names(phi.body, acc)
    return acc


def variable_names(phi) -> set:
    """Every variable name occurring in phi, free or bound."""
    return _all_names(phi, set())


def fresh_name(base: str, taken) -> str:
    if base not in taken:
        return base
    i = 1
    while f"{base}{i}" in taken:
        i += 1
    return f"{base}{i}"


def _map_term(t, fn):
    """Rebuild a term bottom-up, letting ``fn`` replace variable leaves."""
    if isinstance(t, (HVar, SVar)):
        return fn(t)
    if isinstance(t, FunH):
        return FunH(t.name, tuple(_map_term(a, fn) for a in t.args))
    if isinstance(t, Cross):
        return Cross(t.name, tuple(_map_term(a, fn) for a in t.args))
    if isinstance(t, Apply):
        return Apply(t.op, tuple(_map_term(a, fn) for a in t.args), t.param)
    return t


def replace_free(phi, repl: Mapping[str, object]):
    """Capture-avoiding replacement of free variables by terms.

    ``repl`` maps variable names to replacement terms of the right sort.
    Bound variables that would capture a variable of a replacement term are
    renamed first.
    """
    if isinstance(phi, (HVar, SVar, FunH, Cross, Apply, Elem, Const)):
        return _map_term(phi, lambda v: repl.get(v.name, v))
    incoming = set()
    for t in repl.values():
        h, s = free_vars(t)
        incoming.update(h, s)
    return _replace(phi, dict(repl), incoming)


def _replace(phi, repl, incoming):
    if not repl:
        return phi

    def leaf(v):
        return repl.get(v.name, v)

    if isinstance(phi, Rel):
        return Rel(phi.name, tuple(_map_term(a, leaf) for a in phi.args))
    if isinstance(phi, Eq):
        return Eq(_map_term(phi.left, leaf), _map_term(phi.right, leaf))
    if isinstance(phi, In):
        return In(tuple(_map_term(t, leaf) for t in phi.terms), phi.set)
    if isinstance(phi, (And, Or)):
        return type(phi)(tuple(_replace(c, repl, incoming) for c in phi.children))
    if isinstance(phi, Not):
        return Not(_replace(phi.child, repl, incoming))
    # quantifier
    inner = {k: v for k, v in repl.items() if k != phi.var}
    var, body = phi.var, phi.body
    if var in incoming and inner:
        new = fresh_name(var, variable_names(body) | incoming | set(repl))
        ctor = HVar if phi.sort is Sort.H else SVar
        body = _replace(body, {var: ctor(new)}, {new})
        var = new
    return Quant(phi.kind, var, _replace(body, inner, incoming))


def _sort_of_free(phi, name) -> Optional[Sort]:
    h, s = free_vars(phi)
    if name in h:
        return Sort.H
    if name in s:
        return Sort.S
    return None


def substitute(phi, bindings: Mapping[str, object]):
    """Plug parameter values into free variables.

    H-variables take element identifiers (``str``), S-variables take
    rationals in [0, 1].  Bound occurrences are untouched.
    """
    names = variable_names(phi)
    repl = {}
    for name, value in bindings.items():
        if name not in names:
            raise FormulaError(f"unknown variable {name!r}")
        sort = _sort_of_free(phi, name)
        if sort is None:
            continue
        if sort is Sort.H:
            if not isinstance(value, str):
                raise SortError(f"H-variable {name} needs an element identifier, got {value!r}")
            repl[name] = Elem(value)
        else:
            if isinstance(value, (str, bool)):
                raise SortError(f"S-variable {name} needs a rational, got {value!r}")
            r = space.as_fraction(value)
            if not 0 <= r <= 1:
                raise SortError(f"S-value {r} outside [0, 1]")
            repl[name] = Const(r)
    return replace_free(phi, repl)


# ---------------------------------------------------------------------------
# reading

_TOKEN = re.compile(r"\s+|;[^\n]*|\(|\)|[^\s()]+")
_RATIONAL = re.compile(r"^[+-]?(\d+(/\d+)?|\d*\.\d+|\d+\.\d*)$")


@dataclass
class _Tok:
    text: str
    line: int
    col: int


@dataclass
class _List:
    items: list
    line: int
    col: int


def read_sexprs(text: str) -> list:
    """Split text into raw s-expressions (nested ``_List``/``_Tok``)."""
    stack = [_List([], 1, 1)]
    line, col = 1, 1
    for m in _TOKEN.finditer(text):
        tok = m.group()
        if tok == "(":
            stack.append(_List([], line, col))
        elif tok == ")":
            if len(stack) == 1:
                raise ParseError("unexpected ')'", line, col)
            done = stack.pop()
            stack[-1].items.append(done)
        elif not tok[0].isspace() and tok[0] != ";":
            stack[-1].items.append(_Tok(tok, line, col))
        nl = tok.count("\n")
        if nl:
            line += nl
            col = len(tok) - tok.rfind("\n")
        else:
            col += len(tok)
    if len(stack) > 1:
        raise ParseError("unclosed '('", stack[-1].line, stack[-1].col)
    return stack[0].items


def parse_rational(text: str, line: int = 0, col: int = 0) -> Fraction:
    if not _RATIONAL.match(text):
        raise ParseError(f"expected a rational, got {text!r}", line, col)
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise ParseError(f"zero denominator in {text!r}", line, col) from None


class _Reader:
    def __init__(self, signature=None, sorts=None):
        self.sig = signature
        self.free = dict(sorts or {})
        self.seen_arity = {}

    def fail(self, node, msg, cls=ParseError):
        if cls is ParseError:
            raise ParseError(msg, node.line, node.col)
        raise cls(f"{msg} (line {node.line}, column {node.col})")

    def _arity(self, node, kind, name, n):
        if self.sig is not None:
            table = {"rel": self.sig.relations, "funH": self.sig.funcs_h, "funS": self.sig.funcs_s}[kind]
            if name not in table:
                others = [k for k, t in (("rel", self.sig.relations), ("funH", self.sig.funcs_h),
                                         ("funS", self.sig.funcs_s)) if name in t]
                if others:
                    self.fail(node, f"{name} is a {others[0]} symbol, used as {kind}", SortError)
                self.fail(node, f"unknown {kind} symbol {name!r}", SortError)
            if table[name] != n:
                self.fail(node, f"{name} has arity {table[name]}, applied to {n}", ArityError)
            return
        key = name
        prev = self.seen_arity.get(key)
        if prev is None:
            self.seen_arity[key] = (kind, n)
        elif prev != (kind, n):
            self.fail(node, f"{name} used inconsistently as {prev[0]}/{prev[1]} and {kind}/{n}",
                      ArityError if prev[0] == kind else SortError)

    def _use_free(self, node, name, sort):
        prev = self.free.setdefault(name, sort)
        if prev is not sort:
            self.fail(node, f"variable {name} of sort {prev.value} used where sort {sort.value} is expected",
                      SortError)

    # -- terms
    def hterm(self, node, scope):
        if isinstance(node, _Tok):
            name = node.text
            if name.startswith("@"):
                if len(name) == 1:
                    self.fail(node, "empty element name")
                return Elem(name[1:])
            if _RATIONAL.match(name):
                self.fail(node, f"rational {name} where an H-term is expected", SortError)
            if name in scope:
                if scope[name] is not Sort.H:
                    self.fail(node, f"S-variable {name} where an H-term is expected", SortError)
                return HVar(name)
            if self.sig is not None and self.sig.funcs_h.get(name) == 0:
                return FunH(name, ())
            self._use_free(node, name, Sort.H)
            return HVar(name)
        if not node.items or not isinstance(node.items[0], _Tok):
            self.fail(node, "expected an H-term")
        head = node.items[0].text
        if head in space.BUILTINS:
            self.fail(node, f"S-builtin {head} where an H-term is expected", SortError)
        args = tuple(self.hterm(a, scope) for a in node.items[1:])
        self._arity(node, "funH", head, len(args))
        return FunH(head, args)

    def rational(self, node):
        if not isinstance(node, _Tok):
            self.fail(node, "expected a rational")
        return parse_rational(node.text, node.line, node.col)

    def sterm(self, node, scope):
        if isinstance(node, _Tok):
            name = node.text
            if _RATIONAL.match(name):
                r = self.rational(node)
                if not 0 <= r <= 1:
                    self.fail(node, f"rational literal {r} outside [0, 1]")
                return Const(r)
            if name.startswith("@"):
                self.fail(node, f"element {name} where an S-term is expected", SortError)
            if name in scope:
                if scope[name] is not Sort.S:
                    self.fail(node, f"H-variable {name} where an S-term is expected", SortError)
                return SVar(name)
            if self.sig is not None and name in self.sig.funcs_h:
                self.fail(node, f"H-constant {name} where an S-term is expected", SortError)
            self._use_free(node, name, Sort.S)
            return SVar(name)
        if not node.items or not isinstance(node.items[0], _Tok):
            self.fail(node, "expected an S-term")
        head, rest = node.items[0].text, node.items[1:]
        if head == "scale":
            if len(rest) != 2:
                self.fail(node, "scale takes a factor and one term", ArityError)
            return Apply("scale", (self.sterm(rest[1], scope),), self.rational(rest[0]))
        if head == "pwl":
            if len(rest) != 2 or not isinstance(rest[0], _List):
                self.fail(node, "pwl takes a breakpoint list and one term", ArityError)
            pts = []
            for pair in rest[0].items:
                if not isinstance(pair, _List) or len(pair.items) != 2:
                    self.fail(pair, "pwl breakpoints are (x y) pairs")
                pts.append((self.rational(pair.items[0]), self.rational(pair.items[1])))
            try:
                space.check_pwl(pts)
            except ValueError as e:
                self.fail(node, str(e))
            return Apply("pwl", (self.sterm(rest[1], scope),), tuple(pts))
        if head in space.BUILTINS:
            args = tuple(self.sterm(a, scope) for a in rest)
            try:
                return Apply(head, args)
            except ValueError as e:
                self.fail(node, str(e), ArityError)
        if not rest:
            self.fail(node, f"cross-sort function {head} needs at least one argument", ArityError)
        args = tuple(self.hterm(a, scope) for a in rest)
        self._arity(node, "funS", head, len(args))
        return Cross(head, args)

    # -- sets
    def closed_set(self, node) -> ClosedSet:
        if not isinstance(node, _List) or not node.items or not isinstance(node.items[0], _Tok):
            self.fail(node, "expected a set expression")
        head, rest = node.items[0].text, node.items[1:]
        try:
            if head == "box":
                ivs = []
                for pair in rest:
                    if not isinstance(pair, _List) or len(pair.items) != 2:
                        self.fail(pair, "box intervals are (lo hi) pairs")
                    ivs.append((self.rational(pair.items[0]), self.rational(pair.items[1])))
                return BoxSet(tuple(ivs))
            if head == "point":
                return BoxSet(space.point_box([self.rational(r) for r in rest]))
            if head == "halfspace":
                if len(rest) != 2 or not isinstance(rest[0], _List):
                    self.fail(node, "halfspace takes a coefficient list and a bound")
                return HalfSpace(tuple(self.rational(a) for a in rest[0].items), self.rational(rest[1]))
            if head in ("union", "inter"):
                kids = tuple(self.closed_set(c) for c in rest)
                return SetUnion(kids) if head == "union" else SetInter(kids)
            if head == "diag":
                if len(rest) != 1:
                    self.fail(node, "diag takes a dimension")
                return space.diag(int(self.rational(rest[0])))
        except ValueError as e:
            if isinstance(e, FormulaError):
                raise
            self.fail(node, str(e))
        self.fail(node, f"unknown set constructor {head!r}")

    # -- formulas
    def formula(self, node, scope):
        if isinstance(node, _Tok):
            self.fail(node, f"expected a formula, got {node.text!r}")
        if not node.items or not isinstance(node.items[0], _Tok):
            self.fail(node, "expected a formula")
        head, rest = node.items[0].text, node.items[1:]
        if head in ("and", "or"):
            if not rest:
                self.fail(node, f"{head} needs at least one operand")
            kids = tuple(self.formula(c, scope) for c in rest)
            return And(kids) if head == "and" else Or(kids)
        if head == "not":
            if len(rest) != 1:
                self.fail(node, "not takes one operand")
            return Not(self.formula(rest[0], scope))
        if head in QUANTIFIERS:
            if len(rest) != 2 or not isinstance(rest[0], _Tok):
                self.fail(node, f"{head} takes a variable and a body")
            var = rest[0].text
            if _RATIONAL.match(var) or var.startswith("@") or var in space.BUILTINS:
                self.fail(rest[0], f"bad variable name {var!r}")
            sort = Sort.H if head.endswith("H") else Sort.S
            return Quant(head, var, self.formula(rest[1], {**scope, var: sort}))
        if head == "in":
            if len(rest) != 2 or not isinstance(rest[0], _List) or not rest[0].items:
                self.fail(node, "in takes a term tuple and a set")
            terms = tuple(self.sterm(t, scope) for t in rest[0].items)
            s = self.closed_set(rest[1])
            if len(terms) != s.dim:
                self.fail(node, f"{len(terms)} term(s) against a set of dimension {s.dim}", ArityError)
            return In(terms, s)
        if head == "=":
            if len(rest) != 2:
                self.fail(node, "= takes two H-terms", ArityError)
            return Eq(self.hterm(rest[0], scope), self.hterm(rest[1], scope))
        args = tuple(self.hterm(a, scope) for a in rest)
        self._arity(node, "rel", head, len(args))
        return Rel(head, args)


def parse_formulas(text: str, signature=None, sorts: Optional[Mapping[str, Sort]] = None) -> list:
    """Parse every formula in ``text`` (a file may hold several)."""
    out = []
    for node in read_sexprs(text):
        out.append(_Reader(signature, sorts).formula(node, {}))
    return out


def parse_formula(text: str, signature=None, sorts: Optional[Mapping[str, Sort]] = None):
    """Parse exactly one formula.

    ``signature`` (a :class:`~twosorted.structures.Signature`) enables arity
    checks; ``sorts`` fixes the sorts of free variables.
    """
    nodes = read_sexprs(text)
    if len(nodes) != 1:
        raise ParseError(f"expected one formula, found {len(nodes)}", 1, 1)
    return _Reader(signature, sorts).formula(nodes[0], {})


def parse_sterm(text: str, signature=None, sorts=None):
    nodes = read_sexprs(text)
    if len(nodes) != 1:
        raise ParseError(f"expected one term, found {len(nodes)}", 1, 1)
    return _Reader(signature, sorts).sterm(nodes[0], {})


def parse_set(text: str) -> ClosedSet:
    nodes = read_sexprs(text)
    if len(nodes) != 1:
        raise ParseError(f"expected one set, found {len(nodes)}", 1, 1)
    return _Reader().closed_set(nodes[0])


# ---------------------------------------------------------------------------
# printing


def fmt_rational(r: Fraction) -> str:
    return str(r)


def format_set(c: ClosedSet) -> str:
    if isinstance(c, BoxSet):
        if all(lo == hi for lo, hi in c.intervals):
            return "(point " + " ".join(fmt_rational(lo) for lo, _ in c.intervals) + ")"
        return "(box " + " ".join(f"({fmt_rational(lo)} {fmt_rational(hi)})" for lo, hi in c.intervals) + ")"
    if isinstance(c, HalfSpace):
        return f"(halfspace ({' '.join(fmt_rational(a) for a in c.coeffs)}) {fmt_rational(c.bound)})"
    if space.is_diag(c):
        return "(diag 2)"
    head = "union" if isinstance(c, SetUnion) else "inter"
    return f"({head} " + " ".join(format_set(ch) for ch in c.children) + ")"


def format_term(t) -> str:
    if isinstance(t, (HVar, SVar)):
        return t.name
    if isinstance(t, Elem):
        return "@" + t.name
    if isinstance(t, Const):
        return fmt_rational(t.value)
    if isinstance(t, (FunH, Cross)):
        return "(" + " ".join([t.name, *(format_term(a) for a in t.args)]) + ")"
    if t.op == "scale":
        return f"(scale {fmt_rational(t.param)} {format_term(t.args[0])})"
    if t.op == "pwl":
        pts = " ".join(f"({fmt_rational(x)} {fmt_rational(y)})" for x, y in t.param)
        return f"(pwl ({pts}) {format_term(t.args[0])})"
    return "(" + " ".join([t.op, *(format_term(a) for a in t.args)]) + ")"


def format_formula(phi) -> str:
    if isinstance(phi, Rel):
        return "(" + " ".join([phi.name, *(format_term(a) for a in phi.args)]) + ")"
    if isinstance(phi, Eq):
        return f"(= {format_term(phi.left)} {format_term(phi.right)})"
    if isinstance(phi, In):
        return f"(in ({' '.join(format_term(t) for t in phi.terms)}) {format_set(phi.set)})"
    if isinstance(phi, (And, Or)):
        head = "and" if isinstance(phi, And) else "or"
        return f"({head} " + " ".join(format_formula(c) for c in phi.children) + ")"
    if isinstance(phi, Not):
        return f"(not {format_formula(phi.child)})"
    return f"({phi.kind} {phi.var} {format_formula(phi.body)})"


def iter_atoms(phi) -> Iterator:
    """S-atoms of phi in left-to-right order."""
    if isinstance(phi, In):
        yield phi
    elif isinstance(phi, (And, Or)):
        for c in phi.children:
            yield from iter_atoms(c)
    elif isinstance(phi, Not):
        yield from iter_atoms(phi.child)
    elif isinstance(phi, Quant):
        yield from iter_atoms(phi.body)


def skeleton(phi):
    """Connective/quantifier shape with atoms erased (used to compare trees
    up to atom contents)."""
    if isinstance(phi, (And, Or)):
        return (type(phi).__name__, tuple(skeleton(c) for c in phi.children))
    if isinstance(phi, Quant):
        return (phi.kind[-1], skeleton(phi.body))
    return "atom"
