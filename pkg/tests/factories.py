"""Random finite (pseudo)metric spaces for tests."""

import itertools
from fractions import Fraction


def line_space(rng, n, denom=8):
    """Points at dyadic positions on [0,1] with d = |p - q|; coincident
    positions give 0-distance pairs, so the result is a pseudometric."""
    dom = [f"p{i}" for i in range(n)]
    pos = {a: Fraction(rng.randint(0, denom), denom) for a in dom}
    d = {(a, b): abs(pos[a] - pos[b]) for a in dom for b in dom}
    return dom, pos, d


def corrupt(rng, dom, d, denom=8):
    """Overwrite one entry (possibly breaking symmetry or the triangle law)."""
    d = dict(d)
    key = rng.choice(list(itertools.product(dom, repeat=2)))
    d[key] = Fraction(rng.randint(0, denom), denom)
    return d


def space_text(dom, d, funcs_h=None):
    funcs_h = funcs_h or {}
    sig = ["funS d/2"] + [f"funH {f}/1" for f in funcs_h]
    lines = ["[sig]", *sig, "[domain]", " ".join(dom), "[funS d]"]
    lines += [f"({a} {b})->{d[(a, b)]}" for a in dom for b in dom]
    for f, table in funcs_h.items():
        lines += [f"[funH {f}]", " ".join(f"{a}->{table[a]}" for a in dom)]
    return "\n".join(lines) + "\n"
