"""Named presentations, the comparison-diagram morphisms, and lookups.

Relations are written in the symbol calculus directly; see the tests for
the closed-form dimension counts each presentation is pinned against.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Optional

from .presentation import Bounds, OperadMap, Presentation, QuotientOperad
from .trees import Generator, Signature, TreeVec, parse_tree

__all__ = [
    "CATALOG_NAMES",
    "EDGE_NAMES",
    "standard_presentation",
    "standard_operad",
    "standard_edge",
    "build_catalog",
    "build_edges",
]


def _rel(expr: str) -> TreeVec:
    """Parse 'c1*tree + c2*tree - tree' into a symbol vector."""
    out: TreeVec = {}
    for piece in expr.replace("-", "+-").split("+"):
        piece = piece.strip()
        if not piece:
            continue
        coeff = Fraction(1)
        if piece.startswith("-"):
            coeff = -coeff
            piece = piece[1:].strip()
        if "*" in piece:
            c, piece = piece.split("*", 1)
            coeff *= Fraction(c.strip())
        t = parse_tree(piece.strip())
        out[t] = out.get(t, 0) + coeff
    return {t: c for t, c in out.items() if c}


def _presentations() -> Dict[str, Presentation]:
    reg = "regular"
    out: Dict[str, Presentation] = {}

    def make(name, gens, rels):
        out[name] = Presentation(name, Signature(gens), [_rel(r) for r in rels])

    make("assoc", [Generator("mu", 2, reg)], ["mu(mu(1,2),3) - mu(1,mu(2,3))"])
    make("comm", [Generator("c", 2, "trivial")], ["c(c(1,2),3) - c(c(2,3),1)"])
    make(
        "lie",
        [Generator("b", 2, "sign")],
        ["b(b(1,2),3) - b(b(1,3),2) + b(b(2,3),1)"],
    )
    make(
        "perm",
        [Generator("p", 2, reg)],
        ["p(p(1,2),3) - p(1,p(2,3))", "p(1,p(2,3)) - p(1,p(3,2))"],
    )
    make(
        "prelie",
        [Generator("s", 2, reg)],
        ["s(s(1,2),3) - s(1,s(2,3)) - s(s(1,3),2) + s(1,s(3,2))"],
    )
    make(
        "leib",
        [Generator("lm", 2, reg)],
        ["lm(1,lm(2,3)) - lm(lm(1,2),3) + lm(lm(1,3),2)"],
    )
    make(
        "zinb",
        [Generator("z", 2, reg)],
        ["z(z(1,2),3) - z(1,z(2,3)) - z(1,z(3,2))"],
    )
    make(
        "dias",
        [Generator("dl", 2, reg), Generator("dr", 2, reg)],
        [
            "dl(dl(1,2),3) - dl(1,dl(2,3))",
            "dl(1,dl(2,3)) - dl(1,dr(2,3))",
            "dl(dr(1,2),3) - dr(1,dl(2,3))",
            "dr(dl(1,2),3) - dr(dr(1,2),3)",
            "dr(dr(1,2),3) - dr(1,dr(2,3))",
        ],
    )
    make(
        "dend",
        [Generator("pl", 2, reg), Generator("pr", 2, reg)],
        [
            "pl(pl(1,2),3) - pl(1,pl(2,3)) - pl(1,pr(2,3))",
            "pl(pr(1,2),3) - pr(1,pl(2,3))",
            "pr(pl(1,2),3) + pr(pr(1,2),3) - pr(1,pr(2,3))",
        ],
    )
    # controls: free operads have no relations at all, and the
    # anti-associative quotient is the standard failing example for the
    # bounded acyclicity test
    out["magma"] = Presentation("magma", Signature([Generator("mu", 2, reg)]), [])
    out["commmagma"] = Presentation(
        "commmagma", Signature([Generator("c", 2, "trivial")]), []
    )
    make("antiassoc", [Generator("mu", 2, reg)], ["mu(mu(1,2),3) + mu(1,mu(2,3))"])
    return out


_PRESENTATIONS = _presentations()
CATALOG_NAMES = tuple(sorted(_PRESENTATIONS))


def standard_presentation(name: str) -> Presentation:
    try:
        return _PRESENTATIONS[name]
    except KeyError:
        raise KeyError(f"unknown operad {name!r}; choices: {', '.join(CATALOG_NAMES)}")


def standard_operad(name: str, bounds: Bounds = Bounds()) -> QuotientOperad:
    return QuotientOperad(standard_presentation(name), bounds)


def build_catalog(bounds: Bounds = Bounds()) -> Dict[str, QuotientOperad]:
    return {name: standard_operad(name, bounds) for name in CATALOG_NAMES}


# each edge: source, target, generator images written in target symbols
_EDGES: Dict[str, tuple] = {
    "assoc->perm": ("assoc", "perm", {"mu": "p(1,2)"}),
    "lie->assoc": ("lie", "assoc", {"b": "mu(1,2) - mu(2,1)"}),
    "perm->comm": ("perm", "comm", {"p": "c(1,2)"}),
    "comm->zinb": ("comm", "zinb", {"c": "z(1,2) + z(2,1)"}),
    "dend->zinb": ("dend", "zinb", {"pl": "z(1,2)", "pr": "z(2,1)"}),
    "assoc->dend": ("assoc", "dend", {"mu": "pl(1,2) + pr(1,2)"}),
    "assoc->comm": ("assoc", "comm", {"mu": "c(1,2)"}),
    "dias->perm": ("dias", "perm", {"dl": "p(1,2)", "dr": "p(1,2)"}),
    "prelie->assoc": ("prelie", "assoc", {"s": "mu(1,2)"}),
    "prelie->dend": ("prelie", "dend", {"s": "pl(1,2) - pr(2,1)"}),
    "lie->prelie": ("lie", "prelie", {"b": "s(1,2) - s(2,1)"}),
    "dias->assoc": ("dias", "assoc", {"dl": "mu(1,2)", "dr": "mu(1,2)"}),
    "leib->dias": ("leib", "dias", {"lm": "dl(1,2) - dr(2,1)"}),
    "leib->lie": ("leib", "lie", {"lm": "b(1,2)"}),
}

EDGE_NAMES = tuple(sorted(_EDGES))


def standard_edge(
    name: str,
    operads: Optional[Dict[str, QuotientOperad]] = None,
    bounds: Bounds = Bounds(),
) -> OperadMap:
    try:
        src_name, dst_name, images = _EDGES[name]
    except KeyError:
        raise KeyError(f"unknown edge {name!r}; choices: {', '.join(EDGE_NAMES)}")
    if operads is None:
        operads = {}
    for key in (src_name, dst_name):
        if key not in operads:
            operads[key] = standard_operad(key, bounds)
    return OperadMap(
        name,
        operads[src_name],
        operads[dst_name],
        {g: _rel(expr) for g, expr in images.items()},
    )


def build_edges(
    operads: Optional[Dict[str, QuotientOperad]] = None, bounds: Bounds = Bounds()
) -> Dict[str, OperadMap]:
    if operads is None:
        operads = build_catalog(bounds)
    return {name: standard_edge(name, operads, bounds) for name in EDGE_NAMES}
