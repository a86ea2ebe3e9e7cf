"""Tree symbols for free operads on generators with named symmetries.

A basis symbol is a rooted tree whose internal vertices carry generator
names and whose leaves carry the labels 1..n.  Generators are binary or
higher and come in three symmetry flavors: ``regular`` (no relations
among the inputs, so symbols are planar), ``trivial`` (inputs commute),
and ``sign`` (inputs anticommute).  Symbols of the two symmetric flavors
are kept canonical by sorting children; the ``sign`` flavor picks up the
parity of that sort.

All weights are counted as one per internal vertex.  Vectors are sparse
dicts from canonical nodes to rationals.

>>> sig = Signature([Generator("b", 2, "sign")])
>>> t, s = sig.canon(Node("b", (2, 1)))
>>> format_tree(t), s
('b(1,2)', -1)
>>> [format_tree(t) for t in sig.slice_basis(3)]
['b(b(1,2),3)', 'b(b(1,3),2)', 'b(b(2,3),1)']
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

__all__ = [
    "Generator",
    "Node",
    "Signature",
    "Tree",
    "TreeVec",
    "arity_of",
    "bottom_vertex_paths",
    "format_tree",
    "leaves_of",
    "parse_tree",
    "perm_sign",
    "replace_at",
    "subtree_at",
    "tree_key",
    "tree_weight",
    "vertex_paths",
]

SYMMETRIES = ("trivial", "sign", "regular")


@dataclass(frozen=True)
class Generator:
    """A generating operation: its name, arity, and input symmetry."""

    name: str
    arity: int = 2
    symmetry: str = "regular"

    def __post_init__(self) -> None:
        if self.arity < 2:
            raise ValueError("generator arity must be at least 2")
        if self.symmetry not in SYMMETRIES:
            raise ValueError(f"unknown symmetry {self.symmetry!r}")


@dataclass(frozen=True)
class Node:
    """Internal vertex: generator name plus ordered children.

    Children are nodes or integer leaf labels.  Equality and hashing are
    structural, so canonical nodes can key sparse vectors directly.
    """

    gen: str
    children: Tuple["Tree", ...]


Tree = Union[Node, int]
TreeVec = Dict[Tree, Fraction]


def tree_key(t: Tree) -> tuple:
    """Total order on symbols; vertices sort below leaves, so canonical
    symmetric symbols come out left-normed, e.g. b(b(1,2),3)."""
    if isinstance(t, int):
        return (1, t)
    return (0, t.gen) + tuple(tree_key(c) for c in t.children)


def leaves_of(t: Tree) -> Tuple[int, ...]:
    if isinstance(t, int):
        return (t,)
    out: List[int] = []
    for c in t.children:
        out.extend(leaves_of(c))
    return tuple(sorted(out))


def arity_of(t: Tree) -> int:
    if isinstance(t, int):
        return 1
    return sum(arity_of(c) for c in t.children)


def tree_weight(t: Tree) -> int:
    if isinstance(t, int):
        return 0
    return 1 + sum(tree_weight(c) for c in t.children)


def perm_sign(order: Sequence) -> int:
    """Parity of a sequence of distinct comparables, as +1 or -1."""
    sign = 1
    items = list(order)
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if items[j] < items[i]:
                sign = -sign
    return sign


def format_tree(t: Tree) -> str:
    if isinstance(t, int):
        return str(t)
    return f"{t.gen}({','.join(format_tree(c) for c in t.children)})"


def parse_tree(s: str) -> Tree:
    """Inverse of :func:`format_tree`; raises ValueError on junk."""
    pos = 0

    def parse() -> Tree:
        nonlocal pos
        start = pos
        while pos < len(s) and (s[pos].isalnum() or s[pos] == "_"):
            pos += 1
        token = s[start:pos]
        if not token:
            raise ValueError(f"expected a symbol at offset {start} in {s!r}")
        if pos < len(s) and s[pos] == "(":
            pos += 1
            kids = [parse()]
            while pos < len(s) and s[pos] == ",":
                pos += 1
                kids.append(parse())
            if pos >= len(s) or s[pos] != ")":
                raise ValueError(f"unbalanced parentheses in {s!r}")
            pos += 1
            return Node(token, tuple(kids))
        if not token.isdigit():
            raise ValueError(f"leaf labels must be integers, got {token!r}")
        return int(token)

    out = parse()
    if pos != len(s):
        raise ValueError(f"trailing input at offset {pos} in {s!r}")
    return out


def vertex_paths(t: Tree) -> List[Tuple[int, ...]]:
    """All internal-vertex positions in depth-first preorder; root is ()."""
    out: List[Tuple[int, ...]] = []

    def walk(u: Tree, path: Tuple[int, ...]) -> None:
        if isinstance(u, int):
            return
        out.append(path)
        for i, c in enumerate(u.children):
            walk(c, path + (i,))

    walk(t, ())
    return out


def subtree_at(t: Tree, path: Tuple[int, ...]) -> Tree:
    for i in path:
        t = t.children[i]
    return t


def replace_at(t: Tree, path: Tuple[int, ...], sub: Tree) -> Tree:
    """Structural replacement; the result is not canonical."""
    if not path:
        return sub
    i = path[0]
    kids = list(t.children)
    kids[i] = replace_at(kids[i], path[1:], sub)
    return Node(t.gen, tuple(kids))


def bottom_vertex_paths(t: Tree) -> List[Tuple[int, ...]]:
    """Positions of vertices all of whose children are leaves."""
    return [
        p
        for p in vertex_paths(t)
        if all(isinstance(c, int) for c in subtree_at(t, p).children)
    ]


def _compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _ordered_partitions(labels: Tuple[int, ...], k: int) -> Iterator[Tuple[Tuple[int, ...], ...]]:
    """All ways to split the label set into k nonempty ordered blocks."""
    n = len(labels)
    if k > n:
        return
    for assignment in product(range(k), repeat=n):
        if len(set(assignment)) != k:
            continue
        blocks: List[List[int]] = [[] for _ in range(k)]
        for lab, b in zip(labels, assignment):
            blocks[b].append(lab)
        yield tuple(tuple(b) for b in blocks)


class Signature:
    """A finite family of generators, with the symbol calculus bound to it.

    Canonicalization, relabeling, grafting, and slice enumeration all
    need to know the symmetry of each generator, so they live here.  The
    expensive parts are memoized per signature instance.
    """

    def __init__(self, gens: Iterable[Generator]) -> None:
        self.gens: Tuple[Generator, ...] = tuple(gens)
        self._by_name = {g.name: g for g in self.gens}
        if len(self._by_name) != len(self.gens):
            raise ValueError("duplicate generator names")
        self._canon_cache: Dict[Tree, Optional[Tuple[Tree, int]]] = {}
        self._trees_cache: Dict[Tuple[Tuple[int, ...], int], Tuple[Tree, ...]] = {}

    def generator(self, name: str) -> Generator:
        return self._by_name[name]

    @property
    def is_binary(self) -> bool:
        return all(g.arity == 2 for g in self.gens)

    def canon(self, t: Tree) -> Optional[Tuple[Tree, int]]:
        """Canonical form and sign, or None when the symbol is zero."""
        if isinstance(t, int):
            return t, 1
        hit = self._canon_cache.get(t)
        if hit is not None or t in self._canon_cache:
            return hit
        sign = 1
        kids: List[Tree] = []
        for c in t.children:
            r = self.canon(c)
            if r is None:
                self._canon_cache[t] = None
                return None
            kids.append(r[0])
            sign *= r[1]
        g = self._by_name[t.gen]
        if g.arity != len(kids):
            raise ValueError(f"{t.gen} expects {g.arity} children, got {len(kids)}")
        if g.symmetry != "regular":
            keys = [tree_key(c) for c in kids]
            if g.symmetry == "sign":
                if len(set(keys)) != len(keys):
                    self._canon_cache[t] = None
                    return None
                sign *= perm_sign(keys)
            order = sorted(range(len(kids)), key=keys.__getitem__)
            kids = [kids[i] for i in order]
        out = (Node(t.gen, tuple(kids)), sign)
        self._canon_cache[t] = out
        return out

    def _relabel_raw(self, t: Tree, image: Dict[int, int]) -> Tree:
        if isinstance(t, int):
            return image[t]
        return Node(t.gen, tuple(self._relabel_raw(c, image) for c in t.children))

    def act(self, perm: Sequence[int], t: Tree) -> Optional[Tuple[Tree, int]]:
        """Relabel leaf l to perm[l-1] and recanonicalize."""
        image = {l: perm[l - 1] for l in leaves_of(t)}
        return self.canon(self._relabel_raw(t, image))

    def relabel(self, t: Tree, image: Dict[int, int]) -> Optional[Tuple[Tree, int]]:
        return self.canon(self._relabel_raw(t, image))

    def graft(self, f: Tree, i: int, g: Tree) -> Optional[Tuple[Tree, int]]:
        """Partial composition: plug g into leaf i of f, relabeling so the
        result is a symbol on 1..(arity f + arity g - 1)."""
        m = arity_of(g)
        g_shift = self._relabel_raw(g, {l: l + i - 1 for l in leaves_of(g)})

        def subst(u: Tree) -> Tree:
            if isinstance(u, int):
                if u < i:
                    return u
                if u == i:
                    return g_shift
                return u + m - 1
            return Node(u.gen, tuple(subst(c) for c in u.children))

        return self.canon(subst(f))

    def act_vec(self, perm: Sequence[int], vec: TreeVec) -> TreeVec:
        out: TreeVec = {}
        for t, c in vec.items():
            r = self.act(perm, t)
            if r is None:
                continue
            u, s = r
            nc = out.get(u, 0) + s * c
            if nc:
                out[u] = nc
            else:
                out.pop(u, None)
        return out

    def graft_vec(self, u: TreeVec, i: int, v: TreeVec) -> TreeVec:
        out: TreeVec = {}
        for f, cf in u.items():
            for g, cg in v.items():
                r = self.graft(f, i, g)
                if r is None:
                    continue
                t, s = r
                nc = out.get(t, 0) + s * cf * cg
                if nc:
                    out[t] = nc
                else:
                    out.pop(t, None)
        return out

    def trees(self, labels: Tuple[int, ...], weight: int) -> Tuple[Tree, ...]:
        """Canonical symbols on the given labels with the given weight."""
        labels = tuple(sorted(labels))
        key = (labels, weight)
        hit = self._trees_cache.get(key)
        if hit is not None:
            return hit
        out: List[Tree] = []
        if weight == 0:
            if len(labels) == 1:
                out = [labels[0]]
        elif len(labels) >= 2:
            seen = set()
            for g in self.gens:
                k = g.arity
                for blocks in _ordered_partitions(labels, k):
                    for wsplit in _compositions(weight - 1, k):
                        options = [self.trees(b, w) for b, w in zip(blocks, wsplit)]
                        if any(not o for o in options):
                            continue
                        for combo in product(*options):
                            r = self.canon(Node(g.name, combo))
                            if r is not None and r[0] not in seen:
                                seen.add(r[0])
                                out.append(r[0])
        result = tuple(sorted(out, key=tree_key))
        self._trees_cache[key] = result
        return result

    def slice_basis(self, n: int, weight: Optional[int] = None) -> Tuple[Tree, ...]:
        """Basis of the free operad in arity n at the given weight.

        For all-binary signatures the weight is forced to n - 1 and may
        be omitted.
        """
        if weight is None:
            if not self.is_binary:
                raise ValueError("weight is required for non-binary signatures")
            weight = n - 1
        return self.trees(tuple(range(1, n + 1)), weight)
