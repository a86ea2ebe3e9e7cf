"""Presentations of binary operads and bounded slices of their quotients.

A presentation is a signature plus homogeneous relation vectors in the
free operad.  The quotient is materialized one arity at a time: the
ideal slice at arity n is spanned by single-vertex grafts of the slice
at n-1 on both sides, relabeled through explicit coset representatives.
Because the lower slice is stable under relabeling, those grafts span
the whole induced submodule; the recursion needs no shuffle bookkeeping
beyond the representatives themselves.

The quotient basis at each arity is the set of monomials away from the
ideal's pivot columns, so normal forms are computed by echelon reduction
and composition is grafting followed by reduction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .linalg import Echelon, Indexer, vadd, vscale
from .trees import (
    Generator,
    Node,
    Signature,
    Tree,
    TreeVec,
    arity_of,
    format_tree,
    leaves_of,
    parse_tree,
    tree_key,
    tree_weight,
)

__all__ = ["Bounds", "Presentation", "QuotientOperad", "OperadMap", "canon_vec"]


@dataclass(frozen=True)
class Bounds:
    """Arity and weight ceilings for every bounded computation."""

    n_max: int = 6
    w_max: int = 6

    def __post_init__(self) -> None:
        if self.n_max < 2 or self.w_max < 1:
            raise ValueError("bounds must allow at least arity 2 and weight 1")


def canon_vec(sig: Signature, vec: TreeVec) -> TreeVec:
    """Canonicalize every symbol of a formal combination and merge."""
    out: TreeVec = {}
    for t, c in vec.items():
        if not c:
            continue
        r = sig.canon(t)
        if r is None:
            continue
        u, s = r
        nc = out.get(u, 0) + s * Fraction(c)
        if nc:
            out[u] = nc
        else:
            out.pop(u, None)
    return out


class Presentation:
    """Named generators plus homogeneous relations in the free operad."""

    def __init__(self, name: str, signature: Signature, relations: Iterable[TreeVec]) -> None:
        self.name = name
        self.signature = signature
        rels: List[TreeVec] = []
        for raw in relations:
            v = canon_vec(signature, raw)
            if not v:
                raise ValueError("zero or collapsing relation")
            arities = {arity_of(t) for t in v}
            weights = {tree_weight(t) for t in v}
            if len(arities) != 1 or len(weights) != 1:
                raise ValueError(f"inhomogeneous relation: {[format_tree(t) for t in v]}")
            rels.append(v)
        self.relations: Tuple[TreeVec, ...] = tuple(rels)

    @property
    def is_quadratic(self) -> bool:
        return all(tree_weight(next(iter(r))) == 2 for r in self.relations)

    def relation_arity(self, r: TreeVec) -> int:
        return arity_of(next(iter(r)))

    def to_dict(self) -> dict:
        """Canonical JSON-ready form; snapshot is sorted and fraction-exact."""
        return {
            "name": self.name,
            "generators": [
                {"name": g.name, "arity": g.arity, "symmetry": g.symmetry}
                for g in self.signature.gens
            ],
            "relations": [
                [[format_tree(t), str(c)] for t, c in sorted(r.items(), key=lambda kv: tree_key(kv[0]))]
                for r in self.relations
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Presentation":
        sig = Signature(
            Generator(g["name"], g["arity"], g["symmetry"]) for g in data["generators"]
        )
        rels = [
            {parse_tree(ts): Fraction(cs) for ts, cs in pairs}
            for pairs in data["relations"]
        ]
        return cls(data["name"], sig, rels)


class QuotientOperad:
    """Bounded arity slices of a free operad modulo an operadic ideal.

    Only binary signatures are accepted: every slice then sits in a
    single weight (arity minus one), which keeps the keying flat.
    """

    def __init__(self, presentation: Presentation, bounds: Bounds = Bounds()) -> None:
        if not presentation.signature.is_binary:
            raise ValueError("quotient slices require an all-binary signature")
        self.presentation = presentation
        self.bounds = bounds
        self.signature = presentation.signature
        self._indexers: Dict[int, Indexer] = {}
        self._ideal: Dict[int, Echelon] = {}
        self._ideal_vecs: Dict[int, List[TreeVec]] = {}
        self._basis: Dict[int, Tuple[Tree, ...]] = {}
        self._compose_cache: Dict[Tuple[Tree, int, Tree], TreeVec] = {}

    @property
    def name(self) -> str:
        return self.presentation.name

    def _check_arity(self, n: int) -> None:
        if not 1 <= n <= self.bounds.n_max:
            raise ValueError(f"arity {n} outside bounds (n_max={self.bounds.n_max})")

    def free_basis(self, n: int) -> Tuple[Tree, ...]:
        self._check_arity(n)
        return self.signature.slice_basis(n)

    def indexer(self, n: int) -> Indexer:
        ix = self._indexers.get(n)
        if ix is None:
            ix = Indexer(self.free_basis(n))
            self._indexers[n] = ix
        return ix

    def _orbit_rows(self, vec: TreeVec, n: int) -> Iterable[TreeVec]:
        for perm in permutations(range(1, n + 1)):
            yield self.signature.act_vec(perm, vec)

    def ideal(self, n: int) -> Echelon:
        """Echelon of the arity-n slice of the relation ideal."""
        self._check_arity(n)
        ech = self._ideal.get(n)
        if ech is not None:
            return ech
        ix = self.indexer(n)
        ech = Echelon()
        vecs: List[TreeVec] = []

        def push(v: TreeVec) -> None:
            if v and ech.add(ix.to_vec(v)):
                vecs.append(v)

        for r in self.presentation.relations:
            if self.presentation.relation_arity(r) == n:
                for row in self._orbit_rows(r, n):
                    push(row)
        if n >= 3:
            prev = self.ideal_basis(n - 1)
            sig = self.signature
            for s in prev:
                for g in sig.gens:
                    unit = Node(g.name, (1, 2))
                    # grafts with the relation strictly inside a child
                    under2 = sig.graft_vec({unit: Fraction(1)}, 2, s)
                    for k in range(1, n + 1):
                        perm = tuple([k] + [l - 1 if l <= k else l for l in range(2, n + 1)])
                        push(sig.act_vec(perm, under2))
                    under1 = sig.graft_vec({unit: Fraction(1)}, 1, s)
                    for k in range(1, n + 1):
                        perm = tuple([l if l < k else l + 1 for l in range(1, n)] + [k])
                        push(sig.act_vec(perm, under1))
                    # grafts with a fresh vertex below leaf 1 of the relation
                    variants = [unit]
                    if g.symmetry == "regular":
                        variants.append(Node(g.name, (2, 1)))
                    for v in variants:
                        over = sig.graft_vec(s, 1, {v: Fraction(1)})
                        for a in range(1, n + 1):
                            for b in range(a + 1, n + 1):
                                rest = [l for l in range(1, n + 1) if l != a and l != b]
                                perm = tuple([a, b] + rest)
                                push(sig.act_vec(perm, over))
        self._ideal[n] = ech
        self._ideal_vecs[n] = vecs
        return ech

    def ideal_basis(self, n: int) -> List[TreeVec]:
        self.ideal(n)
        return self._ideal_vecs[n]

    def dim(self, n: int) -> int:
        return len(self.free_basis(n)) - self.ideal(n).rank

    def basis(self, n: int) -> Tuple[Tree, ...]:
        """Normal-form monomials: the non-pivot columns of the ideal."""
        b = self._basis.get(n)
        if b is None:
            ech = self.ideal(n)
            ix = self.indexer(n)
            pivots = set(ech.pivots)
            b = tuple(t for i, t in enumerate(ix) if i not in pivots)
            self._basis[n] = b
        return b

    def nf(self, vec: TreeVec) -> TreeVec:
        """Normal form modulo the ideal; symbols need not be canonical."""
        vec = canon_vec(self.signature, vec)
        if not vec:
            return {}
        arities = {arity_of(t) for t in vec}
        if len(arities) != 1:
            raise ValueError("normal forms need a single arity")
        n = arities.pop()
        ix = self.indexer(n)
        return ix.from_vec(self.ideal(n).reduce(ix.to_vec(vec)))

    def in_ideal(self, vec: TreeVec) -> bool:
        return not self.nf(vec)

    def compose_trees(self, f: Tree, i: int, g: Tree) -> TreeVec:
        key = (f, i, g)
        hit = self._compose_cache.get(key)
        if hit is None:
            r = self.signature.graft(f, i, g)
            hit = self.nf({r[0]: Fraction(r[1])}) if r is not None else {}
            self._compose_cache[key] = hit
        return hit

    def compose(self, u: TreeVec, i: int, v: TreeVec) -> TreeVec:
        out: TreeVec = {}
        for f, cf in u.items():
            for g, cg in v.items():
                out = vadd(out, vscale(cf * cg, self.compose_trees(f, i, g)))
        return out

    def act(self, perm: Sequence[int], vec: TreeVec) -> TreeVec:
        return self.nf(self.signature.act_vec(perm, vec))


class OperadMap:
    """Operad morphism determined by generator images of weight one.

    Images are combinations of single-vertex symbols of the target.  On
    construction every relation of the source is checked to land in the
    target ideal; a morphism that does not is refused.
    """

    def __init__(
        self,
        name: str,
        source: QuotientOperad,
        target: QuotientOperad,
        images: Dict[str, TreeVec],
        check: bool = True,
    ) -> None:
        self.name = name
        self.source = source
        self.target = target
        self.images: Dict[str, TreeVec] = {}
        for g in source.signature.gens:
            if g.name not in images:
                raise ValueError(f"missing image for generator {g.name}")
            img = canon_vec(target.signature, images[g.name])
            for t in img:
                if tree_weight(t) != 1 or arity_of(t) != g.arity:
                    raise ValueError(f"image of {g.name} must be a single-vertex combination")
            self.images[g.name] = img
        self._std_cache: Dict[Tree, TreeVec] = {}
        if check:
            bad = self.failing_relation()
            if bad is not None:
                raise ValueError(f"{name}: relation image survives in {target.name}")

    def failing_relation(self) -> Optional[TreeVec]:
        for r in self.source.presentation.relations:
            img = self.on_free_vec(r)
            if not self.target.in_ideal(img):
                return r
        return None

    def _on_std(self, t: Tree) -> TreeVec:
        """Image of a tree whose leaves are exactly 1..arity."""
        hit = self._std_cache.get(t)
        if hit is not None:
            return hit
        if isinstance(t, int):
            return {t: Fraction(1)}
        sig = self.target.signature
        acc = self.images[t.gen]
        offsets: List[int] = []
        total = 0
        blocks: List[Tuple[int, ...]] = []
        for c in t.children:
            blocks.append(leaves_of(c))
            offsets.append(total)
            total += len(blocks[-1])
        # graft the (standardized) child images back to front so slot
        # numbers stay valid, then restore the true label pattern
        for slot in range(len(t.children), 0, -1):
            child = t.children[slot - 1]
            std_child = self._std_of(child)
            acc = sig.graft_vec(acc, slot, std_child)
        perm = [0] * total
        for b, off in zip(blocks, offsets):
            for j, lab in enumerate(b):
                perm[off + j] = lab
        out = sig.act_vec(tuple(perm), acc)
        self._std_cache[t] = out
        return out

    def _std_of(self, t: Tree) -> TreeVec:
        labs = leaves_of(t)
        image = {lab: j + 1 for j, lab in enumerate(labs)}
        r = self.source.signature.relabel(t, image)
        if r is None:
            return {}
        u, s = r
        return vscale(Fraction(s), self._on_std(u))

    def on_free_vec(self, vec: TreeVec) -> TreeVec:
        """Free-operad image, no reduction in the target."""
        out: TreeVec = {}
        for t, c in vec.items():
            out = vadd(out, vscale(Fraction(c), self._std_of(t)))
        return out

    def on_vec(self, vec: TreeVec) -> TreeVec:
        """Image in the target quotient, in normal form."""
        img = self.on_free_vec(vec)
        return self.target.nf(img) if img else {}

    def then(self, other: "OperadMap") -> "OperadMap":
        """Composite map: self first, then other."""
        if self.target is not other.source:
            raise ValueError("composition needs matching middle operad")
        images = {
            g.name: other.on_free_vec(self.images[g.name])
            for g in self.source.signature.gens
        }
        return OperadMap(
            f"{self.name};{other.name}", self.source, other.target, images
        )
