"""Quadratic duality for binary presentations and the complexes it feeds.

The dual of a presentation lives on the same generator names with the
two-leaf symmetry toggled (trivial and sign swap, regular stays).  Its
relations are the annihilator of the relation submodule under a pairing
of arity-3 slices that matches planar shapes and leaf words and twists
by the leaf-word sign, with the two planar shapes weighted +1 and -1.
That twist is what makes the value independent of which planar
representative of a canonical symbol is used.

The dual cooperad is realized concretely: its arity slices are subspaces
of the free symbols on the dual generators, built by a top-and-bottom
recursion, and the one-vertex strip-off at the bottom carries the sign
of moving an odd vertex past the vertices that follow it in preorder.
Everything downstream is validated mechanically: the square of each
differential is checked to vanish, and slice dimensions are compared
against the independently computed quotient by the dual relations.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .complexes import ChainComplex
from .linalg import (
    Indexer,
    LinearSolver,
    Vec,
    intersect,
    kernel_basis,
    rank_of,
    span_basis,
    span_echelon,
    vadd,
    vscale,
)
from .presentation import Bounds, OperadMap, Presentation, QuotientOperad
from .trees import (
    Generator,
    Node,
    Signature,
    Tree,
    TreeVec,
    arity_of,
    bottom_vertex_paths,
    format_tree,
    perm_sign,
    replace_at,
    subtree_at,
    tree_key,
    tree_weight,
    vertex_paths,
)

__all__ = [
    "UnsupportedPresentation",
    "dual_signature",
    "pairing3",
    "koszul_dual",
    "canon_tracked",
    "bottom_extractions",
    "cooperad_slices",
    "koszul_complex",
    "koszul_homology",
    "is_koszul_by_complex",
    "dual_map",
]


class UnsupportedPresentation(ValueError):
    """Quadratic duality asked for outside its domain (binary quadratic)."""


_TOGGLE = {"trivial": "sign", "sign": "trivial", "regular": "regular"}


def dual_signature(sig: Signature) -> Signature:
    """Same generator names with trivial and sign symmetries exchanged."""
    if not sig.is_binary:
        raise UnsupportedPresentation("duality needs an all-binary signature")
    return Signature(Generator(g.name, 2, _TOGGLE[g.symmetry]) for g in sig.gens)


def _guard(pres: Presentation) -> None:
    if not pres.signature.is_binary:
        raise UnsupportedPresentation(f"{pres.name}: duality needs binary generators")
    if not pres.is_quadratic:
        raise UnsupportedPresentation(f"{pres.name}: duality needs quadratic relations")


def _split3(t: Tree) -> Tuple[int, str, str, Tuple[int, int, int]]:
    """Planar shape of a two-vertex symbol: (slot, root, inner, leaf word)."""
    a, b = t.children  # type: ignore[union-attr]
    if isinstance(a, Node):
        return 1, t.gen, a.gen, (a.children[0], a.children[1], b)  # type: ignore
    return 2, t.gen, b.gen, (a, b.children[0], b.children[1])  # type: ignore


def pairing3(y: Tree, x: Tree) -> int:
    """Pairing of a dual-signature symbol against a primal one.

    Nonzero only when the planar decompositions agree on the nose; the
    value is the leaf-word sign, negated for the right-slot shape.
    """
    sy = _split3(y)
    sx = _split3(x)
    if sy != sx:
        return 0
    eps = 1 if sy[0] == 1 else -1
    return eps * perm_sign(sy[3])


def _pair_vecs(yvec: TreeVec, xvec: TreeVec) -> Fraction:
    total = Fraction(0)
    for y, cy in yvec.items():
        for x, cx in xvec.items():
            p = pairing3(y, x)
            if p:
                total += Fraction(cy) * Fraction(cx) * p
    return total


def _relation_module(pres: Presentation) -> List[TreeVec]:
    """Basis of the S_3-submodule generated by the arity-3 relations."""
    sig = pres.signature
    idx = Indexer(sig.slice_basis(3))
    rows: List[Vec] = []
    for r in pres.relations:
        for perm in permutations((1, 2, 3)):
            rows.append(idx.to_vec(sig.act_vec(perm, r)))
    return [idx.from_vec(v) for v in span_basis(rows)]


def koszul_dual(pres: Presentation) -> Presentation:
    """Quadratic dual presentation, on the same generator names.

    The relations are a basis of the annihilator of the relation
    submodule, so applying this twice returns the original relation
    span.  Raises UnsupportedPresentation outside the binary quadratic
    domain.
    """
    _guard(pres)
    sig = pres.signature
    dsig = dual_signature(sig)
    ybasis = dsig.slice_basis(3)
    xbasis = sig.slice_basis(3)
    if len(ybasis) != len(xbasis):
        raise AssertionError("free slices of dual signatures must match in size")
    xidx = Indexer(xbasis)
    tmat = [
        {xidx.index(x): Fraction(pairing3(y, x)) for x in xbasis if pairing3(y, x)}
        for y in ybasis
    ]
    if rank_of(tmat) != len(ybasis):
        raise AssertionError("degenerate arity-3 pairing; sign conventions broken")
    rel = _relation_module(pres)
    rows: List[Vec] = []
    for y in ybasis:
        row: Vec = {}
        for j, r in enumerate(rel):
            val = _pair_vecs({y: Fraction(1)}, r)
            if val:
                row[j] = val
        rows.append(row)
    ann = kernel_basis(rows)
    if len(ann) + len(rel) != len(ybasis):
        raise AssertionError("annihilator dimension mismatch")
    dual_rels = []
    for combo in ann:
        vec: TreeVec = {}
        for i, c in combo.items():
            vec[ybasis[i]] = c
        dual_rels.append(vec)
    return Presentation(pres.name + "!", dsig, dual_rels)


def canon_tracked(sig: Signature, t: Tree) -> Optional[Tuple[Tree, int]]:
    """Canonical form with the extra sign for reordering odd vertices.

    On top of the usual leaf symmetry sign, every vertex counts as an
    odd symbol positioned by planar preorder, and the parity of the
    reordering the canonical sort applies is multiplied in.
    """

    def walk(u: Tree, counter: List[int]):
        if isinstance(u, int):
            return u, 1, []
        tag = counter[0]
        counter[0] += 1
        parts = []
        for c in u.children:
            r = walk(c, counter)
            if r is None:
                return None
            parts.append(r)
        g = sig.generator(u.gen)
        sign = 1
        if g.symmetry != "regular":
            keys = [tree_key(p[0]) for p in parts]
            if g.symmetry == "sign":
                if len(set(keys)) != len(keys):
                    return None
                sign = perm_sign(keys)
            order = sorted(range(len(parts)), key=keys.__getitem__)
            parts = [parts[i] for i in order]
        kids: List[Tree] = []
        tags = [tag]
        for cu, cs, ct in parts:
            sign *= cs
            kids.append(cu)
            tags.extend(ct)
        return Node(u.gen, tuple(kids)), sign, tags

    r = walk(t, [0])
    if r is None:
        return None
    node, sign, tags = r
    return node, sign * perm_sign(tags)


def _relabel_raw(t: Tree, image: Dict[int, int]) -> Tree:
    if isinstance(t, int):
        return image[t]
    return Node(t.gen, tuple(_relabel_raw(c, image) for c in t.children))


def bottom_extractions(
    sig: Signature, t: Tree
) -> List[Tuple[Tuple[int, int], Tree, Tree, int]]:
    """All ways of stripping one bottom vertex off a canonical symbol.

    Each entry is (pair, collapsed, vertex, sign): the sorted leaf pair
    the vertex carried, the canonical symbol left after the pair merges
    into its smaller label and the labels close up, the vertex as a
    canonical two-leaf symbol, and the product of the odd-vertex sign
    (past the vertices after it in preorder) with both
    recanonicalization signs.
    """
    n = arity_of(t)
    w = tree_weight(t)
    paths = vertex_paths(t)
    out = []
    for path in bottom_vertex_paths(t):
        node = subtree_at(t, path)
        x, y = node.children  # type: ignore[union-attr]
        a, b = (x, y) if x < y else (y, x)
        q = paths.index(path)
        sign = -1 if (w - 1 - q) % 2 else 1
        vr = sig.canon(Node(node.gen, (1, 2) if x < y else (2, 1)))  # type: ignore
        if vr is None:
            continue
        vnode, vsign = vr
        keep = [l for l in range(1, n + 1) if l != b]
        image = {l: keep.index(l) + 1 for l in keep}
        collapsed = _relabel_raw(replace_at(t, path, a), image)
        cr = canon_tracked(sig, collapsed)
        if cr is None:
            continue
        u, csign = cr
        out.append(((a, b), u, vnode, sign * vsign * csign))
    return out


def _transport_relations(op: QuotientOperad, dsig: Signature) -> List[TreeVec]:
    """Dual-coordinate image of the arity-3 relation module.

    These are the weight-2 windows every dual cooperad element must be
    built from; the pairing matrix is invertible, so the transport is a
    change of coordinates, not a projection.
    """
    sig = op.signature
    ybasis = dsig.slice_basis(3)
    idx = op.indexer(3)
    rows = [
        {idx.index(x): Fraction(pairing3(y, x)) for x in op.free_basis(3) if pairing3(y, x)}
        for y in ybasis
    ]
    solver = LinearSolver(rows, dim=len(idx))
    out = []
    for r in op.ideal_basis(3):
        coeffs = solver.solve(idx.to_vec(r))
        if coeffs is None:
            raise AssertionError("arity-3 pairing failed to invert")
        vec: TreeVec = {}
        for i, c in enumerate(coeffs):
            if c:
                vec[ybasis[i]] = c
        out.append(vec)
    return out


def _pair_index(n: int) -> Dict[Tuple[int, int], int]:
    return {p: i for i, p in enumerate(combinations(range(1, n + 1), 2))}


def _next_slice(dsig: Signature, cos: Dict[int, List[TreeVec]], n: int) -> List[TreeVec]:
    """One step of the cooperad recursion: top grafts meet bottom windows."""
    basis = dsig.slice_basis(n)
    idx = Indexer(basis)
    one = Fraction(1)

    # top condition: spanned by grafting lower slices onto a fresh root
    arows: List[Vec] = []
    for a in range(1, n):
        b = n - a
        for left in combinations(range(1, n + 1), a):
            right = tuple(l for l in range(1, n + 1) if l not in left)
            sigma = left + right
            for g in dsig.gens:
                root: TreeVec = {Node(g.name, (1, 2)): one}
                for c2 in cos[b]:
                    mid = dsig.graft_vec(root, 2, c2) if b > 1 else root
                    for c1 in cos[a]:
                        top = dsig.graft_vec(mid, 1, c1) if a > 1 else mid
                        arows.append(idx.to_vec(dsig.act_vec(sigma, top)))
    top_span = span_basis(arows)

    # bottom condition: every stripped pair must land in C(n-1) (x) gens
    vslice = dsig.slice_basis(2)
    kidx = Indexer((u, v) for u in dsig.slice_basis(n - 1) for v in vslice)
    wrows: List[Vec] = []
    for cvec in cos[n - 1]:
        for v in vslice:
            wrows.append(kidx.to_vec({(u, v): c for u, c in cvec.items()}))
    wech = span_echelon(wrows)
    stride = len(kidx)
    pidx = _pair_index(n)
    rows: List[Vec] = []
    for t in basis:
        row: Vec = {}
        for pair, u, vnode, s in bottom_extractions(dsig, t):
            res = wech.reduce({kidx.index((u, vnode)): Fraction(s)})
            base = pidx[pair] * stride
            for k, c in res.items():
                row[base + k] = row.get(base + k, Fraction(0)) + c
        rows.append({k: c for k, c in row.items() if c})
    bottom = kernel_basis(rows)

    return [idx.from_vec(v) for v in intersect(top_span, bottom)]


def cooperad_slices(op: QuotientOperad, n_max: int) -> Dict[int, List[TreeVec]]:
    """Arity slices of the dual cooperad, as subspaces of dual symbols.

    Slice n sits in weight n-1.  Index 1 holds the unit placeholder so
    composite bookkeeping stays uniform.  Dimensions agree with the
    quotient by the dual relations; tests enforce that independently.
    """
    _guard(op.presentation)
    dsig = dual_signature(op.signature)
    cos: Dict[int, List[TreeVec]] = {1: [{1: Fraction(1)}]}
    if n_max >= 2:
        cos[2] = [{t: Fraction(1)} for t in dsig.slice_basis(2)]
    if n_max >= 3:
        cos[3] = _transport_relations(op, dsig)
    for n in range(4, n_max + 1):
        cos[n] = _next_slice(dsig, cos, n)
    return cos


def _set_partitions(labels: Tuple[int, ...]) -> Iterator[Tuple[Tuple[int, ...], ...]]:
    """Partitions into blocks; blocks sorted inside and ordered by minimum."""
    if not labels:
        yield ()
        return
    first, rest = labels[0], labels[1:]
    for k in range(len(rest) + 1):
        for extra in combinations(rest, k):
            block = (first,) + extra
            remaining = tuple(l for l in rest if l not in extra)
            for sub in _set_partitions(remaining):
                yield (block,) + sub


def koszul_complex(
    op: QuotientOperad, cos: Dict[int, List[TreeVec]], n: int
) -> ChainComplex:
    """Arity-n acyclicity test complex of a quadratic presentation.

    Basis keys are (partition, dual index, block classes): a partition
    of the inputs with blocks ordered by minimum, a basis element of the
    dual cooperad slice on the blocks, and a normal-form monomial of the
    quotient on each block.  The differential strips one bottom vertex
    from the dual element and composes the two named blocks with the
    stripped generator.  Homological degree is the dual weight, so it
    runs from 0 to n-1.
    """
    dsig = dual_signature(op.signature)
    vslice = dsig.slice_basis(2)

    spaces: Dict[int, List] = {}
    parts_by_k: Dict[int, List[Tuple[Tuple[int, ...], ...]]] = {}
    for pi in _set_partitions(tuple(range(1, n + 1))):
        parts_by_k.setdefault(len(pi), []).append(pi)
    for k, parts in sorted(parts_by_k.items()):
        if k not in cos or not cos[k]:
            continue
        keys = []
        for pi in parts:
            block_bases = [op.basis(len(b)) for b in pi]
            for ci in range(len(cos[k])):
                stack = [()]
                for bb in block_bases:
                    stack = [s + (t,) for s in stack for t in bb]
                keys.extend((pi, ci, trees) for trees in stack)
        if keys:
            spaces[k - 1] = keys

    solvers: Dict[int, Tuple[LinearSolver, List, Indexer]] = {}

    def solver_for(k: int):
        hit = solvers.get(k)
        if hit is None:
            kidx = Indexer((u, v) for c in cos[k] for u in c for v in vslice)
            rows: List[Vec] = []
            decode = []
            for cj, cvec in enumerate(cos[k]):
                for v in vslice:
                    rows.append(kidx.to_vec({(u, v): c for u, c in cvec.items()}, strict=False))
                    decode.append((cj, v))
            hit = (LinearSolver(rows, dim=len(kidx)), decode, kidx)
            solvers[k] = hit
        return hit

    strip_cache: Dict[Tuple[int, int], Dict[Tuple[int, int], List]] = {}

    def strip_coeffs(k: int, ci: int):
        hit = strip_cache.get((k, ci))
        if hit is not None:
            return hit
        solver, decode, kidx = solver_for(k - 1)
        comps: Dict[Tuple[int, int], Vec] = {}
        for t, c in cos[k][ci].items():
            for pair, u, vnode, s in bottom_extractions(dsig, t):
                key = kidx.get((u, vnode))
                if key is None:
                    raise AssertionError("stripped window escapes the lower slice")
                row = comps.setdefault(pair, {})
                row[key] = row.get(key, Fraction(0)) + Fraction(c) * s
        out: Dict[Tuple[int, int], List] = {}
        for pair, w in comps.items():
            w = {k2: c for k2, c in w.items() if c}
            if not w:
                continue
            coeffs = solver.solve(w)
            if coeffs is None:
                raise AssertionError("stripped window escapes the lower slice")
            terms = [(decode[i][0], decode[i][1], c) for i, c in enumerate(coeffs) if c]
            if terms:
                out[pair] = terms
        strip_cache[(k, ci)] = out
        return out

    merge_cache: Dict[Tuple[Tree, Tree, Tree, Tuple[int, ...]], TreeVec] = {}

    def merged_block(vnode: Tree, pi_tree: Tree, pj_tree: Tree, sigma: Tuple[int, ...]) -> TreeVec:
        key = (vnode, pi_tree, pj_tree, sigma)
        hit = merge_cache.get(key)
        if hit is None:
            g = op.signature.generator(vnode.gen)  # type: ignore[union-attr]
            kappa = -1 if g.symmetry == "regular" and vnode.children == (2, 1) else 1  # type: ignore
            vec = op.compose({vnode: Fraction(kappa)}, 2, {pj_tree: Fraction(1)})
            vec = op.compose(vec, 1, {pi_tree: Fraction(1)})
            hit = op.act(sigma, vec) if sigma != tuple(range(1, len(sigma) + 1)) else vec
            merge_cache[key] = hit
        return hit

    def d(degree: int, key) -> Dict:
        pi, ci, trees = key
        k = len(pi)
        if k == 1:
            return {}
        out: Dict = {}
        for (a, b), terms in strip_coeffs(k, ci).items():
            bi, bj = pi[a - 1], pi[b - 1]
            merged = tuple(sorted(bi + bj))
            rank = {l: r + 1 for r, l in enumerate(merged)}
            sigma = tuple(rank[l] for l in bi + bj)
            new_pi = tuple(sorted(
                [blk for i2, blk in enumerate(pi) if i2 not in (a - 1, b - 1)] + [merged]
            ))
            pos = new_pi.index(merged)
            rest = [trees[i2] for i2, blk in enumerate(pi) if i2 not in (a - 1, b - 1)]
            for cj, vnode, alpha in terms:
                for mt, mc in merged_block(vnode, trees[a - 1], trees[b - 1], sigma).items():
                    new_trees = tuple(rest[:pos] + [mt] + rest[pos:])
                    nk = (new_pi, cj, new_trees)
                    val = out.get(nk, Fraction(0)) + alpha * mc
                    if val:
                        out[nk] = val
                    else:
                        out.pop(nk, None)
        return out

    return ChainComplex(spaces, d)


def koszul_homology(
    op: QuotientOperad, n_max: int, check: bool = True
) -> Dict[int, Dict[int, int]]:
    """Homology dimensions of the acyclicity complex for 2 <= n <= n_max."""
    cos = cooperad_slices(op, n_max)
    out: Dict[int, Dict[int, int]] = {}
    for n in range(2, n_max + 1):
        cc = koszul_complex(op, cos, n)
        if check:
            bad = cc.check_d_squared()
            if bad is not None:
                raise AssertionError(f"d^2 != 0 at arity {n}: {bad[:2]}")
        out[n] = {k: h for k, h in cc.homology_dims().items() if h}
    return out


def is_koszul_by_complex(op: QuotientOperad, n_max: int, check: bool = True):
    """Bounded acyclicity verdict plus the nonzero homology found."""
    hom = koszul_homology(op, n_max, check=check)
    flat = {n: hs for n, hs in hom.items() if hs}
    return not flat, flat


def dual_map(
    phi: OperadMap, target_dual: QuotientOperad, source_dual: QuotientOperad
) -> OperadMap:
    """Contravariant dual of a morphism between quadratic presentations.

    For phi: P -> Q this returns Q^! -> P^!, determined on weight one by
    the transpose in canonical coordinates with the right-slot
    orientation of regular generators negated on both sides.
    """
    pres_q = phi.target.presentation
    for g in pres_q.signature.gens:
        if target_dual.signature.generator(g.name).symmetry != _TOGGLE[g.symmetry]:
            raise ValueError("target_dual does not match the dual signature")
    images: Dict[str, TreeVec] = {}
    for q in pres_q.signature.gens:
        probe = Node(q.name, (1, 2))
        img: TreeVec = {}
        for u in phi.source.signature.slice_basis(2):
            coeff = phi.on_free_vec({u: Fraction(1)}).get(probe, 0)
            if coeff:
                g = phi.source.signature.generator(u.gen)  # type: ignore[union-attr]
                sgn = -1 if g.symmetry == "regular" and u.children == (2, 1) else 1  # type: ignore
                img[u] = Fraction(coeff) * sgn
        images[q.name] = img
    return OperadMap(phi.name + "!", target_dual, source_dual, images)
