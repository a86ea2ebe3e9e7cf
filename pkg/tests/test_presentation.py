"""Quotient operads: frozen dimension tables, stability, morphisms."""

import random
from fractions import Fraction as F
from itertools import permutations
from math import comb, factorial

import pytest

from operadica.catalog import (
    CATALOG_NAMES,
    EDGE_NAMES,
    build_edges,
    standard_edge,
    standard_operad,
    standard_presentation,
)
from operadica.presentation import Bounds, OperadMap, Presentation, QuotientOperad
from operadica.trees import Generator, Node, Signature, parse_tree


def catalan(n):
    return comb(2 * n, n) // (n + 1)


# closed forms, evaluated independently of the library
EXPECTED_DIMS = {
    "assoc": lambda n: factorial(n),
    "comm": lambda n: 1,
    "lie": lambda n: factorial(n - 1),
    "perm": lambda n: n,
    "prelie": lambda n: n ** (n - 1),
    "leib": lambda n: factorial(n),
    "zinb": lambda n: factorial(n),
    "dias": lambda n: n * factorial(n),
    "dend": lambda n: factorial(n) * catalan(n),
    "magma": lambda n: factorial(n) * catalan(n - 1),
    "commmagma": lambda n: _double_factorial(2 * n - 3),
    # worked out by hand: the two rewriting routes on ((xy)z)w force the
    # right comb to vanish, and with it the whole arity-4 slice
    "antiassoc": lambda n: [1, 2, 6, 0, 0][n - 1],
}


def _double_factorial(k):
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


@pytest.fixture(scope="module")
def operads():
    return {name: standard_operad(name, Bounds(5, 5)) for name in CATALOG_NAMES}


@pytest.mark.parametrize("name", sorted(EXPECTED_DIMS))
def test_dimension_tables(name, operads):
    got = [operads[name].dim(n) for n in range(1, 6)]
    want = [EXPECTED_DIMS[name](n) for n in range(1, 6)]
    assert got == want, f"{name}: {got} != {want}"


def test_ideal_slices_are_stable_under_relabeling(operads):
    for name in ("assoc", "lie", "dias"):
        op = operads[name]
        ech = op.ideal(4)
        ix = op.indexer(4)
        for vec in op.ideal_basis(4):
            for perm in [(2, 1, 3, 4), (1, 3, 4, 2), (4, 3, 2, 1)]:
                moved = op.signature.act_vec(perm, vec)
                assert ech.contains(ix.to_vec(moved))


def test_normal_form_idempotent_and_kills_relations(operads):
    for name in ("assoc", "lie", "zinb"):
        op = operads[name]
        for r in op.presentation.relations:
            assert op.nf(r) == {}
        t = op.free_basis(4)[0]
        v = op.nf({t: F(1)})
        assert op.nf(v) == v


def test_quotient_composition_satisfies_operad_axioms(operads):
    rng = random.Random(3)
    for name in ("assoc", "prelie"):
        op = operads[name]

        def rand_elt(n):
            basis = op.basis(n)
            return {t: F(rng.randint(-2, 2)) for t in rng.sample(basis, min(2, len(basis)))}

        f = rand_elt(2)
        g = rand_elt(2)
        h = rand_elt(2)
        # sequential: (f o_i g) o_{i+j-1} h == f o_i (g o_j h)
        for i in (1, 2):
            for j in (1, 2):
                lhs = op.compose(op.compose(f, i, g), i + j - 1, h)
                rhs = op.compose(f, i, op.compose(g, j, h))
                assert lhs == rhs
        # parallel: for i < j, (f o_j h) o_i g == (f o_i g) o_{j+1} h
        lhs = op.compose(op.compose(f, 2, h), 1, g)
        rhs = op.compose(op.compose(f, 1, g), 3, h)
        assert lhs == rhs


def test_composition_with_unit_leaf(operads):
    op = operads["assoc"]
    f = {op.basis(3)[0]: F(2)}
    for i in (1, 2, 3):
        assert op.compose(f, i, {1: F(1)}) == f


def test_composition_well_defined_on_classes(operads):
    from operadica.linalg import vadd

    for name in ("assoc", "lie"):
        op = operads[name]
        r = op.presentation.relations[0]
        f = {t: F(1) for t in op.basis(2)}
        # grafting an ideal element on either side lands in the ideal
        assert op.compose(f, 1, r) == {}
        assert op.compose(dict(r), 2, f) == {}
        g = op.nf({op.free_basis(3)[0]: F(1)})
        assert op.compose(f, 1, vadd(g, r)) == op.compose(f, 1, g)


def test_presentation_rejects_bad_input():
    sig = Signature([Generator("mu", 2, "regular")])
    with pytest.raises(ValueError):
        Presentation("bad", sig, [{}])
    with pytest.raises(ValueError):
        Presentation(
            "bad",
            sig,
            [{parse_tree("mu(mu(1,2),3)"): F(1), parse_tree("mu(1,2)"): F(1)}],
        )
    tri = Signature([Generator("c", 2, "trivial"), Generator("t", 3, "trivial")])
    pres = Presentation("ternary", tri, [])
    with pytest.raises(ValueError):
        QuotientOperad(pres)


def test_bounds_enforced():
    op = standard_operad("assoc", Bounds(3, 3))
    op.dim(3)
    with pytest.raises(ValueError):
        op.dim(4)
    with pytest.raises(ValueError):
        Bounds(1, 0)


def test_all_edges_preserve_relations():
    edges = build_edges(bounds=Bounds(4, 4))
    assert sorted(edges) == sorted(EDGE_NAMES)


def test_bad_morphism_rejected(operads):
    with pytest.raises(ValueError):
        OperadMap(
            "assoc->lie?",
            operads["assoc"],
            operads["lie"],
            {"mu": {Node("b", (1, 2)): F(1)}},
        )


def test_morphism_is_multiplicative(operads):
    rng = random.Random(9)
    ops = {n: operads[n] for n in ("lie", "assoc", "prelie", "dend")}
    for name in ("lie->assoc", "prelie->dend"):
        phi = standard_edge(name, ops)
        src = phi.source
        for n_f, n_g in [(2, 2), (2, 3)]:
            f = {t: F(rng.randint(-2, 2)) for t in src.basis(n_f)}
            g = {t: F(rng.randint(-2, 2)) for t in src.basis(n_g)[:3]}
            for i in range(1, n_f + 1):
                lhs = phi.on_vec(src.compose(f, i, g))
                rhs = phi.target.compose(phi.on_vec(f), i, phi.on_vec(g))
                assert lhs == phi.target.nf(rhs)


def test_morphism_is_equivariant(operads):
    phi = standard_edge("lie->assoc", {n: operads[n] for n in ("lie", "assoc")})
    src = phi.source
    v = {t: F(i + 1) for i, t in enumerate(src.basis(3))}
    for perm in permutations((1, 2, 3)):
        assert phi.on_vec(src.act(perm, v)) == phi.target.act(perm, phi.on_vec(v))


def test_commuting_triangles(operads):
    ops = dict(operads)
    via_perm = standard_edge("assoc->perm", ops).then(standard_edge("perm->comm", ops))
    direct = standard_edge("assoc->comm", ops)
    assert via_perm.images == direct.images

    via_dend = standard_edge("assoc->dend", ops).then(standard_edge("dend->zinb", ops))
    via_comm = standard_edge("assoc->comm", ops).then(standard_edge("comm->zinb", ops))
    assert via_dend.images == via_comm.images

    via_prelie = standard_edge("lie->prelie", ops).then(standard_edge("prelie->assoc", ops))
    assert via_prelie.images == standard_edge("lie->assoc", ops).images

    via_dias = standard_edge("leib->dias", ops).then(standard_edge("dias->assoc", ops))
    via_lie = standard_edge("leib->lie", ops).then(standard_edge("lie->assoc", ops))
    assert via_dias.images == via_lie.images


def test_presentation_json_round_trip():
    for name in CATALOG_NAMES:
        pres = standard_presentation(name)
        blob = pres.to_dict()
        back = Presentation.from_dict(blob)
        assert back.to_dict() == blob
        assert back.name == pres.name
        assert back.relations == pres.relations
