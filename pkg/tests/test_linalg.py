"""Exact linear algebra: oracles first, then algebraic properties."""

import doctest
import random
from fractions import Fraction as F

import pytest

import operadica.linalg as linalg
from operadica.linalg import (
    Echelon,
    Indexer,
    intersect,
    kernel_basis,
    rank_of,
    solve_in_span,
    span_basis,
    span_echelon,
    vadd,
    vscale,
    vsub,
)


def test_module_doctests():
    failures, _ = doctest.testmod(linalg)
    assert failures == 0


def test_rank_oracles():
    assert rank_of([]) == 0
    assert rank_of([{}]) == 0
    assert rank_of([{i: 1} for i in range(5)]) == 5
    assert rank_of([{0: 1, 1: 2}, {0: 2, 1: 4}, {0: F(1, 2), 1: 1}]) == 1


def test_associator_orbit_rank():
    # Free operad on one binary operation without symmetry, arity 3:
    # 12 planar trees, indexed shape*6 + perm with shape 0 the left comb
    # and perms of (1,2,3) in lexicographic order.  The six relabelings
    # of (left comb) - (right comb) are independent, so the associative
    # quotient has dimension 6 there.  Hand-counted.
    perms = [(1, 2, 3), (1, 3, 2), (2, 1, 3), (2, 3, 1), (3, 1, 2), (3, 2, 1)]
    rows = [{0 * 6 + i: 1, 1 * 6 + i: -1} for i in range(len(perms))]
    assert rank_of(rows) == 6
    assert 12 - rank_of(rows) == 6


def test_alternating_jacobi_orbit_rank():
    # Arity-3 slice of the free operad on one antisymmetric operation has
    # basis m1 = b(b(2,3),1), m2 = b(b(1,3),2), m3 = b(b(1,2),3).  The
    # relabeling orbit of the Jacobi vector m1 - m2 + m3 is {+-itself},
    # worked out by hand, so its span is a line; the orbit of the single
    # monomial m3 spans everything.
    j = {0: 1, 1: -1, 2: 1}
    orbit = [j, vscale(-1, j), j]
    assert rank_of(orbit) == 1
    monomial_orbit = [{2: 1}, {2: -1}, {1: 1}, {0: -1}, {1: -1}, {0: 1}]
    assert rank_of(monomial_orbit) == 3


def _random_vec(rng, ncols, density=0.5):
    v = {}
    for i in range(ncols):
        if rng.random() < density:
            num = rng.randint(-6, 6)
            den = rng.randint(1, 4)
            if num:
                v[i] = F(num, den)
    return v


def test_solve_roundtrip_seeded():
    rng = random.Random(7)
    for _ in range(25):
        rows = [_random_vec(rng, 8) for _ in range(5)]
        coeffs = [F(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(5)]
        target = {}
        for c, r in zip(coeffs, rows):
            target = vadd(target, vscale(c, r))
        sol = solve_in_span(rows, target)
        assert sol is not None
        recombined = {}
        for c, r in zip(sol, rows):
            recombined = vadd(recombined, vscale(c, r))
        assert recombined == target


def test_solve_not_in_span():
    assert solve_in_span([{0: 1}, {1: 1}], {2: 1}) is None
    assert solve_in_span([], {0: 1}) is None
    assert solve_in_span([], {}) == []


def test_solve_prefers_earliest_rows():
    rows = [{0: 1}, {0: 2}]
    assert solve_in_span(rows, {0: 3}) == [F(3), F(0)]


def test_kernel_relations_sum_to_zero():
    rng = random.Random(11)
    for _ in range(25):
        rows = [_random_vec(rng, 6) for _ in range(7)]
        ker = kernel_basis(rows)
        assert len(ker) == len(rows) - rank_of(rows)
        for rel in ker:
            acc = {}
            for i, c in rel.items():
                acc = vadd(acc, vscale(c, rows[i]))
            assert acc == {}


def test_kernel_of_zero_row():
    ker = kernel_basis([{}, {0: 1}])
    assert len(ker) == 1
    assert ker[0] == {0: F(1)}


def test_intersect_dimension_formula_seeded():
    rng = random.Random(13)
    for _ in range(20):
        A = [_random_vec(rng, 8) for _ in range(4)]
        B = [_random_vec(rng, 8) for _ in range(4)]
        meet = intersect(A, B)
        ra, rb = rank_of(A), rank_of(B)
        rsum = rank_of(A + B)
        assert len(meet) == ra + rb - rsum
        ea, eb = span_echelon(A), span_echelon(B)
        for v in meet:
            assert ea.contains(v) and eb.contains(v)


def test_intersect_planes():
    # two planes through the origin in 3-space meet in a line
    A = [{0: 1}, {1: 1}]
    B = [{1: 1}, {2: 1}]
    meet = intersect(A, B)
    assert len(meet) == 1
    assert meet[0] == {1: F(1)}


def test_reduce_is_projection():
    rng = random.Random(17)
    sub = span_echelon([_random_vec(rng, 7) for _ in range(3)])
    for _ in range(10):
        v = _random_vec(rng, 7)
        r = sub.reduce(v)
        assert sub.contains(vsub(v, r))
        assert sub.reduce(r) == r
        assert all(k not in sub.pivots for k in r)
    u, v = _random_vec(rng, 7), _random_vec(rng, 7)
    assert sub.reduce(vadd(u, v)) == vadd(sub.reduce(u), sub.reduce(v))


def test_rank_invariant_under_recombination():
    rng = random.Random(23)
    rows = [_random_vec(rng, 9) for _ in range(5)]
    r = rank_of(rows)
    mixed = list(rows)
    for _ in range(12):
        i, j = rng.randrange(5), rng.randrange(5)
        if i != j:
            mixed[i] = vadd(mixed[i], vscale(F(rng.randint(1, 5)), mixed[j]))
    assert rank_of(mixed) == r


def test_add_reports_rank_growth():
    e = Echelon()
    assert e.add({0: 1, 1: 1})
    assert not e.add({0: 2, 1: 2})
    assert e.add({1: F(1, 7)})
    assert e.rank == 2
    assert not e.add({})


def test_span_basis_is_monic_and_spans():
    rows = [{0: 2, 1: 4}, {1: 3, 2: 6}, {0: 2, 1: 7, 2: 6}]
    basis = span_basis(rows)
    assert len(basis) == rank_of(rows)
    for b in basis:
        p = min(b)
        assert b[p] == 1
    e = span_echelon(basis)
    assert all(e.contains(r) for r in rows)


def test_indexer_round_trip():
    ix = Indexer()
    a = ix.index(("tree", 1))
    b = ix.index(("tree", 2))
    assert ix.index(("tree", 1)) == a and a != b
    assert ix.key_of(b) == ("tree", 2)
    assert list(ix) == [("tree", 1), ("tree", 2)]
    v = ix.to_vec({("tree", 1): F(1, 2), ("tree", 2): -1})
    assert v == {a: F(1, 2), b: F(-1)}
    assert ix.from_vec(v) == {("tree", 1): F(1, 2), ("tree", 2): F(-1)}
    with pytest.raises(KeyError):
        ix.to_vec({("tree", 3): 1})


def test_vector_helpers_cancel():
    u = {0: F(1, 2), 1: F(3)}
    assert vsub(u, u) == {}
    assert vadd(u, vscale(-1, u)) == {}
    assert vscale(0, u) == {}
