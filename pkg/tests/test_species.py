"""Plethystic dimension counts against classical sequences."""

from fractions import Fraction as F
from math import factorial

import pytest

from operadica.species import (
    compose_dim,
    cycle_type_size,
    graded_invariant_dims,
    partitions,
    set_partition_type_count,
    trace_of,
)


def test_partition_counts():
    assert list(partitions(4)) == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    for n in range(1, 8):
        assert sum(cycle_type_size(p) for p in partitions(n)) == factorial(n)


BELL = [1, 1, 2, 5, 15, 52, 203]


def test_set_partition_counts_sum_to_bell():
    for n in range(1, 7):
        assert sum(set_partition_type_count(p) for p in partitions(n)) == BELL[n]


def test_compose_dim_partitions_of_sets():
    # Com . Com counts set partitions
    one = lambda n: 1
    for n in range(1, 7):
        assert compose_dim(one, one, n) == BELL[n]


def test_compose_dim_ordered_partitions():
    # Ass . Ass has dimension 2^(n-1) n!  (substituting x/(1-x) into itself)
    f = factorial
    for n in range(1, 6):
        assert compose_dim(f, f, n) == 2 ** (n - 1) * f(n)


def test_compose_dim_with_zeros():
    # inner concentrated in arity 2: only even n survive, paired up
    pairs = lambda n: 1 if n == 2 else 0
    one = lambda n: 1
    assert compose_dim(one, pairs, 4) == 3  # perfect matchings of [4]
    assert compose_dim(one, pairs, 5) == 0
    assert compose_dim(one, pairs, 6) == 15


def trivial_trace(n, ptype):
    return F(1)


def sign_trace(n, ptype):
    return F((-1) ** (n - len(ptype)))


def test_symmetric_powers_of_even_line():
    dims = graded_invariant_dims(trivial_trace, {(1, 0): 1}, (1, 6), 6)
    assert dims == {(w, 0): 1 for w in range(1, 7)}


def test_symmetric_powers_of_odd_line_truncate():
    dims = graded_invariant_dims(trivial_trace, {(1, 1): 1}, (1, 6), 6)
    assert dims == {(1, 1): 1}


def test_exterior_powers_via_sign_outer():
    # sign-isotypic invariants of an even 2-dim space = exterior algebra
    dims = graded_invariant_dims(sign_trace, {(1, 0): 2}, (1, 6), 6)
    assert dims == {(1, 0): 2, (2, 0): 1}


def test_mixed_even_odd_line():
    dims = graded_invariant_dims(trivial_trace, {(1, 0): 1, (1, 1): 1}, (1, 5), 5)
    want = {}
    for w in range(1, 6):
        want[(w, 0)] = 1
        want[(w, 1)] = 1
    assert dims == want


def test_odd_plane_gives_exterior_square():
    # two odd weight-1 generators: Sym of odd plane = exterior algebra on 2
    dims = graded_invariant_dims(trivial_trace, {(1, 1): 2}, (1, 4), 4)
    assert dims == {(1, 1): 2, (2, 2): 1}


def test_trace_of_identity_is_dim():
    basis = ["a", "b", "c"]
    assert trace_of(basis, lambda k: {k: 1}) == 3
    assert trace_of(basis, lambda k: {"a": 1}) == 1
