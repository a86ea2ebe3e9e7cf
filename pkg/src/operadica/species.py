"""Dimension bookkeeping for symmetric sequences.

Composite dimensions never need action matrices: the plethystic count is
a sum over partition types.  When the inner object is graded with odd
pieces, invariant dimensions come from the cycle-index sum with the
parity twist (-1)^(d(j-1)) for a j-cycle on degree-d elements, applied
per component, which stays integral even though intermediate traces are
only rational.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Callable, Dict, Iterator, List, Tuple

__all__ = [
    "partitions",
    "cycle_type_size",
    "set_partition_type_count",
    "compose_dim",
    "graded_invariant_dims",
    "trace_of",
]


def partitions(n: int, largest: int = 0) -> Iterator[Tuple[int, ...]]:
    """Integer partitions of n in weakly decreasing order."""
    if largest <= 0 or largest > n:
        largest = n
    if n == 0:
        yield ()
        return
    for first in range(largest, 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def _multiplicities(ptype: Tuple[int, ...]) -> Dict[int, int]:
    out: Dict[int, int] = {}
    for j in ptype:
        out[j] = out.get(j, 0) + 1
    return out


def cycle_type_size(ptype: Tuple[int, ...]) -> int:
    """Number of permutations of S_n with the given cycle type."""
    n = sum(ptype)
    denom = 1
    for j, m in _multiplicities(ptype).items():
        denom *= j**m * factorial(m)
    return factorial(n) // denom


def set_partition_type_count(ptype: Tuple[int, ...]) -> int:
    """Number of set partitions of [n] with the given block sizes."""
    n = sum(ptype)
    denom = 1
    for j, m in _multiplicities(ptype).items():
        denom *= factorial(j) ** m * factorial(m)
    return factorial(n) // denom


def compose_dim(dim_outer: Callable[[int], int], dim_inner: Callable[[int], int], n: int) -> int:
    """dim (X . Y)(n) as a sum over set-partition types."""
    total = 0
    for ptype in partitions(n):
        inner = 1
        for j in ptype:
            inner *= dim_inner(j)
            if not inner:
                break
        if inner:
            total += set_partition_type_count(ptype) * dim_outer(len(ptype)) * inner
    return total


Poly = Dict[Tuple[int, int], Fraction]  # (weight, degree) -> coefficient


def _poly_mul(a: Poly, b: Poly, w_max: int) -> Poly:
    out: Poly = {}
    for (wa, da), ca in a.items():
        for (wb, db), cb in b.items():
            w = wa + wb
            if w > w_max:
                continue
            key = (w, da + db)
            c = out.get(key, 0) + ca * cb
            if c:
                out[key] = c
            else:
                out.pop(key, None)
    return out


def graded_invariant_dims(
    outer_trace: Callable[[int, Tuple[int, ...]], Fraction],
    inner_dims: Dict[Tuple[int, int], int],
    n_range: Tuple[int, int],
    w_max: int,
) -> Dict[Tuple[int, int], int]:
    """Dimensions of ((X(n) tensor U^n) / S_n summed over n, by (weight, degree).

    ``outer_trace(n, cycle_type)`` is the trace of any permutation of
    that type on X(n); ``inner_dims`` maps (weight, degree) of U to its
    dimension.  Odd inner degrees pick up the cyclic-rotation sign.  In
    characteristic zero invariants and coinvariants agree, so this also
    counts the coinvariant components.
    """
    acc: Dict[Tuple[int, int], Fraction] = {}
    for n in range(n_range[0], n_range[1] + 1):
        order = factorial(n)
        for ptype in partitions(n):
            tr = outer_trace(n, ptype)
            if not tr:
                continue
            weight_factor = Fraction(cycle_type_size(ptype), order) * tr
            poly: Poly = {(0, 0): Fraction(1)}
            for j in ptype:
                factor: Poly = {}
                for (k, d), dim in inner_dims.items():
                    if dim and k * j <= w_max:
                        sign = -1 if (d % 2) and (j % 2 == 0) else 1
                        key = (k * j, d * j)
                        factor[key] = factor.get(key, Fraction(0)) + sign * dim
                poly = _poly_mul(poly, factor, w_max)
                if not poly:
                    break
            for key, c in poly.items():
                v = acc.get(key, Fraction(0)) + weight_factor * c
                if v:
                    acc[key] = v
                else:
                    acc.pop(key, None)
    out: Dict[Tuple[int, int], int] = {}
    for key, c in acc.items():
        if c.denominator != 1:
            raise ArithmeticError(f"non-integral invariant dimension at {key}: {c}")
        if c < 0:
            raise ArithmeticError(f"negative invariant dimension at {key}: {c}")
        if c:
            out[key] = int(c)
    return out


def trace_of(basis: List, act: Callable) -> Fraction:
    """Trace of a linear map given by its values on a basis.

    ``act(key)`` returns the image as a dict over basis keys."""
    total = Fraction(0)
    for key in basis:
        total += Fraction(act(key).get(key, 0))
    return total
