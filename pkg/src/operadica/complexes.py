"""Finite chain complexes of rational vector spaces with named bases.

A complex is a family of basis lists indexed by homological degree plus a
differential callback taking (degree, basis key) to a sparse vector in the
next degree down.  Matrices are materialized lazily; homology dimensions
only ever need two ranks per degree, and representatives are computed on
demand.  Everything is exact.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple

from .linalg import Indexer, Vec, kernel_basis, rank_of, span_echelon, vadd, vscale

__all__ = ["ChainComplex", "check_chain_map", "worker_count", "parallel_map"]

Differential = Callable[[int, Hashable], Dict[Hashable, Fraction]]


def worker_count() -> int:
    """Worker threads requested through OPERADICA_THREADS; at least 1."""
    raw = os.environ.get("OPERADICA_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def parallel_map(fn, items: Sequence) -> list:
    """Map preserving order, across the requested worker threads.

    Results are collected positionally, so the output is independent of
    scheduling; with one worker this is a plain loop.
    """
    n = worker_count()
    items = list(items)
    if n <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


class ChainComplex:
    """Chain complex with explicit bases and a sparse differential.

    ``spaces`` maps a homological degree to its basis keys; ``d`` sends
    (degree, key) to a dict over keys one degree lower.  Degrees absent
    from ``spaces`` are zero, and the differential into or out of them
    must vanish.
    """

    def __init__(self, spaces: Dict[int, Sequence[Hashable]], d: Differential) -> None:
        self.spaces: Dict[int, List[Hashable]] = {k: list(v) for k, v in spaces.items()}
        self.d = d
        self._indexers: Dict[int, Indexer] = {}
        self._rows: Dict[int, List[Vec]] = {}
        self._ranks: Dict[int, int] = {}

    def degrees(self) -> List[int]:
        return sorted(self.spaces)

    def dim(self, k: int) -> int:
        return len(self.spaces.get(k, ()))

    def indexer(self, k: int) -> Indexer:
        ix = self._indexers.get(k)
        if ix is None:
            ix = Indexer(self.spaces.get(k, ()))
            self._indexers[k] = ix
        return ix

    def rows(self, k: int) -> List[Vec]:
        """Images of the degree-k basis as vectors in degree k-1."""
        rows = self._rows.get(k)
        if rows is not None:
            return rows
        ix = self.indexer(k - 1)
        out: List[Vec] = []
        for key in self.spaces.get(k, ()):
            img = self.d(k, key)
            if img and k - 1 not in self.spaces:
                raise ValueError(f"differential leaves the complex at degree {k}")
            out.append(ix.to_vec(img))
        self._rows[k] = out
        return out

    def rank(self, k: int) -> int:
        """Rank of the differential leaving degree k."""
        r = self._ranks.get(k)
        if r is None:
            if k not in self.spaces or k - 1 not in self.spaces:
                r = 0
            else:
                r = rank_of(self.rows(k))
            self._ranks[k] = r
        return r

    def check_d_squared(self) -> Optional[Tuple[int, Hashable, Dict]]:
        """None when d*d == 0 everywhere, else a witness (degree, key, value)."""
        for k in self.degrees():
            if k - 2 not in self.spaces and k - 1 not in self.spaces:
                continue
            for key in self.spaces[k]:
                acc: Dict[Hashable, Fraction] = {}
                for key2, c in self.d(k, key).items():
                    acc = vadd(acc, vscale(c, self.d(k - 1, key2)))
                if acc:
                    return (k, key, acc)
        return None

    def homology_dim(self, k: int) -> int:
        return self.dim(k) - self.rank(k) - self.rank(k + 1)

    def homology_dims(self) -> Dict[int, int]:
        out = {}
        for k in self.degrees():
            out[k] = self.homology_dim(k)
        return out

    def homology_basis(self, k: int) -> List[Vec]:
        """Cycle representatives of H_k, in degree-k coordinates."""
        if k not in self.spaces:
            return []
        if k - 1 in self.spaces:
            cycles = kernel_basis(self.rows(k))
        else:
            cycles = [{i: Fraction(1)} for i in range(self.dim(k))]
        image = span_echelon(self.rows(k + 1)) if k + 1 in self.spaces else span_echelon([])
        reps = []
        for c in cycles:
            if image.add(c):
                reps.append(c)
        return reps

    def euler_characteristic(self) -> Fraction:
        return sum((-1) ** k * self.dim(k) for k in self.degrees())

    def is_acyclic(self, except_degrees: Sequence[int] = ()) -> bool:
        skip = set(except_degrees)
        return all(self.homology_dim(k) == 0 for k in self.degrees() if k not in skip)


def check_chain_map(
    src: ChainComplex,
    dst: ChainComplex,
    phi: Callable[[int, Hashable], Dict[Hashable, Fraction]],
    degree_shift: int = 0,
) -> Optional[Tuple[int, Hashable, Dict]]:
    """Verify phi . d == d . phi on every basis key; None or a witness.

    ``phi`` takes (source degree, key) to a vector in destination degree
    key + degree_shift.
    """
    for k in src.degrees():
        for key in src.spaces[k]:
            left: Dict[Hashable, Fraction] = {}
            for key2, c in src.d(k, key).items():
                left = vadd(left, vscale(c, phi(k - 1, key2)))
            right: Dict[Hashable, Fraction] = {}
            for key2, c in phi(k, key).items():
                right = vadd(right, vscale(c, dst.d(k + degree_shift, key2)))
            if left != right:
                return (k, key, vadd(left, vscale(-1, right)))
    return None
