"""Sparse exact linear algebra over the rationals.

Everything downstream (operad slices, chain complexes, module resolutions)
reduces to four questions about finite families of sparse vectors: what is
the rank, what combinations vanish, does a vector lie in a span and with
which coefficients, and what is the intersection of two spans.  This module
answers them with an incremental fraction-free row echelon over the
integers, exposed through ``fractions.Fraction``.

A vector is a dict mapping non-negative integer columns to nonzero
rationals; zero entries must be absent.  :class:`Indexer` hands out stable
column indices for arbitrary hashable basis keys, so callers can work with
symbolic monomials and only drop down to integers at this boundary.

>>> from fractions import Fraction
>>> rank_of([{0: 1, 1: 2}, {1: Fraction(1, 3)}, {0: 3, 1: 8}])
2
>>> solve_in_span([{0: 1, 1: 2}, {1: 3}], {0: 2, 1: 5})
[Fraction(2, 1), Fraction(1, 3)]
>>> solve_in_span([{0: 1}], {1: 1}) is None
True
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Dict, Hashable, Iterable, Iterator, List, Optional, Sequence, Tuple, TypeVar

__all__ = [
    "Vec",
    "Echelon",
    "Indexer",
    "LinearSolver",
    "rank_of",
    "span_basis",
    "span_echelon",
    "kernel_basis",
    "solve_in_span",
    "intersect",
    "vadd",
    "vsub",
    "vscale",
]

Vec = Dict[int, Fraction]

K = TypeVar("K", bound=Hashable)


def vadd(u: Dict[K, Fraction], v: Dict[K, Fraction]) -> Dict[K, Fraction]:
    """Sum of two sparse vectors with arbitrary hashable keys."""
    out = dict(u)
    for k, c in v.items():
        s = out.get(k, 0) + c
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def vsub(u: Dict[K, Fraction], v: Dict[K, Fraction]) -> Dict[K, Fraction]:
    return vadd(u, vscale(-1, v))


def vscale(c, u: Dict[K, Fraction]) -> Dict[K, Fraction]:
    if not c:
        return {}
    return {k: c * v for k, v in u.items()}


def _to_int_row(v: Dict[int, object]) -> Dict[int, int]:
    """Clear denominators and divide out the content.  Sign is preserved."""
    den = 1
    for c in v.values():
        if isinstance(c, Fraction):
            den = den * c.denominator // gcd(den, c.denominator)
    row: Dict[int, int] = {}
    g = 0
    for k, c in v.items():
        n = int(c * den)
        if n:
            row[k] = n
            g = gcd(g, n)
    if g > 1:
        for k in row:
            row[k] //= g
    return row


class Echelon:
    """Incremental row echelon of a growing family of sparse vectors.

    Rows are stored as content-normalized integer vectors with positive
    pivot entries; the pivot of a row is its smallest column.  When
    ``pivot_bound`` is given, only columns strictly below the bound are
    eligible pivots, and a vector whose reduction is supported entirely on
    columns at or above the bound is refused.  The kernel and solving
    helpers use this to keep bookkeeping columns out of the elimination.
    """

    __slots__ = ("_rows", "pivot_bound")

    def __init__(self, pivot_bound: Optional[int] = None) -> None:
        self._rows: Dict[int, Dict[int, int]] = {}
        self.pivot_bound = pivot_bound

    @property
    def rank(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> Iterable[int]:
        return self._rows.keys()

    def _reduce_int(self, w: Dict[int, int], track_scale: bool = False) -> Tuple[Dict[int, int], int]:
        """Eliminate every pivot column from ``w``.

        Returns the residual and the positive integer ``scale`` such that
        residual == scale * w - (a combination of stored rows), exactly,
        when ``track_scale`` is set.  Without tracking, the residual is
        content-normalized after every elimination and only its line
        through the origin is meaningful.
        """
        scale = 1
        rows = self._rows
        while True:
            hits = sorted(k for k in w if k in rows)
            if not hits:
                return w, scale
            for p in hits:
                c = w.get(p)
                if not c:
                    continue
                r = rows[p]
                d = r[p]
                g = gcd(c, d)
                c //= g
                d //= g
                if d != 1:
                    for k in w:
                        w[k] *= d
                    scale *= d
                for k, v in r.items():
                    nv = w.get(k, 0) - c * v
                    if nv:
                        w[k] = nv
                    else:
                        w.pop(k, None)
                if w:
                    g = scale if track_scale else 0
                    for v in w.values():
                        g = gcd(g, v)
                    if g > 1:
                        for k in w:
                            w[k] //= g
                        if track_scale:
                            scale //= g

    def insert(self, w: Dict[int, int]) -> Optional[Dict[int, int]]:
        """Reduce an integer row and store it if a pivot is available.

        Returns None when the row was stored, otherwise the reduced
        residual (empty when the row was dependent, supported above
        ``pivot_bound`` when only bookkeeping columns survived).
        """
        w, _ = self._reduce_int(dict(w))
        bound = self.pivot_bound
        cols = w.keys() if bound is None else [k for k in w if k < bound]
        if not cols:
            return w
        p = min(cols)
        if w[p] < 0:
            for k in w:
                w[k] = -w[k]
        self._rows[p] = w
        return None

    def add(self, v: Vec) -> bool:
        """Add a vector to the span; True when the rank grew."""
        return self.insert(_to_int_row(v)) is None

    def contains(self, v: Vec) -> bool:
        w, _ = self._reduce_int(_to_int_row(v))
        return not w

    def reduce(self, v: Vec) -> Vec:
        """Exact normal form of ``v`` modulo the span.

        The result is supported away from the pivot columns, and
        ``v - reduce(v)`` lies in the span; in particular the map is the
        linear projection onto the non-pivot coordinates along the span.
        """
        den = 1
        for c in v.values():
            if isinstance(c, Fraction):
                den = den * c.denominator // gcd(den, c.denominator)
        w = {k: int(c * den) for k, c in v.items() if c}
        w, scale = self._reduce_int(w, track_scale=True)
        lam = scale * den
        return {k: Fraction(n, lam) for k, n in w.items()}

    def basis(self) -> List[Vec]:
        """Stored rows as monic rational vectors, sorted by pivot."""
        out = []
        for p in sorted(self._rows):
            r = self._rows[p]
            d = r[p]
            out.append({k: Fraction(n, d) for k, n in r.items()})
        return out


def span_echelon(rows: Iterable[Vec], pivot_bound: Optional[int] = None) -> Echelon:
    ech = Echelon(pivot_bound)
    for r in rows:
        ech.add(r)
    return ech


def rank_of(rows: Iterable[Vec]) -> int:
    return span_echelon(rows).rank


def span_basis(rows: Iterable[Vec]) -> List[Vec]:
    return span_echelon(rows).basis()


def _aug_offset(rowss: Sequence[Iterable[Vec]]) -> int:
    m = -1
    for rows in rowss:
        for r in rows:
            for k in r:
                if k > m:
                    m = k
    return m + 1


def kernel_basis(rows: Sequence[Vec]) -> List[Vec]:
    """Basis of the relations among ``rows``.

    Each returned vector c (keys are positions into ``rows``) satisfies
    sum_i c[i] * rows[i] == 0, normalized so the coefficient at its
    largest key is 1.  The number of vectors is len(rows) - rank.
    """
    offset = _aug_offset([rows])
    ech = Echelon(pivot_bound=offset)
    out: List[Vec] = []
    for i, r in enumerate(rows):
        # scale the bookkeeping entry together with the row, else the
        # reported coefficients would refer to content-normalized rows
        res = ech.insert(_to_int_row({**r, offset + i: 1}))
        if res is not None:
            lead = res[offset + i]
            out.append({k - offset: Fraction(n, lead) for k, n in res.items()})
    return out


class LinearSolver:
    """Membership solver for the span of a fixed row list.

    The augmented echelon is built once, so each solve costs a single
    reduction.  Redundant rows receive coefficient 0: every solvable
    target is expressed through the earliest independent rows.
    """

    __slots__ = ("_count", "_offset", "_tcol", "_ech")

    def __init__(self, rows: Sequence[Vec], dim: int = 0):
        rows = list(rows)
        self._count = len(rows)
        self._offset = max(_aug_offset([rows]), dim)
        self._tcol = self._offset + self._count
        self._ech = Echelon(pivot_bound=self._offset)
        for i, r in enumerate(rows):
            self._ech.insert(_to_int_row({**r, self._offset + i: 1}))

    def solve(self, target: Vec) -> Optional[List[Fraction]]:
        if any(k >= self._offset for k in target):
            return None
        res, _ = self._ech._reduce_int(_to_int_row({**target, self._tcol: 1}))
        if any(k < self._offset for k in res):
            return None
        lam = res[self._tcol]
        return [Fraction(-res.get(self._offset + i, 0), lam) for i in range(self._count)]

    def contains(self, target: Vec) -> bool:
        return self.solve(target) is not None


def solve_in_span(rows: Sequence[Vec], target: Vec) -> Optional[List[Fraction]]:
    """Coefficients c with sum_i c[i] * rows[i] == target, or None.

    Redundant rows receive coefficient 0, so the answer is deterministic:
    each vector is expressed through the earliest independent rows.
    """
    return LinearSolver(rows, dim=_aug_offset([[target]])).solve(target)


def intersect(rows_a: Sequence[Vec], rows_b: Sequence[Vec]) -> List[Vec]:
    """Basis of span(rows_a) & span(rows_b), monic, sorted by pivot.

    Zassenhaus: echelonize the rows (a | a) and (b | 0); the rows whose
    left half died contain intersection vectors in their right half.
    """
    offset = _aug_offset([rows_a, rows_b])
    ech = Echelon()
    for a in rows_a:
        w = _to_int_row(a)
        w.update({k + offset: n for k, n in list(w.items())})
        ech.insert(w)
    for b in rows_b:
        ech.insert(_to_int_row(b))
    out: List[Vec] = []
    for p in sorted(ech._rows):
        if p >= offset:
            r = ech._rows[p]
            d = r[p]
            out.append({k - offset: Fraction(n, d) for k, n in r.items()})
    return out


class Indexer:
    """Stable bijection between hashable basis keys and column indices.

    Indices are assigned in first-use order, so a slice that enumerates
    its basis deterministically gets a deterministic coordinate system.
    """

    __slots__ = ("_index", "_keys")

    def __init__(self, keys: Optional[Iterable[Hashable]] = None) -> None:
        self._index: Dict[Hashable, int] = {}
        self._keys: List[Hashable] = []
        if keys is not None:
            for k in keys:
                self.index(k)

    def index(self, key: Hashable) -> int:
        i = self._index.get(key)
        if i is None:
            i = len(self._keys)
            self._index[key] = i
            self._keys.append(key)
        return i

    def get(self, key: Hashable) -> Optional[int]:
        return self._index.get(key)

    def key_of(self, i: int) -> Hashable:
        return self._keys[i]

    def __len__(self) -> int:
        return len(self._keys)

    def __contains__(self, key: Hashable) -> bool:
        return key in self._index

    def __iter__(self) -> Iterator[Hashable]:
        return iter(self._keys)

    def to_vec(self, combo: Dict[Hashable, object], strict: bool = True) -> Vec:
        """Column form of a formal combination of keys.

        With ``strict`` every key must already be indexed; otherwise new
        keys are assigned fresh columns on the fly.
        """
        out: Vec = {}
        for key, c in combo.items():
            if not c:
                continue
            i = self._index.get(key)
            if i is None:
                if strict:
                    raise KeyError(f"unindexed basis key: {key!r}")
                i = self.index(key)
            out[i] = out.get(i, 0) + Fraction(c)
            if not out[i]:
                del out[i]
        return out

    def from_vec(self, v: Vec) -> Dict[Hashable, Fraction]:
        return {self._keys[i]: Fraction(c) for i, c in v.items() if c}
