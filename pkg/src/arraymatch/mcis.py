"""Multidimensional compressed index sets.

An :class:`MCIS` is a union of integer hyperrectangles
(:class:`MultidimensionalRange`).  Every value is kept in a unique canonical
form, so two sets compare equal exactly when they contain the same indices,
whatever partition they were built from.

Canonical form: sweep along the first dimension, cut at every range
boundary, canonicalise each slab's cross-section recursively and merge
adjacent slabs whose cross-sections are identical.  The resulting ranges are
pairwise disjoint and sorted lexicographically by lower corner.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

Bounds = tuple[tuple[int, int], ...]
Index = tuple[int, ...]


class DimensionError(ValueError):
    """Operands disagree on dimensionality."""


@dataclass(frozen=True, order=True)
class MultidimensionalRange:
    """Hyperrectangle ``{lo_1..hi_1} x {lo_2..hi_2} x ...``, bounds inclusive."""

    bounds: Bounds

    def __post_init__(self):
        if not self.bounds:
            raise ValueError("a range needs at least one dimension")
        for lo, hi in self.bounds:
            if lo > hi:
                raise ValueError(f"empty dimension ({lo}, {hi})")

    @classmethod
    def of(cls, *pairs: Sequence[int]) -> MultidimensionalRange:
        return cls(tuple((int(lo), int(hi)) for lo, hi in pairs))

    @property
    def ndim(self) -> int:
        return len(self.bounds)

    @property
    def volume(self) -> int:
        v = 1
        for lo, hi in self.bounds:
            v *= hi - lo + 1
        return v

    @property
    def lower(self) -> Index:
        return tuple(lo for lo, _ in self.bounds)

    def __contains__(self, idx) -> bool:
        return all(lo <= i <= hi for i, (lo, hi) in zip(idx, self.bounds))

    def indices(self) -> set[Index]:
        """Every index in the range.  Oracle use only."""
        return set(itertools.product(*(range(lo, hi + 1) for lo, hi in self.bounds)))

    def __repr__(self):
        return "{" + ",".join(f"({lo},{hi})" for lo, hi in self.bounds) + "}"


def range_indices(r: MultidimensionalRange) -> set[Index]:
    return r.indices()


def _merge_intervals(intervals: Iterable[tuple[int, int]]) -> list[tuple[int, int]]:
    out: list[list[int]] = []
    for lo, hi in sorted(intervals):
        if out and lo <= out[-1][1] + 1:
            if hi > out[-1][1]:
                out[-1][1] = hi
        else:
            out.append([lo, hi])
    return [(lo, hi) for lo, hi in out]


def _canonical(boxes: Sequence[Bounds]) -> tuple[Bounds, ...]:
    if not boxes:
        return ()
    if len(boxes[0]) == 1:
        return tuple(((lo, hi),) for lo, hi in _merge_intervals(b[0] for b in boxes))
    if len(boxes) == 1:
        return (boxes[0],)
    cuts = sorted({b[0][0] for b in boxes} | {b[0][1] + 1 for b in boxes})
    slabs: list[list] = []
    for lo, nxt in zip(cuts, cuts[1:]):
        hi = nxt - 1
        tails = [b[1:] for b in boxes if b[0][0] <= lo and b[0][1] >= hi]
        if not tails:
            continue
        section = _canonical(tails)
        if slabs and slabs[-1][1] == lo - 1 and slabs[-1][2] == section:
            slabs[-1][1] = hi
        else:
            slabs.append([lo, hi, section])
    return tuple(((lo, hi),) + tail for lo, hi, section in slabs for tail in section)


def _box_intersection(a: Bounds, b: Bounds) -> Bounds | None:
    out = []
    for (alo, ahi), (blo, bhi) in zip(a, b):
        lo, hi = max(alo, blo), min(ahi, bhi)
        if lo > hi:
            return None
        out.append((lo, hi))
    return tuple(out)


def _box_difference(a: Bounds, b: Bounds) -> list[Bounds]:
    """``a \\ b`` as at most ``2 * ndim`` disjoint boxes."""
    if _box_intersection(a, b) is None:
        return [a]
    pieces = []
    core = list(a)
    for d, ((alo, ahi), (blo, bhi)) in enumerate(zip(a, b)):
        if alo < blo:
            pieces.append(tuple(core[:d]) + ((alo, blo - 1),) + tuple(core[d + 1:]))
        if ahi > bhi:
            pieces.append(tuple(core[:d]) + ((bhi + 1, ahi),) + tuple(core[d + 1:]))
        core[d] = (max(alo, blo), min(ahi, bhi))
    return pieces


class MCIS:
    """Immutable set of ``ndim``-dimensional integer indices."""

    __slots__ = ("ndim", "_boxes", "_hash")

    def __init__(self, ndim: int, ranges: Iterable = ()):
        if ndim < 1:
            raise ValueError("dimensionality must be positive")
        boxes = []
        for r in ranges:
            b = r.bounds if isinstance(r, MultidimensionalRange) else tuple(
                (int(lo), int(hi)) for lo, hi in r)
            if len(b) != ndim:
                raise DimensionError(f"range {b} is not {ndim}-dimensional")
            for lo, hi in b:
                if lo > hi:
                    raise ValueError(f"empty dimension ({lo}, {hi})")
            boxes.append(b)
        self.ndim = ndim
        self._boxes = _canonical(boxes)
        self._hash = None

    @classmethod
    def _raw(cls, ndim: int, boxes: tuple[Bounds, ...]) -> MCIS:
        # boxes must already be canonical
        obj = cls.__new__(cls)
        obj.ndim = ndim
        obj._boxes = boxes
        obj._hash = None
        return obj

    @classmethod
    def empty(cls, ndim: int) -> MCIS:
        return cls._raw(ndim, ())

    @classmethod
    def full(cls, shape: Sequence[int]) -> MCIS:
        """All 1-based indices of an array with the given size vector."""
        return cls._raw(len(shape), (tuple((1, int(s)) for s in shape),))

    @classmethod
    def from_indices(cls, ndim: int, indices: Iterable[Sequence[int]]) -> MCIS:
        boxes = []
        for idx in indices:
            if len(idx) != ndim:
                raise DimensionError(f"index {tuple(idx)} is not {ndim}-dimensional")
            boxes.append(tuple((int(i), int(i)) for i in idx))
        return cls._raw(ndim, _canonical(boxes))

    @classmethod
    def from_mask(cls, mask: np.ndarray) -> MCIS:
        """Set of 1-based positions of the true entries of a boolean array."""
        mask = np.asarray(mask, dtype=bool)
        return cls.from_indices(mask.ndim, (tuple(int(i) + 1 for i in idx)
                                            for idx in np.argwhere(mask)))

    @property
    def ranges(self) -> tuple[MultidimensionalRange, ...]:
        return tuple(MultidimensionalRange(b) for b in self._boxes)

    @property
    def bounds(self) -> tuple[Bounds, ...]:
        return self._boxes

    def _check(self, other: MCIS):
        if self.ndim != other.ndim:
            raise DimensionError(f"dimensionality mismatch: {self.ndim} vs {other.ndim}")

    def union(self, other: MCIS) -> MCIS:
        self._check(other)
        if not other._boxes:
            return self
        if not self._boxes:
            return other
        return MCIS._raw(self.ndim, _canonical(self._boxes + other._boxes))

    def intersect(self, other: MCIS) -> MCIS:
        self._check(other)
        out = []
        for a in self._boxes:
            for b in other._boxes:
                c = _box_intersection(a, b)
                if c is not None:
                    out.append(c)
        return MCIS._raw(self.ndim, _canonical(out))

    def difference(self, other: MCIS) -> MCIS:
        self._check(other)
        if not other._boxes or not self._boxes:
            return self
        pieces = list(self._boxes)
        for b in other._boxes:
            pieces = [p for a in pieces for p in _box_difference(a, b)]
            if not pieces:
                break
        return MCIS._raw(self.ndim, _canonical(pieces))

    __or__ = union
    __and__ = intersect
    __sub__ = difference

    def offset(self, delta: Sequence[int]) -> MCIS:
        """Translate every index by ``delta``.  Results may leave the positive orthant."""
        if len(delta) != self.ndim:
            raise DimensionError(f"offset {tuple(delta)} is not {self.ndim}-dimensional")
        boxes = tuple(tuple((lo + d, hi + d) for (lo, hi), d in zip(b, delta))
                      for b in self._boxes)
        return MCIS._raw(self.ndim, boxes)

    def cardinality(self) -> int:
        return sum(MultidimensionalRange(b).volume for b in self._boxes)

    __len__ = cardinality

    def is_empty(self) -> bool:
        return not self._boxes

    def __bool__(self):
        return bool(self._boxes)

    def contains(self, idx: Sequence[int]) -> bool:
        if len(idx) != self.ndim:
            raise DimensionError(f"index {tuple(idx)} is not {self.ndim}-dimensional")
        return any(all(lo <= i <= hi for i, (lo, hi) in zip(idx, b)) for b in self._boxes)

    __contains__ = contains

    def issubset(self, other: MCIS) -> bool:
        return not (self - other)

    def isdisjoint(self, other: MCIS) -> bool:
        return not (self & other)

    def indices(self) -> set[Index]:
        """Expand to a plain set of index tuples.  Oracle use only."""
        out: set[Index] = set()
        for b in self._boxes:
            out |= MultidimensionalRange(b).indices()
        return out

    def __iter__(self) -> Iterator[Index]:
        for b in self._boxes:
            yield from itertools.product(*(range(lo, hi + 1) for lo, hi in b))

    def pad(self, ndim: int) -> MCIS:
        """Append unit dimensions (index 1) up to ``ndim``."""
        extra = ndim - self.ndim
        if extra < 0:
            raise DimensionError("cannot pad to a lower dimensionality")
        if extra == 0:
            return self
        tail = ((1, 1),) * extra
        return MCIS._raw(ndim, tuple(b + tail for b in self._boxes))

    def unpad(self, ndim: int) -> MCIS:
        """Drop trailing dimensions, keeping only indices whose dropped part is all 1."""
        if ndim > self.ndim:
            raise DimensionError("cannot unpad to a higher dimensionality")
        if ndim == self.ndim:
            return self
        boxes = [b[:ndim] for b in self._boxes
                 if all(lo <= 1 <= hi for lo, hi in b[ndim:])]
        return MCIS._raw(ndim, _canonical(boxes))

    def to_json(self) -> list:
        return [[[lo, hi] for lo, hi in b] for b in self._boxes]

    @classmethod
    def from_json(cls, data, ndim: int | None = None) -> MCIS:
        if ndim is None:
            if not data:
                raise ValueError("dimensionality of an empty set cannot be inferred")
            ndim = len(data[0])
        return cls(ndim, data)

    def __eq__(self, other):
        if not isinstance(other, MCIS):
            return NotImplemented
        return self.ndim == other.ndim and self._boxes == other._boxes

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ndim, self._boxes))
        return self._hash

    def __repr__(self):
        if not self._boxes:
            return f"MCIS({self.ndim}-d, empty)"
        return "MCIS(" + ", ".join(repr(r) for r in self.ranges) + ")"


def mcis_union(a: MCIS, b: MCIS) -> MCIS:
    return a.union(b)


def mcis_intersect(a: MCIS, b: MCIS) -> MCIS:
    return a.intersect(b)


def mcis_difference(a: MCIS, b: MCIS) -> MCIS:
    return a.difference(b)
