"""Multidimensional compressed incidence maps.

A boolean incidence matrix between an equation array (rows) and a variable
array (columns) is stored as a set of diagonals.  Each diagonal is an
:class:`MCIMElement` ``(keys, delta)`` and stands for the entries
``{(k, k + delta) : k in keys}``.  A canonical :class:`MCIM` holds at most
one element per distinct ``delta``, so elements never overlap.

When the two sides have different dimensionality, the shorter one is padded
with trailing unit dimensions so that ``delta`` is always defined.  ``keys``
and ``delta`` therefore have arity ``max(len(eq_shape), len(var_shape))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .mcis import MCIS, DimensionError

Shape = tuple[int, ...]
Delta = tuple[int, ...]

DENSE_VOLUME_CAP = 10**6


class ShapeError(ValueError):
    """Operands do not share the same row/column shapes."""


class VolumeCapError(ValueError):
    """Dense expansion would exceed the configured volume cap."""


@dataclass(frozen=True)
class MCIMElement:
    keys: MCIS
    delta: Delta

    @property
    def columns(self) -> MCIS:
        return self.keys.offset(self.delta)

    def cardinality(self) -> int:
        return self.keys.cardinality()


def _shape(s) -> Shape:
    s = tuple(int(x) for x in s)
    if not s or any(x < 1 for x in s):
        raise ValueError(f"invalid size vector {s}")
    return s


class MCIM:
    """Immutable compressed incidence matrix of shape ``eq_shape x var_shape``."""

    __slots__ = ("eq_shape", "var_shape", "rank", "_elems")

    def __init__(self, eq_shape: Sequence[int], var_shape: Sequence[int],
                 elements: Iterable[MCIMElement | tuple] = ()):
        self.eq_shape = _shape(eq_shape)
        self.var_shape = _shape(var_shape)
        self.rank = max(len(self.eq_shape), len(self.var_shape))
        grouped: dict[Delta, MCIS] = {}
        for el in elements:
            keys, delta = (el.keys, el.delta) if isinstance(el, MCIMElement) else el
            delta = tuple(int(d) for d in delta)
            if len(delta) != self.rank or keys.ndim != self.rank:
                raise DimensionError(
                    f"element arity must be {self.rank}, got keys {keys.ndim}, delta {len(delta)}")
            if not keys:
                continue
            grouped[delta] = grouped[delta] | keys if delta in grouped else keys
        self._elems = self._clip(grouped)

    def _clip(self, grouped: dict[Delta, MCIS]) -> dict[Delta, MCIS]:
        out = {}
        rows = self.row_universe()
        for delta, keys in grouped.items():
            k = keys & rows & self.col_universe().offset(tuple(-d for d in delta))
            if k != keys:
                raise ValueError(f"element with delta {delta} leaves the matrix bounds")
            out[delta] = keys
        return dict(sorted(out.items()))

    @classmethod
    def _raw(cls, eq_shape: Shape, var_shape: Shape, elems: dict[Delta, MCIS]) -> MCIM:
        obj = cls.__new__(cls)
        obj.eq_shape = eq_shape
        obj.var_shape = var_shape
        obj.rank = max(len(eq_shape), len(var_shape))
        obj._elems = dict(sorted((d, k) for d, k in elems.items() if k))
        return obj

    # -- universes and padding ---------------------------------------------

    def row_universe(self) -> MCIS:
        """All row indices, padded to ``rank``."""
        return MCIS.full(self.eq_shape).pad(self.rank)

    def col_universe(self) -> MCIS:
        return MCIS.full(self.var_shape).pad(self.rank)

    def _pad_rows(self, f: MCIS) -> MCIS:
        if f.ndim != len(self.eq_shape):
            raise DimensionError(f"row vector is {f.ndim}-d, matrix rows are {len(self.eq_shape)}-d")
        return f.pad(self.rank)

    def _pad_cols(self, f: MCIS) -> MCIS:
        if f.ndim != len(self.var_shape):
            raise DimensionError(f"column vector is {f.ndim}-d, matrix columns are {len(self.var_shape)}-d")
        return f.pad(self.rank)

    # -- construction --------------------------------------------------------

    @classmethod
    def empty(cls, eq_shape, var_shape) -> MCIM:
        return cls._raw(_shape(eq_shape), _shape(var_shape), {})

    @classmethod
    def diagonal(cls, eq_shape, var_shape, keys: MCIS, delta: Sequence[int]) -> MCIM:
        """Single-element map; ``keys`` are row indices (unpadded)."""
        m = cls.empty(eq_shape, var_shape)
        return cls(m.eq_shape, m.var_shape, [(m._pad_rows(keys), tuple(delta))])

    @classmethod
    def from_entries(cls, eq_shape, var_shape, entries: Iterable[tuple[Sequence[int], Sequence[int]]]) -> MCIM:
        """Group ``(row, col)`` index pairs by ``delta = col - row``."""
        eq_shape, var_shape = _shape(eq_shape), _shape(var_shape)
        rank = max(len(eq_shape), len(var_shape))
        groups: dict[Delta, list] = {}
        for k, j in entries:
            k = tuple(k) + (1,) * (rank - len(k))
            j = tuple(j) + (1,) * (rank - len(j))
            groups.setdefault(tuple(b - a for a, b in zip(k, j)), []).append(k)
        return cls(eq_shape, var_shape,
                   [(MCIS.from_indices(rank, ks), d) for d, ks in groups.items()])

    @classmethod
    def from_dense(cls, eq_shape, var_shape, dense) -> MCIM:
        eq_shape, var_shape = _shape(eq_shape), _shape(var_shape)
        dense = np.asarray(dense, dtype=bool)
        if dense.shape != eq_shape + var_shape:
            raise ShapeError(f"dense shape {dense.shape} != {eq_shape + var_shape}")
        n = len(eq_shape)
        entries = ((tuple(int(i) + 1 for i in idx[:n]), tuple(int(i) + 1 for i in idx[n:]))
                   for idx in np.argwhere(dense))
        return cls.from_entries(eq_shape, var_shape, entries)

    def to_dense(self, cap: int = DENSE_VOLUME_CAP) -> np.ndarray:
        volume = math.prod(self.eq_shape) * math.prod(self.var_shape)
        if volume > cap:
            raise VolumeCapError(f"dense volume {volume} exceeds cap {cap}")
        out = np.zeros(self.eq_shape + self.var_shape, dtype=bool)
        for k, j in self.entries():
            out[tuple(i - 1 for i in k + j)] = True
        return out

    # -- inspection ----------------------------------------------------------

    @property
    def elements(self) -> tuple[MCIMElement, ...]:
        return tuple(MCIMElement(k, d) for d, k in self._elems.items())

    def deltas(self) -> tuple[Delta, ...]:
        return tuple(self._elems)

    def keys_for(self, delta: Sequence[int]) -> MCIS:
        return self._elems.get(tuple(delta), MCIS.empty(self.rank))

    def entries(self) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
        """Yield unpadded ``(row, col)`` pairs.  Oracle use only."""
        ne, nv = len(self.eq_shape), len(self.var_shape)
        for delta, keys in self._elems.items():
            for k in keys:
                yield k[:ne], tuple(a + d for a, d in zip(k, delta))[:nv]

    def cardinality(self) -> int:
        return sum(k.cardinality() for k in self._elems.values())

    def is_empty(self) -> bool:
        return not self._elems

    def __bool__(self):
        return bool(self._elems)

    def _check(self, other: MCIM):
        if self.eq_shape != other.eq_shape or self.var_shape != other.var_shape:
            raise ShapeError(
                f"shape mismatch: {self.eq_shape}x{self.var_shape} vs {other.eq_shape}x{other.var_shape}")

    # -- element-wise boolean algebra ---------------------------------------

    def and_(self, other: MCIM) -> MCIM:
        self._check(other)
        out = {d: k & other._elems[d] for d, k in self._elems.items() if d in other._elems}
        return MCIM._raw(self.eq_shape, self.var_shape, out)

    def or_(self, other: MCIM) -> MCIM:
        self._check(other)
        out = dict(self._elems)
        for d, k in other._elems.items():
            out[d] = out[d] | k if d in out else k
        return MCIM._raw(self.eq_shape, self.var_shape, out)

    def subtract(self, other: MCIM) -> MCIM:
        self._check(other)
        out = {d: (k - other._elems[d] if d in other._elems else k)
               for d, k in self._elems.items()}
        return MCIM._raw(self.eq_shape, self.var_shape, out)

    __and__ = and_
    __or__ = or_
    __sub__ = subtract

    def issubset(self, other: MCIM) -> bool:
        return not (self - other)

    # -- row / column vector broadcasts --------------------------------------

    def and_rows(self, f: MCIS) -> MCIM:
        f = self._pad_rows(f)
        return MCIM._raw(self.eq_shape, self.var_shape,
                         {d: k & f for d, k in self._elems.items()})

    def subtract_rows(self, f: MCIS) -> MCIM:
        f = self._pad_rows(f)
        return MCIM._raw(self.eq_shape, self.var_shape,
                         {d: k - f for d, k in self._elems.items()})

    def and_cols(self, f: MCIS) -> MCIM:
        f = self._pad_cols(f)
        return MCIM._raw(self.eq_shape, self.var_shape,
                         {d: k & f.offset(tuple(-x for x in d)) for d, k in self._elems.items()})

    def subtract_cols(self, f: MCIS) -> MCIM:
        f = self._pad_cols(f)
        return MCIM._raw(self.eq_shape, self.var_shape,
                         {d: k - f.offset(tuple(-x for x in d)) for d, k in self._elems.items()})

    # -- flattening ----------------------------------------------------------

    def flatten_rows(self) -> MCIS:
        """Rows holding at least one entry."""
        acc = MCIS.empty(self.rank)
        for k in self._elems.values():
            acc = acc | k
        return acc.unpad(len(self.eq_shape))

    def flatten_cols(self) -> MCIS:
        """Columns holding at least one entry."""
        acc = MCIS.empty(self.rank)
        for d, k in self._elems.items():
            acc = acc | k.offset(d)
        return acc.unpad(len(self.var_shape))

    # -- local matching ------------------------------------------------------

    def match_options(self) -> list[MCIM]:
        """Match options of this incidence matrix: one per diagonal.

        A single diagonal already has at most one entry per row and column,
        so every element is a valid match on its own.  Larger options come
        first; ties are broken by ascending delta.
        """
        order = sorted(self._elems.items(), key=lambda dk: (-dk[1].cardinality(), dk[0]))
        return [MCIM._raw(self.eq_shape, self.var_shape, {d: k}) for d, k in order]

    # -- serialisation -------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "eqShape": list(self.eq_shape),
            "varShape": list(self.var_shape),
            "elements": [{"keys": k.to_json(), "delta": list(d)} for d, k in self._elems.items()],
        }

    @classmethod
    def from_json(cls, data: dict) -> MCIM:
        eq_shape, var_shape = _shape(data["eqShape"]), _shape(data["varShape"])
        rank = max(len(eq_shape), len(var_shape))
        return cls(eq_shape, var_shape,
                   [(MCIS.from_json(e["keys"], rank), tuple(e["delta"])) for e in data["elements"]])

    def __eq__(self, other):
        if not isinstance(other, MCIM):
            return NotImplemented
        return (self.eq_shape == other.eq_shape and self.var_shape == other.var_shape
                and self._elems == other._elems)

    def __hash__(self):
        return hash((self.eq_shape, self.var_shape, tuple(self._elems.items())))

    def __repr__(self):
        body = ", ".join(f"({k!r}, d={d})" for d, k in self._elems.items())
        return f"MCIM({self.eq_shape}x{self.var_shape}: {body or 'empty'})"


def mcim_and(a: MCIM, b: MCIM) -> MCIM:
    return a.and_(b)


def mcim_or(a: MCIM, b: MCIM) -> MCIM:
    return a.or_(b)


def mcim_subtract(a: MCIM, b: MCIM) -> MCIM:
    return a.subtract(b)


def flatten_rows(a: MCIM) -> MCIS:
    return a.flatten_rows()


def flatten_columns(a: MCIM) -> MCIS:
    return a.flatten_cols()


def solve_local_matching_problem(u: MCIM) -> list[MCIM]:
    return u.match_options()
