"""Ground truth: scalar Hopcroft-Karp, exact optimal Omega, dense boolean twins
of the compressed matrix operations."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .graph import ArrayGraph, flatten
from .mcim import MCIM
from .scalar import ScalarGraph

OMEGA_CAP = 24
_INF = float("inf")


class OracleCapError(ValueError):
    pass


# -- scalar maximum matching ---------------------------------------------------

def _hopcroft_karp(adj: list[list[int]], n_right: int) -> list[int]:
    """Maximum matching; returns ``pair[left] = right`` or -1."""
    n = len(adj)
    pair_l = [-1] * n
    pair_r = [-1] * n_right
    dist = [0] * n

    def bfs() -> bool:
        q = deque()
        for u in range(n):
            if pair_l[u] < 0:
                dist[u] = 0
                q.append(u)
            else:
                dist[u] = _INF
        found = False
        while q:
            u = q.popleft()
            for v in adj[u]:
                w = pair_r[v]
                if w < 0:
                    found = True
                elif dist[w] == _INF:
                    dist[w] = dist[u] + 1
                    q.append(w)
        return found

    def dfs(u) -> bool:
        for v in adj[u]:
            w = pair_r[v]
            if w < 0 or (dist[w] == dist[u] + 1 and dfs(w)):
                pair_l[u] = v
                pair_r[v] = u
                return True
        dist[u] = _INF
        return False

    while bfs():
        for u in range(n):
            if pair_l[u] < 0:
                dfs(u)
    return pair_l


def hopcroft_karp(sg: ScalarGraph) -> ScalarGraph:
    """Copy of ``sg`` carrying a maximum-cardinality matching."""
    pairs = _hopcroft_karp(sg.adjacency(), len(sg.variables))
    return ScalarGraph(list(sg.equations), list(sg.variables), list(sg.arcs),
                       {e: v for e, v in enumerate(pairs) if v >= 0}, dict(sg.arc_origin))


def maximum_matching_size(sg: ScalarGraph) -> int:
    return sum(1 for v in _hopcroft_karp(sg.adjacency(), len(sg.variables)) if v >= 0)


def all_maximum_matchings(sg: ScalarGraph) -> Iterator[dict[int, int]]:
    """Every maximum matching, by exhaustive backtracking.  Small graphs only."""
    target = maximum_matching_size(sg)
    adj = sg.adjacency()
    n = len(adj)
    used: set[int] = set()
    current: dict[int, int] = {}

    def rec(u: int):
        if len(current) + (n - u) < target:
            return
        if u == n:
            if len(current) == target:
                yield dict(current)
            return
        for v in adj[u]:
            if v not in used:
                used.add(v)
                current[u] = v
                yield from rec(u + 1)
                del current[u]
                used.discard(v)
        yield from rec(u + 1)

    yield from rec(0)


def pairs_in_every_maximum_matching(sg: ScalarGraph) -> set[tuple[int, int]]:
    """Arcs whose removal lowers the maximum matching size."""
    best = maximum_matching_size(sg)
    out = set()
    adj = sg.adjacency()
    for e, v in sg.arcs:
        trimmed = [list(a) for a in adj]
        trimmed[e].remove(v)
        if sum(1 for x in _hopcroft_karp(trimmed, len(sg.variables)) if x >= 0) < best:
            out.add((e, v))
    return out


# -- exact optimal Omega ---------------------------------------------------------

@dataclass
class OmegaResult:
    feasible: bool
    omega: int | None
    witness: ArrayGraph | None
    arcs: tuple[tuple[str, str], ...] = ()


def _witness(g: ArrayGraph, sg: ScalarGraph, matching: dict[int, int]) -> ArrayGraph:
    """``g`` with the given scalar matching lifted back onto its arcs,
    unmatched arcs dropped."""
    w = g.copy()
    w.clear_matching()
    per_arc: dict[tuple[str, str], list] = {}
    for e, v in matching.items():
        per_arc.setdefault(sg.arc_origin[(e, v)], []).append(
            (sg.equations[e][1], sg.variables[v][1]))
    for key, entries in per_arc.items():
        arc = w.arcs[key]
        arc.matching = MCIM.from_entries(arc.incidence.eq_shape, arc.incidence.var_shape, entries)
    return w.matched_graph()


def optimal_omega(g: ArrayGraph, cap: int = OMEGA_CAP) -> OmegaResult:
    """Minimum Omega over all complete matchings of ``g``.

    A complete matching matches every scalar equation and every scalar
    variable.  The answer is the smallest set of arcs whose scalar entries
    alone admit a complete matching, found by branch and bound.  When the
    chosen arcs admit no complete matching, a free scalar equation and the
    set ``Z`` of equations reachable from it by alternating paths violate
    Hall's condition, so any completion adds an arc with an entry leaving
    ``Z``'s neighbourhood; the search branches over those arcs.  Pruning
    uses feasibility of the arcs still allowed and a node-cover bound.
    """
    n_eq, n_var = g.scalar_equation_count(), g.scalar_variable_count()
    if n_eq > cap:
        raise OracleCapError(f"{n_eq} scalar equations exceed the exhaustive cap {cap}")
    if n_eq != n_var:
        return OmegaResult(False, None, None)
    sg = flatten(g)
    if n_eq == 0:
        return OmegaResult(True, 0, g.matched_graph())
    keys = sorted(g.arcs)
    by_arc = {k: [] for k in keys}
    for pair, k in sg.arc_origin.items():
        by_arc[k].append(pair)

    def adjacency(allowed) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in sg.equations]
        for k in allowed:
            for e, v in by_arc[k]:
                adj[e].append(v)
        for a in adj:
            a.sort()
        return adj

    def lower_bound(chosen) -> int:
        eqs = {k[0] for k in chosen}
        vars_ = {k[1] for k in chosen}
        return len(chosen) + max(len(g.equations) - len(eqs), len(g.variables) - len(vars_))

    def complete(adj) -> bool:
        return all(v >= 0 for v in _hopcroft_karp(adj, n_var))

    if not complete(adjacency(keys)):
        return OmegaResult(False, None, None)

    best: list = [len(keys) + 1, None]

    def rec(chosen: list, excluded: set):
        if lower_bound(chosen) >= best[0]:
            return
        adj = adjacency(chosen)
        pairs = _hopcroft_karp(adj, n_var)
        free = [e for e, v in enumerate(pairs) if v < 0]
        if not free:
            used = len({sg.arc_origin[p] for p in enumerate(pairs)})
            if used < best[0]:
                best[0], best[1] = used, dict(enumerate(pairs))
            return
        if not complete(adjacency([k for k in keys if k not in excluded])):
            return
        owner = {v: e for e, v in enumerate(pairs) if v >= 0}
        z_eq, z_var, stack = {free[0]}, set(), [free[0]]
        while stack:
            e = stack.pop()
            for v in adj[e]:
                if v not in z_var:
                    z_var.add(v)
                    if owner[v] not in z_eq:
                        z_eq.add(owner[v])
                        stack.append(owner[v])
        taken = set(chosen)
        branch = [k for k in keys if k not in taken and k not in excluded
                  and any(e in z_eq and v not in z_var for e, v in by_arc[k])]
        added = []
        for k in branch:
            chosen.append(k)
            rec(chosen, excluded)
            chosen.pop()
            excluded.add(k)
            added.append(k)
        excluded.difference_update(added)

    rec([], set())
    witness = _witness(g, sg, best[1])
    return OmegaResult(True, len(witness.arcs), witness, tuple(sorted(witness.arcs)))


def enumerate_omegas(g: ArrayGraph, cap: int = 12) -> list[int]:
    """Omega of every complete scalar matching, by plain enumeration.

    Exponential; a cross-check for :func:`optimal_omega` on tiny graphs.
    """
    n_eq = g.scalar_equation_count()
    if n_eq > cap:
        raise OracleCapError(f"{n_eq} scalar equations exceed the enumeration cap {cap}")
    if n_eq != g.scalar_variable_count():
        return []
    sg = flatten(g)
    out = []
    for m in all_maximum_matchings(sg):
        if len(m) == n_eq:
            out.append(len({sg.arc_origin[p] for p in m.items()}))
    return out


# -- dense twins of the compressed operations ---------------------------------------

def _row_mask(a: np.ndarray, f: np.ndarray) -> np.ndarray:
    return f.reshape(f.shape + (1,) * (a.ndim - f.ndim))


def _col_mask(a: np.ndarray, f: np.ndarray) -> np.ndarray:
    return f.reshape((1,) * (a.ndim - f.ndim) + f.shape)


def dense_and(a, b):
    return np.logical_and(a, b)


def dense_or(a, b):
    return np.logical_or(a, b)


def dense_subtract(a, b):
    return np.logical_and(a, np.logical_not(b))


def dense_and_rows(a, f):
    return np.logical_and(a, _row_mask(a, np.asarray(f, bool)))


def dense_subtract_rows(a, f):
    return dense_subtract(a, _row_mask(a, np.asarray(f, bool)))


def dense_and_cols(a, f):
    return np.logical_and(a, _col_mask(a, np.asarray(f, bool)))


def dense_subtract_cols(a, f):
    return dense_subtract(a, _col_mask(a, np.asarray(f, bool)))


def dense_flatten_rows(a, row_ndim: int):
    return a.any(axis=tuple(range(row_ndim, a.ndim)))


def dense_flatten_columns(a, row_ndim: int):
    return a.any(axis=tuple(range(row_ndim)))


def dense_solve_local(a, row_ndim: int) -> list[np.ndarray]:
    """Maximal constant-offset diagonals of ``a``, largest first.

    Offsets are computed on indices padded with trailing ones to a common
    arity.  Ties are ordered by ascending offset.
    """
    a = np.asarray(a, bool)
    col_ndim = a.ndim - row_ndim
    rank = max(row_ndim, col_ndim)
    groups: dict[tuple, list] = {}
    for idx in itertools.product(*(range(s) for s in a.shape)):
        if not a[idx]:
            continue
        k = idx[:row_ndim] + (0,) * (rank - row_ndim)
        j = idx[row_ndim:] + (0,) * (rank - col_ndim)
        groups.setdefault(tuple(y - x for x, y in zip(k, j)), []).append(idx)
    out = []
    for delta, cells in sorted(groups.items(), key=lambda kv: (-len(kv[1]), kv[0])):
        m = np.zeros_like(a)
        for c in cells:
            m[c] = True
        out.append(m)
    return out
