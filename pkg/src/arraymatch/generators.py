"""Benchmark and test graphs: the discretised wire and seeded random graphs."""

from __future__ import annotations

import random

from .graph import ArrayGraph
from .mcim import MCIM
from .mcis import MCIS


def gen_wire(n: int) -> ArrayGraph:
    """Finite-volume heat equation on a wire of ``n`` volumes.

    Temperatures are states, so the only unknown is ``der(T)``.  The first
    and last volume equations see ``der(T)[1]`` and ``der(T)[n]``; interior
    equation ``k`` sees ``der(T)[k+1]``.
    """
    if n < 4:
        raise ValueError("the wire needs at least 4 volumes")
    g = ArrayGraph()
    g.add_variable("der(T)", (n,))
    g.add_equation("eq.first", (1,))
    g.add_equation("eq.interior", (n - 2,))
    g.add_equation("eq.last", (1,))
    one = MCIS.full((1,))
    g.add_arc("eq.first", "der(T)", MCIM.diagonal((1,), (n,), one, (0,)))
    g.add_arc("eq.interior", "der(T)", MCIM.diagonal((n - 2,), (n,), MCIS.full((n - 2,)), (1,)))
    g.add_arc("eq.last", "der(T)", MCIM.diagonal((1,), (n,), one, (n - 1,)))
    return g


def _random_size(rng: random.Random, max_dim: int, max_size: int) -> tuple[int, ...]:
    return tuple(rng.randint(1, max_size) for _ in range(rng.randint(1, max_dim)))


def _balance(rng: random.Random, a: list[int], b: list[int], max_size: int):
    """Nudge 1-D sizes until both lists sum to the same total."""
    if max(len(a), len(b)) > min(len(a), len(b)) * max_size:
        raise ValueError(f"{len(a)} and {len(b)} nodes of size <= {max_size} cannot be balanced")
    while sum(a) != sum(b):
        short, long_ = (a, b) if sum(a) < sum(b) else (b, a)
        grow = [i for i, s in enumerate(short) if s < max_size]
        if grow:
            short[rng.choice(grow)] += 1
        else:
            long_[rng.choice([i for i, s in enumerate(long_) if s > 1])] -= 1


def _random_sub_box(rng: random.Random, box: tuple[tuple[int, int], ...]) -> MCIS:
    if rng.random() < 0.5:
        return MCIS(len(box), [box])
    sub = []
    for lo, hi in box:
        a, b = sorted((rng.randint(lo, hi), rng.randint(lo, hi)))
        sub.append((a, b))
    return MCIS(len(box), [sub])


def random_incidence(rng: random.Random, eq_size, var_size, max_diagonals: int = 2,
                     offsets=None) -> MCIM:
    """Non-empty incidence built from 1..``max_diagonals`` random diagonals."""
    u = MCIM.empty(eq_size, var_size)
    rows, cols = u.row_universe(), u.col_universe()
    (rbox,), (cbox,) = rows.bounds, cols.bounds
    for _ in range(rng.randint(1, max_diagonals)):
        if offsets is not None:
            delta = tuple(rng.choice(list(offsets)) for _ in range(u.rank))
        else:
            delta = tuple(rng.randint(clo - rhi, chi - rlo)
                          for (rlo, rhi), (clo, chi) in zip(rbox, cbox))
        valid = rows & cols.offset(tuple(-d for d in delta))
        if not valid:
            continue
        keys = _random_sub_box(rng, valid.bounds[0])
        u = u | MCIM(eq_size, var_size, [(keys, delta)])
    if not u:
        # diagonal through the first row and first column always fits
        delta = tuple(c[0] - r[0] for r, c in zip(rbox, cbox))
        u = MCIM(eq_size, var_size, [(MCIS(u.rank, [tuple((lo, lo) for lo, _ in rbox)]), delta)])
    return u


def gen_random(seed: int, eq_nodes: int, var_nodes: int, max_size: int, density: float, *,
               max_dim: int = 1, square: bool = False, uniform_size: int | None = None,
               offsets=None, max_diagonals: int = 2) -> ArrayGraph:
    """Seeded random array graph whose incidences are unions of diagonals.

    Each equation/variable pair gets an arc with probability ``density``.
    ``square`` balances total scalar equations against scalar variables
    (1-D nodes only).  ``uniform_size`` fixes every node to that 1-D size and
    ``offsets`` restricts the diagonal offsets that may be drawn.
    """
    if eq_nodes < 1 or var_nodes < 1 or max_size < 1 or max_dim < 1:
        raise ValueError("node counts and sizes must be positive")
    if not 0 < density <= 1:
        raise ValueError("density must lie in (0, 1]")
    if square and max_dim != 1:
        raise ValueError("square graphs are generated with 1-D nodes only")
    rng = random.Random(seed)
    if uniform_size is not None:
        eq_sizes = [(uniform_size,)] * eq_nodes
        var_sizes = [(uniform_size,)] * var_nodes
    else:
        eq_sizes = [_random_size(rng, max_dim, max_size) for _ in range(eq_nodes)]
        var_sizes = [_random_size(rng, max_dim, max_size) for _ in range(var_nodes)]
    if square:
        a, b = [s[0] for s in eq_sizes], [s[0] for s in var_sizes]
        _balance(rng, a, b, max_size)
        eq_sizes, var_sizes = [(s,) for s in a], [(s,) for s in b]

    g = ArrayGraph()
    for i, s in enumerate(eq_sizes):
        g.add_equation(f"e{i}", s)
    for j, s in enumerate(var_sizes):
        g.add_variable(f"v{j}", s)
    for i, es in enumerate(eq_sizes):
        for j, vs in enumerate(var_sizes):
            if rng.random() < density:
                g.add_arc(f"e{i}", f"v{j}", random_incidence(rng, es, vs, max_diagonals, offsets))
    return g
