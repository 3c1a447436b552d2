"""Array-aware matching: forced-match simplification and augmenting paths.

The augmenting-path search is a Hopcroft-Karp style phase loop lifted to
array graphs.  Every move of the breadth-first search carries a single
diagonal (a path matrix), so one array path stands for a bundle of
vertex-disjoint scalar augmenting paths.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field

from .graph import EQUATION, VARIABLE, Arc, ArrayGraph, validate
from .mcim import MCIM
from .mcis import MCIS

log = logging.getLogger(__name__)


class MatchingError(RuntimeError):
    pass


@dataclass(frozen=True)
class PathStep:
    """``node`` is where the step starts; ``side`` tells whether it adds
    (equation) or removes (variable) the entries of ``matrix`` on ``arc``."""

    node: str
    side: str
    arc: tuple[str, str]
    matrix: MCIM

    @property
    def adds(self) -> bool:
        return self.side == EQUATION


@dataclass(frozen=True)
class AugmentingPath:
    steps: tuple[PathStep, ...]

    def __post_init__(self):
        for a, b in zip(self.steps, self.steps[1:]):
            if a.side == b.side:
                raise MatchingError("augmenting path steps must alternate sides")

    def __len__(self):
        return len(self.steps)

    def ones(self) -> int:
        return sum(s.matrix.cardinality() for s in self.steps)

    def flow(self) -> int:
        """Scalar equations newly matched when the path is applied."""
        return self.steps[0].matrix.cardinality() if self.steps else 0

    def sort_key(self):
        return (-self.ones(), tuple((s.node, s.arc, s.matrix.deltas()) for s in self.steps))

    def touched(self) -> dict[str, MCIS]:
        """Scalar components the path modifies, per node."""
        out: dict[str, MCIS] = {}
        for s in self.steps:
            eq, var = s.arc
            for node, idx in ((eq, s.matrix.flatten_rows()), (var, s.matrix.flatten_cols())):
                out[node] = out[node] | idx if node in out else idx
        return out


@dataclass
class BfsNode:
    node: str
    side: str
    filter: MCIS
    level: int
    parent: int | None = None
    arc: tuple[str, str] | None = None
    matrix: MCIM | None = None
    leaf: bool = False


@dataclass
class PhaseLog:
    iteration: int
    paths: int
    path_length: int
    added: int
    matched: int


def _require_valid(g: ArrayGraph):
    problems = validate(g, "partial")
    if problems:
        raise MatchingError("invalid input graph: " + "; ".join(map(str, problems[:5])))


# -- simplification -----------------------------------------------------------

def _residual(g: ArrayGraph, arc: Arc) -> MCIM:
    """Incidence entries whose row and column are both still unmatched."""
    return arc.incidence.and_rows(g.free(arc.eq)).and_cols(g.free(arc.var))


def unmatched_degree(g: ArrayGraph, node: str) -> int:
    return sum(1 for a in g.arcs_of(node) if _residual(g, a))


def _other(g: ArrayGraph, arc: Arc, node: str) -> str:
    return arc.var if g.is_equation(node) else arc.eq


def simplify(g: ArrayGraph) -> list[tuple[tuple[str, str], MCIM]]:
    """Commit every obligatory match, in place.

    A node whose unmatched scalars are reachable through a single arc, where
    that arc's residual incidence is a single diagonal, can only be matched
    one way.  Those pairs are committed and the neighbourhood is revisited
    until nothing changes.  Returns the committed ``(arc, matrix)`` pairs.
    """
    _require_valid(g)
    forced = []
    queue = deque(n for n in g.node_ids() if unmatched_degree(g, n) == 1)
    queued = set(queue)

    def push(n):
        if n not in queued and unmatched_degree(g, n) == 1:
            queue.append(n)
            queued.add(n)

    while queue:
        n1 = queue.popleft()
        queued.discard(n1)
        live = [(a, r) for a in g.arcs_of(n1) if (r := _residual(g, a))]
        if len(live) != 1:
            continue
        arc, residual = live[0]
        options = residual.match_options()
        if len(options) != 1:
            continue
        arc.matching = arc.matching | options[0]
        forced.append((arc.key, options[0]))
        n2 = _other(g, arc, n1)
        push(n2)
        for a in g.arcs_of(n2):
            push(_other(g, a, n2))
    return forced


# -- augmenting paths ----------------------------------------------------------

def bfs(g: ArrayGraph, frontier: list[tuple[str, MCIS]]) -> tuple[list[BfsNode], list[int]]:
    """Level-synchronous search from equation nodes with free scalars.

    Returns the search forest (nodes carry their parent link and path
    matrix) and the indices of the leaves.  Each scalar component is visited
    at most once, and the search stops at the first level reaching a free
    scalar variable.
    """
    nodes: list[BfsNode] = []
    visited: dict[str, MCIS] = {}
    free_cols = {v: g.free(v) for v in g.variables}

    def visit(node: str, idx: MCIS):
        visited[node] = visited[node] | idx if node in visited else idx

    current = []
    for node, f in frontier:
        if node in visited:
            f = f - visited[node]
        if not f:
            continue
        visit(node, f)
        nodes.append(BfsNode(node, EQUATION, f, 0))
        current.append(len(nodes) - 1)

    leaves: list[int] = []
    level = 0
    while current and not leaves:
        level += 1
        nxt = []
        for ai in current:
            a = nodes[ai]
            for arc in g.arcs_of(a.node):
                if a.side == EQUATION:
                    candidates = (arc.incidence - arc.matching).and_rows(a.filter)
                    for s in candidates.match_options():
                        if arc.var in visited:
                            s = s.subtract_cols(visited[arc.var])
                        if not s:
                            continue
                        hit = s.and_cols(free_cols[arc.var])
                        move = hit or s
                        cols = move.flatten_cols()
                        visit(arc.var, cols)
                        nodes.append(BfsNode(arc.var, VARIABLE, cols, level, ai, arc.key, move, bool(hit)))
                        (leaves if hit else nxt).append(len(nodes) - 1)
                else:
                    for s in arc.matching.and_cols(a.filter).match_options():
                        if arc.eq in visited:
                            s = s.subtract_rows(visited[arc.eq])
                        if not s:
                            continue
                        rows = s.flatten_rows()
                        visit(arc.eq, rows)
                        nodes.append(BfsNode(arc.eq, EQUATION, rows, level, ai, arc.key, s))
                        nxt.append(len(nodes) - 1)
        current = nxt
    return nodes, leaves


def _trace_back(nodes: list[BfsNode], leaf: int) -> AugmentingPath:
    """Walk from a leaf to its root, narrowing each step to the flow that
    actually reaches the leaf."""
    a = nodes[leaf]
    s = a.filter
    steps = []
    while a.parent is not None:
        parent = nodes[a.parent]
        if a.side == VARIABLE:
            m = a.matrix.and_cols(s)
            s = m.flatten_rows()
            steps.append(PathStep(parent.node, EQUATION, a.arc, m))
        else:
            m = a.matrix.and_rows(s)
            s = m.flatten_cols()
            steps.append(PathStep(parent.node, VARIABLE, a.arc, m))
        a = parent
    return AugmentingPath(tuple(reversed(steps)))


def heuristic_sort(paths: list[AugmentingPath]) -> list[AugmentingPath]:
    """Paths with more ones first; ties by node/arc/delta sequence."""
    return sorted(paths, key=AugmentingPath.sort_key)


def augmenting_paths(g: ArrayGraph) -> list[AugmentingPath]:
    """Pairwise non-intersecting augmenting paths of equal length."""
    frontier = [(e, f) for e in sorted(g.equations) if (f := g.free(e))]
    if not frontier:
        return []
    nodes, leaves = bfs(g, frontier)
    accepted: list[AugmentingPath] = []
    used: dict[str, MCIS] = {}
    for p in heuristic_sort([_trace_back(nodes, i) for i in leaves]):
        marks = p.touched()
        if any(n in used and not used[n].isdisjoint(idx) for n, idx in marks.items()):
            continue
        accepted.append(p)
        for n, idx in marks.items():
            used[n] = used[n] | idx if n in used else idx
    return accepted


def _check_path(g: ArrayGraph, p: AugmentingPath):
    for s in p.steps:
        arc = g.arcs.get(s.arc)
        if arc is None:
            raise MatchingError(f"path uses unknown arc {s.arc}")
        if not s.matrix.issubset(arc.incidence):
            raise MatchingError(f"path step on {s.arc} leaves the incidence matrix")


def apply_path(g: ArrayGraph, p: AugmentingPath):
    """Equation-start steps add their matrix to the arc matching,
    variable-start steps remove it."""
    _check_path(g, p)
    for s in p.steps:
        arc = g.arcs[s.arc]
        if s.adds and not arc.matching.and_(s.matrix).is_empty():
            raise MatchingError(f"path adds entries already matched on {s.arc}")
        if not s.adds and not s.matrix.issubset(arc.matching):
            raise MatchingError(f"path removes entries not matched on {s.arc}")
    for s in p.steps:
        arc = g.arcs[s.arc]
        arc.matching = arc.matching | s.matrix if s.adds else arc.matching - s.matrix


def revert_path(g: ArrayGraph, p: AugmentingPath):
    _check_path(g, p)
    for s in p.steps:
        arc = g.arcs[s.arc]
        arc.matching = arc.matching - s.matrix if s.adds else arc.matching | s.matrix


def match(g: ArrayGraph, max_iterations: int | None = None,
          trace: list[PhaseLog] | None = None) -> ArrayGraph:
    """Apply augmenting-path phases until none is left; mutates ``g``.

    The iteration cap defaults to ten times the scalar equation count.
    Hitting it, or a phase that fails to grow the matching, means a bug.
    """
    _require_valid(g)
    if max_iterations is None:
        max_iterations = 10 * g.scalar_equation_count()
    matched = g.matched_count()
    iteration = 0
    while paths := augmenting_paths(g):
        iteration += 1
        if iteration > max_iterations:
            raise MatchingError(
                f"iteration cap {max_iterations} exceeded with {matched} scalar pairs matched")
        for p in paths:
            apply_path(g, p)
        now = g.matched_count()
        if now <= matched:
            raise MatchingError(f"phase {iteration} did not grow the matching ({matched} -> {now})")
        log.debug("phase %d: %d paths, %d -> %d matched", iteration, len(paths), matched, now)
        if trace is not None:
            trace.append(PhaseLog(iteration, len(paths), len(paths[0]), now - matched, now))
        matched = now
    return g
