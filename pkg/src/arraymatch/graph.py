"""Array bipartite graph: nodes, arcs carrying incidence and matching maps."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

from .mcim import MCIM
from .mcis import MCIS
from .scalar import ScalarGraph

FLATTEN_CAP = 10**6

EQUATION = "equation"
VARIABLE = "variable"


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class ArrayNode:
    id: str
    name: str
    size: tuple[int, ...]

    def __post_init__(self):
        if not self.size or any(s < 1 for s in self.size):
            raise GraphError(f"node {self.id!r}: invalid size vector {self.size}")

    @property
    def ndim(self) -> int:
        return len(self.size)

    @property
    def volume(self) -> int:
        return math.prod(self.size)

    def universe(self) -> MCIS:
        return MCIS.full(self.size)


class ArrayEquationNode(ArrayNode):
    kind = EQUATION


class ArrayVariableNode(ArrayNode):
    kind = VARIABLE


@dataclass
class Arc:
    eq: str
    var: str
    incidence: MCIM
    matching: MCIM

    @property
    def key(self) -> tuple[str, str]:
        return (self.eq, self.var)


@dataclass(frozen=True)
class Violation:
    """A broken matching condition.  Condition 0 marks structural problems."""

    condition: int
    message: str
    arc: tuple[str, str] | None = None
    node: str | None = None
    indices: MCIS | None = None

    def __str__(self):
        where = f" arc {self.arc[0]}->{self.arc[1]}" if self.arc else ""
        where += f" node {self.node}" if self.node else ""
        return f"condition ({self.condition}){where}: {self.message}"


class ArrayGraph:
    """Bipartite graph of array equations and array variables.

    Iteration over nodes and arcs always follows sorted ids.
    """

    def __init__(self):
        self.equations: dict[str, ArrayEquationNode] = {}
        self.variables: dict[str, ArrayVariableNode] = {}
        self.arcs: dict[tuple[str, str], Arc] = {}
        self._adj: dict[str, list[tuple[str, str]]] = {}

    # -- building ------------------------------------------------------------

    def _new_id(self, id):
        if id in self.equations or id in self.variables:
            raise GraphError(f"duplicate node id {id!r}")

    def add_equation(self, id: str, size=(1,), name: str | None = None) -> ArrayEquationNode:
        self._new_id(id)
        node = ArrayEquationNode(id, name or id, tuple(int(s) for s in size))
        self.equations[id] = node
        self._adj[id] = []
        return node

    def add_variable(self, id: str, size=(1,), name: str | None = None) -> ArrayVariableNode:
        self._new_id(id)
        node = ArrayVariableNode(id, name or id, tuple(int(s) for s in size))
        self.variables[id] = node
        self._adj[id] = []
        return node

    def add_arc(self, eq: str, var: str, incidence: MCIM, matching: MCIM | None = None) -> Arc:
        if eq not in self.equations:
            raise GraphError(f"unknown equation {eq!r}")
        if var not in self.variables:
            raise GraphError(f"unknown variable {var!r}")
        if (eq, var) in self.arcs:
            raise GraphError(f"duplicate arc {eq}->{var}")
        e, v = self.equations[eq], self.variables[var]
        if incidence.eq_shape != e.size or incidence.var_shape != v.size:
            raise GraphError(f"arc {eq}->{var}: incidence shape {incidence.eq_shape}x"
                             f"{incidence.var_shape} does not match nodes {e.size}x{v.size}")
        if matching is None:
            matching = MCIM.empty(e.size, v.size)
        arc = Arc(eq, var, incidence, matching)
        self.arcs[(eq, var)] = arc
        for n in (eq, var):
            self._adj[n].append((eq, var))
            self._adj[n].sort()
        return arc

    def copy(self) -> ArrayGraph:
        g = ArrayGraph()
        g.equations = dict(self.equations)
        g.variables = dict(self.variables)
        g.arcs = {k: Arc(a.eq, a.var, a.incidence, a.matching) for k, a in self.arcs.items()}
        g._adj = {k: list(v) for k, v in self._adj.items()}
        return g

    # -- queries -------------------------------------------------------------

    def node(self, id: str) -> ArrayNode:
        return self.equations.get(id) or self.variables[id]

    def is_equation(self, id: str) -> bool:
        return id in self.equations

    def node_ids(self) -> list[str]:
        return sorted(self.equations) + sorted(self.variables)

    def arcs_of(self, id: str) -> list[Arc]:
        return [self.arcs[k] for k in self._adj[id]]

    def sorted_arcs(self) -> list[Arc]:
        return [self.arcs[k] for k in sorted(self.arcs)]

    def matched_rows(self, eq: str) -> MCIS:
        acc = MCIS.empty(self.equations[eq].ndim)
        for arc in self.arcs_of(eq):
            acc = acc | arc.matching.flatten_rows()
        return acc

    def matched_cols(self, var: str) -> MCIS:
        acc = MCIS.empty(self.variables[var].ndim)
        for arc in self.arcs_of(var):
            acc = acc | arc.matching.flatten_cols()
        return acc

    def matched(self, id: str) -> MCIS:
        return self.matched_rows(id) if self.is_equation(id) else self.matched_cols(id)

    def free(self, id: str) -> MCIS:
        return self.node(id).universe() - self.matched(id)

    def scalar_equation_count(self) -> int:
        return sum(n.volume for n in self.equations.values())

    def scalar_variable_count(self) -> int:
        return sum(n.volume for n in self.variables.values())

    def matched_count(self) -> int:
        """Number of matched scalar equation/variable pairs."""
        return sum(a.matching.cardinality() for a in self.arcs.values())

    def clear_matching(self):
        for a in self.arcs.values():
            a.matching = MCIM.empty(a.incidence.eq_shape, a.incidence.var_shape)

    def matched_graph(self) -> ArrayGraph:
        """The output graph: arcs whose matching is empty are dropped."""
        g = ArrayGraph()
        for n in sorted(self.equations):
            g.add_equation(n, self.equations[n].size, self.equations[n].name)
        for n in sorted(self.variables):
            g.add_variable(n, self.variables[n].size, self.variables[n].name)
        for a in self.sorted_arcs():
            if a.matching:
                g.add_arc(a.eq, a.var, a.incidence, a.matching)
        return g

    def summary(self) -> dict:
        return {
            "equationNodes": len(self.equations),
            "variableNodes": len(self.variables),
            "arcs": len(self.arcs),
            "scalarEquations": self.scalar_equation_count(),
            "scalarVariables": self.scalar_variable_count(),
        }


def _overlaps(sets: Iterable[MCIS], ndim: int) -> tuple[MCIS, MCIS]:
    """Union of the sets and the indices covered more than once."""
    seen = MCIS.empty(ndim)
    twice = MCIS.empty(ndim)
    for s in sets:
        twice = twice | (seen & s)
        seen = seen | s
    return seen, twice


def validate(g: ArrayGraph, mode: str = "partial") -> list[Violation]:
    """Check matching conditions; ``mode`` is ``"partial"`` or ``"complete"``.

    Partial mode allows unmatched scalars.  Complete mode additionally
    requires every scalar equation and every scalar variable to be matched
    exactly once and no arc to carry an empty matching.
    """
    if mode not in ("partial", "complete"):
        raise ValueError(f"unknown validation mode {mode!r}")
    out: list[Violation] = []
    for arc in g.sorted_arcs():
        u, m = arc.incidence, arc.matching
        e, v = g.equations.get(arc.eq), g.variables.get(arc.var)
        if e is None or v is None:
            out.append(Violation(0, "arc endpoint missing", arc.key))
            continue
        if u.eq_shape != e.size or u.var_shape != v.size:
            out.append(Violation(0, "incidence shape differs from node sizes", arc.key))
            continue
        if not u:
            out.append(Violation(0, "empty incidence matrix", arc.key))
        if m.eq_shape != u.eq_shape or m.var_shape != u.var_shape:
            out.append(Violation(3, "matching shape differs from incidence shape", arc.key))
            continue
        stray = m - u
        if stray:
            out.append(Violation(5, "matched entries outside the incidence matrix", arc.key,
                                 indices=stray.flatten_rows()))
        if mode == "complete" and not m:
            out.append(Violation(4, "arc carries an empty matching", arc.key))

    for eid in sorted(g.equations):
        node = g.equations[eid]
        rows = [a.matching.flatten_rows() for a in g.arcs_of(eid)
                if a.matching.eq_shape == node.size]
        seen, twice = _overlaps(rows, node.ndim)
        # within one arc a row may only appear on a single diagonal
        for a in g.arcs_of(eid):
            if a.matching.eq_shape == node.size:
                _, dup = _overlaps((el.keys.unpad(node.ndim) for el in a.matching.elements), node.ndim)
                twice = twice | dup
        if twice:
            out.append(Violation(6, "scalar equations matched more than once", node=eid, indices=twice))
        if mode == "complete":
            missing = node.universe() - seen
            if missing:
                out.append(Violation(6, "scalar equations left unmatched", node=eid, indices=missing))

    for vid in sorted(g.variables):
        node = g.variables[vid]
        cols = [a.matching.flatten_cols() for a in g.arcs_of(vid)
                if a.matching.var_shape == node.size]
        seen, twice = _overlaps(cols, node.ndim)
        for a in g.arcs_of(vid):
            if a.matching.var_shape == node.size:
                _, dup = _overlaps((el.columns.unpad(node.ndim) for el in a.matching.elements), node.ndim)
                twice = twice | dup
        if twice:
            out.append(Violation(6, "scalar variables matched more than once", node=vid, indices=twice))
        if mode == "complete":
            missing = node.universe() - seen
            if missing:
                out.append(Violation(6, "scalar variables left unmatched", node=vid, indices=missing))
    return out


def is_complete(g: ArrayGraph) -> bool:
    """Every scalar equation and variable matched; unused arcs are ignored."""
    return not validate(g.matched_graph(), "complete")


def omega(g: ArrayGraph) -> int:
    """Number of arcs carrying at least one matched pair."""
    return sum(1 for a in g.arcs.values() if a.matching)


def flatten(g: ArrayGraph, cap: int = FLATTEN_CAP) -> ScalarGraph:
    """Expand to the scalar graph, carrying the matching along."""
    total = g.scalar_equation_count() + g.scalar_variable_count()
    if total > cap:
        raise GraphError(f"flattened graph has {total} scalar nodes, cap is {cap}")
    sg = ScalarGraph()
    eq_pos: dict[tuple[str, tuple], int] = {}
    var_pos: dict[tuple[str, tuple], int] = {}
    for eid in sorted(g.equations):
        for idx in sorted(g.equations[eid].universe()):
            eq_pos[(eid, idx)] = len(sg.equations)
            sg.equations.append((eid, idx))
    for vid in sorted(g.variables):
        for idx in sorted(g.variables[vid].universe()):
            var_pos[(vid, idx)] = len(sg.variables)
            sg.variables.append((vid, idx))
    for arc in g.sorted_arcs():
        for k, j in arc.incidence.entries():
            pair = (eq_pos[(arc.eq, k)], var_pos[(arc.var, j)])
            sg.arcs.append(pair)
            sg.arc_origin[pair] = arc.key
        for k, j in arc.matching.entries():
            sg.matching[eq_pos[(arc.eq, k)]] = var_pos[(arc.var, j)]
    sg.arcs.sort()
    return sg
