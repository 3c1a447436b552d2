"""Max-2-SAT encoded as an optimal array-aware matching instance.

Clauses are AND pairs of literals.  Every literal owns an even cycle of
scalar nodes; alpha nodes are variables, beta nodes are equations.  A cycle
admits exactly two perfect matchings: the odd-numbered edges (literal true)
or the even-numbered ones (literal false).  Each clause contributes one edge
from each of its two literal cycles, lifted into a size-2 equation array and
a size-2 variable array joined by an identity incidence.  Both clause edges
are matched exactly when the clause holds, and then they share one array
arc, so minimising Omega maximises the number of satisfied clauses.

Gadgets appended to a literal cycle (``i`` is the literal's next free
counter, ``a``/``b`` stand for alpha/beta):

* first occurrence, or repeated positive: ``a_i b_i a_i+1 b_i+1``; the
  clause edge is ``a_i+1 b_i+1`` (odd).
* repeated negated: ``a_i b_i a_i+1 b_i+1``; the clause edge is
  ``b_i a_i+1`` (even).

Repeats are linked from the previous end node (``b``) to ``a_i``; after the
last clause each end node is linked back to ``a_1``.  Gadget start nodes
never belong to a clause, so no two scalar edges other than a clause pair
fall on the same array arc.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .graph import ArrayGraph
from .mcim import MCIM

EqIdx = tuple[str, tuple[int, ...]]


class ClauseFormatError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Literal:
    name: str
    negated: bool = False

    def __neg__(self):
        return Literal(self.name, not self.negated)

    def value(self, assignment: dict[str, bool]) -> bool:
        if self.name not in assignment:
            raise KeyError(f"literal {self.name!r} is unassigned")
        return assignment[self.name] != self.negated

    def __str__(self):
        return ("!" if self.negated else "") + self.name


@dataclass(frozen=True)
class Clause2:
    lit1: Literal
    lit2: Literal

    @property
    def literals(self) -> tuple[Literal, Literal]:
        return (self.lit1, self.lit2)

    def __str__(self):
        return f"{self.lit1} {self.lit2}"


def parse_clauses(text: str) -> list[Clause2]:
    """One clause per line, one or two whitespace-separated literals,
    ``!`` for negation, ``#`` starts a comment.  Unary clauses are doubled."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) > 2:
            raise ClauseFormatError(f"line {lineno}: more than two literals: {raw!r}")
        lits = []
        for tok in tokens:
            neg = tok.startswith("!")
            name = tok[1:] if neg else tok
            if not name or "!" in name:
                raise ClauseFormatError(f"line {lineno}: malformed literal {tok!r}")
            lits.append(Literal(name, neg))
        if len(lits) == 1:
            lits.append(lits[0])
        out.append(Clause2(*lits))
    return out


def format_clauses(clauses: list[Clause2]) -> str:
    return "".join(f"{c}\n" for c in clauses)


def expand_or_clauses(clauses: list[Clause2]) -> list[Clause2]:
    """``(x or y)`` becomes ``(x and !y), (!x and y), (x and y)``; at most one
    of the three holds, and one does exactly when the OR clause does."""
    out = []
    for c in clauses:
        x, y = c.literals
        out += [Clause2(x, -y), Clause2(-x, y), Clause2(x, y)]
    return out


def normalize_clauses(clauses: list[Clause2]) -> tuple[list[Clause2], dict[str, str]]:
    """Rename every literal whose first occurrence is negated to its complement.

    Returns the rewritten clauses and ``{original: complement_name}``.
    """
    first: dict[str, bool] = {}
    for c in clauses:
        for lit in c.literals:
            first.setdefault(lit.name, lit.negated)
    renamed = {n: f"not({n})" for n, neg in first.items() if neg}
    taken = set(first)
    for n, new in renamed.items():
        if new in taken:
            raise ClauseFormatError(f"complement name {new!r} collides with an existing literal")

    def fix(lit: Literal) -> Literal:
        if lit.name in renamed:
            return Literal(renamed[lit.name], not lit.negated)
        return lit

    return [Clause2(fix(c.lit1), fix(c.lit2)) for c in clauses], renamed


def count_satisfied(clauses: list[Clause2], assignment: dict[str, bool], form: str = "and") -> int:
    """Clauses made true by ``assignment``; ``form`` is ``"and"`` or ``"or"``."""
    if form not in ("and", "or"):
        raise ValueError(f"unknown clause form {form!r}")
    combine = all if form == "and" else any
    return sum(1 for c in clauses if combine(lit.value(assignment) for lit in c.literals))


def literal_names(clauses: list[Clause2]) -> list[str]:
    return sorted({lit.name for c in clauses for lit in c.literals})


def brute_force_max2sat(clauses: list[Clause2], form: str = "and") -> tuple[int, dict[str, bool]]:
    """Best clause count over all assignments (first best in binary order)."""
    names = literal_names(clauses)
    best, best_assignment = -1, {}
    for bits in itertools.product((False, True), repeat=len(names)):
        a = dict(zip(names, bits))
        n = count_satisfied(clauses, a, form)
        if n > best:
            best, best_assignment = n, a
    return max(best, 0), best_assignment


@dataclass
class ReductionMap:
    """Bookkeeping linking the matching instance back to the clauses."""

    clauses: list[Clause2]
    normalized: list[Clause2]
    renamed: dict[str, str]
    literal_arcs: dict[str, tuple[str, str]] = field(default_factory=dict)
    clause_arcs: list[tuple[str, str]] = field(default_factory=list)
    cycles: dict[str, list[tuple[EqIdx, EqIdx]]] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "clauses": [str(c) for c in self.clauses],
            "normalized": [str(c) for c in self.normalized],
            "renamed": dict(self.renamed),
            "literalArcs": {k: list(v) for k, v in self.literal_arcs.items()},
            "clauseArcs": [list(a) for a in self.clause_arcs],
            "cycles": {k: [[[e[0], list(e[1])], [v[0], list(v[1])]] for e, v in edges]
                       for k, edges in self.cycles.items()},
        }


def _alpha(name, i):
    return f"alpha[{name},{i}]"


def _beta(name, i):
    return f"beta[{name},{i}]"


def encode_max2sat(clauses: list[Clause2]) -> tuple[ArrayGraph, ReductionMap]:
    """Build the array graph for an ordered list of AND clauses."""
    for c in clauses:
        if not isinstance(c, Clause2):
            raise ClauseFormatError(f"not a clause: {c!r}")
    normalized, renamed = normalize_clauses(clauses)

    # scalar edges as (beta, alpha); cycles keep them in l_1..l_n order
    cycle: dict[str, list[tuple[str, str]]] = {}
    counter: dict[str, int] = {}
    clause_edges: list[list[tuple[str, str]]] = []
    for c in normalized:
        pair = []
        for lit in c.literals:
            name = lit.name
            i = counter.get(name, 1)
            a0, b0, a1, b1 = _alpha(name, i), _beta(name, i), _alpha(name, i + 1), _beta(name, i + 1)
            edges = cycle.setdefault(name, [])
            if edges:
                edges.append((edges[-1][0], a0))
            elif lit.negated:
                raise ClauseFormatError(f"first occurrence of {name!r} is negated")
            edges += [(b0, a0), (b0, a1), (b1, a1)]
            pair.append((b0, a1) if lit.negated else (b1, a1))
            counter[name] = i + 2
        clause_edges.append(pair)
    for name, edges in cycle.items():
        edges.append((edges[-1][0], _alpha(name, 1)))

    # lift scalar nodes to arrays: clause nodes pair up, the rest are scalars
    where: dict[str, tuple[str, tuple[int, ...]]] = {}
    g = ArrayGraph()
    rmap = ReductionMap(list(clauses), normalized, renamed)
    for n, pair in enumerate(clause_edges, 1):
        eq_id, var_id = f"N[{n}].eq", f"N[{n}].var"
        g.add_equation(eq_id, (2,))
        g.add_variable(var_id, (2,))
        for slot, (b, a) in enumerate(pair, 1):
            where[b] = (eq_id, (slot,))
            where[a] = (var_id, (slot,))
        rmap.clause_arcs.append((eq_id, var_id))
    for name in sorted(cycle):
        for b, a in cycle[name]:
            if b not in where:
                g.add_equation(b)
                where[b] = (b, (1,))
            if a not in where:
                g.add_variable(a)
                where[a] = (a, (1,))

    entries: dict[tuple[str, str], list] = {}
    for name in sorted(cycle):
        for b, a in cycle[name]:
            (eq, k), (var, j) = where[b], where[a]
            entries.setdefault((eq, var), []).append((k, j))
        rmap.cycles[name] = [(where[b], where[a]) for b, a in cycle[name]]
        first_b, first_a = cycle[name][0]
        rmap.literal_arcs[name] = (where[first_b][0], where[first_a][0])
    for (eq, var), pairs in sorted(entries.items()):
        g.add_arc(eq, var, MCIM.from_entries(g.equations[eq].size, g.variables[var].size, pairs))
    return g, rmap


def _matched_entries(g: ArrayGraph) -> set[tuple[EqIdx, EqIdx]]:
    out = set()
    for arc in g.arcs.values():
        for k, j in arc.matching.entries():
            out.add(((arc.eq, k), (arc.var, j)))
    return out


def decode_assignment(g: ArrayGraph, rmap: ReductionMap) -> dict[str, bool]:
    """Literal values read off a complete matching of the encoded graph.

    A literal is true when the first edge of its cycle is matched.  Raises
    if some cycle is matched on neither exactly its odd nor its even edges.
    """
    matched = _matched_entries(g)
    internal = {}
    for name, edges in rmap.cycles.items():
        flags = [e in matched for e in edges]
        odd, even = flags[0::2], flags[1::2]
        if all(odd) and not any(even):
            internal[name] = True
        elif all(even) and not any(odd):
            internal[name] = False
        else:
            raise ValueError(f"cycle of literal {name!r} is not completely matched")
    out = {}
    for name in literal_names(rmap.clauses):
        out[name] = (not internal[rmap.renamed[name]]) if name in rmap.renamed else internal[name]
    return out


def matching_for_assignment(g: ArrayGraph, rmap: ReductionMap, assignment: dict[str, bool]):
    """Set the matching of ``g`` to the one encoding ``assignment``."""
    internal = {}
    for name, value in assignment.items():
        if name in rmap.renamed:
            internal[rmap.renamed[name]] = not value
        else:
            internal[name] = value
    per_arc: dict[tuple[str, str], list] = {}
    for name, edges in rmap.cycles.items():
        chosen = edges[0::2] if internal[name] else edges[1::2]
        for (eq, k), (var, j) in chosen:
            per_arc.setdefault((eq, var), []).append((k, j))
    g.clear_matching()
    for key, pairs in per_arc.items():
        arc = g.arcs[key]
        arc.matching = MCIM.from_entries(arc.incidence.eq_shape, arc.incidence.var_shape, pairs)
    return g
