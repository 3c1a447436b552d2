"""Flattened (scalar) bipartite graph."""

from __future__ import annotations

from dataclasses import dataclass, field

Index = tuple[int, ...]


@dataclass
class ScalarGraph:
    """One node per scalar equation/variable, one arc per incidence entry.

    ``arc_origin`` maps each scalar arc ``(eq_pos, var_pos)`` to the array arc
    ``(eq_id, var_id)`` it came from; ``matching`` maps equation positions to
    variable positions.
    """

    equations: list[tuple[str, Index]] = field(default_factory=list)
    variables: list[tuple[str, Index]] = field(default_factory=list)
    arcs: list[tuple[int, int]] = field(default_factory=list)
    matching: dict[int, int] = field(default_factory=dict)
    arc_origin: dict[tuple[int, int], tuple[str, str]] = field(default_factory=dict)

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in self.equations]
        for e, v in sorted(self.arcs):
            adj[e].append(v)
        return adj

    def matching_is_valid(self) -> bool:
        arcs = set(self.arcs)
        vs = list(self.matching.values())
        return len(vs) == len(set(vs)) and all((e, v) in arcs for e, v in self.matching.items())

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "equations": [{"node": n, "index": list(i)} for n, i in self.equations],
            "variables": [{"node": n, "index": list(i)} for n, i in self.variables],
            "arcs": [{"eq": e, "var": v, "arc": list(self.arc_origin[(e, v)])}
                     for e, v in sorted(self.arcs)],
            "matching": [[e, v] for e, v in sorted(self.matching.items())],
        }
