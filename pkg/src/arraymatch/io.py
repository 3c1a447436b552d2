"""JSON serialisation of array graphs (schema version 1)."""

from __future__ import annotations

import json
from pathlib import Path

import jsonschema

from .graph import ArrayGraph, GraphError
from .mcim import MCIM

SCHEMA_VERSION = 1

_SHAPE = {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1}
_MCIS = {
    "type": "array",
    "items": {"type": "array",
              "items": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2}},
}
_MCIM = {
    "type": "object",
    "required": ["eqShape", "varShape", "elements"],
    "properties": {
        "eqShape": _SHAPE,
        "varShape": _SHAPE,
        "elements": {"type": "array", "items": {
            "type": "object",
            "required": ["keys", "delta"],
            "properties": {"keys": _MCIS, "delta": {"type": "array", "items": {"type": "integer"}}},
        }},
    },
}
_NODE = {
    "type": "object",
    "required": ["id", "size"],
    "properties": {"id": {"type": "string", "minLength": 1}, "name": {"type": "string"}, "size": _SHAPE},
}
GRAPH_SCHEMA = {
    "type": "object",
    "required": ["schema", "equations", "variables", "arcs"],
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "equations": {"type": "array", "items": _NODE},
        "variables": {"type": "array", "items": _NODE},
        "arcs": {"type": "array", "items": {
            "type": "object",
            "required": ["eq", "var", "incidence"],
            "properties": {"eq": {"type": "string"}, "var": {"type": "string"},
                           "incidence": _MCIM, "matching": _MCIM},
        }},
    },
}


class GraphFormatError(ValueError):
    pass


def graph_to_json(g: ArrayGraph) -> dict:
    def node(n):
        return {"id": n.id, "name": n.name, "size": list(n.size)}

    arcs = []
    for a in g.sorted_arcs():
        item = {"eq": a.eq, "var": a.var, "incidence": a.incidence.to_json()}
        if a.matching:
            item["matching"] = a.matching.to_json()
        arcs.append(item)
    return {
        "schema": SCHEMA_VERSION,
        "equations": [node(g.equations[k]) for k in sorted(g.equations)],
        "variables": [node(g.variables[k]) for k in sorted(g.variables)],
        "arcs": arcs,
    }


def _locate(text: str, path) -> str:
    """Best-effort line number of a JSON path: the first line mentioning the
    innermost object key on the path."""
    keys = [p for p in path if isinstance(p, str)]
    if not keys:
        return ""
    needle = json.dumps(keys[-1]) + ":"
    for n, line in enumerate(text.splitlines(), 1):
        if needle in line.replace('" :', '":'):
            return f" (near line {n})"
    return ""


def graph_from_json(data: dict, text: str = "") -> ArrayGraph:
    """Build a graph from decoded JSON, validating against the schema."""
    validator = jsonschema.Draft202012Validator(GRAPH_SCHEMA)
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        where = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise GraphFormatError(f"schema error at {where}{_locate(text, e.absolute_path)}: {e.message}")
    g = ArrayGraph()
    try:
        for n in data["equations"]:
            g.add_equation(n["id"], n["size"], n.get("name"))
        for n in data["variables"]:
            g.add_variable(n["id"], n["size"], n.get("name"))
        for i, a in enumerate(data["arcs"]):
            try:
                u = MCIM.from_json(a["incidence"])
                m = MCIM.from_json(a["matching"]) if "matching" in a else None
            except ValueError as exc:
                raise GraphFormatError(f"arc {i} ({a['eq']}->{a['var']}): {exc}") from exc
            g.add_arc(a["eq"], a["var"], u, m)
    except GraphError as exc:
        raise GraphFormatError(str(exc)) from exc
    return g


def loads_graph(text: str) -> ArrayGraph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return graph_from_json(data, text)


def dumps_json(data) -> str:
    return json.dumps(data, indent=1, sort_keys=False) + "\n"


def dumps_graph(g: ArrayGraph) -> str:
    return dumps_json(graph_to_json(g))


def load_graph(path) -> ArrayGraph:
    text = Path(path).read_text()
    try:
        return loads_graph(text)
    except GraphFormatError as exc:
        raise GraphFormatError(f"{path}: {exc}") from exc


def save_graph(g: ArrayGraph, path):
    Path(path).write_text(dumps_graph(g))
