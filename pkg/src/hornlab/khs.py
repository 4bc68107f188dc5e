"""Reading and writing the ``khs-1`` JSON structure format."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Union

from .core import Hypergraph, KStructure
from .errors import FormatError

FORMAT = "khs-1"

Structure = Union[Hypergraph, KStructure]

_FIELDS = {
    "hypergraph": {"format", "kind", "vertices", "edges"},
    "kstructure": {"format", "kind", "k", "universe", "tuples"},
}


def _ident(x: Any, where: str) -> str:
    # bool is an int subclass; reject it explicitly
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        raise FormatError(f"{where}: identifiers must be strings or integers, got {x!r}")
    return str(x)


def _ident_list(value: Any, where: str) -> list[str]:
    if not isinstance(value, list):
        raise FormatError(f"{where}: expected a list")
    out = [_ident(x, f"{where}[{i}]") for i, x in enumerate(value)]
    if len(set(out)) != len(out):
        raise FormatError(f"{where}: duplicate identifier")
    return out


def from_json(obj: Any) -> Structure:
    if not isinstance(obj, dict):
        raise FormatError("top level: expected a JSON object")
    if obj.get("format") != FORMAT:
        raise FormatError(f"field 'format': expected {FORMAT!r}, got {obj.get('format')!r}")
    kind = obj.get("kind")
    if kind not in _FIELDS:
        raise FormatError(f"field 'kind': expected 'hypergraph' or 'kstructure', got {kind!r}")
    extra = set(obj) - _FIELDS[kind]
    if extra:
        raise FormatError(f"unknown field(s): {', '.join(sorted(extra))}")
    missing = _FIELDS[kind] - set(obj)
    if missing:
        raise FormatError(f"missing field(s): {', '.join(sorted(missing))}")

    if kind == "hypergraph":
        vertices = _ident_list(obj["vertices"], "field 'vertices'")
        known = set(vertices)
        if not isinstance(obj["edges"], list):
            raise FormatError("field 'edges': expected a list")
        seen = set()
        edges = []
        for i, e in enumerate(obj["edges"]):
            where = f"field 'edges'[{i}]"
            members = _ident_list(e, where)
            if not members:
                raise FormatError(f"{where}: hyperedges must be non-empty")
            for v in members:
                if v not in known:
                    raise FormatError(f"{where}: unknown vertex {v!r}")
            key = frozenset(members)
            if key in seen:
                raise FormatError(f"{where}: duplicate edge")
            seen.add(key)
            edges.append(members)
        return Hypergraph.from_edges(vertices, edges)

    k = obj["k"]
    if isinstance(k, bool) or not isinstance(k, int) or k < 2:
        raise FormatError(f"field 'k': expected an integer >= 2, got {k!r}")
    universe = _ident_list(obj["universe"], "field 'universe'")
    known = set(universe)
    if not isinstance(obj["tuples"], list):
        raise FormatError("field 'tuples': expected a list")
    seen = set()
    for i, t in enumerate(obj["tuples"]):
        where = f"field 'tuples'[{i}]"
        if not isinstance(t, list) or len(t) != k:
            raise FormatError(f"{where}: expected a list of length {k}")
        entries = tuple(_ident(x, f"{where}[{j}]") for j, x in enumerate(t))
        for x in entries:
            if x not in known:
                raise FormatError(f"{where}: unknown element {x!r}")
        if entries in seen:
            raise FormatError(f"{where}: duplicate tuple")
        seen.add(entries)
    return KStructure.from_tuples(k, universe, seen)


def to_json(s: Structure) -> dict:
    if isinstance(s, Hypergraph):
        return {"format": FORMAT, "kind": "hypergraph", "vertices": list(s.vertices), "edges": s.edge_names()}
    return {"format": FORMAT, "kind": "kstructure", "k": s.k, "universe": list(s.universe), "tuples": s.tuple_names()}


def loads(text: str) -> Structure:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return from_json(obj)


def dumps(s: Structure) -> str:
    return json.dumps(to_json(s), separators=(",", ":"))


def load(path: str | Path) -> Structure:
    try:
        return loads(Path(path).read_text())
    except FormatError as exc:
        raise FormatError(f"{path}: {exc}") from None


def dump(s: Structure, path: str | Path) -> None:
    Path(path).write_text(dumps(s) + "\n")
