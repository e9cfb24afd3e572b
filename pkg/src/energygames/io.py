"""Game file format (JSON, versioned) and DOT export."""

from __future__ import annotations

import json
from typing import Any

from .core import GameGraph
from .errors import InputError

FORMAT_VERSION = 1
_SAFE_INT = 2**53


def _encode_int(x: int):
    return str(x) if abs(x) >= _SAFE_INT else x


def _decode_int(x: Any) -> int:
    if isinstance(x, bool):
        raise InputError(f"expected an integer, got {x!r}")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x, 10)
        except ValueError:
            pass
    raise InputError(f"expected an integer, got {x!r}")


def game_to_dict(g: GameGraph) -> dict:
    return {
        "format": FORMAT_VERSION,
        "dimension": g.dimension,
        "vertices": [{"id": v.id, "owner": v.owner} for v in g.vertices],
        "edges": [
            {"src": e.src, "dst": e.dst, "weight": [_encode_int(x) for x in e.weight]}
            for e in g.edges
        ],
    }


def game_from_dict(doc: dict) -> GameGraph:
    if not isinstance(doc, dict):
        raise InputError("game document must be an object")
    fmt = doc.get("format", FORMAT_VERSION)
    if fmt != FORMAT_VERSION:
        raise InputError(f"unsupported game format version {fmt!r}")
    try:
        d = _decode_int(doc["dimension"])
        verts = [(str(v["id"]), _decode_int(v["owner"])) for v in doc["vertices"]]
        edges = [
            (e["src"], [_decode_int(x) for x in e["weight"]], e["dst"]) for e in doc["edges"]
        ]
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed game document: {exc!r}") from exc
    return GameGraph.build(d, verts, edges)


def dumps_game(g: GameGraph) -> str:
    return json.dumps(game_to_dict(g), indent=2, ensure_ascii=False) + "\n"


def loads_game(text: str) -> GameGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"not valid JSON: {exc}") from exc
    return game_from_dict(doc)


def load_game(path: str) -> GameGraph:
    try:
        with open(path, encoding="utf-8") as fh:
            return loads_game(fh.read())
    except OSError as exc:
        raise InputError(str(exc)) from exc


def save_game(g: GameGraph, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_game(g))


def to_dot(g: GameGraph, name: str = "game") -> str:
    """Graphviz rendering: Player 1 as triangles, Player 2 as boxes."""
    lines = [f'digraph "{name}" {{']
    for v in g.vertices:
        shape = "triangle" if v.owner == 1 else "box"
        lines.append(f'  "{v.id}" [shape={shape}];')
    for e in g.edges:
        label = "<" + ",".join(str(x) for x in e.weight) + ">"
        lines.append(f'  "{e.src}" -> "{e.dst}" [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
