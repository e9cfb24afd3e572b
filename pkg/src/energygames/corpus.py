"""The two worked game graphs used throughout the documentation and tests."""

from __future__ import annotations

from .core import Configuration, Edge, GameGraph


def fig1() -> GameGraph:
    """Three vertices; Player 1 at ``v0`` balances between two Player-2 vertices."""
    return GameGraph.build(
        2,
        {"v0": 1, "vL": 2, "vR": 2},
        [
            ("v0", (0, 0), "vL"),
            ("v0", (0, 0), "vR"),
            ("vL", (-2, 2), "v0"),
            ("vL", (-1, 3), "v0"),
            ("vR", (2, -1), "v0"),
            ("vR", (4, -3), "v0"),
        ],
    )


def fig3() -> GameGraph:
    """Two Player-1 vertices where Player 2 nevertheless wins."""
    return GameGraph.build(
        2,
        {"vL": 1, "vR": 1},
        [
            ("vL", (-1, 0), "vR"),
            ("vR", (0, -1), "vL"),
            ("vL", (1, -1), "vL"),
            ("vR", (-1, 1), "vR"),
        ],
    )


def balance_choice(g: GameGraph, config: Configuration, coord: int = 0,
                   if_nonneg: str = "vL", otherwise: str = "vR") -> Edge:
    """Go to ``if_nonneg`` when the level on ``coord`` is >= 0, else ``otherwise``."""
    target = if_nonneg if config.level[coord] >= 0 else otherwise
    for e in g.out_edges(config.vertex):
        if e.dst == target:
            return e
    return g.out_edges(config.vertex)[0]


def fig1_counterless() -> dict[str, tuple[int, ...]]:
    """Player 2's fixed edge weights used in the printed play."""
    return {"vL": (-2, 2), "vR": (4, -3)}
