"""Lossy graphs, capped graphs and the capped chain used for given credits.

Coordinates are 0-based throughout the Python API.
"""

from __future__ import annotations

from typing import Sequence

from .core import GameGraph, unit
from .errors import BudgetExceeded, InputError

DEFAULT_ARENA_BUDGET = 2_000_000


def lossy(g: GameGraph) -> GameGraph:
    """Add a ``-e_i`` self-loop for every coordinate at every Player-1 vertex."""
    d = g.dimension
    edges = [(e.src, e.weight, e.dst) for e in g.edges]
    for v in g.vertices:
        if v.owner == 1:
            edges.extend((v.id, unit(d, i, -1), v.id) for i in range(d))
    return GameGraph.build(d, [(v.id, v.owner) for v in g.vertices], edges)


def capped_id(vertex: str, value: int) -> str:
    return f"({vertex},{value})"


def sink_id(g: GameGraph, coord: int) -> str:
    sid = f"_|_{coord}"
    while sid in g:
        sid += "'"
    return sid


def capped(g: GameGraph, coord: int, fence: int, cap: int,
           budget: int = DEFAULT_ARENA_BUDGET) -> GameGraph:
    """Track the running total of coordinate ``coord`` inside ``[-fence, cap]``.

    Moves that would leave the interval lead to a fresh Player-1 sink whose
    only edge is a ``+e_0`` self-loop, so reaching it loses the bounding
    game for Player 1. Weights are copied unchanged. The start vertex for
    ``v`` is ``capped_id(v, 0)``.
    """
    d = g.dimension
    if not 0 <= coord < d:
        raise InputError(f"coordinate {coord} out of range for dimension {d}")
    if fence < 0 or cap < 0:
        raise InputError("fence and cap must be nonnegative")
    size = 1 + len(g) * (fence + cap + 1)
    if size > budget:
        raise BudgetExceeded(f"capped graph would have {size} vertices (budget {budget})")
    sink = sink_id(g, coord)
    values = range(-fence, cap + 1)
    verts = [(sink, 1)]
    edges = [(sink, unit(d, 0), sink)]
    for v in g.vertices:
        for a in values:
            verts.append((capped_id(v.id, a), v.owner))
    for e in g.edges:
        for a in values:
            b = a + e.weight[coord]
            dst = capped_id(e.dst, b) if -fence <= b <= cap else sink
            edges.append((capped_id(e.src, a), e.weight, dst))
    return GameGraph.build(d, verts, edges)


def chain_start(vertex: str, d: int) -> str:
    """Start vertex of ``vertex`` in :func:`capped_chain` output."""
    for _ in range(d):
        vertex = capped_id(vertex, 0)
    return vertex


def capped_chain(g: GameGraph, credit: Sequence[int], cap: int,
                 budget: int = DEFAULT_ARENA_BUDGET) -> GameGraph:
    """``capped_d(... capped_1(lossy(g)) ...)`` with fences taken from ``credit``."""
    if len(credit) != g.dimension or any(c < 0 for c in credit):
        raise InputError(f"credit {tuple(credit)} must be a nonnegative {g.dimension}-vector")
    h = lossy(g)
    for i in range(g.dimension):
        h = capped(h, i, credit[i], cap, budget)
    return h


def arena_size_bound(nv: int, ne_norm: int, credit: Sequence[int], d: int) -> int:
    """Vertex count of the capped chain at the true hypercube bound.

    Evaluates ``A_{i+1} = 1 + A_i * (b(i+1) + (4 A_i ||E||)^(2(d+2)^3))``
    from ``A_0 = nv`` and returns ``A_d`` exactly.
    """
    if nv < 1 or ne_norm < 1 or d < 0:
        raise InputError("nv and ne_norm must be positive, d nonnegative")
    if len(credit) < d:
        raise InputError("credit has fewer than d entries")
    exponent = 2 * (d + 2) ** 3
    a = nv
    for i in range(d):
        a = 1 + a * (credit[i] + (4 * a * ne_norm) ** exponent)
    return a
