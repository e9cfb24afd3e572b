"""Exhaustive solver for first-cycle bounding games.

At a Player-1 vertex Player 2 first offers a colour (a perfect half-space
from a finite universe), then Player 1 picks an edge which is coloured by
the offer. The game stops at the first repeated vertex; Player 2 wins iff
the weight of the closed simple cycle lies in the common prefix (lca) of
the colours along that cycle.

The search memoises on the edge sequence plus, for every position of the
current simple path, the lca of the colours on the suffix starting there.
Two coloured paths that agree on this data have identical futures, since
any cycle closed later is such a suffix extended by new edges.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import Sequence

from .core import Edge, GameGraph, edge_norm, player2_only_cycle_edges, vadd
from .errors import BudgetExceeded, InputError, UndefinedState
from .geometry import PerfectHalfSpace, enumerate_perfect_halfspaces

DEFAULT_FCB_BUDGET = 5_000_000


@dataclass(frozen=True)
class ColouredStep:
    edge: Edge
    colour: PerfectHalfSpace | None = None


def default_universe(g: GameGraph) -> tuple[PerfectHalfSpace, ...]:
    return enumerate_perfect_halfspaces(len(g) * edge_norm(g), g.dimension)


def _common_prefix(a: tuple, b: tuple) -> tuple:
    n = 0
    for x, y in zip(a, b):
        if x != y:
            break
        n += 1
    return a if n == len(a) else a[:n]


class _Search:
    """Memoised AND-OR search; shared by the solver and lazily by strategies."""

    def __init__(self, g: GameGraph, v0: str, universe: Sequence[PerfectHalfSpace], budget: int):
        if v0 not in g:
            raise InputError(f"unknown start vertex {v0!r}")
        if player2_only_cycle_edges(g):
            raise InputError("graph has a Player-2-only cycle; run normalize_cycles first")
        if not universe:
            raise InputError("empty colour universe")
        self.g = g
        self.v0 = v0
        self.universe = tuple(universe)
        self.budget = budget
        self.nodes = 0
        d = g.dimension
        self.zero = (0,) * d
        # intern open half-spaces so chains become tuples of small ints
        hs_ids: dict = {}
        self.normals: list[tuple[int, ...]] = []
        self.colours: list[tuple[int, ...]] = []
        for c in self.universe:
            if c.d != d or not c.is_perfect:
                raise InputError("universe must contain perfect half-spaces of the game dimension")
            ids = []
            for h in c.chain:
                if h not in hs_ids:
                    hs_ids[h] = len(self.normals)
                    self.normals.append(h.normal)
                ids.append(hs_ids[h])
            self.colours.append(tuple(ids))
        self.colour_index = {c: i for i, c in enumerate(self.universe)}
        self.edge_index = {e: i for i, e in enumerate(g.edges)}
        self.out = {v.id: [self.edge_index[e] for e in g.out_edges(v.id)] for v in g.vertices}
        self.memo: dict = {}
        self.p2_colour: dict = {}
        self.p2_edge: dict = {}
        self.p1_edge: dict = {}

    # a chain of interned half-spaces contains w iff its first nonzero dot is negative
    def _contains(self, chain: tuple[int, ...], w) -> bool:
        for h in chain:
            s = 0
            for a, b in zip(self.normals[h], w):
                s += a * b
            if s < 0:
                return True
            if s > 0:
                return False
        return False

    def _step(self, verts, edges, lcas, weights, ei: int, ci: int | None):
        """Outcome (1 or 2) of extending the path with edge ``ei`` coloured ``ci``."""
        e = self.g.edges[ei]
        colour = None if ci is None else self.colours[ci]
        if colour is None:
            new_lcas = lcas
        else:
            new_lcas = tuple(colour if l is None else _common_prefix(l, colour) for l in lcas)
        new_weights = tuple(vadd(w, e.weight) for w in weights)
        if e.dst in verts:
            j = verts.index(e.dst)
            chain = new_lcas[j]
            if chain is None:
                raise InputError("a cycle without Player-1 edge was closed")
            return 2 if self._contains(chain, new_weights[j]) else 1
        # the new vertex starts an empty suffix
        return self.value(verts + (e.dst,), edges + (ei,), new_lcas + (None,),
                          new_weights + (self.zero,))

    def value(self, verts, edges, lcas, weights) -> int:
        key = (edges, lcas)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(f"first-cycle search exceeded {self.budget} states")
        v = verts[-1]
        if self.g.owner(v) == 1:
            result = 1
            for ci in range(len(self.colours)):
                for ei in self.out[v]:
                    if self._step(verts, edges, lcas, weights, ei, ci) == 1:
                        self.p1_edge[(key, ci)] = ei
                        break
                else:
                    self.p2_colour[key] = ci
                    result = 2
                    break
        else:
            result = 1
            for ei in self.out[v]:
                if self._step(verts, edges, lcas, weights, ei, None) == 2:
                    self.p2_edge[key] = ei
                    result = 2
                    break
        self.memo[key] = result
        return result

    def root(self) -> int:
        d = self.g.dimension
        return self.value((self.v0,), (), (None,), ((0,) * d,))

    def locate(self, state: Sequence[ColouredStep]):
        """Search coordinates of a coloured simple path from ``v0``."""
        verts = (self.v0,)
        edges: tuple = ()
        lcas: tuple = (None,)
        weights = ((0,) * self.g.dimension,)
        for step in state:
            e = step.edge
            if e.src != verts[-1] or e not in self.edge_index:
                raise UndefinedState(f"step {e.label()} does not extend the path")
            if e.dst in verts:
                raise UndefinedState("the path repeats a vertex: the game is over")
            ci = None
            if self.g.owner(e.src) == 1:
                if step.colour is None or step.colour not in self.colour_index:
                    raise UndefinedState("Player-1 step without a colour from the universe")
                ci = self.colour_index[step.colour]
            colour = None if ci is None else self.colours[ci]
            if colour is not None:
                lcas = tuple(colour if l is None else _common_prefix(l, colour) for l in lcas)
            lcas = lcas + (None,)
            weights = tuple(vadd(w, e.weight) for w in weights) + (self.zero,)
            verts = verts + (e.dst,)
            edges = edges + (self.edge_index[e],)
        return verts, edges, lcas, weights


@dataclass
class FCBStrategy:
    """Decisions of ``player`` in a solved first-cycle game.

    Lookups on states the solver has not visited trigger a search of that
    subtree, so the strategy is total on legal states.
    """

    player: int
    search: _Search = field(repr=False)

    @property
    def graph(self) -> GameGraph:
        return self.search.g

    @property
    def universe(self) -> tuple[PerfectHalfSpace, ...]:
        return self.search.universe

    def _prepare(self, state):
        verts, edges, lcas, weights = self.search.locate(state)
        self.search.value(verts, edges, lcas, weights)
        return verts[-1], (edges, lcas)

    def covers(self, state: Sequence[ColouredStep]) -> bool:
        """Whether ``player`` wins the remaining first-cycle game from ``state``."""
        verts, edges, lcas, weights = self.search.locate(state)
        return self.search.value(verts, edges, lcas, weights) == self.player

    def colour(self, state: Sequence[ColouredStep]) -> PerfectHalfSpace:
        """Player 2's offer at a Player-1 vertex."""
        v, key = self._prepare(state)
        if self.search.g.owner(v) != 1:
            raise UndefinedState(f"{v!r} is not a Player-1 vertex")
        ci = self.search.p2_colour.get(key)
        if ci is None:
            raise UndefinedState("Player 2 has no winning colour here")
        return self.search.universe[ci]

    def edge(self, state: Sequence[ColouredStep], offered: PerfectHalfSpace | None = None) -> Edge:
        s = self.search
        verts, edges, lcas, weights = s.locate(state)
        s.value(verts, edges, lcas, weights)
        v, key = verts[-1], (edges, lcas)
        if s.g.owner(v) == 1:
            if offered is None or offered not in s.colour_index:
                raise UndefinedState("an offered colour from the universe is required")
            ci = s.colour_index[offered]
            ei = s.p1_edge.get((key, ci))
            if ei is None and self.player == 1:
                # colours after Player 2's refutation were never tried; answer them now
                for cand in s.out[v]:
                    if s._step(verts, edges, lcas, weights, cand, ci) == 1:
                        s.p1_edge[(key, ci)] = ei = cand
                        break
        else:
            ei = s.p2_edge.get(key)
        if ei is None:
            raise UndefinedState(f"Player {3 - self.player} wins from this state")
        return s.g.edges[ei]

    def dump(self) -> str:
        """Text table ``state -> decision`` over every recorded winning decision."""
        s = self.search
        lines = []

        def enc(key):
            edges, lcas = key
            path = " ".join(s.g.edges[i].label() for i in edges) or s.v0
            marks = ",".join("-" if l is None else ".".join(map(str, l)) for l in lcas)
            return f"{path} [{marks}]"

        if self.player == 2:
            for key, ci in sorted(s.p2_colour.items(), key=lambda kv: kv[0][0]):
                lines.append(f"{enc(key)} => colour {s.universe[ci].encode()}")
            for key, ei in sorted(s.p2_edge.items(), key=lambda kv: kv[0][0]):
                lines.append(f"{enc(key)} => edge {s.g.edges[ei].label()}")
        else:
            for (key, ci), ei in sorted(s.p1_edge.items(), key=lambda kv: (kv[0][0][0], kv[0][1])):
                lines.append(
                    f"{enc(key)} + {s.universe[ci].encode()} => edge {s.g.edges[ei].label()}"
                )
        return "\n".join(lines)


def fcb_move(strategy: FCBStrategy, state: Sequence[ColouredStep],
             offered: PerfectHalfSpace | None = None):
    """The stored decision: a colour or an edge, depending on who moves."""
    g = strategy.graph
    v = state[-1].edge.dst if state else strategy.search.v0
    if strategy.player == 2 and v in g and g.owner(v) == 1:
        return strategy.colour(state)
    return strategy.edge(state, offered)


@dataclass
class FCBResult:
    winner: int
    strategy: FCBStrategy
    states: int
    universe_size: int


def solve_fcb(g: GameGraph, v0: str, universe: Sequence[PerfectHalfSpace] | None = None,
              budget: int = DEFAULT_FCB_BUDGET) -> FCBResult:
    """Winner of the first-cycle game from ``v0`` with a strategy for the winner."""
    if universe is None:
        universe = default_universe(g)
    search = _Search(g, v0, universe, budget)
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 10 * len(g) + 1000))
    try:
        winner = search.root()
    finally:
        sys.setrecursionlimit(limit)
    return FCBResult(winner, FCBStrategy(winner, search), search.nodes, len(search.universe))


def evaluate_cycle(steps: Sequence[ColouredStep]) -> int:
    """Winner of a closed cycle given with its colours."""
    colours = [s.colour for s in steps if s.colour is not None]
    if not colours:
        raise InputError("cycle has no coloured step")
    from .geometry import lca

    w = steps[0].edge.weight
    for s in steps[1:]:
        w = vadd(w, s.edge.weight)
    return 2 if lca(colours).contains(w) else 1


def verify_strategy(g: GameGraph, v0: str, universe: Sequence[PerfectHalfSpace],
                    strategy: FCBStrategy, max_plays: int = 2_000_000) -> bool:
    """Play ``strategy`` against every opposing behaviour on full coloured paths.

    Does not use the solver's memo key, so it independently confirms that
    the strategy never loses. Raises :class:`BudgetExceeded` when the
    opposition tree is larger than ``max_plays``.
    """
    me = strategy.player
    count = 0

    def play(state: tuple[ColouredStep, ...]) -> bool:
        nonlocal count
        v = state[-1].edge.dst if state else v0
        visited = [v0] + [s.edge.dst for s in state]
        if state and visited.count(v) > 1:
            j = visited.index(v)
            count += 1
            if count > max_plays:
                raise BudgetExceeded("strategy verification budget exceeded")
            return evaluate_cycle(state[j:]) == me
        if g.owner(v) == 1:
            if me == 2:
                c = strategy.colour(state)
                return all(play(state + (ColouredStep(e, c),)) for e in g.out_edges(v))
            return all(
                play(state + (ColouredStep(strategy.edge(state, c), c),)) for c in universe
            )
        if me == 2:
            return play(state + (ColouredStep(strategy.edge(state)),))
        return all(play(state + (ColouredStep(e),)) for e in g.out_edges(v))

    return play(())
