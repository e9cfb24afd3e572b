"""Multi-weighted game graphs, configurations, paths and simple cycles.

Everything here is immutable and uses Python integers, so weights and
levels are exact at any magnitude.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import networkx as nx

from .errors import BudgetExceeded, InputError

Weight = tuple[int, ...]

DEFAULT_CYCLE_CAP = 10**6


def zero(d: int) -> Weight:
    return (0,) * d


def vadd(a: Sequence[int], b: Sequence[int]) -> Weight:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Sequence[int], b: Sequence[int]) -> Weight:
    return tuple(x - y for x, y in zip(a, b))


def vscale(c: int, a: Sequence[int]) -> Weight:
    return tuple(c * x for x in a)


def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def leq(a: Sequence[int], b: Sequence[int]) -> bool:
    """Componentwise (product) order."""
    return all(x <= y for x, y in zip(a, b))


def norm(v: Sequence[int]) -> int:
    """Maximum absolute value of the entries; 0 for the empty vector."""
    return max((abs(x) for x in v), default=0)


def unit(d: int, i: int, sign: int = 1) -> Weight:
    """Signed unit vector on coordinate ``i`` (0-based)."""
    return tuple(sign if j == i else 0 for j in range(d))


@dataclass(frozen=True, order=True)
class Vertex:
    id: str
    owner: int


@dataclass(frozen=True, order=True)
class Edge:
    """An edge of the multiset ``E``.

    Parallel edges with the same endpoints and weight are told apart by
    ``ordinal``. The field order gives the canonical sort
    (src, dst, weight, ordinal).
    """

    src: str
    dst: str
    weight: Weight
    ordinal: int = 0

    def label(self) -> str:
        w = ",".join(str(x) for x in self.weight)
        suffix = f"#{self.ordinal}" if self.ordinal else ""
        return f"{self.src}-({w})->{self.dst}{suffix}"


@dataclass(frozen=True)
class GameGraph:
    """A finite two-player arena with ``dimension``-dimensional integer weights.

    Build instances with :meth:`build`; it sorts vertices and edges and
    assigns ordinals so that equal graphs compare equal.
    """

    dimension: int
    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...]
    _owner: dict = field(init=False, repr=False, compare=False, hash=False)
    _out: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        owner = {v.id: v.owner for v in self.vertices}
        out: dict[str, list[Edge]] = {v.id: [] for v in self.vertices}
        for e in self.edges:
            out[e.src].append(e)
        object.__setattr__(self, "_owner", owner)
        object.__setattr__(self, "_out", {k: tuple(v) for k, v in out.items()})

    @classmethod
    def build(
        cls,
        dimension: int,
        vertices: Mapping[str, int] | Iterable[tuple[str, int]],
        edges: Iterable[tuple[str, Sequence[int], str]],
    ) -> "GameGraph":
        if isinstance(dimension, bool) or not isinstance(dimension, int):
            raise InputError(f"dimension must be an integer, got {dimension!r}")
        items = vertices.items() if isinstance(vertices, Mapping) else vertices
        verts: dict[str, int] = {}
        for vid, owner in items:
            vid = str(vid)
            if owner not in (1, 2):
                raise InputError(f"vertex {vid!r}: owner must be 1 or 2, got {owner!r}")
            if vid in verts:
                raise InputError(f"duplicate vertex id {vid!r}")
            verts[vid] = owner
        counts: dict[tuple, int] = {}
        built = []
        for src, weight, dst in edges:
            src, dst = str(src), str(dst)
            for end in (src, dst):
                if end not in verts:
                    raise InputError(f"edge endpoint {end!r} is not a vertex")
            weight = tuple(int(x) for x in weight)
            if len(weight) != dimension:
                raise InputError(
                    f"edge {src}->{dst}: weight {weight} has length {len(weight)}, "
                    f"expected {dimension}"
                )
            key = (src, dst, weight)
            ordinal = counts.get(key, 0)
            counts[key] = ordinal + 1
            built.append(Edge(src, dst, weight, ordinal))
        return cls(
            dimension,
            tuple(sorted(Vertex(k, o) for k, o in verts.items())),
            tuple(sorted(built)),
        )

    def owner(self, vid: str) -> int:
        return self._owner[vid]

    def out_edges(self, vid: str) -> tuple[Edge, ...]:
        return self._out[vid]

    def vertex_ids(self) -> list[str]:
        return [v.id for v in self.vertices]

    def __contains__(self, vid: str) -> bool:
        return vid in self._owner

    def __len__(self) -> int:
        return len(self.vertices)

    def relabel(self, mapping: Mapping[str, str]) -> "GameGraph":
        """Rename vertices; ``mapping`` must be injective."""
        return GameGraph.build(
            self.dimension,
            [(mapping[v.id], v.owner) for v in self.vertices],
            [(mapping[e.src], e.weight, mapping[e.dst]) for e in self.edges],
        )


def edge_norm(g: GameGraph) -> int:
    """Largest norm of an edge weight."""
    return max((norm(e.weight) for e in g.edges), default=0)


@dataclass(frozen=True)
class Configuration:
    vertex: str
    level: Weight


def total_weight(path: Sequence[Configuration]) -> Weight:
    """Sum of step weights, i.e. last level minus first level."""
    if not path:
        raise InputError("total_weight of an empty path")
    return vsub(path[-1].level, path[0].level)


def edge_path_weight(edges: Iterable[Edge], d: int) -> Weight:
    total = zero(d)
    for e in edges:
        total = vadd(total, e.weight)
    return total


def check_trace(g: GameGraph, trace: Sequence[Configuration]) -> None:
    """Raise :class:`InputError` unless ``trace`` is a play prefix of ``g``.

    A play prefix starts at the null vector and consecutive levels differ
    by the weight of some edge between the two vertices.
    """
    if not trace:
        raise InputError("empty trace")
    if trace[0].level != zero(g.dimension):
        raise InputError("a play must start at the null vector")
    for a, b in zip(trace, trace[1:]):
        step = vsub(b.level, a.level)
        if not any(e.dst == b.vertex and e.weight == step for e in g.out_edges(a.vertex)):
            raise InputError(f"no edge {a.vertex}-{step}->{b.vertex}")


# -- validation ---------------------------------------------------------------


def player2_only_cycle_edges(g: GameGraph) -> list[Edge]:
    """Edges lying on some cycle whose vertices all belong to Player 2."""
    sub = nx.DiGraph()
    p2 = [v.id for v in g.vertices if v.owner == 2]
    sub.add_nodes_from(p2)
    for e in g.edges:
        if g.owner(e.src) == 2 and g.owner(e.dst) == 2:
            sub.add_edge(e.src, e.dst)
    comp = {}
    for i, scc in enumerate(nx.strongly_connected_components(sub)):
        for v in scc:
            comp[v] = i
    bad = []
    for e in g.edges:
        if g.owner(e.src) == 2 and g.owner(e.dst) == 2:
            if e.src == e.dst or comp[e.src] == comp[e.dst]:
                bad.append(e)
    return bad


def validate(g: GameGraph) -> list[str]:
    """Return the list of violated standing assumptions (empty when valid)."""
    problems = []
    if g.dimension < 1:
        problems.append(f"dimension {g.dimension} < 1")
    for v in g.vertices:
        if not g.out_edges(v.id):
            problems.append(f"vertex {v.id!r} has no outgoing edge")
    if g.edges and edge_norm(g) == 0:
        problems.append("all edge weights are zero (need ||E|| > 0)")
    if not g.vertices:
        problems.append("graph has no vertices")
    bad = player2_only_cycle_edges(g)
    if bad:
        verts = sorted({e.src for e in bad})
        problems.append(f"Player-2-only cycle through {', '.join(verts)}")
    return problems


def normalize_cycles(g: GameGraph) -> GameGraph:
    """Split Player-2-only cycles with fresh Player-1 pass-through vertices.

    Each Player-2 to Player-2 edge on such a cycle becomes ``src -> x -> dst``
    where ``x`` belongs to Player 1, the first edge keeps the weight and the
    second one is null. A graph without such cycles is returned unchanged.
    """
    bad = set(player2_only_cycle_edges(g))
    if not bad:
        return g
    used = set(g.vertex_ids())
    verts = [(v.id, v.owner) for v in g.vertices]
    edges = []
    for e in g.edges:
        if e not in bad:
            edges.append((e.src, e.weight, e.dst))
            continue
        base = f"{e.src}>{e.dst}#{e.ordinal}"
        fresh = base
        n = 0
        while fresh in used:
            n += 1
            fresh = f"{base}.{n}"
        used.add(fresh)
        verts.append((fresh, 1))
        edges.append((e.src, e.weight, fresh))
        edges.append((fresh, zero(g.dimension), e.dst))
    return GameGraph.build(g.dimension, verts, edges)


# -- simple cycles ------------------------------------------------------------


@dataclass(frozen=True)
class SimpleCycle:
    """A simple cycle given by its edges; ``vertices`` closes on itself."""

    edges: tuple[Edge, ...]
    weight: Weight

    @property
    def vertices(self) -> tuple[str, ...]:
        return tuple(e.src for e in self.edges) + (self.edges[0].src,)


def enumerate_simple_cycles(g: GameGraph, cap: int = DEFAULT_CYCLE_CAP) -> list[SimpleCycle]:
    """All simple cycles of ``g``, parallel edges giving distinct cycles.

    Raises :class:`BudgetExceeded` rather than truncating when more than
    ``cap`` cycles exist.
    """
    dg = nx.DiGraph()
    dg.add_nodes_from(g.vertex_ids())
    between: dict[tuple[str, str], list[Edge]] = {}
    for e in g.edges:
        dg.add_edge(e.src, e.dst)
        between.setdefault((e.src, e.dst), []).append(e)
    cycles = []
    for nodes in nx.simple_cycles(dg):
        # rotate so the smallest id comes first, for reproducible output
        i = nodes.index(min(nodes))
        nodes = nodes[i:] + nodes[:i]
        hops = list(zip(nodes, nodes[1:] + nodes[:1]))
        for choice in itertools.product(*(between[h] for h in hops)):
            cycles.append(SimpleCycle(tuple(choice), edge_path_weight(choice, g.dimension)))
            if len(cycles) > cap:
                raise BudgetExceeded(f"more than {cap} simple cycles")
    cycles.sort(key=lambda c: tuple((e.src, e.dst, e.weight, e.ordinal) for e in c.edges))
    return cycles


def cycle_weights(g: GameGraph, cap: int = DEFAULT_CYCLE_CAP) -> list[Weight]:
    """Sorted set of nonzero simple-cycle weights."""
    z = zero(g.dimension)
    return sorted({c.weight for c in enumerate_simple_cycles(g, cap)} - {z})


def cycle_decomposition_step(
    stack: Sequence[Configuration], nxt: Configuration
) -> tuple[tuple[Configuration, ...], SimpleCycle | None]:
    """Push ``nxt`` onto a simple path, popping the cycle it closes if any.

    The returned cycle records its vertices through pseudo-edges whose
    weights are the level differences along the stack. After a pop the
    cycle is replaced by ``nxt`` and the kept prefix is shifted by the
    popped weight, so the top of the stack is always the current
    configuration, consecutive level differences stay edge weights, and
    the popped weights plus ``total_weight(stack)`` equal the current level.
    """
    stack = tuple(stack)
    for j, c in enumerate(stack):
        if c.vertex == nxt.vertex:
            seq = stack[j:] + (nxt,)
            edges = tuple(
                Edge(a.vertex, b.vertex, vsub(b.level, a.level)) for a, b in zip(seq, seq[1:])
            )
            w = vsub(nxt.level, c.level)
            kept = tuple(Configuration(s.vertex, vadd(s.level, w)) for s in stack[:j])
            return kept + (nxt,), SimpleCycle(edges, w)
    return stack + (nxt,), None
