"""Strategies on the unbounded game built from first-cycle strategies.

``LiftedP2Strategy`` replays a winning first-cycle strategy of Player 2 on
the residual simple path left after cutting every closed cycle.
``CounterAutomatonStrategy`` is Player 1's finite-memory automaton: a
coloured simple path, a current colour and counters ``c(k, W)`` that are
kept below soft bounds by shifts and cancellations.

Both strategies follow one protocol::

    start(g, v0, seed)      # reset memory
    observe(config)         # every configuration of the play, the first included
    choose(config) -> Edge  # only at the owner's vertices

Adversaries and :func:`simulate` use the same protocol.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from typing import Callable, Mapping, Sequence

from .core import (
    Configuration,
    Edge,
    GameGraph,
    Weight,
    cycle_decomposition_step,
    cycle_weights,
    edge_norm,
    norm,
    vadd,
    vscale,
    vsub,
    zero,
)
from .errors import BudgetExceeded, FalsificationError, InconsistentObservation, InputError, UndefinedState
from .fcb import ColouredStep, FCBStrategy
from .geometry import PerfectHalfSpace, cancel_target, shift_target
from .linalg import ColumnSystem, bound_S, positive_kernel_solution


# -- bounds ---------------------------------------------------------------------


@dataclass(frozen=True)
class BoundsPack:
    """Exact values of the hypercube bound and the automaton thresholds.

    ``U[k]`` is the soft bound and ``U[k] + u[k]`` the hard bound of level
    ``k`` (1-based). ``certified`` is false for scaled packs.
    """

    d: int
    M: int
    B: int
    U: Mapping[int, int]
    u: Mapping[int, int]
    S: Mapping[int, int]
    L: Mapping[int, int]
    certified: bool = True


def bounds(g: GameGraph) -> BoundsPack:
    nv, ne, d = len(g), edge_norm(g), g.dimension
    if ne < 1:
        raise InputError("bounds need a graph with a nonzero weight")
    base = 4 * nv * ne
    M = nv * ne
    e2 = (d + 2) ** 2
    ks = range(1, d + 1)
    return BoundsPack(
        d=d,
        M=M,
        B=base ** (2 * (d + 2) ** 3),
        U={k: base ** (2 * k * e2) for k in ks},
        u={k: base ** ((2 * k - 1) * e2) for k in ks},
        S={k: bound_S(M, k) for k in ks},
        L={k: 2 * (2 * M + 1) ** (d * (k - 1)) for k in ks},
    )


def kernel_coefficient_bound(g: GameGraph, max_subsets: int = 1 << 14) -> int:
    """Largest entry of the kernel witnesses a cancellation could use on ``g``.

    Scans every nonempty subset of the simple-cycle weights. The true
    bounds keep ``U(k) / u(k)`` above ``S(k)``, which dominates this value.
    """
    ws = cycle_weights(g)
    if (1 << len(ws)) > max_subsets:
        raise BudgetExceeded(f"{len(ws)} cycle weights give too many subsets")
    M = len(g) * edge_norm(g)
    best = 1
    for mask in range(1, 1 << len(ws)):
        cols = [w for i, w in enumerate(ws) if mask >> i & 1]
        x = positive_kernel_solution(ColumnSystem.of(cols, M))
        if x is not None:
            best = max(best, max(x))
    return best


def scaled_bounds(g: GameGraph, ratio: int | None = None, hard: bool = False) -> BoundsPack:
    """Small test-only thresholds; the resulting pack is not certified.

    ``U(k) = ratio * u(k)`` with ``ratio`` at least every kernel coefficient
    a cancellation can use, which keeps cancellations well-defined.
    ``ratio`` defaults to :func:`kernel_coefficient_bound`.

    By default ``u(1) = 1`` and ``u(k+1) = U(k) + u(k)``: events fire early
    but the hard bound may be exceeded. With ``hard=True`` the slack also
    covers every k-month of a k-year, ``u(k) = L(k) * max(|V|, U(k-1) + u(k-1)) + 1``,
    which is what the hard bound needs.
    """
    need = max(2, kernel_coefficient_bound(g))
    if ratio is None:
        ratio = need
    if ratio < need:
        raise InputError(f"ratio {ratio} is below the kernel coefficient bound {need}")
    pack = bounds(g)
    U, u = {}, {}
    low = 1
    for k in range(1, g.dimension + 1):
        if hard:
            prev = len(g) if k == 1 else max(len(g), U[k - 1] + u[k - 1])
            low = pack.L[k] * prev + 1
        u[k] = low
        U[k] = ratio * low
        low = U[k] + u[k]
    return replace(pack, U=U, u=u, certified=False)


# -- shared plumbing --------------------------------------------------------------


def _observed_edge(g: GameGraph, prev: Configuration, cur: Configuration) -> Edge:
    w = vsub(cur.level, prev.level)
    for e in g.out_edges(prev.vertex):
        if e.dst == cur.vertex and e.weight == w:
            return e
    raise InconsistentObservation(
        f"no edge {prev.vertex}->{cur.vertex} with weight {w} explains the observation"
    )


def _push(stack, steps, cfg: Configuration, step: ColouredStep | None):
    """Cycle-decomposition step on a path of configurations and its coloured edges."""
    if step is None:
        return (cfg,), (), None
    new_stack, popped = cycle_decomposition_step(stack, cfg)
    if popped is None:
        return new_stack, steps + (step,), None
    return new_stack, steps[: len(new_stack) - 1], popped


@dataclass(frozen=True)
class Event:
    t: int
    kind: str  # "shift" or "cancel"
    k: int
    colour: str
    coefficients: tuple[int, ...] = ()

    def line(self) -> str:
        return f"t={self.t} kind={self.kind} k={self.k} colour={self.colour}"


@dataclass
class CheckLog:
    """Counts of runtime checks and the failures among them."""

    counts: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def check(self, name: str, ok: bool, detail: str = "") -> bool:
        self.counts[name] = self.counts.get(name, 0) + 1
        if not ok:
            self.failures.append((name, detail))
        return ok

    def failed(self, name: str) -> int:
        return sum(1 for n, _ in self.failures if n == name)


# -- Player 2: cycle cutting ------------------------------------------------------


@dataclass(frozen=True)
class P2Memory:
    stack: tuple[Configuration, ...]
    steps: tuple[ColouredStep, ...]
    pending: PerfectHalfSpace | None = None
    popped: Weight | None = None


def p2_lift_step(strategy: FCBStrategy, mem: P2Memory | None, observed: Configuration):
    """Absorb ``observed`` and return ``(decision, memory)``.

    The decision is the first-cycle edge at Player-2 vertices and the
    colour Player 2 has in mind at Player-1 vertices. Closed cycles are cut
    from the memory, which stays a legal first-cycle state.
    """
    g = strategy.graph
    if mem is None:
        if observed.vertex != strategy.search.v0 or any(observed.level):
            raise InconsistentObservation("plays start at the solved vertex with level 0")
        stack, steps, popped = _push((), (), observed, None)
    else:
        e = _observed_edge(g, mem.stack[-1], observed)
        step = ColouredStep(e, mem.pending if g.owner(e.src) == 1 else None)
        stack, steps, popped = _push(mem.stack, mem.steps, observed, step)
    w = popped.weight if popped is not None else None
    if g.owner(observed.vertex) == 1:
        colour = strategy.colour(steps)
        return colour, P2Memory(stack, steps, colour, w)
    return strategy.edge(steps), P2Memory(stack, steps, None, w)


class LiftedP2Strategy:
    """Player 2 copies a winning first-cycle strategy on the cut path."""

    player = 2

    def __init__(self, fcb: FCBStrategy):
        if fcb.player != 2:
            raise InputError("the cycle-cutting lift needs a Player-2 first-cycle strategy")
        self.fcb = fcb
        self.mem: P2Memory | None = None
        self.popped: list[Weight] = []
        self.log = CheckLog()
        self.events: list[Event] = []

    def start(self, g: GameGraph, v0: str, seed: int = 0) -> None:
        if g is not self.fcb.graph and g != self.fcb.graph:
            raise InputError("strategy was solved on a different graph")
        self.mem = None
        self.popped = []
        self.log = CheckLog()

    def observe(self, config: Configuration) -> None:
        g = self.fcb.graph
        _, self.mem = p2_lift_step(self.fcb, self.mem, config)
        if self.mem.popped is not None:
            self.popped.append(self.mem.popped)
        self.log.check("memory_simple_path", len(self.mem.stack) <= len(g),
                       f"memory of length {len(self.mem.stack)}")

    def choose(self, config: Configuration) -> Edge:
        return self.fcb.edge(self.mem.steps)


# -- Player 1: counter automaton -------------------------------------------------


@dataclass(frozen=True)
class P1Memory:
    stack: tuple[Configuration, ...]
    steps: tuple[ColouredStep, ...]
    colour: PerfectHalfSpace
    counters: Mapping[tuple[int, Weight], int]


class CounterAutomatonStrategy:
    """Player 1's automaton driven by a first-cycle strategy ``fcb``.

    When ``fcb`` has no winning answer for the current path and colour
    (only possible if Player 1 does not win the first-cycle game) the
    automaton takes ``fallback(g, state, colour)`` if given, otherwise the
    first outgoing edge, and counts the occurrence in ``fallbacks``.
    """

    player = 1

    def __init__(self, fcb: FCBStrategy, pack: BoundsPack | None = None,
                 fallback: Callable | None = None, strict: bool = True):
        g = fcb.graph
        self.fcb = fcb
        self.pack = pack if pack is not None else bounds(g)
        self.M = len(g) * edge_norm(g)
        self.d = g.dimension
        self.weights = tuple(cycle_weights(g))
        self.fallback = fallback
        self.strict = strict
        self.initial_colour = min(fcb.universe, key=lambda c: c.key)
        self.mem: P1Memory | None = None
        self.events: list[Event] = []
        self.log = CheckLog()
        self.fallbacks = 0
        self.t = 0

    # memory ---------------------------------------------------------------------

    def start(self, g: GameGraph, v0: str, seed: int = 0) -> None:
        if g is not self.fcb.graph and g != self.fcb.graph:
            raise InputError("strategy was solved on a different graph")
        self.mem = None
        self.events = []
        self.log = CheckLog()
        self.fallbacks = 0
        self.t = 0

    def observe(self, config: Configuration) -> None:
        if self.mem is None:
            counters = {(k, w): 0 for k in range(1, self.d + 1) for w in self.weights}
            if any(config.level):
                raise InconsistentObservation("plays start at level 0")
            self.mem = P1Memory((config,), (), self.initial_colour, counters)
        else:
            self.mem = p1_auto_update(self, self.mem, config)
            self.t += 1
        self._check_invariants(config)

    def choose(self, config: Configuration) -> Edge:
        try:
            return self.fcb.edge(self.mem.steps, self.mem.colour)
        except UndefinedState:
            self.fallbacks += 1
            if self.fallback is not None:
                return self.fallback(self.fcb.graph, self.mem.steps, self.mem.colour)
            return self.fcb.graph.out_edges(config.vertex)[0]

    # checks ---------------------------------------------------------------------

    def energy_level(self, mem: P1Memory) -> Weight:
        """``w(gamma) + sum_W c(d, W) W``."""
        total = zero(self.d)
        for s in mem.steps:
            total = vadd(total, s.edge.weight)
        for w in self.weights:
            total = vadd(total, vscale(mem.counters[(self.d, w)], w))
        return total

    def _check_invariants(self, config: Configuration) -> None:
        mem = self.mem
        log = self.log
        ok = log.check("energy_identity", self.energy_level(mem) == config.level,
                       f"t={self.t} level={config.level}")
        neg = [key for key, c in mem.counters.items() if c < 0]
        ok &= log.check("counters_nonnegative", not neg, f"t={self.t} {neg}")
        for k in range(1, self.d + 1):
            amb = mem.colour.level(k).ambient
            hard = self.pack.U[k] + self.pack.u[k]
            for w in self.weights:
                if amb.contains(w):
                    ok &= log.check("hard_bound", mem.counters[(k, w)] < hard, f"t={self.t} k={k} W={w}")
        if not ok and self.strict:
            raise FalsificationError(log.failures[-1][0] + ": " + log.failures[-1][1])


def _violations(auto: CounterAutomatonStrategy, colour: PerfectHalfSpace, counters, k: int):
    h = colour.level(k)
    return [w for w in auto.weights if h.ambient.contains(w) and counters[(k, w)] >= auto.pack.U[k]]


def p1_auto_update(auto: CounterAutomatonStrategy, mem: P1Memory, observed: Configuration) -> P1Memory:
    """Memory update of the automaton for one observed configuration."""
    g = auto.fcb.graph
    e = _observed_edge(g, mem.stack[-1], observed)
    step = ColouredStep(e, mem.colour if g.owner(e.src) == 1 else None)
    stack, steps, popped = _push(mem.stack, mem.steps, observed, step)
    counters = dict(mem.counters)
    colour = mem.colour
    if popped is not None and any(popped.weight):
        w = popped.weight
        if (auto.d, w) not in counters:
            raise FalsificationError(f"popped cycle weight {w} is not a simple-cycle weight")
        for k in range(1, auto.d + 1):
            counters[(k, w)] += 1
        colour, counters = _resolve(auto, colour, counters)
    return P1Memory(stack, steps, colour, counters)


def _resolve(auto: CounterAutomatonStrategy, colour: PerfectHalfSpace, counters):
    """Apply the shift or cancellation at the largest violated level, if any."""
    level = None
    for k in range(auto.d, 0, -1):
        h = colour.level(k)
        if any(h.strict_part_contains(w) and counters[(k, w)] >= auto.pack.U[k] for w in auto.weights):
            level = k
            break
    if level is None:
        return colour, counters
    k = level
    log = auto.log
    violating = _violations(auto, colour, counters, k)
    new = shift_target(colour, k, violating, auto.M)
    if new is not None:
        auto.events.append(Event(auto.t + 1, "shift", k, new.encode()))
    else:
        system = ColumnSystem.of(violating, auto.M, colour.level(k).ambient)
        x = positive_kernel_solution(system)
        if not log.check("cancellation_feasible", x is not None, f"t={auto.t + 1} k={k} {violating}"):
            raise FalsificationError(f"k-cancellation at level {k} has no positive kernel solution")
        step = auto.pack.u[k]
        for k2 in range(k, auto.d + 1):
            for w, xi in zip(violating, x):
                counters[(k2, w)] -= step * xi
                log.check("cancellation_well_defined", counters[(k2, w)] >= 0,
                          f"t={auto.t + 1} k={k2} W={w}")
        new = cancel_target(colour, k, auto.M)
        restored = all(
            counters[(k, w)] < auto.pack.U[k]
            for w in auto.weights
            if colour.level(k).ambient.contains(w)
        )
        log.check("soft_bound_restored", restored, f"t={auto.t + 1} k={k}")
        auto.events.append(Event(auto.t + 1, "cancel", k, new.encode(), tuple(x)))
    for k2 in range(1, k):
        for w in auto.weights:
            counters[(k2, w)] = 0
    return new, counters


def p1_auto_step(auto: CounterAutomatonStrategy, mem: P1Memory, observed: Configuration):
    """Functional form: ``(edge or None, memory)`` after ``observed``."""
    new = p1_auto_update(auto, mem, observed)
    if auto.fcb.graph.owner(observed.vertex) != 1:
        return None, new
    saved, auto.mem = auto.mem, new
    try:
        return auto.choose(observed), new
    finally:
        auto.mem = saved


def months(events: Sequence[Event], k: int, horizon: int) -> list[tuple[int, int]]:
    """Maximal step intervals ``[start, end)`` containing only events below level ``k``."""
    cuts = [e.t for e in events if e.k >= k]
    return _intervals(cuts, horizon)


def years(events: Sequence[Event], k: int, horizon: int) -> list[tuple[int, int]]:
    """Maximal intervals with only cancellations below ``k`` and shifts up to ``k``."""
    cuts = [e.t for e in events if (e.kind == "cancel" and e.k >= k) or (e.kind == "shift" and e.k > k)]
    return _intervals(cuts, horizon)


def _intervals(cuts, horizon):
    out, start = [], 0
    for t in sorted(set(cuts)):
        if t > start:
            out.append((start, t))
        start = t
    if horizon > start:
        out.append((start, horizon))
    return out


# -- adversaries ----------------------------------------------------------------


class _Simple:
    def __init__(self, player: int):
        if player not in (1, 2):
            raise InputError("player must be 1 or 2")
        self.player = player
        self.g: GameGraph | None = None

    def start(self, g: GameGraph, v0: str, seed: int = 0) -> None:
        self.g = g

    def observe(self, config: Configuration) -> None:
        pass


class FirstEdgeStrategy(_Simple):
    def choose(self, config: Configuration) -> Edge:
        return self.g.out_edges(config.vertex)[0]


class RandomStrategy(_Simple):
    """Uniform choice among outgoing edges; seeded for reproducibility."""

    def __init__(self, player: int, seed: int | None = None):
        super().__init__(player)
        self.seed = seed
        self.rng = random.Random(seed)

    def start(self, g: GameGraph, v0: str, seed: int = 0) -> None:
        super().start(g, v0, seed)
        self.rng = random.Random(seed if self.seed is None else self.seed)

    def choose(self, config: Configuration) -> Edge:
        return self.rng.choice(self.g.out_edges(config.vertex))


class CounterlessStrategy(_Simple):
    """One fixed edge per vertex, given by its weight (or the edge itself)."""

    def __init__(self, player: int, choice: Mapping[str, Sequence[int] | Edge]):
        super().__init__(player)
        self.choice = dict(choice)

    def choose(self, config: Configuration) -> Edge:
        want = self.choice.get(config.vertex)
        out = self.g.out_edges(config.vertex)
        if want is None:
            return out[0]
        for e in out:
            if e == want or e.weight == tuple(want if not isinstance(want, Edge) else want.weight):
                return e
        raise InputError(f"no edge of weight {want} at {config.vertex!r}")


class ScriptedStrategy(_Simple):
    """Plays the given destinations (or edges) in order, then repeats the list."""

    def __init__(self, player: int, moves: Sequence[str | Edge]):
        super().__init__(player)
        if not moves:
            raise InputError("script must be nonempty")
        self.moves = list(moves)
        self.i = 0

    def start(self, g: GameGraph, v0: str, seed: int = 0) -> None:
        super().start(g, v0, seed)
        self.i = 0

    def choose(self, config: Configuration) -> Edge:
        m = self.moves[self.i % len(self.moves)]
        self.i += 1
        for e in self.g.out_edges(config.vertex):
            if e == m or e.dst == m:
                return e
        raise InputError(f"scripted move {m!r} not available at {config.vertex!r}")


class FunctionStrategy(_Simple):
    """Positional-on-configuration strategy ``fn(g, config) -> Edge``."""

    def __init__(self, player: int, fn: Callable[[GameGraph, Configuration], Edge]):
        super().__init__(player)
        self.fn = fn

    def choose(self, config: Configuration) -> Edge:
        return self.fn(self.g, config)


# -- simulation -------------------------------------------------------------------


@dataclass
class SimulationReport:
    trace: list[Configuration]
    max_norm: int
    norms: list[int]
    events: list[Event]
    checks: dict
    failures: list
    counter_snapshots: list
    fallbacks: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures


def simulate(g: GameGraph, s1, s2, steps: int, seed: int = 0, v0: str | None = None,
             snapshot_every: int = 0) -> SimulationReport:
    """Play ``s1`` against ``s2`` for ``steps`` moves from ``v0`` at level 0."""
    if steps < 0:
        raise InputError("steps must be nonnegative")
    if v0 is None:
        v0 = g.vertices[0].id
    if v0 not in g:
        raise InputError(f"unknown start vertex {v0!r}")
    players = {1: s1, 2: s2}
    s1.start(g, v0, seed)
    s2.start(g, v0, seed + 1)
    cfg = Configuration(v0, zero(g.dimension))
    trace = [cfg]
    norms = [0]
    snaps = []
    s1.observe(cfg)
    s2.observe(cfg)
    for t in range(steps):
        e = players[g.owner(cfg.vertex)].choose(cfg)
        if e.src != cfg.vertex or e not in g.out_edges(cfg.vertex):
            raise InputError(f"strategy chose {e.label()} at {cfg.vertex!r}")
        cfg = Configuration(e.dst, vadd(cfg.level, e.weight))
        s1.observe(cfg)
        s2.observe(cfg)
        trace.append(cfg)
        norms.append(norm(cfg.level))
        if snapshot_every and (t + 1) % snapshot_every == 0:
            for s in (s1, s2):
                mem = getattr(s, "mem", None)
                if isinstance(mem, P1Memory):
                    snaps.append((t + 1, dict(mem.counters)))
    checks: dict = {}
    failures: list = []
    events: list = []
    fallbacks = 0
    for s in (s1, s2):
        log = getattr(s, "log", None)
        if isinstance(log, CheckLog):
            for k, v in log.counts.items():
                checks[k] = checks.get(k, 0) + v
            failures.extend(log.failures)
        events.extend(getattr(s, "events", []))
        fallbacks += getattr(s, "fallbacks", 0)
    return SimulationReport(trace, max(norms), norms, events, checks, failures, snaps, fallbacks)
