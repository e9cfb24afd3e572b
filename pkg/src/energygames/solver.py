"""Decision procedures for bounding games and energy games.

Two routes are available. The box route solves a safety game on the
finite arena of configurations whose levels stay inside a box; it is
sound for Player 1 at any box size and for Player 2 only at the
hypercube bound ``B``. The first-cycle route is exact in both directions.
Given-credit answers for Player 2 can additionally be certified by a
forced-violation proof (Player 2 drives some coordinate below the credit
within a bounded number of steps).
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Sequence

from .core import Edge, GameGraph, edge_norm, leq, validate, vadd
from .errors import BudgetExceeded, InputError
from .fcb import DEFAULT_FCB_BUDGET, solve_fcb
from .strategies import bounds
from .transforms import lossy

DEFAULT_BOX_BUDGET = 400_000
SINK = ("_|_", None)


@dataclass
class BoxSolution:
    """Safety game on ``(vertex, level)`` states with ``lower <= level <= upper``."""

    winner: int
    lower: tuple[int, ...]
    upper: tuple[int, ...]
    states: int
    attractor: frozenset
    p1_strategy: dict
    p2_strategy: dict

    def p1_move(self, vertex: str, level: Sequence[int]) -> Edge:
        return self.p1_strategy[(vertex, tuple(level))]


def solve_safety_box(g: GameGraph, v0: str, lower: Sequence[int], upper: Sequence[int],
                     budget: int = DEFAULT_BOX_BUDGET) -> BoxSolution:
    """Player 1 wins iff she can keep every level inside ``[lower, upper]`` forever.

    Only states reachable from ``(v0, 0)`` are built. Leaving the box leads
    to a sink owned by Player 2's target; the attractor to the sink is
    computed by the usual backward fixpoint with successor counters.
    """
    d = g.dimension
    lower, upper = tuple(lower), tuple(upper)
    if len(lower) != d or len(upper) != d:
        raise InputError("box bounds must have the game dimension")
    if not (leq(lower, (0,) * d) and leq((0,) * d, upper)):
        raise InputError("the box must contain the zero level")
    if v0 not in g:
        raise InputError(f"unknown start vertex {v0!r}")
    start = (v0, (0,) * d)
    succ: dict = {}
    pred: dict = {SINK: []}
    queue = deque([start])
    succ[start] = None
    while queue:
        s = queue.popleft()
        v, a = s
        out = []
        for e in g.out_edges(v):
            b = vadd(a, e.weight)
            t = (e.dst, b) if leq(lower, b) and leq(b, upper) else SINK
            out.append((e, t))
            pred.setdefault(t, []).append(s)
            if t is not SINK and t not in succ:
                succ[t] = None
                if len(succ) > budget:
                    raise BudgetExceeded(f"box arena exceeds {budget} states")
                queue.append(t)
        succ[s] = out
    # attractor of the sink for Player 2
    remaining = {s: len(out) for s, out in succ.items()}
    attr = {SINK}
    queue = deque([SINK])
    while queue:
        t = queue.popleft()
        for s in pred.get(t, ()):
            if s in attr:
                continue
            if g.owner(s[0]) == 2:
                attr.add(s)
                queue.append(s)
            else:
                remaining[s] -= 1
                if remaining[s] == 0:
                    attr.add(s)
                    queue.append(s)
    p1: dict = {}
    p2: dict = {}
    for s, out in succ.items():
        owner = g.owner(s[0])
        if owner == 1 and s not in attr:
            p1[s] = next(e for e, t in out if t not in attr)
        elif owner == 2 and s in attr:
            p2[s] = next(e for e, t in out if t in attr)
    winner = 2 if start in attr else 1
    return BoxSolution(winner, lower, upper, len(succ), frozenset(attr - {SINK}), p1, p2)


@dataclass
class SolveOptions:
    mode: str = "auto"  # fcb | box | auto
    cap: int | None = None  # first cap of the deepening schedule
    max_cap: int | None = None
    deepen: bool = True
    box_budget: int = DEFAULT_BOX_BUDGET
    fcb_budget: int = DEFAULT_FCB_BUDGET
    violation_depth: int = 64
    universe: Any = None


@dataclass
class SolveResult:
    winner: int
    certified: bool
    method: str
    cap_used: int | None = None
    witness: Any = field(default=None, repr=False)
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "winner": self.winner,
            "certified": self.certified,
            "method": self.method,
            "cap_used": None if self.cap_used is None else str(self.cap_used),
            "witness_ref": type(self.witness).__name__ if self.witness is not None else None,
            "notes": list(self.notes),
        }


def _require_valid(g: GameGraph, v0: str) -> None:
    problems = validate(g)
    if problems:
        raise InputError("invalid game graph: " + "; ".join(problems))
    if v0 not in g:
        raise InputError(f"unknown start vertex {v0!r}")


def cap_schedule(g: GameGraph, opts: SolveOptions) -> list[int]:
    """Doubling caps from ``|V| * ||E||`` (or ``opts.cap``) up to ``opts.max_cap``."""
    c0 = opts.cap if opts.cap is not None else len(g) * edge_norm(g)
    if c0 < 0:
        raise InputError("cap must be nonnegative")
    if not opts.deepen:
        return [c0]
    top = opts.max_cap if opts.max_cap is not None else 16 * max(c0, 1)
    caps = [c0]
    while caps[-1] < top:
        caps.append(min(top, max(1, caps[-1] * 2)))
    return caps


def _box_deepening(g: GameGraph, v0: str, lower_of, opts: SolveOptions) -> SolveResult:
    B = bounds(g).B
    last = None
    notes: list[str] = []
    for cap in cap_schedule(g, opts):
        lower = lower_of(cap)
        upper = (cap,) * g.dimension
        try:
            sol = solve_safety_box(g, v0, lower, upper, opts.box_budget)
        except BudgetExceeded as exc:
            if last is None:
                raise
            notes.append(f"stopped deepening at cap {cap}: {exc}")
            break
        last = (cap, sol)
        if sol.winner == 1:
            return SolveResult(1, True, f"box({cap})", cap, sol, notes)
    cap, sol = last
    return SolveResult(2, cap >= B, f"box({cap})", cap, sol, notes)


def solve_bounding(g: GameGraph, v0: str, opts: SolveOptions | None = None) -> SolveResult:
    """Winner of the bounding game (Player 1 keeps all levels bounded)."""
    opts = opts or SolveOptions()
    _require_valid(g, v0)
    mode = opts.mode
    if mode not in ("fcb", "box", "auto"):
        raise InputError(f"unknown mode {mode!r}")
    if mode in ("fcb", "auto"):
        try:
            res = solve_fcb(g, v0, opts.universe, opts.fcb_budget)
            return SolveResult(res.winner, True, "fcb", None, res.strategy,
                               [f"{res.states} states, {res.universe_size} colours"])
        except BudgetExceeded:
            if mode == "fcb":
                raise
    d = g.dimension
    return _box_deepening(g, v0, lambda c: (-c,) * d, opts)


def solve_arbitrary_credit(g: GameGraph, v0: str, opts: SolveOptions | None = None) -> SolveResult:
    """Winner of the energy game when Player 1 may pick any initial credit."""
    return solve_bounding(lossy(g), v0, opts)


def forced_violation_search(g: GameGraph, v0: str, credit: Sequence[int], depth: int):
    """Depth-limited proof that Player 2 forces ``credit + level`` negative.

    Returns the number of steps within which the violation is forced, or
    ``None`` if no such proof of length ``<= depth`` exists. A returned
    value is a sound certificate that Player 2 wins the given-credit game.
    """
    d = g.dimension
    credit = tuple(credit)
    memo: dict = {}

    def forced(v, a, n):
        # smallest m <= n with a forced violation in m steps, else None
        key = (v, a)
        hit = memo.get(key)
        if hit is not None:
            lo, hi = hit  # forced within lo; not forced within hi
            if lo is not None and lo <= n:
                return lo
            if hi is not None and hi >= n:
                return None
        if n == 0:
            return None
        results = []
        for e in g.out_edges(v):
            b = vadd(a, e.weight)
            if any(b[i] + credit[i] < 0 for i in range(d)):
                results.append(1)
            else:
                r = forced(e.dst, b, n - 1)
                results.append(None if r is None else r + 1)
        if g.owner(v) == 2:
            found = [r for r in results if r is not None]
            out = min(found) if found else None
        else:
            out = None if any(r is None for r in results) else max(results)
        lo, hi = memo.get(key, (None, None))
        if out is None:
            memo[key] = (lo, n if hi is None else max(hi, n))
        else:
            memo[key] = (out if lo is None else min(lo, out), hi)
        return out

    for n in range(1, depth + 1):
        r = forced(v0, (0,) * d, n)
        if r is not None:
            return r
    return None


def solve_given_credit(g: GameGraph, v0: str, credit: Sequence[int],
                       opts: SolveOptions | None = None) -> SolveResult:
    """Winner of the energy game with initial credit ``credit``.

    Box over ``lossy(g)`` with levels in ``[-credit, cap]`` under a doubling
    cap; Player-2 answers are then checked by a forced-violation search,
    which certifies them when it succeeds.
    """
    opts = opts or SolveOptions()
    _require_valid(g, v0)
    credit = tuple(credit)
    if len(credit) != g.dimension or any(c < 0 for c in credit):
        raise InputError(f"credit {credit} must be a nonnegative {g.dimension}-vector")
    res = _box_deepening(lossy(g), v0, lambda c: tuple(-x for x in credit), opts)
    if res.winner == 2 and not res.certified:
        steps = forced_violation_search(g, v0, credit, opts.violation_depth)
        if steps is not None:
            res.certified = True
            res.method += "+violation"
            res.notes.append(f"Player 2 forces a negative level within {steps} steps")
    return res


@dataclass
class ParetoResult:
    minimal: list[tuple[int, ...]]
    complete: bool
    probes: int
    results: dict = field(repr=False, default_factory=dict)


def pareto_limit(g: GameGraph, v0: str, search_norm: int,
                 opts: SolveOptions | None = None) -> ParetoResult:
    """Minimal winning credits of norm at most ``search_norm``.

    Credits are probed by increasing coordinate sum; anything above a known
    winner is skipped by monotonicity. ``complete`` is false when some
    probe ended in an uncertified Player-2 answer.
    """
    if search_norm < 0:
        raise InputError("search_norm must be nonnegative")
    d = g.dimension
    cands = sorted(itertools.product(range(search_norm + 1), repeat=d), key=lambda c: (sum(c), c))
    winners: list[tuple[int, ...]] = []
    results: dict = {}
    complete = True
    for c in cands:
        if any(leq(w, c) for w in winners):
            continue
        r = solve_given_credit(g, v0, c, opts)
        results[c] = r
        if r.winner == 1:
            winners.append(c)
        elif not r.certified:
            complete = False
    return ParetoResult(winners, complete, len(results), results)
