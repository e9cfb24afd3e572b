"""Independent checks: self-covering trees, random instances and route comparison."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .core import Edge, GameGraph, leq, player2_only_cycle_edges, validate, vadd
from .errors import BudgetExceeded, InputError
from .solver import SolveOptions, _box_deepening, forced_violation_search
from .fcb import solve_fcb
from .transforms import lossy


@dataclass
class TreeNode:
    vertex: str
    level: tuple[int, ...]
    edge: Edge | None = None
    children: list["TreeNode"] = field(default_factory=list)
    covered_by: "TreeNode | None" = field(default=None, repr=False)

    def leaves(self) -> list["TreeNode"]:
        if not self.children:
            return [self]
        return [leaf for c in self.children for leaf in c.leaves()]

    def depth(self) -> int:
        return 1 + max((c.depth() for c in self.children), default=0) if self.children else 0

    def render(self, indent: int = 0) -> str:
        lvl = ",".join(map(str, self.level))
        mark = ""
        if self.covered_by is not None:
            mark = f"  >= ({self.covered_by.vertex},{','.join(map(str, self.covered_by.level))})"
        lines = ["  " * indent + f"({self.vertex},{lvl}){mark}"]
        lines += [c.render(indent + 1) for c in self.children]
        return "\n".join(lines)


@dataclass
class CoveringResult:
    """``win1`` with a tree, or ``inconclusive``; never a Player-2 verdict."""

    verdict: str
    tree: TreeNode | None = None
    depth: int = 0
    nodes: int = 0

    @property
    def win1(self) -> bool:
        return self.verdict == "win1"


def self_covering_search(g: GameGraph, v0: str, depth: int,
                         node_budget: int = 2_000_000) -> CoveringResult:
    """Iterative-deepening search for a self-covering strategy tree.

    Every leaf must repeat the vertex of an ancestor at a componentwise
    smaller or equal level. Player 1 picks one child, Player 2 branches on
    all edges. The returned tree has minimal depth and, among those, the
    fewest leaves. Success certifies that Player 1 wins the energy game for
    some initial credit. Budget exhaustion is reported as inconclusive.
    """
    if v0 not in g:
        raise InputError(f"unknown start vertex {v0!r}")
    if depth < 0:
        raise InputError("depth must be nonnegative")
    nodes = 0

    def grow(node: TreeNode, branch: list[TreeNode], left: int) -> int | None:
        # number of leaves of the smallest covering subtree, or None
        nonlocal nodes
        nodes += 1
        if nodes > node_budget:
            raise BudgetExceeded("self-covering search budget exceeded")
        for anc in branch:
            if anc.vertex == node.vertex and leq(anc.level, node.level):
                node.covered_by = anc
                return 1
        if left == 0:
            return None
        branch = branch + [node]
        mine = g.owner(node.vertex) == 1
        best, total, kids = None, 0, []
        for e in g.out_edges(node.vertex):
            child = TreeNode(e.dst, vadd(node.level, e.weight), e)
            size = grow(child, branch, left - 1)
            if mine:
                if size is not None and (best is None or size < best[0]):
                    best = (size, child)
            else:
                if size is None:
                    return None
                total += size
                kids.append(child)
        if mine:
            if best is None:
                return None
            node.children = [best[1]]
            return best[0]
        node.children = kids
        return total

    total = 0
    for n in range(depth + 1):
        root = TreeNode(v0, (0,) * g.dimension)
        nodes = 0
        try:
            ok = grow(root, [], n) is not None
        except BudgetExceeded:
            return CoveringResult("inconclusive", None, n, total + nodes)
        total += nodes
        if ok:
            return CoveringResult("win1", root, n, total)
    return CoveringResult("inconclusive", None, depth, total)


def random_game(nv: int, d: int, wmax: int, p1_fraction: float | Fraction = Fraction(1, 2),
                seed: int = 0, max_out: int = 3) -> GameGraph:
    """Seeded random valid game with ``nv`` vertices and ``||E|| == wmax``.

    Each vertex gets 1..``max_out`` outgoing edges. Player-2-only cycles
    are removed by handing one of their vertices to Player 1, so the
    vertex count is preserved.
    """
    if nv < 1 or d < 1 or wmax < 1 or max_out < 1:
        raise InputError("nv, d, wmax and max_out must be positive")
    if not 0 <= p1_fraction <= 1:
        raise InputError("p1_fraction must lie in [0, 1]")
    rng = random.Random(seed)
    ids = [f"v{i}" for i in range(nv)]
    owner = {v: 1 if rng.random() < p1_fraction else 2 for v in ids}
    edges = []
    for v in ids:
        for _ in range(rng.randint(1, max_out)):
            w = tuple(rng.randint(-wmax, wmax) for _ in range(d))
            edges.append((v, w, rng.choice(ids)))
    # pin the norm to exactly wmax
    src, w, dst = edges[0]
    w = list(w)
    w[rng.randrange(d)] = rng.choice((-wmax, wmax))
    edges[0] = (src, tuple(w), dst)
    while True:
        g = GameGraph.build(d, owner, edges)
        bad = player2_only_cycle_edges(g)
        if not bad:
            break
        owner[min(e.src for e in bad)] = 1
    problems = validate(g)
    if problems:
        raise InputError("generated an invalid game: " + "; ".join(problems))
    return g


@dataclass
class CrossCheckReport:
    v0: str
    fcb_lossy: int | None
    box_lossy: int | None
    box_certified: bool
    covering: str
    contradictions: list[str]
    notes: list[str] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return not self.contradictions

    def row(self) -> str:
        box = "-" if self.box_lossy is None else f"{self.box_lossy}{'' if self.box_certified else '?'}"
        return (f"v0={self.v0} fcb={self.fcb_lossy} box={box} covering={self.covering} "
                f"{'ok' if self.consistent else 'CONTRADICTION: ' + '; '.join(self.contradictions)}")


def cross_check(g: GameGraph, v0: str, depth: int = 8, opts: SolveOptions | None = None) -> CrossCheckReport:
    """Compare the first-cycle route, the box route and the covering oracle.

    All three decide the arbitrary-credit energy game on ``g``. A
    contradiction is any pair of certified answers that disagree.
    """
    opts = opts or SolveOptions()
    notes: list[str] = []
    lg = lossy(g)
    fcb = None
    try:
        fcb = solve_fcb(lg, v0, opts.universe, opts.fcb_budget).winner
    except BudgetExceeded as exc:
        notes.append(f"fcb: {exc}")
    box = None
    box_cert = False
    try:
        d = g.dimension
        r = _box_deepening(lg, v0, lambda c: (-c,) * d, opts)
        box, box_cert = r.winner, r.certified
    except BudgetExceeded as exc:
        notes.append(f"box: {exc}")
    cov = self_covering_search(g, v0, depth)
    contradictions = []
    if fcb == 2 and cov.win1:
        contradictions.append("fcb says Player 2 but a self-covering tree exists")
    if fcb == 2 and box == 1:
        contradictions.append("fcb says Player 2 but the box keeps Player 1 safe")
    if fcb == 1 and box == 2 and box_cert:
        contradictions.append("fcb says Player 1 but the certified box says Player 2")
    return CrossCheckReport(v0, fcb, box, box_cert, cov.verdict, contradictions, notes)


def confirm_loss(g: GameGraph, v0: str, credit, depth: int = 64) -> bool:
    """True when Player 2 provably drives ``credit`` negative within ``depth`` steps."""
    return forced_violation_search(g, v0, credit, depth) is not None
