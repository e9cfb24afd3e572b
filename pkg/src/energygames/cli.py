"""Command-line front end.

Every result is a JSON document with ``format: 1`` and a ``manifest``
recording the command, its arguments, the input digest, seed, budgets and
tool version, so a run can be replayed. Exit codes: 0 success, 2 input
error, 3 budget exceeded, 4 falsification or contradiction.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from typing import Sequence

from . import __version__
from .core import GameGraph, normalize_cycles, validate
from .corpus import balance_choice
from .errors import BudgetExceeded, EnergyGameError, FalsificationError, InputError
from .fcb import solve_fcb
from .geometry import Subspace, enumerate_m_open_halfspaces, enumerate_perfect_halfspaces
from .io import dumps_game, loads_game, to_dot
from .oracle import cross_check, random_game
from .solver import (
    SolveOptions,
    pareto_limit,
    solve_arbitrary_credit,
    solve_bounding,
    solve_given_credit,
)
from .strategies import (
    CounterAutomatonStrategy,
    CounterlessStrategy,
    FirstEdgeStrategy,
    FunctionStrategy,
    LiftedP2Strategy,
    RandomStrategy,
    ScriptedStrategy,
    bounds,
    scaled_bounds,
    simulate,
)
from .transforms import capped_chain, lossy

EXIT_OK, EXIT_INPUT, EXIT_BUDGET, EXIT_FALSIFIED = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _vector(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace("(", "").replace(")", "").split(","))
    except ValueError as exc:
        raise InputError(f"bad vector {text!r}") from exc


def _read(path: str) -> tuple[str, str]:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    return text, hashlib.sha256(text.encode("utf-8")).hexdigest()


def _manifest(args, digest: str | None, budgets: dict | None = None) -> dict:
    flags = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "command")}
    return {
        "command": args.command,
        "flags": {k: (list(v) if isinstance(v, tuple) else v) for k, v in flags.items()},
        "input_sha256": digest,
        "seed": getattr(args, "seed", None),
        "budgets": budgets or {},
        "version": __version__,
    }


def _emit(doc: dict, out=None) -> None:
    out = out or sys.stdout
    out.write(json.dumps({"format": 1, **doc}, indent=2, default=str) + "\n")


def _load(args) -> tuple[GameGraph, str]:
    text, digest = _read(args.game)
    g = loads_game(text)
    if getattr(args, "normalize", False):
        g = normalize_cycles(g)
    return g, digest


def _start(g: GameGraph, args) -> str:
    v0 = args.v0 if args.v0 is not None else g.vertices[0].id
    if v0 not in g:
        raise InputError(f"unknown start vertex {v0!r}")
    return v0


def _opts(args) -> SolveOptions:
    return SolveOptions(
        mode=args.mode,
        cap=args.cap,
        max_cap=args.max_cap,
        deepen=not args.no_deepen,
        box_budget=args.box_budget,
        fcb_budget=args.fcb_budget,
    )


# -- subcommands -------------------------------------------------------------------


def cmd_solve(args) -> int:
    g, digest = _load(args)
    v0 = _start(g, args)
    opts = _opts(args)
    if args.credit is not None:
        game = "energy-given-credit"
        res = solve_given_credit(g, v0, _vector(args.credit), opts)
    elif args.energy:
        game = "energy-arbitrary-credit"
        res = solve_arbitrary_credit(g, v0, opts)
    else:
        game = "bounding"
        res = solve_bounding(g, v0, opts)
    doc = {"game": game, "v0": v0, **res.to_dict()}
    if args.dump_strategy and res.method == "fcb":
        doc["strategy"] = res.witness.dump().splitlines()
    _emit({**doc, "manifest": _manifest(args, digest, vars(opts) | {"universe": None})})
    return EXIT_OK


def cmd_pareto(args) -> int:
    g, digest = _load(args)
    v0 = _start(g, args)
    opts = _opts(args)
    res = pareto_limit(g, v0, args.max_norm, opts)
    _emit({
        "v0": v0,
        "minimal": [list(c) for c in res.minimal],
        "complete": res.complete,
        "probes": res.probes,
        "manifest": _manifest(args, digest, vars(opts) | {"universe": None}),
    })
    return EXIT_OK


def _strategy(spec: str, player: int, g: GameGraph, v0: str, seed: int):
    name, _, arg = spec.partition(":")
    if name == "random":
        return RandomStrategy(player, seed if not arg else int(arg))
    if name == "first":
        return FirstEdgeStrategy(player)
    if name == "counterless":
        choice = {}
        for part in filter(None, arg.split(";")):
            v, _, w = part.partition("=")
            choice[v] = _vector(w)
        return CounterlessStrategy(player, choice)
    if name == "script":
        return ScriptedStrategy(player, [m for m in arg.split(",") if m])
    if name == "balance":
        coord = int(arg) if arg else 0
        return FunctionStrategy(player, lambda gg, c: balance_choice(gg, c, coord))
    if name == "lift":
        if player != 2:
            raise InputError("the cycle-cutting lift is a Player-2 strategy")
        res = solve_fcb(g, v0)
        if res.winner != 2:
            raise InputError("Player 2 does not win the first-cycle game here")
        return LiftedP2Strategy(res.strategy)
    if name == "auto":
        if player != 1:
            raise InputError("the counter automaton is a Player-1 strategy")
        res = solve_fcb(g, v0)
        pack = bounds(g)
        if arg.startswith(("scaled", "hard")):
            kind, _, r = arg.partition("=")
            pack = scaled_bounds(g, int(r) if r else None, hard=kind == "hard")
        return CounterAutomatonStrategy(res.strategy, pack, strict=False)
    raise InputError(f"unknown strategy spec {spec!r}")


def cmd_simulate(args) -> int:
    g, digest = _load(args)
    v0 = _start(g, args)
    s1 = _strategy(args.p1, 1, g, v0, args.seed)
    s2 = _strategy(args.p2, 2, g, v0, args.seed + 1)
    rep = simulate(g, s1, s2, args.steps, seed=args.seed, v0=v0)
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            for t, c in enumerate(rep.trace):
                fh.write(f"{t} {c.vertex} {' '.join(map(str, c.level))}\n")
    _emit({
        "v0": v0,
        "steps": args.steps,
        "final": {"vertex": rep.trace[-1].vertex, "level": list(rep.trace[-1].level)},
        "max_norm": rep.max_norm,
        "checks": rep.checks,
        "failures": [f"{n}: {d}" for n, d in rep.failures],
        "fallbacks": rep.fallbacks,
        "events": [e.line() for e in rep.events],
        "manifest": _manifest(args, digest),
    })
    return EXIT_OK


def cmd_bounds(args) -> int:
    g, digest = _load(args)
    pack = bounds(g)

    def big(x: int) -> dict:
        return {"value": str(x), "digits": len(str(x))}

    _emit({
        "M": pack.M,
        "B": big(pack.B),
        "U": {str(k): big(v) for k, v in pack.U.items()},
        "u": {str(k): big(v) for k, v in pack.u.items()},
        "S": {str(k): big(v) for k, v in pack.S.items()},
        "L": {str(k): big(v) for k, v in pack.L.items()},
        "manifest": _manifest(args, digest),
    })
    return EXIT_OK


def cmd_transform(args) -> int:
    g, digest = _load(args)
    if args.cap is not None:
        if args.credit is None:
            raise InputError("--cap needs --credit")
        g = capped_chain(g, _vector(args.credit), args.cap)
    elif args.lossy:
        g = lossy(g)
    else:
        raise InputError("choose --lossy or --cap with --credit")
    sys.stdout.write(dumps_game(g) + "\n")
    return EXIT_OK


def cmd_enumerate(args) -> int:
    if args.open:
        items = enumerate_m_open_halfspaces(args.m, Subspace.full(args.dim))
    else:
        items = enumerate_perfect_halfspaces(args.m, args.dim)
    for h in items:
        sys.stdout.write(h.encode() + "\n")
    sys.stderr.write(f"{len(items)} items\n")
    return EXIT_OK


def cmd_crosscheck(args) -> int:
    games = []
    digest = None
    if args.corpus.startswith("random"):
        parts = args.corpus.split(":")
        n = int(parts[1]) if len(parts) > 1 else 50
        nv = int(parts[2]) if len(parts) > 2 else 3
        d = int(parts[3]) if len(parts) > 3 else 2
        wmax = int(parts[4]) if len(parts) > 4 else 1
        for i in range(n):
            nvi = 1 + (args.seed + i) % nv
            games.append((f"random#{i}", random_game(nvi, d, wmax, seed=args.seed + i)))
    else:
        text, digest = _read(args.corpus)
        games.append((args.corpus, loads_game(text)))
    rows = []
    bad = 0
    for name, g in games:
        v0 = args.v0 if args.v0 is not None and args.v0 in g else g.vertices[0].id
        rep = cross_check(g, v0, args.depth)
        bad += not rep.consistent
        rows.append(f"{name} {rep.row()}")
        sys.stderr.write(rows[-1] + "\n")
    _emit({
        "instances": len(rows),
        "contradictions": bad,
        "rows": rows,
        "manifest": _manifest(args, digest),
    })
    return EXIT_FALSIFIED if bad else EXIT_OK


def cmd_export_dot(args) -> int:
    g, _ = _load(args)
    sys.stdout.write(to_dot(g))
    return EXIT_OK


def cmd_validate(args) -> int:
    text, digest = _read(args.game)
    g = loads_game(text)
    problems = validate(g)
    _emit({"ok": not problems, "violations": problems, "manifest": _manifest(args, digest)})
    return EXIT_INPUT if problems else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="energygames", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def game_cmd(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("game", help="game file (JSON)")
        sp.add_argument("--v0", help="start vertex (default: first vertex by id)")
        sp.add_argument("--normalize", action="store_true", help="split Player-2-only cycles first")
        sp.set_defaults(func=func)
        return sp

    def solver_flags(sp):
        sp.add_argument("--mode", choices=["fcb", "box", "auto"], default="auto")
        sp.add_argument("--cap", type=int, help="first cap of the box schedule")
        sp.add_argument("--max-cap", type=int)
        sp.add_argument("--no-deepen", action="store_true")
        sp.add_argument("--box-budget", type=int, default=SolveOptions.box_budget)
        sp.add_argument("--fcb-budget", type=int, default=SolveOptions.fcb_budget)

    sp = game_cmd("solve", cmd_solve, "decide a bounding or energy game")
    solver_flags(sp)
    sp.add_argument("--credit", help="given initial credit, e.g. 2,1")
    sp.add_argument("--energy", action="store_true", help="energy game with arbitrary credit")
    sp.add_argument("--deepen", action="store_true", help="accepted for clarity; deepening is the default")
    sp.add_argument("--dump-strategy", action="store_true")

    sp = game_cmd("pareto", cmd_pareto, "minimal winning initial credits")
    solver_flags(sp)
    sp.add_argument("--max-norm", type=int, required=True)

    sp = game_cmd("simulate", cmd_simulate, "play two strategies against each other")
    sp.add_argument("--steps", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--p1", default="random",
                    help="random[:seed] | first | balance[:coord] | counterless:v=w;.. | script:v,.. | auto[:scaled[=r]|:hard[=r]]")
    sp.add_argument("--p2", default="random", help="as --p1, plus lift")
    sp.add_argument("--trace", help="write one configuration per line to this file")

    game_cmd("bounds", cmd_bounds, "exact bound values")

    sp = game_cmd("transform", cmd_transform, "lossy or capped-chain graph")
    sp.add_argument("--lossy", action="store_true")
    sp.add_argument("--cap", type=int)
    sp.add_argument("--credit")

    sp = sub.add_parser("enumerate", help="list M-generated (perfect) half-spaces")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--dim", type=int, required=True)
    sp.add_argument("--open", action="store_true", help="open half-spaces of Q^dim instead")
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("crosscheck", help="compare solving routes with the oracle")
    sp.add_argument("--corpus", default="random:50", help="random[:n[:nv[:d[:wmax]]]] or a game file")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--depth", type=int, default=8)
    sp.add_argument("--v0")
    sp.set_defaults(func=cmd_crosscheck)

    game_cmd("export-dot", cmd_export_dot, "Graphviz rendering")
    game_cmd("validate", cmd_validate, "check the standing assumptions")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except InputError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT
    except BudgetExceeded as exc:
        sys.stderr.write(f"budget exceeded: {exc}\n")
        return EXIT_BUDGET
    except FalsificationError as exc:
        sys.stderr.write(f"falsification: {exc}\n")
        return EXIT_FALSIFIED
    except EnergyGameError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
