"""The strategies behind the first-cycle reduction, played out.

Player 2 replays his first-cycle strategy on the path left after cutting
cycles, and the energy drifts away. Player 1's counter automaton keeps
the lossy game bounded, shifting and cancelling as counters fill up.
Test-only thresholds are used so that events fire within a short run.
"""

from collections import Counter

from energygames.corpus import balance_choice, fig1
from energygames.fcb import solve_fcb
from energygames.strategies import (
    CounterAutomatonStrategy,
    FunctionStrategy,
    LiftedP2Strategy,
    RandomStrategy,
    scaled_bounds,
    simulate,
)
from energygames.transforms import lossy

g = fig1()
lift = LiftedP2Strategy(solve_fcb(g, "v0").strategy)
rep = simulate(g, FunctionStrategy(1, balance_choice), lift, 1000, v0="v0")
print("Lifted Player 2 against the balancing Player 1, 1000 steps")
print("   max norm:", rep.max_norm)
print("   popped cycle weights:", Counter(lift.popped).most_common())

lg = lossy(g)
pack = scaled_bounds(lg)
auto = CounterAutomatonStrategy(solve_fcb(lg, "v0").strategy, pack)
rep = simulate(lg, auto, RandomStrategy(2, 11), 5000, seed=11, v0="v0")
print("\nCounter automaton on the lossy graph against a random Player 2, 5000 steps")
print(f"   soft bounds {dict(pack.U)}, slack {dict(pack.u)}")
print("   max norm:", rep.max_norm)
print("   events:", dict(Counter((e.kind, e.k) for e in rep.events)))
print("   checks:", rep.checks)
print("   failures:", len(rep.failures))
for e in rep.events[:5]:
    print("   ", e.line())
