"""Who wins on the two small example graphs, and why.

Run with ``python3 demos/01_worked_graphs.py``.
"""

from energygames.core import cycle_weights
from energygames.corpus import balance_choice, fig1, fig1_counterless, fig3
from energygames.oracle import self_covering_search
from energygames.solver import solve_arbitrary_credit, solve_bounding
from energygames.strategies import CounterlessStrategy, FunctionStrategy, simulate


def show(name, g, v0):
    print(f"== {name}: {len(g)} vertices, dimension {g.dimension}")
    print("   simple-cycle weights:", cycle_weights(g))
    e = solve_arbitrary_credit(g, v0)
    b = solve_bounding(g, v0)
    print(f"   energy game, some initial credit: Player {e.winner} ({e.method})")
    print(f"   bounding game:                    Player {b.winner} ({b.method})")


g1, g3 = fig1(), fig3()
show("balance graph", g1, "v0")
show("two-loop graph", g3, "vL")

print("\nPlayer 1 balances the first coordinate, Player 2 always takes the same edges:")
rep = simulate(g1, FunctionStrategy(1, balance_choice), CounterlessStrategy(2, fig1_counterless()), 6, v0="v0")
print("  ", " ".join(f"({c.vertex},{','.join(map(str, c.level))})" for c in rep.trace))

print("\nA self-covering tree proves Player 1 wins with enough credit:")
tree = self_covering_search(g1, "v0", 8)
print(f"   depth {tree.depth}, {len(tree.tree.leaves())} leaves")
print(tree.tree.render(2))

print("\nNo such tree exists on the two-loop graph; the bounded search gives up:")
print("  ", self_covering_search(g3, "vL", 10).verdict)
