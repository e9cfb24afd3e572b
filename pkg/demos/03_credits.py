"""Initial credits: a single query, the minimal winning credits, the exact bounds."""

from energygames.corpus import fig1, fig3
from energygames.solver import pareto_limit, solve_given_credit
from energygames.strategies import bounds

g1 = fig1()
for credit in [(2, 1), (0, 0), (1, 1)]:
    r = solve_given_credit(g1, "v0", credit)
    print(f"credit {credit}: Player {r.winner} wins, certified={r.certified}, via {r.method}")

p = pareto_limit(g1, "v0", 4)
print("\nminimal winning credits up to norm 4:", p.minimal, f"({p.probes} probes)")
print("two-loop graph:", pareto_limit(fig3(), "vL", 3).minimal)

b = bounds(g1)
print(f"\nhypercube bound B has {len(str(b.B))} digits;",
      "soft bounds have", {k: len(str(v)) for k, v in b.U.items()}, "digits")
