"""Three independent routes on random small games, compared row by row.

The first-cycle solver on the lossy graph, the box safety game and the
self-covering search must never contradict each other.
"""

import sys

from energygames.oracle import cross_check, random_game

n = int(sys.argv[1]) if len(sys.argv) > 1 else 20
bad = 0
for seed in range(n):
    g = random_game(1 + seed % 3, 2, 1, seed=seed)
    rep = cross_check(g, g.vertices[0].id)
    bad += not rep.consistent
    print(f"seed {seed:3d} |V|={len(g)}  {rep.row()}")
print(f"\n{n} games, {bad} contradictions")
