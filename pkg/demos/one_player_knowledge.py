"""
One player, hidden state
========================

The player sees nothing (a blind observer that only counts steps modulo 2)
but has to alternate ``a`` and ``b``.  The knowledge-set arena solves it, and
the result is cross-checked against brute-force search over small strategies.
"""

import random

from dsynth import fixtures
from dsynth.dstates import classify
from dsynth.generate import random_one_player
from dsynth.solvers.one_player import NotObservable, dstate_bound, solve_one_player
from dsynth.solvers.oracle import brute_force_oracle

game, spec = fixtures.alternate_game(), fixtures.alternate_spec()
res = solve_one_player(game, spec)
print(res.status, res.stats)
print("largest d-state:", classify(res.witness).max_dstate_size,
      "bound:", dstate_bound(game, spec))

###############################################################################
# A few random instances, solver against oracle.

rng = random.Random(3)
for _ in range(8):
    g, s = random_one_player(rng)
    try:
        verdict = solve_one_player(g, s).found
    except NotObservable:
        continue
    oracle = brute_force_oracle(g, s, 2) is not None
    print(f"solver={verdict!s:5}  oracle(<=2 nodes)={oracle!s:5}")
