"""
Two players with delayed information
====================================

Both players must echo Nature's direction from two rounds back, but Nature
may hold back each player's view of a move for one extra round.  The
window planner solves the game; the growth table shows that the d-states of
the strategy stay bounded, unlike those of a blind player.
"""

from dsynth import fixtures
from dsynth.solvers.delay import solve_delay
from dsynth.solvers.growth import diagnose_growth

game = fixtures.delay1_game(1)
for lag in (1, 2):
    spec = fixtures.match_spec(lag, game)
    res = solve_delay(game, spec)
    print(f"lag {lag}: {res.status}", res.stats)

spec = fixtures.match_spec(2, game)
res = solve_delay(game, spec)

###############################################################################
# Per-depth d-states of the winning strategy's unravelling.

print("depth  d-states  max size")
for row in diagnose_growth(game, spec, 5, strategy=res.strategy, classes=False):
    print(f"{row.depth:5d}  {row.dstates:8d}  {row.max_size:8d}")

###############################################################################
# For contrast: a blind player's knowledge grows with every round.

blind = diagnose_growth(fixtures.blind_game(), fixtures.safe_spec(), 4, classes=False)
print("blind max sizes:", [row.max_size for row in blind])
