"""
Witnesses and progress measures
===============================

A one-player safety game: the player must keep playing ``a``.  We check a
constant strategy, annotate it with automaton states, and certify it with a
parity progress measure.  Then we break the measure and watch the checker
point at the offending edge.
"""

from dsynth import fixtures
from dsynth.annotation import annotate_tree, find_witness_annotation, is_witness
from dsynth.progress import check_measure, compute_measure
from dsynth.strategy import check_strategy, constant_strategy

game, spec = fixtures.dmask_game(), fixtures.safe_spec()

# A constant strategy is trivially uniform.
S = constant_strategy(game, ("a",))
print("uniform:", check_strategy(S, game) is None)

# The witness annotation refines S by the observer and automaton states.
w = find_witness_annotation(S, game, spec)
print("witness nodes:", len(w.strategy), "accepting:", is_witness(w)[0])

###############################################################################
# The measure exists exactly when every cycle is dominated by an even
# priority.  A liveness spec ("play b infinitely often") makes it interesting.

live = fixtures.often_b_spec()
alternate = fixtures.alternate_game()
from dsynth.solvers.one_player import solve_one_player  # noqa: E402

res = solve_one_player(alternate, live)
mu = compute_measure(res.witness)
for v in res.witness.strategy.nodes:
    print(v, res.witness.labels[v][1], mu[v])

###############################################################################
# A constant ``a`` strategy never plays b: no measure, and the lasso shows why.

bad = find_witness_annotation(constant_strategy(game, ("a",)), game, live)
print("constant a accepted by often-b:", bad is not None)

###############################################################################
# Unravelling pushes the annotation onto a finite tree, and the measure
# still checks.

tree = annotate_tree(S, game, spec, 3)
print("tree nodes:", len(tree.strategy), "measure ok:",
      check_measure(tree, compute_measure(tree)) is None)
