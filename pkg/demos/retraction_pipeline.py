"""
Folding a tree strategy
=======================

Take the depth-4 unravelling of a winning strategy, group its nodes into
d-states (the nodes some player cannot tell apart), and compact each
isomorphism class with measure-monotone retractions.  The result is a small
finite strategy that is still a witness.
"""

from dsynth import fixtures
from dsynth.annotation import annotate_tree, is_witness
from dsynth.dstates import classify
from dsynth.progress import compute_measure
from dsynth.retraction import compact_all
from dsynth.solvers.one_player import solve_one_player
from dsynth.strategy import minimize

# Full observation, liveness objective: play b infinitely often.
game, spec = fixtures.full_game(), fixtures.often_b_spec()
res = solve_one_player(game, spec)
tree = annotate_tree(res.strategy, game, spec, 4, witness=res.witness)
mu = compute_measure(tree)

report = classify(tree, edges=False)
print(f"tree: {len(tree.strategy)} nodes, {len(report.dstates)} d-states, "
      f"{report.index} classes, largest class {report.max_class_size}")

###############################################################################
# Each round retracts every class onto its measure-minimal members.

folded, nu, log = compact_all(tree, mu)
for index, biggest, nodes in log:
    print(f"  classes={index:3d}  largest={biggest:3d}  nodes={nodes}")

print("still a witness:", is_witness(folded)[0])
print("behaviourally:", len(minimize(folded.strategy)), "nodes")
