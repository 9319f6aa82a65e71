import pytest

from dsynth.annotation import annotate_tree
from dsynth.dot import annotated_dot, quotient_dot, strategy_dot
from dsynth.dstates import classify
from dsynth.fixtures import dmask_game, full_game, safe_spec
from dsynth.progress import compute_measure
from dsynth.strategy import constant_strategy


def test_strategy_dot_draws_uniformity():
    g = dmask_game()
    t = annotate_tree(constant_strategy(g, ("a",)), g, safe_spec(), 1)
    out = strategy_dot(t.strategy, g)
    assert out.startswith("digraph \"strategy\" {") and out.rstrip().endswith("}")
    assert "style=dashed" in out


def test_annotated_dot_has_labels_and_measures():
    g = full_game()
    t = annotate_tree(constant_strategy(g, ("a",)), g, safe_spec(), 1)
    out = annotated_dot(t, compute_measure(t))
    assert out.count("mu=") == 3


def test_quotient_has_one_node_per_class():
    g = dmask_game()
    t = annotate_tree(constant_strategy(g, ("a",)), g, safe_spec(), 3)
    report = classify(t)
    out = quotient_dot(t, report)
    assert sum(1 for line in out.splitlines() if "[label=" in line and "->" not in line) \
        == report.index


@pytest.mark.slow
def test_delay_quotient_matches_classify_index():
    from dsynth.fixtures import delay1_game, match_spec
    from dsynth.solvers.delay import solve_delay
    g = delay1_game(1)
    spec = match_spec(2, g)
    res = solve_delay(g, spec)
    t = annotate_tree(res.strategy, g, spec, 4, witness=res.witness)
    report = classify(t)
    out = quotient_dot(t, report)
    nodes = [line for line in out.splitlines() if "[label=" in line and "->" not in line]
    assert len(nodes) == report.index
