import random

import pytest
from hypothesis import given, strategies as st

from dsynth.annotation import (AnnotatedStrategy, NoWitness, annotate_tree,
                               annotate_truncation, check_annotation,
                               find_witness_annotation, is_witness, relabel)
from dsynth.fixtures import (dmask_game, evenr_spec, full_game, often_b_spec, safe_spec)
from dsynth.game import ValidationError
from dsynth.generate import random_one_player, random_structure
from dsynth.solvers.oracle import outcome_accepted
from dsynth.strategy import DecisionStructure, check_strategy, constant_strategy


def test_constant_a_is_a_safety_witness():
    g = dmask_game()
    w = find_witness_annotation(constant_strategy(g, ("a",)), g, safe_spec())
    assert w is not None and len(w.strategy) == 1
    assert check_annotation(w) is None
    assert is_witness(w) == (True, None)


def test_constant_b_has_no_witness():
    g = dmask_game()
    assert find_witness_annotation(constant_strategy(g, ("b",)), g, safe_spec()) is None


def test_check_annotation_reports_kinds():
    g = dmask_game()
    S = constant_strategy(g, ("a",))
    ok = AnnotatedStrategy(S, {"v": (("q",), "s")}, g, safe_spec())
    assert check_annotation(ok) is None
    wrong_init = AnnotatedStrategy(S, {"v": (("q",), "bad")}, g, safe_spec())
    assert check_annotation(wrong_init).kind == "initial"
    with pytest.raises(ValidationError):
        check_annotation(AnnotatedStrategy(S, {"v": (("zz",), "s")}, g, safe_spec()))
    T = DecisionStructure(g.directions, {("v", "l"): "w", ("v", "r"): "w",
                                         ("w", "l"): "w", ("w", "r"): "w"},
                          {"v": ("a",), "w": ("a",)}, "v")
    run = AnnotatedStrategy(T, {"v": (("q",), "s"), "w": (("q",), "bad")}, g, safe_spec())
    assert check_annotation(run).kind == "run"


def test_lasso_reports_odd_cycle():
    g = full_game()
    S = constant_strategy(g, ("a",))
    a = AnnotatedStrategy(S, {"v": (("q",), "A")}, g, often_b_spec())
    ok, (stem, cycle) = is_witness(a)
    assert not ok and cycle == ["v"]


@given(st.integers(0, 100_000))
def test_witness_search_matches_outcome_brute_force(seed):
    rng = random.Random(seed)
    game, spec = random_one_player(rng, deterministic=rng.random() < 0.5)
    S = random_structure(rng, game, rng.randint(1, 3))
    w = find_witness_annotation(S, game, spec)
    assert (w is not None) == outcome_accepted(S, game, spec)
    if w is not None:
        assert check_annotation(w) is None and is_witness(w)[0]


def test_annotate_tree_and_truncation():
    g = full_game()
    S = constant_strategy(g, ("a",))
    T = annotate_tree(S, g, safe_spec(), 2)
    assert len(T.strategy) == 7 and check_annotation(T) is None
    with pytest.raises(NoWitness):
        annotate_tree(constant_strategy(g, ("b",)), g, safe_spec(), 2)
    # liveness: a truncation carries no obligations at its leaves
    U = annotate_truncation(constant_strategy(g, ("a",)), g, often_b_spec(), 3)
    assert check_annotation(U) is None and is_witness(U)[0]
    assert len(U.strategy) == 15


def test_relabel_is_bfs():
    g = full_game()
    T = annotate_tree(constant_strategy(g, ("a",)), g, safe_spec(), 1)
    R = relabel(T)
    assert R.strategy.nodes == ("n0", "n1", "n2")
    assert R.strategy.initial == "n0"
    assert check_annotation(R) is None
