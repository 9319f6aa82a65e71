import random

import pytest
from hypothesis import given, strategies as st

from dsynth.fixtures import blind_game, dmask_game, evenr_game, full_game
from dsynth.game import ValidationError
from dsynth.generate import random_game, random_structure
from dsynth.strategy import (DecisionStructure, NonUniform, check_strategy,
                             compute_uniformity, constant_strategy, histories, minimize,
                             project_private, trace, unravel)
from dsynth.game import run_mealy


def _react(game):
    """Play ``a`` after ``l`` and ``b`` after ``r``."""
    return DecisionStructure(game.directions,
                             {("x", "l"): "x", ("x", "r"): "y",
                              ("y", "l"): "x", ("y", "r"): "y"},
                             {"x": ("a",), "y": ("b",)}, "x")


def test_pruning_and_totality():
    g = full_game()
    S = DecisionStructure(g.directions, {("x", "l"): "x", ("x", "r"): "x",
                                         ("z", "l"): "z", ("z", "r"): "z"},
                          {"x": ("a",), "z": ("b",)}, "x")
    assert S.nodes == ("x",)
    with pytest.raises(ValidationError):
        DecisionStructure(g.directions, {("x", "l"): "x"}, {"x": ("a",)}, "x")


def test_reactive_strategy_uniform_only_with_direction_visible():
    S = _react(full_game())
    assert check_strategy(S, full_game()) is None
    bad = check_strategy(S, dmask_game())
    assert bad is not None and bad.player == 0
    left, right = bad.histories
    obs = dmask_game().observers[0]
    assert run_mealy(obs, left)[1] == run_mealy(obs, right)[1]
    assert {trace(S, left)[0][-1], trace(S, right)[0][-1]} == {"x", "y"}


def test_observer_state_is_not_an_observation():
    # the observer tracks the parity of r-moves but only outputs the action,
    # so a strategy reading that parity is not uniform
    g = evenr_game()
    S = DecisionStructure(g.directions, {("e", "l"): "e", ("e", "r"): "o",
                                         ("o", "l"): "o", ("o", "r"): "e"},
                          {"e": ("a",), "o": ("b",)}, "e")
    assert check_strategy(S, g) is not None
    assert check_strategy(S, full_game()) is None


def test_all_histories_semantics_is_coarser():
    g = dmask_game()
    S = _react(full_game())
    followed = compute_uniformity(S, full_game())
    every = compute_uniformity(S, full_game(), all_histories=True)
    assert followed.pairs[0] <= every.pairs[0]
    assert compute_uniformity(S, g).related(0, "x", "y")


def _brute_related(S, game, i, depth):
    """Related pairs from explicit followed histories up to ``depth``."""
    obs = game.observers[i]
    seen = {}
    for h, v in histories(S, depth):
        key = tuple(run_mealy(obs, h)[1])
        seen.setdefault(key, set()).add(v)
    return {(v, w) for vs in seen.values() for v in vs for w in vs}


@given(st.integers(0, 10_000))
def test_uniformity_matches_history_enumeration(seed):
    rng = random.Random(seed)
    game = random_game(rng, max_states=2)
    S = random_structure(rng, game, rng.randint(1, 3))
    rel = compute_uniformity(S, game)
    depth = 2 * len(S) * 2 * 2 + 1
    depth = min(depth, 7)
    for i in range(game.players):
        brute = _brute_related(S, game, i, depth)
        assert brute <= rel.pairs[i]
        for v, w in rel.pairs[i]:
            left, right = rel.witness(i, v, w)
            obs = game.observers[i]
            assert run_mealy(obs, left)[1] == run_mealy(obs, right)[1]
            assert trace(S, left) == (trace(S, left)[0], True)
            assert trace(S, left)[0][-1] == v and trace(S, right)[0][-1] == w


def test_unravel_shape():
    g = full_game()
    T = unravel(_react(g), 2)
    assert len(T) == 7
    assert T.is_tree()
    assert T.frontier == frozenset({("l", "l"), ("l", "r"), ("r", "l"), ("r", "r")})
    assert T.choice[("r",)] == ("b",)
    assert T.edges[("l", "r"), "l"] == ("l", "r")


def test_minimize_merges_equivalent_nodes():
    g = full_game()
    T = unravel(constant_strategy(g, ("a",)), 3)
    M = minimize(T)
    # inner nodes differ by their distance to the frontier
    assert len(M) == 4
    assert len(minimize(constant_strategy(g, ("a",)))) == 1
    M2 = minimize(_react(g))
    assert len(M2) == 2


def test_project_private():
    g = full_game()
    pm = project_private(_react(g), g, 0)
    assert pm.run([]) == "a"
    assert pm.run(["a:r"]) == "b"
    assert pm.run(["a:r", "b:l"]) == "a"
    with pytest.raises(NonUniform):
        project_private(_react(g), dmask_game(), 0)
