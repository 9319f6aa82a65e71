import random

import pytest
from hypothesis import given, settings, strategies as st

from dsynth.annotation import is_witness
from dsynth.dstates import classify
from dsynth.fixtures import (all_one_player, blind_game, evenr_game, evenr_spec, full_game,
                             safe_spec)
from dsynth.generate import random_one_player
from dsynth.progress import check_measure
from dsynth.solvers.one_player import (NotObservable, NotOnePlayer, dstate_bound,
                                       knowledge_memory_bound, solve_one_player)
from dsynth.solvers.oracle import BudgetExceeded, brute_force_oracle
from dsynth.fixtures import delay1_game


def _agree(game, spec, bound=4):
    try:
        res = solve_one_player(game, spec)
    except NotObservable:
        return None
    try:
        oracle = brute_force_oracle(game, spec, bound)
    except BudgetExceeded:
        return None
    assert res.found == (oracle is not None)
    if res.found:
        assert is_witness(res.witness)[0]
        assert check_measure(res.witness, res.measure) is None
        assert classify(res.witness).max_dstate_size <= dstate_bound(game, spec)
    return res


@pytest.mark.parametrize("name,game,spec", all_one_player(),
                         ids=[n for n, *_ in all_one_player()])
def test_fixtures_agree_with_oracle(name, game, spec):
    _agree(game, spec)


def test_expected_verdicts():
    assert solve_one_player(blind_game(), safe_spec()).found
    assert not solve_one_player(full_game(), evenr_spec()).found
    with pytest.raises(NotObservable):
        solve_one_player(evenr_game(), evenr_spec())


def test_multi_player_rejected():
    with pytest.raises(NotOnePlayer):
        solve_one_player(delay1_game(1), safe_spec())


def test_general_mode_finds_small_witness():
    res = solve_one_player(blind_game(), safe_spec(), mode="general", memory_bound=2)
    assert res.found and res.stats["nodes"] == 1


@settings(deadline=None)
@given(st.integers(0, 100_000))
def test_random_instances_agree(seed):
    game, spec = random_one_player(random.Random(seed))
    try:
        bound = knowledge_memory_bound(game, spec)
    except NotObservable:
        return
    if bound <= 3:
        _agree(game, spec, bound)
