import pytest

from dsynth.fixtures import blind_game, delay1_game, doomed_spec, full_game, safe_spec
from dsynth.solvers.oracle import (BudgetExceeded, brute_force_oracle, candidate_count,
                                   enumerate_structures, outcome_accepted)
from dsynth.strategy import constant_strategy


def test_enumeration_is_exhaustive_up_to_naming():
    g = full_game()
    ones = list(enumerate_structures(g, 1))
    assert len(ones) == 2
    twos = list(enumerate_structures(g, 2))
    # every 2-node structure is reachable and canonically named
    assert all(len(S) == 2 for S in twos)
    assert len({tuple(sorted(S.edges.items())) + tuple(sorted(S.choice.items()))
                for S in twos}) == len(twos)


def test_oracle_verdicts():
    assert brute_force_oracle(blind_game(), safe_spec(), 1) is not None
    assert brute_force_oracle(full_game(), doomed_spec(), 2) is None


def test_budget_guard():
    g = delay1_game(1)
    assert candidate_count(g, 3) > 10 ** 9
    with pytest.raises(BudgetExceeded):
        brute_force_oracle(g, safe_spec(), 3)


def test_outcome_of_constant_strategies():
    g = full_game()
    assert outcome_accepted(constant_strategy(g, ("a",)), g, safe_spec())
    assert not outcome_accepted(constant_strategy(g, ("b",)), g, safe_spec())
