import pytest

from dsynth.fixtures import blind_game, delay1_game, full_game, match_spec, safe_spec
from dsynth.solvers.delay import solve_delay
from dsynth.solvers.growth import MAX_DEPTH, diagnose_growth


def test_full_observation_stays_singleton():
    rows = diagnose_growth(full_game(), safe_spec(), 4)
    assert [r.max_size for r in rows] == [1] * 5


def test_blind_grows_exponentially():
    rows = diagnose_growth(blind_game(), safe_spec(), 3, classes=False)
    assert [r.max_size for r in rows] == [1, 4, 16, 64]
    assert all(r.classes is None for r in rows)


def test_budget_disables_classes():
    rows = diagnose_growth(blind_game(), safe_spec(), 3, budget=4)
    assert rows[1].classes is not None and rows[2].classes is None


def test_depth_limit():
    with pytest.raises(ValueError):
        diagnose_growth(full_game(), safe_spec(), MAX_DEPTH + 1)


def test_delay_strategy_within_window_bound():
    g = delay1_game(1)
    spec = match_spec(2, g)
    res = solve_delay(g, spec)
    rows = diagnose_growth(g, spec, 4, strategy=res.strategy, classes=False)
    assert max(r.max_size for r in rows) <= len(g.moves)
