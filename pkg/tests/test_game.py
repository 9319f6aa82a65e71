import pytest
from hypothesis import given, strategies as st

from dsynth.fixtures import (all_one_player, blind_game, dmask_game, evenr_game,
                             full_game, safe_spec)
from dsynth.game import (GameSpec, MealyMachine, ParityTreeAutomaton, ValidationError,
                         canon, indistinguishable, normalize_priorities, run_mealy,
                         validate_game, validate_spec)


def test_fixtures_are_well_formed():
    for name, game, spec in all_one_player():
        assert validate_game(game, spec) == [], name


def test_moves_are_canonical():
    g = full_game()
    assert g.moves == [(("a",), "l"), (("a",), "r"), (("b",), "l"), (("b",), "r")]
    assert g.is_move((("a",), "l"))
    assert not g.is_move((("c",), "l"))
    assert not g.is_move("junk")


def test_run_mealy_outputs_and_errors():
    g = evenr_game()
    h = ((("a",), "r"), (("b",), "l"), (("a",), "r"))
    states, outs = run_mealy(g.observers[0], h, g)
    assert states == ["e", "o", "o", "e"]
    assert outs == ["a", "b", "a"]
    with pytest.raises(ValidationError, match="index 1"):
        run_mealy(g.observers[0], ((("a",), "r"), (("c",), "l")), g)


def test_indistinguishable_depends_on_observer():
    h1 = ((("a",), "l"),)
    h2 = ((("a",), "r"),)
    assert indistinguishable(dmask_game().observers[0], h1, h2)
    assert not indistinguishable(full_game().observers[0], h1, h2)
    assert indistinguishable(blind_game().observers[0], h1, ((("b",), "r"),))


@given(st.dictionaries(st.sampled_from("pqrstu"), st.integers(0, 40), min_size=1))
def test_normalize_priorities_preserves_order_and_parity(prio):
    out = normalize_priorities(prio)
    values = sorted(set(out.values()))
    assert values[0] in (0, 1)
    assert all(b - a == 1 for a, b in zip(values, values[1:])) or len(values) == 1
    for p in prio:
        assert out[p] % 2 == prio[p] % 2
        for q in prio:
            if prio[p] < prio[q]:
                assert out[p] <= out[q]
            if prio[p] == prio[q]:
                assert out[p] == out[q]


def test_validate_game_codes():
    m = MealyMachine(["q"], "x", {})
    g = GameSpec((("a",), ()), (), (m,))
    codes = {d.code for d in validate_game(g)}
    assert {"EmptyActions", "EmptyDirections", "ObserverCountMismatch",
            "BadInitialState"} <= codes
    m2 = MealyMachine(["q"], "q", {("q", (("a",), "l")): ("z", "_")})
    g2 = GameSpec((("a",),), ("l", "r"), (m2,))
    codes = {d.code for d in validate_game(g2)}
    assert {"IncompleteTransition", "UnknownState"} <= codes


def test_validate_spec_codes():
    g = full_game()
    spec = ParityTreeAutomaton(["s"], "t", ("l",), {("s", ("c",)): [("s", "u")]},
                               {"s": 0})
    codes = {d.code for d in validate_spec(spec, g)}
    assert {"BadInitialState", "DirectionMismatch", "UnknownProfile",
            "BadTupleArity", "UnknownState"} <= codes


def test_spec_accessors():
    s = safe_spec()
    assert s.is_deterministic()
    assert s.options("s", ("a",)) == [("s", "s")]
    assert s.options("s", ("c",)) == []
    assert s.successor(("s", "bad"), "r") == "bad"
    assert s.num_priorities == 2


def test_canon_is_total():
    items = [None, 3, "x", ("a", 1), frozenset({1, 2}), True, ("a",), 0]
    ordered = sorted(items, key=canon)
    assert ordered[0] is None
    assert sorted(ordered, key=canon) == ordered
