"""Named example instances shared by the tests and demos."""
from __future__ import annotations

from .game import GameSpec, MealyMachine, ParityTreeAutomaton

ACTIONS = ("a", "b")
DIRECTIONS = ("l", "r")


def move_label(move) -> str:
    profile, d = move
    return ".".join(profile) + ":" + d


def _one_player(observer) -> GameSpec:
    return GameSpec((ACTIONS,), DIRECTIONS, (observer,))


def _table(states, game_moves, fn):
    out = {}
    for q in states:
        for m in game_moves:
            out[q, m] = fn(q, m)
    return out


_MOVES = [((a,), d) for a in ACTIONS for d in DIRECTIONS]


def blind_observer() -> MealyMachine:
    return MealyMachine(["q"], "q", _table(["q"], _MOVES, lambda q, m: ("q", "_")))


def full_observer() -> MealyMachine:
    return MealyMachine(["q"], "q", _table(["q"], _MOVES, lambda q, m: ("q", move_label(m))))


def dmask_observer() -> MealyMachine:
    """Sees the action, never the direction."""
    return MealyMachine(["q"], "q", _table(["q"], _MOVES, lambda q, m: ("q", m[0][0])))


def evenr_observer() -> MealyMachine:
    """Two states toggling on direction ``r``; outputs the action."""
    flip = {"e": "o", "o": "e"}
    return MealyMachine(["e", "o"], "e", _table(
        ["e", "o"], _MOVES,
        lambda q, m: (flip[q] if m[1] == "r" else q, m[0][0])))


def step_parity_observer() -> MealyMachine:
    """Counts steps modulo two but reveals nothing."""
    flip = {"e": "o", "o": "e"}
    return MealyMachine(["e", "o"], "e", _table(["e", "o"], _MOVES,
                                                lambda q, m: (flip[q], "_")))


def blind_game() -> GameSpec:
    return _one_player(blind_observer())


def full_game() -> GameSpec:
    return _one_player(full_observer())


def dmask_game() -> GameSpec:
    return _one_player(dmask_observer())


def evenr_game() -> GameSpec:
    return _one_player(evenr_observer())


def safe_spec() -> ParityTreeAutomaton:
    """Never play ``b``."""
    return ParityTreeAutomaton(
        ["s", "bad"], "s", DIRECTIONS,
        {("s", ("a",)): [("s", "s")], ("s", ("b",)): [("bad", "bad")],
         ("bad", ("a",)): [("bad", "bad")], ("bad", ("b",)): [("bad", "bad")]},
        {"s": 0, "bad": 1})


def evenr_spec() -> ParityTreeAutomaton:
    """Direction ``r`` infinitely often, whatever is played."""
    trans = {(q, (a,)): [("L", "R")] for q in ("L", "R") for a in ACTIONS}
    return ParityTreeAutomaton(["L", "R"], "L", DIRECTIONS, trans, {"L": 1, "R": 0})


def doomed_spec() -> ParityTreeAutomaton:
    """``a`` and ``b`` both lead to the losing sink eventually.

    Playing ``b`` loses at once; playing ``a`` moves to a state where ``a``
    loses and only ``b`` is allowed, which again loses.
    """
    trans = {
        ("s", ("a",)): [("t", "t")], ("s", ("b",)): [("bad", "bad")],
        ("t", ("a",)): [("bad", "bad")], ("t", ("b",)): [("bad", "bad")],
        ("bad", ("a",)): [("bad", "bad")], ("bad", ("b",)): [("bad", "bad")],
    }
    return ParityTreeAutomaton(["s", "t", "bad"], "s", DIRECTIONS, trans,
                               {"s": 0, "t": 0, "bad": 1})


def alternate_spec() -> ParityTreeAutomaton:
    """Play ``a`` at even steps and ``b`` at odd steps."""
    trans = {
        ("even", ("a",)): [("odd", "odd")], ("even", ("b",)): [("bad", "bad")],
        ("odd", ("b",)): [("even", "even")], ("odd", ("a",)): [("bad", "bad")],
        ("bad", ("a",)): [("bad", "bad")], ("bad", ("b",)): [("bad", "bad")],
    }
    return ParityTreeAutomaton(["even", "odd", "bad"], "even", DIRECTIONS, trans,
                               {"even": 0, "odd": 0, "bad": 1})


def often_b_spec() -> ParityTreeAutomaton:
    """Play ``b`` infinitely often; the state records the last action."""
    trans = {(q, (x,)): [(x.upper(), x.upper())] for q in ("A", "B") for x in ACTIONS}
    return ParityTreeAutomaton(["B", "A"], "B", DIRECTIONS, trans, {"A": 1, "B": 0})


def alternate_game() -> GameSpec:
    return _one_player(step_parity_observer())


def all_one_player():
    """(name, game, spec) for every one-player fixture combination."""
    games = {"blind": blind_game(), "full": full_game(), "dmask": dmask_game(),
             "evenr": evenr_game(), "steps": alternate_game()}
    specs = {"safe": safe_spec(), "evenr": evenr_spec(), "doomed": doomed_spec(),
             "alternate": alternate_spec(), "often_b": often_b_spec()}
    return [(f"{g}+{s}", games[g], specs[s]) for g in games for s in specs]


def all_delay():
    """(name, game, spec, k) for the shipped delay instances."""
    out = []
    for k in (0, 1):
        g = delay1_game(k)
        for lag in (0, 1, 2):
            out.append((f"delay{k}+match{lag}", g, match_spec(lag, g), k))
    return out


def delay1_game(k: int = 1) -> GameSpec:
    """Two players, actions ``a``/``b``, with moves delivered within ``k`` rounds."""
    from .solvers.delay import delay_game
    return delay_game((ACTIONS, ACTIONS), DIRECTIONS, k)


def match_spec(lag: int, game: GameSpec | None = None) -> ParityTreeAutomaton:
    """Both players must echo Nature's direction from ``lag`` moves back.

    Action ``a`` echoes ``l`` and ``b`` echoes ``r``.  ``lag = 0`` asks the
    players to predict the coming direction, ``lag = 1`` to react to the
    move just made, ``lag = 2`` to the one before it.  The automaton
    remembers the last ``lag`` base directions; profiles that fail to echo
    have no transition.  Passing a delay-form ``game`` lifts the automaton
    to its directions.
    """
    import itertools
    echo = {"l": "a", "r": "b"}
    if lag == 0:
        trans = {}
        for prof in itertools.product(ACTIONS, ACTIONS):
            for q in ("q", "bad"):
                trans[q, prof] = [tuple("q" if q == "q" and set(prof) == {echo[d]}
                                        else "bad" for d in DIRECTIONS)]
        base = ParityTreeAutomaton(["q", "bad"], "q", DIRECTIONS, trans,
                                   {"q": 0, "bad": 1})
    else:
        states = [s for n in range(lag + 1)
                  for s in itertools.product(DIRECTIONS, repeat=n)]
        names = {s: "q" + "".join(s) for s in states}
        trans = {}
        for s in states:
            for prof in itertools.product(ACTIONS, ACTIONS):
                if len(s) < lag or set(prof) == {echo[s[0]]}:
                    trans[names[s], prof] = [tuple(names[(s + (d,))[-lag:]]
                                                   for d in DIRECTIONS)]
        base = ParityTreeAutomaton(list(names.values()), names[()], DIRECTIONS, trans,
                                   {n: 0 for n in names.values()})
    if game is None:
        return base
    from .solvers.delay import lift_spec
    return lift_spec(base, game)
