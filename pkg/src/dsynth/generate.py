"""Seeded random instances for property tests and the ``generate`` command."""
from __future__ import annotations

import itertools
import random

from .annotation import AnnotatedStrategy, check_annotation
from .game import GameSpec, MealyMachine, ParityTreeAutomaton, sort_canon
from .retraction import check_retraction
from .strategy import DecisionStructure, check_strategy

OUTPUTS = ("x", "y", "z")


def random_mealy(rng: random.Random, moves, n_states: int, n_outputs: int) -> MealyMachine:
    states = [f"m{i}" for i in range(n_states)]
    outs = OUTPUTS[:n_outputs]
    table = {(q, mv): (rng.choice(states), rng.choice(outs)) for q in states for mv in moves}
    return MealyMachine(states, states[0], table)


def random_spec(rng: random.Random, game: GameSpec, n_states: int, max_priority: int,
                deterministic: bool = True, density: float = 0.9) -> ParityTreeAutomaton:
    states = [f"q{i}" for i in range(n_states)]
    prio = {q: rng.randint(0, max_priority) for q in states}
    trans = {}
    for q in states:
        for a in game.profiles:
            if rng.random() > density:
                continue
            count = 1 if deterministic else rng.randint(1, 2)
            trans[q, a] = [tuple(rng.choice(states) for _ in game.directions)
                           for _ in range(count)]
    return ParityTreeAutomaton(states, states[0], game.directions, trans, prio)


def random_one_player(rng: random.Random, max_actions=2, max_directions=2, max_states=3,
                      max_priority=3, deterministic=True):
    """A one-player game with a random observer and a random automaton."""
    actions = ("a", "b")[:rng.randint(1, max_actions)]
    dirs = ("l", "r")[:rng.randint(1, max_directions)]
    moves = [((a,), d) for a in actions for d in dirs]
    obs = random_mealy(rng, moves, rng.randint(1, 2), rng.randint(1, 2))
    game = GameSpec((actions,), dirs, (obs,))
    spec = random_spec(rng, game, rng.randint(1, max_states), max_priority, deterministic)
    return game, spec


def random_structure(rng: random.Random, game: GameSpec, size: int) -> DecisionStructure:
    nodes = list(range(size))
    edges = {(v, d): rng.choice(nodes) for v in nodes for d in game.directions}
    choice = {v: rng.choice(game.profiles) for v in nodes}
    return DecisionStructure(game.directions, edges, choice, 0)


def random_uniform_structure(rng, game, size, tries=200):
    for _ in range(tries):
        S = random_structure(rng, game, rng.randint(1, size))
        if check_strategy(S, game) is None:
            return S
    return None


def random_annotated(rng: random.Random, max_nodes=30, max_priority=3) -> AnnotatedStrategy:
    """Arbitrary graph with arbitrary automaton-state labels.

    Only the priorities matter to measure and witness checks, so the labels
    need not form a run.
    """
    n_dirs = rng.randint(1, 2)
    dirs = ("l", "r")[:n_dirs]
    obs = MealyMachine(["m"], "m", {("m", (("a",), d)): ("m", "_") for d in dirs})
    game = GameSpec((("a",),), dirs, (obs,))
    states = [f"p{k}" for k in range(max_priority + 1)]
    spec = ParityTreeAutomaton(states, states[0], dirs,
                               {(q, ("a",)): [(q,) * n_dirs] for q in states},
                               {q: k for k, q in enumerate(states)})
    size = rng.randint(1, max_nodes)
    nodes = list(range(size))
    # bias toward sparse graphs with some long cycles
    edges = {(v, d): rng.choice(nodes[max(0, v - 3):] or nodes) if rng.random() < 0.8
             else rng.choice(nodes) for v in nodes for d in dirs}
    S = DecisionStructure(dirs, edges, {v: ("a",) for v in nodes}, 0)
    labels = {v: (("m",), rng.choice(states)) for v in S.nodes}
    return AnnotatedStrategy(S, labels, game, spec)


def run_product(S: DecisionStructure, game: GameSpec, spec: ParityTreeAutomaton,
                rng: random.Random | None = None) -> AnnotatedStrategy | None:
    """Product of ``S`` with the observers and one run of the automaton.

    Transition tuples are chosen positionally (at random when ``rng`` is
    given).  Returns ``None`` when the automaton has no transition somewhere.
    """
    obs = game.observers
    start = (S.initial, tuple(o.initial for o in obs), spec.initial)
    edges, choice, labels = {}, {}, {}
    todo, seen = [start], {start}
    while todo:
        pos = todo.pop()
        v, ms, q = pos
        a = S.choice[v]
        opts = spec.options(q, a)
        if not opts:
            return None
        t = rng.choice(opts) if rng else opts[0]
        choice[pos], labels[pos] = a, (ms, q)
        for d in S.directions:
            ms2 = tuple(o.step(m, (a, d))[0] for o, m in zip(obs, ms))
            nxt = (S.edges[v, d], ms2, spec.successor(t, d))
            edges[pos, d] = nxt
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    R = DecisionStructure(S.directions, edges, choice, start)
    names = {v: i for i, v in enumerate(sort_canon(R.nodes))}
    R = R.relabel(names)
    out = AnnotatedStrategy(R, {names[v]: labels[v] for v in labels}, game, spec)
    assert check_annotation(out) is None
    return out


def random_game(rng: random.Random, players=None, max_states=2):
    """Small game with one or two players and random observers."""
    n = players or rng.randint(1, 2)
    actions = tuple(("a", "b")[:rng.randint(1, 2)] for _ in range(n))
    dirs = ("l", "r")[:rng.randint(1, 2)]
    moves = [(p, d) for p in itertools.product(*actions) for d in dirs]
    obs = tuple(random_mealy(rng, moves, rng.randint(1, max_states), rng.randint(1, 2))
                for _ in range(n))
    return GameSpec(actions, dirs, obs)


def random_valid_annotated(rng: random.Random, max_size=4, spec_states=3, max_priority=2,
                           players=None, tries=100):
    """A uniform strategy with a correct (not necessarily accepting) annotation."""
    for _ in range(tries):
        game = random_game(rng, players)
        spec = random_spec(rng, game, rng.randint(1, spec_states), max_priority,
                           density=1.0)
        S = random_uniform_structure(rng, game, max_size)
        if S is None:
            continue
        w = run_product(S, game, spec, rng)
        if w is not None and check_strategy(w.strategy, game) is None:
            return w
    return None


def random_retraction(rng: random.Random, annotated: AnnotatedStrategy, tries=50,
                      keep=0.5):
    """A random label-preserving map passing :func:`check_retraction`."""
    S = annotated.strategy
    by_label = {}
    for v in S.nodes:
        by_label.setdefault(annotated.labels[v], []).append(v)
    for _ in range(tries):
        h = {v: v if rng.random() < keep else rng.choice(by_label[annotated.labels[v]])
             for v in S.nodes}
        if check_retraction(annotated, h) is None:
            return h
    return None
