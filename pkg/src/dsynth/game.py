"""Game model: moves, histories, Mealy observers and parity tree automata.

A move is a pair ``(profile, direction)`` where ``profile`` is a tuple with
one action per player.  Histories are tuples of moves.  Everything here is
immutable; the containers use plain tuples, frozensets and read-only dicts.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Any, Hashable, Iterable, Mapping, Sequence

Profile = tuple
Move = tuple  # (profile, direction)
History = tuple


def canon(x: Any):
    """Sort key imposing a total order on nested tuples of str/int/None."""
    try:
        return _canon_cached(x)
    except TypeError:       # unhashable, e.g. a list
        return _canon(x)


def _canon(x: Any):
    if x is None:
        return (0,)
    if isinstance(x, bool):
        return (1, int(x))
    if isinstance(x, int):
        return (1, x)
    if isinstance(x, str):
        return (2, x)
    if isinstance(x, (tuple, list)):
        return (3, tuple(canon(y) for y in x))
    if isinstance(x, frozenset):
        return (4, tuple(sorted(canon(y) for y in x)))
    return (5, repr(x))


_canon_cached = functools.lru_cache(maxsize=1 << 16)(_canon)


def sort_canon(items: Iterable) -> list:
    return sorted(items, key=canon)


class ValidationError(ValueError):
    """Raised when an object violates its structural invariants."""

    def __init__(self, message, diagnostics=()):
        super().__init__(message)
        self.diagnostics = list(diagnostics)


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    details: Mapping = field(default_factory=dict)
    line: int | None = None
    column: int | None = None

    def __str__(self):
        where = ""
        if self.line is not None:
            where = f"line {self.line}" + (f":{self.column}" if self.column else "") + ": "
        return f"{where}{self.code}: {self.message}"


class MealyMachine:
    """Deterministic Mealy observer given by an explicit table.

    ``table`` maps ``(state, move)`` to ``(next_state, observation)``.
    """

    def __init__(self, states: Sequence, initial: Hashable,
                 table: Mapping[tuple, tuple]):
        self.states = tuple(states)
        self.initial = initial
        self.table = MappingProxyType(dict(table))

    def step(self, state, move):
        try:
            return self.table[state, move]
        except KeyError:
            raise ValidationError(
                f"no transition for state {state!r} on move {move!r}") from None

    @property
    def observations(self) -> tuple:
        return tuple(sort_canon({out for _, out in self.table.values()}))

    def rename(self, mapping: Mapping) -> "MealyMachine":
        return MealyMachine(
            [mapping[q] for q in self.states], mapping[self.initial],
            {(mapping[q], m): (mapping[q2], b)
             for (q, m), (q2, b) in self.table.items()})

    def __eq__(self, other):
        return (isinstance(other, MealyMachine)
                and self.states == other.states
                and self.initial == other.initial
                and dict(self.table) == dict(other.table))

    def __hash__(self):
        return hash((self.states, self.initial))

    def __repr__(self):
        return f"MealyMachine(states={len(self.states)}, initial={self.initial!r})"


@dataclass(frozen=True, eq=False)
class GameSpec:
    """Team of players, their action alphabets, Nature's directions and
    one observer per player."""

    actions: tuple
    directions: tuple
    observers: tuple

    def __post_init__(self):
        object.__setattr__(self, "actions", tuple(tuple(a) for a in self.actions))
        object.__setattr__(self, "directions", tuple(self.directions))
        object.__setattr__(self, "observers", tuple(self.observers))

    @property
    def players(self) -> int:
        return len(self.actions)

    @property
    def profiles(self) -> list:
        return list(itertools.product(*(sort_canon(a) for a in self.actions)))

    @property
    def moves(self) -> list:
        """Move alphabet in canonical order (a^0, ..., a^{n-1}, d)."""
        return [(p, d) for p in self.profiles for d in sort_canon(self.directions)]

    def is_move(self, move) -> bool:
        try:
            profile, d = move
        except (TypeError, ValueError):
            return False
        return (d in self.directions and len(profile) == self.players
                and all(a in acts for a, acts in zip(profile, self.actions)))

    def __eq__(self, other):
        return (isinstance(other, GameSpec) and self.actions == other.actions
                and self.directions == other.directions
                and self.observers == other.observers)

    def __hash__(self):
        return hash((self.actions, self.directions))


@dataclass(frozen=True, eq=False)
class ParityTreeAutomaton:
    """Nondeterministic parity tree automaton over the outcome tree.

    ``transitions[q, profile]`` is a frozenset of successor tuples, one entry
    per direction in ``directions`` order.  Acceptance: on every branch the
    least priority seen infinitely often is even.
    """

    states: tuple
    initial: Hashable
    directions: tuple
    transitions: Mapping
    priorities: Mapping

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "directions", tuple(self.directions))
        object.__setattr__(self, "transitions", MappingProxyType(
            {k: frozenset(tuple(t) for t in v) for k, v in self.transitions.items()}))
        object.__setattr__(self, "priorities", MappingProxyType(
            normalize_priorities(self.priorities)))

    @property
    def num_priorities(self) -> int:
        return max(self.priorities.values(), default=0) + 1

    def priority(self, q) -> int:
        return self.priorities[q]

    def options(self, q, profile) -> list:
        return sort_canon(self.transitions.get((q, profile), ()))

    def successor(self, choice: tuple, direction):
        return choice[self.directions.index(direction)]

    def is_deterministic(self) -> bool:
        return all(len(v) <= 1 for v in self.transitions.values())

    def __eq__(self, other):
        return (isinstance(other, ParityTreeAutomaton)
                and self.states == other.states
                and self.initial == other.initial
                and self.directions == other.directions
                and dict(self.transitions) == dict(other.transitions)
                and dict(self.priorities) == dict(other.priorities))

    def __hash__(self):
        return hash((self.states, self.initial))


def normalize_priorities(priorities: Mapping) -> dict:
    """Compress priorities to a contiguous range keeping order and parity.

    Consecutive used values of equal parity collapse to one value, so the
    result uses every value between its minimum (0 or 1) and maximum.
    """
    used = sorted(set(priorities.values()))
    remap = {}
    current = None
    for p in used:
        if current is None:
            current = p % 2
        elif p % 2 != remap[prev] % 2:
            current += 1
        remap[p] = current
        prev = p
    return {q: remap[p] for q, p in priorities.items()}


def validate_history(game: GameSpec, history: Sequence) -> None:
    for k, move in enumerate(history):
        if not game.is_move(move):
            raise ValidationError(f"malformed move at index {k}: {move!r}")


def run_mealy(machine, history: Sequence, game: GameSpec | None = None):
    """Run an observer on a history.

    Returns ``(states, observations)`` where ``states`` has one entry more
    than the history.
    """
    if game is not None:
        validate_history(game, history)
    q = machine.initial
    states = [q]
    outputs = []
    for k, move in enumerate(history):
        try:
            q, b = machine.step(q, move)
        except ValidationError:
            raise ValidationError(f"malformed move at index {k}: {move!r}") from None
        states.append(q)
        outputs.append(b)
    return states, outputs


def indistinguishable(machine, history, other, game: GameSpec | None = None) -> bool:
    """True iff both histories produce the same observation sequence."""
    if len(history) != len(other):
        if game is not None:
            validate_history(game, history)
            validate_history(game, other)
        return False
    return run_mealy(machine, history, game)[1] == run_mealy(machine, other, game)[1]


def validate_game(game: GameSpec, spec: ParityTreeAutomaton | None = None) -> list:
    """Collect structural violations; empty list means well formed."""
    diags = []
    if game.players < 1:
        diags.append(Diagnostic("NoPlayers", "a game needs at least one player"))
    for i, acts in enumerate(game.actions):
        if not acts:
            diags.append(Diagnostic("EmptyActions", f"player {i} has no actions",
                                    {"player": i}))
    if not game.directions:
        diags.append(Diagnostic("EmptyDirections", "no directions declared"))
    if len(game.observers) != game.players:
        diags.append(Diagnostic(
            "ObserverCountMismatch",
            f"{game.players} players but {len(game.observers)} observers",
            {"players": game.players, "observers": len(game.observers)}))
    moves = game.moves
    for i, m in enumerate(game.observers):
        if not isinstance(m, MealyMachine):
            continue
        if m.initial not in m.states:
            diags.append(Diagnostic("BadInitialState",
                                    f"observer {i}: initial state not declared",
                                    {"player": i, "state": m.initial}))
        for q in m.states:
            for mv in moves:
                entry = m.table.get((q, mv))
                if entry is None:
                    diags.append(Diagnostic(
                        "IncompleteTransition",
                        f"observer {i}: no transition from {q!r} on {mv!r}",
                        {"player": i, "state": q, "move": mv}))
                elif entry[0] not in m.states:
                    diags.append(Diagnostic(
                        "UnknownState", f"observer {i}: target {entry[0]!r} undeclared",
                        {"player": i, "state": entry[0]}))
    if spec is not None:
        diags.extend(validate_spec(spec, game))
    return diags


def validate_spec(spec: ParityTreeAutomaton, game: GameSpec) -> list:
    diags = []
    states = set(spec.states)
    if spec.initial not in states:
        diags.append(Diagnostic("BadInitialState", "spec initial state undeclared",
                                {"state": spec.initial}))
    if set(spec.directions) != set(game.directions):
        diags.append(Diagnostic("DirectionMismatch",
                                "spec directions differ from game directions"))
    for q in spec.states:
        if q not in spec.priorities:
            diags.append(Diagnostic("MissingPriority", f"no priority for {q!r}",
                                    {"state": q}))
    profiles = set(game.profiles)
    for (q, prof), tuples in spec.transitions.items():
        if q not in states:
            diags.append(Diagnostic("UnknownState", f"spec state {q!r} undeclared",
                                    {"state": q}))
        if prof not in profiles:
            diags.append(Diagnostic("UnknownProfile", f"profile {prof!r} undeclared",
                                    {"profile": prof}))
        for t in tuples:
            if len(t) != len(spec.directions):
                diags.append(Diagnostic("BadTupleArity",
                                        f"successor tuple {t!r} has wrong arity",
                                        {"state": q, "profile": prof}))
            for s in t:
                if s not in states:
                    diags.append(Diagnostic("UnknownState",
                                            f"spec state {s!r} undeclared",
                                            {"state": s}))
    return diags
