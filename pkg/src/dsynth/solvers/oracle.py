"""Exhaustive search over small decision structures.

Structures are enumerated up to isomorphism by fixing node ``0`` as the
initial node and requiring nodes to be numbered in breadth-first
discovery order (directions in canonical order).  Every reachable
structure has exactly one such numbering.
"""
from __future__ import annotations

import itertools

from ..annotation import AnnotatedStrategy, find_witness_annotation, is_witness
from ..game import canon, sort_canon
from ..strategy import DecisionStructure, check_strategy

DEFAULT_BUDGET = 200_000


class BudgetExceeded(RuntimeError):
    def __init__(self, required, budget):
        super().__init__(f"{required} candidates required, budget is {budget}")
        self.required = required
        self.budget = budget


def candidate_count(game, memory_bound: int) -> int:
    nd = len(game.directions)
    np_ = len(game.profiles)
    return sum(m ** (m * nd) * np_ ** m for m in range(1, memory_bound + 1))


def _bfs_canonical(m, directions, succ):
    """True iff nodes appear in BFS order and all are reachable."""
    order = [0]
    seen = {0}
    idx = 0
    while idx < len(order):
        v = order[idx]
        idx += 1
        for d in directions:
            w = succ[v, d]
            if w not in seen:
                if w != len(order):
                    return False
                seen.add(w)
                order.append(w)
    return len(order) == m


def enumerate_structures(game, size: int):
    """Canonical decision structures with exactly ``size`` nodes."""
    dirs = sort_canon(game.directions)
    slots = [(v, d) for v in range(size) for d in dirs]
    profiles = game.profiles
    for targets in itertools.product(range(size), repeat=len(slots)):
        succ = dict(zip(slots, targets))
        if not _bfs_canonical(size, dirs, succ):
            continue
        for acts in itertools.product(profiles, repeat=size):
            yield DecisionStructure(game.directions, succ, dict(enumerate(acts)), 0)


def brute_force_oracle(game, spec, memory_bound: int, budget: int = DEFAULT_BUDGET,
                       accept=None):
    """First winning strategy with at most ``memory_bound`` nodes, or ``None``.

    ``accept`` optionally filters winners (given the witness annotation).
    """
    if memory_bound < 1:
        raise ValueError("memory bound must be at least 1")
    need = candidate_count(game, memory_bound)
    if need > budget:
        raise BudgetExceeded(need, budget)
    for size in range(1, memory_bound + 1):
        for S in enumerate_structures(game, size):
            if check_strategy(S, game) is not None:
                continue
            w = find_witness_annotation(S, game, spec)
            if w is not None and (accept is None or accept(w)):
                return S
    return None


def outcome_accepted(S: DecisionStructure, game, spec) -> bool:
    """Does the automaton accept the outcome of ``S``?

    Decided without any game solving: enumerate every positional choice of
    transition tuples on the reachable product of ``S``, the observers and
    the automaton, and test each resulting annotation for odd cycles.
    """
    obs = game.observers
    start = (S.initial, tuple(o.initial for o in obs), spec.initial)

    def succ(pos, t, d):
        v, ms, _ = pos
        a = S.choice[v]
        return (S.edges[v, d], tuple(o.step(m, (a, d))[0] for o, m in zip(obs, ms)),
                spec.successor(t, d))

    def search(assigned, todo):
        pending = list(dict.fromkeys(p for p in todo if p not in assigned))
        if not pending:
            return check(assigned)
        pos = min(pending, key=canon)
        v, ms, q = pos
        rest = [p for p in pending if p != pos]
        if v in S.frontier:
            assigned[pos] = None
            ok = search(assigned, rest)
            del assigned[pos]
            return ok
        for t in spec.options(q, S.choice[v]):
            assigned[pos] = t
            nxt = [succ(pos, t, d) for d in S.directions]
            if search(assigned, rest + [p for p in nxt if p not in assigned]):
                return True
            del assigned[pos]
        return False

    def check(assigned):
        edges, choice, labels, frontier = {}, {}, {}, []
        for pos, t in assigned.items():
            v, ms, q = pos
            choice[pos] = S.choice[v]
            labels[pos] = (ms, q)
            for d in S.directions:
                edges[pos, d] = pos if t is None else succ(pos, t, d)
            if t is None:
                frontier.append(pos)
        R = DecisionStructure(S.directions, edges, choice, start, frontier)
        return is_witness(AnnotatedStrategy(R, labels, game, spec))[0]

    return search({}, [start])
