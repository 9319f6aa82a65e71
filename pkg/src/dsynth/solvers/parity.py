"""Two-player parity games solved with small progress measures.

Player 0 (the protagonist) wins a play when the least priority seen
infinitely often is even.  Measures use the same lexicographic prefix
order as :mod:`dsynth.progress`; ``None`` stands for the top element.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Hashable, Mapping

from ..progress import edge_ok

LOSE_SINK = ("sink", "lose")
WIN_SINK = ("sink", "win")


class ParityArena:
    """Finite arena: ``moves[p]`` lists ``(label, successor)`` pairs.

    Positions without moves are sent to a losing sink for their owner.
    """

    def __init__(self, owner: Mapping, moves: Mapping, priority: Mapping,
                 initial: Hashable):
        self.owner = dict(owner)
        self.moves = {p: list(moves.get(p, ())) for p in self.owner}
        self.priority = dict(priority)
        self.initial = initial
        sinks = False
        for p, ms in self.moves.items():
            if not ms:
                ms.append(("deadend", LOSE_SINK if self.owner[p] == 0 else WIN_SINK))
                sinks = True
        if sinks:
            self.owner.update({LOSE_SINK: 0, WIN_SINK: 0})
            self.priority.update({LOSE_SINK: 1, WIN_SINK: 0})
            self.moves[LOSE_SINK] = [("loop", LOSE_SINK)]
            self.moves[WIN_SINK] = [("loop", WIN_SINK)]
        for p, ms in self.moves.items():
            for _, q in ms:
                if q not in self.owner:
                    raise ValueError(f"move from {p!r} to undeclared position {q!r}")

    @property
    def positions(self):
        return list(self.owner)

    @property
    def num_priorities(self) -> int:
        return max(self.priority.values(), default=0) + 1


@dataclass
class ParitySolution:
    winning: frozenset          # protagonist's winning region
    strategy: dict              # protagonist position -> chosen move label
    successor: dict             # protagonist position -> chosen successor
    measure: dict               # position -> tuple or None (top)

    def losing(self, arena) -> frozenset:
        return frozenset(arena.owner) - self.winning


def _lift(m, k, bounds):
    """Least measure dominating ``m`` at priority ``k`` (strictly if odd)."""
    if m is None:
        return None
    r = len(bounds)
    if k % 2 == 0:
        return tuple(m[:k + 1]) + (0,) * (r - k - 1)
    for j in range(k, -1, -2 if k % 2 else -1):
        if j % 2 and m[j] < bounds[j]:
            return tuple(m[:j]) + (m[j] + 1,) + (0,) * (r - j - 1)
    return None


def _less(a, b):
    if a is None:
        return False
    if b is None:
        return True
    return a < b


def _attractor(arena, preds, region, target, player):
    """Positions of ``region`` from which ``player`` can force ``target``."""
    attr = set(target)
    count = {p: sum(1 for _, q in arena.moves[p] if q in region)
             for p in region if arena.owner[p] != player}
    todo = list(attr)
    while todo:
        q = todo.pop()
        for p in preds[q]:
            if p not in region or p in attr:
                continue
            if arena.owner[p] == player:
                attr.add(p)
                todo.append(p)
            else:
                count[p] -= 1
                if count[p] == 0:
                    attr.add(p)
                    todo.append(p)
    return attr


def winning_regions(arena: ParityArena, preds=None):
    """Zielonka's recursive algorithm; returns ``(W0, W1)``."""
    if preds is None:
        preds = _predecessors(arena)

    def solve(region):
        if not region:
            return set(), set()
        k = min(arena.priority[p] for p in region)
        me = k % 2
        top = {p for p in region if arena.priority[p] == k}
        a = _attractor(arena, preds, region, top, me)
        sub = solve(region - a)
        if not sub[1 - me]:
            out = [None, None]
            out[me], out[1 - me] = set(region), set()
            return tuple(out)
        b = _attractor(arena, preds, region, sub[1 - me], 1 - me)
        sub2 = solve(region - b)
        out = [None, None]
        out[me], out[1 - me] = sub2[me], sub2[1 - me] | b
        return tuple(out)

    return solve(set(arena.owner))


def _predecessors(arena):
    preds = {p: [] for p in arena.owner}
    for p, ms in arena.moves.items():
        for _, q in ms:
            preds[q].append(p)
    return preds


def solve_parity(arena: ParityArena) -> ParitySolution:
    """Winning region, a positional strategy and a progress-measure certificate.

    Regions come from Zielonka's algorithm; measures are then lifted inside
    the protagonist's region only, where they stay small.
    """
    r = arena.num_priorities
    bounds = [0] * r
    for p, k in arena.priority.items():
        if k % 2:
            bounds[k] += 1
    preds = _predecessors(arena)
    win, _ = winning_regions(arena, preds)
    mu = {p: (0,) * r if p in win else None for p in arena.owner}

    def best(p):
        k = arena.priority[p]
        vals = [_lift(mu[q], k, bounds) for _, q in arena.moves[p]]
        out = vals[0]
        if arena.owner[p] == 0:
            for v in vals[1:]:
                if _less(v, out):
                    out = v
        else:
            for v in vals[1:]:
                if _less(out, v):
                    out = v
        return out

    queue = deque(win)
    queued = set(queue)
    while queue:
        p = queue.popleft()
        queued.discard(p)
        if mu[p] is None:
            continue
        new = best(p)
        if _less(mu[p], new):
            mu[p] = new
            for q in preds[p]:
                if q not in queued and mu[q] is not None:
                    queue.append(q)
                    queued.add(q)
    winning = frozenset(p for p, m in mu.items() if m is not None)
    assert winning == win, "measure lifting disagrees with the recursive solver"
    strategy, successor = {}, {}
    for p in winning:
        if arena.owner[p] != 0:
            continue
        k = arena.priority[p]
        chosen = None
        for label, q in arena.moves[p]:
            lifted = _lift(mu[q], k, bounds)
            if lifted is not None and not _less(mu[p], lifted):
                if chosen is None or _less(lifted, chosen[0]):
                    chosen = (lifted, label, q)
        strategy[p], successor[p] = chosen[1], chosen[2]
    return ParitySolution(winning, strategy, successor, mu)


def check_solution(arena: ParityArena, sol: ParitySolution) -> list:
    """Re-check the measure certificate; returns a list of problems."""
    problems = []
    for p in sol.winning:
        k = arena.priority[p]
        if arena.owner[p] == 0:
            targets = [sol.successor[p]]
        else:
            targets = [q for _, q in arena.moves[p]]
        for q in targets:
            if q not in sol.winning:
                problems.append(("leaves-region", p, q))
            elif not edge_ok(sol.measure[p], sol.measure[q], k):
                problems.append(("measure", p, q))
    return problems
