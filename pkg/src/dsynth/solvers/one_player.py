"""One player against Nature.

``observable`` mode is the classical knowledge-set construction: arena
positions are sets of (observer state, automaton state) pairs consistent
with an observation history.  It requires a deterministic automaton whose
priority is common to every pair of each reachable knowledge set, and is
complete for such instances.  ``general`` mode is a bounded search over
small strategy structures and may answer ``unknown``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..annotation import AnnotatedStrategy, check_annotation, find_witness_annotation, \
    is_witness, relabel
from ..dstates import classify
from ..game import canon, sort_canon
from ..progress import check_measure, compute_measure
from ..strategy import DecisionStructure, check_strategy, minimize
from .oracle import enumerate_structures
from .parity import ParityArena, solve_parity


class NotOnePlayer(ValueError):
    pass


class NotObservable(ValueError):
    pass


@dataclass
class SolveResult:
    status: str                       # "win", "lose" or "unknown"
    strategy: DecisionStructure | None = None
    witness: AnnotatedStrategy | None = None
    measure: dict | None = None
    stats: dict = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.status == "win"


def _certify(witness: AnnotatedStrategy):
    assert check_annotation(witness) is None
    assert check_strategy(witness.strategy, witness.game) is None
    ok, lasso = is_witness(witness)
    assert ok, lasso
    mu = compute_measure(witness)
    assert mu is not None and check_measure(witness, mu) is None
    return mu


def knowledge_arena(game, spec):
    """Build the knowledge arena; returns ``(arena, post)``.

    ``post(K, action, observation)`` gives the successor knowledge set.
    """
    if game.players != 1:
        raise NotOnePlayer(f"{game.players} players")
    if not spec.is_deterministic():
        raise NotObservable("observable mode needs a deterministic automaton")
    obs = game.observers[0]
    dirs = game.directions

    def split(K, a):
        out = {}
        for m, q in K:
            (t,) = spec.transitions[q, a]
            for d in dirs:
                m2, b = obs.step(m, (a, d))
                out.setdefault(b, set()).add((m2, spec.successor(t, d)))
        return {b: frozenset(v) for b, v in out.items()}

    start = frozenset({(obs.initial, spec.initial)})
    owner, moves, prio = {}, {}, {}
    todo = [start]
    owner[start] = 0
    while todo:
        K = todo.pop()
        ps = {spec.priorities[q] for _, q in K}
        if len(ps) != 1:
            raise NotObservable(f"knowledge set mixes priorities {sorted(ps)}")
        prio[K] = ps.pop()
        opts = []
        for a in game.profiles:
            if any(not spec.transitions.get((q, a)) for _, q in K):
                continue
            mid = ("after", K, a)
            opts.append((a, mid))
            if mid in owner:
                continue
            owner[mid], prio[mid] = 1, prio[K]
            nexts = []
            for b, K2 in sorted(split(K, a).items(), key=lambda p: canon(p[0])):
                nexts.append((b, K2))
                if K2 not in owner:
                    owner[K2] = 0
                    todo.append(K2)
            moves[mid] = nexts
        moves[K] = opts
    return ParityArena(owner, moves, prio, start), split


def _observable(game, spec) -> SolveResult:
    arena, split = knowledge_arena(game, spec)
    sol = solve_parity(arena)
    stats = {"arena_positions": len(arena.owner),
             "knowledge_sets": sum(1 for p in arena.owner
                                   if isinstance(p, frozenset) and arena.owner[p] == 0)}
    if arena.initial not in sol.winning:
        return SolveResult("lose", stats=stats)
    obs = game.observers[0]
    start = arena.initial
    root = (start, obs.initial, spec.initial)
    edges, choice, labels = {}, {}, {}
    todo, seen = [root], {root}
    while todo:
        node = todo.pop()
        K, m, q = node
        a = sol.strategy[K]
        choice[node] = a
        labels[node] = ((m,), q)
        (t,) = spec.transitions[q, a]
        posts = split(K, a)
        for d in game.directions:
            m2, b = obs.step(m, (a, d))
            nxt = (posts[b], m2, spec.successor(t, d))
            edges[node, d] = nxt
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    S = DecisionStructure(game.directions, edges, choice, root)
    witness = relabel(AnnotatedStrategy(S, labels, game, spec))
    mu = _certify(witness)
    stats["nodes"] = len(S)
    stats["minimized_nodes"] = len(minimize(witness.strategy))
    return SolveResult("win", witness.strategy, witness, mu, stats)


def _general(game, spec, memory_bound: int) -> SolveResult:
    bound = len(game.observers[0].states) * len(spec.states)
    for size in range(1, memory_bound + 1):
        for S in enumerate_structures(game, size):
            if check_strategy(S, game) is not None:
                continue
            w = find_witness_annotation(S, game, spec)
            if w is None:
                continue
            w = relabel(w)
            if classify(w).max_dstate_size > bound:
                continue
            mu = _certify(w)
            return SolveResult("win", S, w, mu, {"nodes": size})
    return SolveResult("unknown", stats={"memory_bound": memory_bound})


def solve_one_player(game, spec, mode: str = "observable",
                     memory_bound: int = 3) -> SolveResult:
    if game.players != 1:
        raise NotOnePlayer(f"{game.players} players")
    if mode == "observable":
        return _observable(game, spec)
    if mode == "general":
        return _general(game, spec, memory_bound)
    raise ValueError(f"unknown mode {mode!r}")


def knowledge_memory_bound(game, spec) -> int:
    """Reachable (knowledge set, observer state) pairs.

    A strategy on these pairs can play any knowledge-based choice, so this
    many nodes suffice whenever the game is winning.
    """
    _, split = knowledge_arena(game, spec)
    obs = game.observers[0]
    start = (frozenset({(obs.initial, spec.initial)}), obs.initial)
    seen, todo = {start}, [start]
    while todo:
        K, m = todo.pop()
        for a in game.profiles:
            if any(not spec.transitions.get((q, a)) for _, q in K):
                continue
            posts = split(K, a)
            for d in game.directions:
                m2, b = obs.step(m, (a, d))
                nxt = (posts[b], m2)
                if nxt not in seen:
                    seen.add(nxt)
                    todo.append(nxt)
    return len(seen)


def dstate_bound(game, spec) -> int:
    """Largest d-state size allowed for one-player witnesses."""
    return len(game.observers[0].states) * len(spec.states)
