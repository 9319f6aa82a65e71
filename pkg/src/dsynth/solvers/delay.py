"""Coordination games where each player sees every move after a delay.

Encoding.  A base game has per-player actions and base directions.  The
delay-form game extends each direction with one hold bit per player:
direction ``"l|01"`` is base direction ``l`` with player 0 releasing and
player 1 holding.  Player ``i``'s observer buffers undelivered moves.  On
release it delivers the whole buffer plus the current move; on hold it
appends the current move and delivers only what no longer fits in ``k``
slots.  Observations are the delivered tuples of full moves, so every move
reaches every player within ``k`` rounds.  With ``k = 0`` no bits exist and
the game has perfect information.

Solving.  Two histories whose last common node lies more than ``k`` steps
back are told apart by everyone, so a team strategy is fixed by choices
made on depth-``k`` windows below a common horizon.  The planner arena
has positions ``(automaton state at the horizon, observer buffers at the
horizon, window of chosen actions)``.  The planner fills the next window
level, choosing one action per player for every group of leaves that
player cannot tell apart, and an automaton transition at the horizon;
Nature then picks the horizon's direction.  Buffer entries older than the
horizon are shared by all window nodes, so they are replaced by ``"*"``.
"""
from __future__ import annotations

import itertools

from ..annotation import check_annotation, find_witness_annotation, is_witness, relabel
from ..game import GameSpec, ParityTreeAutomaton, canon, sort_canon
from ..progress import check_measure, compute_measure
from ..strategy import DecisionStructure, check_strategy, minimize
from .one_player import SolveResult
from .parity import ParityArena, solve_parity

MAX_DELAY = 3


class DelayOutOfRange(ValueError):
    pass


class NotDelayForm(ValueError):
    pass


class DelayObserver:
    """Buffering observer of one player (states are tuples of moves)."""

    states = None  # generated on demand

    def __init__(self, player: int, k: int):
        self.player = player
        self.k = k
        self.initial = ()

    def step(self, state, move):
        _, direction = move
        buf = state + (move,)
        if self.k == 0 or hold_bits(direction)[self.player] == "0":
            return (), buf
        cut = max(0, len(buf) - self.k)
        return buf[cut:], buf[:cut]

    def __eq__(self, other):
        return (isinstance(other, DelayObserver) and other.player == self.player
                and other.k == self.k)

    def __hash__(self):
        return hash(("delay", self.player, self.k))

    def __repr__(self):
        return f"DelayObserver(player={self.player}, k={self.k})"


def hold_bits(direction: str) -> str:
    return direction.split("|", 1)[1]


def base_direction(direction: str) -> str:
    return direction.split("|", 1)[0]


def delay_directions(base_dirs, players: int, k: int, shared: bool = False) -> tuple:
    """Extended directions; ``shared`` gives all players the same hold bit."""
    if not k:
        bits = ["0" * players]
    elif shared:
        bits = ["0" * players, "1" * players]
    else:
        bits = ["".join(b) for b in itertools.product("01", repeat=players)]
    return tuple(f"{d}|{b}" for d in base_dirs for b in bits)


def delay_game(actions, base_dirs, k: int, shared: bool = False) -> GameSpec:
    if not 0 <= k <= MAX_DELAY:
        raise DelayOutOfRange(f"delay {k} outside 0..{MAX_DELAY}")
    n = len(actions)
    return GameSpec(actions, delay_directions(base_dirs, n, k, shared),
                    tuple(DelayObserver(i, k) for i in range(n)))


def delay_of(game: GameSpec) -> int:
    obs = game.observers
    if not obs or not all(isinstance(o, DelayObserver) for o in obs):
        raise NotDelayForm("observers are not delay buffers")
    ks = {o.k for o in obs}
    if len(ks) != 1:
        raise NotDelayForm("players have different delay bounds")
    return ks.pop()


def lift_spec(base: ParityTreeAutomaton, game: GameSpec) -> ParityTreeAutomaton:
    """Automaton over extended directions ignoring the hold bits."""
    dirs = game.directions
    trans = {key: [tuple(t[base.directions.index(base_direction(d))] for d in dirs)
                   for t in tuples]
             for key, tuples in base.transitions.items()}
    return ParityTreeAutomaton(base.states, base.initial, dirs, trans,
                               dict(base.priorities))


def _forget(buffers):
    return tuple(("*",) * len(b) for b in buffers)


class _Planner:
    """Planner arena.

    ``("pos", q, buffers, j, window)`` planner fills window depth ``j``;
    ``("adv", q, buffers, window, t)`` Nature picks the horizon direction;
    ``("loc", q, buffers, window, t, d)`` planner fills the groups below ``d``.

    Leaf groups whose members all sit below one root direction only matter
    once Nature has picked that direction, so they are chosen afterwards;
    the game value is unchanged and the arena is much smaller.
    """

    def __init__(self, game: GameSpec, spec: ParityTreeAutomaton, k: int):
        self.game, self.spec, self.k = game, spec, k
        self.dirs = game.directions
        self.obs = game.observers
        self.paths = [list(itertools.product(self.dirs, repeat=j)) for j in range(k + 1)]
        self._groups = {}

    def start(self):
        return ("pos", self.spec.initial, tuple(o.initial for o in self.obs), 0, ())

    def _leaf_observations(self, hm, window, path):
        """Per-player observation sequences from the horizon along ``path``."""
        ms = list(hm)
        seqs = [[] for _ in self.obs]
        for j in range(len(path)):
            a = window[path[:j]]
            for i, o in enumerate(self.obs):
                ms[i], b = o.step(ms[i], (a, path[j]))
                seqs[i].append(b)
        return tuple(tuple(s) for s in seqs)

    def groups(self, hm, j, wkey):
        """Per player: list of leaf groups at depth ``j``, canonical order."""
        key = (hm, j, wkey)
        if key not in self._groups:
            window = dict(wkey)
            out = []
            for i in range(len(self.obs)):
                by_obs = {}
                for leaf in self.paths[j]:
                    b = self._leaf_observations(hm, window, leaf)[i]
                    by_obs.setdefault(b, []).append(leaf)
                out.append([tuple(by_obs[b]) for b in sort_canon(by_obs)])
            self._groups[key] = out
        return self._groups[key]

    def _assign(self, groups, select):
        """Uniform assignments to the selected groups, as (leaf, profile) tuples."""
        n = len(self.obs)
        chosen = [[g for g in groups[i] if select(g)] for i in range(n)]
        leaves = sorted({leaf for gs in chosen for g in gs for leaf in g}, key=canon)
        acts = [sort_canon(a) for a in self.game.actions]
        for combo in itertools.product(*(itertools.product(acts[i], repeat=len(chosen[i]))
                                         for i in range(n))):
            prof = {leaf: [None] * n for leaf in leaves}
            for i in range(n):
                for g, a in zip(chosen[i], combo[i]):
                    for leaf in g:
                        prof[leaf][i] = a
            yield tuple((leaf, tuple(prof[leaf])) for leaf in leaves)

    @staticmethod
    def _spanning(g):
        return not g[0] or any(leaf[0] != g[0][0] for leaf in g)

    @staticmethod
    def merge(wkey, assign):
        """Add an assignment to a window; partial profiles are combined."""
        window = dict(wkey)
        for leaf, prof in assign:
            old = window.get(leaf)
            window[leaf] = prof if old is None else tuple(
                x if x is not None else y for x, y in zip(old, prof))
        return tuple(sorted(window.items(), key=lambda p: canon(p[0])))

    def advance(self, hq, hm, wkey, t, d):
        window = dict(wkey)
        a = window[()]
        hm2 = tuple(o.step(m, (a, d))[0] for o, m in zip(self.obs, hm))
        shifted = tuple((p[1:], b) for p, b in wkey if p and p[0] == d)
        shifted = tuple(sorted(shifted, key=lambda p: canon(p[0])))
        return ("pos", self.spec.successor(t, d), _forget(hm2), self.k, shifted)

    def _moves(self, pos):
        spec, k = self.spec, self.k
        if pos[0] == "adv":
            _, hq, hm, wkey, t = pos
            return 1, [(d, ("loc", hq, hm, wkey, t, d)) for d in self.dirs]
        if pos[0] == "loc":
            _, hq, hm, wkey, t, d = pos
            groups = self.groups(hm, k, tuple(p for p in wkey if len(p[0]) < k))
            if k == 0:
                return 0, [((), self.advance(hq, hm, wkey, t, d))]
            opts = []
            for assign in self._assign(groups, lambda g: not self._spanning(g)
                                       and g[0][0] == d):
                w2 = self.merge(wkey, assign)
                opts.append((("local", assign), self.advance(hq, hm, w2, t, d)))
            return 0, opts
        _, hq, hm, j, wkey = pos
        groups = self.groups(hm, j, wkey)
        opts = []
        if j < k:
            for assign in self._assign(groups, lambda g: True):
                opts.append((("fill", assign), ("pos", hq, hm, j + 1,
                                                self.merge(wkey, assign))))
            return 0, opts
        for assign in self._assign(groups, self._spanning):
            w2 = self.merge(wkey, assign)
            for t in spec.options(hq, dict(w2)[()]):
                opts.append((("commit", assign, t), ("adv", hq, hm, w2, t)))
        return 0, opts

    def arena(self):
        start = self.start()
        owner, moves, prio = {}, {}, {}
        todo = [start]
        owner[start] = 0
        while todo:
            pos = todo.pop()
            who, opts = self._moves(pos)
            owner[pos] = who
            prio[pos] = self.spec.priorities[pos[1]]
            moves[pos] = opts
            for _, nxt in opts:
                if nxt not in owner:
                    owner[nxt] = None
                    todo.append(nxt)
        return ParityArena(owner, moves, prio, start)


def _extract(planner: _Planner, sol, arena) -> DecisionStructure:
    """Turn a positional planner strategy into a finite team strategy.

    Nodes are ``(position, path)`` with ``path`` the node's place in the
    window of the planner position.
    """
    step = sol.successor

    def resolve(pos, w):
        """Action at ``w`` and the position its children belong to."""
        nxt = step[pos]
        if nxt[0] == "pos":                      # warm-up: window grows
            return dict(nxt[4])[w], nxt
        if not w:                                # delay 0: only the root
            return dict(nxt[3])[()], None
        loc = dict(arena.moves[nxt])[w[0]]
        window = dict(planner.merge(nxt[3], sol.strategy[loc][1]))
        return window[w], step[loc]

    start = (arena.initial, ())
    edges, choice = {}, {}
    todo, seen = [start], {start}
    while todo:
        node = todo.pop()
        pos, w = node
        choice[node], after = resolve(pos, w)
        for d in planner.dirs:
            if after is None:
                child = (step[dict(arena.moves[step[pos]])[d]], ())
            elif after[0] == "pos" and step[pos][0] == "pos":
                child = (after, w + (d,))
            else:
                child = (after, w[1:] + (d,))
            edges[node, d] = child
            if child not in seen:
                seen.add(child)
                todo.append(child)
    return DecisionStructure(planner.dirs, edges, choice, start)


def window_memory_bound(game: GameSpec, spec: ParityTreeAutomaton, k: int) -> int:
    """Nodes needed to remember the automaton state and a depth-``k`` window."""
    return len(spec.states) * len(game.directions) ** k


def solve_delay(game: GameSpec, spec: ParityTreeAutomaton, k: int | None = None
                ) -> SolveResult:
    found = delay_of(game)
    if k is None:
        k = found
    if not 0 <= k <= MAX_DELAY:
        raise DelayOutOfRange(f"delay {k} outside 0..{MAX_DELAY}")
    if k != found:
        raise NotDelayForm(f"game encodes delay {found}, asked for {k}")
    planner = _Planner(game, spec, k)
    arena = planner.arena()
    sol = solve_parity(arena)
    stats = {"arena_positions": len(arena.owner), "k": k}
    if arena.initial not in sol.winning:
        return SolveResult("lose", stats=stats)
    S = _extract(planner, sol, arena)
    bad = check_strategy(S, game)
    assert bad is None, bad
    witness = find_witness_annotation(S, game, spec)
    assert witness is not None
    witness = relabel(witness)
    assert check_annotation(witness) is None and is_witness(witness)[0]
    mu = compute_measure(witness)
    assert mu is not None and check_measure(witness, mu) is None
    stats.update(nodes=len(S), minimized_nodes=len(minimize(S)),
                 witness_nodes=len(witness.strategy))
    return SolveResult("win", witness.strategy, witness, mu, stats)


def product_arena(game: GameSpec, spec: ParityTreeAutomaton) -> ParityArena:
    """Perfect-information arena of ``spec`` over ``game``, observers ignored.

    The team picks a profile and a transition tuple, Nature a direction.
    With delay 0 its winner agrees with :func:`solve_delay`.
    """
    owner, moves, prio = {}, {}, {}
    start = ("q", spec.initial)
    todo = [start]
    owner[start] = 0
    while todo:
        pos = todo.pop()
        if pos[0] == "q":
            q = pos[1]
            opts = [((a, t), ("t", q, t)) for a in game.profiles
                    for t in spec.options(q, a)]
        else:
            _, q, t = pos
            opts = [(d, ("q", spec.successor(t, d))) for d in game.directions]
        moves[pos], prio[pos] = opts, spec.priorities[pos[1]]
        for _, nxt in opts:
            if nxt not in owner:
                owner[nxt] = 1 if nxt[0] == "t" else 0
                todo.append(nxt)
    return ParityArena(owner, moves, prio, start)
