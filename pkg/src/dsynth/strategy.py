"""Decision structures, uniformity and private Moore machines."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Hashable, Mapping

from .game import GameSpec, ValidationError, canon, sort_canon


class NonUniform(ValueError):
    pass


class DecisionStructure:
    """Direction-driven deterministic graph with an action profile per node.

    ``edges[v, d]`` is the successor of ``v`` under direction ``d``.  Nodes
    unreachable from ``initial`` are pruned on construction.  Nodes listed in
    ``frontier`` are cut leaves of a truncated unravelling; they loop to
    themselves and carry no acceptance obligations.
    """

    def __init__(self, directions, edges: Mapping, choice: Mapping,
                 initial: Hashable, frontier=(), prune=True):
        self.directions = tuple(directions)
        self.initial = initial
        edges = dict(edges)
        choice = dict(choice)
        if prune:
            seen = {initial}
            todo = [initial]
            while todo:
                v = todo.pop()
                for d in self.directions:
                    try:
                        w = edges[v, d]
                    except KeyError:
                        raise ValidationError(
                            f"edge function not total: {v!r} on {d!r}") from None
                    if w not in seen:
                        seen.add(w)
                        todo.append(w)
            nodes = seen
        else:
            nodes = set(choice)
        missing = [v for v in nodes if v not in choice]
        if missing:
            raise ValidationError(f"no action for node {missing[0]!r}")
        self.nodes = tuple(sort_canon(nodes))
        self.edges = MappingProxyType(
            {(v, d): edges[v, d] for v in self.nodes for d in self.directions})
        self.choice = MappingProxyType({v: tuple(choice[v]) for v in self.nodes})
        self.frontier = frozenset(v for v in frontier if v in nodes)

    def __len__(self):
        return len(self.nodes)

    def succ(self, v, d):
        return self.edges[v, d]

    def successors(self, v) -> list:
        return [self.edges[v, d] for d in self.directions]

    def is_tree(self) -> bool:
        indeg = {}
        for (v, d), w in self.edges.items():
            if v in self.frontier:
                continue
            indeg[w] = indeg.get(w, 0) + 1
        return indeg.get(self.initial, 0) == 0 and all(c == 1 for c in indeg.values())

    def relabel(self, mapping: Mapping) -> "DecisionStructure":
        return DecisionStructure(
            self.directions,
            {(mapping[v], d): mapping[w] for (v, d), w in self.edges.items()},
            {mapping[v]: a for v, a in self.choice.items()},
            mapping[self.initial], [mapping[v] for v in self.frontier])

    def __eq__(self, other):
        return (isinstance(other, DecisionStructure)
                and self.directions == other.directions
                and self.initial == other.initial
                and dict(self.edges) == dict(other.edges)
                and dict(self.choice) == dict(other.choice)
                and self.frontier == other.frontier)

    def __hash__(self):
        return hash((self.nodes, self.initial))

    def __repr__(self):
        return f"DecisionStructure(nodes={len(self.nodes)}, initial={self.initial!r})"


def constant_strategy(game: GameSpec, profile, node="v") -> DecisionStructure:
    return DecisionStructure(game.directions, {(node, d): node for d in game.directions},
                             {node: tuple(profile)}, node)


def trace(S: DecisionStructure, history):
    """Node path of a history and whether the history follows ``S``."""
    v = S.initial
    path = [v]
    follows = True
    for profile, d in history:
        if tuple(profile) != S.choice[v]:
            follows = False
        v = S.edges[v, d]
        path.append(v)
    return path, follows


def histories(S: DecisionStructure, depth: int):
    """All (history, end node) pairs following ``S`` up to ``depth`` moves."""
    out = [((), S.initial)]
    layer = out
    for _ in range(depth):
        nxt = []
        for h, v in layer:
            for d in S.directions:
                nxt.append((h + ((S.choice[v], d),), S.edges[v, d]))
        out.extend(nxt)
        layer = nxt
    return out


@dataclass(frozen=True)
class UniformityRelation:
    """Per-player sets of related node pairs (reflexive, symmetric)."""

    pairs: tuple  # per player: frozenset of (v, w)
    parents: tuple = field(default=(), compare=False, repr=False)

    def related(self, i, v, w) -> bool:
        return (v, w) in self.pairs[i]

    def union(self) -> frozenset:
        out = set()
        for p in self.pairs:
            out |= p
        return frozenset(out)

    def witness(self, i, v, w):
        """Two histories with equal observations reaching ``v`` and ``w``."""
        parents = self.parents[i]
        key = next((k for k in sort_canon(parents) if k[0] == v and k[2] == w), None)
        if key is None:
            return None
        left, right = [], []
        while parents[key] is not None:
            prev, m1, m2 = parents[key]
            left.append(m1)
            right.append(m2)
            key = prev
        return tuple(reversed(left)), tuple(reversed(right))


def _step_options(S, game, v, all_histories):
    if all_histories:
        return [(p, d) for p in game.profiles for d in S.directions]
    return [(S.choice[v], d) for d in S.directions]


def compute_uniformity(S: DecisionStructure, game: GameSpec,
                       all_histories: bool = False) -> UniformityRelation:
    """Node pairs reachable by histories that look alike to each player.

    Explores the synchronized product of two copies of ``S`` and two copies
    of the player's observer.  By default only histories following ``S``
    are considered; ``all_histories=True`` drops that restriction.
    """
    rels, parents = [], []
    frontier = S.frontier
    for i, machine in enumerate(game.observers):
        q0 = machine.initial
        start = (S.initial, q0, S.initial, q0)
        par = {start: None}
        queue = deque([start])
        while queue:
            key = queue.popleft()
            v, q, w, r = key
            if v in frontier or w in frontier:
                continue
            opts_v = _step_options(S, game, v, all_histories)
            opts_w = _step_options(S, game, w, all_histories)
            steps_w = {}
            for m2 in opts_w:
                r2, b2 = machine.step(r, m2)
                steps_w.setdefault(b2, []).append((m2, r2))
            for m1 in opts_v:
                q1, b1 = machine.step(q, m1)
                for m2, r2 in steps_w.get(b1, ()):
                    nk = (S.edges[v, m1[1]], q1, S.edges[w, m2[1]], r2)
                    if nk not in par:
                        par[nk] = (key, m1, m2)
                        queue.append(nk)
        rels.append(frozenset((v, w) for v, _, w, _ in par))
        parents.append(par)
    return UniformityRelation(tuple(rels), tuple(parents))


@dataclass(frozen=True)
class Violation:
    player: int
    left: Hashable
    right: Hashable
    histories: tuple | None = None


def check_strategy(S: DecisionStructure, game: GameSpec,
                   uniformity: UniformityRelation | None = None):
    """Return ``None`` if ``S`` is uniform, else the first violation."""
    rel = uniformity or compute_uniformity(S, game)
    for i in range(game.players):
        for v, w in sort_canon(rel.pairs[i]):
            if S.choice[v][i] != S.choice[w][i]:
                return Violation(i, v, w, rel.witness(i, v, w))
    return None


def unravel(S: DecisionStructure, depth: int) -> DecisionStructure:
    """Tree unravelling cut at ``depth``; nodes are direction tuples."""
    edges, choice, frontier = {}, {}, []
    layer = [((), S.initial)]
    for level in range(depth + 1):
        nxt = []
        for path, v in layer:
            choice[path] = S.choice[v]
            for d in S.directions:
                if level == depth:
                    edges[path, d] = path
                else:
                    child = path + (d,)
                    edges[path, d] = child
                    nxt.append((child, S.edges[v, d]))
            if level == depth:
                frontier.append(path)
        layer = nxt
    return DecisionStructure(S.directions, edges, choice, (), frontier)


def minimize(S: DecisionStructure) -> DecisionStructure:
    """Quotient by behavioural equivalence (same actions along all paths).

    Frontier nodes are kept distinct from non-frontier ones.
    """
    block = {v: (S.choice[v], v in S.frontier) for v in S.nodes}
    while True:
        sig = {v: (block[v], tuple(block[S.edges[v, d]] for d in S.directions))
               for v in S.nodes}
        ids = {s: k for k, s in enumerate(sort_canon(set(sig.values())))}
        new = {v: ids[sig[v]] for v in S.nodes}
        if len(set(new.values())) == len(set(block.values())):
            block = new
            break
        block = new
    # renumber in BFS order from the initial node
    order = {}
    queue = deque([S.initial])
    while queue:
        v = queue.popleft()
        if block[v] in order:
            continue
        order[block[v]] = len(order)
        for d in S.directions:
            queue.append(S.edges[v, d])
    rep = {}
    for v in S.nodes:
        rep.setdefault(block[v], v)
    edges = {(order[b], d): order[block[S.edges[v, d]]]
             for b, v in rep.items() for d in S.directions}
    choice = {order[b]: S.choice[v] for b, v in rep.items()}
    frontier = [order[block[v]] for v in S.frontier]
    return DecisionStructure(S.directions, edges, choice, 0, frontier)


@dataclass(frozen=True)
class PrivateMooreMachine:
    """Observation-driven Moore machine for one player.

    States are knowledge sets: frozensets of (node, observer state) pairs
    that share an observation history.
    """

    player: int
    states: tuple
    initial: frozenset
    transitions: Mapping  # (state, observation) -> state
    output: Mapping       # state -> action

    def run(self, observations):
        k = self.initial
        for b in observations:
            k = self.transitions[k, b]
        return self.output[k]


def project_private(S: DecisionStructure, game: GameSpec, i: int) -> PrivateMooreMachine:
    """Subset construction turning ``S`` into player ``i``'s private machine."""
    machine = game.observers[i]
    start = frozenset({(S.initial, machine.initial)})
    trans, output = {}, {}
    seen = {start}
    todo = [start]
    while todo:
        k = todo.pop()
        acts = {S.choice[v][i] for v, _ in k if v not in S.frontier} or \
            {S.choice[v][i] for v, _ in k}
        if len(acts) != 1:
            raise NonUniform(f"player {i} sees knowledge set with actions {sort_canon(acts)}")
        output[k] = acts.pop()
        post = {}
        for v, q in k:
            if v in S.frontier:
                continue
            for d in S.directions:
                mv = (S.choice[v], d)
                q2, b = machine.step(q, mv)
                post.setdefault(b, set()).add((S.edges[v, d], q2))
        for b, nxt in post.items():
            nxt = frozenset(nxt)
            trans[k, b] = nxt
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    states = tuple(sort_canon(seen))
    return PrivateMooreMachine(i, states, start, MappingProxyType(trans),
                               MappingProxyType(output))
