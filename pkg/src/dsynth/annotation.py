"""Annotated strategies, witness checking and witness construction."""
from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

import networkx as nx

from .game import GameSpec, ParityTreeAutomaton, ValidationError, sort_canon
from .strategy import DecisionStructure, unravel


class NoWitness(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class AnnotatedStrategy:
    """Strategy whose nodes carry ``(observer states, automaton state)``."""

    strategy: DecisionStructure
    labels: Mapping
    game: GameSpec
    spec: ParityTreeAutomaton

    def __post_init__(self):
        object.__setattr__(self, "labels", MappingProxyType(
            {v: (tuple(self.labels[v][0]), self.labels[v][1])
             for v in self.strategy.nodes}))

    def spec_state(self, v):
        return self.labels[v][1]

    def priority(self, v) -> int:
        return self.spec.priorities[self.labels[v][1]]

    def __eq__(self, other):
        return (isinstance(other, AnnotatedStrategy)
                and self.strategy == other.strategy
                and dict(self.labels) == dict(other.labels))

    def __hash__(self):
        return hash(self.strategy)


@dataclass(frozen=True)
class AnnotationError:
    kind: str  # "initial", "mealy", "run"
    node: object
    direction: object = None
    player: int | None = None
    expected: object = None
    found: object = None


def check_annotation(annotated: AnnotatedStrategy) -> AnnotationError | None:
    S, game, spec = annotated.strategy, annotated.game, annotated.spec
    labels = annotated.labels
    spec_states = set(spec.states)
    for v in S.nodes:
        ms, q = labels[v]
        if q not in spec_states or len(ms) != game.players or any(
                m not in obs.states for m, obs in zip(ms, game.observers)
                if hasattr(obs, "states") and obs.states):
            raise ValidationError(f"label of node {v!r} references undeclared state")
    init = (tuple(o.initial for o in game.observers), spec.initial)
    if labels[S.initial] != init:
        return AnnotationError("initial", S.initial, expected=init,
                               found=labels[S.initial])
    for v in S.nodes:
        if v in S.frontier:
            continue
        ms, q = labels[v]
        a = S.choice[v]
        for d in S.directions:
            w = S.edges[v, d]
            for i, obs in enumerate(game.observers):
                nxt, _ = obs.step(ms[i], (a, d))
                if labels[w][0][i] != nxt:
                    return AnnotationError("mealy", v, d, i, nxt, labels[w][0][i])
        tup = tuple(labels[S.edges[v, d]][1] for d in spec.directions)
        if tup not in spec.transitions.get((q, a), ()):
            return AnnotationError("run", v, expected=spec.options(q, a), found=tup)
    return None


def _graph(S: DecisionStructure) -> nx.DiGraph:
    g = nx.DiGraph()
    g.add_nodes_from(S.nodes)
    for (v, d), w in S.edges.items():
        if v not in S.frontier:
            g.add_edge(v, w)
    return g


def is_witness(annotated: AnnotatedStrategy):
    """Check the parity condition on every path.

    Returns ``(True, None)`` or ``(False, lasso)`` where ``lasso`` is a pair
    ``(stem, cycle)`` of node lists; the cycle's least priority is odd.
    """
    S = annotated.strategy
    g = _graph(S)
    prio = {v: annotated.priority(v) for v in S.nodes}
    for k in range(1, annotated.spec.num_priorities, 2):
        sub = g.subgraph([v for v in S.nodes if prio[v] >= k])
        for comp in sorted(nx.strongly_connected_components(sub),
                           key=lambda c: sort_canon(c)[0]):
            hits = sort_canon(v for v in comp if prio[v] == k)
            if not hits:
                continue
            if len(comp) == 1 and not sub.has_edge(hits[0], hits[0]):
                continue
            v = hits[0]
            stem = nx.shortest_path(g, S.initial, v)
            inner = sub.subgraph(comp)
            back = min((nx.shortest_path(inner, w, v) for w in inner.successors(v)),
                       key=len)
            return False, (stem, [v] + back[:-1])
    return True, None


def _product_positions(S, game, spec):
    """Reachable (node, observer states, automaton state) triples, lazily."""
    obs = game.observers

    def step(pos, choice, d):
        v, ms, _ = pos
        a = S.choice[v]
        ms2 = tuple(o.step(m, (a, d))[0] for o, m in zip(obs, ms))
        return (S.edges[v, d], ms2, spec.successor(choice, d))

    start = (S.initial, tuple(o.initial for o in obs), spec.initial)
    return start, step


def find_witness_annotation(S: DecisionStructure, game: GameSpec,
                            spec: ParityTreeAutomaton) -> AnnotatedStrategy | None:
    """Refine ``S`` by a product so it carries an accepting run, if any.

    Automaton picks a transition tuple at each (node, observer states,
    automaton state); Pathfinder picks a direction.  A positional winning
    choice for Automaton labels the product.
    """
    from .solvers.parity import ParityArena, solve_parity

    start, step = _product_positions(S, game, spec)
    owner, moves, prio = {}, {}, {}
    todo = [start]
    owner[start] = 0
    while todo:
        pos = todo.pop()
        v, ms, q = pos
        prio[pos] = spec.priorities[q]
        if v in S.frontier:
            moves[pos] = [("stop", ("top", "win"))]
            continue
        opts = []
        for t in spec.options(q, S.choice[v]):
            mid = ("mid", pos, t)
            opts.append((t, mid))
            if mid not in owner:
                owner[mid] = 1
                prio[mid] = spec.priorities[q]
                nexts = []
                for d in S.directions:
                    nxt = step(pos, t, d)
                    nexts.append((d, nxt))
                    if nxt not in owner:
                        owner[nxt] = 0
                        todo.append(nxt)
                moves[mid] = nexts
        moves[pos] = opts
    top = ("top", "win")
    owner[top], prio[top], moves[top] = 0, 0, [("stop", top)]
    arena = ParityArena(owner, moves, prio, start)
    result = solve_parity(arena)
    if start not in result.winning:
        return None
    edges, choice, labels, frontier = {}, {}, {}, []
    seen = {start}
    todo = [start]
    while todo:
        pos = todo.pop()
        v, ms, q = pos
        choice[pos] = S.choice[v]
        labels[pos] = (ms, q)
        if v in S.frontier:
            frontier.append(pos)
            for d in S.directions:
                edges[pos, d] = pos
            continue
        t = result.strategy[pos]
        for d in S.directions:
            nxt = step(pos, t, d)
            edges[pos, d] = nxt
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    R = DecisionStructure(S.directions, edges, choice, start, frontier)
    annotated = AnnotatedStrategy(R, labels, game, spec)
    assert check_annotation(annotated) is None
    assert is_witness(annotated)[0]
    return annotated


def annotate_tree(S: DecisionStructure, game: GameSpec, spec: ParityTreeAutomaton,
                  depth: int, witness: AnnotatedStrategy | None = None
                  ) -> AnnotatedStrategy:
    """Push a witness annotation of ``S`` onto its unravelling to ``depth``."""
    witness = witness or find_witness_annotation(S, game, spec)
    if witness is None:
        raise NoWitness("no accepting run on the outcome of this strategy")
    W = witness.strategy
    T = unravel(W, depth)
    labels = {}
    for path in T.nodes:
        v = W.initial
        for d in path:
            v = W.edges[v, d]
        labels[path] = witness.labels[v]
    return AnnotatedStrategy(T, labels, game, spec)


def relabel(annotated: AnnotatedStrategy, prefix: str = "n") -> AnnotatedStrategy:
    """Rename nodes to ``n0, n1, ...`` in breadth-first order."""
    S = annotated.strategy
    names = {}
    queue = [S.initial]
    for v in queue:
        if v in names:
            continue
        names[v] = f"{prefix}{len(names)}"
        queue.extend(S.edges[v, d] for d in S.directions)
    T = S.relabel(names)
    return AnnotatedStrategy(T, {names[v]: annotated.labels[v] for v in S.nodes},
                             annotated.game, annotated.spec)


def annotate_truncation(S: DecisionStructure, game: GameSpec, spec: ParityTreeAutomaton,
                        depth: int) -> AnnotatedStrategy:
    """Witness annotation of the unravelling of ``S`` cut at ``depth``.

    Cut leaves carry no obligations, so this exists whenever the automaton
    can be run for ``depth`` steps, even if ``S`` itself is not winning.
    """
    T = unravel(S, depth)
    w = find_witness_annotation(T, game, spec)
    if w is None:
        raise NoWitness(f"no run of length {depth} on this strategy")
    labels = {path: None for path in T.nodes}
    for pos in w.strategy.nodes:
        labels[pos[0]] = w.labels[pos]
    return AnnotatedStrategy(T, labels, game, spec)
