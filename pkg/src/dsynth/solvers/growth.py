"""Per-depth growth of d-states on bounded unravellings.

Without a strategy the unravelling is the full tree of histories, each
node labelled with the automaton states reachable along it (the
obligations still open).  With a strategy only followed histories are
kept and nodes also carry the action played.  On a tree every player's
uniformity relation is plain indistinguishability, so each level is
grouped by observation sequence.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..dstates import DEFAULT_BUDGET, DState, _UnionFind, classify
from ..game import sort_canon

MAX_DEPTH = 8
MAX_LEVEL_NODES = 300_000


@dataclass(frozen=True)
class GrowthRow:
    depth: int
    dstates: int
    max_size: int
    classes: int | None     # None when some d-state exceeds the budget

    def as_tuple(self):
        return (self.depth, self.dstates, self.max_size, self.classes)


def _reachable_states(spec, qs, profile, d):
    out = set()
    for q in qs:
        for t in spec.options(q, profile):
            out.add(spec.successor(t, d))
    return frozenset(out)


def _classes(layer, groups, n, budget):
    if max(len(g) for g in groups) > budget:
        return None
    ks = []
    for g in groups:
        labels = {idx: (sort_canon(layer[idx][3]), layer[idx][4]) for idx in g}
        rels = tuple(frozenset((a, b) for a in g for b in g
                               if layer[a][2][i] == layer[b][2][i]) for i in range(n))
        ks.append(DState(tuple(g), labels, rels, frozenset(), frozenset()))
    return classify(None, budget, dstates=ks, edges=False).index


def diagnose_growth(game, spec, depth: int, strategy=None, budget: int = DEFAULT_BUDGET,
                    classes: bool = True) -> list:
    """Rows ``(depth, #d-states, max d-state size, #isomorphism classes)``."""
    if not 0 <= depth <= MAX_DEPTH:
        raise ValueError(f"depth {depth} outside 0..{MAX_DEPTH}")
    observers = game.observers
    n = len(observers)
    intern = [{} for _ in observers]
    # (strategy node, observer states, observation ids, automaton states, action)
    v0 = strategy.initial if strategy is not None else None
    a0 = strategy.choice[v0] if strategy is not None else None
    layer = [(v0, tuple(o.initial for o in observers), (0,) * n,
              frozenset({spec.initial}), a0)]
    rows = []
    for level in range(depth + 1):
        uf = _UnionFind(range(len(layer)))
        for i in range(n):
            first = {}
            for idx, entry in enumerate(layer):
                first.setdefault(entry[2][i], idx)
                uf.union(first[entry[2][i]], idx)
        groups = uf.groups()
        rows.append(GrowthRow(level, len(groups), max(len(g) for g in groups),
                              _classes(layer, groups, n, budget) if classes else None))
        if level == depth:
            break
        nxt = []
        for v, ms, obs, qs, act in layer:
            moves = [(act, d) for d in game.directions] if strategy is not None \
                else game.moves
            for a, d in moves:
                steps = [o.step(m, (a, d)) for o, m in zip(observers, ms)]
                ids = tuple(intern[i].setdefault((h, s[1]), len(intern[i]) + 1)
                            for i, (h, s) in enumerate(zip(obs, steps)))
                w = strategy.edges[v, d] if strategy is not None else None
                nxt.append((w, tuple(s[0] for s in steps), ids,
                            _reachable_states(spec, qs, a, d),
                            strategy.choice[w] if strategy is not None else None))
        if len(nxt) > MAX_LEVEL_NODES:
            raise ValueError(f"level {level + 1} has {len(nxt)} nodes, "
                             f"more than {MAX_LEVEL_NODES}")
        layer = nxt
    return rows
