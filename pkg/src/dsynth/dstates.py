"""Distributed states: connected components of the uniformity relation.

A d-state is a maximal set of nodes connected through the union of the
players' uniformity relations, together with the edges, per-player
relations and labels restricted to it.  Edges leaving the component are
kept as ``exits`` and ignored by the isomorphism test.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

from .game import canon, sort_canon
from .strategy import compute_uniformity

DEFAULT_BUDGET = 64


class IsomorphismBudget(RuntimeError):
    pass


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if canon(rb) < canon(ra):
                ra, rb = rb, ra
            self.parent[rb] = ra

    def groups(self):
        out = defaultdict(list)
        for x in self.parent:
            out[self.find(x)].append(x)
        return [sort_canon(g) for g in out.values()]


@dataclass(frozen=True)
class DState:
    nodes: tuple                      # canonical order
    labels: dict = field(compare=False)    # node -> (label, action, frontier?)
    relations: tuple = field(compare=False)  # per player: frozenset of pairs
    edges: frozenset = field(compare=False)  # internal (v, d, w)
    exits: frozenset = field(compare=False)  # (v, d, w) with w outside

    def __len__(self):
        return len(self.nodes)


def node_label(annotated, v):
    S = annotated.strategy
    return (annotated.labels[v], S.choice[v], v in S.frontier)


def compute_dstates(annotated, uniformity=None) -> list:
    S = annotated.strategy
    rel = uniformity or compute_uniformity(S, annotated.game)
    uf = _UnionFind(S.nodes)
    for pairs in rel.pairs:
        for v, w in pairs:
            uf.union(v, w)
    # bucket each player's pairs by component
    by_root = defaultdict(lambda: [set() for _ in rel.pairs])
    for i, pairs in enumerate(rel.pairs):
        for a, b in pairs:
            by_root[uf.find(a)][i].add((a, b))
    out = []
    for group in sorted(uf.groups(), key=lambda g: canon(g[0])):
        members = set(group)
        edges, exits = set(), set()
        for v in group:
            if v in S.frontier:
                continue
            for d in S.directions:
                w = S.edges[v, d]
                (edges if w in members else exits).add((v, d, w))
        rels = tuple(frozenset(p) for p in by_root[uf.find(group[0])])
        out.append(DState(tuple(group), {v: node_label(annotated, v) for v in group},
                          rels, frozenset(edges), frozenset(exits)))
    return out


def _signature(k: DState, v, edges=True):
    out_e = sorted((canon(d), w == v) for x, d, w in k.edges if x == v) if edges else []
    in_e = sorted(canon(d) for x, d, w in k.edges if w == v) if edges else []
    degs = tuple(sum(1 for a, _ in r if a == v) for r in k.relations)
    return (canon(k.labels[v]), tuple(out_e), tuple(in_e), degs)


def isomorphic(k1: DState, k2: DState, budget: int = DEFAULT_BUDGET, edges=True):
    """Least isomorphism ``k1 -> k2`` in canonical order, or ``None``.

    Preserves labels, each player's relation and, unless ``edges`` is
    false, direction-labelled internal edges.
    """
    if max(len(k1), len(k2)) > budget:
        raise IsomorphismBudget(f"d-state with {max(len(k1), len(k2))} nodes exceeds "
                                f"budget {budget}")
    if len(k1) != len(k2) or (edges and len(k1.edges) != len(k2.edges)) or \
            [len(r) for r in k1.relations] != [len(r) for r in k2.relations]:
        return None
    sig1 = {v: _signature(k1, v, edges) for v in k1.nodes}
    sig2 = {v: _signature(k2, v, edges) for v in k2.nodes}
    if sorted(sig1.values()) != sorted(sig2.values()):
        return None
    e1 = {(v, w): d for v, d, w in k1.edges} if edges else {}
    e2 = {(v, w): d for v, d, w in k2.edges} if edges else {}
    order = list(k1.nodes)
    mapping, used = {}, set()

    def consistent(v, w):
        for u, x in mapping.items():
            for r1, r2 in zip(k1.relations, k2.relations):
                if ((v, u) in r1) != ((w, x) in r2):
                    return False
            if e1.get((v, u)) != e2.get((w, x)) or e1.get((u, v)) != e2.get((x, w)):
                return False
        for r1, r2 in zip(k1.relations, k2.relations):
            if ((v, v) in r1) != ((w, w) in r2):
                return False
        return e1.get((v, v)) == e2.get((w, w))

    def extend(idx):
        if idx == len(order):
            return True
        v = order[idx]
        for w in k2.nodes:
            if w in used or sig1[v] != sig2[w] or not consistent(v, w):
                continue
            mapping[v] = w
            used.add(w)
            if extend(idx + 1):
                return True
            del mapping[v]
            used.discard(w)
        return False

    return dict(mapping) if extend(0) else None


@dataclass
class ClassReport:
    dstates: list
    classes: list            # list of lists of DState, canonical order
    budget: int = DEFAULT_BUDGET
    edges: bool = True

    @property
    def index(self) -> int:
        return len(self.classes)

    @property
    def class_sizes(self) -> list:
        return [len(c) for c in self.classes]

    @property
    def dstate_sizes(self) -> list:
        return [len(k) for k in self.dstates]

    @property
    def max_dstate_size(self) -> int:
        return max(self.dstate_sizes, default=0)

    @property
    def max_class_size(self) -> int:
        return max(self.class_sizes, default=0)

    def class_of(self, k: DState) -> int:
        for idx, members in enumerate(self.classes):
            if any(m.nodes == k.nodes for m in members):
                return idx
        raise KeyError(k.nodes)


def _invariant(k: DState, edges=True):
    return (len(k), len(k.edges) if edges else 0, tuple(len(r) for r in k.relations),
            tuple(sorted(_signature(k, v, edges) for v in k.nodes)))


def classify(annotated, budget: int = DEFAULT_BUDGET, dstates=None,
             edges: bool = True) -> ClassReport:
    """Partition the d-states into isomorphism classes.

    With ``edges=False`` internal edges are ignored, comparing only labels
    and the players' relations.
    """
    ks = dstates if dstates is not None else compute_dstates(annotated)
    buckets = defaultdict(list)   # invariant -> list of classes
    classes = []
    for k in ks:
        inv = _invariant(k, edges)
        for members in buckets[inv]:
            if isomorphic(members[0], k, budget, edges) is not None:
                members.append(k)
                break
        else:
            members = [k]
            buckets[inv].append(members)
            classes.append(members)
    return ClassReport(ks, classes, budget, edges)


def match_class(k: DState, report: ClassReport):
    """Index of the class of ``report`` isomorphic to ``k``, or ``None``."""
    inv = _invariant(k, report.edges)
    for idx, members in enumerate(report.classes):
        if _invariant(members[0], report.edges) == inv and isomorphic(
                members[0], k, report.budget, report.edges) is not None:
            return idx
    return None


def tree_level_sizes(S, game, depth: int) -> list:
    """Per-depth (count, max size) of d-states of the unravelling of ``S``.

    On trees the uniformity relation of each player is plain
    indistinguishability, so nodes are grouped by observation sequence
    without building the product.
    """
    observers = game.observers
    # observation histories are interned as integers, one table per player
    intern = [{} for _ in observers]
    layer = [(S.initial, tuple(o.initial for o in observers),
              tuple(0 for _ in observers))]
    rows = []
    for level in range(depth + 1):
        uf = _UnionFind(range(len(layer)))
        for i in range(len(observers)):
            first = {}
            for idx, (_, _, obs) in enumerate(layer):
                if obs[i] in first:
                    uf.union(first[obs[i]], idx)
                else:
                    first[obs[i]] = idx
        groups = uf.groups()
        rows.append((level, len(groups), max(len(g) for g in groups)))
        if level == depth:
            break
        nxt = []
        for v, ms, obs in layer:
            a = S.choice[v]
            for d in S.directions:
                steps = [o.step(m, (a, d)) for o, m in zip(observers, ms)]
                ids = tuple(intern[i].setdefault((h, s[1]), len(intern[i]) + 1)
                            for i, (h, s) in enumerate(zip(obs, steps)))
                nxt.append((S.edges[v, d], tuple(s[0] for s in steps), ids))
        layer = nxt
    return rows
