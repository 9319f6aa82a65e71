"""Parity progress measures on annotated strategies.

Measures are tuples of naturals, one component per priority.  For a node
``u`` of priority ``k`` every edge ``u -> v`` must satisfy
``mu(u) >=_k mu(v)`` when ``k`` is even and ``mu(u) >_k mu(v)`` when ``k``
is odd, comparing only the first ``k + 1`` components lexicographically.
"""
from __future__ import annotations

from dataclasses import dataclass


def compare_lex(x, y, k: int) -> int:
    """Compare the length-``k+1`` prefixes of ``x`` and ``y``: -1, 0 or 1."""
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    if not 0 <= k < len(x):
        raise ValueError(f"priority {k} out of range for tuples of length {len(x)}")
    a, b = tuple(x[:k + 1]), tuple(y[:k + 1])
    return (a > b) - (a < b)


def edge_ok(mu_u, mu_v, k: int) -> bool:
    c = compare_lex(mu_u, mu_v, k)
    return c > 0 if k % 2 else c >= 0


@dataclass(frozen=True)
class MeasureViolation:
    source: object
    direction: object
    target: object
    priority: int


def _labelled_edges(annotated):
    S = annotated.strategy
    for u in S.nodes:
        if u in S.frontier:
            continue
        k = annotated.priority(u)
        for d in S.directions:
            yield u, d, S.edges[u, d], k


def check_measure(annotated, mu) -> MeasureViolation | None:
    """First edge violating the progress condition, or ``None``."""
    for u, d, v, k in _labelled_edges(annotated):
        if not edge_ok(mu[u], mu[v], k):
            return MeasureViolation(u, d, v, k)
    return None


def compute_measure(annotated) -> dict | None:
    """Least-fixed-point measure, or ``None`` if a reachable odd cycle exists.

    For each odd priority ``k`` (ascending), ``mu_k(v)`` is the largest
    number of priority-``k`` nodes met on a path from ``v`` that stays in
    nodes of priority at least ``k``; it is computed by iterating
    ``mu_k(v) = [p(v) == k] + max(mu_k(w))`` over such successors, which
    stabilises within ``|V|`` rounds exactly when no cycle of the sub-graph
    passes through a priority-``k`` node.  Even components are zero.
    """
    S = annotated.strategy
    r = annotated.spec.num_priorities
    nodes = S.nodes
    prio = {v: annotated.priority(v) for v in nodes}
    succs = {v: () if v in S.frontier else tuple(S.successors(v)) for v in nodes}
    comps = {v: [0] * r for v in nodes}
    for k in range(1, r, 2):
        inside = [v for v in nodes if prio[v] >= k and v not in S.frontier]
        val = {v: 0 for v in nodes}
        bound = sum(1 for v in inside if prio[v] == k)
        changed = True
        rounds = 0
        while changed:
            changed = False
            rounds += 1
            for v in inside:
                best = max((val[w] for w in succs[v] if prio[w] >= k), default=0)
                new = best + (prio[v] == k)
                if new != val[v]:
                    if new > bound:
                        return None
                    val[v] = new
                    changed = True
        for v in inside:
            comps[v][k] = val[v]
    return {v: tuple(c) for v, c in comps.items()}
