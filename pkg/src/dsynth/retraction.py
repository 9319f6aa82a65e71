"""Retractions: folding a strategy by redirecting nodes to other nodes.

For a map ``h`` on the nodes, the image plays at ``u`` what ``S`` plays at
``h(u)`` and continues along the edges of ``h(u)``; only nodes reachable
from ``h(initial)`` are kept.
"""
from __future__ import annotations

from dataclasses import dataclass

from .annotation import AnnotatedStrategy, check_annotation, is_witness
from .dstates import DEFAULT_BUDGET, classify, isomorphic, match_class
from .game import canon, sort_canon
from .progress import check_measure, compare_lex
from .strategy import DecisionStructure, check_strategy


class RetractionError(ValueError):
    """A map fails the conditions required of a retraction."""

    def __init__(self, message, detail=None):
        super().__init__(message)
        self.detail = detail


class InfiniteDState(RetractionError):
    pass


@dataclass(frozen=True)
class RetractionViolation:
    kind: str        # "label", "uniformity", "monotone", "partial"
    node: object
    other: object = None
    player: int | None = None


def identity(annotated) -> dict:
    return {v: v for v in annotated.strategy.nodes}


def image(S: DecisionStructure, h) -> DecisionStructure:
    edges = {(u, d): S.edges[h[u], d] for u in S.nodes for d in S.directions}
    choice = {u: S.choice[h[u]] for u in S.nodes}
    frontier = [u for u in S.nodes if h[u] in S.frontier]
    # frontier nodes keep their self-loop in the image
    for u in frontier:
        for d in S.directions:
            edges[u, d] = u
    return DecisionStructure(S.directions, edges, choice, h[S.initial], frontier)


def _restrict(annotated, T: DecisionStructure) -> AnnotatedStrategy:
    return AnnotatedStrategy(T, {v: annotated.labels[v] for v in T.nodes},
                             annotated.game, annotated.spec)


def check_retraction(annotated: AnnotatedStrategy, h) -> RetractionViolation | None:
    S = annotated.strategy
    for v in S.nodes:
        if v not in h:
            return RetractionViolation("partial", v)
        if annotated.labels[v] != annotated.labels[h[v]]:
            return RetractionViolation("label", v, h[v])
    T = image(S, h)
    bad = check_strategy(T, annotated.game)
    if bad is not None:
        return RetractionViolation("uniformity", bad.left, bad.right, bad.player)
    assert check_annotation(_restrict(annotated, T)) is None
    return None


def check_monotone(annotated: AnnotatedStrategy, mu, h) -> RetractionViolation | None:
    for v in annotated.strategy.nodes:
        if compare_lex(mu[v], mu[h[v]], annotated.priority(v)) < 0:
            return RetractionViolation("monotone", v, h[v])
    return None


def retract(annotated: AnnotatedStrategy, mu, h):
    """Apply a monotone retraction; returns ``(retract, restricted measure)``."""
    bad = check_retraction(annotated, h)
    if bad is not None:
        raise RetractionError(f"not a retraction: {bad.kind} at {bad.node!r}", bad)
    bad = check_monotone(annotated, mu, h)
    if bad is not None:
        raise RetractionError(f"not monotone at {bad.node!r}", bad)
    T = image(annotated.strategy, h)
    out = _restrict(annotated, T)
    nu = {v: mu[v] for v in T.nodes}
    assert check_measure(out, nu) is None
    return out, nu


def compose(g, h, annotated: AnnotatedStrategy, mu) -> dict:
    """Combine ``g`` (on ``annotated``) with ``h`` (on its retract by ``g``).

    The result applies ``h`` first, then ``g``; nodes outside the retract
    are left for ``g`` alone.
    """
    inner, nu = retract(annotated, mu, g)
    for check in (check_retraction(inner, h), check_monotone(inner, nu, h)):
        if check is not None:
            raise RetractionError(f"second map rejected: {check.kind} at {check.node!r}",
                                  check)
    out = {v: g[h.get(v, v)] if v in inner.strategy.nodes else g[v]
           for v in annotated.strategy.nodes}
    for check in (check_retraction(annotated, out), check_monotone(annotated, mu, out)):
        if check is not None:
            raise RetractionError(f"composite rejected: {check.kind} at {check.node!r}",
                                  check)
    return out


def _dominates(mu, x_nodes, y_nodes) -> bool:
    """Pointwise: every node of ``x`` has measure at least its partner in ``y``."""
    return all(tuple(mu[a]) >= tuple(mu[b]) for a, b in zip(x_nodes, y_nodes))


def compact_class(annotated: AnnotatedStrategy, mu, kappa, report=None,
                  budget: int = DEFAULT_BUDGET) -> dict:
    """Monotone retraction sending each member of ``kappa``'s class to a
    minimal member below it in the pointwise measure order."""
    if len(kappa) > budget:
        raise InfiniteDState(f"d-state of {len(kappa)} nodes exceeds bound {budget}")
    report = report or classify(annotated, budget, edges=False)
    members = report.classes[report.class_of(kappa)]
    base = members[0]
    # transport every member onto the base node order
    images = []
    for x in members:
        pi = isomorphic(base, x, budget, report.edges)
        images.append((x, [pi[v] for v in base.nodes]))
    h = identity(annotated)
    # the order is transitive, so the minimal members below x are exactly
    # the globally minimal members below x
    minimal = [(y, ys) for y, ys in images
               if not any(_dominates(mu, ys, zs) and not _dominates(mu, zs, ys)
                          for _, zs in images)]
    minimal.sort(key=lambda p: canon(p[0].nodes))
    for x, xs in images:
        target, ts = next((y, ys) for y, ys in minimal if _dominates(mu, xs, ys))
        for a, b in zip(xs, ts):
            h[a] = b
    return h


def compact_all(annotated: AnnotatedStrategy, mu, budget: int = DEFAULT_BUDGET,
                max_rounds: int = 100):
    """Compact every isomorphism class until a fixed point is reached.

    Returns ``(annotated, measure, log)`` where ``log`` lists the class
    statistics ``(index, max class size, nodes)`` after each round.
    """
    start = classify(annotated, budget, edges=False)
    for k in start.dstates:
        if len(k) > budget:
            raise InfiniteDState(f"d-state of {len(k)} nodes exceeds bound {budget}")
    cur, nu = annotated, mu
    log = [(start.index, start.max_class_size, len(cur.strategy))]
    for _ in range(max_rounds):
        report = classify(cur, budget, edges=False)
        changed = False
        # fast path: compact every class at once when the union is valid
        maps = [compact_class(cur, nu, members[0], report, budget)
                for members in report.classes if len(members) > 1]
        union = identity(cur)
        for h in maps:
            union.update({v: w for v, w in h.items() if w != v})
        if any(union[v] != v for v in union) and check_retraction(cur, union) is None \
                and check_monotone(cur, nu, union) is None:
            nxt, nxt_mu = retract(cur, nu, union)
            _check_no_growth(report, classify(nxt, budget, edges=False))
            if nxt.strategy != cur.strategy or dict(nxt.labels) != dict(cur.labels):
                cur, nu = nxt, nxt_mu
                now = classify(cur, budget, edges=False)
                log.append((now.index, now.max_class_size, len(cur.strategy)))
                continue
        for members in report.classes:
            if len(members) < 2:
                continue
            h = compact_class(cur, nu, members[0], report, budget)
            live = [v for v in cur.strategy.nodes if h[v] != v]
            if not live:
                continue
            nxt, nxt_mu = retract(cur, nu, h)
            after = classify(nxt, budget, edges=False)
            _check_no_growth(report, after)
            if (nxt.strategy == cur.strategy and dict(nxt.labels) == dict(cur.labels)):
                continue
            cur, nu = nxt, nxt_mu
            changed = True
            break
        if not changed:
            break
        now = classify(cur, budget, edges=False)
        log.append((now.index, now.max_class_size, len(cur.strategy)))
    assert is_witness(cur)[0] or not is_witness(annotated)[0]
    return cur, nu, log


def _check_no_growth(before, after):
    for c in after.classes:
        idx = match_class(c[0], before)
        if idx is None:
            raise RetractionError("retract introduced a new d-state class",
                                  sort_canon(c[0].nodes))
        if len(c) > len(before.classes[idx]):
            raise RetractionError("retract enlarged a d-state class",
                                  sort_canon(c[0].nodes))
