"""Graphviz DOT exports with deterministic node order."""
from __future__ import annotations

from .dstates import classify
from .game import sort_canon
from .io import fmt, fmt_profile
from .strategy import compute_uniformity

PLAYER_COLOURS = ("blue", "red", "darkgreen", "orange", "purple", "brown")


def _q(s: str) -> str:
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def _ids(nodes):
    return {v: f"v{i}" for i, v in enumerate(nodes)}


def _edges(S, ids):
    out = []
    for v in S.nodes:
        by_target = {}
        for d in S.directions:
            by_target.setdefault(S.edges[v, d], []).append(d)
        for w in sort_canon(by_target):
            out.append(f"  {ids[v]} -> {ids[w]} [label={_q(','.join(by_target[w]))}];")
    return out


def _uniformity_edges(S, game, ids):
    rel = compute_uniformity(S, game)
    out = []
    for i, pairs in enumerate(rel.pairs):
        colour = PLAYER_COLOURS[i % len(PLAYER_COLOURS)]
        done = set()
        for v, w in sorted(pairs, key=lambda p: (ids[p[0]], ids[p[1]])):
            if v == w or (w, v) in done:
                continue
            done.add((v, w))
            out.append(f"  {ids[v]} -> {ids[w]} [dir=none, style=dashed, "
                       f"color={colour}, constraint=false];")
    return out


def strategy_dot(S, game=None, name="strategy") -> str:
    """Nodes labelled with their action; dashed edges show each player's
    uniformity relation when ``game`` is given."""
    ids = _ids(S.nodes)
    out = [f"digraph {_q(name)} {{", "  node [shape=circle];"]
    for v in S.nodes:
        shape = ", shape=box" if v in S.frontier else ""
        peri = ", peripheries=2" if v == S.initial else ""
        out.append(f"  {ids[v]} [label={_q(fmt_profile(S.choice[v]))}{shape}{peri}];")
    out += _edges(S, ids)
    if game is not None:
        out += _uniformity_edges(S, game, ids)
    out.append("}")
    return "\n".join(out) + "\n"


def annotated_dot(annotated, measure=None, name="annotated") -> str:
    """Node label ``action | automaton state (priority)`` plus the measure."""
    S = annotated.strategy
    ids = _ids(S.nodes)
    out = [f"digraph {_q(name)} {{", "  node [shape=box];"]
    for v in S.nodes:
        q = annotated.spec_state(v)
        text = f"{fmt_profile(S.choice[v])} | {fmt(q)} ({annotated.priority(v)})"
        if measure is not None and v in measure:
            text += "\\nmu=" + ",".join(str(x) for x in measure[v])
        peri = ", peripheries=2" if v == S.initial else ""
        out.append(f"  {ids[v]} [label={_q(text)}{peri}];")
    out += _edges(S, ids)
    out += _uniformity_edges(S, annotated.game, ids)
    out.append("}")
    return "\n".join(out).replace("\\\\n", "\\n") + "\n"


def quotient_dot(annotated, report=None, name="dstates") -> str:
    """One node per isomorphism class of d-states; an edge ``c -> c'`` when
    some d-state of class ``c`` has an exit into a d-state of class ``c'``."""
    report = report or classify(annotated)
    owner = {}
    for k in report.dstates:
        for v in k.nodes:
            owner[v] = report.class_of(k)
    out = [f"digraph {_q(name)} {{", "  node [shape=ellipse];"]
    for idx, members in enumerate(report.classes):
        out.append(f"  c{idx} [label={_q(f'class {idx}: {len(members)} x {len(members[0])}')}];")
    arcs = set()
    for k in report.dstates:
        for v, _, w in k.exits:
            arcs.add((owner[v], owner[w]))
    for a, b in sorted(arcs):
        out.append(f"  c{a} -> c{b};")
    out.append("}")
    return "\n".join(out) + "\n"
