"""Line-oriented text formats for games, strategies, certificates and maps.

All formats share the same lexical rules: ``#`` starts a comment, blank
lines are ignored, and values are either bare names (``s``, ``a:l``) or
Python literals (``0``, ``('x', 1)``).  The grammar of each format is
documented in ``docs/formats.md``; serializers emit a canonical layout so
that equal objects always produce identical bytes.
"""
from __future__ import annotations

import ast
import re
from dataclasses import dataclass

from .annotation import AnnotatedStrategy
from .game import (Diagnostic, GameSpec, MealyMachine, ParityTreeAutomaton,
                   ValidationError, canon, sort_canon, validate_game)
from .strategy import DecisionStructure

_BARE = re.compile(r"[A-Za-z_*][A-Za-z0-9_*.:\-]*\Z")
_NAME = re.compile(r"[A-Za-z0-9_*\-]+\Z")
_DIR = re.compile(r"[A-Za-z0-9_*\-|]+\Z")


class ParseError(ValidationError):
    pass


def fmt(x) -> str:
    """Render a value as a bare name when possible, else as a literal."""
    if isinstance(x, str) and _BARE.match(x):
        return x
    return repr(x)


def val(tok: str):
    tok = tok.strip()
    if _BARE.match(tok):
        return tok
    try:
        return _tuplify(ast.literal_eval(tok))
    except (ValueError, SyntaxError):
        raise ValueError(f"bad value {tok!r}") from None


def _tuplify(x):
    if isinstance(x, list):
        return tuple(_tuplify(y) for y in x)
    if isinstance(x, tuple):
        return tuple(_tuplify(y) for y in x)
    return x


def split_top(s: str, sep: str) -> list:
    """Split on ``sep`` outside brackets and quotes."""
    out, depth, quote, cur = [], 0, None, []
    i = 0
    while i < len(s):
        c = s[i]
        if quote:
            cur.append(c)
            if c == "\\" and i + 1 < len(s):
                cur.append(s[i + 1])
                i += 1
            elif c == quote:
                quote = None
        elif c in "'\"":
            quote = c
            cur.append(c)
        elif c in "([{":
            depth += 1
            cur.append(c)
        elif c in ")]}":
            depth -= 1
            cur.append(c)
        elif depth == 0 and s.startswith(sep, i):
            out.append("".join(cur))
            cur = []
            i += len(sep)
            continue
        else:
            cur.append(c)
        i += 1
    out.append("".join(cur))
    return out


def _unwrap(s: str) -> str:
    s = s.strip()
    if not (s.startswith("(") and s.endswith(")")):
        raise ValueError(f"expected '( ... )', got {s!r}")
    return s[1:-1]


def fmt_profile(profile) -> str:
    return ".".join(profile)


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if line.strip():
            yield no, raw, line.strip()


class _Diags:
    def __init__(self):
        self.items = []

    def add(self, code, message, line, raw=None, token=None, **details):
        col = None
        if raw is not None and token:
            idx = raw.find(token)
            col = idx + 1 if idx >= 0 else None
        self.items.append(Diagnostic(code, message, details, line, col))


# --------------------------------------------------------------------- games

def parse_game(path):
    with open(path, encoding="utf-8") as fh:
        return parse_game_text(fh.read())


def parse_game_text(text: str):
    """Parse a game file; returns ``(game, spec)`` or raises :class:`ParseError`."""
    d = _Diags()
    players = None
    actions = {}
    directions = None
    delay = None
    observers = {}
    spec_block = None
    block, cur = None, None
    for no, raw, line in _lines(text):
        words = line.split()
        head = words[0]
        if block is not None:
            if head == "end":
                block, cur = None, None
                continue
            if head in ("states", "initial", "priority"):
                cur.setdefault(head, []).append((no, raw, words[1:]))
            elif "->" in line:
                cur.setdefault("rules", []).append((no, raw, line))
            else:
                d.add("Syntax", f"unexpected line in {block} block", no, raw, head)
            continue
        if head == "players":
            try:
                players = int(words[1])
            except (IndexError, ValueError):
                d.add("Syntax", "players expects an integer", no, raw, head)
        elif head == "actions":
            try:
                actions[int(words[1])] = (no, raw, tuple(words[2:]))
            except (IndexError, ValueError):
                d.add("Syntax", "actions expects a player number", no, raw, head)
        elif head == "directions":
            directions = (no, raw, tuple(words[1:]))
        elif head == "delay":
            try:
                delay = (int(words[1]), words[2:] == ["shared"], no, raw)
            except (IndexError, ValueError):
                d.add("Syntax", "delay expects an integer", no, raw, head)
        elif head == "observer":
            try:
                i = int(words[1])
            except (IndexError, ValueError):
                d.add("Syntax", "observer expects a player number", no, raw, head)
                i = None
            block, cur = "observer", {"line": no}
            if i is not None:
                observers[i] = cur
        elif head == "spec":
            block, cur = "spec", {"line": no}
            spec_block = cur
        else:
            d.add("Syntax", f"unknown keyword {head!r}", no, raw, head)
    if block is not None:
        d.add("Syntax", f"{block} block not closed with 'end'", cur["line"])
    if players is None:
        d.add("Syntax", "missing 'players' line", None)
        raise ParseError("game file rejected", d.items)
    if directions is None:
        d.add("Syntax", "missing 'directions' line", None)
        raise ParseError("game file rejected", d.items)
    acts = []
    for i in range(players):
        if i not in actions:
            d.add("Syntax", f"no actions for player {i}", None)
            acts.append(())
        else:
            no, raw, names = actions[i]
            for a in names:
                if not _NAME.match(a):
                    d.add("BadName", f"bad action name {a!r}", no, raw, a)
            acts.append(names)
    base_dirs = directions[2]
    for x in base_dirs:
        if not _NAME.match(x):
            d.add("BadName", f"bad direction name {x!r}", directions[0], directions[1], x)
    if delay is not None:
        from .solvers.delay import DelayOutOfRange, delay_game
        try:
            game = delay_game(acts, base_dirs, delay[0], delay[1])
        except DelayOutOfRange as exc:
            d.add("DelayOutOfRange", str(exc), delay[2], delay[3], str(delay[0]))
            raise ParseError("game file rejected", d.items) from None
        if observers:
            d.add("Syntax", "delay games generate their observers", observers[
                min(observers)]["line"])
    else:
        probe = GameSpec(acts, base_dirs, ())
        obs = []
        for i in range(players):
            if i not in observers:
                d.add("ObserverCountMismatch", f"no observer for player {i}", None)
                continue
            obs.append(_parse_observer(observers[i], probe, d))
        game = GameSpec(acts, base_dirs, obs)
    spec = None
    if spec_block is None:
        d.add("Syntax", "missing spec block", None)
    else:
        probe = GameSpec(acts, base_dirs, ())
        spec = _parse_spec(spec_block, probe, d)
        if spec is not None and delay is not None:
            from .solvers.delay import lift_spec
            spec = lift_spec(spec, game)
    if d.items:
        raise ParseError("game file rejected", d.items)
    sem = validate_game(game, spec)
    if sem:
        raise ParseError("game file rejected", sem)
    return game, spec


def _profile(tok, game, d, no, raw):
    parts = tuple(tok.strip().split("."))
    if len(parts) != game.players:
        d.add("BadProfile", f"profile {tok.strip()!r} needs {game.players} actions",
              no, raw, tok.strip())
        return None
    for a, acts in zip(parts, game.actions):
        if a not in acts:
            d.add("UnknownAction", f"unknown action {a!r}", no, raw, a)
            return None
    return parts


def _single(entries, key, d, line):
    if not entries.get(key):
        d.add("Syntax", f"missing '{key}' line", line)
        return None
    return entries[key][-1]


def _parse_observer(block, game, d):
    st = _single(block, "states", d, block["line"])
    ini = _single(block, "initial", d, block["line"])
    states = tuple(val(w) for w in st[2]) if st else ()
    initial = val(ini[2][0]) if ini and ini[2] else None
    table = {}
    for no, raw, line in block.get("rules", []):
        try:
            lhs, rhs = line.split("->", 1)
            src, prof, dr = (x.strip() for x in split_top(lhs, ","))
            tgt, out = (x.strip() for x in split_top(rhs, "/"))
        except ValueError:
            d.add("Syntax", "expected 'state, profile, direction -> state / output'",
                  no, raw)
            continue
        p = _profile(prof, game, d, no, raw)
        if dr not in game.directions:
            d.add("UnknownDirection", f"unknown direction {dr!r}", no, raw, dr)
            continue
        if p is None:
            continue
        try:
            q, q2, b = val(src), val(tgt), val(out)
        except ValueError as exc:
            d.add("Syntax", str(exc), no, raw)
            continue
        if (q, (p, dr)) in table:
            d.add("DuplicateTransition", "observer transition given twice", no, raw)
        table[q, (p, dr)] = (q2, b)
    return MealyMachine(states, initial, table)


def _parse_spec(block, game, d):
    st = _single(block, "states", d, block["line"])
    ini = _single(block, "initial", d, block["line"])
    if st is None or ini is None or not ini[2]:
        return None
    states = tuple(val(w) for w in st[2])
    initial = val(ini[2][0])
    prio = {}
    for no, raw, words in block.get("priority", []):
        try:
            prio[val(words[0])] = int(words[1])
        except (IndexError, ValueError):
            d.add("Syntax", "expected 'priority state number'", no, raw)
    for q in states:
        if q not in prio:
            d.add("MissingPriority", f"no priority for {q!r}", st[0], st[1], fmt(q))
    trans = {}
    for no, raw, line in block.get("rules", []):
        try:
            lhs, rhs = line.split("->", 1)
            src, prof = (x.strip() for x in split_top(lhs, ","))
            items = [x.strip() for x in split_top(_unwrap(rhs), ",")]
        except ValueError:
            d.add("Syntax", "expected 'state, profile -> (dir:state, ...)'", no, raw)
            continue
        p = _profile(prof, game, d, no, raw)
        succ, bad = {}, False
        for item in items:
            dr, _, tgt = item.partition(":")
            dr = dr.strip()
            if dr not in game.directions:
                d.add("UnknownDirection", f"unknown direction {dr!r}", no, raw, dr)
                bad = True
                continue
            try:
                succ[dr] = val(tgt)
            except ValueError as exc:
                d.add("Syntax", str(exc), no, raw)
                bad = True
        if bad or p is None:
            continue
        missing = [x for x in game.directions if x not in succ]
        if missing:
            d.add("BadTupleArity", f"no successor for {missing[0]!r}", no, raw)
            continue
        trans.setdefault((val(src), p), []).append(
            tuple(succ[x] for x in game.directions))
    if any(x.code in ("MissingPriority",) for x in d.items):
        return None
    return ParityTreeAutomaton(states, initial, game.directions, trans, prio)


def serialize_game(game: GameSpec, spec: ParityTreeAutomaton) -> str:
    from .solvers.delay import DelayObserver, base_direction, hold_bits
    out = [f"players {game.players}"]
    for i, acts in enumerate(game.actions):
        out.append(f"actions {i} " + " ".join(acts))
    delayed = game.observers and all(isinstance(o, DelayObserver) for o in game.observers)
    if delayed:
        base = tuple(dict.fromkeys(base_direction(x) for x in game.directions))
        out.append("directions " + " ".join(base))
        k = game.observers[0].k
        bits = {hold_bits(x) for x in game.directions}
        shared = k > 0 and len(bits) == 2 and game.players > 1
        out.append(f"delay {k}" + (" shared" if shared else ""))
        rest = "0" * game.players
        pick = [game.directions.index(f"{b}|{rest}") for b in base]
        spec = ParityTreeAutomaton(
            spec.states, spec.initial, base,
            {key: [tuple(t[j] for j in pick) for t in ts]
             for key, ts in spec.transitions.items()}, dict(spec.priorities))
    else:
        out.append("directions " + " ".join(game.directions))
        for i, m in enumerate(game.observers):
            out.append(f"observer {i}")
            out.append("  states " + " ".join(fmt(q) for q in m.states))
            out.append(f"  initial {fmt(m.initial)}")
            for q in m.states:
                for p, x in game.moves:
                    if (q, (p, x)) in m.table:
                        q2, b = m.table[q, (p, x)]
                        out.append(f"  {fmt(q)}, {fmt_profile(p)}, {x} -> "
                                   f"{fmt(q2)} / {fmt(b)}")
            out.append("end")
    out.append("spec")
    out.append("  states " + " ".join(fmt(q) for q in spec.states))
    out.append(f"  initial {fmt(spec.initial)}")
    for q in spec.states:
        out.append(f"  priority {fmt(q)} {spec.priorities[q]}")
    for q in spec.states:
        for p in game.profiles:
            for t in spec.options(q, p):
                body = ", ".join(f"{x}:{fmt(s)}" for x, s in zip(spec.directions, t))
                out.append(f"  {fmt(q)}, {fmt_profile(p)} -> ({body})")
    out.append("end")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------- strategies

def _strategy_lines(S: DecisionStructure) -> list:
    out = ["directions " + " ".join(S.directions), f"initial {fmt(S.initial)}"]
    for v in S.nodes:
        out.append(f"node {fmt(v)} {fmt_profile(S.choice[v])}")
    for v in S.nodes:
        if v in S.frontier:
            out.append(f"frontier {fmt(v)}")
    for v in S.nodes:
        for x in S.directions:
            out.append(f"{fmt(v)}, {x} -> {fmt(S.edges[v, x])}")
    return out


def serialize_strategy(S: DecisionStructure) -> str:
    return "\n".join(_strategy_lines(S)) + "\n"


@dataclass
class _StrategyParts:
    directions: tuple = ()
    initial: object = None
    choice: dict = None
    frontier: list = None
    edges: dict = None


def _parse_strategy_line(parts, no, raw, line, d) -> bool:
    words = line.split()
    head = words[0]
    try:
        if head == "directions":
            parts.directions = tuple(words[1:])
        elif head == "initial":
            parts.initial = val(line.split(None, 1)[1])
        elif head == "node":
            _, rest = line.split(None, 1)
            name, prof = rest.rsplit(None, 1)
            parts.choice[val(name)] = tuple(prof.split("."))
        elif head == "frontier":
            parts.frontier.append(val(line.split(None, 1)[1]))
        elif "->" in line and not head.startswith(("label", "measure")):
            lhs, rhs = line.split("->", 1)
            src, x = (y.strip() for y in split_top(lhs, ","))
            if parts.directions and x not in parts.directions:
                d.add("UnknownDirection", f"unknown direction {x!r}", no, raw, x)
                return True
            parts.edges[val(src), x] = val(rhs)
        else:
            return False
    except ValueError as exc:
        d.add("Syntax", str(exc), no, raw)
    return True


def _build_strategy(parts, d, game=None) -> DecisionStructure | None:
    if parts.initial is None:
        d.add("Syntax", "missing 'initial' line", None)
    if game is not None:
        profiles = set(game.profiles)
        for v, p in parts.choice.items():
            if p not in profiles:
                d.add("UnknownProfile", f"node {v!r} plays unknown profile {p!r}", None)
    for (v, _), w in parts.edges.items():
        for x in (v, w):
            if x not in parts.choice:
                d.add("UnknownNode", f"node {x!r} not declared", None)
    for v in parts.choice:
        for x in parts.directions:
            if (v, x) not in parts.edges:
                d.add("IncompleteEdges", f"node {v!r} has no {x!r} edge", None)
    if d.items:
        return None
    try:
        return DecisionStructure(parts.directions, parts.edges, parts.choice,
                                 parts.initial, parts.frontier, prune=False)
    except ValidationError as exc:
        d.items.extend(exc.diagnostics or [Diagnostic("Invalid", str(exc))])
        return None


def parse_strategy_text(text: str, game: GameSpec | None = None) -> DecisionStructure:
    d = _Diags()
    parts = _StrategyParts(choice={}, frontier=[], edges={})
    for no, raw, line in _lines(text):
        if not _parse_strategy_line(parts, no, raw, line, d):
            d.add("Syntax", f"unexpected line {line!r}", no, raw)
    S = _build_strategy(parts, d, game)
    if S is None:
        raise ParseError("strategy file rejected", d.items)
    return S


def parse_strategy(path, game=None) -> DecisionStructure:
    with open(path, encoding="utf-8") as fh:
        return parse_strategy_text(fh.read(), game)


# -------------------------------------------------------------- certificates

def _fmt_label(label) -> str:
    ms, q = label
    return "(" + ", ".join(fmt(m) for m in ms) + " | " + fmt(q) + ")"


def _fmt_measure(m) -> str:
    return "(" + ", ".join(str(x) for x in m) + ")"


def serialize_certificate(annotated: AnnotatedStrategy, measure=None) -> str:
    S = annotated.strategy
    out = _strategy_lines(S)
    for v in S.nodes:
        out.append(f"label {fmt(v)} -> {_fmt_label(annotated.labels[v])}")
    if measure is not None:
        out.extend(_measure_lines(S.nodes, measure))
    return "\n".join(out) + "\n"


def _measure_lines(nodes, measure) -> list:
    return [f"measure {fmt(v)} -> {_fmt_measure(measure[v])}" for v in nodes
            if v in measure]


def serialize_measure(measure) -> str:
    return "\n".join(_measure_lines(sort_canon(measure), measure)) + "\n"


def _parse_label(rhs):
    body = _unwrap(rhs)
    obs, q = split_top(body, "|")
    ms = tuple(val(x) for x in split_top(obs, ",") if x.strip())
    return ms, val(q)


def _parse_measure_value(rhs):
    body = _unwrap(rhs)
    return tuple(int(x) for x in body.split(",") if x.strip())


@dataclass
class Certificate:
    annotated: AnnotatedStrategy
    measure: dict | None


def parse_certificate_text(text: str, game: GameSpec, spec: ParityTreeAutomaton
                           ) -> Certificate:
    d = _Diags()
    parts = _StrategyParts(choice={}, frontier=[], edges={})
    labels, measure = {}, {}
    for no, raw, line in _lines(text):
        head = line.split()[0]
        if head in ("label", "measure"):
            try:
                lhs, rhs = line[len(head):].split("->", 1)
                v = val(lhs)
                if head == "label":
                    labels[v] = _parse_label(rhs)
                else:
                    measure[v] = _parse_measure_value(rhs)
            except ValueError as exc:
                d.add("Syntax", f"bad {head} line: {exc}", no, raw)
            continue
        if not _parse_strategy_line(parts, no, raw, line, d):
            d.add("Syntax", f"unexpected line {line!r}", no, raw)
    S = _build_strategy(parts, d, game)
    if S is None:
        raise ParseError("certificate rejected", d.items)
    missing = [v for v in S.nodes if v not in labels]
    if missing:
        raise ParseError("certificate rejected", [
            Diagnostic("MissingLabel", f"node {missing[0]!r} has no label")])
    return Certificate(AnnotatedStrategy(S, labels, game, spec), measure or None)


def parse_certificate(path, game, spec) -> Certificate:
    with open(path, encoding="utf-8") as fh:
        return parse_certificate_text(fh.read(), game, spec)


def parse_measure_text(text: str) -> dict:
    d = _Diags()
    out = {}
    for no, raw, line in _lines(text):
        try:
            head, rest = line.split(None, 1)
            if head != "measure":
                raise ValueError(f"expected 'measure', got {head!r}")
            lhs, rhs = rest.split("->", 1)
            out[val(lhs)] = _parse_measure_value(rhs)
        except ValueError as exc:
            d.add("Syntax", str(exc), no, raw)
    if d.items:
        raise ParseError("measure file rejected", d.items)
    return out


# ------------------------------------------------------------ retraction maps

def serialize_map(h) -> str:
    return "".join(f"{fmt(v)} -> {fmt(h[v])}\n" for v in sort_canon(h))


def parse_map_text(text: str) -> dict:
    d = _Diags()
    out = {}
    for no, raw, line in _lines(text):
        try:
            lhs, rhs = line.split("->", 1)
            out[val(lhs)] = val(rhs)
        except ValueError as exc:
            d.add("Syntax", f"expected 'node -> node': {exc}", no, raw)
    if d.items:
        raise ParseError("map file rejected", d.items)
    return out


def canonical_names(annotated: AnnotatedStrategy) -> bool:
    """Do all node names survive a round trip through :func:`fmt`/:func:`val`?"""
    for v in annotated.strategy.nodes:
        try:
            if val(fmt(v)) != v:
                return False
        except ValueError:
            return False
    return True


__all__ = ["ParseError", "Certificate", "parse_game", "parse_game_text", "serialize_game",
           "parse_strategy", "parse_strategy_text", "serialize_strategy",
           "parse_certificate", "parse_certificate_text", "serialize_certificate",
           "parse_measure_text", "serialize_measure", "parse_map_text", "serialize_map",
           "fmt", "val", "split_top", "canon"]
