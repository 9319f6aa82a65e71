import glob
import os
import random

import pytest
from hypothesis import given, strategies as st

from dsynth.annotation import find_witness_annotation
from dsynth.fixtures import alternate_game, alternate_spec
from dsynth.generate import random_one_player, random_structure
from dsynth.io import (ParseError, fmt, parse_certificate_text, parse_game, parse_game_text,
                       parse_map_text, parse_measure_text, parse_strategy_text,
                       serialize_certificate, serialize_game, serialize_map,
                       serialize_measure, serialize_strategy, split_top, val)
from dsynth.progress import compute_measure
from dsynth.solvers.one_player import solve_one_player

FIXTURES = sorted(glob.glob(os.path.join(os.path.dirname(__file__), "..", "fixtures",
                                         "*.game")))


def test_lexical_helpers():
    assert fmt("a:l") == "a:l" and fmt(3) == "3" and fmt(("x", 1)) == "('x', 1)"
    assert val("('x', [1, 2])") == ("x", (1, 2)) and val("q0") == "q0"
    assert [p.strip() for p in split_top("a, (b, c), d", ",")] == ["a", "(b, c)", "d"]


@pytest.mark.parametrize("path", FIXTURES, ids=os.path.basename)
def test_game_round_trip_is_canonical(path):
    game, spec = parse_game(path)
    text = serialize_game(game, spec)
    again = serialize_game(*parse_game_text(text))
    assert text == again
    with open(path) as fh:
        assert fh.read() == text


@given(st.integers(0, 100_000))
def test_random_strategy_round_trip(seed):
    rng = random.Random(seed)
    game, spec = random_one_player(rng)
    S = random_structure(rng, game, rng.randint(1, 4))
    text = serialize_strategy(S)
    T = parse_strategy_text(text, game)
    assert serialize_strategy(T) == text


def test_certificate_round_trip():
    g, spec = alternate_game(), alternate_spec()
    res = solve_one_player(g, spec)
    text = serialize_certificate(res.witness, res.measure)
    cert = parse_certificate_text(text, g, spec)
    assert serialize_certificate(cert.annotated, cert.measure) == text
    assert parse_measure_text(serialize_measure(res.measure)) == res.measure
    h = {v: v for v in res.witness.strategy.nodes}
    assert parse_map_text(serialize_map(h)) == h


def _diag(text):
    with pytest.raises(ParseError) as info:
        parse_game_text(text)
    return info.value.diagnostics


GOOD = open(FIXTURES[0]).read() if FIXTURES else ""


def test_unknown_action_has_position():
    bad = GOOD.replace("  q, a, l -> q", "  q, zz, l -> q", 1)
    (d,) = [x for x in _diag(bad) if x.code == "UnknownAction"]
    lineno = next(i for i, l in enumerate(bad.splitlines(), 1) if "zz" in l)
    assert d.line == lineno and d.column == 6
    assert str(d).startswith(f"line {lineno}:6: UnknownAction")


def test_other_diagnostics():
    assert any(d.code == "UnknownDirection"
               for d in _diag(GOOD.replace("(l:", "(u:", 1)))
    assert any(d.code == "MissingPriority"
               for d in _diag("\n".join(l for l in GOOD.splitlines()
                                        if not l.strip().startswith("priority"))))
    line = next(l for l in GOOD.splitlines() if "->" in l and "/" in l)
    assert any(d.code == "DuplicateTransition"
               for d in _diag(GOOD.replace(line, line + "\n" + line, 1)))
    assert any(d.code == "Syntax" for d in _diag(GOOD + "\nfrobnicate\n"))


def test_strategy_diagnostics():
    game, _ = parse_game(FIXTURES[0])
    with pytest.raises(ParseError) as info:
        parse_strategy_text("directions l r\ninitial v\nnode v a\nv, l -> v\n", game)
    assert info.value.diagnostics[0].code == "IncompleteEdges"


def test_bare_strategy_is_not_a_certificate():
    g, spec = alternate_game(), alternate_spec()
    S = solve_one_player(g, spec).strategy
    with pytest.raises(ParseError) as info:
        parse_certificate_text(serialize_strategy(S), g, spec)
    assert info.value.diagnostics[0].code == "MissingLabel"


def test_measure_optional_in_certificate():
    g, spec = alternate_game(), alternate_spec()
    w = find_witness_annotation(solve_one_player(g, spec).strategy, g, spec)
    cert = parse_certificate_text(serialize_certificate(w), g, spec)
    assert cert.measure is None
    assert compute_measure(cert.annotated) is not None
