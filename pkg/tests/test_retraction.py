import random

import pytest
from hypothesis import given, strategies as st

from dsynth.annotation import annotate_tree, check_annotation, is_witness
from dsynth.dstates import classify
from dsynth.fixtures import full_game, safe_spec
from dsynth.generate import random_retraction, random_valid_annotated
from dsynth.progress import check_measure, compute_measure
from dsynth.retraction import (RetractionError, check_monotone, check_retraction,
                               compact_all, compact_class, compose, identity, image,
                               retract)
from dsynth.strategy import check_strategy, constant_strategy, minimize


def _tree():
    g = full_game()
    return annotate_tree(constant_strategy(g, ("a",)), g, safe_spec(), 2)


def test_identity_is_a_monotone_retraction():
    t = _tree()
    mu = compute_measure(t)
    h = identity(t)
    assert check_retraction(t, h) is None and check_monotone(t, mu, h) is None
    out, nu = retract(t, mu, h)
    assert out.strategy == t.strategy


def test_folding_children_onto_root():
    t = _tree()
    mu = compute_measure(t)
    h = identity(t)
    h[("l",)] = ()
    h[("r",)] = ()
    out, _ = retract(t, mu, h)
    # the children inherit the root's successors, so depth 2 drops out
    assert set(out.strategy.nodes) == {(), ("l",), ("r",)}
    assert out.strategy.edges[("l",), "l"] == ("l",)
    assert is_witness(out)[0] and len(minimize(out.strategy)) == 1


def test_label_mismatch_rejected():
    g = full_game()
    S = constant_strategy(g, ("a",))
    from dsynth.annotation import AnnotatedStrategy
    from dsynth.strategy import DecisionStructure
    T = DecisionStructure(g.directions, {("x", "l"): "y", ("x", "r"): "y",
                                         ("y", "l"): "y", ("y", "r"): "y"},
                          {"x": ("a",), "y": ("b",)}, "x")
    a = AnnotatedStrategy(T, {"x": (("q",), "s"), "y": (("q",), "bad")}, g, safe_spec())
    bad = check_retraction(a, {"x": "y", "y": "y"})
    assert bad.kind == "label"
    with pytest.raises(RetractionError):
        retract(a, {"x": (0, 1), "y": (0, 0)}, {"x": "y", "y": "y"})


@given(st.integers(0, 100_000))
def test_valid_retracts_stay_valid(seed):
    rng = random.Random(seed)
    w = random_valid_annotated(rng, max_size=5, spec_states=2)
    if w is None:
        return
    h = random_retraction(rng, w)
    if h is None:
        return
    T = image(w.strategy, h)
    assert check_strategy(T, w.game) is None
    from dsynth.retraction import _restrict
    assert check_annotation(_restrict(w, T)) is None


@given(st.integers(0, 100_000))
def test_monotone_retractions_preserve_witnesses(seed):
    rng = random.Random(seed)
    w = random_valid_annotated(rng, max_size=5, spec_states=3, max_priority=3)
    if w is None or not is_witness(w)[0]:
        return
    mu = compute_measure(w)
    h = random_retraction(rng, w)
    if h is None or check_monotone(w, mu, h) is not None:
        return
    out, nu = retract(w, mu, h)
    assert is_witness(out)[0] and check_measure(out, nu) is None
    g = random_retraction(rng, out)
    if g is not None and check_monotone(out, nu, g) is None:
        comp = compose(h, g, w, mu)
        assert check_retraction(w, comp) is None
        assert check_monotone(w, mu, comp) is None


def test_compact_class_and_all_on_safe_tree():
    g = full_game()
    t = annotate_tree(constant_strategy(g, ("a",)), g, safe_spec(), 4)
    mu = compute_measure(t)
    report = classify(t, edges=False)
    big = max(report.classes, key=len)
    h = compact_class(t, mu, big[0], report)
    assert check_retraction(t, h) is None and check_monotone(t, mu, h) is None
    out, nu, log = compact_all(t, mu)
    assert is_witness(out)[0]
    assert log[-1][2] == len(out.strategy) < len(t.strategy)
    # behaviourally the result is the one-node constant strategy
    assert len(minimize(out.strategy)) == 1
