import random

from hypothesis import given, strategies as st

from dsynth.annotation import annotate_tree, annotate_truncation
from dsynth.dstates import (classify, compute_dstates, isomorphic, match_class,
                            tree_level_sizes)
from dsynth.fixtures import (blind_game, delay1_game, dmask_game, full_game, safe_spec)
from dsynth.generate import random_game, random_structure
from dsynth.strategy import constant_strategy, unravel


def test_full_observation_gives_singletons():
    g = full_game()
    t = annotate_tree(constant_strategy(g, ("a",)), g, safe_spec(), 3)
    ks = compute_dstates(t)
    assert all(len(k) == 1 for k in ks)
    assert len(ks) == len(t.strategy)


def test_blind_merges_each_level():
    g = blind_game()
    t = annotate_tree(constant_strategy(g, ("a",)), g, safe_spec(), 3)
    sizes = sorted(len(k) for k in compute_dstates(t))
    assert sizes == [1, 2, 4, 8]


def test_isomorphism_respects_labels_and_relations():
    g = dmask_game()
    t = annotate_tree(constant_strategy(g, ("a",)), g, safe_spec(), 2)
    report = classify(t)
    assert report.index == len(report.classes)
    for members in report.classes:
        for k in members:
            pi = isomorphic(members[0], k)
            assert pi is not None
            assert all(members[0].labels[v] == k.labels[pi[v]] for v in members[0].nodes)
            assert match_class(k, report) == report.classes.index(members)


def _by_depth(T, ks):
    out = {}
    for k in ks:
        depth = len(k.nodes[0])
        assert all(len(v) == depth for v in k.nodes)
        out.setdefault(depth, []).append(len(k))
    return out


@given(st.integers(0, 100_000))
def test_level_sizes_match_dstates_on_trees(seed):
    rng = random.Random(seed)
    game = random_game(rng)
    S = random_structure(rng, game, rng.randint(1, 3))
    depth = 3
    T = unravel(S, depth)
    from dsynth.annotation import AnnotatedStrategy
    from dsynth.fixtures import safe_spec as _  # noqa: F401
    labels = {v: (tuple(o.initial for o in game.observers), "s") for v in T.nodes}
    from dsynth.game import ParityTreeAutomaton
    spec = ParityTreeAutomaton(["s"], "s", game.directions, {}, {"s": 0})
    ks = compute_dstates(AnnotatedStrategy(T, labels, game, spec))
    per = _by_depth(T, ks)
    rows = tree_level_sizes(S, game, depth)
    for level, count, biggest in rows:
        assert count == len(per[level]) and biggest == max(per[level])


def test_delay_tree_dstates_bounded():
    g = delay1_game(1)
    S = constant_strategy(g, g.profiles[0])
    rows = tree_level_sizes(S, g, 3)
    gamma = len(g.moves)
    assert all(size <= gamma for _, _, size in rows)
