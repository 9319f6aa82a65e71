import random

import pytest
from hypothesis import given, strategies as st

from dsynth.annotation import is_witness
from dsynth.generate import random_annotated
from dsynth.progress import check_measure, compare_lex, compute_measure, edge_ok


def test_compare_lex_prefix_only():
    assert compare_lex((1, 0, 5), (1, 0, 0), 1) == 0
    assert compare_lex((1, 0, 5), (1, 0, 0), 2) == 1
    assert compare_lex((0, 2), (1, 0), 1) == -1
    with pytest.raises(ValueError):
        compare_lex((1,), (1, 2), 0)
    with pytest.raises(ValueError):
        compare_lex((1, 2), (1, 2), 2)


def test_edge_ok_strict_on_odd():
    assert edge_ok((0, 1), (0, 1), 0)
    assert not edge_ok((0, 1), (0, 1), 1)
    assert edge_ok((0, 2), (0, 1), 1)


@given(st.integers(0, 100_000))
def test_measure_exists_iff_witness(seed):
    a = random_annotated(random.Random(seed), max_nodes=12)
    mu = compute_measure(a)
    ok, lasso = is_witness(a)
    assert (mu is not None) == ok
    if mu is not None:
        assert check_measure(a, mu) is None
        r = a.spec.num_priorities
        assert all(len(m) == r for m in mu.values())
        assert all(m[k] == 0 for m in mu.values() for k in range(0, r, 2))
    else:
        stem, cycle = lasso
        assert min(a.priority(v) for v in cycle) % 2 == 1


@given(st.integers(0, 100_000))
def test_corrupted_measure_is_caught_or_still_valid(seed):
    rng = random.Random(seed)
    a = random_annotated(rng, max_nodes=10)
    mu = compute_measure(a)
    if mu is None:
        return
    v = rng.choice(a.strategy.nodes)
    k = rng.randrange(len(mu[v]))
    bad = dict(mu)
    bad[v] = tuple(x + 1 if j == k else x for j, x in enumerate(mu[v]))
    found = check_measure(a, bad)
    if found is not None:
        assert v in (found.source, found.target)
