import itertools
import random

from hypothesis import given, strategies as st

from dsynth.solvers.parity import ParityArena, check_solution, solve_parity, winning_regions


def _random_arena(rng, n=6, max_priority=3):
    owner = {p: rng.randint(0, 1) for p in range(n)}
    moves = {p: [(f"m{j}", rng.randrange(n)) for j in range(rng.randint(1, 2))]
             for p in range(n)}
    prio = {p: rng.randint(0, max_priority) for p in range(n)}
    return ParityArena(owner, moves, prio, 0)


def _positional_oracle(arena):
    """Winning region via positional determinacy: some protagonist choice
    beats every positional antagonist choice."""
    ps = arena.positions
    mine = [p for p in ps if arena.owner[p] == 0]
    theirs = [p for p in ps if arena.owner[p] == 1]

    def play_wins(start, succ):
        seen, p = [], start
        while p not in seen:
            seen.append(p)
            p = succ[p]
        cycle = seen[seen.index(p):]
        return min(arena.priority[q] for q in cycle) % 2 == 0

    win = set()
    options = lambda p: [q for _, q in arena.moves[p]]  # noqa: E731
    for start in ps:
        for mine_pick in itertools.product(*(options(p) for p in mine)):
            fixed = dict(zip(mine, mine_pick))
            if all(play_wins(start, {**fixed, **dict(zip(theirs, pick))})
                   for pick in itertools.product(*(options(p) for p in theirs))):
                win.add(start)
                break
    return win


def test_single_loops():
    even = ParityArena({"x": 0}, {"x": [("go", "x")]}, {"x": 2}, "x")
    odd = ParityArena({"x": 0}, {"x": [("go", "x")]}, {"x": 1}, "x")
    assert solve_parity(even).winning == {"x"}
    assert solve_parity(odd).winning == frozenset()


def test_dead_ends_lose_for_their_owner():
    a = ParityArena({"x": 0, "y": 1}, {"x": [], "y": []}, {"x": 0, "y": 0}, "x")
    sol = solve_parity(a)
    assert "y" in sol.winning and "x" not in sol.winning


@given(st.integers(0, 100_000))
def test_zielonka_matches_positional_oracle(seed):
    arena = _random_arena(random.Random(seed))
    w0, w1 = winning_regions(arena)
    assert w0 | w1 == set(arena.positions) and not (w0 & w1)
    assert set(w0) == _positional_oracle(arena)


@given(st.integers(0, 100_000))
def test_solution_certificate_checks(seed):
    arena = _random_arena(random.Random(seed), n=8, max_priority=4)
    sol = solve_parity(arena)
    assert check_solution(arena, sol) == []
    for p in sol.winning:
        assert sol.measure[p] is not None
        if arena.owner[p] == 0:
            assert sol.successor[p] in sol.winning
