"""Random instances shared by the test modules."""

import random

from coopcolor.game import NEG_INF, Game

WEIGHT_SETS = {
    "uniform": (NEG_INF, 1),
    "ternary": (NEG_INF, 0, 1),
    "ternary_neg": (NEG_INF, 0, 1, -1, -3),
    "finite": (-2, -1, 0, 1, 2, 3),
    "positive": (NEG_INF, 1, 2, 5),
    "mixed": (NEG_INF, -4, -1, 0, 1, 2, 7),
}


def random_game(rng: random.Random, n: int, weights) -> Game:
    W = {}
    for u in range(n):
        for v in range(u + 1, n):
            W[(u, v)] = rng.choice(weights)
    return Game(n, W, frozenset(weights) | {0})


def small_ternary(weights) -> bool:
    """Weights inside {-inf, 0, 1} plus negative integers."""
    return all(w is NEG_INF or w <= 1 for w in weights)


def game_strategy(max_n: int = 6, weights=WEIGHT_SETS["mixed"]):
    from hypothesis import strategies as st

    @st.composite
    def build(draw):
        n = draw(st.integers(1, max_n))
        pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
        vals = draw(st.lists(st.sampled_from(weights), min_size=len(pairs), max_size=len(pairs)))
        return Game(n, dict(zip(pairs, vals)), frozenset(weights) | {0})

    return build()


def partition_strategy(n: int):
    from hypothesis import strategies as st
    from coopcolor.game import Partition
    return st.lists(st.integers(0, n - 1), min_size=n, max_size=n).map(Partition.from_labels)
