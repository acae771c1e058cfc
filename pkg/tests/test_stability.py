import pytest
from hypothesis import given, settings

from _gen import WEIGHT_SETS, game_strategy
from coopcolor.dynamics import Scheduler, run_dynamics
from coopcolor.game import NEG_INF, Game, Partition, uniform_game
from coopcolor.gallery import fig2_rotation
from coopcolor.stability import (L1_formula, SearchTooLarge, all_k_stable, count_feasible,
                                 enumerate_feasible_partitions, exists_k_stable,
                                 integer_partition_count, is_k_stable, longest_sequence)

BELL = [1, 1, 2, 5, 15, 52, 203, 877]


@pytest.mark.parametrize("n", range(1, 8))
def test_bell_numbers_on_conflict_free_game(n):
    assert count_feasible(uniform_game(n)) == BELL[n]


def test_enemies_shrink_the_space():
    g = Game(3, {(0, 1): NEG_INF})
    parts = list(enumerate_feasible_partitions(g))
    assert len(parts) == 3
    assert all(P.group_of[0] != P.group_of[1] for P in parts)


def test_budget_is_a_hard_error():
    with pytest.raises(SearchTooLarge):
        count_feasible(uniform_game(8), budget=10)


def test_fig2_has_no_2stable():
    assert exists_k_stable(fig2_rotation(), 2) is None
    assert exists_k_stable(fig2_rotation(), 1) is not None


def test_grand_coalition_is_the_only_k_stable_on_positive_clique():
    g = Game(4, {(u, v): 1 for u in range(4) for v in range(u + 1, 4)})
    for k in (2, 3):
        assert all_k_stable(g, k) == [Partition(((0, 1, 2, 3),))]


@pytest.mark.parametrize("n,expected", [(1, 0), (2, 1), (3, 2), (4, 4), (6, 8), (10, 20)])
def test_L1_formula_values(n, expected):
    assert L1_formula(n) == expected


def test_partition_count():
    assert [integer_partition_count(n) for n in range(8)] == [1, 1, 2, 3, 5, 7, 11, 15]


def test_longest_sequence_witness_replays():
    r = longest_sequence(uniform_game(6), 1)
    assert r.length == len(r.witness) == L1_formula(6)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_uniform_games_always_have_stable_partitions(k):
    for n in range(1, 7):
        assert exists_k_stable(uniform_game(n, [(0, n - 1)] if n > 1 else []), k) is not None


@settings(max_examples=40)
@given(game_strategy(6))
def test_twin_pruning_does_not_change_existence(g):
    for k in (1, 2):
        a = exists_k_stable(g, k, prune_twins=True) is None
        b = exists_k_stable(g, k, prune_twins=False) is None
        assert a == b


@settings(max_examples=40)
@given(game_strategy(6))
def test_no_stable_means_dynamics_never_stabilise(g):
    for k in (1, 2):
        if exists_k_stable(g, k) is None:
            assert run_dynamics(g, k, Scheduler("random", 3), max_steps=400).status != "stable"
        else:
            tr = run_dynamics(g, k, max_steps=2000)
            if tr.status == "stable":
                assert is_k_stable(g, tr.final, k)


@given(game_strategy(5, WEIGHT_SETS["uniform"]))
def test_longest_on_conflict_graph_bounded_by_empty(g):
    assert longest_sequence(g, 1).length <= L1_formula(g.n)
