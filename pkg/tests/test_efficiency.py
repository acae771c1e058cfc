from fractions import Fraction

import pytest
from hypothesis import given, settings

from _gen import WEIGHT_SETS, game_strategy
from coopcolor.efficiency import (Infinite, Undefined, check_delta_bound, config_price_of_anarchy,
                                  max_partition, price_of_anarchy, worst_k_stable)
from coopcolor.extensions import Indicator
from coopcolor.game import Game, global_utility, uniform_game
from coopcolor.gallery import fig1, fig2_rotation, poa_blocks, poa_zero_nash
from coopcolor.stability import enumerate_feasible_partitions


def test_fig1_optimum_is_the_triangles():
    P, f = max_partition(fig1())
    assert f == 24
    assert P.groups == tuple((3 * i, 3 * i + 1, 3 * i + 2) for i in range(4))


def test_positive_clique_optimum():
    assert max_partition(uniform_game(5))[1] == 20


@settings(max_examples=80)
@given(game_strategy(7))
def test_branch_and_bound_matches_brute_force(g):
    best = max(global_utility(g, P) for P in enumerate_feasible_partitions(g))
    P, f = max_partition(g, method="bnb")
    assert f == best == global_utility(g, P)


@settings(max_examples=40)
@given(game_strategy(8, WEIGHT_SETS["finite"]))
def test_milp_matches_branch_and_bound(g):
    assert max_partition(g, method="milp")[1] == max_partition(g, method="bnb")[1]


def test_unknown_method():
    with pytest.raises(ValueError):
        max_partition(uniform_game(2), method="greedy")


def test_ratios():
    assert price_of_anarchy(fig2_rotation(), 2) is Undefined
    assert price_of_anarchy(poa_zero_nash("bipartite", 1, 1, 8), 1) is Infinite
    assert price_of_anarchy(poa_blocks(2, 2, 1, 8), 2) == Fraction(5, 3)
    assert worst_k_stable(uniform_game(3), 2)[1] == 6


def test_zero_over_zero_is_one():
    g = Game(2, {(0, 1): -1})
    rep = check_delta_bound(g, 2)
    assert rep.ratio == 1 and rep.zero_over_zero and rep.ok


def test_delta_bound_requires_k2():
    with pytest.raises(ValueError):
        check_delta_bound(uniform_game(2), 1)


@settings(max_examples=40)
@given(game_strategy(6))
def test_delta_key_step_on_random_games(g):
    rep = check_delta_bound(g, 2)
    assert rep.edge_step_ok and rep.count_ok and rep.opt_ok


def test_config_poa_single_edge():
    ratio, best, worst = config_price_of_anarchy(Game(2, {(0, 1): 1}), Indicator(), 2, 1)
    assert best == worst == 2 and ratio == 1
