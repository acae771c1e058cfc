import itertools
import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _gen import WEIGHT_SETS, game_strategy, partition_strategy
from coopcolor.dynamics import Scheduler
from coopcolor.extensions import (ChannelMove, Configuration, Custom, HyperGame, Indicator,
                                  LinearEps, NotAchievable, acyclic_count_check,
                                  apply_channel_move, berge_girth, check_h, config_global_utility,
                                  config_utility, enumerate_configurations, hyper_potential,
                                  hyper_utility, is_k_stable_config, iter_channel_moves,
                                  max_configuration, min_channels, random_hypertree,
                                  run_hyper_dynamics, run_multichannel_dynamics)
from coopcolor.game import NEG_INF, Game, global_utility, uniform_game, utility
from coopcolor.stability import count_feasible


def test_h_families():
    assert Indicator()(3, 5) == 5
    h = LinearEps("1/4")
    assert h(1, 4) == 4 and h(3, 4) == 6 and h(2, 1) == Fraction(5, 4)
    assert h(0, 7) == 0 and h(2, NEG_INF) is NEG_INF
    check_h(Indicator(), {NEG_INF, -1, 0, 2}, 3)
    check_h(h, {-1, 0, 2}, 3)
    with pytest.raises(ValueError):
        LinearEps(-1)


def test_configuration_validation_and_json():
    C = Configuration(((0, 1), (0,), (1,)), 2)
    assert C.shared(0, 1) == 1
    assert Configuration.from_json(json.loads(json.dumps(C.to_json()))) == C
    with pytest.raises(ValueError):
        Configuration(((0, 1), (0,)), 2)


def _oracle_configs(game, q):
    n = game.n
    subsets = [s for r in range(1, n + 1) for s in itertools.combinations(range(n), r)
               if not any(game.enemies(a, b) for a, b in itertools.combinations(s, 2))]
    out = set()
    for r in range(1, n * q + 1):
        for combo in itertools.combinations_with_replacement(subsets, r):
            deg = [0] * n
            for s in combo:
                for u in s:
                    deg[u] += 1
            if all(d == q for d in deg):
                out.add(Configuration(combo, q).groups)
    return out


@pytest.mark.parametrize("game", [uniform_game(3), Game(3, {(0, 1): NEG_INF, (1, 2): 1}),
                                  Game(2, {(0, 1): 1})])
@pytest.mark.parametrize("q", [1, 2])
def test_enumeration_matches_oracle(game, q):
    got = [C.groups for C in enumerate_configurations(game, q)]
    assert len(got) == len(set(got))
    assert set(got) == _oracle_configs(game, q)


def test_q1_count_is_feasible_partition_count():
    for n in range(1, 6):
        assert sum(1 for _ in enumerate_configurations(uniform_game(n), 1)) == count_feasible(uniform_game(n))


@given(game_strategy(5), st.data())
def test_q1_utility_matches_partition_utility(g, data):
    P = data.draw(partition_strategy(g.n))
    C = Configuration.from_partition(P)
    for u in range(g.n):
        assert config_utility(g, Indicator(), C, u) == utility(g, P, u)


def test_channel_move_to_new_group():
    C = Configuration.singletons(2, 2)
    mv = ChannelMove((0, 1), (0, 2), None)
    C2 = apply_channel_move(C, mv)
    assert C2.shared(0, 1) == 1


def test_min_channels_star_with_enemy_leaves():
    star = Game(3, {(0, 1): 1, (0, 2): 1, (1, 2): NEG_INF})
    assert min_channels(star, Indicator(), 4) == 2
    with pytest.raises(NotAchievable):
        min_channels(star, Indicator(), 100, q_max=2)


@settings(max_examples=40)
@given(game_strategy(5), st.integers(1, 3),
       st.sampled_from([Indicator(), LinearEps("1/10"), Custom(lambda g, w: min(g, 2) * w)]))
def test_multichannel_dynamics_reaches_stable(g, q, h):
    tr = run_multichannel_dynamics(g, h, q, Scheduler("random", 5))
    assert tr.status == "stable"
    assert is_k_stable_config(g, h, tr.final, 1)
    assert all(s.f_after > s.f_before for s in tr.steps)


def test_stable_config_has_no_moves():
    g = Game(2, {(0, 1): 1})
    assert max_configuration(g, Indicator(), 2)[1] == 2
    h = LinearEps(1)
    C, f = max_configuration(g, h, 2)
    assert f == 4 and C.shared(0, 1) == 2
    assert list(iter_channel_moves(g, h, C, 2)) == []
    assert config_global_utility(g, h, C) == 4


@given(game_strategy(5, WEIGHT_SETS["finite"]), st.data())
def test_pairwise_hypergame_matches_graph_game(g, data):
    H = HyperGame.from_game(g)
    P = data.draw(partition_strategy(g.n))
    assert all(hyper_utility(H, P, u) == utility(g, P, u) for u in range(g.n))
    assert 2 * hyper_potential(H, P) == global_utility(g, P)


def test_berge_girth_cases():
    assert berge_girth(HyperGame(3, {(0, 1, 2): 1})) == float("inf")
    assert berge_girth(HyperGame(3, {(0, 1, 2): 1, (0, 1): 1})) == 2
    assert berge_girth(HyperGame(3, {(0, 1): 1, (1, 2): 1, (0, 2): 1})) == 3
    with pytest.raises(ValueError):
        acyclic_count_check(HyperGame(3, {(0, 1): 1, (1, 2): 1, (0, 2): 1}))


def test_hypergame_validation_and_json():
    with pytest.raises(ValueError):
        HyperGame(3, {(0,): 1})
    with pytest.raises(ValueError):
        HyperGame(4, {(0, 1, 2, 3): 1}, t=3)
    H = HyperGame(4, {(0, 1, 2): 2, (2, 3): NEG_INF}, 3)
    assert HyperGame.from_json(json.loads(json.dumps(H.to_json()))) == H


@given(st.integers(1, 15), st.integers(0, 10 ** 6))
def test_random_hypertrees_satisfy_identity(n, seed):
    H = random_hypertree(n, random.Random(seed))
    assert berge_girth(H) == float("inf")
    assert acyclic_count_check(H)


def test_hyper_dynamics_needs_the_whole_hyperedge():
    H = HyperGame(3, {(0, 1, 2): 3})
    tr = run_hyper_dynamics(H, k=1)
    assert tr.status == "stable" and len(tr) == 0
    tr = run_hyper_dynamics(H, k=2)
    assert tr.final.groups == ((0, 1, 2),)
