import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from _gen import WEIGHT_SETS, game_strategy
from coopcolor.dynamics import (Deviation, GossipDeviation, Scheduler, apply_deviation,
                                check_potential_step, enumerate_deviations, enumerate_gossip,
                                find_deviation, run_dynamics)
from coopcolor.game import NEG_INF, Game, Partition, global_utility, uniform_game
from coopcolor.gallery import chaotic4, fig1, fig1_partitions


def test_single_pair_joins():
    g = Game(2, {(0, 1): 1})
    P = Partition.singletons(2)
    devs = enumerate_deviations(g, P, 1)
    assert Deviation((0,), P.group_of[1]) in devs
    tr = run_dynamics(g, 1)
    assert tr.status == "stable" and tr.final.groups == ((0, 1),)


def test_enemy_moves_are_never_offered():
    g = Game(2, {(0, 1): NEG_INF})
    assert enumerate_deviations(g, Partition.singletons(2), 2) == []


def test_non_improving_move_rejected():
    g = Game(2, {(0, 1): -1})
    with pytest.raises(AssertionError):
        apply_deviation(g, Partition.singletons(2), Deviation((0,), 1))


def test_fig1_connector_deviation_drops_f_within_bound():
    g = fig1()
    left, right = fig1_partitions()
    d = Deviation((0, 3, 6, 9), None)
    P2 = apply_deviation(g, left, d)
    assert P2 == right
    assert global_utility(g, left) == 24 and global_utility(g, P2) == 20
    rep = check_potential_step(g, left, d.coalition, P2)
    assert rep.ok and rep.bound <= rep.delta == -4


def test_chaotic4_cycles_at_k2():
    tr = run_dynamics(chaotic4(), 2, max_steps=500)
    assert tr.status in ("cycle", "cap")


def test_gossip_merge():
    g = uniform_game(4)
    P = Partition(((0, 1), (2, 3)))
    assert GossipDeviation((0, 2)) in enumerate_gossip(g, P)
    assert apply_deviation(g, P, GossipDeviation((0, 2))).groups == ((0, 1, 2, 3),)


def test_trace_jsonl_format():
    tr = run_dynamics(uniform_game(3), 1)
    lines = [json.loads(x) for x in tr.to_jsonl().splitlines()]
    assert set(lines[0]) == {"step", "coalition", "target", "f_before", "f_after", "lambda_after"}
    assert lines[-1] == {"status": "stable", "steps": len(tr)}


def test_bad_scheduler_and_k():
    with pytest.raises(ValueError):
        Scheduler("fastest")
    with pytest.raises(ValueError):
        enumerate_deviations(uniform_game(2), Partition.singletons(2), 0)


def test_find_deviation_prefers_small_coalitions():
    d = find_deviation(uniform_game(4), Partition.singletons(4), 3)
    assert len(d.coalition) == 1


@given(game_strategy(6), st.sampled_from(["firstlex", "random", "mincoalition", "maxgain"]),
       st.integers(0, 10 ** 6))
def test_deterministic_given_seed(g, policy, seed):
    a = run_dynamics(g, 1, Scheduler(policy, seed))
    b = run_dynamics(g, 1, Scheduler(policy, seed))
    assert a.to_jsonl() == b.to_jsonl()


@given(game_strategy(6), st.integers(1, 3))
def test_every_step_strictly_improves_movers(g, k):
    tr = run_dynamics(g, k, Scheduler("random", 1), max_steps=300)
    for s in tr.steps:
        for b, a in zip(s.utils_before, s.utils_after):
            assert a is not NEG_INF and (b is NEG_INF or a > b)


@given(game_strategy(7, WEIGHT_SETS["ternary_neg"]))
def test_ternary_k2_terminates_stable(g):
    assert run_dynamics(g, 2, assert_potential=True).status == "stable"
