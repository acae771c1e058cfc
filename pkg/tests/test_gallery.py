import networkx as nx
import pytest

from coopcolor.game import NEG_INF, Game, find_twins, global_utility, utilities
from coopcolor.gallery import (FAIL, INFEASIBLE, PASS, REGISTRY, Claim, asym_partition_reduction,
                               bar_G, build, claims, extent_ab, fig1, fig1_partitions, fig2_rotation,
                               gossip_3coloring_reduction, hardness_reduction, has_balanced_split,
                               negab_layout, negab_parameters, poa_grid, tilde_G,
                               uniform_2channel_counterexample, verify)

FAST = sorted(set(REGISTRY) - {"fig3"})


@pytest.mark.parametrize("name", FAST)
def test_registry_claims_pass(name):
    for c in claims(name):
        v = verify(c)
        assert v.status == PASS, v.line()


@pytest.mark.parametrize("name", FAST)
def test_registry_builds(name):
    g = build(name)
    assert g.n >= 2


def test_unknown_entry():
    with pytest.raises(KeyError):
        build("nope")


def test_verdict_statuses():
    assert verify(Claim("t", "true", lambda B: True)).status == PASS
    assert verify(Claim("f", "false", lambda B: False)).status == FAIL
    from coopcolor.stability import SearchTooLarge

    def boom(B):
        raise SearchTooLarge("x")
    assert verify(Claim("i", "big", boom)).status == INFEASIBLE


def test_fig1_values():
    g = fig1()
    left, right = fig1_partitions()
    assert utilities(g, left) == [2] * 12
    assert global_utility(g, right) == 20


def test_fig2_parameter_guard():
    with pytest.raises(ValueError):
        fig2_rotation(2, 3, 6)


def test_extent_twins_are_the_paired_nodes_only():
    g = extent_ab(1, 2)
    twins = set(find_twins(g))
    assert (0, 1) in twins
    assert (0, 2) not in twins and (1, 2) not in twins


def test_negab_parameters_satisfy_ordering():
    t = negab_parameters(1, 2)
    assert all(x >= 1 for x in t)
    lay = negab_layout(1, 2)
    for i in range(3):
        assert set(lay.Vm[i]) <= set(lay.Vp[i]) <= set(lay.V[i])
        assert len(lay.Vm[i]) == lay.t[i] * 2


def test_uniform_2channel_structure():
    g = uniform_2channel_counterexample(29)
    assert g.weight_set == frozenset({NEG_INF, 1})
    assert g.n == 14 + 10 * 29


def test_asym_reduction_iff():
    for S in ([1, 1], [2, 3], [1, 2, 3], [5]):
        from coopcolor.stability import exists_k_stable
        found = exists_k_stable(asym_partition_reduction(S), 1, prune_twins=False) is not None
        assert found == has_balanced_split(S)
    with pytest.raises(ValueError):
        asym_partition_reduction([0, 1])


def test_gossip_layout_size():
    g = gossip_3coloring_reduction(nx.path_graph(3))
    assert g.n == 5 * 3 + 3


def test_tilde_and_bar_shapes():
    edge = Game(2, {(0, 1): 1})
    tg = tilde_G(edge, 3)
    assert tg.n == 2 + 2 * 3
    assert tg.w(2, 5) is NEG_INF and tg.w(2, 3) == 1 and tg.w(0, 2) == 1
    bg = bar_G(edge, 2)
    assert bg.n == 4
    assert all(bg.w(u, v) == 1 for u in range(4) for v in range(u + 1, 4))


def test_hardness_reduction_assembles():
    G0 = Game(3, {(0, 1): 1, (1, 2): 1})
    inst = hardness_reduction(nx.path_graph(2), 7, G0, 0)
    assert inst.game.n == len(inst.G1_nodes) + len(inst.G2_nodes)
    with pytest.raises(ValueError):
        hardness_reduction(nx.path_graph(2), 3, G0, 0)


def test_poa_grid_shape():
    assert poa_grid(2, 36).n == 36
