import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from coopcolor.dynamics import apply_deviation, enumerate_deviations
from coopcolor.game import partition_vector, uniform_game
from coopcolor.lattice import (all_partitions, covering_predecessors, covering_successors, covers,
                               decompose_to_covering_steps, deviation_reaches, dominates,
                               longest_chain, longest_chain_witness, normalize, realize, to_vector)
from coopcolor.stability import L1_formula, integer_partition_count


def test_partitions_enumeration_counts():
    for n in range(1, 12):
        assert len(all_partitions(n)) == integer_partition_count(n)


def test_covering_examples():
    assert covers((2, 1), (1, 1, 1))
    assert covers((3, 1, 1), (2, 2, 1))
    assert not covers((3, 1), (1, 1, 1, 1))
    assert covering_successors((1, 1, 1)) == [(2, 1)]
    assert set(covering_predecessors((2, 2))) == {(2, 1, 1)}


def test_dominance_is_a_partial_order():
    ps = all_partitions(6)
    for a, b in itertools.product(ps, ps):
        if dominates(a, b) and dominates(b, a):
            assert a == b


@pytest.mark.parametrize("n", range(1, 13))
def test_chain_equals_formula(n):
    assert longest_chain(n) == L1_formula(n)
    w = longest_chain_witness(n)
    assert len(w) - 1 == L1_formula(n)
    assert all(covers(b, a) for a, b in zip(w, w[1:]))


def test_reaches_matches_dominance():
    assert deviation_reaches((1, 1, 1, 1), (2, 2))
    assert not deviation_reaches((3, 1), (2, 2))


@given(st.integers(2, 9), st.data())
def test_one_deviation_decomposes_into_covers(n, data):
    sizes = data.draw(st.sampled_from(all_partitions(n)))
    P = realize(sizes)
    g = uniform_game(n)
    devs = [d for d in enumerate_deviations(g, P, 1)]
    if not devs:
        return
    d = data.draw(st.sampled_from(devs))
    steps = decompose_to_covering_steps(P, d)
    cur = P
    for s in steps:
        nxt = apply_deviation(g, cur, s)
        assert covers(normalize(len(x) for x in nxt.groups), normalize(len(x) for x in cur.groups))
        cur = nxt
    assert partition_vector(cur) == partition_vector(apply_deviation(g, P, d))


def test_to_vector_and_realize():
    assert to_vector((2, 1)) == (0, 1, 1)
    assert realize((2, 1)).groups == ((0, 1), (2,))
