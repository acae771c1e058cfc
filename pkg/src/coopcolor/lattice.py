"""Dominance lattice on integer partitions and its link with 1-deviation sequences."""

from __future__ import annotations

from collections import deque
from functools import lru_cache
from itertools import accumulate

from .dynamics import Deviation, apply_deviation, iter_deviations
from .game import Partition, partition_vector, uniform_game, vector_to_sizes

IntegerPartition = tuple  # non-increasing positive parts


def normalize(q) -> IntegerPartition:
    return tuple(sorted((x for x in q if x > 0), reverse=True))


def from_vector(lam) -> IntegerPartition:
    return tuple(vector_to_sizes(lam))


def to_vector(q, n: int | None = None) -> tuple[int, ...]:
    n = sum(q) if n is None else n
    lam = [0] * n
    for x in q:
        lam[n - x] += 1
    return tuple(lam)


def all_partitions(n: int) -> list[IntegerPartition]:
    out = []

    def rec(rem, cap, cur):
        if rem == 0:
            out.append(tuple(cur))
            return
        for x in range(min(rem, cap), 0, -1):
            cur.append(x)
            rec(rem - x, x, cur)
            cur.pop()

    rec(n, n, [])
    return out


def _pad(q, n):
    return list(q) + [0] * (n - len(q))


def dominates(qp, q) -> bool:
    n = sum(q)
    if sum(qp) != n:
        raise ValueError("partitions of different integers")
    a = list(accumulate(_pad(qp, n)))
    b = list(accumulate(_pad(q, n)))
    return all(x >= y for x, y in zip(a, b))


def covers(qp, q) -> bool:
    """Brylawski's characterization: one unit moves from part k to part j < k,
    and either k = j + 1 or q_j = q_k."""
    n = sum(q)
    if sum(qp) != n:
        return False
    a, b = _pad(qp, n), _pad(q, n)
    diff = [i for i in range(n) if a[i] != b[i]]
    if len(diff) != 2:
        return False
    j, k = diff
    if a[j] != b[j] + 1 or a[k] != b[k] - 1:
        return False
    return k == j + 1 or b[j] == b[k]


def covers_by_definition(qp, q) -> bool:
    """Oracle: qp > q and nothing lies strictly between."""
    if qp == q or not dominates(qp, q):
        return False
    for r in all_partitions(sum(q)):
        if r != q and r != qp and dominates(qp, r) and dominates(r, q):
            return False
    return True


def _unit_moves(q):
    n = sum(q)
    b = _pad(q, n)
    seen = set()
    for j in range(n):
        for k in range(j + 1, n):
            if b[k] == 0:
                break
            c = b[:]
            c[j] += 1
            c[k] -= 1
            if all(c[i] >= c[i + 1] for i in range(n - 1)):
                r = normalize(c)
                if r not in seen:
                    seen.add(r)
                    yield r, b, j, k


def covering_successors(q) -> list[IntegerPartition]:
    q = normalize(q)
    return [r for r, b, j, k in _unit_moves(q) if k == j + 1 or b[j] == b[k]]


def covering_predecessors(q) -> list[IntegerPartition]:
    q = normalize(q)
    n = sum(q)
    return [r for r in all_partitions(n) if covers(q, r)]


def longest_chain(n: int) -> int:
    """Longest covering chain from (1,...,1) to (n)."""

    @lru_cache(maxsize=None)
    def up(q):
        nxt = covering_successors(q)
        return max((1 + up(r) for r in nxt), default=0)

    return up(tuple([1] * n))


def longest_chain_witness(n: int) -> list[IntegerPartition]:
    @lru_cache(maxsize=None)
    def up(q):
        return max((1 + up(r) for r in covering_successors(q)), default=0)

    q = tuple([1] * n)
    chain = [q]
    while covering_successors(q):
        q = max(covering_successors(q), key=up)
        chain.append(q)
    return chain


def realize(q, n: int | None = None) -> Partition:
    """Concrete node partition whose group sizes are q (consecutive node ids)."""
    groups, u = [], 0
    for x in normalize(q):
        groups.append(tuple(range(u, u + x)))
        u += x
    return Partition(tuple(groups))


def reachable_vectors(q, k: int = 1) -> set:
    """All partition vectors reachable from q by k-deviations on the conflict-free uniform game."""
    q = normalize(q)
    n = sum(q)
    game = uniform_game(n)
    start = realize(q)
    seen = {partition_vector(start)}
    todo = deque([start])
    while todo:
        P = todo.popleft()
        for d, _ in iter_deviations(game, P, k):
            P2 = apply_deviation(game, P, d, check=False)
            lam = partition_vector(P2)
            if lam not in seen:
                seen.add(lam)
                todo.append(P2)
    return seen


def deviation_reaches(q, qp, n: int | None = None) -> bool:
    q, qp = normalize(q), normalize(qp)
    return to_vector(qp) in reachable_vectors(q, 1)


def decompose_to_covering_steps(P: Partition, d: Deviation, game=None) -> list[Deviation]:
    """Split a 1-deviation on the conflict-free uniform game into covering 1-deviations.

    Each returned move changes the partition vector by one covering step; the
    sequence ends on the same vector as ``d`` (the node partition may differ).
    """
    if len(d.coalition) != 1:
        raise ValueError("only 1-deviations decompose")
    game = game or uniform_game(P.n)
    goal = normalize(len(g) for g in apply_deviation(game, P, d).groups)
    steps = []
    cur = P
    while normalize(len(g) for g in cur.groups) != goal:
        q = normalize(len(g) for g in cur.groups)
        nxt = [r for r in covering_successors(q) if dominates(goal, r)]
        if not nxt:  # pragma: no cover - dominance guarantees a next cover
            raise AssertionError("no covering step toward the goal")
        r = nxt[0]
        move = _move_between(cur, q, r)
        steps.append(move)
        cur = apply_deviation(game, cur, move)
    return steps


def _move_between(P: Partition, q, r) -> Deviation:
    """The single-node move turning sizes q into sizes r."""
    n = sum(q)
    a, b = _pad(q, n), _pad(r, n)
    j = next(i for i in range(n) if b[i] == a[i] + 1)
    k = next(i for i in range(n) if b[i] == a[i] - 1)
    grow, shrink = a[j], a[k]
    gi = next(i for i, g in enumerate(P.groups) if len(g) == grow)
    si = next(i for i, g in enumerate(P.groups) if len(g) == shrink and i != gi)
    if grow == 0:
        raise AssertionError("covering step cannot grow an empty group")
    return Deviation((P.groups[si][0],), gi)
