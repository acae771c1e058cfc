"""Vector calculus for deviation sequences and the long-sequence generators.

A move is named by its effect on the partition vector (index = group size):

* ``delta[p]``: 4 nodes, one from each of four groups of size p-1, join a group of size p-4.
* ``gamma[p]``: 3 nodes, one from each of three groups of size p-1, join a group of size p-3.
* ``alpha[p, q]``: one node leaves a group of size q+1 for a group of size p-1
  (``q = 0``: it leaves a singleton).

A sequence is valid from a start vector as long as no group count goes
negative, so starting with ``c`` groups of every size 1..L makes any
c-balanced sequence realizable.
"""

from __future__ import annotations

import heapq
import math
from bisect import insort
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from .game import uniform_game


class InsufficientGroups(RuntimeError):
    """The live partition lacks a group size a move needs."""


class ClaimViolation(AssertionError):
    """A construction step the recursive cascade relies on is impossible."""


class Move(NamedTuple):
    kind: str  # "delta", "gamma" or "alpha"
    p: int
    q: int = 0


def move_entries(m: Move) -> dict[int, int]:
    p = m.p
    if m.kind == "delta":
        return {p: 1, p - 1: -4, p - 2: 4, p - 4: -1}
    if m.kind == "gamma":
        return {p: 1, p - 1: -3, p - 2: 3, p - 3: -1}
    e: dict[int, int] = defaultdict(int)
    e[p] += 1
    e[p - 1] -= 1
    if m.q > 0:
        e[m.q + 1] -= 1
        e[m.q] += 1
    else:
        e[1] -= 1
    return {k: v for k, v in e.items() if v}


def _check_move(m: Move, n: int | None = None):
    if m.kind == "delta":
        if m.p < 5 or (n is not None and m.p > n // 5):
            raise ValueError(f"delta[{m.p}] needs 5 <= p <= n/5")
    elif m.kind == "gamma":
        if m.p < 4 or (n is not None and m.p > n // 4):
            raise ValueError(f"gamma[{m.p}] needs 4 <= p <= n/4")
    elif m.kind == "alpha":
        if m.q < 0 or m.p < m.q + 2 or m.p < 2:
            raise ValueError(f"alpha[{m.p},{m.q}] needs p >= q + 2")
        if n is not None and m.p > n:
            raise ValueError(f"alpha[{m.p},{m.q}] exceeds n")
    else:
        raise ValueError(f"unknown move kind {m.kind!r}")
    return m


@dataclass(frozen=True)
class DeviationVector:
    entries: dict  # group size -> change in count
    n: int | None = None
    kind: str = "composite"

    def __getitem__(self, i):
        return self.entries.get(i, 0)

    def __add__(self, other: "DeviationVector") -> "DeviationVector":
        e = defaultdict(int, self.entries)
        for k, v in other.entries.items():
            e[k] += v
        return DeviationVector({k: v for k, v in e.items() if v}, self.n or other.n)

    def dense(self, n: int | None = None) -> list[int]:
        """Entries for sizes n..1 (the partition-vector order)."""
        n = n or self.n or max(self.entries, default=0)
        return [self.entries.get(i, 0) for i in range(n, 0, -1)]

    def conserves_nodes(self) -> bool:
        return sum(i * v for i, v in self.entries.items()) == 0

    def relative(self, L: int) -> dict[int, int]:
        """Entries keyed by offset from L (offset o is size L - o)."""
        return {L - k: v for k, v in sorted(self.entries.items(), reverse=True)}


def delta4(p: int, n: int | None = None) -> DeviationVector:
    return DeviationVector(move_entries(_check_move(Move("delta", p), n)), n, "delta")


def gamma3(p: int, n: int | None = None) -> DeviationVector:
    return DeviationVector(move_entries(_check_move(Move("gamma", p), n)), n, "gamma")


def alpha(p: int, q: int, n: int | None = None) -> DeviationVector:
    return DeviationVector(move_entries(_check_move(Move("alpha", p, q), n)), n, "alpha")


def alpha1(p: int, n: int | None = None) -> DeviationVector:
    return alpha(p, 0, n)


@dataclass
class VectorSequence:
    moves: list = field(default_factory=list)
    n: int | None = None

    def __len__(self):
        return len(self.moves)

    def __add__(self, other: "VectorSequence") -> "VectorSequence":
        return VectorSequence(self.moves + other.moves, self.n or other.n)

    def vector(self) -> DeviationVector:
        e: dict[int, int] = defaultdict(int)
        for m in self.moves:
            for k, v in move_entries(m).items():
                e[k] += v
        return DeviationVector({k: v for k, v in e.items() if v}, self.n)

    def partial_sums(self) -> Iterable[dict]:
        e: dict[int, int] = defaultdict(int)
        for m in self.moves:
            for k, v in move_entries(m).items():
                e[k] += v
            yield e

    def balance(self) -> int:
        return balance(self)

    def shift(self, i: int) -> "VectorSequence":
        return shift(self, i)


def balance(seq: VectorSequence) -> int:
    """Smallest h with every prefix sum >= -h at every index."""
    e: dict[int, int] = defaultdict(int)
    low = 0
    for m in seq.moves:
        for k, v in move_entries(m).items():
            x = e[k] + v
            e[k] = x
            if x < low:
                low = x
    return -low


def shift(seq: VectorSequence, i: int) -> VectorSequence:
    out = []
    for m in seq.moves:
        if m.kind == "alpha":
            s = Move("alpha", m.p - i, m.q - i if m.q > 0 else 0)
            if m.q > 0 and s.q < 1:
                raise ValueError(f"shift by {i} pushes alpha[{m.p},{m.q}] below size 1")
        else:
            s = Move(m.kind, m.p - i)
        out.append(_check_move(s))
    return VectorSequence(out, seq.n)


def alpha_run(p: int, pd: int, qd: int, q: int) -> list[Move]:
    """alpha[p, p-d, q+d, q] as d consecutive 1-deviations alpha[p-j, q+j]."""
    d = p - pd
    if d < 1 or qd - q != d or pd < qd:
        raise ValueError(f"alpha run [{p},{pd},{qd},{q}] is not a valid 1-deviation chain")
    return [_check_move(Move("alpha", p - j, q + j)) for j in range(d)]


def is_symmetric(v) -> bool:
    e = v.entries if isinstance(v, DeviationVector) else v
    nz = sorted(k for k, x in e.items() if x)
    if not nz:
        return True
    lo, hi = nz[0], nz[-1]
    return all(e.get(lo + j, 0) == e.get(hi - j, 0) for j in range(hi - lo + 1))


# -- k = 3 -------------------------------------------------------------------------

@dataclass
class K3Build:
    t: int
    L: int
    seq: VectorSequence
    stages: dict  # stage number -> summed vector of one block at L
    balance: int
    c: int
    n: int


def build_k3(t: int, c: int | None = None) -> K3Build:
    """Four nested stages of gamma moves; t(t-3)(t-1)(t+1) 3-deviations in total.

    Stages 1-3 apply their blocks from the top size down; stage 4 applies its
    t copies from the lowest shift up, which keeps the sequence 4-balanced for
    t <= 6.
    """
    if t < 4:
        raise ValueError("the k=3 cascade needs t >= 4")
    L = 4 * t + 1

    def g1(l):
        return [Move("gamma", l - j) for j in range(t + 1)]

    def g2(l):
        return [m for j in range(t - 1) for m in g1(l - j)]

    def g3(l):
        return [m for j in range(t - 3) for m in g2(l - j)]

    def g4(l):
        return [m for j in reversed(range(t)) for m in g3(l - j)]

    stages = {i: VectorSequence(f(L)).vector() for i, f in ((1, g1), (2, g2), (3, g3), (4, g4))}
    seq = VectorSequence(g4(L))
    h = balance(seq)
    c = h if c is None else c
    n = c * L * (L + 1) // 2
    seq.n = n
    for m in seq.moves:
        _check_move(m, n if n else None)
    return K3Build(t, L, seq, stages, h, c, n)


def k3_move_count(t: int) -> int:
    return t * (t - 3) * (t - 1) * (t + 1)


# -- k = 4 -------------------------------------------------------------------------

@dataclass
class Level:
    i: int
    seq: VectorSequence
    vec: DeviationVector
    s: int
    t1: int
    t2: int
    a: int | None = None
    repairs: int = 0


def build_phi(t: int, L: int) -> VectorSequence:
    t2 = t * t
    moves = [Move("delta", L - j) for j in range(t2)]
    moves += alpha_run(L - 1, L - 2, L - 2, L - 3)
    moves += alpha_run(L - t2, L - t2 - 1, L - t2 - 1, L - t2 - 2)
    moves += alpha_run(L - t2 - 3, L - t2 - 4, L - t2 - 5, L - t2 - 6)
    moves += alpha_run(L - 1, L - 3, L - 3, L - 5)
    return VectorSequence(moves)


def build_zeta1(t: int, L: int, n: int | None = None) -> Level:
    """First level: t^2 - 4 shifted copies of phi plus two alpha runs.

    The second alpha run spans t^2 - 5 sizes, so t >= 3 is required.
    """
    if t < 3:
        raise ValueError(f"first-level vector undefined for t={t}: alpha[L-4, L-t^2+1, ...] has negative span")
    t2 = t * t
    phi = build_phi(t, L)
    moves = [m for j in range(t2 - 4) for m in shift(phi, j).moves]
    moves += alpha_run(L - 4, L - t2 + 1, L - t2 - 2, L - 2 * t2 + 3)
    moves += alpha_run(L - t2 + 4, L - t2 + 2, L - t2 - 3, L - t2 - 5)
    seq = VectorSequence(moves, n)
    return Level(1, seq, seq.vector(), 2 * t2 + 2, 2, 3)


def good_property(v: DeviationVector, L: int, s: int, i: int, t1: int | None = None,
                  t2: int | None = None) -> bool:
    """Even window size s, symmetric on [L-s+1, L], and top half equal to
    +1@L, -1@L-t1, -1@L-t2, +1@L-s/2+1 with 1 < t1 < t2 < 2*t1 and t2 <= 2^(i+1)."""
    e = v.entries
    if s % 2 or any(k > L or k < L - s + 1 for k, x in e.items() if x):
        return False
    if any(e.get(L - j, 0) != e.get(L - s + 1 + j, 0) for j in range(s)):
        return False
    top = {L - o: e[L - o] for o in range(s // 2) if e.get(L - o, 0)}
    neg = sorted((L - k for k, x in top.items() if x == -1))
    if len(neg) != 2:
        return False
    a, b = neg
    if t1 is not None and (a, b) != (t1, t2):
        return False
    expect = {L: 1, L - a: -1, L - b: -1, L - s // 2 + 1: 1}
    return top == expect and 1 < a < b < 2 * a and b <= 2 ** (i + 1)


def build_zeta_next(lv: Level, L: int) -> Level:
    """Next level: a+1 copies shifted by t1, then symmetric alpha repairs.

    The copies telescope to -1 entries at t2, t1+t2, ... in the top half, so the
    next pair is (t2, t1+t2). Leftover -1/+1 entries of the top half are paired
    like parentheses; each pair becomes one alpha run mirrored onto the bottom half.
    """
    s, t1, t2 = lv.s, lv.t1, lv.t2
    cands = [j for j in range(0, s, 2) if j * t1 + t2 < s // 2 - 1]
    if not cands:
        raise ClaimViolation(f"no even shift count fits level {lv.i} (s={s}, t1={t1}, t2={t2})")
    a = max(cands)
    s2 = a * t1 + s
    moves = [m for j in range(a + 1) for m in shift(lv.seq, j * t1).moves]
    w = defaultdict(int, VectorSequence(moves).vector().entries)
    n1, n2 = t2, t1 + t2
    target = {L: 1, L - n1: -1, L - n2: -1, L - s2 // 2 + 1: 1}

    def mirror(j):
        return 2 * L - s2 + 1 - j

    repairs, stack = [], []
    for o in range(s2 // 2):
        j = L - o
        d = target.get(j, 0) - w.get(j, 0)
        if d > 0:
            stack.extend([j] * d)
        for _ in range(-d if d < 0 else 0):
            if not stack:
                raise ClaimViolation(f"no 1-deviation repair reaches the level-{lv.i + 1} shape")
            j1 = stack.pop()
            repairs += alpha_run(j1, j, mirror(j), mirror(j1))
    if stack:
        raise ClaimViolation(f"unmatched entries left at level {lv.i + 1}")
    seq = VectorSequence(moves + repairs, lv.seq.n)
    return Level(lv.i + 1, seq, seq.vector(), s2, n1, n2, a, len(repairs))


@dataclass
class K4Chain:
    t: int
    T: int
    L: int
    levels: list
    c1: int
    balances: list
    n: int


def k4_parameters(t: int) -> tuple[int, int]:
    """(T, L) with T = floor(log2 t) + 1 and L = 2(t^3 + t)."""
    return int(math.log2(t)) + 1, 2 * (t ** 3 + t)


def k4_chain(t: int) -> K4Chain:
    T, L = k4_parameters(t)
    lv = build_zeta1(t, L)
    levels = [lv]
    for _ in range(1, T):
        lv = build_zeta_next(lv, L)
        levels.append(lv)
    bal = [balance(x.seq) for x in levels]
    c = max(bal)
    n = c * L * (L + 1) // 2
    for x in levels:
        x.seq.n = n
    return K4Chain(t, T, L, levels, bal[0], bal, n)


# -- realization ---------------------------------------------------------------------

@dataclass
class RealizedStep:
    move: Move
    movers: tuple
    target: int
    before: tuple
    after: tuple


@dataclass
class RealizeReport:
    n: int
    steps: list
    ok: bool
    error: str | None = None


class _Live:
    """Node partition with groups bucketed by size, lowest-min-node first."""

    def __init__(self, c: int, L: int, extra: int = 0):
        self.groups: dict[int, list[int]] = {}
        self.heaps: dict[int, list] = defaultdict(list)
        self.count: dict[int, int] = defaultdict(int)
        nid, gid = 0, 0
        for size in range(L, 0, -1):
            for _ in range(c):
                self.groups[gid] = list(range(nid, nid + size))
                heapq.heappush(self.heaps[size], (nid, gid))
                self.count[size] += 1
                nid += size
                gid += 1
        self.n = nid + extra  # extra nodes stay frozen singletons
        self.next_gid = gid

    def _valid(self, size, mn, gid):
        g = self.groups.get(gid)
        return g is not None and len(g) == size and g[0] == mn

    def take(self, size: int, k: int) -> list[int]:
        heap = self.heaps[size]
        out = []
        while len(out) < k:
            if not heap:
                raise InsufficientGroups(f"need {k} groups of size {size}, have {len(out)}")
            mn, gid = heapq.heappop(heap)
            if self._valid(size, mn, gid):
                out.append(gid)
        return out

    def push(self, gid):
        g = self.groups[gid]
        if g:
            heapq.heappush(self.heaps[len(g)], (g[0], gid))
        else:
            del self.groups[gid]


def _move_shape(m: Move):
    """(source group size, number of sources, target group size)."""
    if m.kind == "delta":
        return m.p - 1, 4, m.p - 4
    if m.kind == "gamma":
        return m.p - 1, 3, m.p - 3
    return (m.q + 1 if m.q > 0 else 1), 1, m.p - 1


def realize(seq: VectorSequence, c: int, L: int, n: int | None = None, game=None,
            keep_steps: bool = True) -> RealizeReport:
    """Replay a vector sequence on P0 (c groups of each size 1..L) and check every mover gains.

    Raises InsufficientGroups when a move has no group to act on.
    """
    base = c * L * (L + 1) // 2
    n = base if n is None else n
    if n < base:
        raise ValueError("n smaller than c*L(L+1)/2")
    live = _Live(c, L, n - base)
    game = game or uniform_game(n)
    partial: dict[int, int] = defaultdict(int)
    steps = []
    for idx, m in enumerate(seq.moves):
        src, k, tgt = _move_shape(m)
        sources = live.take(src, k)
        # sources are already off the heap, so an equal-size target is a different group
        target = live.take(tgt, 1)[0]
        movers = tuple(live.groups[g][0] for g in sources)
        tgroup = live.groups[target]
        before = tuple(game.group_utility(u, live.groups[g]) for u, g in zip(movers, sources))
        after = tuple(len(tgroup) + k - 1 for _ in movers) if game.is_uniform_clique else None
        for u, g in zip(movers, sources):
            live.groups[g].pop(0)
        for u in movers:
            insort(tgroup, u)
        if after is None:
            after = tuple(game.group_utility(u, tgroup) for u in movers)
        if not all(a > b for a, b in zip(after, before)):
            raise AssertionError(f"step {idx}: {m} is not a strict improvement")
        for g in sources:
            live.count[src] -= 1
            if live.groups[g]:
                live.count[src - 1] += 1
            live.push(g)
        live.count[tgt] -= 1
        live.count[tgt + k] += 1
        live.push(target)
        for size, v in move_entries(m).items():
            partial[size] += v
            if live.count[size] != c + partial[size]:
                raise AssertionError(f"step {idx}: live vector disagrees with the partial sum at size {size}")
        if keep_steps:
            steps.append(RealizedStep(m, movers, target, before, after))
    return RealizeReport(n, steps, True)


def try_realize(seq, c, L, **kw) -> RealizeReport:
    try:
        return realize(seq, c, L, **kw)
    except InsufficientGroups as e:
        return RealizeReport(c * L * (L + 1) // 2, [], False, str(e))


# -- growth tables ---------------------------------------------------------------------

def measure_growth(t_values, k: int = 4) -> list[dict]:
    rows = []
    for t in t_values:
        if k == 3:
            b = build_k3(t)
            rows.append({"t": t, "n": b.n, "c": b.c, "total_moves": len(b.seq), "balance": b.balance,
                         "good_property_ok": True})
            continue
        ch = k4_chain(t)
        good = all(good_property(lv.vec, ch.L, lv.s, lv.i) for lv in ch.levels)
        rec = all(len(b.seq) >= (a.s / 2 ** (a.i + 2) - 6) * len(a.seq)
                  for a, b in zip(ch.levels, ch.levels[1:]))
        if not rec:
            raise ClaimViolation(f"length recursion fails at t={t}")
        total = len(ch.levels[-1].seq)
        rows.append({"t": t, "n": ch.n, "c": max(ch.balances), "total_moves": total,
                     "balance": max(ch.balances), "good_property_ok": good,
                     "ratio": total / t ** math.log2(t) if t > 1 else float(total)})
    return rows
