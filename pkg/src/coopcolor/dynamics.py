"""Deviations, gossip moves and the sequential game loop."""

from __future__ import annotations

import hashlib
import json
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .game import (NEG_INF, Partition, global_utility, is_uniform,
                   partition_vector, utilities)


@dataclass(frozen=True)
class Deviation:
    coalition: tuple[int, ...]
    target: Optional[int]  # index into P.groups, or None for a fresh empty group

    def target_label(self):
        return "new" if self.target is None else self.target


@dataclass(frozen=True)
class GossipDeviation:
    pair: tuple[int, int]


@dataclass(frozen=True)
class Scheduler:
    """Which deviation fires when several exist: firstlex, random, mincoalition, maxgain."""

    policy: str = "firstlex"
    seed: int = 0

    def __post_init__(self):
        if self.policy not in ("firstlex", "random", "mincoalition", "maxgain"):
            raise ValueError(f"unknown scheduler policy {self.policy!r}")


class _Ctx:
    """Per-partition precomputation shared by all deviation checks."""

    def __init__(self, game, P: Partition):
        self.m = game.matrix
        self.n = game.n
        self.P = P
        self.groups = P.groups
        self.owner = P.group_of
        self.f = utilities(game, P)
        self.targets = list(range(len(self.groups))) + [None]
        self._sum = {}

    def tsum(self, t, u):
        key = (t, u)
        s = self._sum.get(key)
        if s is None:
            s = 0
            if t is not None:
                row = self.m[u]
                for v in self.groups[t]:
                    if v == u:
                        continue
                    x = row[v]
                    if x is NEG_INF:
                        s = NEG_INF
                        break
                    s += x
            self._sum[key] = s
        return s

    def new_utils(self, S, t):
        """Post-move utilities of the coalition members, or None if some member does not strictly gain."""
        outsiders = [v for v in S if self.owner[v] != t]
        if not outsiders:
            return None
        out = []
        for u in S:
            s = self.tsum(t, u)
            if s is NEG_INF:
                return None
            row = self.m[u]
            for v in outsiders:
                if v == u:
                    continue
                x = row[v]
                if x is NEG_INF:
                    return None
                s += x
            fu = self.f[u]
            if not (fu is NEG_INF or s > fu):
                return None
            out.append(s)
        return out


def _internal_enemy(m, S, v):
    row = m[v]
    return any(row[u] is NEG_INF for u in S)


def _lex_coalitions(n, k, m) -> Iterator[tuple[int, ...]]:
    stack: list[int] = []

    def rec(start):
        for v in range(start, n):
            if stack and _internal_enemy(m, stack, v):
                continue
            stack.append(v)
            yield tuple(stack)
            if len(stack) < k:
                yield from rec(v + 1)
            stack.pop()

    yield from rec(0)


def _sized_coalitions(n, size, m, start=0, prefix=()):
    if len(prefix) == size:
        yield prefix
        return
    for v in range(start, n - (size - len(prefix)) + 1):
        if prefix and _internal_enemy(m, prefix, v):
            continue
        yield from _sized_coalitions(n, size, m, v + 1, prefix + (v,))


def iter_deviations(game, P: Partition, k: int, order: str = "lex", ctx: _Ctx | None = None):
    """Yield (Deviation, new member utilities). ``order`` is 'lex' (FirstLex) or 'size' (MinCoalition)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    c = ctx or _Ctx(game, P)
    if order == "lex":
        coal = _lex_coalitions(game.n, k, c.m)
    else:
        coal = (S for size in range(1, k + 1) for S in _sized_coalitions(game.n, size, c.m))
    for S in coal:
        for t in c.targets:
            nu = c.new_utils(S, t)
            if nu is not None:
                yield Deviation(S, t), nu


def enumerate_deviations(game, P: Partition, k: int) -> list[Deviation]:
    return [d for d, _ in iter_deviations(game, P, k)]


def find_deviation(game, P: Partition, k: int) -> Optional[Deviation]:
    for d, _ in iter_deviations(game, P, k, order="size"):
        return d
    return None


def _gossip_gain(game, P, u, v, f):
    m = game.matrix
    su = f[u]
    for x in P.members(v):
        y = m[u][x]
        if y is NEG_INF:
            return None
        su = su + y
    return su


def iter_gossip(game, P: Partition, f=None):
    f = f if f is not None else utilities(game, P)
    owner = P.group_of
    for u in range(game.n):
        for v in range(u + 1, game.n):
            if owner[u] == owner[v]:
                continue
            nu = _gossip_gain(game, P, u, v, f)
            nv = _gossip_gain(game, P, v, u, f)
            if nu is None or nv is None:
                continue
            if (f[u] is NEG_INF or nu > f[u]) and (f[v] is NEG_INF or nv > f[v]):
                yield GossipDeviation((u, v)), [nu, nv]


def enumerate_gossip(game, P: Partition) -> list[GossipDeviation]:
    return [g for g, _ in iter_gossip(game, P)]


def apply_deviation(game, P: Partition, d, check: bool = True) -> Partition:
    groups = [set(g) for g in P.groups]
    if isinstance(d, GossipDeviation):
        u, v = d.pair
        gu, gv = P.group_of[u], P.group_of[v]
        if gu == gv:
            raise ValueError("gossip pair already shares a group")
        groups[gu] |= groups[gv]
        groups[gv] = set()
        movers = d.pair
    else:
        S = set(d.coalition)
        for g in groups:
            g -= S
        if d.target is None:
            groups.append(set(S))
        else:
            groups[d.target] |= S
        movers = d.coalition
    P2 = Partition(tuple(tuple(g) for g in groups))
    if check:
        for u in movers:
            before = game.group_utility(u, P.members(u))
            after = game.group_utility(u, P2.members(u))
            if not (after is not NEG_INF and (before is NEG_INF or after > before)):
                raise AssertionError(f"node {u} does not strictly gain ({before} -> {after})")
    return P2


# -- potential instrumentation ---------------------------------------------------

@dataclass(frozen=True)
class PotentialReport:
    delta: object
    bound: object
    ok: bool


def check_potential_step(game, P: Partition, S, P2: Partition) -> PotentialReport:
    """Global-utility change of a deviation against the pairwise lower bound.

    bound = 2 * (|S| - sum of w over coalition pairs + sum of w over coalition
    pairs that already shared a group). Pairs are unordered.
    """
    f1, f2 = global_utility(game, P), global_utility(game, P2)
    S = tuple(S)
    pair_sum, same_sum = 0, 0
    owner = P.group_of
    for i, u in enumerate(S):
        for v in S[i + 1:]:
            x = game.w(u, v)
            pair_sum = pair_sum + x
            if owner[u] == owner[v]:
                same_sum = same_sum + x
    if f1 is NEG_INF or same_sum is NEG_INF:
        return PotentialReport(None, NEG_INF, True)
    bound = 2 * (len(S) - pair_sum + same_sum)
    delta = f2 - f1
    return PotentialReport(delta, bound, delta >= bound)


# -- traces ----------------------------------------------------------------------

def partition_hash(P: Partition) -> str:
    return hashlib.blake2b(repr(P.groups).encode(), digest_size=8).hexdigest()


@dataclass
class TraceStep:
    step: int
    before_hash: str
    deviation: object
    utils_before: list
    utils_after: list
    lambda_before: tuple
    lambda_after: tuple
    f_before: object
    f_after: object

    def to_json(self) -> dict:
        d = self.deviation
        if isinstance(d, GossipDeviation):
            coal, target = list(d.pair), "merge"
        else:
            coal, target = list(d.coalition), d.target_label()
        return {"step": self.step, "coalition": coal, "target": target,
                "f_before": _js(self.f_before), "f_after": _js(self.f_after),
                "lambda_after": list(self.lambda_after)}


def _js(x):
    return "-inf" if x is NEG_INF else x


@dataclass
class Trace:
    steps: list = field(default_factory=list)
    status: str = "stable"
    final: Optional[Partition] = None
    initial: Optional[Partition] = None

    def __len__(self):
        return len(self.steps)

    def to_jsonl(self) -> str:
        lines = [json.dumps(s.to_json()) for s in self.steps]
        lines.append(json.dumps({"status": self.status, "steps": len(self.steps)}))
        return "\n".join(lines) + "\n"


class _Seen:
    """Visited canonical partitions; falls back to a ring of recent states past the cap."""

    def __init__(self, cap: int):
        self.cap = cap
        self.full: set = set()
        self.ring: deque = deque(maxlen=max(cap // 4, 16))
        self.ring_set: set = set()

    def add(self, key) -> bool:
        """Return True if key was already seen."""
        if key in self.full or key in self.ring_set:
            return True
        if len(self.full) < self.cap:
            self.full.add(key)
        else:
            if len(self.ring) == self.ring.maxlen:
                self.ring_set.discard(self.ring[0])
            self.ring.append(key)
            self.ring_set.add(key)
        return False


def _pick(game, P, k, sched: Scheduler, rng, gossip: bool):
    ctx = _Ctx(game, P)
    if sched.policy in ("firstlex", "mincoalition"):
        order = "lex" if sched.policy == "firstlex" else "size"
        for d, nu in iter_deviations(game, P, k, order=order, ctx=ctx):
            return d, nu
        if gossip:
            for g, nu in iter_gossip(game, P, ctx.f):
                return g, nu
        return None
    pool = list(iter_deviations(game, P, k, ctx=ctx))
    if gossip:
        pool += list(iter_gossip(game, P, ctx.f))
    if not pool:
        return None
    if sched.policy == "random":
        return pool[rng.randrange(len(pool))]

    def gain(item):
        d, nu = item
        members = d.pair if isinstance(d, GossipDeviation) else d.coalition
        tot = 0
        for u, a in zip(members, nu):
            b = ctx.f[u]
            if b is NEG_INF:
                return float("inf")
            tot += a - b
        return tot

    best = pool[0]
    bg = gain(best)
    for item in pool[1:]:
        g = gain(item)
        if g > bg:
            best, bg = item, g
    return best


def run_dynamics(game, k: int, scheduler: Scheduler | None = None, max_steps: int = 100_000,
                 gossip: bool = False, assert_potential: bool = False,
                 initial: Partition | None = None, memory_cap: int = 1_000_000) -> Trace:
    sched = scheduler or Scheduler()
    rng = random.Random(sched.seed)
    P = initial if initial is not None else Partition.singletons(game.n)
    trace = Trace(initial=P)
    seen = _Seen(memory_cap)
    seen.add(P.groups)
    uniform = is_uniform(game)
    for step in range(max_steps):
        picked = _pick(game, P, k, sched, rng, gossip)
        if picked is None:
            trace.status = "stable"
            trace.final = P
            return trace
        d, nu = picked
        P2 = apply_deviation(game, P, d)
        members = d.pair if isinstance(d, GossipDeviation) else d.coalition
        ub = [game.group_utility(u, P.members(u)) for u in members]
        lb, la = partition_vector(P), partition_vector(P2)
        fb, fa = global_utility(game, P), global_utility(game, P2)
        if assert_potential and isinstance(d, Deviation):
            rep = check_potential_step(game, P, d.coalition, P2)
            if not rep.ok:
                raise AssertionError(f"potential bound violated: {rep}")
            if uniform and not la > lb:
                raise AssertionError("partition vector did not increase")
        trace.steps.append(TraceStep(step, partition_hash(P), d, ub, list(nu), lb, la, fb, fa))
        P = P2
        if seen.add(P.groups):
            trace.status = "cycle"
            trace.final = P
            return trace
    trace.status = "cap"
    trace.final = P
    return trace
