"""Multichannel configurations and hypergraph games.

A configuration puts every node in exactly ``q`` groups. Groups are labelled
entities, so two groups may hold the same members. Sharing ``g`` groups with a
node ``v`` is worth ``h(g, w_uv)`` to ``u``.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Callable, Iterator, Optional

import networkx as nx

from .dynamics import Scheduler, Trace, TraceStep, partition_hash
from .game import NEG_INF, Partition
from .stability import DEFAULT_BUDGET, SearchTooLarge


class NotAchievable(ValueError):
    """No configuration with at most the allowed channel count reaches the target utility."""


# -- h functions ------------------------------------------------------------------

@dataclass(frozen=True)
class HFunction:
    """Aggregation ``h(g, w)`` of ``g`` shared groups with a pair weight ``w``."""

    family: str
    eps: Fraction = Fraction(0)
    fn: Optional[Callable] = field(default=None, compare=False)

    def __call__(self, g: int, w):
        if g == 0:
            return 0
        if w is NEG_INF:
            return NEG_INF
        if self.family == "indicator":
            return w
        if self.family == "lineareps":
            val = (1 + self.eps * (g - 1)) * w
            return int(val) if val.denominator == 1 else val
        return self.fn(g, w)

    def __repr__(self):
        if self.family == "lineareps":
            return f"LinearEps({self.eps})"
        return "Indicator()" if self.family == "indicator" else f"Custom({getattr(self.fn, '__name__', '?')})"


def Indicator() -> HFunction:
    return HFunction("indicator")


def LinearEps(eps) -> HFunction:
    eps = Fraction(eps)
    if eps < 0:
        raise ValueError("eps must be non-negative")
    return HFunction("lineareps", eps)


def Custom(fn: Callable) -> HFunction:
    return HFunction("custom", fn=fn)


def check_h(h: HFunction, weights, gmax: int) -> None:
    """Assert the structural constraints on h over the given domain."""
    ws = sorted(w for w in weights if w is not NEG_INF)
    for w in ws:
        assert h(0, w) == 0 and h(1, w) == w, f"h(0|1, {w}) wrong"
    for g in range(gmax + 1):
        assert h(g, 0) == 0, f"h({g}, 0) != 0"
        vals = [h(g, w) for w in ws]
        assert all(a <= b for a, b in zip(vals, vals[1:])), f"h({g}, .) decreasing"
    for w in ws:
        seq = [w * h(g, w) for g in range(gmax + 1)]
        assert all(a <= b for a, b in zip(seq, seq[1:])), f"w*h(., {w}) decreasing"


# -- configurations ---------------------------------------------------------------

def _canon_groups(groups) -> tuple[tuple[int, ...], ...]:
    gs = [tuple(sorted(g)) for g in groups if g]
    gs.sort(key=lambda g: (-len(g), g))
    return tuple(gs)


@dataclass(frozen=True)
class Configuration:
    groups: tuple[tuple[int, ...], ...]
    q: int

    def __post_init__(self):
        gs = _canon_groups(self.groups)
        object.__setattr__(self, "groups", gs)
        deg: dict[int, int] = {}
        for g in gs:
            if len(set(g)) != len(g):
                raise ValueError(f"group {g} lists a node twice")
            for u in g:
                deg[u] = deg.get(u, 0) + 1
        n = max(deg) + 1 if deg else 0
        bad = [u for u in range(n) if deg.get(u, 0) != self.q]
        if bad:
            raise ValueError(f"nodes {bad} are not in exactly {self.q} groups")

    @classmethod
    def singletons(cls, n: int, q: int) -> "Configuration":
        return cls(tuple((u,) for u in range(n) for _ in range(q)), q)

    @classmethod
    def from_partition(cls, P: Partition) -> "Configuration":
        return cls(P.groups, 1)

    @property
    def n(self) -> int:
        return 1 + max(u for g in self.groups for u in g)

    def memberships(self, u: int) -> list[int]:
        return [i for i, g in enumerate(self.groups) if u in g]

    def shared(self, u: int, v: int) -> int:
        return sum(1 for g in self.groups if u in g and v in g)

    def to_json(self) -> dict:
        """Each node lists the ids of its q groups."""
        return {"v": 1, "q": self.q,
                "membership": [self.memberships(u) for u in range(self.n)]}

    @classmethod
    def from_json(cls, d: dict) -> "Configuration":
        q = d.get("q")
        mem = d.get("membership")
        if not isinstance(q, int) or q < 1:
            raise ValueError(f"q: expected positive integer, got {q!r}")
        if not isinstance(mem, list):
            raise ValueError("membership: expected a list of group-id lists")
        groups: dict[int, list[int]] = {}
        for u, ids in enumerate(mem):
            for i in ids:
                groups.setdefault(i, []).append(u)
        return cls(tuple(tuple(g) for g in groups.values()), q)


def _shared_counts(groups, u, n):
    cnt = [0] * n
    for g in groups:
        if u in g:
            for v in g:
                cnt[v] += 1
    return cnt


def _utility_from_groups(game, h, groups, u):
    cnt = _shared_counts(groups, u, game.n)
    m = game.matrix
    total = 0
    for v in range(game.n):
        if v == u or cnt[v] == 0:
            continue
        x = h(cnt[v], m[u][v])
        if x is NEG_INF:
            return NEG_INF
        total = total + x
    return total


def config_utility(game, h: HFunction, C: Configuration, u: int):
    if not 0 <= u < game.n:
        raise ValueError(f"unknown node {u}")
    return _utility_from_groups(game, h, C.groups, u)


def config_global_utility(game, h: HFunction, C: Configuration):
    total = 0
    for u in range(game.n):
        x = config_utility(game, h, C, u)
        if x is NEG_INF:
            return NEG_INF
        total = total + x
    return total


@dataclass(frozen=True)
class ChannelMove:
    """Coalition members leave one group each (``drops``) and all join ``target``."""

    coalition: tuple[int, ...]
    drops: tuple[Optional[int], ...]  # None for members already in the target
    target: Optional[int]

    def target_label(self):
        return "new" if self.target is None else self.target


def apply_channel_move(C: Configuration, mv: ChannelMove) -> Configuration:
    groups = [list(g) for g in C.groups]
    fresh: list[int] = []
    for u, a in zip(mv.coalition, mv.drops):
        if a is None:
            continue
        groups[a].remove(u)
        if mv.target is None:
            fresh.append(u)
        else:
            groups[mv.target].append(u)
    if fresh:
        groups.append(fresh)
    return Configuration(tuple(tuple(g) for g in groups), C.q)


def _gains(old, new) -> bool:
    return new is not NEG_INF and (old is NEG_INF or new > old)


def iter_channel_moves(game, h: HFunction, C: Configuration, k: int = 1) -> Iterator[tuple[ChannelMove, list]]:
    """Profitable k-deviations in (coalition size, lex, target, drops) order."""
    n = game.n
    m = game.matrix
    before = [config_utility(game, h, C, u) for u in range(n)]
    mem = [C.memberships(u) for u in range(n)]
    targets = list(range(len(C.groups))) + [None]
    for size in range(1, k + 1):
        for S in combinations(range(n), size):
            if any(m[a][b] is NEG_INF for a, b in combinations(S, 2)):
                continue
            for t in targets:
                inside = [t is not None and u in C.groups[t] for u in S]
                if all(inside):
                    continue
                choices = [[None] if ins else mem[u] for u, ins in zip(S, inside)]
                for drops in product(*choices):
                    if t is not None and any(d == t for d in drops):
                        continue
                    mv = ChannelMove(S, tuple(drops), t)
                    C2 = apply_channel_move(C, mv)
                    after = [config_utility(game, h, C2, u) for u in S]
                    if all(_gains(before[u], a) for u, a in zip(S, after)):
                        yield mv, after


def is_k_stable_config(game, h, C: Configuration, k: int) -> bool:
    for _ in iter_channel_moves(game, h, C, k):
        return False
    return True


def run_multichannel_dynamics(game, h: HFunction, q: int, scheduler: Scheduler | None = None,
                              max_steps: int = 100_000, initial: Configuration | None = None,
                              k: int = 1, assert_potential: bool = True) -> Trace:
    """Sequential deviations from q singleton memberships per node.

    With 1-deviations the global utility rises strictly at each step, which is
    asserted when ``assert_potential`` is set.
    """
    sched = scheduler or Scheduler()
    rng = random.Random(sched.seed)
    C = initial if initial is not None else Configuration.singletons(game.n, q)
    trace = Trace()
    seen = {C.groups}
    for step in range(max_steps):
        if sched.policy in ("firstlex", "mincoalition"):
            picked = next(iter_channel_moves(game, h, C, k), None)
        else:
            pool = list(iter_channel_moves(game, h, C, k))
            if not pool:
                picked = None
            elif sched.policy == "random":
                picked = pool[rng.randrange(len(pool))]
            else:
                picked = max(pool, key=lambda it: sum(
                    a - config_utility(game, h, C, u) for u, a in zip(it[0].coalition, it[1])
                    if config_utility(game, h, C, u) is not NEG_INF))
        if picked is None:
            trace.status, trace.final = "stable", C
            return trace
        mv, after = picked
        C2 = apply_channel_move(C, mv)
        fb, fa = config_global_utility(game, h, C), config_global_utility(game, h, C2)
        if assert_potential and k == 1 and fb is not NEG_INF and not fa > fb:
            raise AssertionError(f"global utility did not rise ({fb} -> {fa})")
        ub = [config_utility(game, h, C, u) for u in mv.coalition]
        trace.steps.append(TraceStep(step, _chash(C), mv, ub, after, (), (), fb, fa))
        C = C2
        if C.groups in seen:
            trace.status, trace.final = "cycle", C
            return trace
        seen.add(C.groups)
    trace.status, trace.final = "cap", C
    return trace


def _chash(C: Configuration) -> str:
    return hashlib.blake2b(repr(C.groups).encode(), digest_size=8).hexdigest()


def enumerate_configurations(game, q: int, budget: int | None = None,
                             allow_enemies: bool = False) -> Iterator[Configuration]:
    """Every enemy-free configuration with q channels, each multiset once.

    Processing nodes in order, node v opens the groups whose smallest member is
    v; those groups are chosen as a non-decreasing sequence of member sets.
    """
    n = game.n
    m = game.matrix
    cap = [q] * n
    chosen: list[tuple[int, ...]] = []
    count = 0

    def subsets(v):
        """Enemy-free groups with minimum v over nodes with spare capacity."""
        others = [x for x in range(v + 1, n) if cap[x] > 0]
        out = []

        def rec(i, cur):
            out.append(tuple(cur))
            for j in range(i, len(others)):
                x = others[j]
                if not allow_enemies and any(m[x][y] is NEG_INF for y in cur):
                    continue
                cur.append(x)
                rec(j + 1, cur)
                cur.pop()

        rec(0, [v])
        return out

    def rec_node(v):
        nonlocal count
        while v < n and cap[v] == 0:
            v += 1
        if v == n:
            count += 1
            if budget is not None and count > budget:
                raise SearchTooLarge(f"more than {budget} configurations")
            yield Configuration(tuple(chosen), q)
            return
        opts = subsets(v)
        yield from pick(v, opts, 0, cap[v])

    def pick(v, opts, lo, left):
        if left == 0:
            yield from rec_node(v + 1)
            return
        for i in range(lo, len(opts)):
            g = opts[i]
            if any(cap[x] == 0 for x in g[1:]):
                continue
            for x in g:
                cap[x] -= 1
            chosen.append(g)
            yield from pick(v, opts, i, left - 1)
            chosen.pop()
            for x in g:
                cap[x] += 1

    yield from rec_node(0)


def exists_k_stable_config(game, h: HFunction, q: int, k: int,
                           budget: int = DEFAULT_BUDGET) -> Optional[Configuration]:
    """First k-stable configuration with q channels, or None.

    Configurations where enemies share a group are skipped: the affected node
    can always leave for a fresh group.
    """
    for C in enumerate_configurations(game, q, budget):
        if is_k_stable_config(game, h, C, k):
            return C
    return None


def max_configuration(game, h: HFunction, q: int, budget: int = DEFAULT_BUDGET):
    best, best_val = None, None
    for C in enumerate_configurations(game, q, budget):
        val = config_global_utility(game, h, C)
        if val is NEG_INF:
            continue
        if best_val is None or val > best_val:
            best, best_val = C, val
    return best, best_val


def min_channels(game, h: HFunction, U, q_max: int | None = None,
                 budget: int = DEFAULT_BUDGET) -> int:
    """Smallest q whose best configuration reaches global utility U."""
    q_max = q_max if q_max is not None else max(game.n, 1)
    for q in range(1, q_max + 1):
        _, val = max_configuration(game, h, q, budget)
        if val is not None and val >= U:
            return q
    raise NotAchievable(f"utility {U} not reached with up to {q_max} channels")


# -- hypergraph games -------------------------------------------------------------

@dataclass(frozen=True)
class HyperGame:
    n: int
    weights: dict = field(default_factory=dict)
    t: Optional[int] = None  # maximum arity, None for unbounded

    def __post_init__(self):
        norm = {}
        for A, w in dict(self.weights).items():
            key = tuple(sorted(A))
            if len(set(key)) != len(key) or len(key) < 2:
                raise ValueError(f"hyperedge {A}: need at least two distinct nodes")
            if any(not 0 <= u < self.n for u in key):
                raise ValueError(f"hyperedge {A}: node outside 0..{self.n - 1}")
            if self.t is not None and len(key) > self.t:
                raise ValueError(f"hyperedge {A}: arity above t={self.t}")
            if key in norm:
                raise ValueError(f"hyperedge {A} listed twice")
            if not (w is NEG_INF or (isinstance(w, int) and not isinstance(w, bool))):
                raise ValueError(f"hyperedge {A}: bad weight {w!r}")
            norm[key] = w
        object.__setattr__(self, "weights", norm)
        inc: list[list] = [[] for _ in range(self.n)]
        for A in norm:
            for u in A:
                inc[u].append(A)
        object.__setattr__(self, "_inc", inc)

    @classmethod
    def from_game(cls, game) -> "HyperGame":
        return cls(game.n, {(u, v): game.w(u, v) for u in range(game.n)
                            for v in range(u + 1, game.n) if game.w(u, v) != 0}, 2)

    def incident(self, u):
        return self._inc[u]

    def to_json(self) -> dict:
        return {"v": 1, "n": self.n, "t": self.t,
                "hyperedges": [[list(A), "-inf" if w is NEG_INF else w] for A, w in self.weights.items()]}

    @classmethod
    def from_json(cls, d: dict) -> "HyperGame":
        n = d.get("n")
        if not isinstance(n, int) or n < 1:
            raise ValueError(f"n: expected positive integer, got {n!r}")
        raw = d.get("hyperedges")
        if not isinstance(raw, list):
            raise ValueError("hyperedges: expected a list of [[nodes...], w]")
        ws = {}
        for i, item in enumerate(raw):
            if not (isinstance(item, list) and len(item) == 2 and isinstance(item[0], list)):
                raise ValueError(f"hyperedges[{i}]: expected [[nodes...], w]")
            ws[tuple(item[0])] = NEG_INF if item[1] == "-inf" else item[1]
        try:
            return cls(n, ws, d.get("t"))
        except ValueError as e:
            raise ValueError(f"hyperedges: {e}") from e


def _hyper_group_utility(H: HyperGame, u, members: set):
    total = 0
    for A in H.incident(u):
        if all(x in members for x in A):
            w = H.weights[A]
            if w is NEG_INF:
                return NEG_INF
            total += w
    return total


def hyper_utility(H: HyperGame, P: Partition, u: int):
    return _hyper_group_utility(H, u, set(P.members(u)))


def hyper_potential(H: HyperGame, P: Partition):
    owner = P.group_of
    total = 0
    for A, w in H.weights.items():
        if all(owner[x] == owner[A[0]] for x in A):
            if w is NEG_INF:
                return NEG_INF
            total += w
    return total


def iter_hyper_deviations(H: HyperGame, P: Partition, k: int = 1):
    from .dynamics import Deviation
    owner = P.group_of
    groups = [set(g) for g in P.groups]
    before = [hyper_utility(H, P, u) for u in range(H.n)]
    for size in range(1, k + 1):
        for S in combinations(range(H.n), size):
            for t in list(range(len(groups))) + [None]:
                if t is not None and all(owner[u] == t for u in S):
                    continue
                new = (set(groups[t]) if t is not None else set()) | set(S)
                after = [_hyper_group_utility(H, u, new) for u in S]
                if all(_gains(before[u], a) for u, a in zip(S, after)):
                    yield Deviation(S, t), after


def run_hyper_dynamics(H: HyperGame, scheduler: Scheduler | None = None, k: int = 1,
                       max_steps: int = 100_000, assert_potential: bool = True,
                       initial: Partition | None = None) -> Trace:
    """Deviation dynamics on a hypergraph game; f_before/f_after record the potential."""
    from .dynamics import apply_deviation
    sched = scheduler or Scheduler()
    rng = random.Random(sched.seed)
    P = initial if initial is not None else Partition.singletons(H.n)
    trace = Trace(initial=P)
    seen = {P.groups}
    for step in range(max_steps):
        pool = iter_hyper_deviations(H, P, k)
        if sched.policy == "random":
            pool = list(pool)
            picked = pool[rng.randrange(len(pool))] if pool else None
        else:
            picked = next(pool, None)
        if picked is None:
            trace.status, trace.final = "stable", P
            return trace
        d, after = picked
        P2 = apply_deviation(None, P, d, check=False)
        fb, fa = hyper_potential(H, P), hyper_potential(H, P2)
        if assert_potential and k == 1 and fb is not NEG_INF:
            u = d.coalition[0]
            du = after[0] - hyper_utility(H, P, u)
            if fa - fb != du or not fa > fb:
                raise AssertionError(f"potential change {fa - fb} differs from utility gain {du}")
        ub = [hyper_utility(H, P, u) for u in d.coalition]
        trace.steps.append(TraceStep(step, partition_hash(P), d, ub, after, (), (), fb, fa))
        P = P2
        if P.groups in seen:
            trace.status, trace.final = "cycle", P
            return trace
        seen.add(P.groups)
    trace.status, trace.final = "cap", P
    return trace


def friendship_hypergraph(H: HyperGame) -> HyperGame:
    return HyperGame(H.n, {A: w for A, w in H.weights.items() if w is not NEG_INF and w > 0}, H.t)


def incidence_graph(H: HyperGame) -> nx.Graph:
    G = nx.Graph()
    G.add_nodes_from(("v", u) for u in range(H.n))
    for i, A in enumerate(H.weights):
        for u in A:
            G.add_edge(("e", i), ("v", u))
    return G


def berge_girth(H: HyperGame):
    """Shortest Berge cycle: half the girth of the vertex/hyperedge incidence graph."""
    g = nx.girth(incidence_graph(H))
    return g if g == float("inf") else g // 2


def acyclic_count_check(H: HyperGame) -> bool:
    """|V| = sum(|e| - 1) + c on a Berge-acyclic hypergraph (c counts components)."""
    if berge_girth(H) != float("inf"):
        raise ValueError("hypergraph has a Berge cycle")
    G = incidence_graph(H)
    c = sum(1 for comp in nx.connected_components(G) if any(x[0] == "v" for x in comp))
    return H.n == sum(len(A) - 1 for A in H.weights) + c


def random_hypertree(n: int, rng: random.Random, max_arity: int = 4, extra_isolated: int = 0) -> HyperGame:
    """Random Berge-acyclic hypergraph: each new hyperedge meets the forest in at most one node."""
    edges = {}
    nodes = list(range(n))
    rng.shuffle(nodes)
    placed = [nodes[0]]
    i = 1
    while i < n - extra_isolated:
        size = rng.randint(2, max_arity)
        fresh = nodes[i:min(i + size - 1, n - extra_isolated)]
        if not fresh:
            break
        anchor = [rng.choice(placed)] if rng.random() < 0.8 else []
        A = tuple(sorted(anchor + fresh))
        if len(A) >= 2:
            edges[A] = rng.randint(0, 5)
        placed.extend(fresh)
        i += len(fresh)
    return HyperGame(n, edges)


def save_hypergame(H: HyperGame, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(H.to_json(), fh)


def load_hypergame(path: str) -> HyperGame:
    with open(path) as fh:
        return HyperGame.from_json(json.load(fh))
