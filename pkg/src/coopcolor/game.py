"""Games, partitions, utilities and partition vectors.

Nodes are dense integers ``0..n-1``. A weight is an ``int``, the conflict
sentinel ``NEG_INF`` or the symbolic best-friend weight ``BEST_FRIEND``;
the latter is resolved to a concrete integer per game.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Union

import networkx as nx


class _NegInf:
    """Absorbing minus infinity; compares below every integer."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __sub__(self, other):
        if other is self:
            raise ArithmeticError("-inf - -inf")
        return self

    def __neg__(self):
        raise ArithmeticError("+inf is not a utility")

    def __lt__(self, other):
        return other is not self

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("-inf")

    def __repr__(self):
        return "-inf"

    def __reduce__(self):
        return (_NegInf, ())


class _BestFriend:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "N"

    def __reduce__(self):
        return (_BestFriend, ())


NEG_INF = _NegInf()
BEST_FRIEND = _BestFriend()

Weight = Union[int, _NegInf, _BestFriend]
Utility = Union[int, _NegInf]


def is_neg_inf(x) -> bool:
    return x is NEG_INF


def _check_weight(w):
    if w is NEG_INF or w is BEST_FRIEND:
        return w
    if isinstance(w, bool) or not isinstance(w, int):
        raise TypeError(f"weight must be int, NEG_INF or BEST_FRIEND, got {w!r}")
    return w


def _check_labels(game):
    labels = tuple(game.labels)
    if labels and len(labels) != game.n:
        raise ValueError(f"labels: expected {game.n} names, got {len(labels)}")
    object.__setattr__(game, "labels", labels)


def _pair(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Game:
    """Symmetric complete weighted graph.

    ``weights`` stores each unordered pair once as ``(u, v)`` with ``u < v``;
    absent pairs take ``default`` (0 unless stated, which keeps the stored map
    small for uniform games with tens of thousands of nodes).
    """

    n: int
    weights: Mapping[tuple[int, int], Weight] = field(default_factory=dict)
    weight_set: frozenset = frozenset()
    default: Weight = 0
    labels: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        _check_labels(self)
        norm = {}
        for (u, v), w in dict(self.weights).items():
            if u == v:
                raise ValueError(f"self-loop on node {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"pair ({u},{v}) outside 0..{self.n - 1}")
            norm[_pair(u, v)] = _check_weight(w)
        object.__setattr__(self, "weights", norm)
        _check_weight(self.default)
        ws = frozenset(self.weight_set) if self.weight_set else frozenset(norm.values()) | {self.default}
        object.__setattr__(self, "weight_set", ws)
        bad = [w for w in norm.values() if w not in ws and w != 0]
        if bad:
            raise ValueError(f"weights {sorted(map(repr, set(bad)))} not in declared weight set")

    # -- weights -----------------------------------------------------------
    @cached_property
    def best_friend_value(self) -> int:
        return resolve_bestfriend(self)

    def raw(self, u: int, v: int) -> Weight:
        return self.weights.get(_pair(u, v), self.default)

    def w(self, u: int, v: int) -> Utility:
        """Resolved weight: integer or NEG_INF."""
        x = self.weights.get(_pair(u, v), self.default) if u != v else 0
        if x is BEST_FRIEND:
            return self.best_friend_value
        return x

    @cached_property
    def matrix(self) -> list[list]:
        """Dense resolved weights (only for moderate n)."""
        if self.n > 4000:
            raise MemoryError("dense matrix requested for a very large game")
        d = self.default if self.default is not BEST_FRIEND else self.best_friend_value
        m = [[d] * self.n for _ in range(self.n)]
        for u in range(self.n):
            m[u][u] = 0
        bf = None
        for (u, v), x in self.weights.items():
            if x is BEST_FRIEND:
                bf = bf if bf is not None else self.best_friend_value
                x = bf
            m[u][v] = m[v][u] = x
        return m

    @cached_property
    def is_uniform_clique(self) -> bool:
        """True for the conflict-free uniform game (all weights 1)."""
        return self.default == 1 and all(x == 1 for x in self.weights.values())

    def enemies(self, u: int, v: int) -> bool:
        return self.raw(u, v) is NEG_INF

    def positive_edges(self) -> list[tuple[int, int]]:
        m = self.matrix
        return [(u, v) for u in range(self.n) for v in range(u + 1, self.n)
                if m[u][v] is not NEG_INF and m[u][v] > 0]

    def max_positive_weight(self) -> int:
        m = self.matrix
        best = 0
        for u in range(self.n):
            for v in range(u + 1, self.n):
                x = m[u][v]
                if x is not NEG_INF and x > best:
                    best = x
        return best

    # -- utilities ---------------------------------------------------------
    def group_utility(self, u: int, members: Iterable[int]) -> Utility:
        """Utility of ``u`` inside a group with the given members (u may be listed)."""
        if self.is_uniform_clique:
            return sum(1 for v in members if v != u)
        total = 0
        for v in members:
            if v == u:
                continue
            x = self.w(u, v)
            if x is NEG_INF:
                return NEG_INF
            total += x
        return total

    def to_json(self) -> dict:
        return game_to_json(self)


@dataclass(frozen=True)
class AsymGame:
    """Directed weights: ``w(u, v)`` is what ``u`` receives from sharing with ``v``."""

    n: int
    weights: Mapping[tuple[int, int], Weight] = field(default_factory=dict)
    weight_set: frozenset = frozenset()
    default: Weight = 0
    labels: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        _check_labels(self)
        norm = {}
        for (u, v), w in dict(self.weights).items():
            if u == v:
                raise ValueError(f"self-loop on node {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"pair ({u},{v}) outside 0..{self.n - 1}")
            norm[(u, v)] = _check_weight(w)
        object.__setattr__(self, "weights", norm)
        ws = frozenset(self.weight_set) if self.weight_set else frozenset(norm.values()) | {self.default}
        object.__setattr__(self, "weight_set", ws)

    @cached_property
    def best_friend_value(self) -> int:
        return resolve_bestfriend(self)

    def raw(self, u, v):
        return self.weights.get((u, v), self.default)

    def w(self, u, v):
        if u == v:
            return 0
        x = self.weights.get((u, v), self.default)
        return self.best_friend_value if x is BEST_FRIEND else x

    @cached_property
    def matrix(self):
        return [[self.w(u, v) for v in range(self.n)] for u in range(self.n)]

    is_uniform_clique = False

    def enemies(self, u, v):
        return self.raw(u, v) is NEG_INF or self.raw(v, u) is NEG_INF

    def group_utility(self, u, members):
        total = 0
        for v in members:
            if v == u:
                continue
            x = self.w(u, v)
            if x is NEG_INF:
                return NEG_INF
            total += x
        return total

    def to_json(self) -> dict:
        return game_to_json(self)


def is_uniform(game) -> bool:
    """Every resolved weight is 1 or -inf."""
    if not isinstance(game, Game):
        return False
    ok = lambda w: w is NEG_INF or w == 1
    return ok(game.default) and all(ok(w) for w in game.weights.values())


def resolve_bestfriend(game) -> int:
    finite = [abs(x) for x in list(game.weights.values()) + [game.default]
              if x is not NEG_INF and x is not BEST_FRIEND]
    m = max(finite) if any(finite) else 0
    return game.n * (m if m else 1) + 1


# -- partitions ---------------------------------------------------------------

def _canon(groups: Iterable[Iterable[int]]) -> tuple[tuple[int, ...], ...]:
    gs = [tuple(sorted(g)) for g in groups]
    gs = [g for g in gs if g]
    gs.sort(key=lambda g: (-len(g), g[0]))
    return tuple(gs)


@dataclass(frozen=True)
class Partition:
    """Set partition in canonical form: groups by size descending, then min element."""

    groups: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "groups", _canon(self.groups))
        seen = set()
        for g in self.groups:
            for u in g:
                if u in seen:
                    raise ValueError(f"node {u} in two groups")
                seen.add(u)
        if seen != set(range(len(seen))):
            raise ValueError("groups must cover 0..n-1 exactly")

    @classmethod
    def singletons(cls, n: int) -> "Partition":
        return cls(tuple((u,) for u in range(n)))

    @classmethod
    def from_labels(cls, labels: Iterable[int]) -> "Partition":
        buckets: dict[int, list[int]] = {}
        for u, lab in enumerate(labels):
            buckets.setdefault(lab, []).append(u)
        return cls(tuple(tuple(b) for b in buckets.values()))

    @property
    def n(self) -> int:
        return sum(len(g) for g in self.groups)

    @cached_property
    def group_of(self) -> tuple[int, ...]:
        owner = [0] * self.n
        for gi, g in enumerate(self.groups):
            for u in g:
                owner[u] = gi
        return tuple(owner)

    def members(self, u: int) -> tuple[int, ...]:
        return self.groups[self.group_of[u]]

    def __len__(self):
        return len(self.groups)


def canonicalize(P) -> Partition:
    if isinstance(P, Partition):
        return Partition(P.groups)
    return Partition(tuple(tuple(g) for g in P))


def utility(game, P: Partition, u: int) -> Utility:
    if not 0 <= u < game.n:
        raise KeyError(f"unknown node {u}")
    return game.group_utility(u, P.members(u))


def utilities(game, P: Partition) -> list:
    return [game.group_utility(u, P.members(u)) for u in range(game.n)]


def global_utility(game, P: Partition) -> Utility:
    total = 0
    for u in range(game.n):
        total = total + game.group_utility(u, P.members(u))
        if total is NEG_INF:
            return NEG_INF
    return total


def partition_vector(P: Partition, n: int | None = None) -> tuple[int, ...]:
    """(lambda_n, ..., lambda_1); Python tuple order is the lexicographic order used for convergence."""
    n = P.n if n is None else n
    lam = [0] * n
    for g in P.groups:
        lam[n - len(g)] += 1
    return tuple(lam)


def vector_to_sizes(lam: tuple[int, ...]) -> list[int]:
    n = len(lam)
    out = []
    for idx, c in enumerate(lam):
        out.extend([n - idx] * c)
    return out


def sizes_to_vector(sizes: Iterable[int], n: int) -> tuple[int, ...]:
    lam = [0] * n
    for s in sizes:
        if s:
            lam[n - s] += 1
    return tuple(lam)


def is_feasible(game, P: Partition) -> bool:
    """No enemy pair shares a group."""
    for g in P.groups:
        for i, u in enumerate(g):
            for v in g[i + 1:]:
                if game.enemies(u, v):
                    return False
    return True


# -- graph views ----------------------------------------------------------------

def friendship_graph(game) -> nx.Graph:
    G = nx.Graph()
    G.add_nodes_from(range(game.n))
    G.add_edges_from(game.positive_edges())
    return G


def girth(G: nx.Graph):
    """Shortest cycle length, ``math.inf`` when acyclic."""
    return nx.girth(G)


def find_twins(game) -> list[tuple[int, int]]:
    m = game.matrix
    n = game.n
    out = []
    for u in range(n):
        for v in range(u + 1, n):
            x = m[u][v]
            if x is NEG_INF or x <= 0:
                continue
            if all(m[u][z] == m[v][z] for z in range(n) if z != u and z != v):
                out.append((u, v))
    return out


def twin_classes(game) -> list[list[int]]:
    parent = list(range(game.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in find_twins(game):
        parent[find(u)] = find(v)
    classes: dict[int, list[int]] = {}
    for u in range(game.n):
        classes.setdefault(find(u), []).append(u)
    return sorted(classes.values())


# -- JSON -----------------------------------------------------------------------

def _w_out(w):
    if w is NEG_INF:
        return "-inf"
    if w is BEST_FRIEND:
        return "N"
    return w


def _w_in(x, where: str):
    if x == "-inf":
        return NEG_INF
    if x == "N":
        return BEST_FRIEND
    if isinstance(x, int) and not isinstance(x, bool):
        return x
    raise ValueError(f"{where}: bad weight {x!r}")


def game_to_json(game) -> dict:
    d = {
        "v": 1,
        "n": game.n,
        "weight_set": sorted((_w_out(w) for w in game.weight_set), key=lambda x: (isinstance(x, str), str(x))),
        "weights": [[u, v, _w_out(w)] for (u, v), w in sorted(game.weights.items())],
    }
    if game.default != 0:
        d["default"] = _w_out(game.default)
    if isinstance(game, AsymGame):
        d["directed"] = True
    if game.labels:
        d["labels"] = list(game.labels)
    return d


def game_from_json(d: dict):
    if not isinstance(d, dict):
        raise ValueError("game file: top level must be an object")
    if d.get("v", 1) != 1:
        raise ValueError(f"v: unsupported version {d.get('v')!r}")
    n = d.get("n")
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"n: expected positive integer, got {n!r}")
    raw = d.get("weights", [])
    if not isinstance(raw, list):
        raise ValueError("weights: expected a list of [u, v, w]")
    weights = {}
    for i, item in enumerate(raw):
        if not (isinstance(item, list) and len(item) == 3):
            raise ValueError(f"weights[{i}]: expected [u, v, w]")
        u, v, w = item
        if not (isinstance(u, int) and isinstance(v, int)):
            raise ValueError(f"weights[{i}]: node ids must be integers")
        weights[(u, v)] = _w_in(w, f"weights[{i}]")
    ws = frozenset(_w_in(x, "weight_set") for x in d.get("weight_set", []))
    default = _w_in(d.get("default", 0), "default")
    labels = d.get("labels", [])
    if not (isinstance(labels, list) and all(isinstance(x, str) for x in labels)):
        raise ValueError("labels: expected a list of strings")
    cls = AsymGame if d.get("directed") else Game
    try:
        return cls(n=n, weights=weights, weight_set=ws, default=default, labels=tuple(labels))
    except (ValueError, TypeError) as e:
        raise ValueError(f"weights: {e}") from e


def save_game(game, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(game_to_json(game), fh)


def load_game(path: str):
    with open(path) as fh:
        return game_from_json(json.load(fh))


def uniform_game(n: int, enemies: Iterable[tuple[int, int]] = ()) -> Game:
    """W = {-inf, 1}: everyone is a friend except the listed conflict pairs."""
    return Game(n, {(u, v): NEG_INF for u, v in enemies}, frozenset({NEG_INF, 1}), default=1)
