"""Counterexample, reduction and lower-bound graph builders with checkable claims."""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import networkx as nx

from .dynamics import Deviation, apply_deviation, iter_deviations
from .game import (BEST_FRIEND, NEG_INF, AsymGame, Game, Partition, global_utility,
                   is_feasible, utility)
from .stability import SearchTooLarge, exists_k_stable, is_k_stable


def _game(n, pos: dict, weight_set, default=NEG_INF, labels=()):
    return Game(n, pos, frozenset(weight_set), default=default, labels=tuple(labels))


# -- figures ------------------------------------------------------------------------

def fig1() -> Game:
    """Four friendly triangles whose connectors also form a friendly 4-clique.

    Node 3i is the connector of triangle i; 3i+1 and 3i+2 are its other members.
    """
    pos = {}
    for i in range(4):
        a, b, c = 3 * i, 3 * i + 1, 3 * i + 2
        pos[(a, b)] = pos[(a, c)] = pos[(b, c)] = 1
    for i, j in itertools.combinations(range(4), 2):
        pos[(3 * i, 3 * j)] = 1
    labels = [f"{kind}{i}" for i in range(4) for kind in ("c", "p", "r")]
    return _game(12, pos, {NEG_INF, 1}, labels=labels)


def fig1_partitions():
    left = Partition(tuple((3 * i, 3 * i + 1, 3 * i + 2) for i in range(4)))
    right = Partition(((0, 3, 6, 9),) + tuple((3 * i + 1, 3 * i + 2) for i in range(4)))
    return left, right


def fig2_rotation(w1: int = 2, w2: int = 3, w3: int = 4) -> Game:
    """Six-node rotation game u1,u2,u3 (0..2), v1,v2,v3 (3..5).

    v_i v_{i+1} = w1, u_i v_{i+1} = w2, u_i v_{i+2} = w3; every other pair is
    an enemy pair. The orientation was fixed by exhaustive search over the
    rotation-symmetric assignments.
    """
    if not (w1 < w2 < w3 and w1 + w2 > w3):
        raise ValueError("need w1 < w2 < w3 and w1 + w2 > w3")
    pos = {}
    for i in range(3):
        pos[(3 + i, 3 + (i + 1) % 3)] = w1
        pos[(i, 3 + (i + 1) % 3)] = w2
        pos[(i, 3 + (i + 2) % 3)] = w3
    return _game(6, pos, {NEG_INF, w1, w2, w3}, labels=["u1", "u2", "u3", "v1", "v2", "v3"])


def fig3_no3stable(h: int = 2) -> Game:
    """Four cliques A_i of size h (a_i first), b_0..b_3, c_0, c_1 over {-inf, 0, 1}."""
    if h < 2:
        raise ValueError("h must be >= 2")
    A = [list(range(i * h, (i + 1) * h)) for i in range(4)]
    b = [4 * h + i for i in range(4)]
    c = [4 * h + 4, 4 * h + 5]
    pos = {}
    for i in range(4):
        for x, y in itertools.combinations(A[i], 2):
            pos[(x, y)] = 1
        for x in A[i]:
            pos[(b[i], x)] = 1
            pos[(c[i % 2], x)] = 1
        for x in A[(i + 1) % 4][1:]:
            pos[(b[i], x)] = 1
        pos[(b[i], A[(i + 1) % 4][0])] = 0
        pos[(b[i], b[(i + 1) % 4])] = 1
        pos[(c[0], b[i])] = pos[(c[1], b[i])] = 1
    labels = [f"A{i}.{j}" if j else f"a{i}" for i in range(4) for j in range(h)]
    labels += [f"b{i}" for i in range(4)] + ["c0", "c1"]
    return _game(4 * h + 6, pos, {NEG_INF, 0, 1}, labels=labels)


def extent_ab(a: int = 1, b: int = 2) -> Game:
    """Three b-cliques V1, V2, V3 plus a b-clique of hubs u1, u2, u3 over {-inf, a, b}.

    Nodes: x1..x3 = 0..2, y1..y3 = 3..5, z1..z3 = 6..8, u1..u3 = 9..11.
    """
    if not 0 < a < b:
        raise ValueError("need 0 < a < b")
    V = [[0, 1, 2], [3, 4, 5], [6, 7, 8]]
    u = [9, 10, 11]
    pos = {}
    for grp in V + [u]:
        for x, y in itertools.combinations(grp, 2):
            pos[(x, y)] = b
    for i in range(3):
        for x in V[i]:
            pos[(u[i], x)] = b
        # hub i+1 likes V_i: two members at b, the third at a
        nxt = u[(i + 1) % 3]
        pos[(nxt, V[i][0])] = pos[(nxt, V[i][1])] = b
        pos[(nxt, V[i][2])] = a
    labels = ["x1", "x2", "x3", "y1", "y2", "y3", "z1", "z2", "z3", "u1", "u2", "u3"]
    return _game(12, pos, {NEG_INF, a, b}, labels=labels)


# -- {-a, b} construction -----------------------------------------------------------

@dataclass(frozen=True)
class NegabLayout:
    a: int
    b: int
    t: tuple[int, int, int]
    sizes: tuple[int, int, int]
    U: tuple[tuple[int, ...], ...]
    V: tuple[tuple[int, ...], ...]
    Vm: tuple[tuple[int, ...], ...]
    Vp: tuple[tuple[int, ...], ...]


def _negab_lhs(t, a, b):
    # parsed as max(t*b, (t+1)*a + 2(b+a) + 3) * a
    return max(t * b, (t + 1) * a + 2 * (b + a) + 3) * a


def negab_parameters(a: int, b: int) -> tuple[int, int, int]:
    """Smallest t1 <= t2 <= t3 meeting the five size inequalities."""
    if a < 1 or b < 1:
        raise ValueError("a and b must be positive")
    lo = -(-5 * (b + a + 1) // max(b - a, 1))
    t1 = lo
    while _negab_lhs(t1, a, b) < (3 * (b + a) + 2) * b + 1:
        t1 += 1
    t2 = t1
    while _negab_lhs(t2, a, b) < ((t1 + 5) * (b + a) + 4) * b + 1:
        t2 += 1
    t3 = t2
    while _negab_lhs(t3, a, b) < ((t2 + 5) * (b + a) + 4) * b + 1:
        t3 += 1
    return t1, t2, t3


def negab_layout(a: int = 1, b: int = 2) -> NegabLayout:
    ts = negab_parameters(a, b)
    sizes = tuple(t * (b + a) + 3 * (b + a + 1) for t in ts)
    nxt = 0
    U, V, Vm, Vp = [], [], [], []
    for _ in range(3):
        U.append(tuple(range(nxt, nxt + b + a + 1)))
        nxt += b + a + 1
    for i in range(3):
        grp = tuple(range(nxt, nxt + sizes[i]))
        nxt += sizes[i]
        V.append(grp)
        Vm.append(grp[:ts[i] * b])
        Vp.append(grp[:(ts[i] + 1) * b])
    return NegabLayout(a, b, ts, sizes, tuple(U), tuple(V), tuple(Vm), tuple(Vp))


def negab(a: int = 1, b: int = 2) -> Game:
    """U/V clique construction over {-a, b}; every pair not listed as friendly is -a.

    The size inequalities read ``max(t*b, (t+1)a + 2(b+a) + 3) * a >= ...``,
    i.e. the maximum is multiplied by a.
    """
    L = negab_layout(a, b)
    n = sum(len(x) for x in L.U) + sum(L.sizes)
    pos = {}
    allU = [x for grp in L.U for x in grp]
    for x, y in itertools.combinations(allU, 2):
        pos[(x, y)] = b
    for i in range(3):
        for x, y in itertools.combinations(L.V[i], 2):
            pos[(x, y)] = b
        notm = set(L.V[i]) - set(L.Vm[i])
        j = (i + 1) % 3
        notp = set(L.V[j]) - set(L.Vp[j])
        for x in L.U[i]:
            for y in notm:
                pos[(x, y)] = b
            for y in notp:
                pos[(x, y)] = b
    return Game(n, pos, frozenset({-a, b}), default=-a)


# -- chaotic behaviour --------------------------------------------------------------

def chaotic_channels(q: int = 1) -> Game:
    """u1..u4 (0..3) plus q-1 pendant nodes tied to u4 by a best-friend weight."""
    if q < 1:
        raise ValueError("q must be >= 1")
    n = 4 + q - 1
    pos = {(0, 3): 7, (1, 3): 6, (2, 3): 2, (1, 2): -4}
    ws = {NEG_INF, -4, 2, 6, 7}
    for i in range(4, n):
        pos[(3, i)] = BEST_FRIEND
        ws.add(BEST_FRIEND)
    labels = ["u1", "u2", "u3", "u4"] + [f"x{i}" for i in range(1, q)]
    return _game(n, pos, ws, labels=labels)


def chaotic4() -> Game:
    return chaotic_channels(1)


def disjoint_union(games) -> Game:
    """Components side by side; nodes of different components are enemies."""
    pos, off, ws, labels = {}, 0, set(), []
    for g in games:
        for u in range(g.n):
            for v in range(u + 1, g.n):
                x = g.raw(u, v)
                if x is not NEG_INF:
                    pos[(u + off, v + off)] = x
        ws |= set(g.weight_set)
        labels += list(g.labels) if g.labels else [f"n{u}" for u in range(g.n)]
        off += g.n
    ws.add(NEG_INF)
    return _game(off, pos, ws, labels=labels)


def chaotic_schedule(q_list, bad_set) -> Game:
    """A positive pair (stable at every q) next to one chaotic component per bad q.

    The claim is read as: for each q in ``q_list``, a 2-stable configuration with
    q channels exists exactly when q is not in ``bad_set``.
    """
    base = _game(2, {(0, 1): 1}, {1})
    return disjoint_union([base] + [chaotic_channels(q) for q in sorted(set(bad_set))])


def chaotic_h(game):
    """LinearEps with eps below 1/N for the game's best-friend value."""
    from .extensions import LinearEps
    return LinearEps(Fraction(1, game.best_friend_value + 1))


# -- asymmetric reduction -----------------------------------------------------------

def asym_partition_reduction(S) -> AsymGame:
    """Digraph on S + {z, u, v}: nodes 0..|S|-1 carry the numbers, then z, u, v."""
    S = list(S)
    if not S or any((not isinstance(s, int)) or s < 1 for s in S):
        raise ValueError("S must be a non-empty multiset of positive integers")
    T = sum(S)
    m = len(S)
    z, u, v = m, m + 1, m + 2
    W = {}
    for i, si in enumerate(S):
        for j, sj in enumerate(S):
            if i != j:
                W[(i, j)] = -sj
        W[(i, u)] = W[(i, v)] = T - si + 1
        W[(u, i)] = W[(v, i)] = 0
        W[(i, z)] = si
        W[(z, i)] = -si
    W[(u, v)] = W[(v, u)] = NEG_INF
    W[(u, z)] = W[(v, z)] = 0
    W[(z, u)] = W[(z, v)] = T + 1
    labels = [f"s{i}" for i in range(m)] + ["z", "u", "v"]
    return AsymGame(m + 3, W, labels=tuple(labels))


def has_balanced_split(S) -> bool:
    """Direct subset-sum solver for the two-way Partition problem."""
    T = sum(S)
    if T % 2:
        return False
    reach = {0}
    for s in S:
        reach |= {r + s for r in reach}
    return T // 2 in reach


# -- gossip reduction ---------------------------------------------------------------

@dataclass(frozen=True)
class GossipLayout:
    vertices: tuple
    v1: dict
    v2: dict
    vc: dict  # (vertex, color) -> node
    c: tuple


def _gossip_layout(G: nx.Graph) -> GossipLayout:
    verts = tuple(sorted(G.nodes))
    v1, v2, vc = {}, {}, {}
    nxt = 0
    for x in verts:
        v1[x], v2[x] = nxt, nxt + 1
        for i in range(3):
            vc[(x, i)] = nxt + 2 + i
        nxt += 5
    return GossipLayout(verts, v1, v2, vc, (nxt, nxt + 1, nxt + 2))


def gossip_3coloring_reduction(G: nx.Graph) -> Game:
    """5|V|+3 node game over {-inf, 0, 1}; gossip-stable 2-stable iff G is 3-colorable."""
    L = _gossip_layout(G)
    n = 5 * len(L.vertices) + 3
    W = {}
    for x in L.vertices:
        W[(L.v1[x], L.v2[x])] = 1
        for i in range(3):
            W[(L.v1[x], L.vc[(x, i)])] = W[(L.v2[x], L.vc[(x, i)])] = 1
            W[(L.c[i], L.vc[(x, i)])] = 1
        for i, j in itertools.combinations(range(3), 2):
            W[(L.vc[(x, i)], L.vc[(x, j)])] = NEG_INF
    for i, j in itertools.combinations(range(3), 2):
        W[(L.c[i], L.c[j])] = NEG_INF
    for x in L.vertices:
        for i in range(3):
            for j in range(3):
                if i == j:
                    continue
                W[(L.vc[(x, i)], L.c[j])] = NEG_INF
                for y in L.vertices:
                    W[(L.vc[(x, i)], L.vc[(y, j)])] = NEG_INF
    for x, y in G.edges:
        for a in (L.v1, L.v2):
            for b in (L.v1, L.v2):
                W[(a[x], b[y])] = NEG_INF
    labels = [""] * n
    for x in L.vertices:
        labels[L.v1[x]], labels[L.v2[x]] = f"{x}_1", f"{x}_2"
        for i in range(3):
            labels[L.vc[(x, i)]] = f"{x}_c{i + 1}"
    for i in range(3):
        labels[L.c[i]] = f"c{i + 1}"
    return _game(n, W, {NEG_INF, 0, 1}, default=0, labels=labels)


def gossip_coloring_partition(G: nx.Graph, coloring: dict) -> Partition:
    """Three groups, one per color: c_i, all colored copies of color i, and v_1, v_2 of color-i vertices."""
    L = _gossip_layout(G)
    groups = [[L.c[i]] for i in range(3)]
    for x in L.vertices:
        for i in range(3):
            groups[i].append(L.vc[(x, i)])
        groups[coloring[x]] += [L.v1[x], L.v2[x]]
    return Partition(tuple(tuple(g) for g in groups))


def gossip_restricted_search(G: nx.Graph, game: Game | None = None) -> Optional[Partition]:
    """Search the three-group candidates a gossip-stable partition must take.

    A gossip-stable 2-stable partition has exactly the three color groups, so
    the candidates are indexed by maps from vertices to colors.
    """
    game = game or gossip_3coloring_reduction(G)
    verts = sorted(G.nodes)
    for cols in itertools.product(range(3), repeat=len(verts)):
        P = gossip_coloring_partition(G, dict(zip(verts, cols)))
        if is_feasible(game, P) and is_k_stable(game, P, 2, gossip=True):
            return P
    return None


def is_3_colorable(G: nx.Graph) -> bool:
    verts = sorted(G.nodes)
    for cols in itertools.product(range(3), repeat=len(verts)):
        c = dict(zip(verts, cols))
        if all(c[x] != c[y] for x, y in G.edges):
            return True
    return False


# -- hardness transformations -------------------------------------------------------

def _wp(game) -> int:
    wp = game.max_positive_weight()
    if wp <= 0:
        raise ValueError("the game needs a positive weight")
    return wp


def tilde_G(game: Game, t: int, copies: int | None = None) -> Game:
    """Append ``copies`` (default n) mutually hostile w_p-cliques of size t, each fully w_p-linked to V."""
    wp = _wp(game)
    n = game.n
    copies = n if copies is None else copies
    W = {k: x for k, x in game.weights.items()}
    if game.default != 0:
        W.update({(u, v): game.default for u in range(n) for v in range(u + 1, n) if (u, v) not in W})
    off = n
    for i in range(copies):
        block = range(off + i * t, off + (i + 1) * t)
        for x, y in itertools.combinations(block, 2):
            W[(x, y)] = wp
        for x in block:
            for v in range(n):
                W[(v, x)] = wp
    total = n + copies * t
    for i, j in itertools.combinations(range(copies), 2):
        for x in range(off + i * t, off + (i + 1) * t):
            for y in range(off + j * t, off + (j + 1) * t):
                W[(x, y)] = NEG_INF
    return Game(total, W, frozenset(set(game.weight_set) | {wp, NEG_INF}))


def bar_G(game: Game, alpha: int, wp: int | None = None) -> Game:
    """Replace every node by a w_p-clique of alpha nodes; node u owns ids u*alpha .. u*alpha+alpha-1.

    ``wp`` defaults to the game's largest positive weight.
    """
    wp = _wp(game) if wp is None else wp
    n = game.n
    W = {}
    for u in range(n):
        for x, y in itertools.combinations(range(u * alpha, (u + 1) * alpha), 2):
            W[(x, y)] = wp
    for u in range(n):
        for v in range(u + 1, n):
            x = game.raw(u, v)
            if x == 0:
                continue
            for i in range(alpha):
                for j in range(alpha):
                    W[(u * alpha + i, v * alpha + j)] = x
    return Game(n * alpha, W, frozenset(set(game.weight_set) | {wp}))


@dataclass(frozen=True)
class HardnessInstance:
    game: Game
    f0: int
    alpha: int
    t: int
    x0: int
    G1_nodes: range
    G2_nodes: range


def _max_breaking_utility(G0: Game, x0: int, k: int) -> int:
    """Largest utility x0 reaches in one k-deviation breaking (stable partition of G0 - x0) + {x0}."""
    rest = [u for u in range(G0.n) if u != x0]
    sub = Game(len(rest), {(i, j): G0.raw(rest[i], rest[j]) for i in range(len(rest))
                           for j in range(i + 1, len(rest)) if G0.raw(rest[i], rest[j]) != 0},
               frozenset(G0.weight_set))
    P0 = exists_k_stable(sub, k)
    if P0 is None:
        raise ValueError("G0 minus x0 has no k-stable partition")
    P = Partition(tuple(tuple(rest[i] for i in g) for g in P0.groups) + ((x0,),))
    best = None
    for d, _ in iter_deviations(G0, P, k):
        P2 = apply_deviation(G0, P, d, check=False)
        val = utility(G0, P2, x0)
        if val is not NEG_INF and (best is None or val > best):
            best = val
    if best is None:
        raise ValueError("no deviation breaks the glued partition")
    return best


def hardness_reduction(G_conflict: nx.Graph, c: int, G0: Game, x0: int, k: int = 2) -> HardnessInstance:
    """H_G: tilde(G0)_t and the alpha-blow-up of the conflict graph, glued through x0."""
    wp = _wp(G0)
    n0 = G0.n
    if c < 2 * n0 + 1:
        raise ValueError(f"c must be at least 2*n0+1 = {2 * n0 + 1}")
    f0 = max(_max_breaking_utility(G0, x0, k), 1)
    alpha = -(-f0 // wp)
    t = math.floor(alpha * c - Fraction(f0, wp))
    verts = sorted(G_conflict.nodes)
    idx = {x: i for i, x in enumerate(verts)}
    DG = Game(max(len(verts), 1), {(idx[x], idx[y]): NEG_INF for x, y in G_conflict.edges},
              frozenset({NEG_INF, wp}), default=wp)
    G1 = tilde_G(G0, t)
    G2 = bar_G(DG, alpha, wp)
    n1 = G1.n
    W = {}
    for g, off in ((G1, 0), (G2, n1)):
        for u in range(g.n):
            for v in range(u + 1, g.n):
                x = g.raw(u, v)
                if x != 0:
                    W[(u + off, v + off)] = x
    for u in range(n1):
        for v in range(n1, n1 + G2.n):
            W[(u, v)] = wp if u == x0 else NEG_INF
    game = Game(n1 + G2.n, W, frozenset(set(G1.weight_set) | set(G2.weight_set)))
    return HardnessInstance(game, f0, alpha, t, x0, range(0, n1), range(n1, n1 + G2.n))


# -- price of anarchy ---------------------------------------------------------------

def poa_grid(k: int = 2, n: int = 36, a: int = 1, b: int = 1) -> Game:
    """(k+1) rows by n'/(k+1) columns; friends (b) share a row or a column, else -a.

    Node (i, j) has id i * cols + j.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    n2 = (k + 1) ** 2 * (n // (k + 1) ** 2)
    if n2 == 0:
        raise ValueError(f"n must be at least (k+1)^2 = {(k + 1) ** 2}")
    cols = n2 // (k + 1)
    W = {}
    for x in range(n2):
        for y in range(x + 1, n2):
            same = x // cols == y // cols or x % cols == y % cols
            if same:
                W[(x, y)] = b
    return Game(n2, W, frozenset({-a, b}), default=-a)


def poa_grid_partitions(k: int = 2, n: int = 36):
    n2 = (k + 1) ** 2 * (n // (k + 1) ** 2)
    cols = n2 // (k + 1)
    rows = Partition(tuple(tuple(range(i * cols, (i + 1) * cols)) for i in range(k + 1)))
    columns = Partition(tuple(tuple(i * cols + j for i in range(k + 1)) for j in range(cols)))
    return rows, columns


def poa_blocks(k: int = 2, b: int = 2, b2: int = 1, n: int = 16) -> Game:
    """n'/(kb) blocks of kb nodes; weight b inside a block and b2 < b across."""
    if not 0 < b2 < b:
        raise ValueError("need 0 < b' < b")
    size = k * b
    n2 = size * (n // size)
    if n2 == 0:
        raise ValueError(f"n must be at least kb = {size}")
    W = {(x, y): b for x in range(n2) for y in range(x + 1, n2) if x // size == y // size}
    return Game(n2, W, frozenset({b, b2}), default=b2)


def poa_blocks_partition(k: int = 2, b: int = 2, n: int = 16) -> Partition:
    size = k * b
    n2 = size * (n // size)
    return Partition(tuple(tuple(range(i, i + size)) for i in range(0, n2, size)))


def poa_zero_nash(variant: str = "circulant", b: int = 1, a: int = 1, R: int = 8) -> Game:
    """Games whose worst Nash equilibrium has zero utility while the optimum reaches R.

    ``bipartite`` (weights {-inf, 0, b}): halves V1, V2 with b across, 0 inside,
    guards v1 (enemy of V2) and v2 (enemy of V1) as the last two nodes.
    ``circulant`` (weights {-a, b}): Z_n with -a on the d-regular circulant and b elsewhere.
    """
    if variant == "bipartite":
        m = 1
        while 2 * b * m * m < R:
            m += 1
        n = 2 * m + 2
        g1, g2 = n - 2, n - 1
        W = {}
        for x in range(2 * m):
            for y in range(x + 1, 2 * m):
                W[(x, y)] = b if (x < m) != (y < m) else 0
        for x in range(m):
            W[(x, g2)] = NEG_INF
            W[(m + x, g1)] = NEG_INF
        return Game(n, W, frozenset({NEG_INF, 0, b}), default=0)
    if variant == "circulant":
        m = max(1, -(-R // (2 * b * (b + a))))
        d = 2 * m * b
        n = 2 * m * (b + a) + 1
        W = {}
        for i in range(n):
            for j in range(i + 1, n):
                dist = min((j - i) % n, (i - j) % n)
                W[(i, j)] = -a if dist <= d // 2 else b
        return Game(n, W, frozenset({-a, b}))
    raise ValueError(f"unknown variant {variant!r}")


def poa_zero_nash_partitions(variant: str = "circulant", b: int = 1, a: int = 1, R: int = 8):
    """(zero-utility Nash partition, high-utility partition)."""
    g = poa_zero_nash(variant, b, a, R)
    if variant == "bipartite":
        m = (g.n - 2) // 2
        nash = Partition((tuple(range(m)) + (g.n - 2,), tuple(range(m, 2 * m)) + (g.n - 1,)))
        best = Partition((tuple(range(2 * m)), (g.n - 2, g.n - 1)))
    else:
        # consecutive residues are -a neighbours in the circulant, so pair nodes
        # along b-weighted pairs with a maximum matching instead
        nash = Partition((tuple(range(g.n)),))
        F = nx.Graph([(u, v) for u in range(g.n) for v in range(u + 1, g.n) if g.w(u, v) == b])
        F.add_nodes_from(range(g.n))
        pairs = sorted(tuple(sorted(e)) for e in nx.max_weight_matching(F, maxcardinality=True))
        used = {x for e in pairs for x in e}
        best = Partition(tuple(pairs) + tuple((x,) for x in range(g.n) if x not in used))
    return nash, best


# -- multichannel -------------------------------------------------------------------

@dataclass(frozen=True)
class TransformLayout:
    copies: dict   # (u, i) -> node
    gadgets: dict  # (u, v, g) -> (node1, node2)
    scale: int
    offset: int    # max f(G') = offset + scale/4 * max f(C)


def _transform_layout(game: Game, q: int, h) -> TransformLayout:
    for u in range(game.n):
        for v in range(u + 1, game.n):
            x = game.w(u, v)
            if x is not NEG_INF and x < 0:
                raise ValueError("weights must lie in {-inf} and the naturals")
    pos = [(u, v) for u, v in game.positive_edges()]
    deltas = {(u, v, g): Fraction(h(g, game.w(u, v))) - Fraction(h(g - 1, game.w(u, v)))
              for u, v in pos for g in range(1, q + 1)}
    den = 1
    for d in deltas.values():
        den = den * d.denominator // math.gcd(den, d.denominator)
    scale = 4 * den
    copies, nxt = {}, 0
    for u in range(game.n):
        for i in range(q):
            copies[(u, i)] = nxt
            nxt += 1
    gadgets = {}
    for u, v in pos:
        for g in range(1, q + 1):
            gadgets[(u, v, g)] = (nxt, nxt + 1)
            nxt += 2
    # unused gadgets keep their inner pair: 2 * (3/4) * delta each, scaled
    offset = sum(Fraction(3, 2) * d * scale for d in deltas.values())
    return TransformLayout(copies, gadgets, scale, int(offset))


def multichannel_transform(game: Game, q: int, h) -> Game:
    """Single-channel game whose maximum partition encodes a maximum q-channel configuration.

    All gadget weights are multiplied by ``scale`` (4 times the common
    denominator of the h increments) to keep them integral.
    """
    lay = _transform_layout(game, q, h)
    s = lay.scale
    W = {}
    n2 = len(lay.copies) + 2 * len(lay.gadgets)
    for u in range(game.n):
        for i, j in itertools.combinations(range(q), 2):
            W[(lay.copies[(u, i)], lay.copies[(u, j)])] = NEG_INF
    for u in range(game.n):
        for v in range(u + 1, game.n):
            x = game.w(u, v)
            if x is NEG_INF:
                for i in range(q):
                    for j in range(q):
                        W[(lay.copies[(u, i)], lay.copies[(v, j)])] = NEG_INF
    ws = {NEG_INF, 0}
    gadget_nodes = {}
    for (u, v, g), (g1, g2) in lay.gadgets.items():
        d = Fraction(h(g, game.w(u, v))) - Fraction(h(g - 1, game.w(u, v)))
        half, three = int(d * s / 2), int(d * s * 3 / 4)
        for i in range(q):
            W[(lay.copies[(u, i)], g1)] = half
            W[(lay.copies[(v, i)], g1)] = half
        W[(g1, g2)] = three
        ws |= {half, three}
        gadget_nodes.setdefault((u, v), []).append(g1)
        for y in range(n2):
            if y not in (g1, g2):
                W[(min(g2, y), max(g2, y))] = NEG_INF
    for firsts in gadget_nodes.values():
        for x, y in itertools.combinations(firsts, 2):
            W[(x, y)] = NEG_INF
    return Game(n2, W, frozenset(ws))


def transform_scale_offset(game: Game, q: int, h) -> tuple[int, int]:
    lay = _transform_layout(game, q, h)
    return lay.scale, lay.offset


def uniform_2channel_counterexample(p: int = 29) -> Game:
    """Base 3-stability counterexample (h=2) with p-cliques hung on it, over {-inf, 1}.

    Each base node without a 0-edge gets its own clique; each 0-edge gets a
    clique tied to both endpoints and becomes a 1-edge.
    """
    base = fig3_no3stable(2)
    nb = base.n
    if p <= 2 * nb:
        raise ValueError(f"p must exceed {2 * nb}")
    W = {}
    zero_edges = []
    for u in range(nb):
        for v in range(u + 1, nb):
            x = base.raw(u, v)
            if x == 1:
                W[(u, v)] = 1
            elif x == 0:
                zero_edges.append((u, v))
                W[(u, v)] = 1
    has_zero = {u for e in zero_edges for u in e}
    nxt = nb
    cliques = []
    for u in range(nb):
        if u not in has_zero:
            cliques.append(((u,), range(nxt, nxt + p)))
            nxt += p
    for e in zero_edges:
        cliques.append((e, range(nxt, nxt + p)))
        nxt += p
    for anchors, block in cliques:
        for x, y in itertools.combinations(block, 2):
            W[(x, y)] = 1
        for x in block:
            for a in anchors:
                W[(a, x)] = 1
    return _game(nxt, W, {NEG_INF, 1})


# -- claims -------------------------------------------------------------------------

PASS, FAIL, INFEASIBLE = "PASS", "FAIL", "INFEASIBLE"


@dataclass
class Claim:
    name: str
    statement: str
    check: Callable[[int], bool] = field(repr=False)
    budget: int = 2_000_000


@dataclass
class Verdict:
    claim: str
    status: str
    seconds: float
    detail: str = ""

    def line(self) -> str:
        return f"{self.status} {self.claim} ({self.seconds:.2f}s){' ' + self.detail if self.detail else ''}"


def verify(claim: Claim, budget: int | None = None) -> Verdict:
    t0 = time.perf_counter()
    try:
        ok = claim.check(budget if budget is not None else claim.budget)
        status = PASS if ok else FAIL
        detail = ""
    except SearchTooLarge as e:
        status, detail = INFEASIBLE, str(e)
    return Verdict(claim.name, status, time.perf_counter() - t0, detail)


def _none_at(game, k, prune=True):
    return lambda B: exists_k_stable(game, k, budget=B, prune_twins=prune) is None


def _some_at(game, k):
    return lambda B: exists_k_stable(game, k, budget=B) is not None


def _fig1_claims():
    g = fig1()
    left, right = fig1_partitions()

    def dev(_):
        moves = [d for d, _ in iter_deviations(g, left, 4) if set(d.coalition) == {0, 3, 6, 9}]
        return bool(moves) and apply_deviation(g, left, moves[0]) == right

    return [Claim("fig1.left_utility", "left partition has f = 24", lambda B: global_utility(g, left) == 24),
            Claim("fig1.right_utility", "right partition has f = 20, connectors get 3",
                  lambda B: global_utility(g, right) == 20 and utility(g, right, 0) == 3),
            Claim("fig1.connector_move", "the four connectors deviate together", dev),
            Claim("fig1.right_4stable", "right partition is 4-stable", lambda B: is_k_stable(g, right, 4))]


def _rotation_claims(w1=2, w2=3, w3=4):
    g = fig2_rotation(w1, w2, w3)
    P = Partition(((0, 4, 5), (1, 3), (2,)))

    def rot(_):
        return any(set(d.coalition) == {3, 4} and P.groups[d.target] == (2,)
                   for d, _ in iter_deviations(g, P, 2) if d.target is not None)

    return [Claim("fig2.no_2stable", "no 2-stable partition", _none_at(g, 2, prune=False)),
            Claim("fig2.1stable", "a 1-stable partition exists", _some_at(g, 1)),
            Claim("fig2.rotation", "v1 and v2 jointly move to the group of u3", rot)]


def _fig3_claims(h=2):
    g = fig3_no3stable(h)
    return [Claim("fig3.no_3stable", "no 3-stable partition", _none_at(g, 3), budget=5_000_000),
            Claim("fig3.2stable", "a 2-stable partition exists", _some_at(g, 2), budget=5_000_000)]


def _extent_claims(a=1, b=2):
    g = extent_ab(a, b)
    return [Claim("extent_ab.no_2stable", "no 2-stable partition", _none_at(g, 2)),
            Claim("extent_ab.1stable", "a 1-stable partition exists", _some_at(g, 1))]


def _negab_claims(a=1, b=2):
    L = negab_layout(a, b)

    def structural(_):
        g = negab(a, b)
        ok = set(g.weight_set) == {-a, b}
        ok &= all(len(L.Vm[i]) == L.t[i] * b and len(L.Vp[i]) == (L.t[i] + 1) * b for i in range(3))
        ok &= all(set(L.Vm[i]) < set(L.Vp[i]) < set(L.V[i]) for i in range(3))
        ok &= L.t[0] <= L.t[1] <= L.t[2]
        ok &= all(L.sizes[i] == L.t[i] * (b + a) + 3 * (b + a + 1) for i in range(3))
        return ok

    return [Claim("negab.structure", "sizes, weights and nested subcliques", structural)]


def _chaotic_claims():
    from .extensions import exists_k_stable_config
    g4 = chaotic4()
    g2 = chaotic_channels(2)
    h = chaotic_h(g2)
    return [Claim("chaotic4.no_2stable", "no 2-stable partition", _none_at(g4, 2)),
            Claim("chaotic4.1stable", "a 1-stable partition exists", _some_at(g4, 1)),
            Claim("chaotic_channels2.q1", "2-stable configuration with 1 channel exists",
                  lambda B: exists_k_stable_config(g2, h, 1, 2, B) is not None),
            Claim("chaotic_channels2.q2", "no 2-stable configuration with 2 channels",
                  lambda B: exists_k_stable_config(g2, h, 2, 2, B) is None)]


def _schedule_claims(q_list=(1, 2), bad=(2,)):
    from .extensions import exists_k_stable_config
    g = chaotic_schedule(q_list, bad)
    h = chaotic_h(g)

    def check(B):
        return all((exists_k_stable_config(g, h, q, 2, B) is not None) == (q not in bad) for q in q_list)

    return [Claim("chaotic_schedule", "stable exactly at channel counts outside the bad set", check, budget=5_000_000)]


def _asym_claims(sets=((1, 2, 3), (1, 1, 3), (1, 1))):
    def check(B):
        for S in sets:
            g = asym_partition_reduction(S)
            found = exists_k_stable(g, 1, budget=B, prune_twins=False) is not None
            if found != has_balanced_split(S):
                return False
        return True

    return [Claim("asym.partition_iff", "1-stable exists iff S splits evenly", check)]


def _gossip_claims():
    def check(_):
        for G in (nx.complete_graph(3), nx.complete_graph(4), nx.path_graph(2)):
            if (gossip_restricted_search(G) is not None) != is_3_colorable(G):
                return False
        return True

    return [Claim("gossip.coloring_iff", "restricted search agrees with 3-colorability", check)]


def _poa_claims():
    def grid(_):
        g = poa_grid(2, 36)
        rows, cols = poa_grid_partitions(2, 36)
        return (Fraction(global_utility(g, rows), global_utility(g, cols)) == Fraction(11, 2)
                and is_k_stable(g, cols, 2))

    def blocks(_):
        g = poa_blocks(2, 2, 1, 16)
        P = poa_blocks_partition(2, 2, 16)
        return is_k_stable(g, P, 2) and global_utility(g, P) == 16 * 2 * 3

    def zero(_):
        g = poa_zero_nash("circulant", 1, 1, 8)
        nash, best = poa_zero_nash_partitions("circulant", 1, 1, 8)
        return is_k_stable(g, nash, 1) and global_utility(g, nash) == 0 and global_utility(g, best) >= 8

    return [Claim("poa_grid.ratio", "rows/columns ratio is 11/2 and columns are 2-stable", grid),
            Claim("poa_blocks.stable", "block partition is 2-stable with f = n'b(kb-1)", blocks),
            Claim("poa_zero_nash.zero", "zero-utility Nash partition against f >= R", zero)]


def _transform_claims():
    from .efficiency import max_partition
    from .extensions import Indicator, LinearEps, max_configuration

    def equal(g, q, h, B):
        gp = multichannel_transform(g, q, h)
        _, best = max_partition(gp, budget=B)
        _, conf = max_configuration(g, h, q, B)
        scale, off = transform_scale_offset(g, q, h)
        return best * 4 == off * 4 + scale * conf

    edge = Game(2, {(0, 1): 1})
    tri = Game(3, {(0, 1): 1, (0, 2): 1, (1, 2): 1})
    return [Claim("multichannel_transform.edge", "maximum partition of G' encodes the maximum configuration",
                  lambda B: equal(edge, 1, Indicator(), B)),
            Claim("multichannel_transform.triangle_q2", "same encoding with two channels and a growing h",
                  lambda B: equal(tri, 2, LinearEps(Fraction(1, 2)), B))]


def _uniform2_claims(p=29):
    def check(_):
        g = uniform_2channel_counterexample(p)
        return set(g.weight_set) == {NEG_INF, 1} and g.n == 14 + 6 * p + 4 * p

    return [Claim("uniform_2channel.structure", "weight set and node count", check)]


REGISTRY: dict[str, tuple[Callable, Callable]] = {
    "fig1": (fig1, _fig1_claims),
    "fig2": (fig2_rotation, _rotation_claims),
    "fig3": (fig3_no3stable, _fig3_claims),
    "extent_ab": (extent_ab, _extent_claims),
    "negab": (negab, _negab_claims),
    "chaotic4": (chaotic4, _chaotic_claims),
    "chaotic_channels": (chaotic_channels, _chaotic_claims),
    "chaotic_schedule": (lambda q_list=(1, 2), bad=(2,): chaotic_schedule(q_list, bad), _schedule_claims),
    "asym_partition": (lambda *S: asym_partition_reduction(S or (1, 2, 3)), _asym_claims),
    "gossip": (lambda n=3: gossip_3coloring_reduction(nx.complete_graph(n)), _gossip_claims),
    "poa_grid": (poa_grid, _poa_claims),
    "poa_blocks": (poa_blocks, _poa_claims),
    "poa_zero_nash": (poa_zero_nash, _poa_claims),
    "multichannel_transform": (lambda: multichannel_transform(Game(2, {(0, 1): 1}), 1, _indicator()),
                               _transform_claims),
    "uniform_2channel": (uniform_2channel_counterexample, _uniform2_claims),
}


def _indicator():
    from .extensions import Indicator
    return Indicator()


def build(name: str, *params):
    if name not in REGISTRY:
        raise KeyError(f"unknown gallery entry {name!r}; known: {', '.join(sorted(REGISTRY))}")
    return REGISTRY[name][0](*params)


def claims(name: str, *params) -> list[Claim]:
    if name not in REGISTRY:
        raise KeyError(f"unknown gallery entry {name!r}; known: {', '.join(sorted(REGISTRY))}")
    return REGISTRY[name][1](*params)
