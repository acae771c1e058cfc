"""Optimal partitions, worst stable partitions and price-of-anarchy ratios."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .extensions import max_configuration
from .game import NEG_INF, Partition, global_utility, twin_classes, utilities
from .stability import (DEFAULT_BUDGET, SearchTooLarge, all_k_stable,
                        enumerate_feasible_partitions)


class _Special:
    def __init__(self, name):
        self.name = name

    def __repr__(self):
        return self.name

    __str__ = __repr__


Infinite = _Special("Infinite")
Undefined = _Special("Undefined")


def _positive_components(pos, n):
    seen, comps = [False] * n, []
    for s in range(n):
        if seen[s]:
            continue
        seen[s] = True
        comp, stack = [], [s]
        while stack:  # DFS order keeps positive neighbours close together
            u = stack.pop()
            comp.append(u)
            nbrs = sorted((v for v in range(n) if pos[u][v] and not seen[v]), key=lambda v: -pos[u][v])
            for v in reversed(nbrs):
                seen[v] = True
                stack.append(v)
        comps.append(comp)
    return comps


def max_partition(game, budget: int | None = DEFAULT_BUDGET, method: str = "auto") -> tuple[Partition, int]:
    """Maximum global utility: ``method`` is "bnb", "milp" or "auto" (milp above 16 nodes).

    Exact maximum global utility by branch and bound over enemy-free partitions.

    Groups never need to straddle two components of the positive-weight graph,
    so each component is solved on its own. Inside a component the bound gives
    every unplaced node its best current group plus all positive weight to
    nodes placed after it.
    """
    if method not in ("auto", "bnb", "milp"):
        raise ValueError(f"unknown method {method!r}")
    n = game.n
    m = game.matrix
    pos = [[0 if (x is NEG_INF or x <= 0) else x for x in row] for row in m]
    if method == "milp" or (method == "auto" and n > 16):
        groups_out = []
        for comp in _positive_components(pos, n):
            groups_out.extend(_milp_component(m, comp))
        P = Partition(tuple(sorted(tuple(sorted(g)) for g in groups_out)))
        return P, global_utility(game, P)
    groups_out: list[tuple[int, ...]] = []
    total = 0
    counter = [0]
    for comp in _positive_components(pos, n):
        P, f = _max_component(m, pos, comp, budget, counter)
        groups_out.extend(P)
        total += f
    return Partition(tuple(sorted(tuple(sorted(g)) for g in groups_out))), total


def _max_component(m, pos, order, budget, counter):
    k = len(order)
    if k == 1:
        return [tuple(order)], 0
    # later[i]: positive weight from order[i] to order[i+1:]
    later = [sum(pos[order[i]][order[j]] for j in range(i + 1, k)) for i in range(k)]
    groups: list[list[int]] = []
    gpos: list[list[int]] = []   # gpos[g][x]: positive weight from x to group g
    gbad: list[list[bool]] = []  # gbad[g][x]: x has an enemy or finite loss in g
    gval: list[list[int]] = []   # exact weight from x to group g (finite part)
    best = [None, None]
    cap = None if budget is None else budget * 20

    def add(gi, x):
        row = m[x]
        for y in order:
            w = row[y]
            if w is NEG_INF:
                gbad[gi][y] = True
            else:
                gval[gi][y] += w
                if w > 0:
                    gpos[gi][y] += w

    def remove(gi, x):
        row = m[x]
        for y in order:
            w = row[y]
            if w is not NEG_INF:
                gval[gi][y] -= w
                if w > 0:
                    gpos[gi][y] -= w
        gbad[gi] = [False] * len(m)
        for z in groups[gi]:
            for y in order:
                if m[z][y] is NEG_INF:
                    gbad[gi][y] = True

    def rec(i, cur):
        counter[0] += 1
        if cap is not None and counter[0] > cap:
            raise SearchTooLarge(f"branch and bound exceeded {cap} nodes")
        if i == k:
            if best[1] is None or cur > best[1]:
                best[0] = [tuple(g) for g in groups]
                best[1] = cur
            return
        if best[1] is not None:
            bound = cur
            for j in range(i, k):
                x = order[j]
                b = 0
                for gi in range(len(groups)):
                    if not gbad[gi][x] and gpos[gi][x] > b:
                        b = gpos[gi][x]
                bound += 2 * (b + later[j])
            if bound <= best[1]:
                return
        x = order[i]
        cands = [(gval[gi][x], gi) for gi in range(len(groups)) if not gbad[gi][x]]
        cands.sort(key=lambda t: -t[0])
        for s, gi in cands:
            groups[gi].append(x)
            add(gi, x)
            rec(i + 1, cur + 2 * s)
            groups[gi].pop()
            remove(gi, x)
        groups.append([x])
        gpos.append([0] * len(m))
        gbad.append([False] * len(m))
        gval.append([0] * len(m))
        add(len(groups) - 1, x)
        rec(i + 1, cur)
        groups.pop()
        gpos.pop()
        gbad.pop()
        gval.pop()

    rec(0, 0)
    return best[0], best[1]


def _milp_component(m, comp):
    """Clique partitioning ILP solved by HiGHS; the result is rebuilt and checked for transitivity."""
    import numpy as np
    from scipy.optimize import Bounds, LinearConstraint, milp
    from scipy.sparse import lil_matrix

    k = len(comp)
    if k == 1:
        return [tuple(comp)]
    idx = {}
    for a in range(k):
        for b in range(a + 1, k):
            if m[comp[a]][comp[b]] is not NEG_INF:
                idx[(a, b)] = len(idx)
    if not idx:
        return [(u,) for u in comp]
    c = np.zeros(len(idx))
    for (a, b), j in idx.items():
        c[j] = -2 * m[comp[a]][comp[b]]
    rows = []
    for a, b, d in itertools.combinations(range(k), 3):
        e = [idx.get((a, b)), idx.get((b, d)), idx.get((a, d))]
        for apex in range(3):  # the pair opposite the apex may only be absent if one side is
            r = {}
            for t in range(3):
                if e[t] is not None:
                    r[e[t]] = r.get(e[t], 0) + (-1 if t == apex else 1)
            sides = [e[t] for t in range(3) if t != apex]
            if all(x is not None for x in sides):
                rows.append(r)
    A = lil_matrix((max(len(rows), 1), len(idx)))
    for i, r in enumerate(rows):
        for j, v in r.items():
            A[i, j] = v
    cons = [LinearConstraint(A.tocsr(), -np.inf, 1)] if rows else []
    res = milp(c, constraints=cons, integrality=np.ones(len(idx)), bounds=Bounds(0, 1))
    if res.status != 0:
        raise RuntimeError(f"MILP solver failed: {res.message}")
    x = {p: round(res.x[j]) for p, j in idx.items()}
    parent = list(range(k))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for (a, b), v in x.items():
        if v:
            parent[find(a)] = find(b)
    groups: dict[int, list[int]] = {}
    for a in range(k):
        groups.setdefault(find(a), []).append(a)
    for g in groups.values():
        for a, b in itertools.combinations(g, 2):
            if not x.get((a, b)):
                raise RuntimeError("MILP returned a non-transitive solution")
    return [tuple(comp[a] for a in g) for g in groups.values()]


def worst_k_stable(game, k: int, budget: int = DEFAULT_BUDGET) -> Optional[tuple[Partition, int]]:
    worst = None
    for P in all_k_stable(game, k, budget=budget):
        f = global_utility(game, P)
        if worst is None or f < worst[1]:
            worst = (P, f)
    return worst


def _ratio(best, worst):
    if worst == 0:
        return Fraction(1) if best == 0 else Infinite
    return Fraction(best, worst)


def price_of_anarchy(game, k: int, budget: int = DEFAULT_BUDGET):
    """f(P+)/f(P_k-) as a Fraction, Infinite (zero worst, positive best) or Undefined (no k-stable)."""
    w = worst_k_stable(game, k, budget)
    if w is None:
        return Undefined
    _, best = max_partition(game, budget)
    return _ratio(best, w[1])


def config_price_of_anarchy(game, h, q: int, k: int, budget: int = DEFAULT_BUDGET):
    """Same ratio over q-channel configurations, as (ratio, best, worst-stable)."""
    from .extensions import config_global_utility, enumerate_configurations, is_k_stable_config
    best = worst = None
    for C in enumerate_configurations(game, q, budget):
        f = config_global_utility(game, h, C)
        if f is NEG_INF:
            continue
        if best is None or f > best:
            best = f
        if is_k_stable_config(game, h, C, k) and (worst is None or f < worst):
            worst = f
    if worst is None:
        return Undefined, best, None
    if worst == 0:
        return (Fraction(1) if best == 0 else Infinite), best, worst
    return Fraction(best) / Fraction(worst), best, worst


@dataclass
class DeltaReport:
    delta_plus: int
    m_plus: int
    w_p: int
    f_opt: int
    f_worst: Optional[int]
    ratio: object
    bound: int
    stable_checked: int
    edge_step_ok: bool
    count_ok: bool
    opt_ok: bool
    zero_over_zero: bool = False

    @property
    def ok(self) -> bool:
        ratio_ok = (self.ratio is Undefined or self.zero_over_zero
                    or (self.ratio is not Infinite and self.ratio <= self.bound))
        return self.edge_step_ok and self.count_ok and self.opt_ok and ratio_ok


def check_delta_bound(game, k: int, stable: Iterable[Partition] | None = None,
                      optimum: int | None = None, budget: int = DEFAULT_BUDGET) -> DeltaReport:
    """Check the chain behind the O(Delta_+) bound on the given (or all) k-stable partitions.

    For every positive pair one endpoint has positive utility; hence at least
    m+/Delta+ nodes do, f(P+) <= 2 m+ w_p, and the ratio is at most 2 Delta+ w_p.
    """
    if k < 2:
        raise ValueError("the bound needs k >= 2")
    edges = game.positive_edges()
    m_plus = len(edges)
    deg = [0] * game.n
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    dplus = max(deg, default=0)
    wp = game.max_positive_weight()
    f_opt = optimum if optimum is not None else max_partition(game, budget)[1]
    parts = list(stable) if stable is not None else all_k_stable(game, k, budget=budget)
    edge_ok = count_ok = True
    worst = None
    for P in parts:
        f = utilities(game, P)
        if any(f[u] <= 0 and f[v] <= 0 for u, v in edges):
            edge_ok = False
        npos = sum(1 for x in f if x is not NEG_INF and x > 0)
        if dplus and npos * dplus < m_plus:
            count_ok = False
        tot = global_utility(game, P)
        if worst is None or tot < worst:
            worst = tot
    if m_plus == 0:
        ratio, zz = Fraction(1), True
    elif worst is None:
        ratio, zz = Undefined, False
    else:
        ratio, zz = _ratio(f_opt, worst), False
    return DeltaReport(dplus, m_plus, wp, f_opt, worst, ratio, 2 * dplus * wp, len(parts),
                       edge_ok, count_ok, f_opt <= 2 * m_plus * wp, zz)


__all__ = ["Infinite", "Undefined", "max_partition", "worst_k_stable", "price_of_anarchy",
           "check_delta_bound", "config_price_of_anarchy", "DeltaReport", "max_configuration", "enumerate_feasible_partitions",
           "twin_classes"]
