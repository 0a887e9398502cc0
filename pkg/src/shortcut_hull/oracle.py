"""Brute-force ground truth: every triangulation, every labeling.

Costs are evaluated from the definition.  An edge is a separator when its two
sides carry different labels, or when it is a polygon edge next to an inactive
triangle; a box edge next to an active triangle, or a separator outside the
shortcut set, makes the labeling infeasible.  Nothing here is shared with the
dynamic program.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dp import INFEASIBLE, SolveConfig

MAX_M = 16


class InstanceTooLarge(ValueError):
    pass


@dataclass
class EnumerationStats:
    triangulation_count: int = 0
    labeled_count: int = 0
    min_cost: float = INFEASIBLE
    argmin: tuple | None = None
    tilings_ok: bool = True
    extra: dict = field(default_factory=dict)


def triangulations(edge, cands):
    """Every triangulation of the pocket of ``edge`` given apex sets per chord."""
    # no memoization on purpose: plain recursive apex choice
    a, b = edge
    if b - a == 1:
        yield []
        return
    for k in sorted(cands.get(edge, ())):
        for left in triangulations((a, k), cands):
            for right in triangulations((k, b), cands):
                yield [(a, k, b)] + left + right


def iter_triangulations(enrichment):
    chain = enrichment.chain
    if chain.m > MAX_M:
        raise InstanceTooLarge(f"m = {chain.m} exceeds {MAX_M}")
    cands = enrichment.candidate_sets()
    return triangulations(chain.root, cands)


def _label_matrix(t):
    rows = np.arange(2 ** t, dtype=np.int64)[:, None]
    return ((rows >> np.arange(t)) & 1).astype(bool)


def enumerate_labeled_triangulations(chain, enrichment, visitor=None, config=None, max_separators=None):
    """Walk every labeled triangulation of the donut chain.

    ``visitor(triangles, labels)`` is called once per labeled triangulation
    when given.  With ``config`` the minimal cost is tracked as well, counting
    only labelings with at most ``max_separators`` separators when that is set.
    """
    if chain.m > MAX_M:
        raise InstanceTooLarge(f"m = {chain.m} exceeds {MAX_M}")
    stats = EnumerationStats()
    lam = None if config is None else (config.lam if isinstance(config, SolveConfig) else float(config))
    total2 = chain.area2()
    for tris in iter_triangulations(enrichment):
        stats.triangulation_count += 1
        t = len(tris)
        stats.labeled_count += 2 ** t
        if sum(chain.triangle_area2(*tr) for tr in tris) != total2:
            stats.tilings_ok = False
        if visitor is not None:
            for labels in _label_matrix(t):
                visitor(tris, tuple(bool(x) for x in labels))
        if lam is not None:
            cost, labels = _best_labeling(chain, enrichment, tris, lam, max_separators)
            if cost < stats.min_cost:
                stats.min_cost = cost
                stats.argmin = (tris, labels)
    return stats


def _sides(chain, tris):
    # map every edge of the triangulation to the triangles touching it
    sides = {}
    for s, (a, k, b) in enumerate(tris):
        for e in ((a, k), (k, b), (a, b)):
            sides.setdefault(e, []).append(s)
    return sides


def _best_labeling(chain, enrichment, tris, lam, max_separators=None):
    t = len(tris)
    L = _label_matrix(t)
    scale = 10.0 ** -chain.polygon.scale
    area = np.array([chain.triangle_area2(*tr) for tr in tris], dtype=float) * 0.5 * scale * scale
    feasible = np.ones(len(L), dtype=bool)
    perim = np.zeros(len(L))
    count = np.zeros(len(L), dtype=np.int64)
    root = chain.root
    for e, owners in _sides(chain, tris).items():
        sc = enrichment.in_C.get(e)
        w = None if sc is None else sc.weight * sc.length
        a, b = e
        if len(owners) == 2:
            switch = L[:, owners[0]] != L[:, owners[1]]
        elif b - a == 1 and chain.is_p_edge(a):
            switch = ~L[:, owners[0]]
        elif (b - a == 1) or e == root:
            # box edges and the cut edge must see an inactive side
            feasible &= ~L[:, owners[0]]
            continue
        else:
            raise AssertionError(f"chord {e} has a single triangle")
        count += switch
        if w is None:
            feasible &= ~switch
        else:
            perim += np.where(switch, w, 0.0)
    if max_separators is not None:
        feasible &= count <= max_separators
    cost = lam * perim + (1.0 - lam) * (L @ area)
    cost = np.where(feasible, cost, INFEASIBLE)
    i = int(np.argmin(cost))
    return float(cost[i]), tuple(bool(x) for x in L[i])


def oracle_min_cost(chain, enrichment, config, max_separators=None):
    """Minimal labeled-triangulation cost over the whole enumeration."""
    return enumerate_labeled_triangulations(chain, enrichment, config=config, max_separators=max_separators).min_cost


def oracle_stats(chain, enrichment, config):
    return enumerate_labeled_triangulations(chain, enrichment, config=config)


__all__ = [
    "EnumerationStats",
    "InstanceTooLarge",
    "MAX_M",
    "enumerate_labeled_triangulations",
    "iter_triangulations",
    "oracle_min_cost",
    "oracle_stats",
    "triangulations",
]

