"""Interval dynamic program over labeled triangulations of the donut chain.

For every enrichment chord ``e`` two values are kept: ``A[e]`` is the cheapest
labeled triangulation of the pocket of ``e`` whose triangle at ``e`` is active
(inside the hull), ``I[e]`` the same with that triangle inactive.  Boundary
edges act as leaves: a polygon edge behaves like an active pocket (the polygon
interior), a box edge like an inactive one.

Costs are floats; ``INFEASIBLE`` (``math.inf``) marks impossible states.  The
separator charge of an edge outside the shortcut set is itself infeasible and
is never formed by multiplying with the trade-off weight, so ``lambda = 0``
still forbids such separators.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

INFEASIBLE = math.inf
ACTIVE, INACTIVE = True, False
_RTOL = 1e-12


class NoHullExists(RuntimeError):
    """No hull can be built from the given shortcuts."""


@dataclass(frozen=True)
class SolveConfig:
    lam: float = 0.5
    tie_break: str = "area-then-apex"

    def __post_init__(self):
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError("lambda must lie in [0, 1]")

    @property
    def beta(self):
        return 1.0 - self.lam


@dataclass
class DPTables:
    enrichment: object
    config: SolveConfig
    A: np.ndarray
    I: np.ndarray
    area_A: np.ndarray
    area_I: np.ndarray
    sep: np.ndarray
    tri_cost: np.ndarray
    choice_A: np.ndarray
    choice_I: np.ndarray

    @property
    def root(self):
        return self.enrichment.index[self.enrichment.chain.root]

    @property
    def internal_cost(self):
        return float(self.I[self.root])


@dataclass
class LabeledTriangulation:
    chain: object
    triangles: list
    separators: list
    internal_cost: float
    active_area2: int

    def active(self):
        return [t for t in self.triangles if t[3]]


def separator_costs(enrichment, lam):
    """Per-edge charge for becoming a separator (infeasible outside the shortcut set)."""
    sep = np.full(len(enrichment.edges), INFEASIBLE)
    for chord, e in enrichment.in_C.items():
        sep[enrichment.index[chord]] = lam * e.weight * e.length
    return sep


def _near(x, y):
    # tolerant equality; infinities compare equal to themselves only
    with np.errstate(invalid="ignore"):
        return (x == y) | (np.abs(x - y) <= _RTOL * np.maximum(1.0, np.minimum(np.abs(x), np.abs(y))))


def _pick(c1, a1, c2, a2):
    """Elementwise choice of option 1 over option 2: cheaper, then smaller area."""
    tie = _near(c1, c2)
    first = np.where(tie, a1 <= a2, c1 < c2)
    return first, np.where(first, c1, c2), np.where(first, a1, a2)


def child_choice(tables, ch, parent_active):
    """Label chosen for the pocket behind child edge(s) ``ch`` under a parent label."""
    A, I, sA, sI, sep = tables.A[ch], tables.I[ch], tables.area_A[ch], tables.area_I[ch], tables.sep[ch]
    if parent_active:
        return _pick(A, sA, I + sep, sI)
    first, cost, area = _pick(A + sep, sA, I, sI)
    return first, cost, area


def _segment_argmin(cost, area, starts, stops):
    """Per segment index of the minimal (cost, area, position) triple."""
    best = np.minimum.reduceat(cost, starts)
    rep = np.repeat(best, stops - starts)
    tie = _near(cost, rep)
    masked = np.where(tie, area, np.inf)
    best_area = np.minimum.reduceat(masked, starts)
    rep_area = np.repeat(best_area, stops - starts)
    hit = tie & (masked == rep_area)
    idx = np.where(hit, np.arange(len(cost)), len(cost))
    return np.minimum.reduceat(idx, starts)


def solve_dp(chain, enrichment, config):
    """Fill the tables in order of increasing span; returns ``(tables, internal_cost)``."""
    if not isinstance(config, SolveConfig):
        config = SolveConfig(float(config))
    lam, beta = config.lam, config.beta
    E = enrichment
    ne = len(E.edges)
    A = np.full(ne, INFEASIBLE)
    I = np.full(ne, INFEASIBLE)
    area_A = np.zeros(ne)
    area_I = np.zeros(ne)
    choice_A = np.full(ne, -1, dtype=np.int64)
    choice_I = np.full(ne, -1, dtype=np.int64)
    sep = separator_costs(E, lam)
    scale2 = 0.5 * 10.0 ** (-2 * chain.polygon.scale)
    tri_area = E.area2.astype(float) * scale2
    tri_cost = beta * tri_area
    spans = np.array([b - a for a, b in E.edges], dtype=np.int64)
    for t, (a, b) in enumerate(E.edges):
        if b - a != 1:
            break
        if chain.is_p_edge(a):
            A[t] = 0.0
        else:
            I[t] = 0.0
    tables = DPTables(E, config, A, I, area_A, area_I, sep, tri_cost, choice_A, choice_I)
    # edges are sorted by span, so each span is a contiguous block
    bounds = np.flatnonzero(np.diff(spans)) + 1
    blocks = np.split(np.arange(ne), bounds)
    off = E.offsets
    for block in blocks:
        if spans[block[0]] < 2:
            continue
        lo, hi = off[block[0]], off[block[-1] + 1]
        if lo == hi:
            continue
        L, R = E.left[lo:hi], E.right[lo:hi]
        _, lcA, laA = child_choice(tables, L, True)
        _, rcA, raA = child_choice(tables, R, True)
        _, lcI, laI = child_choice(tables, L, False)
        _, rcI, raI = child_choice(tables, R, False)
        costA = tri_cost[lo:hi] + lcA + rcA
        arA = tri_area[lo:hi] + laA + raA
        costI = lcI + rcI
        arI = laI + raI
        counts = off[block + 1] - off[block]
        has = block[counts > 0]
        starts = off[has] - lo
        stops = off[has + 1] - lo
        kA = _segment_argmin(costA, arA, starts, stops)
        kI = _segment_argmin(costI, arI, starts, stops)
        A[has], area_A[has], choice_A[has] = costA[kA], arA[kA], kA + lo
        I[has], area_I[has], choice_I[has] = costI[kI], arI[kI], kI + lo
    return tables, tables.internal_cost


def backtrack(tables, chain=None):
    """Labeled triangulation following the stored choices from the cut edge."""
    E = tables.enrichment
    chain = chain or E.chain
    root = tables.root
    if not math.isfinite(tables.I[root]):
        raise NoHullExists("no hull exists for this shortcut set")
    triangles, separators = [], []
    active2 = 0
    stack = [(root, INACTIVE)]
    while stack:
        e, label = stack.pop()
        r = tables.choice_A[e] if label else tables.choice_I[e]
        a, b = E.edges[e]
        k = int(E.apex[r])
        triangles.append((a, k, b, label))
        if label:
            active2 += int(E.area2[r])
        for ch in (int(E.left[r]), int(E.right[r])):
            first, _, _ = child_choice(tables, np.array([ch]), label)
            # option 1 is the active pocket
            child = bool(first[0])
            if child != label:
                separators.append(E.edges[ch])
            c, d = E.edges[ch]
            if d - c > 1:
                stack.append((ch, child))
    triangles.sort()
    separators.sort()
    return LabeledTriangulation(chain, triangles, separators, tables.internal_cost, active2)


def labeled_cost(enrichment, labeled, config):
    """Cost of a labeled triangulation recomputed by direct summation."""
    chain = enrichment.chain
    lam = config.lam if isinstance(config, SolveConfig) else float(config)
    perim = 0.0
    for s in labeled.separators:
        e = enrichment.in_C.get(s)
        if e is None:
            return INFEASIBLE
        perim += e.weight * e.length
    area = labeled.active_area2 * 0.5 * 10.0 ** (-2 * chain.polygon.scale)
    return (lam * perim if perim else 0.0) + (1.0 - lam) * area


def solve(chain, enrichment, config):
    """Run the DP and backtrack; returns ``(tables, labeled triangulation)``."""
    tables, _ = solve_dp(chain, enrichment, config)
    return tables, backtrack(tables, chain)
