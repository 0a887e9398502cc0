"""Hole-free solver, edge and bend budgets, and the lambda sweep."""
from __future__ import annotations

import functools
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .dp import INFEASIBLE, LabeledTriangulation, NoHullExists, SolveConfig, separator_costs, solve
from .enrichment import build_enrichment
from .geometry import build_box_and_chain
from .hull import HullWithHoles, cost_report, extract_hull
from .shortcuts import (
    Shortcut,
    ShortcutSet,
    _length,
    generate_all_shortcuts,
    passes_through_vertex,
    validate_shortcut,
)


class NoPathExists(NoHullExists):
    pass


class InfeasibleBudget(NoHullExists):
    pass


@functools.lru_cache(maxsize=64)
def chain_of(P):
    """Donut chain of ``P`` (cached; the box warning is shown once)."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return build_box_and_chain(P)[1]


def _config(lam):
    return lam if isinstance(lam, SolveConfig) else SolveConfig(float(lam))


@dataclass
class Solution:
    hull: HullWithHoles
    report: object
    labeled: LabeledTriangulation | None = None
    enrichment: object = None
    stats: dict = field(default_factory=dict)


def solve_holes(P, C, lam, strategy=None, chain=None):
    """Optimal hull with holes allowed."""
    chain = chain or chain_of(P)
    cfg = _config(lam)
    E = build_enrichment(chain, C, strategy)
    _, lt = solve(chain, E, cfg)
    hull = extract_hull(lt, chain, C)
    return Solution(hull, cost_report(hull, P, cfg, C), lt, E)


# --------------------------------------------------------------------------
# no holes


def _has_pinches(P, chain):
    if len(set(P.vertices)) < P.n:
        return True
    return any(chain._touching[pos] for pos in range(5, chain.m))


def fillable_shortcuts(P, C, chain=None):
    """Pairs of ``C`` whose pocket can be tiled by triangles of the donut.

    On simple polygons every valid shortcut qualifies.  At pinch vertices a
    shortcut can run past the vertex on the wrong side, leaving a zero-area
    pocket that no hull can fill; those are filtered out here.
    """
    chain = chain or chain_of(P)
    if not _has_pinches(P, chain):
        return set(C.pairs())
    E = build_enrichment(chain, C, "full")
    ok = np.zeros(len(E.edges), dtype=bool)
    for t, (a, b) in enumerate(E.edges):
        if b - a == 1:
            ok[t] = True
            continue
        s, u = E.offsets[t], E.offsets[t + 1]
        ok[t] = bool((ok[E.left[s:u]] & ok[E.right[s:u]]).any())
    return {e.pair for chord, e in E.in_C.items() if ok[E.index[chord]]}


def solve_no_holes(P, C, lam, chain=None):
    """Shortest path over P indices ``0..n`` (the topmost vertex is source and sink)."""
    chain = chain or chain_of(P)
    cfg = _config(lam)
    n = P.n
    scale2 = 0.5 * 10.0 ** (-2 * P.scale)
    usable = fillable_shortcuts(P, C, chain)
    incoming = {}
    for e in C:
        if e.pair in usable:
            incoming.setdefault(e.j, []).append(e)
    dist = [INFEASIBLE] * (n + 1)
    area = [0] * (n + 1)
    back = [None] * (n + 1)
    dist[0] = 0.0
    for j in range(1, n + 1):
        for e in sorted(incoming.get(j, ()), key=lambda e: e.i):
            if not math.isfinite(dist[e.i]):
                continue
            a2 = chain.pocket_area2(chain.position(e.j), chain.position(e.i))
            c = dist[e.i] + cfg.lam * e.weight * e.length + cfg.beta * a2 * scale2
            ar = area[e.i] + a2
            if c < dist[j] - 1e-12 * max(1.0, abs(c)) or (abs(c - dist[j]) <= 1e-12 * max(1.0, abs(c)) and ar < area[j]):
                dist[j], area[j], back[j] = c, ar, e
    if not math.isfinite(dist[n]):
        raise NoPathExists("the shortcuts do not connect around the polygon")
    ring, edges = [], []
    j = n
    while j > 0:
        e = back[j]
        edges.append(e.pair)
        ring.append(e.i)
        j = e.i
    ring.reverse()
    hull = HullWithHoles(P, ring, [], sorted(edges))
    rep = cost_report(hull, P, cfg, C)
    return Solution(hull, rep, stats={"path_cost": dist[n]})


# --------------------------------------------------------------------------
# edge budget


def _budget_child(A, I, sep, parent_active):
    # value of a child pocket for every budget; a label switch uses one unit
    shifted_I = np.full_like(I, INFEASIBLE)
    shifted_A = np.full_like(A, INFEASIBLE)
    shifted_I[..., 1:] = I[..., :-1]
    shifted_A[..., 1:] = A[..., :-1]
    if parent_active:
        return np.minimum(A, shifted_I + sep[..., None])
    return np.minimum(shifted_A + sep[..., None], I)


def _minplus(L, R):
    k = L.shape[-1]
    out = np.full_like(L, INFEASIBLE)
    for b1 in range(k):
        np.minimum(out[..., b1:], L[..., b1:b1 + 1] + R[..., :k - b1], out=out[..., b1:])
    return out


def solve_k_edges(P, C, lam, k, strategy=None, chain=None):
    """Optimal hull with at most ``k`` edges in total."""
    if k < 1:
        raise ValueError("k must be positive")
    chain = chain or chain_of(P)
    cfg = _config(lam)
    E = build_enrichment(chain, C, strategy)
    ne = len(E.edges)
    K = k + 1
    A = np.full((ne, K), INFEASIBLE)
    I = np.full((ne, K), INFEASIBLE)
    sep = separator_costs(E, cfg.lam)
    scale2 = 0.5 * 10.0 ** (-2 * P.scale)
    tri_cost = cfg.beta * E.area2.astype(float) * scale2
    choice = {}
    spans = np.array([b - a for a, b in E.edges])
    for t, (a, b) in enumerate(E.edges):
        if b - a == 1:
            if chain.is_p_edge(a):
                A[t] = 0.0
            else:
                I[t] = 0.0
    off = E.offsets
    bounds = np.flatnonzero(np.diff(spans)) + 1
    for block in np.split(np.arange(ne), bounds):
        if spans[block[0]] < 2:
            continue
        lo, hi = off[block[0]], off[block[-1] + 1]
        if lo == hi:
            continue
        L, R = E.left[lo:hi], E.right[lo:hi]
        vals = {}
        for label in (True, False):
            cl = _budget_child(A[L], I[L], sep[L], label)
            cr = _budget_child(A[R], I[R], sep[R], label)
            v = _minplus(cl, cr)
            if label:
                v = v + tri_cost[lo:hi, None]
            vals[label] = v
        for e in block.tolist():
            s, t = off[e] - lo, off[e + 1] - lo
            if s == t:
                continue
            for label, table in ((True, A), (False, I)):
                v = vals[label][s:t]
                r = np.argmin(v, axis=0)
                table[e] = v[r, np.arange(K)]
                choice[(e, label)] = r + off[e]
    root = E.index[chain.root]
    best = I[root, k]
    if not math.isfinite(best):
        raise InfeasibleBudget(f"no hull with at most {k} edges")

    # backtrack with recomputed budget splits
    triangles, separators = [], []
    active2 = 0
    stack = [(root, False, k)]
    while stack:
        e, label, b = stack.pop()
        r = int(choice[(e, label)][b])
        a, c = E.edges[e]
        triangles.append((a, int(E.apex[r]), c, label))
        if label:
            active2 += int(E.area2[r])
        L, R = int(E.left[r]), int(E.right[r])
        cl = _budget_child(A[L][None], I[L][None], sep[L:L + 1], label)[0]
        cr = _budget_child(A[R][None], I[R][None], sep[R:R + 1], label)[0]
        b1 = int(np.argmin(cl[:b + 1] + cr[b::-1]))
        for ch, bb in ((L, b1), (R, b - b1)):
            stay = A[ch, bb] if label else I[ch, bb]
            switch = ((I if label else A)[ch, bb - 1] + sep[ch]) if bb > 0 else INFEASIBLE
            child = label if stay <= switch else (not label)
            if child != label:
                separators.append(E.edges[ch])
                bb -= 1
            lo_, hi_ = E.edges[ch]
            if hi_ - lo_ > 1:
                stack.append((ch, child, bb))
    lt = LabeledTriangulation(chain, sorted(triangles), sorted(separators), float(best), active2)
    hull = extract_hull(lt, chain, C)
    rep = cost_report(hull, P, cfg, C)
    assert hull.edge_count <= k
    return Solution(hull, rep, lt, E)


# --------------------------------------------------------------------------
# bend budget


def augment_collinear(P, C, chain=None, consecutive_only=False):
    """Add shortcuts running straight through P vertices.

    By default every valid shortcut whose open segment holds another P vertex
    is added.  With ``consecutive_only`` a segment is added only when it is a
    straight concatenation of shortcuts already in ``C``.
    """
    chain = chain or chain_of(P)
    have = set(C.pairs())
    extra = set()
    if not consecutive_only:
        for e in generate_all_shortcuts(P, chain, C.includes_polygon_edges):
            if e.pair not in have and passes_through_vertex(P, e.i, e.j):
                extra.add(e.pair)
    else:
        extra = _straight_concatenations(P, C, chain) - have
    edges = list(C.edges) + [Shortcut(i, j, _length(P, i, j)) for i, j in sorted(extra)]
    edges.sort(key=lambda e: e.pair)
    return ShortcutSet(P, edges, C.includes_polygon_edges)


def _straight_concatenations(P, C, chain):
    n = P.n
    nbrs = {}
    for e in C:
        u, v = e.i % n, e.j % n
        nbrs.setdefault(u, set()).add(v)
        nbrs.setdefault(v, set()).add(u)
    found = set()
    for u in nbrs:
        pu = P.point(u)
        for v in nbrs[u]:
            d = (P.point(v)[0] - pu[0], P.point(v)[1] - pu[1])
            cur = v
            while True:
                pc = P.point(cur)
                nxt = None
                for w in nbrs.get(cur, ()):
                    pw = P.point(w)
                    dw = (pw[0] - pc[0], pw[1] - pc[1])
                    if d[0] * dw[1] - d[1] * dw[0] == 0 and d[0] * dw[0] + d[1] * dw[1] > 0:
                        nxt = w
                        break
                if nxt is None:
                    break
                a, b = sorted((u, nxt))
                res = validate_shortcut(P, chain, a, b)
                if res:
                    found.add(res)
                cur = nxt
    return found


def solve_k_bends(P, C, lam, k, strategy=None, chain=None, consecutive_only=False):
    """Optimal hull with at most ``k`` bends, via the edge budget on the augmented set."""
    if k < 3:
        raise ValueError("k must be at least 3")
    chain = chain or chain_of(P)
    C2 = augment_collinear(P, C, chain, consecutive_only)
    sol = solve_k_edges(P, C2, lam, k, strategy, chain)
    assert sol.report.bend_count <= k
    sol.stats["augmented_size"] = len(C2)
    return sol


# --------------------------------------------------------------------------
# lambda sweep


@dataclass
class Regime:
    lo: float
    hi: float
    area2: int
    solution: Solution


@dataclass
class SweepResult:
    regimes: list
    transitions: list
    samples: list

    def areas(self):
        return [r.solution.report.area for r in self.regimes]


def lambda_sweep(P, C, eps=0.01, strategy=None, chain=None, solver=None):
    """Bisect ``[0, 1]`` for the lambda values where the optimal hull changes."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    chain = chain or chain_of(P)
    E = build_enrichment(chain, C, strategy)
    cache = {}

    def at(lam):
        if lam not in cache:
            if solver is not None:
                sol = solver(lam)
                key = round(sol.report.area * 2 * 10 ** (2 * P.scale))
            else:
                cfg = SolveConfig(lam)
                _, lt = solve(chain, E, cfg)
                hull = extract_hull(lt, chain, C)
                sol = Solution(hull, cost_report(hull, P, cfg, C), lt, E)
                key = lt.active_area2
            cache[lam] = (key, sol)
        return cache[lam]

    def rec(lo, hi):
        if at(lo)[0] == at(hi)[0] or hi - lo <= eps:
            return
        mid = 0.5 * (lo + hi)
        at(mid)
        rec(lo, mid)
        rec(mid, hi)

    rec(0.0, 1.0)
    lams = sorted(cache)
    regimes = []
    for lam in lams:
        key, sol = cache[lam]
        if regimes and regimes[-1].area2 == key:
            # keep the latest sample: at lambda = 0 perimeter does not break ties
            regimes[-1].hi = lam
            regimes[-1].solution = sol
        else:
            regimes.append(Regime(lam, lam, key, sol))
    transitions = [(a.hi, b.lo) for a, b in zip(regimes, regimes[1:])]
    return SweepResult(regimes, transitions, [(lam, cache[lam][1]) for lam in lams])
