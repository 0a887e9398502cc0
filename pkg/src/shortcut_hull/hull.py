"""Hull assembly from a labeled triangulation, cost reports and hull checks.

Rings are lists of P indices.  The outer ring runs clockwise like the input
polygon; hole rings run counterclockwise.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import as_exact_array, cross, orientation, proper_crossings, signed_area2


class AssemblyInconsistency(RuntimeError):
    """The separators do not close into the expected rings."""


EDGE_NOT_IN_C = "EDGE_NOT_IN_C"
RINGS_CROSS = "RINGS_CROSS"
P_NOT_CONTAINED = "P_NOT_CONTAINED"
CONVEX_VERTEX_MISSING = "CONVEX_VERTEX_MISSING"
BAD_ORIENTATION = "BAD_ORIENTATION"


@dataclass
class HullWithHoles:
    polygon: object
    outer: list
    holes: list = field(default_factory=list)
    edges: list = field(default_factory=list)
    islands: list = field(default_factory=list)

    @property
    def rings(self):
        return [self.outer] + self.holes + self.islands

    def ring_coords(self, ring, scaled=False):
        P = self.polygon
        if scaled:
            return [P.point(i) for i in ring]
        f = 10.0 ** -P.scale
        return [(P.point(i)[0] * f, P.point(i)[1] * f) for i in ring]

    @property
    def hole_count(self):
        return len(self.holes)

    @property
    def edge_count(self):
        return sum(len(r) for r in self.rings)


@dataclass
class CostReport:
    lam: float
    perimeter: float
    weighted_perimeter: float
    area: float
    eq1_cost: float
    internal_cost: float
    polygon_area: float
    hole_count: int
    edge_count: int
    bend_count: int

    def as_dict(self):
        return dict(self.__dict__)


# --------------------------------------------------------------------------
# ring tracing


def _cw_order(ref):
    """Sort key: clockwise angle from ``ref``, with ``ref`` itself last."""

    def half(d):
        c = cross((0, 0), ref, d)
        if c < 0:
            return 0
        if c == 0:
            return 0 if ref[0] * d[0] + ref[1] * d[1] < 0 else 2
        return 1

    def cmp(d1, d2):
        h1, h2 = half(d1), half(d2)
        if h1 != h2:
            return h1 - h2
        c = cross((0, 0), d1, d2)
        return 1 if c > 0 else (-1 if c < 0 else 0)

    return functools.cmp_to_key(cmp)


def trace_rings(points, directed):
    """Close directed edges ``(u, v)`` into rings, keeping their left side tight.

    ``points`` maps vertex ids to coordinates.  At each vertex the next edge is
    the first one clockwise from the reversed incoming direction.
    """
    out = {}
    for t, (u, v) in enumerate(directed):
        out.setdefault(u, []).append(t)

    def successor(t):
        u, v = directed[t]
        pv = points[v]
        options = out.get(v)
        if not options:
            raise AssemblyInconsistency(f"boundary path stops at vertex {v}")
        key = _cw_order((points[u][0] - pv[0], points[u][1] - pv[1]))
        return min(options, key=lambda s: key((points[directed[s][1]][0] - pv[0],
                                                points[directed[s][1]][1] - pv[1])))

    used = [False] * len(directed)
    rings = []
    for start in range(len(directed)):
        if used[start]:
            continue
        ring = []
        t = start
        while True:
            if used[t]:
                raise AssemblyInconsistency("boundary paths merge")
            used[t] = True
            ring.append(directed[t][0])
            t = successor(t)
            if t == start:
                break
        rings.append(ring)
    return rings


def _rotate_min(ring):
    k = ring.index(min(ring))
    return ring[k:] + ring[:k]


def extract_hull(labeled, chain, C=None):
    """Outer ring and holes of the hull described by a labeled triangulation."""
    tris = labeled.triangles
    n = chain.n
    owners = {}
    for s, (a, k, b, _) in enumerate(tris):
        for e in ((a, k), (k, b), (a, b)):
            owners.setdefault(e, []).append(s)
    # flood inactive triangles across shared inactive edges
    parent = list(range(len(tris)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e, ts in owners.items():
        if len(ts) == 2 and not tris[ts[0]][3] and not tris[ts[1]][3]:
            ra, rb = find(ts[0]), find(ts[1])
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    root_tri = owners[chain.root][0]
    if tris[root_tri][3]:
        raise AssemblyInconsistency("triangle at the cut edge is active")
    root = find(root_tri)

    by_comp = {}
    for a, b in labeled.separators:
        ts = owners.get((a, b), [])
        inactive = [s for s in ts if not tris[s][3]]
        if len(inactive) != 1:
            raise AssemblyInconsistency(f"separator {(a, b)} does not border exactly one inactive triangle")
        s = inactive[0]
        pocket_side = tris[s][0] == a and tris[s][2] == b
        u, v = (a, b) if pocket_side else (b, a)
        by_comp.setdefault(find(s), []).append((u, v))

    pts = {i: P for i, P in enumerate(chain.polygon.vertices)}
    outer, holes, islands, edges = None, [], [], []
    for comp, directed in sorted(by_comp.items()):
        # the two copies of the topmost vertex meet again as P index 0
        directed = [(chain.pindex(u) % n, chain.pindex(v) % n) for u, v in directed]
        for ring in trace_rings(pts, directed):
            area2 = signed_area2([pts[i] for i in ring])
            if comp == root:
                if outer is not None:
                    raise AssemblyInconsistency("outer region has more than one boundary ring")
                outer = ring
            elif area2 > 0:
                holes.append(_rotate_min(ring))
            else:
                islands.append(_rotate_min(ring))
    for a, b in labeled.separators:
        edges.append((chain.pindex(b), chain.pindex(a)))
    if outer is None:
        raise AssemblyInconsistency("no outer ring")
    if 0 in outer:
        k = outer.index(0)
        outer = outer[k:] + outer[:k]
    holes.sort()
    return HullWithHoles(chain.polygon, outer, holes, sorted(edges), islands)


# --------------------------------------------------------------------------
# reporting


def _ring_pairs(ring):
    return [(ring[t], ring[(t + 1) % len(ring)]) for t in range(len(ring))]


def normalized_pair(n, u, v):
    """Stored shortcut pair of the ring edge between P indices ``u`` and ``v``."""
    a, b = min(u, v), max(u, v)
    if a == 0 and b == n - 1:
        return [(n - 1, n), (0, n - 1)]
    if a == 0:
        return [(0, b), (b, n)]
    return [(a, b)]


def _edge_weight(C, n, u, v):
    if C is None:
        return 1.0
    for pair in normalized_pair(n, u, v):
        e = C.get(pair)
        if e is not None:
            return e.weight
    return 1.0


def bend_count(points_ring):
    k = len(points_ring)
    bends = 0
    for t in range(k):
        p, c, q = points_ring[t - 1], points_ring[t], points_ring[(t + 1) % k]
        straight = orientation(p, c, q) == 0 and (c[0] - p[0]) * (q[0] - c[0]) + (c[1] - p[1]) * (q[1] - c[1]) > 0
        bends += not straight
    return bends


def cost_report(hull, P, config, C=None):
    lam = config.lam if hasattr(config, "lam") else float(config)
    f = 10.0 ** -P.scale
    n = P.n
    perim = wperim = 0.0
    area2 = 0
    bends = 0
    for ring in hull.rings:
        pts = [P.point(i) for i in ring]
        area2 += -signed_area2(pts)
        bends += bend_count(pts)
        for u, v in _ring_pairs(ring):
            a, b = P.point(u), P.point(v)
            ln = math.hypot(b[0] - a[0], b[1] - a[1]) * f
            perim += ln
            wperim += _edge_weight(C, n, u, v) * ln
    area = area2 * 0.5 * f * f
    parea = P.area2() * 0.5 * f * f
    eq1 = lam * wperim + (1.0 - lam) * area
    return CostReport(
        lam=lam,
        perimeter=perim,
        weighted_perimeter=wperim,
        area=area,
        eq1_cost=eq1,
        internal_cost=eq1 - (1.0 - lam) * parea,
        polygon_area=parea,
        hole_count=hull.hole_count,
        edge_count=hull.edge_count,
        bend_count=bends,
    )


# --------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class Violation:
    code: str
    detail: str


@dataclass
class Verdict:
    violations: list

    @property
    def ok(self):
        return not self.violations

    def __bool__(self):
        return self.ok

    def codes(self):
        return {v.code for v in self.violations}


def convex_hull_vertices(points):
    """Strict convex-hull corners (exact monotone chain)."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _on_segment(a, b, q):
    return cross(a, b, q) == 0 and min(a[0], b[0]) <= q[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= q[1] <= max(a[1], b[1])


def winding(ring, q):
    """Winding number of ``ring`` around ``q``, or ``None`` when ``q`` is on it."""
    w = 0
    k = len(ring)
    for t in range(k):
        a, b = ring[t], ring[(t + 1) % k]
        if _on_segment(a, b, q):
            return None
        if a[1] <= q[1] < b[1] and cross(a, b, q) > 0:
            w += 1
        elif b[1] <= q[1] < a[1] and cross(a, b, q) < 0:
            w -= 1
    return w


def verify_hull(hull, P, C):
    """All violated hull conditions (an empty list means the hull is valid)."""
    out = []
    n = P.n
    for ring in hull.rings:
        for u, v in _ring_pairs(ring):
            if not any(pair in C for pair in normalized_pair(n, u, v)):
                out.append(Violation(EDGE_NOT_IN_C, f"{(u, v)}"))
    segs = [(P.point(u), P.point(v)) for ring in hull.rings for u, v in _ring_pairs(ring)]
    if len(segs) > 1:
        arr = as_exact_array([p for s in segs for p in s]).reshape(-1, 2, 2)
        ax, ay, bx, by = arr[:, 0, 0], arr[:, 0, 1], arr[:, 1, 0], arr[:, 1, 1]
        hit = proper_crossings(ax[:, None], ay[:, None], bx[:, None], by[:, None], ax, ay, bx, by)
        for s, t in np.argwhere(np.triu(hit, 1)).tolist():
            out.append(Violation(RINGS_CROSS, f"{segs[s]} x {segs[t]}"))
    outer = [P.point(i) for i in hull.outer]
    if signed_area2(outer) > 0:
        out.append(Violation(BAD_ORIENTATION, "outer ring is counterclockwise"))
    for h in hull.holes:
        if signed_area2([P.point(i) for i in h]) < 0:
            out.append(Violation(BAD_ORIENTATION, f"hole {h} is clockwise"))
    # containment, tested on doubled coordinates so edge midpoints stay integral
    dbl = lambda ring: [(2 * x, 2 * y) for x, y in ring]
    outer2 = dbl(outer)
    holes2 = [dbl([P.point(i) for i in h]) for h in hull.holes]
    probes = []
    for i in range(n):
        a, b = P.point(i), P.point(i + 1)
        probes.append((2 * a[0], 2 * a[1]))
        probes.append((a[0] + b[0], a[1] + b[1]))
    for q in probes:
        w = winding(outer2, q)
        if w is not None and w == 0:
            out.append(Violation(P_NOT_CONTAINED, f"point {q[0] / 2, q[1] / 2} outside the outer ring"))
            break
        if any(winding(h, q) not in (None, 0) for h in holes2):
            out.append(Violation(P_NOT_CONTAINED, f"point {q[0] / 2, q[1] / 2} inside a hole"))
            break
    on_outer = set(outer)
    for v in convex_hull_vertices(P.vertices):
        if v not in on_outer:
            out.append(Violation(CONVEX_VERTEX_MISSING, f"{v}"))
    return Verdict(out)
