"""Exact integer predicates, input normalization and the sliced-donut chain.

All topology decisions are made on integer coordinates.  Scalar predicates use
Python integers (unbounded); the vectorized paths use ``int64`` as long as every
coordinate fits in 29 bits and fall back to ``object`` arrays otherwise.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np

CW, COLLINEAR, CCW = -1, 0, 1

_INT64_SAFE = 2**29


class InvalidPolygon(ValueError):
    pass


class ProperSelfCrossing(InvalidPolygon):
    pass


class TooFewVertices(InvalidPolygon):
    pass


# --------------------------------------------------------------------------
# scalar predicates


def cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def orientation(p, q, r):
    """Sign of ``(q - p) x (r - p)``: ``CCW`` (1), ``CW`` (-1) or ``COLLINEAR`` (0)."""
    c = cross(p, q, r)
    return (c > 0) - (c < 0)


def signed_area2(ring):
    """Doubled signed shoelace area of an implicitly closed ring (CCW positive)."""
    s = 0
    k = len(ring)
    for i in range(k):
        x0, y0 = ring[i]
        x1, y1 = ring[(i + 1) % k]
        s += x0 * y1 - x1 * y0
    return s


def strictly_between(p, q, r):
    """Whether ``r`` lies in the open segment ``pq``, assuming the three are collinear."""
    if p[0] != q[0]:
        return min(p[0], q[0]) < r[0] < max(p[0], q[0])
    return min(p[1], q[1]) < r[1] < max(p[1], q[1])


def on_open_segment(p, q, r):
    return orientation(p, q, r) == 0 and strictly_between(p, q, r)


def segments_properly_cross(p1, p2, q1, q2):
    """True iff the open segments cross in exactly one interior point of both."""
    o1 = orientation(p1, p2, q1)
    o2 = orientation(p1, p2, q2)
    o3 = orientation(q1, q2, p1)
    o4 = orientation(q1, q2, p2)
    return o1 * o2 < 0 and o3 * o4 < 0


def _half(s, d):
    # 0 if the clockwise angle from s to d lies in [0, pi), else 1
    c = s[0] * d[1] - s[1] * d[0]
    if c < 0:
        return 0
    if c == 0:
        return 0 if s[0] * d[0] + s[1] * d[1] > 0 else 1
    return 1


def in_cw_sweep(s, t, d):
    """Whether direction ``d`` lies in the closed clockwise sweep from ``s`` to ``t``.

    Parallel ``s`` and ``t`` (a spike) denote the full turn.
    """
    hd = _half(s, d)
    if hd == 0 and s[0] * d[1] - s[1] * d[0] == 0:
        return True  # d along s
    ht = _half(s, t)
    if ht == 0 and s[0] * t[1] - s[1] * t[0] == 0:
        return True  # full turn
    if hd != ht:
        return hd < ht
    return d[0] * t[1] - d[1] * t[0] <= 0


def _same_ray(u, v):
    return u[0] * v[1] - u[1] * v[0] == 0 and u[0] * v[0] + u[1] * v[1] > 0


def _sub(a, b):
    return (a[0] - b[0], a[1] - b[1])


# --------------------------------------------------------------------------
# vectorized helpers


def as_exact_array(points):
    """Integer array of ``points``; ``object`` dtype when int64 could overflow."""
    pts = list(points)
    big = max((max(abs(x), abs(y)) for x, y in pts), default=0)
    if big < _INT64_SAFE:
        return np.array(pts, dtype=np.int64).reshape(-1, 2)
    arr = np.empty((len(pts), 2), dtype=object)
    for i, (x, y) in enumerate(pts):
        arr[i, 0] = int(x)
        arr[i, 1] = int(y)
    return arr


def _sign(v):
    return (v > 0).astype(np.int8) - (v < 0).astype(np.int8)


def orient_vec(px, py, qx, qy, rx, ry):
    return _sign((qx - px) * (ry - py) - (qy - py) * (rx - px))


def proper_crossings(ax, ay, bx, by, ux, uy, wx, wy):
    """Elementwise proper-crossing test of segments ``ab`` and ``uw`` (broadcasting)."""
    o1 = orient_vec(ax, ay, bx, by, ux, uy)
    o2 = orient_vec(ax, ay, bx, by, wx, wy)
    o3 = orient_vec(ux, uy, wx, wy, ax, ay)
    o4 = orient_vec(ux, uy, wx, wy, bx, by)
    return (o1 * o2 < 0) & (o3 * o4 < 0)


def ring_has_proper_crossing(coords, block=256):
    """Return one pair of properly crossing ring edges, or ``None``."""
    arr = as_exact_array(coords)
    k = len(arr)
    ux, uy = arr[:, 0], arr[:, 1]
    wx, wy = np.roll(ux, -1), np.roll(uy, -1)
    for start in range(0, k, block):
        stop = min(k, start + block)
        hit = proper_crossings(
            ux[start:stop, None], uy[start:stop, None], wx[start:stop, None], wy[start:stop, None],
            ux[None, :], uy[None, :], wx[None, :], wy[None, :],
        )
        if hit.any():
            i, j = np.argwhere(hit)[0]
            return int(start + i), int(j)
    return None


# --------------------------------------------------------------------------
# polygon input


@dataclass(frozen=True)
class WeaklySimplePolygon:
    """Clockwise vertex ring whose index 0 is the topmost (then leftmost) vertex."""

    vertices: tuple
    scale: int = 0

    @property
    def n(self):
        return len(self.vertices)

    @property
    def topmost_index(self):
        return 0

    @cached_property
    def coords(self):
        return as_exact_array(self.vertices)

    def point(self, i):
        """Vertex ``i``; index ``n`` is the topmost vertex again (end of the ring)."""
        return self.vertices[i % self.n]

    def area2(self):
        """Doubled enclosed area (non-negative)."""
        return -signed_area2(self.vertices)

    def as_float(self):
        f = 10.0 ** -self.scale
        return np.array(self.vertices, dtype=float) * f


def _scale_point(p, scale):
    if scale == 0 and all(isinstance(c, (int, np.integer)) for c in p):
        return (int(p[0]), int(p[1]))
    f = 10**scale
    return (int(round(float(p[0]) * f)), int(round(float(p[1]) * f)))


def _collapse_duplicates(pts, tags=None):
    tags = list(range(len(pts))) if tags is None else tags
    out, kept = [], []
    for p, t in zip(pts, tags):
        if not out or out[-1] != p:
            out.append(p)
            kept.append([t])
        else:
            kept[-1].append(t)
    while len(out) > 1 and out[0] == out[-1]:
        out.pop()
        kept[0].extend(kept.pop())
    return out, kept


def _tree_walk_is_clockwise(pts):
    # zero-area ring: the walk keeps the (degenerate) interior on its right iff at
    # every branching vertex it leaves by the first edge clockwise from the edge
    # it arrived on
    k = len(pts)
    nbrs = {}
    for i in range(k):
        a, b = pts[i], pts[(i + 1) % k]
        nbrs.setdefault(a, set()).add(b)
        nbrs.setdefault(b, set()).add(a)
    for i in range(k):
        v = pts[i]
        if len(nbrs[v]) < 3:
            continue
        back = _sub(pts[i - 1], v)
        out = _sub(pts[(i + 1) % k], v)
        for w in nbrs[v]:
            d = _sub(w, v)
            if d == back or d == out:
                continue
            # the free wedge swept clockwise from back to out must hold no branch
            return not in_cw_sweep(back, out, d)
    return True


def normalize_input(raw, scale=0):
    """Scale, deduplicate, orient clockwise and rotate a raw vertex ring."""
    return normalize_with_map(raw, scale)[0]


def normalize_with_map(raw, scale=0):
    """Like :func:`normalize_input`, also returning the new index of every raw vertex."""
    pts, groups = _collapse_duplicates([_scale_point(p, scale) for p in raw])
    if len(pts) < 3:
        raise TooFewVertices(f"polygon needs at least 3 distinct vertices, got {len(pts)}")
    hit = ring_has_proper_crossing(pts)
    if hit is not None:
        raise ProperSelfCrossing(f"edges {hit[0]} and {hit[1]} cross")
    a2 = signed_area2(pts)
    if a2 > 0 or (a2 == 0 and not _tree_walk_is_clockwise(pts)):
        pts = pts[::-1]
        groups = groups[::-1]
    ymax = max(y for _, y in pts)
    xmin = min(x for x, y in pts if y == ymax)
    top = (xmin, ymax)
    k = len(pts)
    start = None
    for i, p in enumerate(pts):
        if p != top:
            continue
        # exterior wedge at an occurrence runs clockwise from previous to next vertex
        if in_cw_sweep(_sub(pts[i - 1], p), _sub(pts[(i + 1) % k], p), (0, 1)):
            start = i
            break
    if start is None:
        start = pts.index(top)
    pts = pts[start:] + pts[:start]
    groups = groups[start:] + groups[:start]
    index_map = [0] * len(raw)
    for new, grp in enumerate(groups):
        for old in grp:
            index_map[old] = new
    return WeaklySimplePolygon(tuple(pts), scale), index_map


# --------------------------------------------------------------------------
# containing box and sliced donut


@dataclass(frozen=True)
class ContainingBox:
    q1: tuple
    q2: tuple
    q3: tuple
    q4: tuple
    inflation: int
    diagonals_hit: bool = True

    @property
    def corners(self):
        return (self.q1, self.q2, self.q3, self.q4)


class ChordInvalid(str):
    """Reason a chord is not contained in the donut (a plain string subclass)."""


SAME_VERTEX = ChordInvalid("same-vertex")
CROSSES_BOUNDARY = ChordInvalid("crosses-boundary")
ENTERS_INTERIOR = ChordInvalid("enters-interior")
DUPLICATES_BOUNDARY = ChordInvalid("duplicates-boundary")


class DonutChain:
    """The sliced donut flattened to the simple chain ``W'``.

    Positions: ``[q1A, q2, q3, q4, q1B, p1B, p_n, ..., p_2, p1A]`` with ``m = n + 6``.
    P-vertex index ``i`` in ``0..n`` sits at position ``m - 1 - i``; index ``n``
    denotes the topmost vertex as the end of the ring (copy B).  The closing
    edge ``(m-1, 0)`` is the cut edge.
    """

    def __init__(self, polygon, box):
        self.polygon = polygon
        self.box = box
        n = polygon.n
        pv = polygon.vertices
        pts = [box.q1, box.q2, box.q3, box.q4, box.q1, pv[0]]
        pts += [pv[i] for i in range(n - 1, 0, -1)]
        pts.append(pv[0])
        self.points = tuple(pts)
        self.m = len(pts)
        m = self.m
        origins = [("box", 0), ("box", 1), ("box", 2), ("box", 3), ("dup-box", 0), ("dup-P", 0)]
        origins += [("P", i) for i in range(n - 1, 0, -1)]
        origins.append(("P", 0))
        self.origins = tuple(origins)
        self.arr = as_exact_array(pts)
        self.X = self.arr[:, 0]
        self.Y = self.arr[:, 1]
        self.NX = np.roll(self.X, -1)
        self.NY = np.roll(self.Y, -1)
        pre = [0]
        for i in range(m):
            x0, y0 = pts[i]
            x1, y1 = pts[(i + 1) % m]
            pre.append(pre[-1] + x0 * y1 - x1 * y0)
        self._prefix = pre
        self._edge_set = {}
        for i in range(m):
            key = frozenset((pts[i], pts[(i + 1) % m]))
            self._edge_set.setdefault(key, []).append(i)
        self._occurrences = {}
        for i, p in enumerate(pts):
            self._occurrences.setdefault(p, []).append(i)
        self._touching = self._all_edges_through()

    # -- indexing ----------------------------------------------------------
    @property
    def n(self):
        return self.polygon.n

    @property
    def root(self):
        return (0, self.m - 1)

    def position(self, i):
        """Chain position of P index ``i`` (``0..n``)."""
        return self.m - 1 - i

    def pindex(self, pos):
        """P index of a position, or ``None`` for box corners."""
        if pos <= 4:
            return None
        return self.m - 1 - pos

    def is_p_edge(self, a):
        """Whether boundary edge ``(a, a+1)`` is an edge of the input polygon."""
        return 5 <= a < self.m - 1

    # -- areas -------------------------------------------------------------
    def pocket_area2(self, a, b):
        """Doubled area of the pocket bounded by chain ``a..b`` and the chord ``(a, b)``."""
        pa, pb = self.points[a], self.points[b]
        s = self._prefix[b] - self._prefix[a] + pb[0] * pa[1] - pa[0] * pb[1]
        return -s

    def area2(self):
        return self.pocket_area2(0, self.m - 1)

    def triangle_area2(self, a, k, b):
        return -cross(self.points[a], self.points[k], self.points[b])

    # -- local geometry ----------------------------------------------------
    def wedge_contains(self, pos, d):
        """Whether direction ``d`` leaves position ``pos`` into the closed donut locally."""
        p = self.points[pos]
        s = _sub(self.points[(pos + 1) % self.m], p)
        t = _sub(self.points[pos - 1], p)
        return in_cw_sweep(s, t, d)

    def _all_edges_through(self, block=512):
        # for every position, the boundary edges whose open interior contains it
        X, Y, NX, NY = self.X, self.Y, self.NX, self.NY
        out = [[] for _ in range(self.m)]
        for s in range(0, self.m, block):
            px = X[s:s + block, None]
            py = Y[s:s + block, None]
            col = (NX - X) * (py - Y) - (NY - Y) * (px - X) == 0
            dot1 = (px - X) * (NX - X) + (py - Y) * (NY - Y)
            dot2 = (px - NX) * (X - NX) + (py - NY) * (Y - NY)
            hit = col & (dot1 > 0) & (dot2 > 0)
            for r, e in zip(*np.nonzero(hit)):
                out[s + int(r)].append(int(e))
        return out

    def _edges_through(self, p):
        # boundary edges whose open interior contains p
        out = []
        for i in range(self.m):
            u, w = self.points[i], self.points[(i + 1) % self.m]
            if on_open_segment(u, w, p):
                out.append(i)
        return out

    def _side_ok(self, point_pos, d):
        # d must not leave into the wrong side of an edge passing through the point
        for e in self._touching[point_pos]:
            u, w = self.points[e], self.points[(e + 1) % self.m]
            c = (w[0] - u[0]) * d[1] - (w[1] - u[1]) * d[0]
            if c > 0:
                return False
        return True

    def _pass_through_ok(self, A, B, v_positions, a=0, b=None):
        # a vertex on the chord must be met from inside the interval (a, b)
        b = self.m if b is None else b
        groups = {}
        for v in v_positions:
            groups.setdefault(self.points[v], []).append(v)
        for V in groups:
            da, db = _sub(A, V), _sub(B, V)
            occ = [o for o in self._occurrences[V] if a < o < b]
            if not any(self.wedge_contains(o, da) and self.wedge_contains(o, db) for o in occ):
                return False
            if not (self._side_ok(occ[0], da) and self._side_ok(occ[0], db)):
                return False
        return True

    def chord_reason(self, a, b, crossing=None, through=None):
        """``None`` if chord ``(a, b)`` lies in the closed donut, else the reason.

        ``crossing``/``through`` may carry precomputed vectorized results.
        """
        if a > b:
            a, b = b, a
        A, B = self.points[a], self.points[b]
        if A == B:
            return SAME_VERTEX
        if b == a + 1 or (a == 0 and b == self.m - 1):
            return None
        if frozenset((A, B)) in self._edge_set:
            return DUPLICATES_BOUNDARY
        if crossing is None:
            crossing = proper_crossings(A[0], A[1], B[0], B[1], self.X, self.Y, self.NX, self.NY).any()
        if crossing:
            return CROSSES_BOUNDARY
        if not (self.wedge_contains(a, _sub(B, A)) and self.wedge_contains(b, _sub(A, B))):
            return ENTERS_INTERIOR
        # running along a boundary edge outside the interval folds the chord back
        if _same_ray(_sub(B, A), _sub(self.points[a - 1], A)) or _same_ray(
                _sub(A, B), _sub(self.points[(b + 1) % self.m], B)):
            return ENTERS_INTERIOR
        if not (self._side_ok(a, _sub(B, A)) and self._side_ok(b, _sub(A, B))):
            return ENTERS_INTERIOR
        if through is None:
            o = orient_vec(A[0], A[1], B[0], B[1], self.X, self.Y)
            through = np.flatnonzero(o == 0)
            through = [int(v) for v in through if strictly_between(A, B, self.points[v])]
        if through and not self._pass_through_ok(A, B, through, a, b):
            return ENTERS_INTERIOR
        return None

    def chord_valid(self, a, b):
        return self.chord_reason(a, b) is None

    def valid_chords_from(self, a, bs):
        """Vectorized validity of chords ``(a, b)`` for every ``b`` in ``bs``."""
        bs = np.asarray(bs, dtype=np.int64)
        if len(bs) == 0:
            return np.zeros(0, dtype=bool)
        Ax, Ay = self.X[a], self.Y[a]
        Bx, By = self.X[bs][:, None], self.Y[bs][:, None]
        hit = proper_crossings(Ax, Ay, Bx, By, self.X[None, :], self.Y[None, :],
                               self.NX[None, :], self.NY[None, :]).any(axis=1)
        col = orient_vec(Ax, Ay, Bx, By, self.X[None, :], self.Y[None, :]) == 0
        # strictly between along the dominant axis
        lo_x = np.minimum(Ax, Bx)
        hi_x = np.maximum(Ax, Bx)
        lo_y = np.minimum(Ay, By)
        hi_y = np.maximum(Ay, By)
        bx = (lo_x < self.X[None, :]) & (self.X[None, :] < hi_x)
        by = (lo_y < self.Y[None, :]) & (self.Y[None, :] < hi_y)
        between = np.where(Ax != Bx, bx, by)
        on = col & between
        out = np.zeros(len(bs), dtype=bool)
        for idx, b in enumerate(bs.tolist()):
            if hit[idx]:
                continue
            through = np.flatnonzero(on[idx]).tolist()
            out[idx] = self.chord_reason(a, b, crossing=bool(hit[idx]), through=through) is None
        return out


def _bbox(vertices):
    xs = [x for x, _ in vertices]
    ys = [y for _, y in vertices]
    return min(xs), min(ys), max(xs), max(ys)


def _diagonal_hits(p1, p2, polygon):
    verts = polygon.vertices
    k = len(verts)
    for i in range(k):
        u, w = verts[i], verts[(i + 1) % k]
        if segments_properly_cross(p1, p2, u, w) or on_open_segment(p1, p2, u):
            return True
    return False


def build_box_and_chain(polygon):
    """Containing box (5 % margin, at least one unit) and the donut chain of ``polygon``."""
    x0, y0, x1, y1 = _bbox(polygon.vertices)
    diam = math.hypot(x1 - x0, y1 - y0)
    inflation = max(1, math.ceil(0.05 * diam))
    q1 = (x0 - inflation, y1 + inflation)
    q2 = (x1 + inflation, y1 + inflation)
    q3 = (x1 + inflation, y0 - inflation)
    q4 = (x0 - inflation, y0 - inflation)
    hits = _diagonal_hits(q1, q3, polygon) and _diagonal_hits(q2, q4, polygon)
    if not hits:
        warnings.warn("containing-box diagonals do not both intersect the polygon", stacklevel=2)
    box = ContainingBox(q1, q2, q3, q4, inflation, hits)
    return box, DonutChain(polygon, box)
