"""Shortcut sets: validation, generation and crossing structure.

A shortcut is stored as a pair ``(i, j)`` of P indices with ``0 <= i < j <= n``;
``j == n`` stands for the topmost vertex reached at the end of the ring.  The
pair is directed from the start to the end of the polyline it bridges, so the
polygon edges are ``(i, i + 1)`` for ``i = 0..n-1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import CROSSES_BOUNDARY, SAME_VERTEX, on_open_segment, segments_properly_cross


@dataclass(frozen=True)
class Shortcut:
    i: int
    j: int
    length: float
    weight: float = 1.0

    @property
    def pair(self):
        return (self.i, self.j)


@dataclass(frozen=True)
class Invalid:
    reason: str
    edge: tuple | None = None

    def __bool__(self):
        return False


@dataclass
class ShortcutSet:
    polygon: object
    edges: list
    includes_polygon_edges: bool = True
    by_pair: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.by_pair:
            self.by_pair = {e.pair: k for k, e in enumerate(self.edges)}

    def __len__(self):
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)

    def __contains__(self, pair):
        return tuple(pair) in self.by_pair

    def get(self, pair):
        k = self.by_pair.get(tuple(pair))
        return None if k is None else self.edges[k]

    def pairs(self):
        return [e.pair for e in self.edges]

    def with_weights(self, weights):
        """Copy with per-pair perimeter multipliers taken from ``weights``."""
        edges = [Shortcut(e.i, e.j, e.length, float(weights.get(e.pair, e.weight))) for e in self.edges]
        return ShortcutSet(self.polygon, edges, self.includes_polygon_edges)

    def restricted(self, keep):
        edges = [e for e in self.edges if keep(e)]
        return ShortcutSet(self.polygon, edges, self.includes_polygon_edges)


def _length(P, i, j):
    a, b = P.point(i), P.point(j)
    f = 10.0 ** -P.scale
    return math.hypot((b[0] - a[0]) * f, (b[1] - a[1]) * f)


def validate_shortcut(P, chain, i, j):
    """Check the segment between P vertices ``i < j`` (indices in ``0..n-1``).

    Returns the normalized pair ``(i', j')`` on success and an :class:`Invalid`
    (falsy) otherwise.  A segment at the topmost vertex is attributed to the
    side of the cut it leaves into.
    """
    n = P.n
    if not (0 <= i < n and 0 <= j < n):
        raise IndexError("vertex index out of range")
    if i > j:
        i, j = j, i
    if i == j or P.point(i) == P.point(j):
        return Invalid(SAME_VERTEX)
    options = [(i, j)] if i > 0 else [(0, j), (j, n)]
    reason = None
    for a, b in options:
        r = chain.chord_reason(chain.position(b), chain.position(a))
        if r is None:
            return (a, b)
        if reason is None or r == CROSSES_BOUNDARY:
            reason = r
    edge = None
    if reason == CROSSES_BOUNDARY:
        A, B = P.point(i), P.point(j)
        for k in range(n):
            if segments_properly_cross(A, B, P.point(k), P.point(k + 1)):
                edge = (k, (k + 1) % n)
                break
    return Invalid(reason, edge)


def make_shortcut_set(P, chain, pairs, includes_polygon_edges=True, strict=True):
    """Build a set from user pairs; polygon edges are added when requested."""
    n = P.n
    found = {}
    if includes_polygon_edges:
        for i in range(n):
            found[(i, i + 1)] = None
    for i, j in pairs:
        i, j = int(i) % n, int(j) % n
        a, b = min(i, j), max(i, j)
        if b - a == 1:
            found[(a, b)] = None
            continue
        if (a, b) == (0, n - 1):
            found[(n - 1, n)] = None
            continue
        res = validate_shortcut(P, chain, a, b)
        if not res:
            if strict:
                raise ValueError(f"shortcut {(i, j)} is invalid: {res.reason}")
            continue
        found[res] = None
    edges = [Shortcut(a, b, _length(P, a, b)) for a, b in sorted(found)]
    return ShortcutSet(P, edges, includes_polygon_edges)


def passes_through_vertex(P, i, j):
    """Whether the open segment between P vertices ``i`` and ``j`` holds another P vertex."""
    a, b = P.point(i), P.point(j)
    return any(on_open_segment(a, b, v) for v in P.vertices)


def generate_all_shortcuts(P, chain, includes_polygon_edges=True, through_vertices=True):
    """Every valid shortcut of ``P``; O(n^2) candidate segments.

    With ``through_vertices=False`` segments whose interior runs through
    another P vertex are left out (the collinear augmentation adds them back).
    """
    n = P.n
    m = chain.m
    pairs = set()
    if includes_polygon_edges:
        pairs.update((i, i + 1) for i in range(n))
    # chords between P positions 5..m-1, vectorized per start position
    for a in range(5, m):
        bs = np.arange(a + 2, m)
        if a == 5:
            bs = bs[bs != m - 1]
        if len(bs) == 0:
            continue
        ok = chain.valid_chords_from(a, bs)
        for b in bs[ok].tolist():
            i, j = chain.pindex(b), chain.pindex(a)
            if through_vertices or not passes_through_vertex(P, i, j):
                pairs.add((i, j))
    edges = [Shortcut(i, j, _length(P, i, j)) for i, j in sorted(pairs)]
    return ShortcutSet(P, edges, includes_polygon_edges)


# --------------------------------------------------------------------------
# crossing structure


@dataclass
class CrossingAnalysis:
    components: list
    intervals: list
    chi_hat: int
    h: int

    def nontrivial(self):
        return [(c, iv) for c, iv in zip(self.components, self.intervals) if len(c) > 1]


class _UnionFind:
    def __init__(self, k):
        self.parent = list(range(k))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def interleave(e, f):
    """Whether two index pairs interleave strictly along the polygon ring."""
    (a, b), (c, d) = e, f
    return a < c < b < d or c < a < d < b


def crossing_pairs(C, block=1024):
    """All index pairs ``(s, t)``, ``s < t``, of shortcuts in ``C`` that cross.

    Chords of the cut-open donut cross exactly when their index intervals
    interleave; this also catches collinear overlaps and touching crossings,
    which can no more share a triangulation than proper crossings can.
    """
    k = len(C)
    if k < 2:
        return []
    lo = np.array([e.i for e in C], dtype=np.int64)
    hi = np.array([e.j for e in C], dtype=np.int64)
    out = []
    for start in range(0, k, block):
        stop = min(k, start + block)
        a, b = lo[start:stop, None], hi[start:stop, None]
        hit = ((a < lo) & (lo < b) & (b < hi)) | ((lo < a) & (a < hi) & (hi < b))
        for s, t in np.argwhere(hit).tolist():
            s += start
            if s < t:
                out.append((s, t))
    return out


def crossing_components(C):
    """Connected components of the crossing graph and the spatial-complexity bound."""
    k = len(C)
    uf = _UnionFind(k)
    for s, t in crossing_pairs(C):
        uf.union(s, t)
    groups = {}
    for s in range(k):
        groups.setdefault(uf.find(s), []).append(s)
    components = sorted(groups.values(), key=lambda g: g[0])
    intervals = []
    for comp in components:
        lo = min(C.edges[s].i for s in comp)
        hi = max(C.edges[s].j for s in comp)
        intervals.append((lo, hi))
    nontrivial = [iv for comp, iv in zip(components, intervals) if len(comp) > 1]
    chi_hat = 1 if not nontrivial else max(b - a for a, b in nontrivial) + 1
    return CrossingAnalysis(components, intervals, chi_hat, len(nontrivial))
