"""Enrichment C+ of a shortcut set over the donut chain, and triangle candidates.

Chords are pairs ``(a, b)`` of chain positions with ``a < b``.  A shortcut
``(i, j)`` of P indices becomes the chord ``(position(j), position(i))``.
"""
from __future__ import annotations

import bisect
import enum
from dataclasses import dataclass

import numpy as np

from .geometry import CW, COLLINEAR, orient_vec, orientation, strictly_between
from .shortcuts import crossing_components


class Strategy(str, enum.Enum):
    FULL = "full"
    CDT = "cdt"
    COMPONENT = "component"


class CDTWithCrossings(ValueError):
    """A single constrained triangulation cannot contain crossing shortcuts."""


class TriangulationFailed(RuntimeError):
    pass


@dataclass(frozen=True)
class TriangleCandidate:
    apex: int
    area2: int
    degenerate: bool


def shortcut_chord(chain, e):
    return (chain.position(e.j), chain.position(e.i))


def _sub(a, b):
    return (a[0] - b[0], a[1] - b[1])


# --------------------------------------------------------------------------
# faces and ear clipping


def split_faces(m, chords):
    """Faces of the chain cut by pairwise non-interleaving ``chords``.

    Returns ``(chord, vertex list)`` pairs; the root chord ``(0, m-1)`` is
    always present.  Each face lists positions in chain order.
    """
    starts = {}
    for a, b in chords:
        starts.setdefault(a, []).append(b)
    for v in starts.values():
        v.sort()
    faces = []
    for a, b in [(0, m - 1)] + sorted(set(chords) - {(0, m - 1)}):
        face = [a]
        i = a
        while i < b:
            nxt = i + 1
            ends = starts.get(i)
            if ends:
                t = bisect.bisect_right(ends, b) - 1
                if t >= 0 and i == a and ends[t] == b:
                    t -= 1
                if t >= 0 and ends[t] > nxt:
                    nxt = ends[t]
            face.append(nxt)
            i = nxt
        faces.append(((a, b), face))
    return faces


def _flat_ok(pts, tri):
    a, k, b = sorted(tri)
    return strictly_between(pts[a], pts[b], pts[k])


def _open_box(P, Q, fx, fy):
    # strictly between P and Q along the dominant axis (for points on the line PQ)
    if P[0] != Q[0]:
        return (min(P[0], Q[0]) < fx) & (fx < max(P[0], Q[0]))
    return (min(P[1], Q[1]) < fy) & (fy < max(P[1], Q[1]))


def _enters(corners, s, d):
    # whether direction d from point s on the closed CW triangle enters its interior
    for u, w in ((corners[0], corners[1]), (corners[1], corners[2]), (corners[2], corners[0])):
        o = orientation(u, w, s)
        if o > 0:
            return False
        if o == 0:
            c = (w[0] - u[0]) * d[1] - (w[1] - u[1]) * d[0]
            if c >= 0:
                return False
    return True


def ear_clip(chain, face):
    """Triangulate one face (chain positions in order, closed by a chord).

    Returns triangles as sorted position triples.  Zero-area ears are used
    only in the collinear apex-between configuration.
    """
    k = len(face)
    if k < 3:
        return []
    if k == 3:
        return [tuple(sorted(face))]
    pts = chain.points
    face = list(face)
    fx = chain.X[face]
    fy = chain.Y[face]
    prev = [(i - 1) % k for i in range(k)]
    nxt = [(i + 1) % k for i in range(k)]
    alive = np.ones(k, dtype=bool)

    def is_ear(c):
        p, q = prev[c], nxt[c]
        P, Cc, Q = pts[face[p]], pts[face[c]], pts[face[q]]
        o = orientation(P, Cc, Q)
        if o != CW and not (o == COLLINEAR and _flat_ok(pts, (face[p], face[c], face[q]))):
            return False
        # the new diagonal may not run through a remaining vertex
        o3 = orient_vec(Q[0], Q[1], P[0], P[1], fx, fy)
        on = alive & (o3 == 0) & _open_box(P, Q, fx, fy)
        on[[p, c, q]] = False
        if on.any():
            return False
        if o == COLLINEAR:
            return chain.chord_reason(face[p], face[q]) is None
        o1 = orient_vec(P[0], P[1], Cc[0], Cc[1], fx, fy)
        o2 = orient_vec(Cc[0], Cc[1], Q[0], Q[1], fx, fy)
        closed = alive & (o1 <= 0) & (o2 <= 0) & (o3 <= 0)
        closed[[p, c, q]] = False
        if not closed.any():
            return True
        if (closed & (o1 < 0) & (o2 < 0) & (o3 < 0)).any():
            return False
        corners = (P, Cc, Q)
        for s in np.flatnonzero(closed).tolist():
            S = pts[face[s]]
            for t in (prev[s], nxt[s]):
                if _enters(corners, S, _sub(pts[face[t]], S)):
                    return False
        return chain.chord_reason(face[p], face[q]) is None

    tris = []
    remaining = k
    ears = [c for c in range(k) if is_ear(c)]
    stale = False
    while remaining > 3:
        c = None
        while ears:
            cand = ears.pop()
            if alive[cand] and is_ear(cand):
                c = cand
                break
        if c is None:
            if stale:
                raise TriangulationFailed(f"no ear in face starting at position {face[0]}")
            ears = [i for i in np.flatnonzero(alive).tolist() if is_ear(i)]
            stale = True
            continue
        stale = False
        p, q = prev[c], nxt[c]
        tris.append(tuple(sorted((face[p], face[c], face[q]))))
        alive[c] = False
        nxt[p], prev[q] = q, p
        remaining -= 1
        ears.extend((p, q))
    c = int(np.flatnonzero(alive)[0])
    last = tuple(sorted((face[prev[c]], face[c], face[nxt[c]])))
    o = orientation(*(pts[v] for v in last))
    if o != CW and not (o == COLLINEAR and _flat_ok(pts, last)):
        raise TriangulationFailed(f"degenerate remainder {last}")
    tris.append(last)
    return tris


def constrained_triangulation(chain, constraints):
    """Triangles of one triangulation of the chain containing every constraint chord."""
    tris = []
    for _, face in split_faces(chain.m, constraints):
        tris.extend(ear_clip(chain, face))
    return tris


def _triangle_edges(tris):
    out = set()
    for a, k, b in tris:
        out.update(((a, k), (k, b), (a, b)))
    return out


# --------------------------------------------------------------------------
# enrichment


def all_valid_chords(chain, lo=0, hi=None):
    """Every valid chord with both endpoints in positions ``lo..hi``."""
    m = chain.m
    hi = m - 1 if hi is None else hi
    out = []
    for a in range(lo, hi - 1):
        bs = np.arange(a + 2, hi + 1)
        if a == 0:
            bs = bs[bs != m - 1]
        if len(bs) == 0:
            continue
        ok = chain.valid_chords_from(a, bs)
        out.extend((a, int(b)) for b in bs[ok])
    return out


def _interleaves_any(lo, hi, a, b):
    return bool((((a < lo) & (lo < b) & (b < hi)) | ((lo < a) & (a < hi) & (hi < b))).any())


def component_regions(chain, C, analysis=None):
    """P-index regions ``[a, b]`` around the non-singleton crossing components.

    Each interval is grown to the smallest one whose closing segment is a
    valid chord not crossed by any shortcut; ``None`` means the region is the
    whole polygon.
    """
    analysis = analysis or crossing_components(C)
    n = chain.n
    lo = np.array([e.i for e in C], dtype=np.int64)
    hi = np.array([e.j for e in C], dtype=np.int64)

    def grow(a, b):
        for span in range(b - a, n + 1):
            for a2 in range(min(a, n - span), -1, -1):
                b2 = a2 + span
                if b2 < b:
                    break
                if span == n:
                    return None
                if _interleaves_any(lo, hi, a2, b2):
                    continue
                if chain.chord_valid(chain.position(b2), chain.position(a2)):
                    return (a2, b2)
        return None

    regions = []
    for _, (a, b) in analysis.nontrivial():
        r = grow(a, b)
        if r is None:
            return None
        regions.append(r)
    while True:
        regions = sorted(set(regions), key=lambda r: (r[0], -r[1]))
        merged = False
        out = []
        for r in regions:
            if out and r[0] < out[-1][1]:
                top = out[-1]
                if r[1] <= top[1]:
                    continue
                g = grow(top[0], r[1])
                if g is None:
                    return None
                out[-1] = g
                merged = True
            else:
                out.append(r)
        regions = out
        if not merged:
            return regions


@dataclass
class Enrichment:
    chain: object
    C: object
    strategy: Strategy
    edges: list
    index: dict
    in_C: dict
    offsets: np.ndarray
    apex: np.ndarray
    left: np.ndarray
    right: np.ndarray
    area2: np.ndarray
    degenerate: np.ndarray
    regions: list | None = None

    def __len__(self):
        return len(self.edges)

    def __contains__(self, chord):
        return tuple(chord) in self.index

    def apexes(self, a, b):
        e = self.index[(a, b)]
        return self.apex[self.offsets[e]:self.offsets[e + 1]]

    @property
    def candidate_count(self):
        return int(self.offsets[-1])

    def candidate_sets(self):
        return {e: set(self.apexes(*e).tolist()) for e in self.edges}


def triangle_candidates(enrichment, a, b):
    """Valid apexes of chord ``(a, b)`` sorted by position."""
    e = enrichment.index[(a, b)]
    s, t = enrichment.offsets[e], enrichment.offsets[e + 1]
    return [
        TriangleCandidate(int(k), int(enrichment.area2[r]), bool(enrichment.degenerate[r]))
        for r, k in zip(range(s, t), enrichment.apex[s:t].tolist())
    ]


def _boundary_intrusion(chain, a, k, b, S):
    pts = chain.points
    corners = (pts[a], pts[k], pts[b])
    for s in S:
        P = pts[s]
        for t in (s - 1, s + 1):
            if _enters(corners, P, _sub(pts[t], P)):
                return True
    return False


def _candidates_for(chain, a, b, K):
    """Filter apexes ``K`` of chord ``(a, b)``; returns (apexes, degenerate flags)."""
    X, Y = chain.X, chain.Y
    pts = chain.points
    o = orient_vec(X[a], Y[a], X[K], Y[K], X[b], Y[b])
    flat = np.zeros(len(K), dtype=bool)
    for r in np.flatnonzero(o == 0).tolist():
        pk = pts[int(K[r])]
        # apex between the ends, or an antenna with one end between apex and the other end
        flat[r] = (
            strictly_between(pts[a], pts[b], pk)
            or strictly_between(pk, pts[b], pts[a])
            or strictly_between(pts[a], pk, pts[b])
        )
    cw = o < 0
    if cw.any():
        Kc = K[cw]
        sx, sy = X[a + 1:b], Y[a + 1:b]
        kx, ky = X[Kc][:, None], Y[Kc][:, None]
        o1 = orient_vec(X[a], Y[a], kx, ky, sx, sy)
        o2 = orient_vec(kx, ky, X[b], Y[b], sx, sy)
        o3 = orient_vec(X[b], Y[b], X[a], Y[a], sx, sy)
        strict = (o1 < 0) & (o2 < 0) & (o3 < 0)
        closed = (o1 <= 0) & (o2 <= 0) & (o3 <= 0) & ~strict
        # the apex itself sits on the closed triangle
        rows = np.arange(len(Kc))
        closed[rows, Kc - (a + 1)] = False
        good = ~strict.any(axis=1)
        for r in np.flatnonzero(good & closed.any(axis=1)).tolist():
            S = (np.flatnonzero(closed[r]) + a + 1).tolist()
            if _boundary_intrusion(chain, a, int(Kc[r]), b, S):
                good[r] = False
        keep = np.zeros(len(K), dtype=bool)
        keep[np.flatnonzero(cw)[good]] = True
    else:
        keep = np.zeros(len(K), dtype=bool)
    keep |= flat
    return K[keep], flat[keep]


def _finish(chain, C, strategy, E, in_C, regions=None):
    m = chain.m
    edges = sorted(E, key=lambda e: (e[1] - e[0], e[0]))
    index = {e: t for t, e in enumerate(edges)}
    out_adj = [[] for _ in range(m)]
    in_adj = [[] for _ in range(m)]
    for a, b in edges:
        out_adj[a].append(b)
        in_adj[b].append(a)
    out_adj = [np.array(sorted(v), dtype=np.int64) for v in out_adj]
    in_adj = [np.array(sorted(v), dtype=np.int64) for v in in_adj]
    offsets = [0]
    apex, left, right, area2, degen = [], [], [], [], []
    for a, b in edges:
        if b - a >= 2:
            K = np.intersect1d(out_adj[a], in_adj[b], assume_unique=True)
            if len(K):
                K, flat = _candidates_for(chain, a, b, K)
                for k, f in zip(K.tolist(), flat.tolist()):
                    apex.append(k)
                    left.append(index[(a, k)])
                    right.append(index[(k, b)])
                    area2.append(0 if f else chain.triangle_area2(a, k, b))
                    degen.append(f)
        offsets.append(len(apex))
    return Enrichment(
        chain=chain,
        C=C,
        strategy=strategy,
        edges=edges,
        index=index,
        in_C=in_C,
        offsets=np.array(offsets, dtype=np.int64),
        apex=np.array(apex, dtype=np.int64),
        left=np.array(left, dtype=np.int64),
        right=np.array(right, dtype=np.int64),
        area2=np.array(area2, dtype=object if chain.arr.dtype == object else np.int64),
        degenerate=np.array(degen, dtype=bool),
        regions=regions,
    )


def build_enrichment(chain, C, strategy=None):
    """Enrichment of ``C`` under ``strategy`` (default: component with crossings, else cdt)."""
    m = chain.m
    analysis = crossing_components(C)
    if strategy is None:
        strategy = Strategy.COMPONENT if analysis.h else Strategy.CDT
    strategy = Strategy(strategy)
    in_C = {shortcut_chord(chain, e): e for e in C}
    E = {(a, a + 1) for a in range(m - 1)} | {(0, m - 1)} | set(in_C)
    chords = [c for c in in_C if c[1] - c[0] > 1]
    regions = None
    if strategy is Strategy.FULL:
        E.update(all_valid_chords(chain))
    elif strategy is Strategy.CDT:
        if analysis.h:
            raise CDTWithCrossings(f"{analysis.h} crossing component(s) in the shortcut set")
        E |= _triangle_edges(constrained_triangulation(chain, chords))
    else:
        regions = component_regions(chain, C, analysis) if analysis.h else []
        if regions is None:
            E.update(all_valid_chords(chain))
        else:
            singles = [shortcut_chord(chain, C.edges[comp[0]]) for comp in analysis.components if len(comp) == 1]
            region_chords = []
            for i, j in regions:
                lo, hi = chain.position(j), chain.position(i)
                region_chords.append((lo, hi))
                E.add((lo, hi))
                E.update(all_valid_chords(chain, lo, hi))
            constraints = [c for c in singles if c[1] - c[0] > 1] + region_chords
            E |= _triangle_edges(constrained_triangulation(chain, sorted(set(constraints))))
    return _finish(chain, C, strategy, E, in_C, regions)


# --------------------------------------------------------------------------
# enrichment property


@dataclass
class ExtensionResult:
    success: bool
    triangles: list
    witness: list | None = None

    def __bool__(self):
        return self.success


def _triangulate_face(face, cands):
    s = len(face) - 1
    ok = {}
    for i in range(s):
        ok[(i, i + 1)] = -1
    for span in range(2, s + 1):
        for i in range(0, s - span + 1):
            j = i + span
            allowed = cands.get((face[i], face[j]))
            if not allowed:
                continue
            for l in range(i + 1, j):
                if face[l] in allowed and (i, l) in ok and (l, j) in ok:
                    ok[(i, j)] = l
                    break
    if (0, s) not in ok:
        return None
    tris = []
    stack = [(0, s)]
    while stack:
        i, j = stack.pop()
        l = ok[(i, j)]
        if l < 0:
            continue
        tris.append((face[i], face[l], face[j]))
        stack.extend(((i, l), (l, j)))
    return tris


def check_extension_property(enrichment, C_subset):
    """Complete ``C_subset`` plus the chain boundary to a triangulation inside C+.

    Each face cut out by the subset is triangulated exactly by an interval
    search over the candidate lists; the first face without a completion is
    returned as the witness.
    """
    chain = enrichment.chain
    chords = []
    for e in C_subset:
        c = shortcut_chord(chain, e) if hasattr(e, "i") else tuple(e)
        if c[1] - c[0] > 1:
            chords.append(c)
    cands = enrichment.candidate_sets()
    tris = []
    for _, face in split_faces(chain.m, chords):
        got = _triangulate_face(face, cands)
        if got is None:
            return ExtensionResult(False, [], face)
        tris.extend(got)
    return ExtensionResult(True, tris)
