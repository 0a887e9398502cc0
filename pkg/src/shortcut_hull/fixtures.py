"""Small analytic instances and random instance generators."""
from __future__ import annotations

import math

import numpy as np

from .geometry import (
    ProperSelfCrossing,
    normalize_input,
    on_open_segment,
    orientation,
    ring_has_proper_crossing,
    segments_properly_cross,
    signed_area2,
)

# 2x2 square
SQ = [(0, 0), (0, 2), (2, 2), (2, 0)]

# 3x3 square with a unit notch cut into the top edge
NOTCH = [(0, 3), (1, 3), (1, 2), (2, 2), (2, 3), (3, 3), (3, 0), (0, 0)]

# 7x7 square with a 1-wide, 2-deep channel opening into a 5x4 cavity
FLASK = [
    (0, 7), (3, 7), (3, 5), (1, 5), (1, 1), (6, 1), (6, 5), (4, 5), (4, 7),
    (7, 7), (7, 0), (0, 0),
]

# two-step staircase whose bottom edge carries four collinear vertices
STAIRCASE = [(0, 5), (1, 5), (1, 3), (3, 3), (3, 0), (2, 0), (1, 0), (0, 0)]


def _degenerate(pts):
    k = len(pts)
    for i in range(k):
        u, w = pts[i], pts[(i + 1) % k]
        for j in range(k):
            if j != i and j != (i + 1) % k and on_open_segment(u, w, pts[j]):
                return True
            if pts[j] == u and j != i:
                return True
    return False


def random_simple_polygon(rng, n, grid=10, max_tries=200):
    """Random simple polygon with ``n`` integer vertices in ``[0, grid]^2``.

    Uses 2-opt untangling of a random tour; touching configurations are rejected
    so the result is simple (collinear vertex triples may still occur).
    """
    for _ in range(max_tries):
        pts = set()
        while len(pts) < n:
            pts.add((int(rng.integers(0, grid + 1)), int(rng.integers(0, grid + 1))))
        pts = list(pts)
        order = list(rng.permutation(n))
        tour = [pts[i] for i in order]
        for _ in range(50 * n):
            swapped = False
            for i in range(n):
                for j in range(i + 2, n):
                    if i == 0 and j == n - 1:
                        continue
                    a, b = tour[i], tour[i + 1]
                    c, d = tour[j], tour[(j + 1) % n]
                    if segments_properly_cross(a, b, c, d):
                        tour[i + 1:j + 1] = tour[i + 1:j + 1][::-1]
                        swapped = True
            if not swapped:
                break
        if ring_has_proper_crossing(tour) is not None or _degenerate(tour):
            continue
        if signed_area2(tour) == 0:
            continue
        try:
            return normalize_input(tour)
        except ProperSelfCrossing:
            continue
    raise RuntimeError("could not generate a simple polygon")


def random_star_polygon(rng, n, radius=None):
    """Random star-shaped polygon around the origin with distinct vertex angles.

    The radius defaults to ``100 n`` so rounding to integers keeps the star shape.
    """
    radius = max(1000, 100 * n) if radius is None else radius
    for _ in range(100):
        angles = np.sort(rng.uniform(0.0, 2 * math.pi, n))
        radii = rng.uniform(0.3 * radius, radius, n)
        pts = []
        for a, r in zip(angles, radii):
            p = (int(round(r * math.cos(a))), int(round(r * math.sin(a))))
            if not pts or pts[-1] != p:
                pts.append(p)
        try:
            return normalize_input(pts)
        except ProperSelfCrossing:
            continue
    raise RuntimeError("could not generate a star-shaped polygon")


def is_convex_position(pts):
    k = len(pts)
    signs = {orientation(pts[i], pts[(i + 1) % k], pts[(i + 2) % k]) for i in range(k)}
    return signs <= {-1} or signs <= {1}
