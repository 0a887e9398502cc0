"""Instances, schematization weights, point-set aggregation, SVG and reports."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema
import numpy as np
import shapely.wkt
from shapely.errors import ShapelyError

from .geometry import cross, normalize_with_map
from .hull import _cw_order, _ring_pairs, trace_rings
from .shortcuts import Shortcut, ShortcutSet

COORD_LIMIT = 2**30

_POINT = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}

INSTANCE_SCHEMA = {
    "type": "object",
    "properties": {
        "polygon": {"oneOf": [{"type": "array", "items": _POINT}, {"type": "string"}]},
        "points": {"type": "array", "items": _POINT},
        "coordinate_scale": {"type": "integer", "minimum": 0, "maximum": 12},
        "shortcuts": {
            "oneOf": [
                {"const": "all"},
                {"type": "array", "items": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2}},
            ]
        },
        "include_polygon_edges": {"type": "boolean"},
        "lambda": {"type": "number", "minimum": 0, "maximum": 1},
        "mode": {"enum": ["holes", "no-holes"]},
        "max_edges": {"type": "integer", "minimum": 1},
        "max_bends": {"type": "integer", "minimum": 3},
        "orientations": {
            "type": "object",
            "properties": {
                "angles_deg": {"type": "array", "items": {"type": "number"}, "minItems": 1},
                "gamma": {"type": "number", "minimum": 0},
                "strict": {"type": "boolean"},
                "tolerance_deg": {"type": "number", "minimum": 0},
            },
            "required": ["angles_deg"],
            "additionalProperties": False,
        },
    },
    "oneOf": [{"required": ["polygon"]}, {"required": ["points"]}],
}


class SchemaError(ValueError):
    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path


class ScaleOverflow(ValueError):
    pass


class EmptyShortcutSet(ValueError):
    pass


class TooFewPoints(ValueError):
    pass


@dataclass
class InstanceFile:
    polygon: object = None
    raw_polygon: list | None = None
    index_map: list | None = None
    points: list | None = None
    coordinate_scale: int = 0
    shortcuts: object = "all"
    include_polygon_edges: bool = True
    lam: float = 0.5
    mode: str = "holes"
    max_edges: int | None = None
    max_bends: int | None = None
    orientations: dict | None = None
    extra: dict = field(default_factory=dict)


def _check_scale(raw, scale):
    f = 10**scale
    for x, y in raw:
        if max(abs(x), abs(y)) * f > COORD_LIMIT:
            raise ScaleOverflow(f"coordinate {(x, y)} exceeds {COORD_LIMIT} after scaling by 10^{scale}")


def parse_wkt_polygon(text):
    try:
        geom = shapely.wkt.loads(text)
    except (ShapelyError, ValueError) as exc:
        raise SchemaError("/polygon", f"unreadable WKT ({exc})") from None
    if geom.geom_type != "Polygon":
        raise SchemaError("/polygon", f"expected a POLYGON, got {geom.geom_type}")
    if len(geom.interiors):
        raise SchemaError("/polygon", "polygons with interior rings are not supported")
    coords = [tuple(c[:2]) for c in geom.exterior.coords]
    return coords[:-1] if len(coords) > 1 and coords[0] == coords[-1] else coords


def _as_int_if_integral(v):
    return int(v) if float(v).is_integer() else v


def instance_from_dict(data):
    try:
        jsonschema.validate(data, INSTANCE_SCHEMA)
    except jsonschema.ValidationError as err:
        path = "/" + "/".join(str(p) for p in err.absolute_path)
        raise SchemaError(path, err.message) from None
    inst = InstanceFile(
        coordinate_scale=data.get("coordinate_scale", 0),
        shortcuts=data.get("shortcuts", "all"),
        include_polygon_edges=data.get("include_polygon_edges", True),
        lam=float(data.get("lambda", 0.5)),
        mode=data.get("mode", "holes"),
        max_edges=data.get("max_edges"),
        max_bends=data.get("max_bends"),
        orientations=data.get("orientations"),
    )
    scale = inst.coordinate_scale
    if "points" in data:
        pts = [tuple(_as_int_if_integral(c) for c in p) for p in data["points"]]
        _check_scale(pts, scale)
        inst.points = pts
        return inst
    poly = data["polygon"]
    raw = parse_wkt_polygon(poly) if isinstance(poly, str) else [tuple(p) for p in poly]
    raw = [tuple(_as_int_if_integral(c) for c in p) for p in raw]
    _check_scale(raw, scale)
    inst.raw_polygon = raw
    inst.polygon, inst.index_map = normalize_with_map(raw, scale)
    return inst


def parse_instance(path):
    """Read an instance from JSON (or a bare WKT polygon)."""
    text = Path(path).read_text()
    stripped = text.lstrip()
    if stripped.upper().startswith("POLYGON"):
        return instance_from_dict({"polygon": stripped.strip()})
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("/", f"invalid JSON ({exc.msg} at line {exc.lineno})") from None
    return instance_from_dict(data)


def mapped_pairs(inst):
    """User shortcut pairs translated to normalized vertex indices."""
    if inst.shortcuts == "all":
        return "all"
    return [(inst.index_map[i], inst.index_map[j]) for i, j in inst.shortcuts]


# --------------------------------------------------------------------------
# schematization


def _angle_deg(P, e):
    a, b = P.point(e.i), P.point(e.j)
    return math.degrees(math.atan2(b[1] - a[1], b[0] - a[0])) % 180.0


def _delta(angle, allowed):
    return min(min(abs(angle - o), 180.0 - abs(angle - o)) for o in allowed)


def _delta_max(allowed):
    o = sorted(a % 180.0 for a in allowed)
    gaps = [b - a for a, b in zip(o, o[1:])] + [o[0] + 180.0 - o[-1]]
    return max(gaps) / 2.0


def apply_orientation_weights(C, orientations):
    """Perimeter multipliers from the angular distance to preferred orientations.

    Non-strict: ``weight = 1 + gamma * delta / delta_max``.  Strict: shortcuts
    farther than the tolerance are dropped (polygon edges always stay).
    """
    allowed = [float(a) % 180.0 for a in orientations["angles_deg"]]
    if not allowed:
        raise ValueError("at least one orientation is required")
    gamma = float(orientations.get("gamma", 1.0))
    if gamma < 0:
        raise ValueError("gamma must be non-negative")
    P = C.polygon
    dmax = _delta_max(allowed)
    if orientations.get("strict", False):
        tol = float(orientations.get("tolerance_deg", 1.0))
        keep = [e for e in C if e.j - e.i == 1 or _delta(_angle_deg(P, e), allowed) <= tol]
        if not keep:
            raise EmptyShortcutSet("no shortcut survives the orientation filter")
        return ShortcutSet(P, keep, C.includes_polygon_edges)
    edges = []
    for e in C:
        d = _delta(_angle_deg(P, e), allowed)
        w = 1.0 + gamma * (d / dmax if dmax > 0 else 0.0)
        edges.append(Shortcut(e.i, e.j, e.length, w))
    return ShortcutSet(P, edges, C.includes_polygon_edges)


# --------------------------------------------------------------------------
# point sets


def minimum_spanning_tree(points):
    """Prim's algorithm on the complete Euclidean graph (ties: lexicographic edge)."""
    pts = np.asarray(points, dtype=float)
    p = len(pts)
    order = sorted(range(p), key=lambda i: tuple(points[i]))
    rank = np.empty(p, dtype=np.int64)
    rank[order] = np.arange(p)
    d2 = ((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2)
    in_tree = np.zeros(p, dtype=bool)
    best = np.full(p, np.inf)
    link = np.full(p, -1)
    start = order[0]
    in_tree[start] = True
    best[:] = d2[start]
    link[:] = start
    edges = []
    for _ in range(p - 1):
        cand = np.where(in_tree, np.inf, best)
        m = cand.min()
        ties = np.flatnonzero(cand == m)
        # lexicographic order of the (sorted) endpoint ranks
        keys = [tuple(sorted((rank[t], rank[link[t]]))) for t in ties]
        t = int(ties[min(range(len(ties)), key=keys.__getitem__)])
        edges.append((int(link[t]), t))
        in_tree[t] = True
        closer = (d2[t] < best) | ((d2[t] == best) & (rank[t] < rank[link]))
        upd = closer & ~in_tree
        best[upd] = d2[t][upd]
        link[upd] = t
    return edges


def tree_walk(points, edges):
    """Closed walk around a planar straight-line tree (each edge twice)."""
    nbrs = {i: [] for i in range(len(points))}
    for a, b in edges:
        nbrs[a].append(b)
        nbrs[b].append(a)
    start = min(range(len(points)), key=lambda i: tuple(points[i]))
    if not nbrs[start]:
        return [points[start]]
    walk = [start]
    prev, cur = start, nbrs[start][0]
    for _ in range(2 * len(edges) - 1):
        walk.append(cur)
        pc = points[cur]
        back = (points[prev][0] - pc[0], points[prev][1] - pc[1])
        key = _cw_order(back)
        nxt = min(nbrs[cur], key=lambda w: key((points[w][0] - pc[0], points[w][1] - pc[1])))
        prev, cur = cur, nxt
    return [points[i] for i in walk]


def build_mst_polygon(points, scale=0):
    """Weakly simple zero-area polygon walking around the Euclidean MST."""
    pts = []
    for p in points:
        if tuple(p) not in pts:
            pts.append(tuple(p))
    if len(pts) < 3:
        # two points give a 2-vertex doubled segment, which has no donut chain
        raise TooFewPoints("need at least 3 distinct points")
    f = 10**scale
    scaled = [(int(round(x * f)), int(round(y * f))) for x, y in pts]
    if len(set(scaled)) < len(scaled):
        raise TooFewPoints("points coincide after scaling")
    edges = minimum_spanning_tree(scaled)
    ring = tree_walk(scaled, edges)
    P, _ = normalize_with_map([(x / f, y / f) if scale else (x, y) for x, y in ring], scale)
    return P


def clusters(hull):
    """Rings of the hull after dropping edges that do not border its interior."""
    P = hull.polygon
    # repeated coordinates share one canonical index
    first = {}
    canon = [first.setdefault(P.point(i), i) for i in range(P.n)]
    directed = [(canon[u % P.n], canon[v % P.n]) for ring in hull.rings for u, v in _ring_pairs(ring)]
    count = {}
    for u, v in directed:
        count[(u, v)] = count.get((u, v), 0) + 1
    kept = []
    for u, v in directed:
        if count.get((v, u), 0):
            count[(v, u)] -= 1
            continue
        kept.append((u, v))
    if not kept:
        return []
    pts = {i: P.point(i) for i in range(P.n)}
    rings = trace_rings(pts, kept)
    out = []
    for r in rings:
        c = [pts[i] for i in r]
        if any(cross(c[0], c[t], c[t + 1]) for t in range(1, len(c) - 1)):
            out.append(r)
    return out


# --------------------------------------------------------------------------
# output


def _fmt(v):
    return f"{v:.6g}"


def emit_svg(P, C, hull, path, box=None):
    """Layered SVG: shortcuts, polygon, hull region and holes."""
    f = 10.0 ** -P.scale
    xs = [x for x, _ in P.vertices]
    ys = [y for _, y in P.vertices]
    if box is not None:
        (x0, y1), (x1, y0) = box.q1, box.q3
    else:
        pad = max(1, int(0.05 * max(max(xs) - min(xs), max(ys) - min(ys))))
        x0, y0, x1, y1 = min(xs) - pad, min(ys) - pad, max(xs) + pad, max(ys) + pad
    W, H = (x1 - x0) * f, (y1 - y0) * f
    sw = max(W, H) / 400.0

    def pt(p):
        return f"{_fmt((p[0] - x0) * f)},{_fmt((y1 - p[1]) * f)}"

    def ring_path(coords):
        return "M " + " L ".join(pt(p) for p in coords) + " Z"

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {_fmt(W)} {_fmt(H)}">',
        '<g id="shortcuts" stroke="#999" fill="none" stroke-width="{}">'.format(_fmt(sw)),
    ]
    for e in C:
        parts.append(f'<path d="M {pt(P.point(e.i))} L {pt(P.point(e.j))}"/>')
    parts.append("</g>")
    hull_d = " ".join(ring_path([P.point(i) for i in r]) for r in hull.rings)
    parts.append(f'<g id="hull"><path d="{hull_d}" fill="#f4a259" fill-rule="evenodd" stroke="#c0392b" stroke-width="{_fmt(2 * sw)}"/></g>')
    parts.append(f'<g id="polygon"><path d="{ring_path(P.vertices)}" fill="#4a6fa5" stroke="#1d3557" stroke-width="{_fmt(sw)}"/></g>')
    parts.append('<g id="holes" fill="none" stroke="#2a9d8f" stroke-dasharray="{0} {0}" stroke-width="{1}">'.format(_fmt(3 * sw), _fmt(2 * sw)))
    for h in hull.holes:
        parts.append(f'<path d="{ring_path([P.point(i) for i in h])}"/>')
    parts.append("</g>")
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")
    return path


def report_dict(solution, P, C, stats=None):
    rep = solution.report
    hull = solution.hull
    rings = []
    for kind, rs in (("outer", [hull.outer]), ("hole", hull.holes), ("island", hull.islands)):
        for r in rs:
            rings.append({"kind": kind, "indices": list(r), "coordinates": [list(p) for p in hull.ring_coords(r)]})
    out = {
        "lambda": rep.lam,
        "eq1_cost": rep.eq1_cost,
        "internal_cost": rep.internal_cost,
        "perimeter": rep.perimeter,
        "weighted_perimeter": rep.weighted_perimeter,
        "area": rep.area,
        "polygon_area": rep.polygon_area,
        "hole_count": rep.hole_count,
        "edge_count": rep.edge_count,
        "bend_count": rep.bend_count,
        "orientation": {"outer": "clockwise", "holes": "counterclockwise"},
        "rings": rings,
        "stats": dict(stats or {}),
    }
    return out


def write_report(data, path):
    Path(path).write_text(json.dumps(data, indent=2) + "\n")


def read_report(path):
    return json.loads(Path(path).read_text())


