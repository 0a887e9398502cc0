"""Two cartographic uses: grouping points and preferring map-like directions."""
import numpy as np

from shortcut_hull import generate_all_shortcuts, normalize_input, solve_holes
from shortcut_hull.app import apply_orientation_weights, build_mst_polygon, clusters
from shortcut_hull.variants import chain_of

# point aggregation: walk around a spanning tree, then hull the walk
rng = np.random.default_rng(7)
left = rng.integers(0, 6, size=(6, 2))
right = rng.integers(0, 6, size=(6, 2)) + [20, 3]
points = sorted({tuple(map(int, p)) for p in np.vstack([left, right])})
P = build_mst_polygon(points)
chain = chain_of(P)
C = generate_all_shortcuts(P, chain)
# small lambda keeps the bare tree (no area); larger lambda closes groups,
# and near 1 the two groups merge into one
for lam in (0.3, 0.8, 0.95):
    sol = solve_holes(P, C, lam, chain=chain)
    groups = clusters(sol.hull)
    print(f"lambda={lam}: {len(groups)} group(s), area={sol.report.area:g}")

# schematization: shortcuts off the octilinear directions cost more perimeter
poly = normalize_input([(0, 0), (0, 6), (2, 7), (5, 6), (6, 3), (4, 3), (3, 1)])
chain = chain_of(poly)
C = generate_all_shortcuts(poly, chain)
W = apply_orientation_weights(C, {"angles_deg": [0, 45, 90, 135], "gamma": 1.0})
for name, S in (("plain", C), ("octilinear-weighted", W)):
    r = solve_holes(poly, S, 0.7, chain=chain).report
    print(f"{name:20s} edges={r.edge_count} area={r.area:g} cost={r.eq1_cost:.4f}")
