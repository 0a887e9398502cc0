"""A cavity that is cheaper to leave as a hole.

FLASK is a 7x7 block with a cavity reachable only through a narrow channel.
Around lambda = 0.51 the best hull bridges the channel and keeps the cavity
as a hole; a hull without holes has to pay for the cavity area or its rim.
"""
from shortcut_hull.fixtures import FLASK
from shortcut_hull import generate_all_shortcuts, normalize_input, solve_holes, solve_no_holes
from shortcut_hull.variants import chain_of

P = normalize_input(FLASK)
chain = chain_of(P)
C = generate_all_shortcuts(P, chain)
lam = 0.51

with_holes = solve_holes(P, C, lam, chain=chain)
without = solve_no_holes(P, C, lam, chain)
for name, sol in (("holes allowed", with_holes), ("no holes", without)):
    r = sol.report
    print(f"{name:14s} cost={r.eq1_cost:.4f} area={r.area:g} perimeter={r.perimeter:g} holes={r.hole_count}")

h = with_holes.hull
print("outer ring:", h.ring_coords(h.outer))
for ring in h.holes:
    print("hole:", h.ring_coords(ring))
