"""When does it pay to fill a notch?

A 3x3 square with a unit notch. Filling the notch adds one unit of area and
saves two units of perimeter, so the balance tips at lambda = 1/3.
"""
from shortcut_hull.fixtures import NOTCH
from shortcut_hull import generate_all_shortcuts, lambda_sweep, normalize_input, solve_holes
from shortcut_hull.variants import chain_of

P = normalize_input(NOTCH)
chain = chain_of(P)
C = generate_all_shortcuts(P, chain)

for lam in (0.2, 0.3, 0.4, 0.9):
    r = solve_holes(P, C, lam, chain=chain).report
    print(f"lambda={lam:.1f}  area={r.area:g}  perimeter={r.perimeter:g}  cost={r.eq1_cost:.4f}")

sweep = lambda_sweep(P, C, eps=0.01, chain=chain)
for lo, hi in sweep.transitions:
    print(f"hull changes somewhere in ({lo:.4f}, {hi:.4f}); exact value 1/3 = {1/3:.4f}")
