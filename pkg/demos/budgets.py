# Edge and bend budgets on NOTCH at lambda = 0.25.
#
# The base shortcut set leaves out chords that run through other vertices;
# k-bend mode adds them back along collinear runs, which is what makes a
# 4-bend hull possible.
import math

from shortcut_hull.fixtures import NOTCH
from shortcut_hull import InfeasibleBudget, generate_all_shortcuts, normalize_input
from shortcut_hull.variants import chain_of, solve_k_bends, solve_k_edges

P = normalize_input(NOTCH)
chain = chain_of(P)
C = generate_all_shortcuts(P, chain, through_vertices=False)


def cost(fn, k):
    try:
        return fn(P, C, 0.25, k, chain=chain).report.eq1_cost
    except InfeasibleBudget:
        return math.inf


print(" k   k-edges   k-bends")
for k in range(3, 9):
    print(f"{k:2d}  {cost(solve_k_edges, k):8.4f}  {cost(solve_k_bends, k):8.4f}")
