"""Optimal shortcut hulls of weakly-simple polygons.

Typical use::

    from shortcut_hull import normalize_input, generate_all_shortcuts, chain_of, solve_holes
    P = normalize_input([(0, 0), (3, 0), (3, 3), (0, 3)])
    C = generate_all_shortcuts(P, chain_of(P))
    sol = solve_holes(P, C, 0.5)
"""
from .geometry import (
    DonutChain,
    InvalidPolygon,
    ProperSelfCrossing,
    TooFewVertices,
    WeaklySimplePolygon,
    build_box_and_chain,
    normalize_input,
)
from .shortcuts import (
    Shortcut,
    ShortcutSet,
    crossing_components,
    generate_all_shortcuts,
    make_shortcut_set,
)
from .enrichment import CDTWithCrossings, Strategy, build_enrichment, check_extension_property
from .dp import INFEASIBLE, NoHullExists, SolveConfig, solve, solve_dp
from .oracle import InstanceTooLarge, oracle_min_cost
from .hull import HullWithHoles, cost_report, extract_hull, verify_hull
from .variants import (
    InfeasibleBudget,
    NoPathExists,
    augment_collinear,
    chain_of,
    lambda_sweep,
    solve_holes,
    solve_k_bends,
    solve_k_edges,
    solve_no_holes,
)
from .app import build_mst_polygon, parse_instance
from .cli import run

__version__ = "0.1.0"


def shortcut_hull(vertices, lam=0.5, holes=True):
    """Solve with every valid shortcut; returns a ``Solution``."""
    P = normalize_input(vertices)
    chain = chain_of(P)
    C = generate_all_shortcuts(P, chain)
    if holes:
        return solve_holes(P, C, lam, chain=chain)
    return solve_no_holes(P, C, lam, chain=chain)
