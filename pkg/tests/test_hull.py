from collections import Counter

import pytest

from shortcut_hull.dp import SolveConfig
from shortcut_hull.fixtures import FLASK, NOTCH, SQ, random_simple_polygon
from shortcut_hull.geometry import signed_area2
from shortcut_hull.hull import (
    CONVEX_VERTEX_MISSING,
    EDGE_NOT_IN_C,
    HullWithHoles,
    bend_count,
    cost_report,
    normalized_pair,
    verify_hull,
)
from shortcut_hull.shortcuts import generate_all_shortcuts
from shortcut_hull.variants import chain_of, solve_holes

from conftest import instance


def test_notch_hull(notch_base):
    P, chain, C = notch_base
    sol = solve_holes(P, C, 0.5, chain=chain)
    assert sol.hull.outer == [0, 1, 4, 5, 6, 7]
    assert sol.hull.holes == []
    r = sol.report
    assert (r.perimeter, r.area, r.eq1_cost, r.internal_cost) == pytest.approx((12, 9, 10.5, 6.5))
    assert (r.edge_count, r.bend_count) == (6, 4)
    assert verify_hull(sol.hull, P, C).ok


def test_flask_hull():
    P, chain, C = instance(FLASK, through_vertices=False)
    sol = solve_holes(P, C, 0.51, chain=chain)
    assert len(sol.hull.outer) == 6 and (1, 8) in sol.hull.edges
    [hole] = sol.hull.holes
    assert [P.point(i) for i in hole] == [(3, 5), (1, 5), (1, 1), (6, 1), (6, 5), (4, 5)]
    assert signed_area2([P.point(i) for i in hole]) == 40
    r = sol.report
    assert (r.perimeter, r.area) == pytest.approx((46, 29))
    assert r.eq1_cost == pytest.approx(37.67, abs=1e-9)
    assert verify_hull(sol.hull, P, C).ok


def test_flask_with_all_shortcuts_ties():
    # long chords through collinear vertices give an equal-cost hull with fewer ring vertices
    P, chain, C = instance(FLASK)
    r = solve_holes(P, C, 0.51, chain=chain).report
    assert (r.eq1_cost, r.perimeter, r.area, r.hole_count) == pytest.approx((37.67, 46, 29, 1))


@pytest.mark.parametrize("lam", [0.0, 0.5, 1.0])
def test_square_hull_is_itself(sq, lam):
    P, chain, C = sq
    sol = solve_holes(P, C, lam, chain=chain)
    assert sol.hull.outer == [0, 1, 2, 3] and not sol.hull.holes
    if lam == 0.5:
        assert (sol.report.perimeter, sol.report.area, sol.report.eq1_cost) == pytest.approx((8, 4, 6))


def test_verify_flags_foreign_edge_and_missing_corner(notch_base):
    P, chain, C = notch_base
    fake = HullWithHoles(P, [0, 5, 6, 7])  # (0,3)-(3,3) is not in the base set
    assert EDGE_NOT_IN_C in verify_hull(fake, P, C).codes()
    cut = HullWithHoles(P, [0, 1, 2, 3, 4, 5, 6])  # (0,0) dropped
    assert CONVEX_VERTEX_MISSING in verify_hull(cut, P, C).codes()


def test_bend_count():
    assert bend_count([(0, 0), (0, 1), (0, 2), (2, 2), (2, 0)]) == 4
    assert bend_count(SQ) == 4


def test_rings_match_separators_and_area(rng):
    for _ in range(40):
        P = random_simple_polygon(rng, int(rng.integers(3, 18)))
        chain = chain_of(P)
        C = generate_all_shortcuts(P, chain)
        sol = solve_holes(P, C, float(rng.uniform()), chain=chain)
        hull, lt = sol.hull, sol.labeled
        assert verify_hull(hull, P, C).ok
        assert signed_area2([P.point(i) for i in hull.outer]) <= 0
        for h in hull.holes:
            assert signed_area2([P.point(i) for i in h]) > 0
        # the active triangles account exactly for the added area
        added = sol.report.area - sol.report.polygon_area
        assert added == pytest.approx(lt.active_area2 / 2, abs=1e-9)
        n = P.n
        ring_edges = Counter(min(normalized_pair(n, u, v)) for r in hull.rings for u, v in zip(r, r[1:] + r[:1]))
        seps = Counter(min(normalized_pair(n, chain.pindex(b) % n, chain.pindex(a) % n)) for a, b in lt.separators)
        assert ring_edges == seps
