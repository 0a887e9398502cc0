import itertools
import math

import numpy as np
import pytest

from shortcut_hull.dp import INFEASIBLE, NoHullExists, SolveConfig, backtrack, labeled_cost, solve, solve_dp
from shortcut_hull.enrichment import build_enrichment
from shortcut_hull.fixtures import SQ, random_simple_polygon
from shortcut_hull.geometry import normalize_input
from shortcut_hull.oracle import triangulations
from shortcut_hull.shortcuts import generate_all_shortcuts, make_shortcut_set
from shortcut_hull.variants import chain_of

from conftest import chord


def test_config_bounds():
    assert SolveConfig(0.3).beta == pytest.approx(0.7)
    with pytest.raises(ValueError):
        SolveConfig(1.2)


def test_square_boundary_only(sq):
    P, chain, C = sq
    E = build_enrichment(chain, C)
    tables, lt = solve(chain, E, SolveConfig(0.5))
    assert tables.internal_cost == pytest.approx(4.0)
    assert not lt.active()
    assert lt.separators == sorted(chord(chain, i, i + 1) for i in range(4))


@pytest.mark.parametrize("lam, cost", [(0.5, 6.5), (0.25, 3.5)])
def test_notch_costs(notch, lam, cost):
    P, chain, C = notch
    _, value = solve_dp(chain, build_enrichment(chain, C, "full"), SolveConfig(lam))
    assert value == pytest.approx(cost, rel=1e-12)


def test_notch_backtrack(notch_base):
    P, chain, C = notch_base
    E = build_enrichment(chain, C, "full")
    _, lt = solve(chain, E, SolveConfig(0.5))
    assert lt.active_area2 == 2
    expected = [chord(chain, 1, 4)] + [chord(chain, i, i + 1) for i in (0, 4, 5, 6, 7)]
    assert lt.separators == sorted(expected)
    _, lt = solve(chain, E, SolveConfig(0.25))
    assert lt.active_area2 == 0
    assert lt.separators == sorted(chord(chain, i, i + 1) for i in range(8))


def test_zero_lambda_still_forbids_foreign_separators(notch):
    # at lambda = 0 a separator outside C stays infeasible
    P, chain, _ = notch
    C = make_shortcut_set(P, chain, [], includes_polygon_edges=True)
    E = build_enrichment(chain, C, "full")
    tables, lt = solve(chain, E, SolveConfig(0.0))
    assert tables.internal_cost == 0.0
    assert all(s in E.in_C for s in lt.separators)
    assert np.isinf(tables.sep[[E.index[e] for e in E.edges if e not in E.in_C]]).all()


def test_no_hull_without_shortcuts():
    P = normalize_input(SQ)
    chain = chain_of(P)
    C = make_shortcut_set(P, chain, [], includes_polygon_edges=False)
    tables, cost = solve_dp(chain, build_enrichment(chain, C, "full"), SolveConfig(0.5))
    assert cost == INFEASIBLE
    with pytest.raises(NoHullExists):
        backtrack(tables, chain)


def test_tiling_and_cost_audit(rng):
    for _ in range(40):
        P = random_simple_polygon(rng, int(rng.integers(3, 16)))
        chain = chain_of(P)
        C = generate_all_shortcuts(P, chain)
        E = build_enrichment(chain, C, str(rng.choice(["full", "component"])))
        cfg = SolveConfig(float(rng.uniform()))
        tables, lt = solve(chain, E, cfg)
        assert sum(chain.triangle_area2(a, k, b) for a, k, b, _ in lt.triangles) == chain.area2()
        audit = labeled_cost(E, lt, cfg)
        assert audit == pytest.approx(tables.internal_cost, rel=1e-9, abs=1e-12)


def _pocket_best(chain, E, edge, label, lam):
    """Best cost of the pocket behind ``edge`` with its adjacent triangle labeled ``label``."""
    cands = E.candidate_sets()
    beta = 1.0 - lam
    best = INFEASIBLE
    for tris in triangulations(edge, cands):
        t = len(tris)
        for labels in itertools.product((False, True), repeat=t - 1):
            lab = dict(zip(tris, (label,) + labels))
            side = {}
            for tr in tris:
                a, k, b = tr
                for e in ((a, k), (k, b), (a, b)):
                    side.setdefault(e, []).append(lab[tr])
            cost = beta * sum(chain.triangle_area2(*tr) * 0.5 for tr in tris if lab[tr])
            for e, ls in side.items():
                if e == edge:
                    continue
                if len(ls) == 2:
                    switch = ls[0] != ls[1]
                elif chain.is_p_edge(e[0]) and e[1] - e[0] == 1:
                    switch = not ls[0]
                else:
                    switch = False
                    if ls[0]:
                        cost = INFEASIBLE
                if switch:
                    sc = E.in_C.get(e)
                    cost = INFEASIBLE if sc is None else cost + lam * sc.weight * sc.length
            best = min(best, cost)
    return best


def test_optimal_substructure(rng):
    # table entries agree with standalone brute force on sub-pockets
    checked = 0
    while checked < 100:
        P = random_simple_polygon(rng, int(rng.integers(4, 9)))
        chain = chain_of(P)
        C = generate_all_shortcuts(P, chain)
        E = build_enrichment(chain, C, "full")
        lam = float(rng.uniform())
        tables, _ = solve_dp(chain, E, SolveConfig(lam))
        inner = [e for e in E.edges if 2 <= e[1] - e[0] <= 7]
        for t in rng.choice(len(inner), size=min(5, len(inner)), replace=False):
            e = inner[int(t)]
            idx = E.index[e]
            for label, table in ((True, tables.A), (False, tables.I)):
                ref = _pocket_best(chain, E, e, label, lam)
                if math.isinf(ref):
                    assert math.isinf(table[idx])
                else:
                    assert table[idx] == pytest.approx(ref, rel=1e-9, abs=1e-12)
            checked += 1


def test_active_area_monotone_in_lambda(rng):
    for _ in range(15):
        P = random_simple_polygon(rng, int(rng.integers(5, 14)))
        chain = chain_of(P)
        C = generate_all_shortcuts(P, chain)
        E = build_enrichment(chain, C, "full")
        areas, perims = [], []
        for lam in np.linspace(0, 1, 21):
            _, lt = solve(chain, E, SolveConfig(float(lam)))
            areas.append(lt.active_area2)
            perims.append(sum(E.in_C[s].length for s in lt.separators))
        assert areas == sorted(areas)
        assert all(p2 <= p1 + 1e-9 for p1, p2 in zip(perims, perims[1:]))
