import itertools
import math

import pytest

from shortcut_hull.dp import SolveConfig
from shortcut_hull.enrichment import build_enrichment
from shortcut_hull.fixtures import random_star_polygon
from shortcut_hull.oracle import (
    InstanceTooLarge,
    enumerate_labeled_triangulations,
    iter_triangulations,
    oracle_min_cost,
    triangulations,
)
from shortcut_hull.shortcuts import generate_all_shortcuts
from shortcut_hull.variants import chain_of

from conftest import instance


def catalan(k):
    return math.comb(2 * k, k) // (k + 1)


@pytest.mark.parametrize("s", [3, 5, 9])
def test_convex_chain_counts_are_catalan(s):
    # every chord of a convex chain admits every apex in between
    cands = {(a, b): set(range(a + 1, b)) for a, b in itertools.combinations(range(s), 2) if b - a > 1}
    count = sum(1 for _ in triangulations((0, s - 1), cands))
    assert count == catalan(s - 2)
    assert catalan(7) == 429


def test_square_cdt_has_one_triangulation(sq):
    P, chain, C = sq
    E = build_enrichment(chain, C, "cdt")
    assert sum(1 for _ in iter_triangulations(E)) == 1


def test_labeled_count_and_visitor(notch):
    P, chain, C = notch
    E = build_enrichment(chain, C, "component")
    seen = []
    stats = enumerate_labeled_triangulations(chain, E, visitor=lambda t, l: seen.append(len(l)))
    assert stats.labeled_count == len(seen) == sum(2 ** len(t) for t in iter_triangulations(E))
    assert stats.tilings_ok


@pytest.mark.parametrize("fixture, lam, cost", [("sq", 0.0, 0.0), ("notch", 0.5, 6.5), ("notch", 0.25, 3.5)])
def test_oracle_values(request, fixture, lam, cost):
    P, chain, C = request.getfixturevalue(fixture)
    E = build_enrichment(chain, C, "full")
    assert oracle_min_cost(chain, E, SolveConfig(lam)) == pytest.approx(cost, abs=1e-12)


def test_oracle_separator_budget(notch_base):
    P, chain, C = notch_base
    E = build_enrichment(chain, C, "full")
    cfg = SolveConfig(0.25)
    assert oracle_min_cost(chain, E, cfg, max_separators=3) == math.inf
    assert oracle_min_cost(chain, E, cfg, max_separators=6) == pytest.approx(9.75 - 0.75 * 8)


def test_too_large(rng):
    P = random_star_polygon(rng, 12)
    chain = chain_of(P)
    E = build_enrichment(chain, generate_all_shortcuts(P, chain))
    with pytest.raises(InstanceTooLarge):
        oracle_min_cost(chain, E, SolveConfig(0.5))
