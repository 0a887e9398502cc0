import pytest

from shortcut_hull.enrichment import (
    CDTWithCrossings,
    Strategy,
    build_enrichment,
    check_extension_property,
    shortcut_chord,
    triangle_candidates,
)
from shortcut_hull.fixtures import NOTCH, random_simple_polygon
from shortcut_hull.geometry import normalize_input, orientation
from shortcut_hull.shortcuts import crossing_components, generate_all_shortcuts, interleave, make_shortcut_set
from shortcut_hull.variants import chain_of

from conftest import chord, instance


def _overlap(P, e, f):
    # collinear segments sharing more than a point
    a, b, c, d = P.point(e.i), P.point(e.j), P.point(f.i), P.point(f.j)
    if orientation(a, b, c) or orientation(a, b, d):
        return False
    ax = 0 if a[0] != b[0] else 1
    lo1, hi1 = sorted((a[ax], b[ax]))
    lo2, hi2 = sorted((c[ax], d[ax]))
    return min(hi1, hi2) > max(lo1, lo2)


def compatible(P, e, f):
    """Whether two shortcuts can sit in one triangulation."""
    return not interleave(e.pair, f.pair) and not _overlap(P, e, f)


def random_noncrossing(rng, C):
    picked = []
    P = C.polygon
    for k in rng.permutation(len(C)):
        e = C.edges[int(k)]
        if all(compatible(P, e, f) for f in picked):
            picked.append(e)
        if rng.random() < 0.1:
            break
    return picked


def test_square_cdt_size(sq):
    P, chain, C = sq
    E = build_enrichment(chain, C, "cdt")
    assert len(E.edges) == chain.m + (chain.m - 3) == 17


def test_notch_candidates(notch):
    P, chain, C = notch
    E = build_enrichment(chain, C, Strategy.FULL)
    apexes = lambda i, j: sorted(chain.pindex(t.apex) for t in triangle_candidates(E, *chord(chain, i, j)))
    assert apexes(1, 4) == [2, 3]
    assert apexes(1, 3) == [2]
    degenerate = [t for t in triangle_candidates(E, *chord(chain, 0, 5)) if t.degenerate]
    assert chain.position(1) in {t.apex for t in degenerate}
    assert all(t.area2 == 0 for t in degenerate)


def test_full_contains_every_valid_pp_chord(notch):
    P, chain, C = notch
    E = build_enrichment(chain, C, "full")
    for e in C:
        assert shortcut_chord(chain, e) in E.index
    assert any(a < 4 for a, b in E.edges if b - a > 1)  # box-corner chords present


def test_component_interval_all_pairs(notch):
    P, chain, _ = notch
    C = make_shortcut_set(P, chain, [(1, 3), (2, 4)])
    E = build_enrichment(chain, C, "component")
    for pair in [(1, 3), (2, 4), (1, 4)]:
        assert chord(chain, *pair) in E.index
    assert E.strategy == Strategy.COMPONENT
    assert build_enrichment(chain, C).strategy == Strategy.COMPONENT


def test_cdt_rejects_crossings(notch):
    P, chain, C = notch
    with pytest.raises(CDTWithCrossings):
        build_enrichment(chain, C, "cdt")


def test_default_strategy_without_crossings(sq):
    assert build_enrichment(sq[1], sq[2]).strategy == Strategy.CDT


def test_extension_examples(sq, notch):
    P, chain, C = sq
    E = build_enrichment(chain, C, "cdt")
    assert check_extension_property(E, C.edges).success
    P, chain, C = notch
    full = build_enrichment(chain, C, "full")
    assert check_extension_property(full, [C.get((1, 4))]).success
    comp = build_enrichment(chain, make_shortcut_set(P, chain, [(1, 3), (2, 4)]), "component")
    assert check_extension_property(comp, [C.get((1, 3))]).success


def test_candidates_tile_their_pocket(rng):
    for _ in range(15):
        P = random_simple_polygon(rng, int(rng.integers(4, 12)))
        chain = chain_of(P)
        E = build_enrichment(chain, generate_all_shortcuts(P, chain), "full")
        for t, (a, b) in enumerate(E.edges):
            for r in range(E.offsets[t], E.offsets[t + 1]):
                k = int(E.apex[r])
                assert chain.pocket_area2(a, b) == (
                    chain.pocket_area2(a, k) + chain.pocket_area2(k, b) + chain.triangle_area2(a, k, b)
                )
                assert E.area2[r] == chain.triangle_area2(a, k, b) >= 0
                assert bool(E.degenerate[r]) == (E.area2[r] == 0)


def test_strategy_nesting(rng):
    for _ in range(20):
        P = random_simple_polygon(rng, int(rng.integers(4, 12)))
        chain = chain_of(P)
        C = generate_all_shortcuts(P, chain)
        keep = random_noncrossing(rng, C)
        Cn = make_shortcut_set(P, chain, [e.pair for e in keep])
        if crossing_components(Cn).h:
            continue
        full = set(build_enrichment(chain, Cn, "full").edges)
        comp = set(build_enrichment(chain, Cn, "component").edges)
        cdt = set(build_enrichment(chain, Cn, "cdt").edges)
        assert cdt <= comp <= full


def test_component_size_bound(rng):
    # |C+| stays within a small multiple of chi_hat^2 + n
    for _ in range(20):
        P = random_simple_polygon(rng, int(rng.integers(6, 20)))
        chain = chain_of(P)
        C = generate_all_shortcuts(P, chain)
        chi = crossing_components(C).chi_hat
        E = build_enrichment(chain, C, "component")
        assert len(E.edges) <= 2 * (chi * chi + chain.m)


@pytest.mark.parametrize("strategy", ["full", "cdt", "component"])
def test_extension_on_random_subsets(rng, strategy):
    for _ in range(25):
        P = random_simple_polygon(rng, int(rng.integers(4, 12)))
        chain = chain_of(P)
        C = generate_all_shortcuts(P, chain)
        if strategy == "cdt":
            C = make_shortcut_set(P, chain, [e.pair for e in random_noncrossing(rng, C)])
            if crossing_components(C).h:
                continue
        E = build_enrichment(chain, C, strategy)
        for _ in range(10):
            sub = random_noncrossing(rng, C)
            res = check_extension_property(E, sub)
            assert res.success, res.witness
            assert sum(chain.triangle_area2(*t) for t in res.triangles) == chain.area2()
