import json

import pytest

from shortcut_hull.app import (
    SchemaError,
    ScaleOverflow,
    TooFewPoints,
    apply_orientation_weights,
    build_mst_polygon,
    clusters,
    emit_svg,
    instance_from_dict,
    parse_instance,
    read_report,
    report_dict,
    write_report,
)
from shortcut_hull.cli import run
from shortcut_hull.fixtures import FLASK, NOTCH, SQ
from shortcut_hull.geometry import normalize_input, signed_area2
from shortcut_hull.hull import HullWithHoles, verify_hull
from shortcut_hull.shortcuts import generate_all_shortcuts, make_shortcut_set
from shortcut_hull.variants import chain_of, solve_holes


def write(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(data if isinstance(data, str) else json.dumps(data))
    return str(path)


@pytest.fixture
def notch_file(tmp_path):
    raw = NOTCH[-1:] + NOTCH[:-1]
    return write(tmp_path, "notch.json", {"polygon": raw, "shortcuts": "all", "lambda": 0.5})


def test_parse_notch(notch_file):
    inst = parse_instance(notch_file)
    assert inst.polygon.n == 8 and inst.shortcuts == "all"
    assert inst.polygon.vertices[0] == (0, 3)
    # the raw vertex 0 was (0, 0), now index 7
    assert inst.index_map[0] == 7


def test_parse_wkt(tmp_path):
    inst = parse_instance(write(tmp_path, "sq.wkt", "POLYGON((0 0, 0 2, 2 2, 2 0, 0 0))"))
    assert inst.polygon.vertices == normalize_input(SQ).vertices


def test_schema_errors(tmp_path):
    with pytest.raises(SchemaError) as err:
        parse_instance(write(tmp_path, "bad.json", {"polygon": SQ, "lambda": 1.5}))
    assert err.value.path == "/lambda"
    with pytest.raises(SchemaError):
        instance_from_dict({"polygon": SQ, "points": SQ})
    with pytest.raises(SchemaError):
        parse_instance(write(tmp_path, "junk.json", "{not json"))


def test_scale_overflow():
    with pytest.raises(ScaleOverflow):
        instance_from_dict({"polygon": [[0, 0], [0, 2e9], [2e9, 0]]})
    inst = instance_from_dict({"polygon": [[0, 0], [0, 0.25], [0.25, 0.25], [0.25, 0]], "coordinate_scale": 2})
    assert inst.polygon.point(1) == (25, 25)


def test_orientation_weights():
    P = normalize_input([(0, 0), (0, 4), (1, 1), (4, 0)])
    C = generate_all_shortcuts(P, chain_of(P))
    W = apply_orientation_weights(C, {"angles_deg": [0, 90], "gamma": 1})
    for e in W:
        a, b = P.point(e.i), P.point(e.j)
        if abs(b[0] - a[0]) == abs(b[1] - a[1]):
            assert e.weight == pytest.approx(2.0)
        elif a[0] == b[0] or a[1] == b[1]:
            assert e.weight == 1.0
        else:
            assert 1.0 < e.weight < 2.0
    S = apply_orientation_weights(C, {"angles_deg": [0, 90], "strict": True})
    assert all(e.j - e.i == 1 or P.point(e.i)[0] == P.point(e.j)[0] or P.point(e.i)[1] == P.point(e.j)[1] for e in S)
    assert (0, 2) in C and (0, 2) not in S


def test_strict_hulls_stay_on_orientations():
    raw = [(0, 6), (2, 6), (3, 4), (4, 6), (6, 6), (6, 0), (4, 0), (3, 2), (2, 0), (0, 0)]
    P = normalize_input(raw)
    chain = chain_of(P)
    C = apply_orientation_weights(generate_all_shortcuts(P, chain), {"angles_deg": [0, 90], "strict": True})
    for lam in (0.2, 0.5, 0.8):
        hull = solve_holes(P, C, lam, chain=chain).hull
        for ring in hull.rings:
            for u, v in zip(ring, ring[1:] + ring[:1]):
                a, b = P.point(u), P.point(v)
                assert (u - v) % P.n in (1, P.n - 1) or a[0] == b[0] or a[1] == b[1]


def test_mst_polygon():
    P = build_mst_polygon([(0, 0), (2, 0), (0, 2), (2, 2)])
    assert P.n == 6 and signed_area2(P.vertices) == 0
    assert build_mst_polygon([(0, 0), (1, 1), (2, 2)]).n == 4
    with pytest.raises(TooFewPoints):
        build_mst_polygon([(1, 1)])


def test_point_clusters():
    pts = [(0, 0), (2, 0), (0, 2), (2, 2), (9, 9), (10, 9)]
    P = build_mst_polygon(pts)
    C = generate_all_shortcuts(P, chain_of(P))
    sol = solve_holes(P, C, 0.8)
    assert verify_hull(sol.hull, P, C).ok
    rings = clusters(sol.hull)
    assert len(rings) == 1
    coords = {P.point(i) for i in rings[0]}
    assert coords == {(0, 0), (2, 0), (0, 2), (2, 2)}


@pytest.mark.parametrize("raw, lam", [(NOTCH, 0.5), (FLASK, 0.51), (SQ, 0.5)])
def test_svg_layers(tmp_path, raw, lam):
    P = normalize_input(raw)
    chain = chain_of(P)
    C = generate_all_shortcuts(P, chain)
    sol = solve_holes(P, C, lam, chain=chain)
    path = tmp_path / "out.svg"
    emit_svg(P, C, sol.hull, str(path), chain.box)
    text = path.read_text()
    assert text.startswith("<svg") and 'id="shortcuts"' in text and 'id="polygon"' in text
    holes = text.split('id="holes"')[1]
    assert holes.count("<path") == len(sol.hull.holes)


def test_report_round_trip(tmp_path):
    P = normalize_input(FLASK)
    chain = chain_of(P)
    C = generate_all_shortcuts(P, chain)
    sol = solve_holes(P, C, 0.51, chain=chain)
    data = report_dict(sol, P, C, {"n": P.n})
    path = tmp_path / "r.json"
    write_report(data, path)
    back = read_report(path)
    for key in ("eq1_cost", "internal_cost", "perimeter", "area", "lambda"):
        assert back[key] == data[key]
    rings = {r["kind"]: r["indices"] for r in back["rings"]}
    hull = HullWithHoles(P, back["rings"][0]["indices"], [r["indices"] for r in back["rings"] if r["kind"] == "hole"])
    assert verify_hull(hull, P, C).ok and "outer" in rings


def test_cli_examples(tmp_path, notch_file, capsys):
    report = tmp_path / "r.json"
    assert run(["solve", notch_file, "--lambda", "0.5", "--report", str(report)]) == 0
    data = json.loads(report.read_text())
    assert data["eq1_cost"] == pytest.approx(10.5)
    assert set(data["stats"]) >= {"n", "shortcuts", "enrichment_edges", "chi_hat", "triangle_candidates", "runtime_ms"}
    assert run(["solve", notch_file, "--lambda", "0.25", "--max-edges", "3"]) == 2
    assert run(["verify", notch_file, "--lambda", "0.5"]) == 0
    assert "match" in capsys.readouterr().out


def test_cli_flags_and_errors(tmp_path, notch_file):
    assert run(["solve", notch_file, "--no-holes", "--svg", str(tmp_path / "n.svg")]) == 0
    assert (tmp_path / "n.svg").exists()
    assert run(["solve", notch_file, "--lambda", "0.25", "--max-bends", "4"]) == 0
    assert run(["solve", notch_file, "--enrichment", "cdt"]) == 3
    assert run(["sweep", notch_file, "--sweep", "0.01", "--report", str(tmp_path / "s.json")]) == 0
    assert len(json.loads((tmp_path / "s.json").read_text())["regimes"]) == 2
    bad = write(tmp_path, "bad.json", {"polygon": SQ, "lambda": 1.5})
    assert run(["solve", bad]) == 3
    bow = write(tmp_path, "bow.json", {"polygon": [[0, 0], [2, 2], [2, 0], [0, 2]]})
    assert run(["solve", bow]) == 3
    assert run(["solve", str(tmp_path / "missing.json")]) == 3
    assert run(["frobnicate"]) == 3
    pts = write(tmp_path, "pts.json", {"points": [[0, 0], [2, 0], [0, 2], [2, 2]], "lambda": 0.8})
    assert run(["points", pts, "--report", str(tmp_path / "p.json")]) == 0
    assert json.loads((tmp_path / "p.json").read_text())["clusters"]


def test_cli_user_pairs_follow_input_order(tmp_path):
    # pairs refer to the vertex order as given in the file
    raw = NOTCH[-1:] + NOTCH[:-1]
    path = write(tmp_path, "n.json", {"polygon": raw, "shortcuts": [[2, 5]], "lambda": 0.5})
    out = tmp_path / "r.json"
    assert run(["solve", path, "--report", str(out)]) == 0
    assert json.loads(out.read_text())["eq1_cost"] == pytest.approx(10.5)
