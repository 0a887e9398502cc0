"""Command-line surface: ``solve``, ``sweep``, ``verify`` and ``points``.

Exit codes: 0 success, 1 verification mismatch, 2 no feasible hull,
3 invalid input.
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
import time

from .app import (
    EmptyShortcutSet,
    ScaleOverflow,
    SchemaError,
    TooFewPoints,
    apply_orientation_weights,
    build_mst_polygon,
    clusters,
    emit_svg,
    mapped_pairs,
    parse_instance,
    report_dict,
    write_report,
)
from .dp import NoHullExists, SolveConfig, solve_dp
from .enrichment import CDTWithCrossings, build_enrichment
from .geometry import InvalidPolygon
from .oracle import InstanceTooLarge, oracle_min_cost
from .shortcuts import crossing_components, generate_all_shortcuts, make_shortcut_set
from .variants import chain_of, lambda_sweep, solve_holes, solve_k_bends, solve_k_edges, solve_no_holes

EXIT_OK, EXIT_MISMATCH, EXIT_INFEASIBLE, EXIT_INVALID = 0, 1, 2, 3

log = logging.getLogger("shortcut_hull")


def _parser():
    p = argparse.ArgumentParser(prog="shortcut-hull", description="Optimal shortcut hulls of polygons.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("instance", help="instance JSON or WKT file")
        sp.add_argument("--lambda", dest="lam", type=float, default=None, help="perimeter weight in [0, 1]")
        sp.add_argument("--enrichment", choices=["full", "cdt", "component"], default=None)
        sp.add_argument("--report", default=None, help="write a JSON report here")
        sp.add_argument("--svg", default=None, help="write an SVG drawing here")
        sp.add_argument("-v", "--verbose", action="store_true")

    for name in ("solve", "points"):
        sp = sub.add_parser(name, help=f"{name} an instance")
        common(sp)
        sp.add_argument("--no-holes", action="store_true")
        sp.add_argument("--max-edges", type=int, default=None)
        sp.add_argument("--max-bends", type=int, default=None)
    sp = sub.add_parser("sweep", help="lambda sweep")
    common(sp)
    sp.add_argument("--sweep", dest="eps", type=float, default=0.01)
    sp = sub.add_parser("verify", help="compare the dynamic program with brute force")
    common(sp)
    return p


def _shortcuts(inst, P, chain):
    if inst.points is not None or inst.shortcuts == "all":
        C = generate_all_shortcuts(P, chain, inst.include_polygon_edges)
    else:
        C = make_shortcut_set(P, chain, mapped_pairs(inst), inst.include_polygon_edges)
    if inst.orientations:
        C = apply_orientation_weights(C, inst.orientations)
    return C


def _solve(args, inst, P, C, chain, lam):
    max_edges = args.max_edges if args.max_edges is not None else inst.max_edges
    max_bends = args.max_bends if args.max_bends is not None else inst.max_bends
    if args.no_holes or inst.mode == "no-holes":
        return solve_no_holes(P, C, lam, chain)
    if max_bends is not None:
        return solve_k_bends(P, C, lam, max_bends, args.enrichment, chain)
    if max_edges is not None:
        return solve_k_edges(P, C, lam, max_edges, args.enrichment, chain)
    return solve_holes(P, C, lam, args.enrichment, chain)


def _stats(P, C, sol, t0):
    stats = {"n": P.n, "shortcuts": len(C), "chi_hat": crossing_components(C).chi_hat}
    E = sol.enrichment
    if E is not None:
        stats["enrichment_edges"] = len(E)
        stats["triangle_candidates"] = E.candidate_count
    stats["runtime_ms"] = round((time.perf_counter() - t0) * 1000.0, 3)
    return stats


def _emit(args, P, C, sol, stats, extra=None):
    data = report_dict(sol, P, C, stats)
    if extra:
        data.update(extra)
    if args.report:
        write_report(data, args.report)
    if args.svg:
        emit_svg(P, C, sol.hull, args.svg, chain_of(P).box)
    r = sol.report
    print(f"eq1={r.eq1_cost:.6f} perimeter={r.perimeter:.6f} area={r.area:.6f} holes={r.hole_count} edges={r.edge_count} bends={r.bend_count}")


def _run(args):
    t0 = time.perf_counter()
    inst = parse_instance(args.instance)
    if args.command == "points" or inst.points is not None:
        if inst.points is None:
            raise SchemaError("/points", "the points command needs a point instance")
        P = build_mst_polygon(inst.points, inst.coordinate_scale)
    else:
        P = inst.polygon
    lam = inst.lam if args.lam is None else args.lam
    if not 0.0 <= lam <= 1.0:
        raise SchemaError("/lambda", "lambda must lie in [0, 1]")
    chain = chain_of(P)
    C = _shortcuts(inst, P, chain)

    if args.command == "verify":
        E = build_enrichment(chain, C, args.enrichment or "full")
        _, dp_cost = solve_dp(chain, E, SolveConfig(lam))
        ref = oracle_min_cost(chain, E, SolveConfig(lam))
        same = (dp_cost == ref) or (math.isfinite(ref) and abs(dp_cost - ref) <= 1e-9 * max(1.0, abs(ref)))
        print(f"dp={dp_cost!r} oracle={ref!r} {'match' if same else 'MISMATCH'}")
        return EXIT_OK if same else EXIT_MISMATCH

    if args.command == "sweep":
        sw = lambda_sweep(P, C, args.eps, args.enrichment, chain)
        for reg in sw.regimes:
            r = reg.solution.report
            print(f"[{reg.lo:.6f}, {reg.hi:.6f}] area={r.area:.6f} perimeter={r.perimeter:.6f} holes={r.hole_count}")
        for lo, hi in sw.transitions:
            print(f"transition in ({lo:.6f}, {hi:.6f})")
        if args.report:
            regimes = [
                {"lo": reg.lo, "hi": reg.hi, **report_dict(reg.solution, P, C)} for reg in sw.regimes
            ]
            write_report({"regimes": regimes, "transitions": [list(t) for t in sw.transitions]}, args.report)
        return EXIT_OK

    sol = _solve(args, inst, P, C, chain, lam)
    stats = _stats(P, C, sol, t0)
    extra = None
    if args.command == "points" or inst.points is not None:
        extra = {"clusters": [[list(p) for p in sol.hull.ring_coords(r)] for r in clusters(sol.hull)]}
    _emit(args, P, C, sol, stats, extra)
    return EXIT_OK


def run(argv=None):
    """Entry point; returns the process exit code."""
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return _run(args)
    except NoHullExists as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (SchemaError, ScaleOverflow, InvalidPolygon, CDTWithCrossings, EmptyShortcutSet, TooFewPoints,
            InstanceTooLarge, FileNotFoundError, ValueError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
