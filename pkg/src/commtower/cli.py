"""Command-line front end.

Exit codes: 0 success (every requested target reached and re-verified),
1 a supplied object failed verification, 2 target not reached but the
result is verified, 3 a resource cap was hit, 4 invalid input.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import List, Optional

from . import config
from .circle import CircleSet, format_rational, parse_rational
from .errors import InvalidInput, ResourceExhausted

EXIT_OK, EXIT_UNVERIFIED, EXIT_SHORT, EXIT_RESOURCE, EXIT_INVALID = 0, 1, 2, 3, 4


class InputError(Exception):
    """Invalid input with a location (file, argument or JSON path)."""


def _ints(text: str, what: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"{what}: expected comma-separated integers, got {text!r}")


def _rational(text: str, what: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError, InvalidInput):
        raise InputError(f"{what}: expected a rational like 1/4, got {text!r}")


def load_json(path: str):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: cannot read: {exc.strerror}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}")


def _load(path: str, parse, what: str):
    data = load_json(path)
    try:
        return parse(data)
    except InvalidInput as exc:
        raise InputError(f"{path}: invalid {what}: {exc}")
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise InputError(f"{path}: invalid {what}: {exc!r}")


def _load_set(path: str) -> CircleSet:
    def parse(data):
        if isinstance(data, dict):
            for key in ("base", "set"):
                if key in data:
                    return CircleSet.from_json(data[key])
            raise InvalidInput("expected an interval list or an object with 'base' or 'set'")
        return CircleSet.from_json(data)
    return _load(path, parse, "interval set")


def emit(args, payload: dict, lines: List[str]):
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    if args.json:
        sys.stdout.write(text)
    else:
        for ln in lines:
            print(ln)


# commands --------------------------------------------------------------------------
def cmd_tower_build(args) -> int:
    from .towers import build_tower
    a = _ints(args.action, "--action")
    n = _ints(args.shape, "--shape")
    eps = _rational(args.eps, "--eps")
    kw = {}
    if args.arc_budget:
        if args.strategy == "generic":
            raise InputError("--arc-budget applies to skyscraper and hybrid strategies")
        kw["arc_budget"] = args.arc_budget
    cert = build_tower(a, n, eps, strategy=args.strategy, **kw)
    if not cert.recheck():
        raise AssertionError("certificate failed its re-check")
    emit(args, cert.to_json(), [
        f"tower measure {format_rational(cert.tower_measure)} (~{float(cert.tower_measure):.6f})",
        f"verified {cert.verified}, target {format_rational(cert.target)} met {cert.target_met}",
        f"base: {len(cert.base)} arcs"])
    return EXIT_OK if cert.target_met and cert.verified else EXIT_SHORT


def cmd_tower_verify(args) -> int:
    from .towers import verify_tower
    B = _load_set(args.base)
    a = _ints(args.action, "--action")
    n = _ints(args.shape, "--shape")
    ok, mu = verify_tower(a, B, n, exhaustive=args.exhaustive)
    emit(args, {"verified": ok, "measure": format_rational(mu), "shape": n, "action": a},
         [f"verified {ok}, tower measure {format_rational(mu)}"])
    return EXIT_OK if ok else EXIT_UNVERIFIED


def cmd_grid_max(args) -> int:
    from .lattice import DifferenceSet, brute_force_max, max_admissible
    N = _ints(args.box, "--box")
    D = _load(args.diffset, lambda d: DifferenceSet.from_json(d, dim=len(N)), "difference set")
    w = brute_force_max(D, N) if args.brute else max_admissible(D, N, args.node_budget)
    emit(args, w.to_json(), [f"M(N) = {format_rational(w.density)} optimal {w.optimal}",
                             f"cells: {len(w.cells)}"])
    return EXIT_OK if w.optimal else EXIT_SHORT


def cmd_grid_sandwich(args) -> int:
    from .lattice import LatticeGraph, sandwich
    g = _load(args.graph, LatticeGraph.from_json, "lattice graph")
    N = _ints(args.box, "--box")
    s = sandwich(g, N, args.node_budget)
    emit(args, s.to_json(), [f"lower {format_rational(s.lower)}  upper {format_rational(s.upper)}",
                             f"M(N) {format_rational(s.M)} optimal {s.witness.optimal}"])
    return EXIT_OK if s.witness.optimal else EXIT_SHORT


def cmd_grid_periodic(args) -> int:
    from .lattice import DifferenceSet, periodic_search
    L = _ints(args.period, "--period")
    D = _load(args.diffset, lambda d: DifferenceSet.from_json(d, dim=len(L)), "difference set")
    r = periodic_search(D, L, args.node_budget)
    emit(args, r.to_json(), [f"periodic density {format_rational(r.density)} optimal {r.optimal}"])
    return EXIT_OK if r.optimal else EXIT_SHORT


def cmd_graph_chromatic(args) -> int:
    from .graphs import (FiniteGraph, chromatic_number, circular_chromatic, clique_number,
                         fractional_chromatic)
    g = _load(args.graph, FiniteGraph.from_json, "graph")
    cf, cc = fractional_chromatic(g), circular_chromatic(g)
    out = {"omega": clique_number(g), "chi": chromatic_number(g), "chi_f": format_rational(cf),
           "chi_c": format_rational(cc), "star_extremal": cf == cc}
    emit(args, out, [f"{k} = {v}" for k, v in out.items()])
    return EXIT_OK


def cmd_graph_coloring_base(args) -> int:
    from .graphs import FiniteGraph, coloring_base
    g = _load(args.graph, FiniteGraph.from_json, "graph")
    b = coloring_base(g, _rational(args.delta, "--delta"))
    out = b.to_json()
    out["verified"] = b.check(g)
    emit(args, out, [f"A = {b.A}", f"phi = {[format_rational(p) for p in b.phi]}"])
    return EXIT_OK if out["verified"] else EXIT_UNVERIFIED


def _report_exit(rep) -> int:
    if not rep.all_verified:
        return EXIT_UNVERIFIED
    return EXIT_OK if rep.achieved_target else EXIT_SHORT


def _report_lines(rep) -> List[str]:
    return [f"measure {format_rational(rep.measure)} (~{float(rep.measure):.6f}) via {rep.route}",
            f"target {format_rational(rep.target)} achieved {rep.achieved_target}",
            "equations: " + ", ".join(f"{a}x={b}y:{'free' if ok else 'FAIL'}"
                                      for (a, b), ok in zip(rep.equations, rep.verified))]


def cmd_freeset_pair(args) -> int:
    from .freesets import free_set_pair
    rep = free_set_pair(args.c1, args.c2, _rational(args.delta, "--delta"), args.arc_budget)
    emit(args, rep.to_json(), _report_lines(rep))
    return _report_exit(rep)


def cmd_freeset_family(args) -> int:
    from .freesets import EquationFamily, family_free_set
    from .graphs import FiniteGraph
    coeffs = _ints(args.coeffs, "--coeffs")
    g = _load(args.graph, FiniteGraph.from_json, "graph")
    if g.n != len(coeffs):
        raise InputError(f"{args.graph}: graph has {g.n} vertices but {len(coeffs)} coefficients given")
    try:
        fam = EquationFamily(tuple(coeffs), g.edges)
    except InvalidInput as exc:
        raise InputError(f"--coeffs/--graph: {exc}")
    box = _ints(args.box, "--box") if args.box else None
    rep = family_free_set(fam, _rational(args.delta, "--delta"), box, args.arc_budget)
    emit(args, rep.to_json(), _report_lines(rep))
    return _report_exit(rep)


def cmd_freeset_verify(args) -> int:
    from .freesets import verify_free
    A = _load_set(args.set)
    ok = verify_free(A, args.c1, args.c2)
    emit(args, {"free": ok, "measure": format_rational(A.measure()), "c1": args.c1, "c2": args.c2},
         [f"{args.c1}x = {args.c2}y: {'free' if ok else 'not free'}, measure {format_rational(A.measure())}"])
    return EXIT_OK if ok else EXIT_UNVERIFIED


def cmd_suite_reproduce(args) -> int:
    from .suite import SECTIONS, reproduce
    sections = args.sections.split(",") if args.sections else None
    if sections:
        bad = [s for s in sections if s not in SECTIONS]
        if bad:
            raise InputError(f"--sections: unknown {bad}; choose from {sorted(SECTIONS)}")
    log = None if args.json else (lambda m: print(m, file=sys.stderr))
    summary = reproduce(args.out_dir, sections, log=log)
    lines = [f"{'HOLDS' if r['holds'] else 'SHORT'}  {r['claim']}: {r['observed']}"
             for r in summary["results"]]
    args.out = None
    emit(args, summary, lines)
    return EXIT_OK if all(r["holds"] for r in summary["results"]) else EXIT_SHORT


# parser ----------------------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output on stdout")
    common.add_argument("--out", help="also write the JSON result to this file")
    common.add_argument("--interval-budget", type=int,
                        help=f"global interval cap (default {config.DEFAULT_INTERVAL_CAP}, "
                             f"or ${config.ENV_INTERVAL_BUDGET})")
    common.add_argument("--node-budget", type=int, help="branch-and-bound node budget")
    common.add_argument("--time-budget", type=float, help="wall-clock seconds")

    p = argparse.ArgumentParser(prog="commtower", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="group", required=True)

    def leaf(group, name, func, help_):
        q = group.add_parser(name, parents=[common], help=help_)
        q.set_defaults(func=func)
        return q

    t = sub.add_parser("tower", help="towers for multiplication actions").add_subparsers(dest="cmd", required=True)
    q = leaf(t, "build", cmd_tower_build, "build and certify an n-tower")
    q.add_argument("--action", required=True, help="multipliers, e.g. 2,3")
    q.add_argument("--shape", required=True, help="tower shape n, e.g. 2,1")
    q.add_argument("--eps", required=True, help="target is 1 - eps")
    q.add_argument("--strategy", default="generic", choices=["generic", "skyscraper", "hybrid"])
    q.add_argument("--arc-budget", type=int, help="arc budget for skyscraper levels")
    q = leaf(t, "verify", cmd_tower_verify, "re-verify a tower base")
    q.add_argument("--base", required=True, help="certificate or interval-list JSON")
    q.add_argument("--action", required=True)
    q.add_argument("--shape", required=True)
    q.add_argument("--exhaustive", action="store_true", help="check every pair of levels")

    gr = sub.add_parser("grid", help="difference-avoiding sets in Z^d").add_subparsers(dest="cmd", required=True)
    q = leaf(gr, "max", cmd_grid_max, "max admissible subset of a box")
    q.add_argument("--diffset", required=True)
    q.add_argument("--box", required=True)
    q.add_argument("--brute", action="store_true", help="exhaustive oracle (<= 24 cells)")
    q = leaf(gr, "sandwich", cmd_grid_sandwich, "bounds on the limiting density")
    q.add_argument("--graph", required=True)
    q.add_argument("--box", required=True)
    q = leaf(gr, "periodic", cmd_grid_periodic, "best periodic admissible set")
    q.add_argument("--diffset", required=True)
    q.add_argument("--period", required=True)

    g = sub.add_parser("graph", help="graph parameters").add_subparsers(dest="cmd", required=True)
    q = leaf(g, "chromatic", cmd_graph_chromatic, "omega, chi, chi_f, chi_c")
    q.add_argument("--graph", required=True)
    q = leaf(g, "coloring-base", cmd_graph_coloring_base, "interval coloring base")
    q.add_argument("--graph", required=True)
    q.add_argument("--delta", default="0")

    f = sub.add_parser("freeset", help="equation-free sets on the circle").add_subparsers(dest="cmd", required=True)
    q = leaf(f, "pair", cmd_freeset_pair, "set free for c1 x = c2 y")
    q.add_argument("--c1", type=int, required=True)
    q.add_argument("--c2", type=int, required=True)
    q.add_argument("--delta", required=True)
    q.add_argument("--arc-budget", type=int)
    q = leaf(f, "family", cmd_freeset_family, "set free for a graph of equations")
    q.add_argument("--coeffs", required=True, help="1,c1,...,cd")
    q.add_argument("--graph", required=True, help="graph on coefficient indices")
    q.add_argument("--delta", required=True)
    q.add_argument("--box", help="grid box for the tower assembly")
    q.add_argument("--arc-budget", type=int)
    q = leaf(f, "verify", cmd_freeset_verify, "check c1 A and c2 A are disjoint")
    q.add_argument("--set", required=True)
    q.add_argument("--c1", type=int, required=True)
    q.add_argument("--c2", type=int, required=True)

    s = sub.add_parser("suite", help="reproduction battery").add_subparsers(dest="cmd", required=True)
    q = leaf(s, "reproduce", cmd_suite_reproduce, "run every check and write JSON artifacts")
    q.add_argument("--out-dir", default="artifacts")
    q.add_argument("--sections", help="comma-separated subset of sections")
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    overrides = {}
    try:
        if args.interval_budget is not None:
            overrides["interval_cap"] = args.interval_budget
        if args.node_budget is not None:
            overrides["node_budget"] = args.node_budget
        if args.time_budget is not None:
            overrides["time_budget"] = args.time_budget
        with config.limits(**overrides):
            return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except InvalidInput as exc:
        print(f"error: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ResourceExhausted as exc:
        print(f"error: resource exhausted: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
