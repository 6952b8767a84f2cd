"""Command-line front end.

Subcommands: verify, solve-bpp, solve-fixed-point, solve-pbvp, reproduce.
Exit codes: 0 success / everything verified, 1 a violation or solver failure
was found (the emitted report carries a machine-readable witness), 2 the
input could not be loaded or parsed.  Reports are JSON with sorted keys and
no timestamps, so identical invocations produce byte-identical output.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import corpus
from .bpp_solver import (
    check_cardinality,
    check_equivalence_theorem,
    enumerate_bpps,
    iterate_orbit,
    solve_bpp,
    x_t2_a_set,
)
from .cyclic_contraction import (
    CyclicMapTable,
    load_gauge_pair,
    load_map,
    verify_g_cyclic_contraction,
    verify_t2_preserves_edges,
)
from .errors import (
    BetaNotContractive,
    ConditionIvViolated,
    EvaluationFailure,
    GaugeClassViolation,
    HypothesisViolated,
    InstanceFormatError,
    InvalidPsi,
    MonotonicityBroken,
    NoConvergence,
    NotLowerSolution,
    OutOfDomain,
    ParamOutOfRange,
    ProxigraphError,
    SideMismatch,
    UnknownPoint,
)
from .fixed_point import (
    PairMaps,
    PsiGauge,
    apriori_bound,
    check_uniqueness_regime,
    solve_common_fixed_point,
    verify_g_psi_contraction,
)
from .metric_graph import (
    SCHEMA_VERSION,
    FiniteMetricGraph,
    check_property_star,
    component_of,
    has_property_uc,
    is_g_chebyshev,
    is_sharp_proximal,
    pair_distance,
)
from .pbvp import (
    GridFunction,
    RhsFunction,
    TimeGrid,
    is_lower_solution,
    solve_common_pbvp,
    solve_pbvp,
)

# load-time failures exit 2; anything raised while a check or solve is
# running exits 1 with the witness in the report
_INPUT_ERRORS = (InstanceFormatError, UnknownPoint, SideMismatch,
                 ParamOutOfRange, OutOfDomain, InvalidPsi)

_VIOLATION_SLUGS = {
    HypothesisViolated: "hypothesis_violated",
    NoConvergence: "no_convergence",
    GaugeClassViolation: "gauge_class_violation",
    BetaNotContractive: "beta_not_contractive",
    NotLowerSolution: "not_lower_solution",
    ConditionIvViolated: "condition_iv_violated",
    MonotonicityBroken: "monotonicity_broken",
    EvaluationFailure: "evaluation_failure",
}


def _plain(obj):
    """Recursively coerce to JSON-encodable builtins."""
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)) and not isinstance(obj, bool):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, (frozenset, set)):
        return sorted(_plain(v) for v in obj)
    if isinstance(obj, (tuple, list)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    return obj


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps(_plain(doc), sort_keys=True, indent=2) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _violation_exit(exc: ProxigraphError, out: str | None) -> int:
    slug = "violation"
    for klass, name in _VIOLATION_SLUGS.items():
        if isinstance(exc, klass):
            slug = name
            break
    doc = {"schema": SCHEMA_VERSION, "error": slug, "message": str(exc)}
    witness = getattr(exc, "witness", None)
    if witness is not None:
        doc["witness"] = witness
    _emit(doc, out)
    return 1


def _read_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InstanceFormatError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"{path} is not valid JSON: {exc}") from None


def _parse_inline(text: str, what: str):
    """A flag value that is either a JSON document or a plain number."""
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        try:
            return float(text)
        except ValueError:
            raise InstanceFormatError(f"{what} must be JSON or a number, got {text!r}") from None


def _check_doc(result) -> dict:
    doc = {"ok": bool(result)}
    if result.witness is not None:
        doc["witness"] = result.witness
    return doc


# ----- verify -----------------------------------------------------------


def _cmd_verify(args) -> int:
    space = FiniteMetricGraph.from_json(args.instance, strict=args.strict)
    geom = pair_distance(space)
    report: dict = {
        "schema": SCHEMA_VERSION,
        "d_ab": geom.d_ab,
        "n_points": len(space.ids),
        "predicates": {
            "sharp_proximal": _check_doc(is_sharp_proximal(space, geom)),
            "property_uc": _check_doc(has_property_uc(space, geom)),
            "g_chebyshev": _check_doc(is_g_chebyshev(space, geom)),
            "star_union": _check_doc(check_property_star(space)),
            "star_a": _check_doc(check_property_star(space, within=space.side_a())),
            "star_b": _check_doc(check_property_star(space, within=space.side_b())),
        },
    }
    failed = False
    if args.map:
        tmap = load_map(args.map, strict=args.strict)
        tmap.validate(space)
        report["t2_preserves_edges"] = _check_doc(verify_t2_preserves_edges(space, tmap))
        if args.gauges:
            phi1, phi2 = load_gauge_pair(args.gauges, strict=args.strict)
            tol = 0.0 if args.strict_inequality else args.tol
            try:
                con = verify_g_cyclic_contraction(space, tmap, phi1, phi2,
                                                  tol=tol, all_pairs=args.all_pairs)
            except GaugeClassViolation as exc:
                return _violation_exit(exc, args.out)
            report["contraction"] = {
                "holds": con.holds,
                "all_pairs": args.all_pairs,
                "checked_pairs": con.checked_pairs,
                "violations": [
                    {"x": x, "y": y, "lhs": l, "rhs": r}
                    for x, y, l, r in con.violations
                ],
            }
            failed = not con.holds
    elif args.gauges:
        raise InstanceFormatError("--gauges needs --map")
    if args.require_predicates:
        failed = failed or not all(p["ok"] for p in report["predicates"].values())
    report["verified"] = not failed
    _emit(report, args.out)
    return 1 if failed else 0


# ----- solve-bpp --------------------------------------------------------


def _cmd_solve_bpp(args) -> int:
    space = FiniteMetricGraph.from_json(args.instance, strict=args.strict)
    tmap = load_map(args.map, strict=args.strict)
    tmap.validate(space)
    checks = not args.skip_hypothesis_checks
    try:
        if args.gauges and checks:
            phi1, phi2 = load_gauge_pair(args.gauges, strict=args.strict)
            con = verify_g_cyclic_contraction(space, tmap, phi1, phi2)
            if not con.holds:
                x, y, lhs, rhs = con.violations[0]
                raise HypothesisViolated("cyclic contraction bound",
                                         (x, y, lhs, rhs))
        result = solve_bpp(space, tmap, args.x0, tol=args.tol,
                           max_iter=args.max_iter, check_hypotheses=checks)
        trace = iterate_orbit(space, tmap, args.x0, tol=args.tol,
                              max_iter=args.max_iter)
    except ProxigraphError as exc:
        if isinstance(exc, _INPUT_ERRORS):
            raise
        return _violation_exit(exc, args.out)
    _emit({
        "schema": SCHEMA_VERSION,
        "x0": args.x0,
        "points": list(trace.points),
        "gaps": list(trace.gaps),
        "stop_reason": trace.stop_reason,
        "bpp": result.bpp,
        "achieved_gap": result.achieved_gap,
        "iterations": result.iterations,
        "component": sorted(result.component),
    }, args.out)
    return 0


# ----- solve-fixed-point ------------------------------------------------


def _cmd_solve_fixed_point(args) -> int:
    space = FiniteMetricGraph.from_json(args.instance, strict=args.strict)
    t1 = _read_json(args.t1).get("map")
    t2 = _read_json(args.t2).get("map")
    if not isinstance(t1, dict) or not isinstance(t2, dict):
        raise InstanceFormatError("map documents need a 'map' object")
    pair = PairMaps.for_space(space, t1, t2)
    psi_doc = _read_json(args.psi)
    psi_doc.pop("schema", None)
    psi = PsiGauge.from_dict(psi_doc)
    checks = not args.skip_hypothesis_checks
    try:
        if checks:
            rep = verify_g_psi_contraction(space, pair, psi,
                                           strengthened=args.strengthened)
            if not rep.holds:
                first = (rep.violations or rep.edge_violations)[0]
                raise HypothesisViolated("psi contraction bound", first)
        point, trace = solve_common_fixed_point(
            space, pair, psi, args.x0, tol=args.tol, max_iter=args.max_iter,
            check_hypotheses=checks)
    except ProxigraphError as exc:
        if isinstance(exc, _INPUT_ERRORS):
            raise
        return _violation_exit(exc, args.out)
    gaps = list(trace.gaps)
    d0 = gaps[0] if gaps else 0.0
    curve = [apriori_bound(d0, psi(d0), n) for n in range(len(gaps))]
    residual = max(space.d(point, pair.t1[point]),
                   space.d(point, pair.t2[pair.t1[point]]))
    _emit({
        "schema": SCHEMA_VERSION,
        "x0": args.x0,
        "fixed_point": point,
        "points": list(trace.points),
        "gaps": gaps,
        "apriori": curve,
        "residual": residual,
        "stop_reason": trace.stop_reason,
        "uniqueness_regime": check_uniqueness_regime(space),
    }, args.out)
    return 0


# ----- solve-pbvp -------------------------------------------------------


def _parse_w0(text: str, grid: TimeGrid) -> GridFunction:
    if text.startswith("const:"):
        try:
            return GridFunction.constant(grid, float(text[6:]))
        except ValueError:
            pass
    raise InstanceFormatError(f"--w0 must look like const:VALUE, got {text!r}")


def _cmd_solve_pbvp(args) -> int:
    rhs_doc = _parse_inline(args.rhs, "--rhs")
    if not isinstance(rhs_doc, dict):
        raise InstanceFormatError("--rhs must be a JSON object with a 'kind'")
    f = RhsFunction.from_dict(rhs_doc)
    f2 = None
    if args.f2:
        f2_doc = _parse_inline(args.f2, "--f2")
        if not isinstance(f2_doc, dict):
            raise InstanceFormatError("--f2 must be a JSON object with a 'kind'")
        f2 = RhsFunction.from_dict(f2_doc)
    h_spec = _parse_inline(args.h, "--h")
    grid = TimeGrid(period=args.T, n=args.N)
    w0 = _parse_w0(args.w0, grid)
    try:
        if f2 is None:
            u, report = solve_pbvp(f, args.alpha, h_spec, w0, tol=args.tol,
                                   max_iter=args.max_iter,
                                   check_lower=not args.skip_lower_check)
        else:
            u, report = solve_common_pbvp(f, f2, args.alpha, h_spec, w0,
                                          tol=args.tol, max_iter=args.max_iter,
                                          check_lower=not args.skip_lower_check)
    except ProxigraphError as exc:
        if isinstance(exc, _INPUT_ERRORS):
            raise
        return _violation_exit(exc, args.report)
    doc = {
        "schema": SCHEMA_VERSION,
        "n": args.N,
        "period": args.T,
        "alpha": args.alpha,
        "beta": report.beta,
        "iterations": report.iterations,
        "sup_norm": u.sup_norm(),
        "periodicity_residual": u.periodicity_residual(),
        "ode_residual": report.ode_residual,
        "ode_residual_periodic": report.ode_residual_periodic,
        "max_ratio": report.max_ratio,
        "final_increment": report.final_increment,
    }
    if args.out:
        with open(args.out, "w") as fh:
            fh.write("t,u\n")
            for t, v in zip(grid.nodes, u.values):
                fh.write(f"{t:.17g},{v:.17g}\n")
    else:
        doc["solution"] = {"t": grid.nodes, "u": u.values}
    _emit(doc, args.report)
    return 0


# ----- reproduce --------------------------------------------------------


def _check(name, measured, expected, ok, source):
    return {"name": name, "measured": measured, "expected": expected,
            "pass": bool(ok), "source": source}


def _close(a, b, tol):
    return abs(a - b) <= tol


def _reproduce_ex22(params) -> list[dict]:
    inst = corpus.build("ex22_kappa", **params)
    sp, tm = inst.space, inst.tmap
    exp = inst.expected
    fx, gy = exp["probe_pair"]
    lhs = sp.d(tm(fx), tm(gy))
    dxy = sp.d(fx, gy)
    con = verify_g_cyclic_contraction(sp, tm, inst.phi1, inst.phi2)
    con_all = verify_g_cyclic_contraction(sp, tm, inst.phi1, inst.phi2,
                                          all_pairs=True)
    nb, nc, eq = check_cardinality(sp, tm)
    arith = "closed-form distance arithmetic"
    return [
        _check("probe_image_distance", lhs, exp["probe_image_distance"],
               _close(lhs, exp["probe_image_distance"], 1e-12), arith),
        _check("probe_distance", dxy, exp["probe_distance"],
               _close(dxy, exp["probe_distance"], 1e-12), arith),
        _check("probe_expands", lhs > dxy, True, lhs > dxy, arith),
        _check("edge_restricted_holds", con.holds, True, con.holds,
               "sweep over edge-eligible pairs"),
        _check("all_pairs_fails", not con_all.holds, True, not con_all.holds,
               "sweep over every cross pair"),
        _check("cardinality", [nb, nc], [exp["bpp_count"], exp["component_count"]],
               eq and nb == exp["bpp_count"] and nc == exp["component_count"],
               "exhaustive scan and component count"),
    ]


def _reproduce_ex33(params) -> list[dict]:
    inst = corpus.build("ex33_dyadic_l1", **params)
    sp, tm = inst.space, inst.tmap
    exp = inst.expected
    bp = sorted(enumerate_bpps(sp, tm))
    con = verify_g_cyclic_contraction(sp, tm, inst.phi1, inst.phi2)
    excesses = sorted({round(l - r, 12) for _, _, l, r in con.violations})
    seeds_ok = True
    gaps_ok = True
    for s in sp.side_a():
        res = solve_bpp(sp, tm, s)
        seeds_ok = seeds_ok and res.bpp == exp["bpp_ids"][0]
        tr = iterate_orbit(sp, tm, s)
        g = np.array(tr.gaps)
        gaps_ok = gaps_ok and bool(np.all(np.diff(g) <= 1e-15))
        gaps_ok = gaps_ok and abs(g[-1] - 1.0) <= 1e-12
    eq = check_equivalence_theorem(sp, tm, inst.phi1, inst.phi2,
                                   check_hypotheses=False)
    clauses = [eq.weakly_connected_a, eq.orbits_merge, eq.at_most_one_bpp]
    return [
        _check("bpp_ids", bp, exp["bpp_ids"], bp == exp["bpp_ids"],
               "exhaustive proximity scan"),
        _check("bpp_coords", sp.coords[bp[0]], list(exp["bpp_coords"]),
               sp.coords[bp[0]] == tuple(exp["bpp_coords"]),
               "construction coordinates"),
        _check("orbits_reach_bpp", seeds_ok, True, seeds_ok,
               "orbit iteration from every seed"),
        _check("gaps_monotone_to_floor", gaps_ok, True, gaps_ok,
               "orbit gap sequences"),
        _check("violation_count", len(con.violations), exp["violation_count"],
               len(con.violations) == exp["violation_count"],
               "sweep over edge-eligible pairs"),
        _check("violation_excess", excesses, [exp["violation_excess"]],
               excesses == [exp["violation_excess"]],
               "deepest-level redirect arithmetic"),
        _check("equivalence_clauses", clauses, list(exp["equivalence_clauses"]),
               clauses == list(exp["equivalence_clauses"]),
               "clause evaluation with the truncation-broken bound gate disabled"),
    ]


def _reproduce_ex35(params) -> list[dict]:
    inst = corpus.build("ex35_not_bpo", **params)
    sp, tm = inst.space, inst.tmap
    exp = inst.expected
    bp = enumerate_bpps(sp, tm)
    comp = component_of(sp, exp["chain_seed"])
    nb, nc, card_eq = check_cardinality(sp, tm, check_hypotheses=False)
    esc = solve_bpp(sp, tm, exp["chain_seed"], check_hypotheses=False)
    star = bool(check_property_star(sp))
    return [
        _check("bpp_ids", sorted(bp), exp["bpp_ids"],
               sorted(bp) == exp["bpp_ids"], "exhaustive proximity scan"),
        _check("chain_component_misses_bpps", sorted(bp & comp), [],
               not (bp & comp), "weak component walk"),
        _check("cardinality_mismatch", [nb, nc, card_eq],
               [exp["bpp_count"], exp["component_count"], False],
               (nb, nc, card_eq) == (exp["bpp_count"], exp["component_count"], False),
               "exhaustive scan and component count"),
        _check("x_set_is_bpp_set", sorted(x_t2_a_set(sp, tm)), exp["bpp_ids"],
               sorted(x_t2_a_set(sp, tm)) == exp["bpp_ids"],
               "squared-map edge scan"),
        _check("escape_target", esc.bpp, exp["escape_target"],
               esc.bpp == exp["escape_target"],
               "orbit iteration with the seed gate disabled"),
        _check("union_star_fails", star, False, star is False,
               "edge transitivity sweep"),
    ]


def _reproduce_ex41(params) -> list[dict]:
    inst = corpus.build("ex41_fixed_point", **params)
    sp, pair, psi = inst.space, inst.pair, inst.psi
    exp = inst.expected
    ver = verify_g_psi_contraction(sp, pair, psi)
    ver_s = verify_g_psi_contraction(sp, pair, psi, strengthened=True)
    point, trace = solve_common_fixed_point(sp, pair, psi, inst.seed)
    gaps = list(trace.gaps)
    d0 = gaps[0] if gaps else 0.0
    under = all(g <= apriori_bound(d0, psi(d0), n) + 1e-12
                for n, g in enumerate(gaps))
    residual = max(sp.d(point, pair.t1[point]),
                   sp.d(point, pair.t2[pair.t1[point]]))
    regime = check_uniqueness_regime(sp)
    return [
        _check("psi_contraction_holds", ver.holds, True, ver.holds,
               "pointwise rate sweep"),
        _check("psi_contraction_strengthened", ver_s.holds, True, ver_s.holds,
               "ordered-pair rate sweep"),
        _check("fixed_point", point, exp["fixed_point"],
               point == exp["fixed_point"], "alternating orbit"),
        _check("residual", residual, exp["residual_cap"],
               residual <= exp["residual_cap"], "direct distance evaluation"),
        _check("gaps_under_apriori", under, True, under,
               "geometric tail bound"),
        _check("uniqueness_regime", regime, exp["uniqueness_regime"],
               regime == exp["uniqueness_regime"], "connectivity scan"),
    ]


def _reproduce_ex53(params) -> list[dict]:
    inst = corpus.build("ex53_pbvp", **params)
    exp = inst.expected
    u, rep = solve_pbvp(inst.f, inst.alpha, inst.h_spec, inst.w0, tol=inst.tol)
    lower_minus = bool(is_lower_solution(inst.f, inst.w0))
    wplus = GridFunction.constant(inst.grid, 1.0)
    lower_plus = bool(is_lower_solution(inst.f, wplus))
    quad = "split trapezoid quadrature"
    return [
        _check("beta", rep.beta, exp["beta"],
               _close(rep.beta, exp["beta"], 1e-12), "sup-ratio arithmetic"),
        _check("sup_norm", u.sup_norm(), exp["sup_norm_cap"],
               u.sup_norm() <= exp["sup_norm_cap"], quad),
        _check("periodicity_residual", u.periodicity_residual(),
               exp["periodicity_cap"],
               u.periodicity_residual() <= exp["periodicity_cap"], quad),
        _check("max_ratio", rep.max_ratio, exp["ratio_cap"],
               rep.max_ratio <= exp["ratio_cap"], "successive increment norms"),
        _check("monotone_from_lower_solution", all(rep.monotone_steps), True,
               all(rep.monotone_steps), "pointwise orbit comparison"),
        _check("lower_solution_minus_one", lower_minus,
               exp["lower_solution_minus_one"],
               lower_minus == exp["lower_solution_minus_one"],
               "difference-quotient check"),
        _check("lower_solution_plus_one", lower_plus,
               exp["lower_solution_plus_one"],
               lower_plus == exp["lower_solution_plus_one"],
               "difference-quotient check"),
    ]


_REPRODUCERS = {
    "ex22_kappa": _reproduce_ex22,
    "ex33_dyadic_l1": _reproduce_ex33,
    "ex35_not_bpo": _reproduce_ex35,
    "ex41_fixed_point": _reproduce_ex41,
    "ex53_pbvp": _reproduce_ex53,
}


def _cmd_reproduce(args) -> int:
    if args.example_id not in _REPRODUCERS:
        raise ParamOutOfRange(
            f"unknown example id {args.example_id!r}; "
            f"known: {', '.join(corpus.EXAMPLE_IDS)}")
    params = {}
    for item in args.params or ():
        key, sep, value = item.partition("=")
        if not sep:
            raise ParamOutOfRange(f"--params entries look like key=value, got {item!r}")
        try:
            params[key] = int(value)
        except ValueError:
            raise ParamOutOfRange(f"parameter {key!r} needs an integer, got {value!r}") from None
    checks = _REPRODUCERS[args.example_id](params)
    ok = all(c["pass"] for c in checks)
    _emit({
        "schema": SCHEMA_VERSION,
        "example_id": args.example_id,
        "params": params,
        "checks": checks,
        "all_pass": ok,
    }, args.out)
    return 0 if ok else 1


# ----- parser -----------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="proxigraph",
        description="verify contraction structure and solve proximity, "
                    "fixed-point, and periodic boundary problems on finite "
                    "metric graphs")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("--strict", action="store_true",
                       help="reject unknown fields in JSON inputs")
        p.add_argument("--out", default=None,
                       help="write the JSON report here instead of stdout")

    p = sub.add_parser("verify", help="check instance structure and the "
                                      "contraction inequality")
    p.add_argument("--instance", required=True)
    p.add_argument("--map", default=None)
    p.add_argument("--gauges", default=None)
    p.add_argument("--all-pairs", action="store_true",
                   help="sweep every cross pair instead of edge-eligible ones")
    p.add_argument("--strict-inequality", action="store_true",
                   help="allow no slack when comparing the two sides")
    p.add_argument("--require-predicates", action="store_true",
                   help="exit 1 unless every hypothesis predicate holds")
    p.add_argument("--tol", type=float, default=1e-9)
    common(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("solve-bpp", help="iterate the cyclic map to a best "
                                         "proximity point")
    p.add_argument("--instance", required=True)
    p.add_argument("--map", required=True)
    p.add_argument("--gauges", default=None)
    p.add_argument("--x0", required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--max-iter", type=int, default=10_000)
    p.add_argument("--skip-hypothesis-checks", action="store_true")
    common(p)
    p.set_defaults(func=_cmd_solve_bpp)

    p = sub.add_parser("solve-fixed-point", help="alternate two maps to their "
                                                 "common fixed point")
    p.add_argument("--instance", required=True)
    p.add_argument("--t1", required=True)
    p.add_argument("--t2", required=True)
    p.add_argument("--psi", required=True)
    p.add_argument("--x0", required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--max-iter", type=int, default=10_000)
    p.add_argument("--strengthened", action="store_true",
                   help="pre-verify the rate bound over ordered pairs")
    p.add_argument("--skip-hypothesis-checks", action="store_true")
    common(p)
    p.set_defaults(func=_cmd_solve_fixed_point)

    p = sub.add_parser("solve-pbvp", help="iterate the periodic integral "
                                          "operator from a lower solution")
    p.add_argument("--rhs", required=True, help="JSON right-hand side spec")
    p.add_argument("--f2", default=None,
                   help="second right-hand side; switches to the common solve")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--h", required=True,
                   help="JSON comparison-function spec or a number")
    p.add_argument("--T", type=float, default=1.0)
    p.add_argument("--N", type=int, default=201)
    p.add_argument("--w0", default="const:0", help="initial iterate, const:VALUE")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-iter", type=int, default=10_000)
    p.add_argument("--skip-lower-check", action="store_true")
    p.add_argument("--out", default=None, help="write the solution CSV here")
    p.add_argument("--report", default=None,
                   help="write the JSON report here instead of stdout")
    p.add_argument("--strict", action="store_true")
    p.set_defaults(func=_cmd_solve_pbvp)

    p = sub.add_parser("reproduce", help="rebuild a bundled example and "
                                         "compare against its expected results")
    p.add_argument("example_id")
    p.add_argument("--params", nargs="*", default=[],
                   help="builder parameters as key=value")
    common(p)
    p.set_defaults(func=_cmd_reproduce)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _INPUT_ERRORS as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return 2
    except ProxigraphError as exc:
        return _violation_exit(exc, getattr(args, "out", None))


if __name__ == "__main__":
    sys.exit(main())
