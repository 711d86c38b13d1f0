"""Query execution and deterministic report rendering for the CLI."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Any

from . import calculus, mpec, multimaps, oracle, plfunc
from .cones import frechet_normal_wrt, limiting_normal_wrt, proximal_normal_wrt
from .exactgeom import ConeH, ConeUnion, ConvexPoly, PolySet, PolyUnion, dd_convert
from .linalg import Vec, neg
from .verdicts import FAILS, HOLDS, UNKNOWN, RuleReport, TriVerdict

EXIT_OK = 0
EXIT_FAILS = 1
EXIT_UNKNOWN = 2
EXIT_INPUT = 3

QUALS_STRICT = "strict"
QUALS_DIAGNOSTIC = "diagnostic"


# -- rendering ---------------------------------------------------------------


def _num(x: Fraction, decimal: bool):
    return {"exact": str(x), "decimal": float(x)} if decimal else str(x)


def _vec(v: Vec, decimal: bool):
    return [_num(x, decimal) for x in v]


def _rows(rows, decimal: bool):
    return [[_vec(a, decimal), _num(b, decimal)] for a, b in rows]


def render(obj: Any, decimal: bool = False):
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, float):
        return "inf" if math.isinf(obj) else obj
    if isinstance(obj, Fraction):
        return _num(obj, decimal)
    if isinstance(obj, tuple) and all(isinstance(x, Fraction) for x in obj):
        return _vec(obj, decimal)
    if isinstance(obj, ConeH):
        if obj.empty:
            return {"empty": True}
        dd_convert(obj)
        return {
            "ineqs": [_vec(a, decimal) for a in obj.ineqs],
            "eqs": [_vec(e, decimal) for e in obj.eqs],
            "rays": [_vec(r, decimal) for r in obj.rays],
            "lineality": [_vec(l, decimal) for l in obj.lineality],
        }
    if isinstance(obj, ConeUnion):
        return {"parts": [render(p, decimal) for p in obj.parts]}
    if isinstance(obj, ConvexPoly):
        if obj.is_empty():
            return {"empty": True}
        return {
            "ineqs": _rows(obj.ineqs, decimal),
            "eqs": _rows(obj.eqs, decimal),
        }
    if isinstance(obj, (PolyUnion, PolySet)):
        key = "parts" if isinstance(obj, PolyUnion) else "pieces"
        items = obj.parts if isinstance(obj, PolyUnion) else obj.pieces
        return {key: [render(p, decimal) for p in items]}
    if isinstance(obj, TriVerdict):
        return {"verdict": obj.value, "certificate": render(obj.certificate, decimal)}
    if isinstance(obj, RuleReport):
        return {
            "rule": obj.rule_id,
            "lhs": render(obj.lhs, decimal),
            "rhs": render(obj.rhs, decimal),
            "qualifications": [
                [name, render(v, decimal)] for name, v in obj.qualifications
            ],
            "inclusion_holds": obj.inclusion_holds,
            "equality_holds": obj.equality_holds,
            "witness": render(obj.witness, decimal),
        }
    if isinstance(obj, multimaps.CoderivativeSlice):
        return {
            "base": [render(obj.base[0], decimal), render(obj.base[1], decimal)],
            "ystar": render(obj.ystar, decimal),
            "result": render(obj.result, decimal),
        }
    if isinstance(obj, plfunc.SubdiffResult):
        return {"kind": obj.kind, "value": render(obj.value, decimal)}
    if isinstance(obj, mpec.StationarityReport):
        return {
            "candidate": render(obj.candidate, decimal),
            "q1": render(obj.q1, decimal),
            "q2": render(obj.q2, decimal),
            "aubin_wrt_g": render(obj.aubin_wrt_g, decimal),
            "condition_with_coderivative": obj.condition_with_coderivative,
            "condition_objective_only": obj.condition_objective_only,
            "verdict": obj.verdict,
            "subdifferential": render(obj.diagnostics["subdifferential"], decimal),
            "coderivative_zero_slice": render(
                obj.diagnostics["coderivative_zero_slice"], decimal
            ),
            "objective_value": render(obj.diagnostics["objective_value"], decimal),
        }
    if isinstance(obj, dict):
        return {k: render(v, decimal) for k, v in sorted(obj.items())}
    if isinstance(obj, (list, tuple)):
        return [render(v, decimal) for v in obj]
    raise TypeError(f"cannot render {type(obj).__name__}")


# -- execution ---------------------------------------------------------------


def _verdict_code(v: TriVerdict) -> int:
    return {HOLDS: EXIT_OK, FAILS: EXIT_FAILS, UNKNOWN: EXIT_UNKNOWN}[v.value]


def _rule_code(report: RuleReport, quals_mode: str) -> int:
    base = EXIT_OK if report.inclusion_holds else EXIT_FAILS
    if quals_mode == QUALS_DIAGNOSTIC:
        return base
    if any(v.is_fails() for _, v in report.qualifications):
        return EXIT_FAILS
    if any(v.value == UNKNOWN for _, v in report.qualifications):
        return EXIT_UNKNOWN
    return base


def _wrt(objects, query, dim_source) -> ConvexPoly:
    if "wrt" in query:
        return objects[query["wrt"]]
    return ConvexPoly.whole_space(dim_source)


def run_query(
    objects: dict[str, Any],
    query: dict,
    quals_mode: str = QUALS_DIAGNOSTIC,
    cross_check: bool = False,
    decimal: bool = False,
) -> tuple[dict, int, int]:
    """Execute one query; returns (rendered result, exit code, oracle flags)."""
    op = query["op"]
    flags = 0

    if op == "normal-cone":
        omega: PolySet = objects[query["omega"]]
        wrt = _wrt(objects, query, omega.dim)
        point = objects[query["point"]]
        kind = query["kind"]
        if kind == "frechet":
            result = frechet_normal_wrt(omega, wrt, point)
        elif kind == "proximal":
            result = proximal_normal_wrt(omega, wrt, point)
        elif kind == "limiting":
            result = limiting_normal_wrt(omega, wrt, point)
        else:
            raise ValueError(f"unknown cone kind {kind!r}")
        if cross_check:
            flags += _probe_cone(omega, wrt, point, result)
        return {"cone": render(result, decimal)}, EXIT_OK, flags

    if op == "coderivative":
        F = objects[query["map"]]
        wrt = _wrt(objects, query, F.in_dim)
        sl = multimaps.coderivative_wrt(
            F, wrt, objects[query["x"]], objects[query["y"]], objects[query["ystar"]]
        )
        return {"slice": render(sl, decimal)}, EXIT_OK, flags

    if op == "subdiff":
        f = objects[query["func"]]
        wrt = _wrt(objects, query, f.dim)
        res = plfunc.subdiff_wrt(f, wrt, objects[query["point"]], query["kind"])
        return {"subdifferential": render(res, decimal)}, EXIT_OK, flags

    if op == "check-aubin":
        F = objects[query["map"]]
        wrt = _wrt(objects, query, F.in_dim)
        x, y = objects[query["x"]], objects[query["y"]]
        v = multimaps.aubin_wrt_check(F, wrt, x, y)
        out = {"aubin": render(v, decimal)}
        if cross_check:
            plan = oracle.SamplingPlan()
            ratio = oracle.aubin_ratio_probe(F, wrt, x, y, plan)
            out["sampled_ratio"] = render(ratio, decimal)
            if v.is_holds() and ratio > oracle.DIVERGENCE_SENTINEL:
                flags += 1
        return out, _verdict_code(v), flags

    if op == "check-lipschitz":
        f = objects[query["func"]]
        wrt = _wrt(objects, query, f.dim)
        v = plfunc.lipschitz_wrt_check(f, wrt, objects[query["point"]])
        return {"lipschitz": render(v, decimal)}, _verdict_code(v), flags

    if op in ("check-lqc", "check-normal-densed"):
        fn = (
            calculus.lqc_wrt_check
            if op == "check-lqc"
            else calculus.normal_densed_check
        )
        v = fn(
            objects[query["omega1"]],
            objects[query["omega2"]],
            objects[query["c1"]],
            objects[query["c2"]],
            objects[query["point"]],
        )
        return {"qualification": render(v, decimal)}, _verdict_code(v), flags

    if op == "rule-product":
        report = calculus.product_rule(
            objects[query["omega1"]],
            objects[query["c1"]],
            objects[query["omega2"]],
            objects[query["c2"]],
            objects[query["x1"]],
            objects[query["x2"]],
        )
        return {"report": render(report, decimal)}, _rule_code(report, quals_mode), flags

    if op == "rule-mixed-product":
        report = calculus.mixed_product_rule(
            objects[query["omega1"]],
            objects[query["c1"]],
            objects[query["omega2"]],
            objects[query["c2"]],
            query["n"],
            query["m"],
            query["s"],
            objects[query["point"]],
            query.get("pairing", calculus.PAIRING_PROOF),
        )
        return {"report": render(report, decimal)}, _rule_code(report, quals_mode), flags

    if op == "rule-intersection":
        report = calculus.intersection_rule(
            objects[query["omega1"]],
            objects[query["omega2"]],
            objects[query["c1"]],
            objects[query["c2"]],
            objects[query["point"]],
        )
        return {"report": render(report, decimal)}, _rule_code(report, quals_mode), flags

    if op == "rule-preimage":
        report = calculus.preimage_rule(
            objects[query["map"]],
            objects[query["theta"]],
            objects[query["wrt"]],
            objects[query["point"]],
        )
        return {"report": render(report, decimal)}, _rule_code(report, quals_mode), flags

    if op == "rule-sum":
        report = multimaps.sum_rule(
            objects[query["map1"]],
            objects[query["map2"]],
            objects[query["c1"]],
            objects[query["c2"]],
            objects[query["x"]],
            objects[query["y"]],
            objects[query["y1"]],
            objects[query["y2"]],
            objects[query["ystar"]],
            query.get("variant", multimaps.VARIANT_SEMICONTINUOUS),
        )
        return {"report": render(report, decimal)}, _rule_code(report, quals_mode), flags

    if op == "rule-chain":
        report = multimaps.chain_rule(
            objects[query["inner"]],
            objects[query["outer"]],
            objects[query["wrt"]],
            objects[query["x"]],
            objects[query["z"]],
            objects[query["y"]],
            objects[query["zstar"]],
            query.get("variant", multimaps.VARIANT_SEMICONTINUOUS),
        )
        return {"report": render(report, decimal)}, _rule_code(report, quals_mode), flags

    if op == "mpec-check":
        f = objects[query["f"]]
        G = objects[query["g"]]
        problem = mpec.MPECProblem(
            f.dim, G.out_dim, f, G, objects[query["c1"]], objects[query["c2"]]
        )
        report = mpec.stationarity_check(problem, objects[query["point"]])
        code = {
            mpec.NECESSARY_CONDITIONS_HOLD: EXIT_OK,
            mpec.CERTIFIED_NON_OPTIMAL: EXIT_FAILS,
            mpec.INCONCLUSIVE: EXIT_UNKNOWN,
        }[report.verdict]
        return {"report": render(report, decimal)}, code, flags

    raise ValueError(f"unknown operation {op!r}")


def _probe_cone(omega: PolySet, wrt: ConvexPoly, point: Vec, result) -> int:
    """Cross-check Fréchet membership of generators and their negations.

    The probe tests the Fréchet limsup property, so claims are made against
    the exact Fréchet cone at the point even when the query computed the
    limiting cone (whose extra generators are claimed non-members).
    """
    plan = oracle.SamplingPlan()
    union = result if isinstance(result, ConeUnion) else ConeUnion.single(result)
    if union.is_empty():
        return 0
    frechet = frechet_normal_wrt(omega, wrt, point)
    directions: list[Vec] = []
    for part in union.parts:
        directions.extend(part.rays)
        directions.extend(part.lineality)
        directions.extend(neg(r) for r in part.rays)
    flags = 0
    for d in directions:
        claimed = frechet.contains(d)
        verdict = oracle.frechet_membership_probe(omega, wrt, point, d, plan, claimed)
        if verdict == oracle.INCONSISTENT:
            flags += 1
    return flags
