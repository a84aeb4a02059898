"""Plain-data and text renderings of results.

Both renderings carry the same numbers; rationals appear as ``"p/q"`` strings.
"""

from __future__ import annotations

from .filtration import CocycleReport, Filtration, FiltrationReport, MartingaleReport
from .holonomy import HolonomyReport, HolonomyTrace, ScanResult
from .measure import FinProbSpace, RandomVariable, format_rational as fr
from .strategy import AdmissibilityVerdict, StrategyReport


def rv(f: RandomVariable, space: FinProbSpace) -> dict[str, str]:
    return {p: fr(v) for p, v in zip(space.points, f.values)}


def rv_text(f: RandomVariable, space: FinProbSpace) -> str:
    return "{" + ", ".join(f"{p}: {fr(v)}" for p, v in zip(space.points, f.values)) + "}"


def validation_data(report: FiltrationReport) -> dict:
    return {
        "ok": report.ok,
        "problems": list(report.problems),
        "arrows": [
            {"arrow": a.arrow_id, "shape_ok": a.shape_ok, "null_preserving": a.null_preserving,
             "message": a.message}
            for a in report.arrows
        ],
    }


def validation_text(report: FiltrationReport) -> str:
    lines = [f"{'arrow':<8} {'shape':<6} {'null-preserving':<16} note"]
    for a in report.arrows:
        lines.append(f"{a.arrow_id:<8} {_yn(a.shape_ok):<6} {_yn(a.null_preserving):<16} {a.message}")
    lines += [f"problem: {p}" for p in report.problems]
    lines.append("verdict: " + ("valid" if report.ok else "INVALID"))
    return "\n".join(lines)


def _yn(flag):
    return "ok" if flag else "FAIL"


def distortion_data(filt: Filtration, values: dict[str, RandomVariable]) -> dict:
    out = {}
    for aid, d in values.items():
        a = filt.category.arrow(aid)
        out[aid] = {"from": a.src, "to": a.dst, "space": d.space_id, "dF": rv(d, filt.space(a.src))}
    return out


def distortion_text(filt: Filtration, values: dict[str, RandomVariable]) -> str:
    lines = []
    for aid, d in values.items():
        a = filt.category.arrow(aid)
        lines.append(f"dF({aid}) on F({a.src}) = {rv_text(d, filt.space(a.src))}")
    return "\n".join(lines)


def _trace_rows(filt: Filtration, trace: HolonomyTrace):
    objs = trace.path.objects(filt.category)
    rows = []
    for k, h in enumerate(trace.h):
        space = filt.space(objs[k])
        row = {"k": k + 1, "arrow": trace.path.arrows[k], "object": objs[k], "h": rv(h, space)}
        if trace.pulled[k] is not None:
            row["pulled"] = rv(trace.pulled[k], space)
        rows.append(row)
    return rows


def holonomy_data(filt: Filtration, trace: HolonomyTrace) -> dict:
    base = filt.space(trace.path.source)
    return {
        "loop": list(trace.path.arrows),
        "base": trace.path.source,
        "hol": rv(trace.hol, base),
        "trace": _trace_rows(filt, trace),
    }


def holonomy_text(filt: Filtration, trace: HolonomyTrace) -> str:
    base = filt.space(trace.path.source)
    lines = [f"loop: ({', '.join(trace.path.arrows)}) based at {trace.path.source}"]
    for row in reversed(_trace_rows(filt, trace)):
        k = row["k"]
        if "pulled" in row:
            lines.append(f"  E(F({row['arrow']}))(h_{k + 1}) = {_dict_text(row['pulled'])}")
        lines.append(f"  h_{k} on F({row['object']}) = {_dict_text(row['h'])}")
    lines.append(f"Hol = {rv_text(trace.hol, base)}")
    return "\n".join(lines)


def _dict_text(d):
    return "{" + ", ".join(f"{k}: {v}" for k, v in d.items()) + "}"


def holonomy_report_data(filt: Filtration, r: HolonomyReport) -> dict:
    base = filt.space(r.loop.base)
    return {
        "loop": list(r.loop.arrows),
        "base": r.loop.base,
        "hol": rv(r.hol, base),
        "p_neq_1": fr(r.p_neq_1),
        "p_gt_1": fr(r.p_gt_1),
        "p_ge_1": fr(r.p_ge_1),
        "p_dev_eps": fr(r.p_dev_eps),
        "epsilon": fr(r.epsilon),
        "classification": r.classification.value,
    }


def scan_data(filt: Filtration, result: ScanResult) -> dict:
    return {
        "base": result.base,
        "max_len": result.max_len,
        "loops": [holonomy_report_data(filt, r) for r in result.reports],
        "verdict": result.verdict.value,
        "truncated": result.truncated,
    }


def scan_text(filt: Filtration, result: ScanResult) -> str:
    lines = [f"{'loop':<20} {'P(Hol!=1)':<10} {'P(Hol>1)':<10} {'P(Hol>=1)':<10} "
             f"{'P(|Hol-1|>eps)':<15} class   Hol"]
    for r in result.reports:
        d = holonomy_report_data(filt, r)
        lines.append(
            f"{','.join(r.loop.arrows):<20} {d['p_neq_1']:<10} {d['p_gt_1']:<10} {d['p_ge_1']:<10} "
            f"{d['p_dev_eps']:<15} {d['classification']:<7} {_dict_text(d['hol'])}"
        )
    if not result.reports:
        lines.append("(no loops)")
    tail = " (search truncated)" if result.truncated else ""
    if result.verdict.value == "trivial":
        lines.append(f"verdict: trivial, no loop effect found up to length {result.max_len}{tail}")
    else:
        lines.append(f"verdict: {result.verdict.value}{tail}")
    return "\n".join(lines)


def strategy_data(space: FinProbSpace, r: StrategyReport, verdict: AdmissibilityVerdict | None = None) -> dict:
    out = {
        "mode": r.mode,
        "position": rv(r.position.values, space),
        "wealth": rv(r.wealth, space),
        "expected_wealth": fr(r.expected_wealth),
        "p_strict_gain": fr(r.p_strict_gain),
        "min_wealth": fr(r.min_wealth),
        "flagged_points": [space.points[k] for k in r.flagged],
        "idealized_reverse": r.idealized,
        "admissible": r.admissible,
        "admissible_ab_arbitrage": r.admissible_ab_arbitrage,
    }
    if verdict is not None:
        out["admissibility"] = {
            "observable": verdict.observable,
            "executable": verdict.executable,
            "composable": verdict.composable,
            "self_financing": verdict.self_financing,
            "reverse_executable": verdict.reverse_executable,
            "non_executable": list(verdict.non_executable),
        }
    return out


def strategy_text(space: FinProbSpace, r: StrategyReport, verdict: AdmissibilityVerdict | None = None) -> str:
    d = strategy_data(space, r, verdict)
    lines = [
        f"mode: {d['mode']}",
        f"position = {_dict_text(d['position'])}",
        f"wealth V = {_dict_text(d['wealth'])}",
        f"E[V] = {d['expected_wealth']}",
        f"P(V > 1) = {d['p_strict_gain']}",
        f"min V = {d['min_wealth']}",
    ]
    if d["flagged_points"]:
        lines.append("no reverse execution at Hol = 0: " + ", ".join(d["flagged_points"]))
    if d["idealized_reverse"]:
        lines.append("reverse legs use the idealized reciprocal 1/Hol")
    if verdict is None:
        lines.append("admissibility: not declared")
    else:
        a = d["admissibility"]
        lines.append("admissibility: " + ", ".join(f"{k}={v}" for k, v in a.items() if k != "non_executable"))
        lines.append(f"admissible = {d['admissible']}, admissible AB arbitrage = {d['admissible_ab_arbitrage']}")
    return "\n".join(lines)


def martingale_data(filt: Filtration, report: MartingaleReport) -> dict:
    rows = []
    for c in report.checks:
        a = filt.category.arrow(c.arrow_id)
        space = filt.space(a.src)
        rows.append({"arrow": c.arrow_id, "lhs": rv(c.transported, space), "rhs": rv(c.expected, space),
                     "ok": c.ok})
    return {"ok": report.ok, "arrows": rows}


def martingale_text(filt: Filtration, report: MartingaleReport) -> str:
    lines = []
    for row in martingale_data(filt, report)["arrows"]:
        lines.append(f"{row['arrow']:<8} E(F(i))(f_t) = {_dict_text(row['lhs'])}  "
                     f"f_s*dF(i) = {_dict_text(row['rhs'])}  {_yn(row['ok'])}")
    lines.append("verdict: " + ("F-martingale" if report.ok else "not an F-martingale"))
    return "\n".join(lines)


def cocycle_data(filt: Filtration, reports: list[CocycleReport]) -> dict:
    rows = []
    for r in reports:
        space = filt.space(filt.category.arrow(r.i).src)
        rows.append({"i": r.i, "j": r.j, "composite": rv(r.composite, space),
                     "transported": rv(r.transported, space), "residual": rv(r.residual, space),
                     "ok": r.ok})
    return {"ok": all(r.ok for r in reports), "pairs": rows}


def cocycle_text(filt: Filtration, reports: list[CocycleReport]) -> str:
    lines = []
    for row in cocycle_data(filt, reports)["pairs"]:
        lines.append(f"dF({row['j']}.{row['i']}) = {_dict_text(row['composite'])}  "
                     f"residual = {_dict_text(row['residual'])}  {_yn(row['ok'])}")
    if not reports:
        lines.append("(no composable pairs)")
    return "\n".join(lines)
