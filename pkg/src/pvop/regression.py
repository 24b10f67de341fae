"""Checks an instance's ``expected`` block against fresh computations.

Recognised keys of ``expected`` (all optional):

``strong``, ``strong_reason``, ``weak``, ``per_component``,
``zero_is_weak_pareto``, ``f_bounded_below_implied``
    regularity report fields, compared as strings / booleans.
``leading_values``
    ``{"at": x, "values": v}``: the leading forms at ``x`` equal ``v`` exactly.
``r0``, ``r0_witness``, ``r0_conditions``
    R0 verdict; a witness direction that must occur among the R0 witnesses
    (compared after normalisation) and the exact Euler vector there.
``precheck``
    ``"empty_certified"`` or ``null``.
``solve``
    list of runs ``{"lambda", "x0", "sublevel", "status": [allowed...],
    "point", "point_tol", "oracle_check"}``.
``pareto_equals``, ``weak_equals``, ``pareto_includes``, ``pareto_contains_line``
    grid-oracle statements on the instance window; a line is
    ``{"coordinate": i (1-based), "value": v}``.
``bounded_front_radius``
    ``"finite"`` or ``"none"``.
``front_on_boundary``
    ``{"half_widths": [...], "resolutions": [...], "cells": c}``: on windows
    ``[-T, T]^n`` every weak front node lies within ``c`` cells of the boundary.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .constraints import asymptotic_cone, sample_base
from .instances import Instance
from .oracle import GridWindow, grid_front
from .poly import vector_leading_form
from .regularity import TOL_POS, analyze_regularity, wvcp_r0_check
from .solver import bounded_front_radius, precheck_emptiness, solve


@dataclass
class FixtureResult:
    name: str
    checks: list[tuple[str, bool, str]] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def add(self, label: str, ok: bool, detail: str = "") -> None:
        self.checks.append((label, bool(ok), detail))


def _contains(P, points, tol=1e-9) -> bool:
    """Every row of ``points`` occurs among the rows of ``P`` (within ``tol``)."""
    P = np.asarray(P, dtype=float)
    return all(len(P) and np.any(np.all(np.abs(P - np.asarray(q, dtype=float)) <= tol, axis=1))
               for q in points)


def _same_points(P, points, tol=1e-9) -> bool:
    return len(P) == len(points) and _contains(P, points, tol) and _contains(points, P, tol)


def run_fixture(inst: Instance, seed: int = 0, samples: int = 720,
                tol: float = TOL_POS) -> FixtureResult:
    start = time.perf_counter()
    exp = inst.expected
    out = FixtureResult(inst.name)
    f, K = inst.f, inst.K
    cone = asymptotic_cone(K)
    sample = sample_base(cone, samples, seed)
    report = analyze_regularity(f, cone=cone, sample=sample, tol=tol)

    if "strong" in exp:
        out.add("strong", report.strong.decision.value == exp["strong"], report.strong.decision.value)
    if "strong_reason" in exp:
        got = report.strong.reason.value if report.strong.reason else None
        out.add("strong_reason", got == exp["strong_reason"], str(got))
    if "weak" in exp:
        out.add("weak", report.weak.decision.value == exp["weak"], report.weak.decision.value)
    if "per_component" in exp:
        got = [v.value.value for v in report.per_component]
        out.add("per_component", got == exp["per_component"], str(got))
    if "zero_is_weak_pareto" in exp:
        got = report.zero_status.zero_is_weak_pareto
        out.add("zero_is_weak_pareto", got == exp["zero_is_weak_pareto"], str(got))
    if "f_bounded_below_implied" in exp:
        got = report.f_bounded_below_implied.value
        out.add("f_bounded_below_implied", got == exp["f_bounded_below_implied"], got)
    if "leading_values" in exp:
        x = np.asarray(exp["leading_values"]["at"], dtype=float)
        got = [h(x) for h in vector_leading_form(f)]
        out.add("leading_values", got == [float(v) for v in exp["leading_values"]["values"]], str(got))

    if any(k in exp for k in ("r0", "r0_witness", "r0_conditions")):
        r0 = wvcp_r0_check(f, cone, sample, tol)
        if "r0" in exp:
            out.add("r0", r0.is_r0 == exp["r0"], str(r0.is_r0))
        if "r0_witness" in exp:
            w = np.asarray(exp["r0_witness"], dtype=float)
            w = w / np.linalg.norm(w)
            match = [x for x in r0.witnesses if np.allclose(x, w, atol=1e-12)]
            out.add("r0_witness", bool(match), f"{len(r0.witnesses)} witnesses")
            if "r0_conditions" in exp and match:
                d = np.array(f.degrees, dtype=float)
                got = [float(v) for v in np.array([h(match[0]) for h in vector_leading_form(f)]) * d]
                out.add("r0_conditions", got == [float(v) for v in exp["r0_conditions"]], str(got))

    if "precheck" in exp:
        pre = precheck_emptiness(report)
        got = pre.status.value if pre else None
        out.add("precheck", got == exp["precheck"], str(got))

    for j, run in enumerate(exp.get("solve", [])):
        window = inst.window if run.get("oracle_check") else None
        res = solve(f, K, run.get("lambda"), run.get("x0"), seed=seed,
                    sublevel=run.get("sublevel", True), oracle_window=window)
        ok = res.status.value in run["status"]
        detail = res.status.value
        if ok and "point" in run:
            err = float(np.max(np.abs(res.point - np.asarray(run["point"]))))
            ok = err <= run.get("point_tol", 1e-6)
            detail += f", error {err:.2e}"
        if ok and run.get("oracle_check"):
            ok = res.certified is True
            detail += f", certified {res.certified}"
        out.add(f"solve[{j}] lambda={run.get('lambda')}", ok, detail)

    front = None
    if any(k in exp for k in ("pareto_equals", "weak_equals", "pareto_includes",
                              "pareto_contains_line")):
        front = grid_front(f, K, inst.window)
    if "pareto_equals" in exp:
        out.add("pareto_equals", _same_points(front.pareto_points, exp["pareto_equals"]),
                f"{len(front.pareto_points)} nodes")
    if "weak_equals" in exp:
        out.add("weak_equals", _same_points(front.weak_pareto_points, exp["weak_equals"]),
                f"{len(front.weak_pareto_points)} nodes")
    if "pareto_includes" in exp:
        out.add("pareto_includes", _contains(front.pareto_points, exp["pareto_includes"]), "")
    if "pareto_contains_line" in exp:
        spec = exp["pareto_contains_line"]
        i = spec["coordinate"] - 1
        line = front.points[np.abs(front.points[:, i] - spec["value"]) <= 1e-12]
        ok = len(line) > 0 and _contains(front.pareto_points, line)
        out.add("pareto_contains_line", ok, f"{len(line)} nodes on the line")

    if "bounded_front_radius" in exp:
        r = bounded_front_radius(f, K, report)
        got = "none" if r is None else "finite"
        out.add("bounded_front_radius", got == exp["bounded_front_radius"], str(r))

    if "front_on_boundary" in exp:
        spec = exp["front_on_boundary"]
        worst = []
        for T, res in zip(spec["half_widths"], spec["resolutions"]):
            window = GridWindow(-T * np.ones(f.n), T * np.ones(f.n), res)
            worst.append(float(grid_front(f, K, window).boundary_distance("weak").max()))
        out.add("front_on_boundary", all(w <= spec["cells"] for w in worst),
                f"max distance in cells {worst}")

    out.seconds = time.perf_counter() - start
    return out
