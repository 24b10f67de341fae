"""Regenerate the bundled regression fixtures in src/pvop/fixtures/.

Objectives are written here as readable strings and stored as term lists.
Run from the repository root:  python3 tools/build_fixtures.py
"""
from __future__ import annotations

import json
import math
from pathlib import Path

from pvop.poly import VectorPolynomial

OUT = Path(__file__).resolve().parents[1] / "src" / "pvop" / "fixtures"

ORTHANT = {"kind": "polyhedron", "A": [[1, 0], [0, 1]], "b": [0, 0]}
WEDGE_ABOVE_DIAGONAL = {"kind": "polyhedron", "A": [[1, 0], [-1, 1]], "b": [0, 0]}  # x2 >= x1 >= 0

FIXTURES = [
    {
        "name": "empty_weak_solution_set",
        "objectives": ["x1^3 - x1^2*x2 - 3*x1 + 2*x2 + 1", "-x2^2 - x1*x2 + x1 - 1"],
        "set": WEDGE_ABOVE_DIAGONAL,
        "note": "Both leading forms are negative at (1, 2), a recession direction, so 0 is not "
                "weakly efficient for the recession problem and no feasible point is weakly "
                "Pareto efficient; both objectives are unbounded below.",
        "expected": {
            "strong": "yes", "strong_reason": "weak_sol_set_empty", "weak": "yes",
            "per_component": ["empty", "empty"], "zero_is_weak_pareto": False,
            "f_bounded_below_implied": "no",
            "leading_values": {"at": [1, 2], "values": [-1, -6]},
            "precheck": "empty_certified",
            "front_on_boundary": {"half_widths": [10, 100, 1000], "resolutions": [101, 101, 101],
                                  "cells": 2},
        },
    },
    {
        "name": "axis_minimizers_orthant",
        "objectives": ["x1^3 - x2 + 1", "x2^3 - x1 - 1"],
        "set": ORTHANT,
        "note": "Each cubic leading form vanishes on a half-axis of the orthant, so neither "
                "recession minimum is attained only at 0 and the problem is not strongly regular.",
        "expected": {"per_component": ["has_nonzero", "has_nonzero"], "strong": "no",
                     "precheck": None},
    },
    {
        "name": "r0_wedge",
        "objectives": ["x1^2 + x2^2", "x2^2"],
        "set": WEDGE_ABOVE_DIAGONAL,
        "note": "The Euler vector (2x1^2 + 2x2^2, 2x2^2) is strictly positive at every nonzero "
                "cone point, so the complementarity problem has only the zero solution.",
        "expected": {"r0": True, "strong": "yes", "strong_reason": "weak_sol_set_is_zero",
                     "per_component": ["only_zero", "only_zero"],
                     "bounded_front_radius": "finite"},
    },
    {
        "name": "squares_orthant",
        "objectives": ["x1^2", "x2^2"],
        "set": ORTHANT,
        "note": "At (0, 1) the Euler vector is (0, 2) and every directional vector (0, 2 w2) is "
                "outside the open negative orthant: a nonzero complementarity solution.",
        "expected": {"r0": False, "r0_witness": [0, 1], "r0_conditions": [0, 2],
                     "precheck": None, "strong": "no"},
    },
    {
        "name": "unbounded_pareto_wedge",
        "objectives": ["x1^2 - x2 - 1", "x2^3 + 1"],
        "set": WEDGE_ABOVE_DIAGONAL,
        "window": {"lower": [0, 0], "upper": [3, 3], "resolution": 61},
        "note": "The second recession minimum is attained only at 0, so Pareto solutions exist, "
                "but the whole half-line x1 = 0 is Pareto efficient: the Pareto set is unbounded.",
        "expected": {"per_component": ["has_nonzero", "only_zero"], "strong": "no",
                     "pareto_contains_line": {"coordinate": 1, "value": 0},
                     "bounded_front_radius": "none"},
    },
    {
        "name": "unattained_infimum_plane",
        "objectives": ["(x1^4*x2^4 - 1)^2 + x1^4", "(x1^2*x2^2 - 1)^2 + x1^2"],
        "set": {"kind": "polyhedron", "A": [], "b": [], "witness": [1, 1]},
        "note": "Both objectives are nonnegative with infimum 0 approached along x1*x2 = 1, "
                "x1 -> 0, but never attained: there is no weak Pareto solution, although no "
                "recession direction certifies it.",
        "expected": {
            "precheck": None, "strong": "no", "weak": "no",
            "solve": [{"lambda": [1, 1], "x0": [1, 1],
                       "status": ["unbounded_descent", "unknown"]}],
            "front_on_boundary": {"half_widths": [5, 10, 20], "resolutions": [51, 201, 801],
                                  "cells": 2},
        },
    },
    {
        "name": "isolated_sublevel_point",
        "objectives": ["-x2^2 - 1", "-x1^3 + x2 + 1"],
        "set": {"kind": "polyhedron", "A": [[1, 0], [-1, 0], [0, 1]], "b": [0, -1, 2]},
        "window": {"lower": [0, 2], "upper": [1, 5], "resolution": 61},
        "note": "K = [0,1] x [2,inf). The first objective is unbounded below, yet (1, 2) is "
                "Pareto efficient; its sublevel set is the single point (1, 2).",
        "expected": {
            "per_component": ["empty", "has_nonzero"], "strong": "no",
            "pareto_includes": [[1, 2]],
            "solve": [{"lambda": [1, 1], "x0": [1, 2], "status": ["found"], "point": [1, 2]},
                      {"lambda": [1, 1], "x0": [1, 2], "sublevel": False,
                       "status": ["unbounded_descent"]}],
        },
    },
    {
        "name": "exponential_boundary",
        "objectives": ["x2^3 - x1^2 - x1*x2 + 1", "x2^2 - x1 - 1"],
        "set": {"kind": "custom", "constraints": ["x1 - 1", "x2 - x1 + 1", "exp(x1 - 1) - x2"],
                "declared_cone": {"A": [[1, 0], [-1, 1]]}, "witness": [1, 1]},
        "window": {"lower": [1, 0], "upper": [4, math.e ** 3], "resolution": 200},
        "note": "Non-convex, non-semialgebraic K with asymptotic cone x2 >= x1 >= 0. Both "
                "recession minima are attained only at 0: Pareto solutions exist and the weak "
                "Pareto set is compact.",
        "expected": {
            "strong": "yes", "strong_reason": "weak_sol_set_is_zero",
            "per_component": ["only_zero", "only_zero"], "r0": True,
            "solve": [{"lambda": lam, "x0": [1, 1], "status": ["found"], "oracle_check": True}
                      for lam in ([1, 1], [1, 2], [5, 1])],
            "bounded_front_radius": "finite",
        },
    },
    {
        "name": "opposite_wedge",
        "objectives": ["x1^3", "-x1^2 + x2"],
        "set": {"kind": "polyhedron", "A": [[0, 1], [1, -1]], "b": [0, 0]},
        "window": {"lower": [0, 0], "upper": [3, 3], "resolution": 31},
        "note": "K = {x1 >= x2 >= 0} is its own asymptotic cone. The first recession minimum is "
                "attained only at 0, the second is unbounded below, and the half-line x2 = 0 "
                "lies in the Pareto set.",
        "expected": {"per_component": ["only_zero", "empty"], "strong": "no", "weak": "no",
                     "pareto_contains_line": {"coordinate": 2, "value": 0}},
    },
    {
        "name": "corner_minimum",
        "objectives": ["x1*x2 + 1", "x1*x2 + x1 - 1"],
        "set": {"kind": "polyhedron", "A": [[1, 0], [0, 1]], "b": [1, 1]},
        "window": {"lower": [1, 1], "upper": [3, 3], "resolution": 41},
        "note": "Leading forms x1*x2 vanish on both axes, so no regularity holds, yet the Pareto "
                "and weak Pareto sets are both exactly {(1, 1)}.",
        "expected": {
            "per_component": ["has_nonzero", "has_nonzero"], "strong": "no", "weak": "no",
            "pareto_equals": [[1, 1]], "weak_equals": [[1, 1]],
            "solve": [{"lambda": lam, "x0": [2, 2], "status": ["found"], "point": [1, 1],
                       "oracle_check": True} for lam in ([1, 1], [1, 2], [5, 1])],
        },
    },
]


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    for spec in FIXTURES:
        f = VectorPolynomial.parse(spec["objectives"], 2)
        data = {"name": spec["name"], "note": spec["note"], "n": f.n, "s": f.s,
                "objectives": [c.to_terms() for c in f.components], "set": spec["set"]}
        if "window" in spec:
            data["window"] = spec["window"]
        data["expected"] = spec["expected"]
        path = OUT / f"{spec['name']}.json"
        path.write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
