"""Instance files: JSON encoding of an objective, a constraint set and test metadata.

Example::

    {
      "name": "corner",
      "n": 2, "s": 2,
      "objectives": [[{"coef": 1.0, "exps": [1, 1]}, {"coef": 1.0, "exps": [0, 0]}],
                     [{"coef": 1.0, "exps": [1, 1]}, {"coef": 1.0, "exps": [1, 0]},
                      {"coef": -1.0, "exps": [0, 0]}]],
      "set": {"kind": "polyhedron", "A": [[1, 0], [0, 1]], "b": [1, 1]},
      "window": {"lower": [1, 1], "upper": [3, 3], "resolution": 41},
      "note": "free text",
      "expected": {...}
    }

Custom sets use ``{"kind": "custom", "constraints": ["exp(x1 - 1) - x2", ...],
"declared_cone": {"A": [[...]]}, "witness": [...]}``; each constraint means
``expression >= 0``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema
import numpy as np

from .constraints import Cone, ConstraintSet, CustomSet, Polyhedron
from .expr import ExprSyntaxError, parse_constraint
from .oracle import GridWindow
from .poly import Polynomial, VectorPolynomial


class InstanceError(ValueError):
    """Malformed instance file; the message carries the location."""


_MATRIX = {"type": "array", "items": {"type": "array", "items": {"type": "number"}}}
_VECTOR = {"type": "array", "items": {"type": "number"}}
_TERM = {
    "type": "object",
    "required": ["coef", "exps"],
    "additionalProperties": False,
    "properties": {"coef": {"type": "number"},
                   "exps": {"type": "array", "items": {"type": "integer", "minimum": 0}}},
}
SCHEMA = {
    "type": "object",
    "required": ["n", "s", "objectives", "set"],
    "properties": {
        "name": {"type": "string"},
        "note": {"type": "string"},
        "n": {"type": "integer", "minimum": 1},
        "s": {"type": "integer", "minimum": 1},
        "objectives": {"type": "array", "minItems": 1, "items": {"type": "array", "items": _TERM}},
        "set": {
            "oneOf": [
                {"type": "object", "required": ["kind", "A", "b"],
                 "properties": {"kind": {"const": "polyhedron"}, "A": _MATRIX, "b": _VECTOR,
                                "witness": _VECTOR}},
                {"type": "object", "required": ["kind", "constraints", "declared_cone", "witness"],
                 "properties": {"kind": {"const": "custom"},
                                "constraints": {"type": "array", "items": {"type": "string"}},
                                "declared_cone": {"type": "object", "required": ["A"],
                                                  "properties": {"A": _MATRIX}},
                                "witness": _VECTOR}},
            ]
        },
        "window": {"type": "object", "required": ["lower", "upper", "resolution"],
                   "properties": {"lower": _VECTOR, "upper": _VECTOR,
                                  "resolution": {"type": "integer", "minimum": 2}}},
        "expected": {"type": "object"},
    },
}


@dataclass
class Instance:
    name: str
    f: VectorPolynomial
    K: ConstraintSet
    window: GridWindow | None = None
    expected: dict[str, Any] = field(default_factory=dict)
    note: str = ""
    source: str = "<memory>"


def _load_set(spec: dict, n: int) -> ConstraintSet:
    if spec["kind"] == "polyhedron":
        A = np.asarray(spec["A"], dtype=float).reshape(-1, n) if spec["A"] else np.zeros((0, n))
        b = np.asarray(spec["b"], dtype=float)
        if A.shape[1] != n:
            raise InstanceError(f"polyhedron matrix has {A.shape[1]} columns, expected {n}")
        return Polyhedron(A, b, spec.get("witness"))
    cone_rows = spec["declared_cone"]["A"]
    cone = Cone(np.asarray(cone_rows, dtype=float).reshape(-1, n) if cone_rows else np.zeros((0, n)))
    exprs = []
    for j, text in enumerate(spec["constraints"]):
        try:
            exprs.append(parse_constraint(text))
        except ExprSyntaxError as exc:
            raise InstanceError(f"set.constraints[{j}]: {exc}") from exc
    return CustomSet(n, exprs, cone, spec["witness"])


def instance_from_dict(data: dict, source: str = "<memory>") -> Instance:
    try:
        jsonschema.validate(data, SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise InstanceError(f"{source}: schema violation at {where}: {exc.message}") from exc
    n, s = data["n"], data["s"]
    if len(data["objectives"]) != s:
        raise InstanceError(f"{source}: {len(data['objectives'])} objectives, but s = {s}")
    comps = []
    for i, terms in enumerate(data["objectives"]):
        bad = [t["exps"] for t in terms if len(t["exps"]) != n]
        if bad:
            raise InstanceError(f"{source}: objectives[{i}] has exponent vector {bad[0]} "
                                f"of length != n = {n}")
        p = Polynomial.from_terms(n, terms)
        if p.degree < 1:
            raise InstanceError(f"{source}: objectives[{i}] must have degree >= 1")
        comps.append(p)
    try:
        K = _load_set(data["set"], n)
    except InstanceError as exc:
        raise InstanceError(f"{source}: {exc}") from exc
    except ValueError as exc:  # infeasible witness, shape problems
        raise InstanceError(f"{source}: set: {exc}") from exc
    window = None
    if "window" in data:
        w = data["window"]
        try:
            window = GridWindow(w["lower"], w["upper"], w["resolution"])
        except ValueError as exc:
            raise InstanceError(f"{source}: window: {exc}") from exc
    return Instance(data.get("name", Path(source).stem), VectorPolynomial(comps), K, window,
                    data.get("expected", {}), data.get("note", ""), source)


def load_instance(path: str | Path) -> Instance:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    return instance_from_dict(data, str(path))


def instance_to_dict(inst: Instance) -> dict:
    out = {"name": inst.name, "n": inst.f.n, "s": inst.f.s,
           "objectives": [c.to_terms() for c in inst.f.components], "set": inst.K.to_dict()}
    if inst.window is not None:
        out["window"] = inst.window.to_dict()
    if inst.note:
        out["note"] = inst.note
    if inst.expected:
        out["expected"] = inst.expected
    return out


def fixture_paths() -> list[Path]:
    root = resources.files("pvop") / "fixtures"
    return sorted(Path(str(p)) for p in root.iterdir() if p.name.endswith(".json"))


def load_fixtures() -> list[Instance]:
    return [load_instance(p) for p in fixture_paths()]
