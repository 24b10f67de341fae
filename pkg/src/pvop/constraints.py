"""Closed constraint sets, their asymptotic cones, and sampling of cone bases.

Polyhedra ``{x : A x >= b}`` have recession cone ``{v : A v >= 0}``, which is
the asymptotic cone of any nonempty convex closed set.  Non-polyhedral sets
carry a declared cone; :func:`validate_declared_cone` gives a Monte-Carlo
sanity check of the declaration.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

from .expr import Expr, evaluate_expr, max_variable, parse_constraint, to_text

CONE_TOL = 1e-10
MEMBERSHIP_TOL = 1e-8


class EmptySetError(ValueError):
    """Raised when a constraint set has no feasible witness."""


@dataclass(frozen=True)
class Cone:
    """Polyhedral cone ``{v : A v >= 0}``; ``A`` may have zero rows (all of R^n)."""

    A: np.ndarray

    def __post_init__(self):
        A = np.asarray(self.A, dtype=float)
        if A.ndim != 2:
            raise ValueError("cone matrix must be two-dimensional (use shape (0, n) for R^n)")
        object.__setattr__(self, "A", A)

    @classmethod
    def whole_space(cls, n: int) -> Cone:
        return cls(np.zeros((0, n)))

    @classmethod
    def orthant(cls, n: int) -> Cone:
        return cls(np.eye(n))

    @property
    def n(self) -> int:
        return self.A.shape[1]

    def contains(self, v, tol: float = CONE_TOL):
        v = np.asarray(v, dtype=float)
        if self.A.shape[0] == 0:
            return True if v.ndim == 1 else np.ones(v.shape[0], dtype=bool)
        res = np.all(v @ self.A.T >= -tol, axis=-1)
        return bool(res) if v.ndim == 1 else res

    def __eq__(self, other) -> bool:
        return isinstance(other, Cone) and np.array_equal(self.A, other.A)

    def __hash__(self) -> int:
        return hash(self.A.tobytes())


class ConstraintSet:
    n: int
    witness: np.ndarray

    def contains(self, x, tol: float = MEMBERSHIP_TOL):
        raise NotImplementedError

    @property
    def is_polyhedral(self) -> bool:
        return False


class Polyhedron(ConstraintSet):
    """``{x : A x >= b}``.  A witness is found by linear programming if not given."""

    def __init__(self, A, b, witness: Sequence[float] | None = None):
        A = np.asarray(A, dtype=float)
        b = np.asarray(b, dtype=float).reshape(-1)
        if A.ndim != 2 or A.shape[0] != b.shape[0]:
            raise ValueError(f"inconsistent shapes A{A.shape}, b{b.shape}")
        self.A = A
        self.b = b
        self.n = A.shape[1]
        if witness is None:
            witness = self._find_witness()
        self.witness = np.asarray(witness, dtype=float)
        if not self.contains(self.witness):
            raise EmptySetError(f"witness {self.witness.tolist()} violates A x >= b")

    def _find_witness(self) -> np.ndarray:
        if self.A.shape[0] == 0:
            return np.zeros(self.n)
        res = linprog(np.zeros(self.n), A_ub=-self.A, b_ub=-self.b,
                      bounds=[(None, None)] * self.n, method="highs")
        if res.status != 0:
            raise EmptySetError("polyhedron A x >= b is empty")
        return res.x

    @classmethod
    def from_cone(cls, cone: Cone) -> Polyhedron:
        return cls(cone.A, np.zeros(cone.A.shape[0]), np.zeros(cone.n))

    @property
    def is_polyhedral(self) -> bool:
        return True

    def contains(self, x, tol: float = MEMBERSHIP_TOL):
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.n:
            raise ValueError(f"expected {self.n} coordinates, got {x.shape[-1]}")
        if self.A.shape[0] == 0:
            return True if x.ndim == 1 else np.ones(x.shape[:-1], dtype=bool)
        res = np.all(x @ self.A.T - self.b >= -tol, axis=-1)
        return bool(res) if x.ndim == 1 else res

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray] | None:
        """Coordinate bounds by LP, or None when the polyhedron is unbounded."""
        lo, hi = np.empty(self.n), np.empty(self.n)
        for i in range(self.n):
            for sign, out in ((1.0, lo), (-1.0, hi)):
                c = np.zeros(self.n)
                c[i] = sign
                res = linprog(c, A_ub=-self.A, b_ub=-self.b,
                              bounds=[(None, None)] * self.n, method="highs")
                if res.status != 0:
                    return None
                out[i] = res.x[i]
        return lo, hi

    def to_dict(self) -> dict:
        return {"kind": "polyhedron", "A": self.A.tolist(), "b": self.b.tolist(),
                "witness": self.witness.tolist()}


class CustomSet(ConstraintSet):
    """``{x : e_j(x) >= 0 for all j}`` with a declared asymptotic cone."""

    def __init__(self, n: int, constraints: Sequence[Expr | str], declared_cone: Cone,
                 witness: Sequence[float]):
        self.n = int(n)
        self.exprs = [parse_constraint(c) if isinstance(c, str) else c for c in constraints]
        for e in self.exprs:
            if max_variable(e) >= self.n:
                raise ValueError(f"constraint {to_text(e)} uses more than {self.n} variables")
        if declared_cone.n != self.n:
            raise ValueError("declared cone dimension does not match the set")
        self.declared_cone = declared_cone
        self.witness = np.asarray(witness, dtype=float)
        if not self.contains(self.witness):
            raise EmptySetError(f"witness {self.witness.tolist()} violates the constraints")

    def contains(self, x, tol: float = MEMBERSHIP_TOL):
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.n:
            raise ValueError(f"expected {self.n} coordinates, got {x.shape[-1]}")
        ok = np.ones(x.shape[:-1], dtype=bool)
        for e in self.exprs:
            val = np.asarray(evaluate_expr(e, x))
            ok &= np.nan_to_num(val, nan=-np.inf) >= -tol
        return bool(ok) if x.ndim == 1 else ok

    def values(self, x) -> np.ndarray:
        return np.array([evaluate_expr(e, x) for e in self.exprs])

    def to_dict(self) -> dict:
        return {"kind": "custom", "constraints": [to_text(e) for e in self.exprs],
                "declared_cone": {"A": self.declared_cone.A.tolist()},
                "witness": self.witness.tolist()}


def membership(K: ConstraintSet, x, tol: float = MEMBERSHIP_TOL) -> bool:
    x = np.asarray(x, dtype=float)
    if x.shape != (K.n,):
        raise ValueError(f"expected a point with {K.n} coordinates")
    return bool(K.contains(x, tol))


def asymptotic_cone(K: ConstraintSet, validate: bool = False, seed: int = 0) -> Cone:
    """Recession cone of a polyhedron, or the declared cone of a custom set.

    With ``validate=True`` a custom set's declaration is checked first and a
    ``ValueError`` raised if any probe fails.
    """
    if isinstance(K, Polyhedron):
        if not K.contains(K.witness):
            raise EmptySetError("polyhedron witness is infeasible")
        return Cone(K.A.copy())
    if isinstance(K, CustomSet):
        if validate:
            report = validate_declared_cone(K, K.declared_cone, seed=seed)
            if not report.passed:
                raise ValueError(f"declared cone failed validation: {report.summary()}")
        return K.declared_cone
    raise TypeError(f"unsupported constraint set {type(K).__name__}")


# -- base sampling -------------------------------------------------------------

@dataclass
class BaseSample:
    """Unit vectors of ``K_inf`` (points of the cone's spherical base)."""

    points: np.ndarray
    seed: int
    count: int
    spacing: float = 0.1  # typical angular gap, used as the refinement step

    def __len__(self) -> int:
        return len(self.points)

    @property
    def is_empty(self) -> bool:
        return len(self.points) == 0


def _unit(v: np.ndarray) -> np.ndarray:
    v = np.where(np.abs(v) < 1e-14, 0.0, v)
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def _arcs_2d(A: np.ndarray) -> list[tuple[np.ndarray, np.ndarray]] | None:
    """Feasible arcs of a planar cone as (start, end) unit vectors, counter-clockwise.

    Returns None for the whole plane.  A single ray is an arc with equal ends.
    """
    if A.shape[0] == 0:
        return None
    crit = []
    for a in A:
        if np.linalg.norm(a) == 0:
            continue
        r = _unit(np.array([-a[1], a[0]]))
        crit.extend([r, -r])
    if not crit:
        return None
    crit.sort(key=lambda v: math.atan2(v[1], v[0]) % (2 * math.pi))
    angles = [math.atan2(v[1], v[0]) % (2 * math.pi) for v in crit]
    uniq, uang = [], []
    for v, t in zip(crit, angles):
        if uang and abs(t - uang[-1]) < 1e-13:
            continue
        uniq.append(v)
        uang.append(t)
    if len(uang) > 1 and abs(uang[0] + 2 * math.pi - uang[-1]) < 1e-13:
        uniq.pop()
        uang.pop()
    k = len(uniq)
    feas = lambda v: bool(np.all(A @ v >= -CONE_TOL))
    # interval j runs from uniq[j] to uniq[j+1] counter-clockwise
    interval_ok = []
    for j in range(k):
        t0, t1 = uang[j], uang[(j + 1) % k] + (2 * math.pi if j == k - 1 else 0.0)
        mid = 0.5 * (t0 + t1)
        interval_ok.append(feas(np.array([math.cos(mid), math.sin(mid)])))
    if all(interval_ok):
        return None
    arcs = []
    for j in range(k):
        prev_ok = interval_ok[(j - 1) % k]
        if interval_ok[j] and not prev_ok:
            e = j
            while interval_ok[e % k]:
                e += 1
            arcs.append((uniq[j], uniq[e % k]))
        elif not interval_ok[j] and not prev_ok and feas(uniq[j]):
            arcs.append((uniq[j], uniq[j]))
    return arcs


def _sample_2d(A: np.ndarray, count: int) -> tuple[np.ndarray, float]:
    arcs = _arcs_2d(A)
    if arcs is None:
        t = 2 * math.pi * np.arange(count) / count
        return _unit(np.column_stack([np.cos(t), np.sin(t)])), 2 * math.pi / count
    if not arcs:
        return np.zeros((0, 2)), 0.0
    lengths = []
    for a, b in arcs:
        t0 = math.atan2(a[1], a[0])
        t1 = math.atan2(b[1], b[0])
        lengths.append((t1 - t0) % (2 * math.pi))
    total = sum(lengths)
    pts = []
    for (a, b), ell in zip(arcs, lengths):
        if ell == 0.0:
            pts.append(a)
            continue
        k = max(2, int(round(count * ell / total)))
        t0 = math.atan2(a[1], a[0])
        t = t0 + ell * np.arange(1, k - 1) / (k - 1)
        inner = _unit(np.column_stack([np.cos(t), np.sin(t)])) if k > 2 else np.zeros((0, 2))
        pts.append(a)
        pts.extend(inner)
        pts.append(b)
    spacing = total / max(count - 1, 1) if total > 0 else 0.0
    return np.array(pts) + 0.0, spacing  # + 0.0 turns -0.0 into 0.0


def extreme_rays(cone: Cone) -> np.ndarray:
    """Unit extreme rays from (n-1)-row intersections; exhaustive in low dimension."""
    A, n = cone.A, cone.n
    rays = []
    rows = [a for a in A if np.linalg.norm(a) > 0]
    if len(rows) < n - 1:
        return np.zeros((0, n))
    for combo in itertools.combinations(range(len(rows)), n - 1):
        M = np.array([rows[i] for i in combo]).reshape(n - 1, n)
        _, sv, vt = np.linalg.svd(M)
        if np.sum(sv > 1e-12) < n - 1:
            continue
        r = vt[-1]
        for cand in (r, -r):
            if cone.contains(cand):
                rays.append(_unit(cand))
    if not rays:
        return np.zeros((0, n))
    return np.unique(np.round(np.array(rays), 14), axis=0)


def sample_base(cone: Cone, count: int = 720, seed: int = 0) -> BaseSample:
    """Deterministic unit vectors in the cone.

    In the plane this is an angular sweep of the feasible arc including both
    exact endpoints.  In higher dimension: extreme rays, LP probes for
    lower-dimensional cones, positive combinations of rays, and rejection
    samples from the sphere.
    """
    n = cone.n
    if n == 1:
        pts = [p for p in (np.array([1.0]), np.array([-1.0])) if cone.contains(p)]
        return BaseSample(np.array(pts).reshape(-1, 1), seed, count, 1.0)
    if n == 2:
        pts, spacing = _sample_2d(cone.A, count)
        return BaseSample(pts, seed, count, spacing or 0.1)
    rng = np.random.default_rng(seed)
    pieces = []
    rays = extreme_rays(cone)
    pieces.append(rays)
    eye = np.eye(n)
    axes = np.vstack([eye, -eye])
    pieces.append(axes[cone.contains(axes)])
    probes = []
    for d in axes:  # LP probes catch thin cones rejection sampling misses
        res = linprog(-d, A_ub=-cone.A if cone.A.shape[0] else None,
                      b_ub=np.zeros(cone.A.shape[0]) if cone.A.shape[0] else None,
                      bounds=[(-1, 1)] * n, method="highs")
        if res.status == 0 and -res.fun > 1e-9:
            probes.append(_unit(res.x))
    pieces.append(np.array(probes).reshape(-1, n))
    gens = np.vstack([p for p in pieces if len(p)]) if any(len(p) for p in pieces) else np.zeros((0, n))
    if len(gens) >= 2:
        w = rng.dirichlet(np.ones(len(gens)) * 0.5, size=count // 2)
        combos = w @ gens
        norms = np.linalg.norm(combos, axis=1)
        combos = combos[norms > 1e-9]
        pieces.append(_unit(combos))
    g = rng.standard_normal((count * 4, n))
    g = _unit(g)
    pieces.append(g[cone.contains(g)][:count])
    pts = [p for p in pieces if len(p)]
    if not pts:
        return BaseSample(np.zeros((0, n)), seed, count, 0.0)
    allpts = np.vstack(pts)
    allpts = allpts[cone.contains(allpts)]
    return BaseSample(allpts, seed, count, 0.2)


# -- heuristic validation of declared cones -----------------------------------

@dataclass
class DirectionCheck:
    direction: np.ndarray
    distances: dict  # t -> distance from direction to K / t
    passed: bool


@dataclass
class ConeValidationReport:
    checks: list[DirectionCheck] = field(default_factory=list)
    escapes: list[np.ndarray] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks) and not self.escapes

    @property
    def failures(self) -> list[DirectionCheck]:
        return [c for c in self.checks if not c.passed]

    def summary(self) -> str:
        return (f"{len(self.checks) - len(self.failures)}/{len(self.checks)} directions pass, "
                f"{len(self.escapes)} escaping directions")


def _distance_to_scaled_set(K: ConstraintSet, v: np.ndarray, t: float,
                            rng: np.random.Generator, ndir: int = 64) -> float:
    """Smallest r on a radius grid with t*(v + r*u) in K for a probed unit u."""
    n = len(v)
    dirs = [np.eye(n), -np.eye(n), _unit(rng.standard_normal((ndir, n)))]
    x0 = getattr(K, "witness", None)
    if x0 is not None:
        w = x0 / t
        if np.linalg.norm(w) > 0:
            dirs.append(_unit(w)[None, :])
    U = np.vstack(dirs)
    if K.contains(t * v):
        return 0.0
    for r in np.geomspace(1e-5, 2.0, 60):
        cand = t * (v[None, :] + r * U)
        if np.any(K.contains(cand)):
            return float(r)
    return math.inf


def validate_declared_cone(K: ConstraintSet, cone: Cone, trials: int = 16, seed: int = 0,
                           ts: Sequence[float] = (10.0, 100.0, 1000.0),
                           tol: float = 0.05) -> ConeValidationReport:
    """Monte-Carlo check that ``cone`` matches the asymptotic directions of ``K``.

    Each sampled direction ``v`` must be approached by ``K / t`` as ``t`` grows
    (distance at the largest ``t`` below ``tol`` and not worse than at the
    smallest).  Far points of ``K`` found on spheres of radius ``max(ts)`` must
    point into the cone up to ``tol``.  A pass is evidence, not proof.
    """
    rng = np.random.default_rng(seed)
    report = ConeValidationReport()
    base = sample_base(cone, count=max(trials, 2), seed=seed)
    pts = base.points
    if len(pts) > trials:
        idx = np.unique(np.linspace(0, len(pts) - 1, trials).round().astype(int))
        pts = pts[idx]
    for v in pts:
        dist = {t: _distance_to_scaled_set(K, v, t, rng) for t in ts}
        ok = dist[ts[-1]] <= tol and dist[ts[-1]] <= dist[ts[0]] + 1e-12
        report.checks.append(DirectionCheck(v, dist, ok))
    # escaping directions: far feasible points outside the declared cone
    R = max(ts)
    sphere = _unit(rng.standard_normal((4000, K.n)))
    if K.n == 2:
        t = np.linspace(0, 2 * math.pi, 4000, endpoint=False)
        sphere = np.column_stack([np.cos(t), np.sin(t)])
    center = getattr(K, "witness", np.zeros(K.n))
    far = center + R * sphere
    inside = K.contains(far)
    for u in sphere[inside]:
        if not cone.contains(u, tol=tol):
            report.escapes.append(u)
    return report
