"""Pareto solutions by weighted-sum scalarization over a sublevel set.

For strictly positive weights ``lam`` and a feasible reference point ``x0``,
a global minimiser of ``g = sum(lam_i f_i)`` over

    G = {x in K : f_i(x) <= f_i(x0) for all i}

is Pareto efficient for the vector problem.  Global minimisation of a
polynomial is hard, so :func:`solve` is a best-effort multi-start local
search with an explicit ``unknown`` outcome; the grid oracle is the way to
check an answer.
"""
from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize, nnls

from .constraints import ConstraintSet, MEMBERSHIP_TOL, Polyhedron
from .oracle import DOMINANCE_TOL, GridWindow, dominated_mask, feasible_nodes, grid_front
from .poly import Polynomial, VectorPolynomial
from .regularity import Decision, RegularityReport, StrongReason

STEP_TOL = 1e-9
R_MAX = 1e6
BUDGET = 100_000
ROUND_BUDGET = 2_000
POLISH_RESOLUTION = 41
ACTIVE_TOL = 1e-7
KKT_TOL = 1e-5


class Status(str, enum.Enum):
    FOUND = "found"
    EMPTY_CERTIFIED = "empty_certified"
    UNBOUNDED_DESCENT = "unbounded_descent"
    UNKNOWN = "unknown"


@dataclass
class ParetoResult:
    status: Status
    point: np.ndarray | None = None
    objective_values: np.ndarray | None = None
    certificate: list[str] = field(default_factory=list)
    scalar_value: float | None = None
    evaluations: int = 0
    certified: bool | None = None  # grid check outcome, None when not run

    def to_dict(self) -> dict:
        vec = lambda v: None if v is None else [float(t) for t in v]
        return {"status": self.status.value, "point": vec(self.point),
                "objective_values": vec(self.objective_values),
                "scalar_value": self.scalar_value, "evaluations": self.evaluations,
                "certified": self.certified, "certificate": list(self.certificate)}


@dataclass
class ScalarizationProblem:
    """``min sum(lam_i f_i)`` over ``K`` intersected with the sublevel set of ``x0``."""

    f: VectorPolynomial
    K: ConstraintSet
    lam: np.ndarray
    x0: np.ndarray
    sublevel: bool = True
    tol: float = MEMBERSHIP_TOL

    def __post_init__(self):
        self.lam = np.asarray(self.lam, dtype=float).reshape(-1)
        self.x0 = np.asarray(self.x0, dtype=float).reshape(-1)
        if len(self.lam) != self.f.s:
            raise ValueError(f"lambda has {len(self.lam)} entries, objective has {self.f.s}")
        if not np.all(self.lam > 0) or not np.all(np.isfinite(self.lam)):
            raise ValueError("lambda must be strictly positive")
        if len(self.x0) != self.f.n:
            raise ValueError(f"x0 has {len(self.x0)} coordinates, objective has {self.f.n}")
        if not self.K.contains(self.x0, self.tol):
            raise ValueError(f"x0 = {self.x0.tolist()} is not in the constraint set")
        self.g = sum((c * p for c, p in zip(self.lam, self.f.components)),
                     Polynomial.zero(self.f.n))
        self.fx0 = self.f(self.x0)

    def feasible(self, x) -> bool:
        if not np.all(np.isfinite(x)) or not self.K.contains(x, self.tol):
            return False
        if not self.sublevel:
            return True
        with np.errstate(all="ignore"):
            return bool(np.all(self.f(x) <= self.fx0 + self.tol))

    def active_gradients(self, x, tol: float = ACTIVE_TOL, linear_only: bool = False) -> np.ndarray:
        """Gradients of the constraints ``c(x) >= 0`` that are active at ``x``.

        ``linear_only`` keeps just the polyhedral rows (no curved constraints).
        """
        rows = []
        K = self.K
        if isinstance(K, Polyhedron):
            if K.A.shape[0]:
                rows.extend(K.A[K.A @ x - K.b <= tol])
        elif not linear_only:
            vals = K.values(x)
            h = 1e-7
            for j in np.flatnonzero(vals <= tol):
                grad = np.empty(len(x))
                for i in range(len(x)):
                    e = np.zeros(len(x))
                    e[i] = h
                    grad[i] = (K.values(x + e)[j] - K.values(x - e)[j]) / (2 * h)
                rows.append(grad)
        if self.sublevel and not linear_only:
            J = self.f.jacobian(x)
            rows.extend(-J[self.f(x) >= self.fx0 - tol])
        return np.array(rows).reshape(-1, len(x))

    def projected_gradient(self, x, linear_only: bool = False) -> np.ndarray:
        """Gradient of ``g`` minus its best fit by active constraint gradients (nonnegative weights).

        Moving along the negative result keeps every active constraint
        satisfied to first order (exactly, for linear ones); it is zero
        exactly at a KKT point.
        """
        grad = self.g.gradient(x)
        C = self.active_gradients(x, linear_only=linear_only)
        if len(C) == 0:
            return grad
        mu, _ = nnls(C.T, grad)
        return grad - C.T @ mu

    def stationarity_residual(self, x) -> float:
        """Distance of the gradient of ``g`` to the cone spanned by active constraint gradients.

        Zero at a KKT point; the minimiser may sit on the boundary of ``G``.
        """
        return float(np.linalg.norm(self.projected_gradient(x)))

    def is_stationary(self, x) -> bool:
        grad = self.g.gradient(x)
        return self.stationarity_residual(x) <= KKT_TOL * (1.0 + float(np.linalg.norm(grad)))

    def feasible_batch(self, X: np.ndarray) -> np.ndarray:
        ok = self.K.contains(X, self.tol)
        if self.sublevel and len(X):
            with np.errstate(all="ignore"):
                ok &= np.all(self.f(X) <= self.fx0 + self.tol, axis=1)
        return ok


# -- local search ------------------------------------------------------------------

@dataclass
class _Run:
    x: np.ndarray
    value: float
    converged: bool
    escaped: bool
    evaluations: int
    visited: list[np.ndarray]


def _armijo(prob: ScalarizationProblem, x: np.ndarray, gx: float, grad: np.ndarray,
            d: np.ndarray, alpha: float, budget: int):
    """Backtracking along ``-d``; the new point is None when the step length collapses."""
    slope = float(grad @ d)
    evals = 0
    while alpha * np.linalg.norm(d) >= STEP_TOL and evals < budget:
        trial = x - alpha * d
        evals += 1
        if prob.feasible(trial):
            gt = prob.g(trial)
            if gt <= gx - 1e-4 * alpha * slope:
                return trial, gt, alpha, evals
        alpha *= 0.5
    return None, gx, alpha, evals


def _descend(prob: ScalarizationProblem, x: np.ndarray, budget: int, rmax: float):
    """Gradient steps with an adaptive length; infeasible or non-decreasing steps shrink it.

    When a raw gradient step collapses against the boundary, the gradient
    projected away from the active linear constraints is tried instead, and
    preferred for as long as it keeps working.  Curved boundaries are left to
    the constrained polish, where tangent steps would only creep.
    """
    g = prob.g
    gx = g(x)
    alpha = 1.0
    evals = 1
    visited = [x]
    on_boundary = False
    while evals < budget:
        grad = g.gradient(x)
        if not np.any(grad):
            return x, gx, "stalled", evals, visited
        order = ("projected", "raw") if on_boundary else ("raw", "projected")
        new = None
        for kind in order:
            d = grad if kind == "raw" else prob.projected_gradient(x, linear_only=True)
            if kind == "projected" and np.array_equal(d, grad) and "raw" in order[:1]:
                continue  # nothing active: same direction as the failed raw attempt
            if not np.any(d) or evals >= budget:
                continue
            new, gnew, step, e = _armijo(prob, x, gx, grad, d, alpha, budget - evals)
            evals += e
            if new is not None:
                on_boundary = kind == "projected"
                break
        if new is None:
            return x, gx, "stalled" if evals < budget else "budget", evals, visited
        x, gx, alpha = new, gnew, 2.0 * step
        visited.append(x)
        if np.linalg.norm(x) > rmax:
            return x, gx, "escaped", evals, visited
    return x, gx, "budget", evals, visited


def _slsqp_constraints(prob: ScalarizationProblem) -> list[dict]:
    cons = []
    K = prob.K
    if isinstance(K, Polyhedron):
        if K.A.shape[0]:
            cons.append({"type": "ineq", "fun": lambda x: K.A @ x - K.b, "jac": lambda x: K.A})
    else:
        cons.append({"type": "ineq", "fun": lambda x: K.values(x)})
    if prob.sublevel:
        cons.append({"type": "ineq", "fun": lambda x: prob.fx0 - prob.f(x),
                     "jac": lambda x: -prob.f.jacobian(x)})
    return cons


def _polish(prob: ScalarizationProblem, x: np.ndarray, maxiter: int = 100):
    """Constrained quasi-Newton polish; gradient steps stall on active constraints."""
    with warnings.catch_warnings(), np.errstate(all="ignore"):
        warnings.simplefilter("ignore")
        res = minimize(prob.g, x, jac=prob.g.gradient, method="SLSQP",
                       constraints=_slsqp_constraints(prob),
                       options={"maxiter": maxiter, "ftol": 1e-15})
    return res.x, int(res.nfev) + int(res.njev)


def _local_search(prob: ScalarizationProblem, start: np.ndarray, budget: int, rmax: float,
                  round_budget: int = ROUND_BUDGET) -> _Run:
    """Alternate capped rounds of gradient steps with a constrained polish.

    Converged means the gradient steps stalled (step below ``STEP_TOL``), the
    polish could not improve the value any further, and the point is first-order
    stationary.  A stall away from stationarity is reported as not converged:
    it happens in narrow curved valleys where short steps still descend.
    """
    x = np.asarray(start, dtype=float)
    if not prob.feasible(x):
        raise ValueError(f"start {x.tolist()} is not feasible")
    evals = 0
    visited = [x]
    gx = prob.g(x)
    while evals < budget:
        x, gx, why, e, seen = _descend(prob, x, min(round_budget, budget - evals), rmax)
        evals += e
        visited.extend(seen)
        if why == "escaped":
            return _Run(x, gx, False, True, evals, visited)
        xp, e = _polish(prob, x)
        evals += e
        if prob.feasible(xp) and prob.g(xp) < gx - 1e-12 * max(1.0, abs(gx)):
            x, gx = xp, prob.g(xp)
            visited.append(x)
            if np.linalg.norm(x) > rmax:
                return _Run(x, gx, False, True, evals, visited)
        elif why == "stalled":
            return _Run(x, gx, prob.is_stationary(x), False, evals, visited)
    return _Run(x, gx, False, False, evals, visited)


def hit_and_run_starts(prob: ScalarizationProblem, count: int, rng: np.random.Generator,
                       scale: float | None = None, max_shrink: int = 40) -> list[np.ndarray]:
    """Feasible points from a hit-and-run walk started at ``x0``.

    Each move picks a random direction and a random length, halving the
    length until the candidate is feasible.
    """
    n = prob.f.n
    x = prob.x0.copy()
    scale = float(scale if scale is not None else max(1.0, np.linalg.norm(x)))
    out = []
    for _ in range(count):
        for _ in range(5):  # a few moves between recorded starts
            d = rng.standard_normal(n)
            d /= np.linalg.norm(d)
            t = rng.exponential(scale) * (1 if rng.random() < 0.5 else -1)
            for _ in range(max_shrink):
                cand = x + t * d
                if prob.feasible(cand):
                    x = cand
                    break
                t *= 0.5
        out.append(x.copy())
    return out


def _grid_polish(prob: ScalarizationProblem, visited: np.ndarray,
                 resolution: int = POLISH_RESOLUTION) -> np.ndarray | None:
    """Best feasible node of a grid over the bounding box of the visited iterates."""
    n = prob.f.n
    if n > 3 or len(visited) == 0:
        return None
    lo, hi = visited.min(axis=0), visited.max(axis=0)
    pad = np.maximum((hi - lo) * 0.05, 1e-6)
    window = GridWindow(lo - pad, hi + pad, resolution if n <= 2 else 17)
    X = window.nodes()
    X = X[prob.feasible_batch(X)]
    if len(X) == 0:
        return None
    return X[int(np.argmin(prob.g(X)))]


def solve(f: VectorPolynomial, K: ConstraintSet, lam=None, x0=None, *, starts: int = 4,
          rmax: float = R_MAX, seed: int = 0, budget: int = BUDGET,
          oracle_window: GridWindow | None = None, sublevel: bool = True,
          tol: float = DOMINANCE_TOL) -> ParetoResult:
    """Minimise the weighted sum over the sublevel set of ``x0``.

    Returns ``found`` only when the best local search converged and no other
    search or grid node beat it; ``unbounded_descent`` when an iterate left the
    ball of radius ``rmax`` while still decreasing; ``unknown`` otherwise.
    With ``oracle_window`` the found point is also checked against a grid of
    ``K`` and downgraded to ``unknown`` if some node dominates it.
    """
    lam = np.full(f.s, 1.0 / f.s) if lam is None else lam
    x0 = K.witness if x0 is None else x0
    prob = ScalarizationProblem(f, K, lam, x0, sublevel)
    rng = np.random.default_rng(seed)
    trail = [f"weighted sum with lambda = {prob.lam.tolist()} over "
             + ("the sublevel set of x0" if sublevel else "the whole constraint set")]

    initial = [prob.x0] + hit_and_run_starts(prob, starts, rng)
    runs = [_local_search(prob, s, budget, rmax) for s in initial]
    evals = sum(r.evaluations for r in runs)

    escaped = [r for r in runs if r.escaped]
    if escaped:
        r = escaped[0]
        trail.append(f"iterate left radius {rmax:g} with the weighted sum still decreasing "
                     f"(value {r.value:.6g}); infimum likely not attained")
        return ParetoResult(Status.UNBOUNDED_DESCENT, r.x, f(r.x), trail, float(r.value), evals)

    visited = np.vstack([np.vstack(r.visited) for r in runs])
    for _ in range(3):
        best = min(runs, key=lambda r: (r.value, tuple(r.x)))
        node = _grid_polish(prob, visited)
        if node is None or prob.g(node) >= best.value - tol:
            break
        trail.append(f"grid polish found a better node {node.tolist()}; searching from it")
        r = _local_search(prob, node, budget, rmax)
        runs.append(r)
        evals += r.evaluations
        visited = np.vstack([visited, np.vstack(r.visited)])
        if r.escaped:
            trail.append(f"iterate left radius {rmax:g} with the weighted sum still decreasing")
            return ParetoResult(Status.UNBOUNDED_DESCENT, r.x, f(r.x), trail, float(r.value), evals)

    best = min(runs, key=lambda r: (r.value, tuple(r.x)))
    node = _grid_polish(prob, visited)
    beaten = node is not None and prob.g(node) < best.value - tol
    if not best.converged:
        trail.append("the best search stopped without reaching a stationary point "
                     "(budget exhausted, or steps collapsed in a narrow valley)")
        return ParetoResult(Status.UNKNOWN, best.x, f(best.x), trail, float(best.value), evals)
    if beaten or any(r.value < best.value - tol for r in runs):
        trail.append("local searches did not settle on a common minimiser")
        return ParetoResult(Status.UNKNOWN, best.x, f(best.x), trail, float(best.value), evals)

    trail.append(f"converged from {len(runs)} starts: weighted sum {best.value:.10g}; "
                 "a global minimiser over the sublevel set would be Pareto efficient")
    result = ParetoResult(Status.FOUND, best.x, f(best.x), trail, float(best.value), evals)
    if oracle_window is not None:
        ok = certify_pareto(f, K, best.x, oracle_window, tol)
        result.certified = ok
        if ok:
            trail.append(f"no node of a {oracle_window.resolution}-per-axis grid dominates it")
        else:
            trail.append("a grid node dominates the point; downgraded to unknown")
            result.status = Status.UNKNOWN
    else:
        trail.append("not checked against the grid oracle; run with an oracle window to check")
    return result


# -- certificates and pre-checks -------------------------------------------------

def certify_pareto(f: VectorPolynomial, K: ConstraintSet, point, window: GridWindow,
                   tol: float = DOMINANCE_TOL) -> bool:
    """True when no feasible node of ``window`` strictly dominates ``point``.

    An empty grid gives a vacuous ``True`` with a warning.
    """
    X = feasible_nodes(K, window)
    if len(X) == 0:
        warnings.warn("no feasible grid node; Pareto certificate is vacuous", RuntimeWarning)
        return True
    fp = np.asarray(f(np.asarray(point, dtype=float)))[None, :]
    return not bool(dominated_mask(fp, f(X), "strict", tol)[0])


def precheck_emptiness(report: RegularityReport) -> ParetoResult | None:
    """Certify that no weak Pareto solution exists, when the leading forms allow it.

    If some recession direction makes every leading form negative, moving
    along it from any feasible point eventually improves every objective, so
    no feasible point is weakly efficient.  The check is one-directional:
    ``None`` does not mean solutions exist.
    """
    zs = report.zero_status
    if zs.zero_is_weak_pareto:
        return None
    return ParetoResult(
        Status.EMPTY_CERTIFIED, certificate=[
            f"every leading form is negative along the recession direction "
            f"{[float(t) for t in zs.witness]} (values {[float(t) for t in zs.values]}); "
            "no feasible point is weakly Pareto efficient"])


def bounded_front_radius(f: VectorPolynomial, K: ConstraintSet, report: RegularityReport,
                         resolution: int = 121, widths=(2.0, 4.0, 8.0, 16.0)) -> float | None:
    """Empirical radius containing the sampled weak Pareto front.

    Only defined when the recession problem's weak solution set is {0}.  For
    bounded polyhedra the radius of the bounding box is returned.  Otherwise
    grid fronts on growing windows around the witness are compared; the
    radius is returned once it stops growing and stays clear of the window
    boundary, and ``None`` if that never happens.
    """
    if report.strong.decision is not Decision.YES or \
            report.strong.reason is not StrongReason.WEAK_SOL_SET_IS_ZERO:
        return None
    if isinstance(K, Polyhedron):
        box = K.bounding_box()
        if box is not None:
            lo, hi = box
            return float(np.linalg.norm(np.maximum(np.abs(lo), np.abs(hi))))
    if K.n > 3:
        return None
    previous = None
    for w in widths:
        window = GridWindow.centered(K.witness, w, resolution)
        try:
            front = grid_front(f, K, window)
        except ValueError:
            continue
        radius = float(np.max(np.linalg.norm(front.weak_pareto_points, axis=1)))
        clear = bool(np.all(front.boundary_distance("weak") > 2))
        if clear and previous is not None and radius <= previous + 2 * float(np.max(window.cell)):
            return max(radius, previous)
        previous = radius if clear else None
    return None
