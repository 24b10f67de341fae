"""Regularity of PVOP(K, f) decided from the leading forms on the asymptotic cone.

Every decision is made on the spherical base of ``K_inf``: leading forms are
homogeneous, so their sign pattern on unit vectors determines their sign
pattern on the whole cone.  Results that depend on universally quantified
statements (Pareto efficiency on a cone) are sampled, and say so.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .constraints import BaseSample, Cone, ConstraintSet, asymptotic_cone, sample_base
from .oracle import dominated_mask, minimal_rows
from .poly import Polynomial, VectorPolynomial, leading_form, vector_leading_form

TOL_POS = 1e-7
REFINE_BUDGET = 200
SCALES = np.concatenate([np.geomspace(1e-3, 1e3, 25), [1.0]])


class Verdict(str, enum.Enum):
    ONLY_ZERO = "only_zero"  # min over K_inf of the leading form is attained only at 0
    EMPTY = "empty"  # leading form takes negative values: no minimiser on K_inf
    HAS_NONZERO = "has_nonzero"  # minimum 0 also attained at a nonzero point
    INCONCLUSIVE = "inconclusive"


class Decision(str, enum.Enum):
    YES = "yes"
    NO = "no"
    INCONCLUSIVE = "inconclusive"


class StrongReason(str, enum.Enum):
    WEAK_SOL_SET_IS_ZERO = "weak_sol_set_is_zero"
    WEAK_SOL_SET_EMPTY = "weak_sol_set_empty"


def _vec(v):
    return None if v is None else [float(t) for t in v]


@dataclass
class ScalarRecessionVerdict:
    value: Verdict
    witness: np.ndarray | None
    min_on_base: float

    def to_dict(self) -> dict:
        return {"value": self.value.value, "witness": _vec(self.witness),
                "min_on_base": float(self.min_on_base)}


@dataclass
class ZeroWeakStatus:
    zero_is_weak_pareto: bool
    witness: np.ndarray | None = None
    values: np.ndarray | None = None

    def to_dict(self) -> dict:
        return {"zero_is_weak_pareto": self.zero_is_weak_pareto, "witness": _vec(self.witness),
                "values": _vec(self.values)}


@dataclass
class RegularityVerdict:
    decision: Decision
    reason: StrongReason | None = None
    witness: np.ndarray | None = None
    validation_count: int = 0

    def to_dict(self) -> dict:
        return {"decision": self.decision.value,
                "reason": self.reason.value if self.reason else None,
                "witness": _vec(self.witness), "validation_count": self.validation_count}


@dataclass
class RegularityReport:
    strong: RegularityVerdict
    weak: RegularityVerdict
    per_component: list[ScalarRecessionVerdict]
    f_bounded_below_implied: Decision
    zero_status: ZeroWeakStatus
    cone: Cone
    sample_size: int

    @property
    def has_inconclusive(self) -> bool:
        return (self.strong.decision is Decision.INCONCLUSIVE
                or self.weak.decision is Decision.INCONCLUSIVE
                or any(v.value is Verdict.INCONCLUSIVE for v in self.per_component))

    @property
    def exit_code(self) -> int:
        return 2 if self.has_inconclusive else 0

    def signature(self) -> tuple:
        """Verdict kinds only; two reports with equal signatures reach the same conclusions."""
        return (self.strong.decision, self.strong.reason, self.weak.decision,
                tuple(v.value for v in self.per_component), self.zero_status.zero_is_weak_pareto,
                self.f_bounded_below_implied)

    def to_dict(self) -> dict:
        return {"strong": self.strong.to_dict(), "weak": self.weak.to_dict(),
                "per_component": [v.to_dict() for v in self.per_component],
                "f_bounded_below_implied": self.f_bounded_below_implied.value,
                "zero_status": self.zero_status.to_dict(),
                "cone": {"A": self.cone.A.tolist()}, "sample_size": self.sample_size}


@dataclass
class R0Report:
    is_r0: bool
    witness: np.ndarray | None
    samples_checked: int
    witnesses: list[np.ndarray] = field(default_factory=list)
    conditions: np.ndarray | None = None  # (d_i * h_i(witness))_i

    def to_dict(self) -> dict:
        return {"is_r0": self.is_r0, "witness": _vec(self.witness),
                "witnesses": [_vec(w) for w in self.witnesses],
                "conditions": _vec(self.conditions), "samples_checked": self.samples_checked}


# -- local refinement on the sphere -------------------------------------------

def _unit(v):
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def refine_on_sphere(func, v0: np.ndarray, cone: Cone, step: float,
                     budget: int = REFINE_BUDGET) -> tuple[np.ndarray, float, int]:
    """Pattern search for a minimiser of ``func`` over unit vectors of ``cone``.

    ``func`` maps a batch ``(k, n)`` to ``(k,)``.  Moves along an orthonormal
    tangent basis; the step halves after an unsuccessful sweep.
    """
    v = np.asarray(v0, dtype=float)
    best = float(func(v[None, :])[0])
    evals = 1
    n = len(v)
    if n == 1:
        return v, best, evals
    step = max(float(step), 1e-6)
    while evals < budget and step > 1e-13:
        _, _, vt = np.linalg.svd(v[None, :])
        tangent = vt[1:]
        cand = _unit(np.vstack([v + step * tangent, v - step * tangent]))
        cand = cand[cone.contains(cand, tol=0.0)]
        if len(cand) == 0:
            step *= 0.5
            continue
        if evals + len(cand) > budget:
            cand = cand[: budget - evals]
        vals = func(cand)
        evals += len(cand)
        k = int(np.argmin(vals))
        if vals[k] < best:
            v, best = cand[k], float(vals[k])
        else:
            step *= 0.5
    return v, best, evals


def _as_forms(f) -> list[Polynomial]:
    comps = f.components if isinstance(f, VectorPolynomial) else list(f)
    return [leading_form(c) for c in comps]


def _values(forms: Sequence[Polynomial], pts: np.ndarray) -> np.ndarray:
    return np.column_stack([h(pts) for h in forms]) if len(pts) else np.zeros((0, len(forms)))


# -- scalar verdicts ------------------------------------------------------------

def scalar_recession_verdict(fi: Polynomial, cone: Cone, sample: BaseSample,
                             tol_pos: float = TOL_POS,
                             budget: int = REFINE_BUDGET) -> ScalarRecessionVerdict:
    """Classify ``SOL(K_inf, fi_inf)`` as {0}, empty, or containing a nonzero point.

    ``m`` is the (refined) minimum of the leading form on the cone's base.
    ``m > tol`` means only 0 is a minimiser; ``m < -tol`` means the form is
    unbounded below along the witness ray.  In the dead band the witness must
    be a numerically exact zero, otherwise the verdict is inconclusive.
    """
    if fi.degree < 1:
        raise ValueError("component must have degree >= 1")
    if sample.is_empty:
        return ScalarRecessionVerdict(Verdict.ONLY_ZERO, None, float("inf"))
    h = leading_form(fi)
    vals = h(sample.points)
    i = int(np.argmin(vals))
    v, m, _ = refine_on_sphere(h, sample.points[i], cone, sample.spacing, budget)
    if vals[i] <= m:
        v, m = sample.points[i], float(vals[i])
    if m > tol_pos:
        return ScalarRecessionVerdict(Verdict.ONLY_ZERO, v, m)
    if m < -tol_pos:
        return ScalarRecessionVerdict(Verdict.EMPTY, v, m)
    scale = max(1.0, float(np.max(np.abs(vals))))
    if abs(m) > 1e-12 * scale:  # one more pass before giving up
        v2, m2, _ = refine_on_sphere(h, v, cone, sample.spacing * 1e-3, budget)
        if m2 < m:
            v, m = v2, m2
        if m < -tol_pos:
            return ScalarRecessionVerdict(Verdict.EMPTY, v, m)
    if abs(m) <= 1e-12 * scale:
        return ScalarRecessionVerdict(Verdict.HAS_NONZERO, v, m)
    return ScalarRecessionVerdict(Verdict.INCONCLUSIVE, v, m)


def zero_weak_status(f, cone: Cone, sample: BaseSample, tol: float = TOL_POS,
                     budget: int = REFINE_BUDGET) -> ZeroWeakStatus:
    """Search for a cone direction where every leading form is negative.

    Such a direction means 0 is not weakly efficient for the recession
    problem, and then the recession problem has no weak Pareto solution at all.
    """
    if sample.is_empty:
        return ZeroWeakStatus(True)
    forms = _as_forms(f)
    worst = lambda P: np.max(_values(forms, P), axis=1)
    vals = worst(sample.points)
    i = int(np.argmin(vals))
    v, m, _ = refine_on_sphere(worst, sample.points[i], cone, sample.spacing, budget)
    if vals[i] <= m:
        v, m = sample.points[i], float(vals[i])
    if m < -tol:
        return ZeroWeakStatus(False, v, np.array([h(v) for h in forms]))
    return ZeroWeakStatus(True)


# -- dominance against the sampled cone -------------------------------------------

def _scaled_pool(H: np.ndarray, degrees: Sequence[int], scales=SCALES) -> np.ndarray:
    """Values of the leading forms at ``t * w`` for samples ``w`` and scales ``t``, plus 0."""
    d = np.asarray(degrees, dtype=float)
    blocks = [np.zeros((1, H.shape[1]))]
    blocks.extend(H * (t ** d) for t in scales)
    return np.vstack(blocks)


def _find_undominated(cands: np.ndarray, forms, pool, strict: bool, tol: float,
                      block: int = 64):
    """First candidate whose leading-form values no pool row dominates, or None."""
    mode = "strict" if strict else "weak"
    # Any row dominated (exactly) by another row dominates nothing that row
    # does not, so only the exact minimal rows are kept.
    pool = pool[minimal_rows(pool)]
    for start in range(0, len(cands), block):
        C = cands[start:start + block]
        hit = dominated_mask(_values(forms, C), pool, mode, tol)
        free = np.flatnonzero(~hit)
        if len(free):
            return C[free[0]]
    return None


def analyze_regularity(f: VectorPolynomial, K: ConstraintSet | None = None, *,
                       cone: Cone | None = None, samples: int = 720, seed: int = 0,
                       tol: float = TOL_POS, budget: int = REFINE_BUDGET,
                       sample: BaseSample | None = None) -> RegularityReport:
    """Strong and weak regularity of PVOP(K, f), with per-component verdicts."""
    if cone is None:
        if K is None:
            raise ValueError("need a constraint set or an explicit cone")
        cone = asymptotic_cone(K)
    if sample is None:
        sample = sample_base(cone, samples, seed)
    forms = _as_forms(f)
    degrees = [h.degree for h in forms]
    per = [scalar_recession_verdict(h, cone, sample, tol, budget) for h in forms]
    kinds = [v.value for v in per]

    if all(k is Verdict.ONLY_ZERO for k in kinds):
        strong = RegularityVerdict(Decision.YES, StrongReason.WEAK_SOL_SET_IS_ZERO)
        zero = ZeroWeakStatus(True)
        bounded = Decision.YES
    else:
        zero = zero_weak_status(forms, cone, sample, tol, budget)
        if not zero.zero_is_weak_pareto:
            strong = RegularityVerdict(Decision.YES, StrongReason.WEAK_SOL_SET_EMPTY,
                                       witness=zero.witness)
            bounded = Decision.NO
        else:
            bounded = Decision.NO if Verdict.EMPTY in kinds else Decision.INCONCLUSIVE
            decided = [k for k in kinds if k in (Verdict.EMPTY, Verdict.HAS_NONZERO)]
            if not decided:
                strong = RegularityVerdict(Decision.INCONCLUSIVE)
            else:
                H = _values(forms, sample.points)
                pool = _scaled_pool(H, degrees)
                cands = [v.witness for v in per
                         if v.value is Verdict.HAS_NONZERO and v.witness is not None]
                cands = np.vstack(cands + [sample.points]) if cands else sample.points
                w = _find_undominated(cands, forms, pool, strict=False, tol=tol)
                if w is None:
                    strong = RegularityVerdict(Decision.INCONCLUSIVE, validation_count=len(pool))
                else:
                    strong = RegularityVerdict(Decision.NO, witness=w, validation_count=len(pool))

    if strong.decision is Decision.YES:
        weak = RegularityVerdict(Decision.YES)
    else:
        H = _values(forms, sample.points)
        pool = _scaled_pool(H, degrees)
        cands = [v.witness for v in per if v.value is Verdict.HAS_NONZERO and v.witness is not None]
        cands = np.vstack(cands + [sample.points]) if cands else sample.points
        w = _find_undominated(cands, forms, pool, strict=True, tol=tol) if len(cands) else None
        if w is None:
            weak = RegularityVerdict(Decision.INCONCLUSIVE, validation_count=len(pool))
        else:
            weak = RegularityVerdict(Decision.NO, witness=w, validation_count=len(pool))

    is_zero = strong.reason is StrongReason.WEAK_SOL_SET_IS_ZERO
    assert is_zero == all(k is Verdict.ONLY_ZERO for k in kinds)
    return RegularityReport(strong, weak, per, bounded, zero, cone, len(sample))


def gradient_matrix(f, x) -> np.ndarray:
    """``(s, n)`` matrix with rows the gradients of the leading forms at ``x``."""
    return np.vstack([h.gradient(x) for h in _as_forms(f)])


def wvcp_r0_check(f, cone: Cone, sample: BaseSample, tol: float = TOL_POS) -> R0Report:
    """Sampled test of the R0 property of the weak vector complementarity problem.

    A base point x solves the sampled problem when (a) the Euler vector
    ``(d_i h_i(x))_i`` is not in the open positive orthant and (b) for every
    sampled w the vector ``(<grad h_i(x), w>)_i`` is not in the open negative
    orthant.
    """
    if sample.is_empty:
        return R0Report(True, None, 0)
    forms = _as_forms(f)
    d = np.array([h.degree for h in forms], dtype=float)
    P = sample.points
    E = _values(forms, P) * d
    cond_a = np.any(E <= tol, axis=1)
    witnesses = []
    for idx in np.flatnonzero(cond_a):
        J = gradient_matrix(forms, P[idx])
        lin = P @ J.T
        if not np.any(np.all(lin < -tol, axis=1)):
            witnesses.append(P[idx])
    if not witnesses:
        return R0Report(True, None, len(P))
    x = witnesses[0]
    return R0Report(False, x, len(P), witnesses, np.array([h(x) for h in forms]) * d)


def check_problem(f: VectorPolynomial, K: ConstraintSet, samples: int = 720, seed: int = 0,
                  tol: float = TOL_POS) -> tuple[RegularityReport, R0Report]:
    cone = asymptotic_cone(K)
    sample = sample_base(cone, samples, seed)
    report = analyze_regularity(f, cone=cone, sample=sample, tol=tol)
    return report, wvcp_r0_check(f, cone, sample, tol)
