"""Experiments on how regularity and solution sets react to perturbations of f.

Four probes:

* lower-degree perturbations leave every leading form untouched, so the
  analyzer must reach bit-identical conclusions;
* small perturbations in the coefficient norm should not change the verdicts
  of a strongly regular problem once they are small enough;
* the union of weak Pareto sets over a small ball of perturbations should
  stay bounded (convex polyhedral constraint sets only);
* along a convergent sequence ``f + g / k`` selected weak Pareto points keep
  being weak Pareto for the limit ``f``.

Every probe returns a :class:`StabilityReport`; nothing is asserted inside.
"""
from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass, field
from typing import Sequence, TextIO

import numpy as np

from .constraints import BaseSample, ConstraintSet, asymptotic_cone, sample_base
from .oracle import DOMINANCE_TOL, GridWindow, dominated_mask, feasible_nodes, grid_front
from .poly import (CoefficientVector, Polynomial, VectorPolynomial, basis_size,
                   from_coefficient_vector, monomial_basis, perturb, vector_leading_form)
from .regularity import Decision, RegularityReport, analyze_regularity
from .solver import Status, precheck_emptiness, solve

EPSILONS = (1e-1, 1e-2, 1e-3)


class PerturbationMode(str, enum.Enum):
    LOWER_DEGREE = "lower_degree"
    SMALL_NORM = "small_norm"


@dataclass(frozen=True)
class PerturbationSpec:
    mode: PerturbationMode
    seed: int = 0
    trials: int = 50
    epsilon: float | None = None  # radius of the coefficient ball for SMALL_NORM

    def __post_init__(self):
        if self.trials < 0:
            raise ValueError("trials must be non-negative")
        if self.mode is PerturbationMode.SMALL_NORM and (self.epsilon is None or self.epsilon < 0):
            raise ValueError("small-norm perturbations need epsilon >= 0")


@dataclass
class StabilityReport:
    trials: int
    verdict_flips: int = 0
    union_radius: float | None = None
    graph_violations: int = 0
    status_changes: int = 0
    records: list[dict] = field(default_factory=list)
    flips_by_epsilon: dict[float, int] = field(default_factory=dict)
    safe_epsilon: float | None = None
    stable: bool | None = None
    refused: str | None = None

    def to_dict(self) -> dict:
        return {"trials": self.trials, "verdict_flips": self.verdict_flips,
                "union_radius": self.union_radius, "graph_violations": self.graph_violations,
                "status_changes": self.status_changes,
                "flips_by_epsilon": {repr(k): v for k, v in self.flips_by_epsilon.items()},
                "safe_epsilon": self.safe_epsilon, "stable": self.stable,
                "refused": self.refused}

    def write_csv(self, out: TextIO) -> None:
        if not self.records:
            return
        keys = list(self.records[0])
        writer = csv.DictWriter(out, fieldnames=keys, lineterminator="\n")
        writer.writeheader()
        writer.writerows(self.records)

    def to_csv(self) -> str:
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()


def trial_rngs(seed: int, trials: int) -> list[np.random.Generator]:
    """Independent per-trial generators; trial ``i`` does not depend on the trial count."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(trials)]


# -- random perturbations ------------------------------------------------------------

def random_lower_degree(f: VectorPolynomial, rng: np.random.Generator,
                        density: float = 0.5) -> list[Polynomial]:
    """Random ``g`` with ``deg g_i <= deg f_i - 1`` in every component."""
    out = []
    for fi in f.components:
        basis = monomial_basis(f.n, fi.degree - 1)
        keep = rng.random(len(basis)) < density
        coefs = rng.standard_normal(len(basis))
        out.append(Polynomial(f.n, {e: float(c) for e, c, k in zip(basis, coefs, keep) if k}))
    return out


def random_ball_perturbation(f: VectorPolynomial, epsilon: float, rng: np.random.Generator,
                             max_tries: int = 100) -> list[Polynomial]:
    """``g`` uniform in the coefficient-norm ball of radius ``epsilon``.

    All coefficients of degree ``<= d_i`` are concatenated into one vector of
    length ``kappa``; a Gaussian direction is scaled to radius
    ``epsilon * u ** (1 / kappa)``.  Draws that would lower a degree of
    ``f + g`` are discarded and redrawn.
    """
    sizes = [basis_size(f.n, c.degree) for c in f.components]
    kappa = sum(sizes)
    if epsilon == 0:
        return [Polynomial.zero(f.n) for _ in f.components]
    for _ in range(max_tries):
        z = rng.standard_normal(kappa)
        z *= epsilon * rng.random() ** (1.0 / kappa) / np.linalg.norm(z)
        parts = np.split(z, np.cumsum(sizes)[:-1])
        g = [from_coefficient_vector(CoefficientVector(f.n, c.degree, v))
             for c, v in zip(f.components, parts)]
        if all((c + gi).degree == c.degree for c, gi in zip(f.components, g)):
            return g
    raise RuntimeError("could not draw a perturbation that keeps every degree")


def _vector_norm(g: Sequence[Polynomial]) -> float:
    return float(np.sqrt(sum(sum(c * c for c in p.terms.values()) for p in g)))


# -- probes ------------------------------------------------------------------------------

def _baseline(f, K, samples: int, seed: int) -> tuple[RegularityReport, BaseSample]:
    cone = asymptotic_cone(K)
    sample = sample_base(cone, samples, seed)
    return analyze_regularity(f, cone=cone, sample=sample), sample


def lower_degree_invariance(f: VectorPolynomial, K: ConstraintSet, spec: PerturbationSpec,
                            samples: int = 720, g_override: Sequence[Polynomial] | None = None
                            ) -> StabilityReport:
    """Add random strictly-lower-degree terms and compare the analyzer's conclusions.

    Leading forms must be identical term by term, so any flip is a bug.
    """
    base, sample = _baseline(f, K, samples, spec.seed)
    report = StabilityReport(spec.trials)
    if base.strong.decision is Decision.INCONCLUSIVE and base.weak.decision is Decision.INCONCLUSIVE:
        report.refused = "no regularity verdict is decided for the unperturbed problem"
        return report
    lead = vector_leading_form(f)
    for i, rng in enumerate(trial_rngs(spec.seed, spec.trials)):
        g = list(g_override) if g_override is not None else random_lower_degree(f, rng)
        h, _ = perturb(f, g, lower_degree=True)
        same_lead = vector_leading_form(h) == lead
        rep = analyze_regularity(h, cone=base.cone, sample=sample)
        same = same_lead and rep.signature() == base.signature()
        report.verdict_flips += not same
        report.records.append({"trial": i, "perturbation_norm": _vector_norm(g),
                               "leading_forms_equal": same_lead,
                               "strong": rep.strong.decision.value,
                               "weak": rep.weak.decision.value, "flip": not same})
    report.stable = report.verdict_flips == 0
    return report


def small_norm_persistence(f: VectorPolynomial, K: ConstraintSet, seed: int = 0,
                           trials: int = 50, epsilons: Sequence[float] = EPSILONS,
                           samples: int = 720, run_solver: bool = True) -> StabilityReport:
    """Perturb all coefficients inside balls of radius ``epsilon`` and recompare.

    A flip is any change of the analyzer signature; a status change is a
    change of the emptiness pre-check or of the solver status.
    ``safe_epsilon`` is the largest tested radius such that it and every
    smaller tested radius show neither.
    """
    base, sample = _baseline(f, K, samples, seed)
    report = StabilityReport(trials * len(epsilons))
    if base.strong.decision is not Decision.YES:
        report.refused = "the unperturbed problem is not strongly regular"
        return report
    base_pre = precheck_emptiness(base)
    base_solver = None
    if run_solver and base_pre is None:
        base_solver = solve(f, K, seed=seed, starts=1).status
    clean: dict[float, bool] = {}
    streams = np.random.SeedSequence(seed).spawn(len(epsilons))
    for eps, stream in zip(epsilons, streams):
        flips = changes = 0
        for i, child in enumerate(stream.spawn(trials)):
            rng = np.random.default_rng(child)
            g = random_ball_perturbation(f, eps, rng)
            h, _ = perturb(f, g)
            rep = analyze_regularity(h, cone=base.cone, sample=sample)
            flip = rep.signature() != base.signature()
            pre = precheck_emptiness(rep)
            changed = (pre is None) != (base_pre is None)
            status = None
            if base_solver is not None and pre is None:
                status = solve(h, K, seed=seed, starts=1).status
                changed |= status is not base_solver
            flips += flip
            changes += changed
            report.records.append({"epsilon": eps, "trial": i, "perturbation_norm": _vector_norm(g),
                                   "strong": rep.strong.decision.value,
                                   "reason": rep.strong.reason.value if rep.strong.reason else "",
                                   "emptiness_certified": pre is not None,
                                   "solver_status": status.value if status else "",
                                   "flip": flip, "status_change": changed})
        report.flips_by_epsilon[eps] = flips
        report.verdict_flips += flips
        report.status_changes += changes
        clean[eps] = flips == 0 and changes == 0
    safe = None
    for eps in sorted(clean):
        if not clean[eps]:
            break
        safe = eps
    report.safe_epsilon = safe
    report.stable = safe is not None
    return report


def local_boundedness_probe(f: VectorPolynomial, K: ConstraintSet, delta: float = 1e-2,
                            seed: int = 0, trials: int = 10, half_width: float = 2.0,
                            resolution: int = 41, samples: int = 720) -> StabilityReport:
    """Radius of the union of weak Pareto sets over perturbations of norm below ``delta``.

    The union is sampled on two windows around the witness with the same cell
    size, the second twice as wide.  The radius is stable when the larger
    window finds nothing beyond the smaller one's radius (up to two cells).
    """
    report = StabilityReport(trials)
    if not K.is_polyhedral:
        report.refused = "local boundedness probe needs a convex polyhedral constraint set"
        return report
    base, _ = _baseline(f, K, samples, seed)
    if base.strong.decision is not Decision.YES:
        report.refused = "the unperturbed problem is not strongly regular"
        return report
    small = GridWindow.centered(K.witness, half_width, resolution)
    large = GridWindow.centered(K.witness, 2 * half_width, 2 * (resolution - 1) + 1)
    radii = {"small": 0.0, "large": 0.0}
    for i, rng in enumerate(trial_rngs(seed, trials)):
        g = random_ball_perturbation(f, delta, rng)
        h, _ = perturb(f, g)
        row = {"trial": i, "perturbation_norm": _vector_norm(g)}
        for name, window in (("small", small), ("large", large)):
            front = grid_front(h, K, window)
            pts = front.weak_pareto_points
            r = float(np.max(np.linalg.norm(pts, axis=1))) if len(pts) else 0.0
            row[f"radius_{name}"] = r
            radii[name] = max(radii[name], r)
        res = solve(h, K, seed=seed, starts=1)
        row["solver_status"] = res.status.value
        if res.status is Status.FOUND:
            r = float(np.linalg.norm(res.point))
            row["solver_radius"] = r
            radii["small"] = max(radii["small"], r)
            radii["large"] = max(radii["large"], r)
        else:
            row["solver_radius"] = ""
        report.records.append(row)
    cell = float(np.max(small.cell))
    report.union_radius = radii["large"]
    report.stable = radii["large"] <= radii["small"] + 2 * cell * np.sqrt(K.n)
    return report


def closed_graph_probe(f: VectorPolynomial, K: ConstraintSet, g: Sequence[Polynomial] | None = None,
                       window: GridWindow | None = None, steps: int = 20, lam=None,
                       seed: int = 0, tol: float = DOMINANCE_TOL) -> StabilityReport:
    """Follow ``f_k = f + g / k`` and test the selected weak Pareto nodes against ``f``.

    At each step the grid node minimising the weighted sum of ``f_k`` is
    selected; it is weakly efficient for ``f_k`` on the grid.  Over the second
    half of the sequence each selected node must also be weakly efficient for
    the limit ``f`` (dominance tolerance ``tol``); each failure is a
    violation.  ``g`` must have coefficient norm at most 1.
    """
    if g is None:
        g = random_ball_perturbation(f, 1.0, np.random.default_rng(seed))
    g = list(g)
    if len(g) != f.s:
        raise ValueError(f"perturbation has {len(g)} components, objective has {f.s}")
    if _vector_norm(g) > 1.0 + 1e-12:
        raise ValueError("perturbation norm must be at most 1 for a convergent sequence")
    if window is None:
        window = GridWindow.centered(K.witness, 2.0, 81)
    lam = np.full(f.s, 1.0 / f.s) if lam is None else np.asarray(lam, dtype=float)
    X = feasible_nodes(K, window)
    if len(X) == 0:
        raise ValueError("no grid node of the window lies in the constraint set")
    F = f(X)
    G = np.column_stack([gi(X) for gi in g])
    limit_front = ~dominated_mask(F, F, "weak", tol)
    report = StabilityReport(steps)
    for k in range(1, steps + 1):
        j = int(np.argmin((F + G / k) @ lam))
        bad = not bool(limit_front[j])
        tail = k > steps // 2
        report.graph_violations += bad and tail
        report.records.append({"k": k, "node": " ".join(repr(float(t)) for t in X[j]),
                               "weakly_dominated_for_limit": bad, "counted": tail})
    report.stable = report.graph_violations == 0
    return report
