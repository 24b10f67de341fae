"""Acceptance criteria 1-9, one test each.

Every test prints ``criterion N: PASS|FAIL <summary>``; the lines are repeated
in the pytest terminal summary.  Run alone with
``pytest tests/test_acceptance.py -s``.
"""
import functools
import math

import numpy as np

from pvop.constraints import asymptotic_cone, sample_base
from pvop.instances import fixture_paths, load_instance
from pvop.oracle import GridWindow, grid_front
from pvop.poly import (Polynomial, VectorPolynomial, from_coefficient_vector, leading_form,
                       monomial_basis, to_coefficient_vector, vector_leading_form)
from pvop.regularity import (TOL_POS, Decision, StrongReason, Verdict, analyze_regularity,
                             check_problem)
from pvop.solver import Status, bounded_front_radius, certify_pareto, precheck_emptiness, solve
from pvop.stability import (PerturbationMode, PerturbationSpec, closed_graph_probe,
                            lower_degree_invariance, small_norm_persistence)

from conftest import ACCEPTANCE_LINES, EXP_WINDOW, problem

LAMBDAS = [(1, 1), (1, 2), (5, 1)]
TRIALS = 200


def criterion(number, summary):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            try:
                detail = fn(*args, **kwargs)
            except BaseException:
                _report(number, "FAIL", summary)
                raise
            _report(number, "PASS", summary + (f" [{detail}]" if detail else ""))
        return run
    return wrap


def _report(number, verdict, text):
    line = f"criterion {number}: {verdict}  {text}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def _fixture(name):
    (path,) = [p for p in fixture_paths() if p.stem == name]
    return load_instance(path)


@criterion(1, "empty weak solution set: strong regular, witness values (-1, -6) at (1, 2), "
              "precheck certifies emptiness")
def test_criterion_1_empty_weak_solution_set():
    f, K = problem("empty")
    report = analyze_regularity(f, K)
    assert report.strong.decision is Decision.YES
    assert report.strong.reason is StrongReason.WEAK_SOL_SET_EMPTY
    zs = report.zero_status
    assert not zs.zero_is_weak_pareto and np.all(zs.values < 0)
    assert np.all(vector_leading_form(f)(zs.witness) < 0)
    quoted = np.array([1.0, 2.0])
    assert asymptotic_cone(K).contains(quoted)
    values = [h(quoted) for h in vector_leading_form(f)]
    assert values == [-1.0, -6.0]  # exact
    pre = precheck_emptiness(report)
    assert pre is not None and pre.status is Status.EMPTY_CERTIFIED
    return f"witness {np.round(zs.witness, 4).tolist()}, values at (1,2) = {values}"


@criterion(2, "axis cubics on the orthant: both components has_nonzero on the axes, "
              "strong regularity No with a validated witness")
def test_criterion_2_axis_cubics():
    f, K = problem("axis_cubics")
    report = analyze_regularity(f, K)
    kinds = [v.value for v in report.per_component]
    assert kinds == [Verdict.HAS_NONZERO, Verdict.HAS_NONZERO]
    for v, h in zip(report.per_component, vector_leading_form(f)):
        assert np.min(np.abs(v.witness)) == 0.0  # on an axis
        assert abs(h(v.witness)) <= TOL_POS
    assert report.strong.decision is Decision.NO
    w = report.strong.witness
    assert w is not None and report.strong.validation_count > 0
    # independent check: no scaled direction improves every leading form at w
    lead = vector_leading_form(f)
    U = sample_base(asymptotic_cone(K), 1440, seed=1).points
    target = lead(w)
    for t in np.geomspace(1e-3, 1e3, 49):
        assert not np.any(np.all(lead(t * U) < target - TOL_POS, axis=1))
    return f"witnesses {[v.witness.tolist() for v in report.per_component]}, strong witness " \
           f"{np.round(w, 4).tolist()}, {report.strong.validation_count} pool rows"


@criterion(3, "R0 check: Yes on the positive-definite wedge pair, No for squares on the "
              "orthant with witness (0, 1) and conditions (0, 2)")
def test_criterion_3_r0():
    _, r0 = check_problem(*problem("r0_wedge"))
    assert r0.is_r0
    f, K = problem("squares")
    _, r0 = check_problem(f, K)
    assert not r0.is_r0
    target = np.array([0.0, 1.0])
    match = [w for w in r0.witnesses
             if np.allclose(w / np.linalg.norm(w), target, atol=1e-12)
             or np.allclose(w / np.linalg.norm(w), -target, atol=1e-12)]
    assert match
    d = np.array(f.degrees, dtype=float)
    conditions = [float(v) for v in vector_leading_form(f)(match[0]) * d]
    assert conditions == [0.0, 2.0]  # exact
    assert not all(c > 0 for c in conditions)  # not in the open positive orthant
    return f"{len(r0.witnesses)} witnesses, conditions at (0,1) = {conditions}"


@criterion(4, "exponential boundary: all components only_zero, strong Yes, found point "
              "certified on a 200x200 grid, bounded front radius finite")
def test_criterion_4_exponential_boundary():
    f, K = problem("exponential")
    report = analyze_regularity(f, K)
    assert all(v.value is Verdict.ONLY_ZERO for v in report.per_component)
    assert report.strong.decision is Decision.YES
    assert report.strong.reason is StrongReason.WEAK_SOL_SET_IS_ZERO
    window = GridWindow(*EXP_WINDOW, 200)
    res = solve(f, K, (1, 1), [1, 1])
    assert res.status is Status.FOUND
    assert certify_pareto(f, K, res.point, window)
    radius = bounded_front_radius(f, K, report)
    assert radius is not None and math.isfinite(radius)
    return f"point {np.round(res.point, 6).tolist()}, radius {radius:.3f}"


@criterion(5, "corner minimum: grid front on [1,3]^2 (41 per axis) is {(1,1)} for both "
              "notions, solver finds (1,1) within 1e-6 for three weights")
def test_criterion_5_corner_minimum():
    f, K = problem("corner")
    front = grid_front(f, K, GridWindow([1, 1], [3, 3], 41))
    np.testing.assert_array_equal(front.pareto_points, [[1.0, 1.0]])
    np.testing.assert_array_equal(front.weak_pareto_points, [[1.0, 1.0]])
    errors = []
    for lam in LAMBDAS:
        res = solve(f, K, lam, [2, 2])
        assert res.status is Status.FOUND
        errors.append(float(np.max(np.abs(res.point - 1.0))))
        assert errors[-1] <= 1e-6
    return f"max errors {[f'{e:.1e}' for e in errors]}"


@criterion(6, "unattained infimum: solver never returns a certified found point and the grid "
              "front migrates to the window boundary")
def test_criterion_6_unattained_infimum():
    f, K = problem("unattained")
    res = solve(f, K, (1, 1), [1, 1], oracle_window=GridWindow([-5, -5], [5, 5], 101))
    assert res.status in (Status.UNBOUNDED_DESCENT, Status.UNKNOWN)
    assert not (res.status is Status.FOUND and res.certified)
    distances, reach = [], []
    for T in (5, 10, 20):
        front = grid_front(f, K, GridWindow([-T, -T], [T, T], 2 * T * T + 1))
        distances.append(float(front.boundary_distance("weak").max()))
        reach.append(float(np.max(np.abs(front.weak_pareto_points))))
    assert all(d <= 2 for d in distances)
    assert reach[0] < reach[1] < reach[2]
    return f"status {res.status.value}, boundary distance in cells {distances}, reach {reach}"


def _random_polynomial(rng, min_degree=0):
    n = int(rng.integers(1, 5))
    d = int(rng.integers(max(min_degree, 1), 6))
    basis = monomial_basis(n, d)
    top = [e for e in basis if sum(e) == d]
    picks = rng.choice(len(basis), size=min(len(basis), int(rng.integers(1, 7))), replace=False)
    terms = {basis[i]: float(rng.normal()) for i in picks}
    terms[top[int(rng.integers(len(top)))]] = float(rng.normal()) or 1.0
    return Polynomial(n, terms)


@criterion(7, f"property suites, {TRIALS} seeded trials each: Euler identity, homogeneity, "
              "finite-difference gradient, coefficient round trip, pareto within weak pareto")
def test_criterion_7_property_suites():
    failures = {}

    rng = np.random.default_rng(7001)
    bad = 0
    for _ in range(TRIALS):
        p = _random_polynomial(rng, 1)
        h, x = leading_form(p), rng.uniform(-2, 2, p.n)
        bad += abs(h.gradient(x) @ x - p.degree * h(x)) > 1e-9 * max(1.0, abs(p.degree * h(x)))
    failures["euler"] = bad

    rng = np.random.default_rng(7002)
    bad = 0
    for _ in range(TRIALS):
        p = _random_polynomial(rng, 1)
        h, x, t = leading_form(p), rng.uniform(-2, 2, p.n), float(rng.uniform(0.1, 10))
        ref = t ** p.degree * h(x)
        bad += abs(h(t * x) - ref) > 1e-9 * max(1.0, abs(ref))
    failures["homogeneity"] = bad

    rng = np.random.default_rng(7003)
    bad, step = 0, 1e-6
    for _ in range(TRIALS):
        p = _random_polynomial(rng)
        x = rng.uniform(-2, 2, p.n)
        fd = np.array([(p(x + step * e) - p(x - step * e)) / (2 * step) for e in np.eye(p.n)])
        g = p.gradient(x)
        bad += np.linalg.norm(g - fd) > 1e-5 * max(1.0, np.linalg.norm(g))
    failures["gradient"] = bad

    rng = np.random.default_rng(7004)
    bad = 0
    for _ in range(TRIALS):
        p = _random_polynomial(rng)
        cap = p.degree + int(rng.integers(0, 3))
        bad += from_coefficient_vector(to_coefficient_vector(p, cap)) != p
    failures["round_trip"] = bad

    rng = np.random.default_rng(7005)
    bad = 0
    K = problem("unattained")[1]  # the whole plane
    window = GridWindow([-1, -1], [1, 1], 15)
    for _ in range(TRIALS):
        comps = []
        for _ in range(2):
            d = int(rng.integers(1, 4))
            basis = monomial_basis(2, d)
            coefs = rng.integers(-3, 4, len(basis)).astype(float)
            coefs[len(basis) - 1] = coefs[len(basis) - 1] or 1.0  # keep the degree
            comps.append(Polynomial(2, dict(zip(basis, coefs))))
        front = grid_front(VectorPolynomial(comps), K, window)
        bad += bool(np.any(front.pareto & ~front.weak))
    failures["pareto_in_weak"] = bad

    assert failures == {k: 0 for k in failures}, failures
    return ", ".join(f"{k} 0/{TRIALS}" for k in failures)


@criterion(8, "lower-degree perturbations: 0 verdict flips over 50 trials on each of 3 fixtures")
def test_criterion_8_lower_degree_exactness():
    names = ["exponential_boundary", "empty_weak_solution_set", "corner_minimum"]
    flips = {}
    for name in names:
        inst = _fixture(name)
        spec = PerturbationSpec(PerturbationMode.LOWER_DEGREE, seed=8, trials=50)
        report = lower_degree_invariance(inst.f, inst.K, spec)
        assert report.refused is None and len(report.records) == 50
        flips[name] = report.verdict_flips
    assert all(v == 0 for v in flips.values()), flips
    return f"flips {flips}"


@criterion(9, "stability: 0 flips at epsilon 1e-3 on two strongly regular fixtures, 0 "
              "closed-graph violations on 20-step sequences")
def test_criterion_9_stability():
    flips = {}
    for name in ("exponential_boundary", "empty_weak_solution_set"):
        inst = _fixture(name)
        report = small_norm_persistence(inst.f, inst.K, seed=9, trials=50, epsilons=(1e-3,))
        assert report.refused is None and len(report.records) == 50
        flips[name] = report.flips_by_epsilon[1e-3]
    assert all(v == 0 for v in flips.values()), flips
    violations = {}
    for name in ("exponential_boundary", "corner_minimum", "unbounded_pareto_wedge",
                 "opposite_wedge"):
        inst = _fixture(name)
        window = inst.window if inst.window.resolution <= 120 else \
            GridWindow(inst.window.lower, inst.window.upper, 120)
        violations[name] = sum(
            closed_graph_probe(inst.f, inst.K, window=window, steps=20, seed=s).graph_violations
            for s in range(5))
    assert all(v == 0 for v in violations.values()), violations
    return f"flips {flips}, violations over 5 sequences {violations}"
