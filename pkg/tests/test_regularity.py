import numpy as np
import pytest

from pvop.constraints import Cone, Polyhedron, asymptotic_cone, sample_base
from pvop.poly import Polynomial, VectorPolynomial, leading_form, scale, vector_leading_form
from pvop.regularity import (TOL_POS, Decision, StrongReason, Verdict, analyze_regularity,
                             check_problem, gradient_matrix, scalar_recession_verdict,
                             wvcp_r0_check, zero_weak_status)

from conftest import problem

WEDGE = Cone(np.array([[1.0, 0.0], [-1.0, 1.0]]))  # x2 >= x1 >= 0
OPPOSITE = Cone(np.array([[0.0, 1.0], [1.0, -1.0]]))  # x1 >= x2 >= 0
ORTHANT = Cone.orthant(2)
ZERO = Cone(np.vstack([np.eye(2), -np.eye(2)]))


def verdict(text, cone, samples=720):
    return scalar_recession_verdict(Polynomial.parse(text, 2), cone, sample_base(cone, samples))


# -- per-component verdicts -----------------------------------------------------------

def test_positive_form_on_wedge_is_only_zero():
    v = verdict("x2^3", WEDGE)
    assert v.value is Verdict.ONLY_ZERO and v.min_on_base > TOL_POS


def test_cube_on_opposite_wedge_is_only_zero_and_negative_square_is_empty():
    assert verdict("x1^3", OPPOSITE).value is Verdict.ONLY_ZERO
    v = verdict("-x1^2", OPPOSITE)
    assert v.value is Verdict.EMPTY
    np.testing.assert_allclose(v.witness, [1.0, 0.0], atol=1e-12)


def test_product_on_orthant_vanishes_on_an_axis():
    v = verdict("x1*x2", ORTHANT)
    assert v.value is Verdict.HAS_NONZERO
    assert min(abs(v.witness[0]), abs(v.witness[1])) == 0.0
    assert np.linalg.norm(v.witness) == pytest.approx(1.0)


def test_thin_negative_region_is_found_by_refinement():
    # negative only for x2 in a narrow band just above 0, missed by a coarse sweep
    v = verdict("x1^2*x2 - 1000*x2^2*x1 + x2^3", ORTHANT, samples=12)
    assert v.value is Verdict.EMPTY
    assert leading_form(Polynomial.parse("x1^2*x2 - 1000*x2^2*x1 + x2^3", 2))(v.witness) < -TOL_POS


def test_verdict_on_zero_cone():
    assert verdict("-x1^3", ZERO).value is Verdict.ONLY_ZERO


@pytest.mark.parametrize("text", ["x2^3", "-x1^2", "x1*x2", "x1^3 - x1^2*x2", "x1^2 - x2^2"])
@pytest.mark.parametrize("c", [1e-3, 0.5, 7.0, 1e4])
def test_verdict_is_invariant_under_positive_scaling(text, c):
    for cone in (WEDGE, ORTHANT, OPPOSITE):
        p = Polynomial.parse(text, 2)
        sample = sample_base(cone, 360)
        assert scalar_recession_verdict(scale(p, c), cone, sample).value is \
            scalar_recession_verdict(p, cone, sample).value


def test_verdict_invariants_hold(any_problem):
    _, f, K = any_problem
    report = analyze_regularity(f, K)
    for fi, v in zip(f.components, report.per_component):
        h = leading_form(fi)
        if v.value is Verdict.ONLY_ZERO:
            assert v.min_on_base > TOL_POS
        elif v.value is Verdict.EMPTY:
            assert h(v.witness) < -TOL_POS
        elif v.value is Verdict.HAS_NONZERO:
            assert abs(h(v.witness)) <= TOL_POS and np.linalg.norm(v.witness) > 0


# -- zero status ------------------------------------------------------------------------

def test_all_negative_direction():
    f, K = problem("empty")
    zs = zero_weak_status(f, asymptotic_cone(K), sample_base(asymptotic_cone(K)))
    assert not zs.zero_is_weak_pareto
    assert np.all(zs.values < -TOL_POS)
    assert asymptotic_cone(K).contains(zs.witness)
    # the quoted direction (1, 2) works as well, with exact values
    np.testing.assert_array_equal(vector_leading_form(f)(np.array([1.0, 2.0])), [-1.0, -6.0])


def test_squares_leave_zero_weakly_efficient():
    f = VectorPolynomial.parse(["x1^2", "x2^2"], 2)
    assert zero_weak_status(f, ORTHANT, sample_base(ORTHANT)).zero_is_weak_pareto


def test_zero_cone_leaves_zero_weakly_efficient():
    f = VectorPolynomial.parse(["-x1", "-x2"], 2)
    assert zero_weak_status(f, ZERO, sample_base(ZERO)).zero_is_weak_pareto


def test_all_negative_witness_beats_every_sample_at_scale():
    f, K = problem("empty")
    cone = asymptotic_cone(K)
    sample = sample_base(cone)
    zs = zero_weak_status(f, cone, sample)
    lead = vector_leading_form(f)
    far = lead(1e3 * zs.witness)
    for u in sample.points[:: len(sample.points) // 10][:10]:
        assert np.all(far < lead(u))


# -- regularity reports -------------------------------------------------------------------

@pytest.mark.parametrize("name, strong, reason, weak", [
    ("exponential", Decision.YES, StrongReason.WEAK_SOL_SET_IS_ZERO, Decision.YES),
    ("empty", Decision.YES, StrongReason.WEAK_SOL_SET_EMPTY, Decision.YES),
    ("r0_wedge", Decision.YES, StrongReason.WEAK_SOL_SET_IS_ZERO, Decision.YES),
    ("axis_cubics", Decision.NO, None, None),
    ("squares", Decision.NO, None, None),
    ("unattained", Decision.NO, None, Decision.NO),
    ("corner", Decision.NO, None, Decision.NO),
    ("opposite_wedge", Decision.NO, None, Decision.NO),
])
def test_regularity_decisions(name, strong, reason, weak):
    report = analyze_regularity(*problem(name))
    assert report.strong.decision is strong
    assert report.strong.reason is reason
    if weak is not None:
        assert report.weak.decision is weak


def test_axis_cubics_strong_witness_is_validated():
    f, K = problem("axis_cubics")
    report = analyze_regularity(f, K)
    assert [v.value for v in report.per_component] == [Verdict.HAS_NONZERO] * 2
    w = report.strong.witness
    assert report.strong.validation_count > 0
    lead = vector_leading_form(f)
    pool = sample_base(asymptotic_cone(K)).points
    for t in (1e-2, 1.0, 1e2):
        # no scaled sample improves every leading form at the witness
        assert not np.any(np.all(lead(t * pool) < lead(w) - TOL_POS, axis=1))


def test_strong_yes_implies_weak_yes(any_problem):
    _, f, K = any_problem
    report = analyze_regularity(f, K)
    if report.strong.decision is Decision.YES:
        assert report.weak.decision is Decision.YES
    zero = report.strong.reason is StrongReason.WEAK_SOL_SET_IS_ZERO
    assert zero == all(v.value is Verdict.ONLY_ZERO for v in report.per_component)


def test_only_zero_components_leave_zero_pareto_on_samples(any_problem):
    _, f, K = any_problem
    report = analyze_regularity(f, K)
    if report.strong.reason is not StrongReason.WEAK_SOL_SET_IS_ZERO:
        return
    H = vector_leading_form(f)(sample_base(asymptotic_cone(K)).points)
    improving = (H <= -TOL_POS) & np.all(H <= TOL_POS, axis=1, keepdims=True)
    assert not improving.any()


def test_report_is_deterministic(any_problem):
    _, f, K = any_problem
    a, b = analyze_regularity(f, K, seed=5), analyze_regularity(f, K, seed=5)
    assert a.to_dict() == b.to_dict()


def test_exit_code_and_inconclusive_flag():
    assert analyze_regularity(*problem("empty")).exit_code == 0
    # minimum 1e-9 on the base: inside the sign dead band, yet not an exact zero
    f = VectorPolynomial.parse(["x1^2 + 1e-9*x2^2", "x1 + x2"], 2)
    report = analyze_regularity(f, cone=ORTHANT)
    assert report.per_component[0].value is Verdict.INCONCLUSIVE
    assert report.has_inconclusive and report.exit_code == 2


def test_requires_set_or_cone():
    with pytest.raises(ValueError):
        analyze_regularity(VectorPolynomial.parse(["x1"], 1))


# -- R0 ---------------------------------------------------------------------------------

def test_r0_holds_for_sum_of_squares_on_wedge():
    report, r0 = check_problem(*problem("r0_wedge"))
    assert r0.is_r0 and r0.witness is None and r0.samples_checked > 0


def test_r0_fails_for_squares_on_orthant():
    f, K = problem("squares")
    report, r0 = check_problem(f, K)
    assert not r0.is_r0
    assert np.linalg.norm(r0.witness) == pytest.approx(1.0, abs=1e-12)
    assert any(np.array_equal(w, [0.0, 1.0]) for w in r0.witnesses)
    d = np.array(f.degrees, dtype=float)
    np.testing.assert_array_equal(vector_leading_form(f)(np.array([0.0, 1.0])) * d, [0.0, 2.0])


def test_r0_witnesses_satisfy_both_conditions():
    f, K = problem("squares")
    cone = asymptotic_cone(K)
    sample = sample_base(cone)
    r0 = wvcp_r0_check(f, cone, sample)
    d = np.array(f.degrees, dtype=float)
    for x in r0.witnesses:
        assert np.any(vector_leading_form(f)(x) * d <= TOL_POS)
        lin = sample.points @ gradient_matrix(f, x).T
        assert not np.any(np.all(lin < -TOL_POS, axis=1))


def test_r0_on_zero_cone_is_trivial():
    f = VectorPolynomial.parse(["x1^2", "-x2"], 2)
    assert wvcp_r0_check(f, ZERO, sample_base(ZERO)).is_r0


def test_gradient_matrix_rows_are_leading_gradients():
    f, _ = problem("empty")
    x = np.array([0.3, -1.2])
    np.testing.assert_allclose(gradient_matrix(f, x),
                               np.vstack([leading_form(c).gradient(x) for c in f.components]))


def _random_convex_instance(rng):
    """Random cone in the plane and a random quadratic/quartic objective pair."""
    while True:
        a, b = rng.uniform(0, 2 * np.pi, 2)
        A = np.array([[np.cos(a), np.sin(a)], [np.cos(b), np.sin(b)]])
        if abs(np.linalg.det(A)) > 0.2:
            break
    comps = []
    for _ in range(2):
        d = int(rng.choice([2, 4]))
        terms = {(i, d - i): float(rng.normal()) for i in range(d + 1)}
        terms[(1, 0)] = float(rng.normal())
        comps.append(Polynomial(2, terms))
    return VectorPolynomial(comps), Polyhedron(A, np.zeros(2))


def test_r0_never_coexists_with_validated_strong_no():
    rng = np.random.default_rng(2024)
    checked = 0
    for _ in range(40):
        f, K = _random_convex_instance(rng)
        report, r0 = check_problem(f, K, samples=240)
        if r0.is_r0:
            checked += 1
            assert report.strong.decision is not Decision.NO
    assert checked > 0
