"""Weighted-sum solves over a sublevel set, with grid certification.

The solver minimises sum_i lambda_i f_i over the feasible points that are no
worse than a reference point ``x0`` in every objective.  A converged global
minimiser of that problem is Pareto efficient; the optional grid check tries
to refute this by finding a dominating grid node.

Run:  python3 demos/solver_walkthrough.py
"""
import numpy as np

from pvop.instances import load_fixtures
from pvop.oracle import GridWindow
from pvop.regularity import analyze_regularity
from pvop.solver import bounded_front_radius, precheck_emptiness, solve

FIXTURES = {inst.name: inst for inst in load_fixtures()}


def show(title, res):
    point = None if res.point is None else np.round(res.point, 6).tolist()
    print(f"   {title:<26} status {res.status.value:<18} point {point}"
          + ("" if res.certified is None else f"  certified {res.certified}"))


if __name__ == "__main__":
    inst = FIXTURES["corner_minimum"]
    print(f"== corner_minimum: {inst.f}")
    for lam in [(1, 1), (1, 2), (5, 1)]:
        show(f"lambda {lam}", solve(inst.f, inst.K, lam, [2, 2]))
    print()

    inst = FIXTURES["exponential_boundary"]
    print("== exponential_boundary (curved boundary x2 <= exp(x1 - 1))")
    window = GridWindow([1.0, 0.0], [4.0, float(np.e ** 3)], 200)
    show("lambda (1, 1), 200 grid", solve(inst.f, inst.K, (1, 1), [1, 1], oracle_window=window))
    radius = bounded_front_radius(inst.f, inst.K, analyze_regularity(inst.f, inst.K))
    print(f"   weak Pareto set lies within radius {radius:.3f} of the origin")
    print()

    inst = FIXTURES["isolated_sublevel_point"]
    print("== isolated_sublevel_point: the sublevel set of (1, 2) is that single point")
    show("sublevel set of (1, 2)", solve(inst.f, inst.K, (1, 1), [1, 2]))
    show("whole constraint set", solve(inst.f, inst.K, (1, 1), [1, 2], sublevel=False))
    print()

    inst = FIXTURES["empty_weak_solution_set"]
    print("== empty_weak_solution_set: no solve needed")
    res = precheck_emptiness(analyze_regularity(inst.f, inst.K))
    print(f"   precheck status {res.status.value}: {res.certificate[0]}")
    print()

    inst = FIXTURES["unattained_infimum_plane"]
    print("== unattained_infimum_plane: the infimum is approached but never reached")
    res = solve(inst.f, inst.K, (1, 1), [1, 1])
    show("lambda (1, 1)", res)
    print(f"   {res.certificate[-1]}")
