"""Perturbation probes for the regularity verdicts and the weak Pareto set.

* lower-degree: adding terms of lower degree leaves the leading forms, and so
  every verdict, unchanged.  Flips would indicate an analyzer bug.
* small-norm: perturbing all coefficients by less than epsilon keeps strong
  regularity for small enough epsilon.  The report gives the largest tested
  radius with no flips.
* local-boundedness: weak Pareto sets of nearby problems stay in one ball.
* closed-graph: weak Pareto nodes of f + g/k stay weakly efficient for f.

Run:  python3 demos/stability_probes.py
"""
from pvop.instances import load_fixtures
from pvop.oracle import GridWindow
from pvop.stability import (PerturbationMode, PerturbationSpec, closed_graph_probe,
                            local_boundedness_probe, lower_degree_invariance,
                            small_norm_persistence)

FIXTURES = {inst.name: inst for inst in load_fixtures()}

if __name__ == "__main__":
    inst = FIXTURES["exponential_boundary"]
    spec = PerturbationSpec(PerturbationMode.LOWER_DEGREE, seed=8, trials=20)
    report = lower_degree_invariance(inst.f, inst.K, spec)
    print(f"lower-degree, exponential_boundary   : {report.verdict_flips} flips "
          f"in {report.trials} trials")

    inst = FIXTURES["empty_weak_solution_set"]
    report = small_norm_persistence(inst.f, inst.K, trials=10, epsilons=(1e-3, 1e-2, 1e-1))
    print(f"small-norm, empty_weak_solution_set  : flips by radius {report.flips_by_epsilon}, "
          f"safe radius {report.safe_epsilon}")

    inst = FIXTURES["r0_wedge"]
    report = local_boundedness_probe(inst.f, inst.K, delta=1e-2, trials=5)
    print(f"local-boundedness, r0_wedge          : union radius {report.union_radius:.3f}, "
          f"stable {report.stable}")

    inst = FIXTURES["corner_minimum"]
    report = local_boundedness_probe(inst.f, inst.K, trials=1)
    print(f"local-boundedness, corner_minimum    : refused ({report.refused})")

    inst = FIXTURES["exponential_boundary"]
    window = GridWindow([1.0, 0.0], [4.0, 20.085536923187668], 120)
    report = closed_graph_probe(inst.f, inst.K, window=window, steps=20, seed=0)
    print(f"closed-graph, exponential_boundary   : {report.graph_violations} violations "
          f"over {len(report.records)} steps")
