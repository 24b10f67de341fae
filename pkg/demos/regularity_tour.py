"""Regularity verdicts on three bundled instances.

Each verdict is read off the leading forms of the objectives on the
asymptotic cone of the constraint set.  The tour shows the three outcomes a
component can have (only zero, empty, nonzero minimisers at infinity) and how
they combine into the strong and weak regularity decisions.

Run:  python3 demos/regularity_tour.py
"""
from pvop.instances import load_fixtures
from pvop.regularity import check_problem

FIXTURES = {inst.name: inst for inst in load_fixtures()}


def describe(name: str) -> None:
    inst = FIXTURES[name]
    report, _ = check_problem(inst.f, inst.K)
    print(f"== {name}")
    print(f"   objectives      : {inst.f}")
    for i, v in enumerate(report.per_component, 1):
        witness = None if v.witness is None else [round(float(t), 4) for t in v.witness]
        print(f"   component {i}     : {v.value.value:<12} min on base {v.min_on_base:+.4f}"
              f"  witness {witness}")
    strong = report.strong
    print(f"   strong regular  : {strong.decision.value}"
          + (f" ({strong.reason.value})" if strong.reason else ""))
    print(f"   weak regular    : {report.weak.decision.value}")
    print(f"   0 weak Pareto   : {report.zero_status.zero_is_weak_pareto}")
    print(f"   exit code       : {report.exit_code}")
    print()


if __name__ == "__main__":
    # Every leading form is positive on the cone: the only minimiser at infinity is 0.
    describe("exponential_boundary")
    # A direction along which both leading forms are negative: no weak minimiser at
    # infinity exists at all, which is enough for strong regularity.
    describe("empty_weak_solution_set")
    # The cubic leading forms vanish on the axes, so each component has nonzero
    # minimisers at infinity and strong regularity fails with a witness.
    describe("axis_minimizers_orthant")
