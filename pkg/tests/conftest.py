import math

import numpy as np
import pytest

from pvop.constraints import Cone, CustomSet, Polyhedron
from pvop.poly import VectorPolynomial

# Lines "criterion N: PASS|FAIL ..." appended by test_acceptance.py and
# repeated in the terminal summary so they show up without -s.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


def orthant(b=(0.0, 0.0)):
    return Polyhedron(np.eye(2), np.asarray(b, dtype=float))


def wedge_above_diagonal():
    """x2 >= x1 >= 0."""
    return Polyhedron([[1.0, 0.0], [-1.0, 1.0]], [0.0, 0.0])


def exponential_set():
    return CustomSet(2, ["x1 - 1", "x2 - x1 + 1", "exp(x1 - 1) - x2"],
                     Cone(np.array([[1.0, 0.0], [-1.0, 1.0]])), [1.0, 1.0])


# name -> (objective strings, constraint set factory)
PROBLEMS = {
    "empty": (["x1^3 - x1^2*x2 - 3*x1 + 2*x2 + 1", "-x2^2 - x1*x2 + x1 - 1"],
              wedge_above_diagonal),
    "axis_cubics": (["x1^3 - x2 + 1", "x2^3 - x1 - 1"], orthant),
    "r0_wedge": (["x1^2 + x2^2", "x2^2"], wedge_above_diagonal),
    "squares": (["x1^2", "x2^2"], orthant),
    "unbounded_pareto": (["x1^2 - x2 - 1", "x2^3 + 1"], wedge_above_diagonal),
    "unattained": (["(x1^4*x2^4 - 1)^2 + x1^4", "(x1^2*x2^2 - 1)^2 + x1^2"],
                   lambda: Polyhedron(np.zeros((0, 2)), np.zeros(0), [1.0, 1.0])),
    "isolated": (["-x2^2 - 1", "-x1^3 + x2 + 1"],
                 lambda: Polyhedron([[1, 0], [-1, 0], [0, 1]], [0, -1, 2])),
    "exponential": (["x2^3 - x1^2 - x1*x2 + 1", "x2^2 - x1 - 1"], exponential_set),
    "opposite_wedge": (["x1^3", "-x1^2 + x2"],
                       lambda: Polyhedron([[0, 1], [1, -1]], [0, 0])),
    "corner": (["x1*x2 + 1", "x1*x2 + x1 - 1"], lambda: orthant((1.0, 1.0))),
}

EXP_WINDOW = ([1.0, 0.0], [4.0, math.e ** 3])


def problem(name):
    texts, make_set = PROBLEMS[name]
    return VectorPolynomial.parse(texts, 2), make_set()


@pytest.fixture(params=sorted(PROBLEMS))
def any_problem(request):
    return (request.param,) + problem(request.param)
