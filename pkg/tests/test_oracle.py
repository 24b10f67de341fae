import csv
import io

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pvop.constraints import Polyhedron
from pvop.oracle import (GridWindow, dominated_mask, dominates, feasible_nodes, grid_front,
                         minimal_rows, nondominated_mask)
from pvop.poly import VectorPolynomial

from conftest import EXP_WINDOW, problem


@pytest.mark.parametrize("a, b, mode, expected", [
    ((2, 1), (5, 6), "strict", True),
    ((1, 1), (1, 1), "strict", False),
    ((0, 5), (1, 1), "weak", False),
    ((1, 1), (1, 2), "strict", True),
    ((1, 1), (1, 2), "weak", False),
    ((0, 0), (1, 2), "weak", True),
    ((1, 1 + 1e-9), (1, 1), "strict", False),  # within the dominance tolerance
])
def test_dominates(a, b, mode, expected):
    assert dominates(a, b, mode) is expected


def test_dominates_rejects_bad_input():
    with pytest.raises(ValueError):
        dominates((1, 2), (1, 2, 3))
    with pytest.raises(ValueError):
        dominates((1, 2), (1, 2), mode="lexicographic")


@pytest.mark.parametrize("lower, upper, resolution", [
    ([0, 0], [1, 0], 5),
    ([0, 0], [1, 1], 1),
    ([0, 0], [1, 1, 1], 5),
])
def test_window_validation(lower, upper, resolution):
    with pytest.raises(ValueError):
        GridWindow(lower, upper, resolution)


def test_window_nodes():
    w = GridWindow([0, 1], [2, 3], 3)
    assert w.nodes().shape == (9, 2)
    np.testing.assert_array_equal(w.cell, [1.0, 1.0])
    assert GridWindow(**w.to_dict()) == w
    assert GridWindow([0, 1], [2, 3], 5) != w


def test_corner_front_is_single_node():
    f, K = problem("corner")
    front = grid_front(f, K, GridWindow([1, 1], [3, 3], 41))
    np.testing.assert_array_equal(front.pareto_points, [[1.0, 1.0]])
    np.testing.assert_array_equal(front.weak_pareto_points, [[1.0, 1.0]])


def test_half_line_in_pareto_set():
    f, K = problem("unbounded_pareto")
    front = grid_front(f, K, GridWindow([0, 0], [3, 3], 61))
    axis = front.points[front.points[:, 0] == 0.0]
    assert len(axis) == 61
    pareto = {tuple(p) for p in front.pareto_points}
    assert all(tuple(p) in pareto for p in axis)


def test_single_feasible_node_is_pareto():
    f = VectorPolynomial.parse(["x1 + x2", "x1 - x2"], 2)
    K = Polyhedron([[1, 0], [-1, 0], [0, 1], [0, -1]], [1, -1, 1, -1])  # the point (1, 1)
    front = grid_front(f, K, GridWindow([0, 0], [2, 2], 3))
    np.testing.assert_array_equal(front.pareto_points, [[1.0, 1.0]])


def test_no_feasible_node_is_an_error():
    f, K = problem("corner")
    with pytest.raises(ValueError, match="no grid node"):
        grid_front(f, K, GridWindow([-3, -3], [0, 0], 5))


def test_dimension_cap():
    f = VectorPolynomial.parse(["x1 + x4", "x2 - x3"], 4)
    K = Polyhedron(np.zeros((0, 4)), np.zeros(0))
    with pytest.raises(ValueError, match="n <= 3"):
        feasible_nodes(K, GridWindow(-np.ones(4), np.ones(4), 3))


def test_three_dimensional_window():
    f = VectorPolynomial.parse(["x1^2 + x2^2 + x3^2", "(x1 - 1)^2 + x2^2 + x3^2"], 3)
    K = Polyhedron(np.zeros((0, 3)), np.zeros(0))
    front = grid_front(f, K, GridWindow(-np.ones(3), np.ones(3) * 2, 7))
    # the front is the segment between the two centres
    P = front.pareto_points
    assert np.all(P[:, 1:] == 0.0) and np.all((P[:, 0] >= 0) & (P[:, 0] <= 1))


def test_csv_output():
    f, K = problem("corner")
    front = grid_front(f, K, GridWindow([1, 1], [3, 3], 5))
    rows = list(csv.reader(io.StringIO(front.to_csv())))
    assert rows[0] == ["x1", "x2", "f1", "f2", "pareto", "weak_pareto"]
    assert rows[1:] == [["1.0", "1.0", "2.0", "1.0", "1", "1"]]
    assert len(front.to_csv(only_front=False).splitlines()) == 1 + 25


@pytest.mark.parametrize("name, window", [
    ("corner", ([1, 1], [3, 3])),
    ("unbounded_pareto", ([0, 0], [3, 3])),
    ("exponential", EXP_WINDOW),
])
def test_refinement_never_adds_dominated_nodes(name, window):
    f, K = problem(name)
    coarse = grid_front(f, K, GridWindow(*window, 21))
    fine = grid_front(f, K, GridWindow(*window, 41))
    assert not dominated_mask(fine.values[fine.pareto], coarse.values, "strict", 1e-8).any()
    assert np.all(fine.weak >= fine.pareto)


def test_front_moves_to_boundary_when_weak_set_is_empty():
    f, K = problem("empty")
    for T in (10, 100, 1000):
        front = grid_front(f, K, GridWindow([-T, -T], [T, T], 101))
        assert front.boundary_distance("weak").max() <= 2


# -- dominance masks against a direct double loop ------------------------------------------

def _brute(F, mode, tol=1e-8):
    return np.array([not any(dominates(F[j], F[i], mode, tol) for j in range(len(F)))
                     for i in range(len(F))])


values = st.integers(1, 40).flatmap(lambda m: st.lists(
    st.lists(st.integers(-4, 4).map(float), min_size=2, max_size=2), min_size=m, max_size=m))


@settings(max_examples=150, derandomize=True, deadline=None)
@given(values)
def test_nondominated_mask_matches_double_loop(rows):
    F = np.array(rows)
    for mode in ("strict", "weak"):
        np.testing.assert_array_equal(nondominated_mask(F, mode), _brute(F, mode))
    assert np.all(nondominated_mask(F, "weak") >= nondominated_mask(F, "strict"))


@settings(max_examples=150, derandomize=True, deadline=None)
@given(values)
def test_minimal_rows_are_exactly_the_undominated_rows(rows):
    F = np.array(rows)
    np.testing.assert_array_equal(minimal_rows(F), _brute(F, "strict", tol=0.0))


def test_minimal_rows_three_objectives():
    F = np.random.default_rng(0).integers(0, 4, size=(60, 3)).astype(float)
    np.testing.assert_array_equal(minimal_rows(F), _brute(F, "strict", tol=0.0))
