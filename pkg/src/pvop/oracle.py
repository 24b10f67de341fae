"""Brute-force Pareto fronts on rectangular grids.

This module is the independent ground truth for the solver and the analyzer:
it enumerates grid nodes of a window, keeps the feasible ones and filters them
by dominance.  Cost is ``resolution ** n``; only ``n <= 3`` is accepted.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import TextIO

import numpy as np

from .constraints import ConstraintSet, MEMBERSHIP_TOL
from .poly import VectorPolynomial

DOMINANCE_TOL = 1e-8
MAX_DIM = 3
_CHUNK = 4096
_BLOCK = 1 << 22  # array elements per pairwise comparison block


@dataclass(frozen=True, eq=False)
class GridWindow:
    """Axis-aligned box ``[lower, upper]`` with ``resolution`` nodes per axis."""

    lower: np.ndarray
    upper: np.ndarray
    resolution: int

    def __post_init__(self):
        lo = np.atleast_1d(np.asarray(self.lower, dtype=float))
        hi = np.atleast_1d(np.asarray(self.upper, dtype=float))
        if lo.shape != hi.shape:
            raise ValueError("lower and upper must have the same length")
        if not np.all(lo < hi):
            raise ValueError("need lower < upper in every coordinate")
        if int(self.resolution) < 2:
            raise ValueError("resolution must be at least 2")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)
        object.__setattr__(self, "resolution", int(self.resolution))

    def __eq__(self, other) -> bool:
        return (isinstance(other, GridWindow) and self.resolution == other.resolution
                and np.array_equal(self.lower, other.lower)
                and np.array_equal(self.upper, other.upper))

    def __hash__(self) -> int:
        return hash((self.lower.tobytes(), self.upper.tobytes(), self.resolution))

    @classmethod
    def centered(cls, center, half_width: float, resolution: int) -> GridWindow:
        c = np.asarray(center, dtype=float)
        return cls(c - half_width, c + half_width, resolution)

    @property
    def n(self) -> int:
        return len(self.lower)

    @property
    def cell(self) -> np.ndarray:
        return (self.upper - self.lower) / (self.resolution - 1)

    def axes(self) -> list[np.ndarray]:
        return [np.linspace(a, b, self.resolution) for a, b in zip(self.lower, self.upper)]

    def nodes(self) -> np.ndarray:
        mesh = np.meshgrid(*self.axes(), indexing="ij")
        return np.column_stack([m.ravel() for m in mesh])

    def to_dict(self) -> dict:
        return {"lower": self.lower.tolist(), "upper": self.upper.tolist(),
                "resolution": self.resolution}


def dominates(a, b, mode: str = "strict", tol: float = DOMINANCE_TOL) -> bool:
    """Does objective vector ``a`` dominate ``b``?

    ``strict``: ``a <= b`` everywhere and ``a < b`` somewhere (beyond ``tol``).
    ``weak``: ``a < b`` in every component (beyond ``tol``).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError("objective vectors must have equal length")
    if mode == "strict":
        return bool(np.all(a <= b + tol) and np.any(a < b - tol))
    if mode == "weak":
        return bool(np.all(a < b - tol))
    raise ValueError(f"unknown dominance mode {mode!r}")


def dominated_mask(P: np.ndarray, Q: np.ndarray, mode: str, tol: float) -> np.ndarray:
    """Mask over rows of ``P``: dominated by at least one row of ``Q``."""
    out = np.zeros(len(P), dtype=bool)
    if len(Q) == 0:
        return out
    step = max(1, _BLOCK // (len(Q) * P.shape[1]))
    for start in range(0, len(P), step):
        blk = P[start:start + step]
        lhs = Q[None, :, :]
        rhs = blk[:, None, :]
        if mode == "strict":
            hit = np.all(lhs <= rhs + tol, axis=2) & np.any(lhs < rhs - tol, axis=2)
        else:
            hit = np.all(lhs < rhs - tol, axis=2)
        out[start:start + len(blk)] = hit.any(axis=1)
    return out


def nondominated_mask(F: np.ndarray, mode: str = "strict", tol: float = DOMINANCE_TOL) -> np.ndarray:
    """Rows of ``F`` not dominated by any other row.

    A sweep in order of increasing value sum discards rows dominated by the
    running front; survivors are then checked against every row, so the
    result is exact for the given tolerance regardless of sweep order.
    """
    F = np.asarray(F, dtype=float)
    m = len(F)
    if m == 0:
        return np.zeros(0, dtype=bool)
    order = np.lexsort(F.T[::-1])
    order = order[np.argsort(F[order].sum(axis=1), kind="stable")]
    front: list[int] = []
    for start in range(0, m, _CHUNK):
        idx = order[start:start + _CHUNK]
        blk = F[idx]
        alive = ~dominated_mask(blk, F[front], mode, tol) if front else np.ones(len(idx), bool)
        idx, blk = idx[alive], blk[alive]
        inner = dominated_mask(blk, blk, mode, tol)
        front.extend(idx[~inner].tolist())
    cand = np.array(front, dtype=int)
    keep = ~dominated_mask(F[cand], F, mode, tol)
    mask = np.zeros(m, dtype=bool)
    mask[cand[keep]] = True
    return mask


def minimal_rows(F: np.ndarray) -> np.ndarray:
    """Mask of rows not dominated in the exact componentwise order (no tolerance).

    Two objectives use a sort-and-scan staircase in ``O(m log m)``; otherwise
    this falls back to :func:`nondominated_mask` with zero tolerance.
    """
    F = np.asarray(F, dtype=float)
    m = len(F)
    if m == 0 or F.shape[1] != 2:
        return nondominated_mask(F, "strict", 0.0) if m else np.zeros(0, dtype=bool)
    order = np.lexsort((F[:, 1], F[:, 0]))
    a, b = F[order, 0], F[order, 1]
    new_group = np.ones(m, dtype=bool)
    new_group[1:] = (a[1:] != a[:-1]) | (b[1:] != b[:-1])
    first = np.maximum.accumulate(np.where(new_group, np.arange(m), 0))
    prefix = np.concatenate([[np.inf], np.minimum.accumulate(b)[:-1]])
    keep = b < prefix[first]
    mask = np.zeros(m, dtype=bool)
    mask[order[keep]] = True
    return mask


@dataclass
class GridFront:
    points: np.ndarray  # feasible nodes, (m, n)
    values: np.ndarray  # objective values, (m, s)
    pareto: np.ndarray  # mask, not strictly dominated
    weak: np.ndarray  # mask, not weakly dominated
    window: GridWindow

    @property
    def pareto_points(self) -> np.ndarray:
        return self.points[self.pareto]

    @property
    def weak_pareto_points(self) -> np.ndarray:
        return self.points[self.weak]

    def boundary_distance(self, which: str = "weak") -> np.ndarray:
        """Distance of front nodes to the window boundary, in grid cells."""
        P = self.points[self.weak if which == "weak" else self.pareto]
        w = self.window
        cells = np.minimum(P - w.lower, w.upper - P) / w.cell
        return np.min(cells, axis=1)

    def write_csv(self, out: TextIO, only_front: bool = True) -> None:
        n, s = self.points.shape[1], self.values.shape[1]
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow([f"x{i + 1}" for i in range(n)] + [f"f{j + 1}" for j in range(s)]
                        + ["pareto", "weak_pareto"])
        rows = np.flatnonzero(self.weak) if only_front else range(len(self.points))
        for r in rows:
            writer.writerow([repr(float(v)) for v in self.points[r]]
                            + [repr(float(v)) for v in self.values[r]]
                            + [int(self.pareto[r]), int(self.weak[r])])

    def to_csv(self, only_front: bool = True) -> str:
        buf = io.StringIO()
        self.write_csv(buf, only_front)
        return buf.getvalue()


def feasible_nodes(K: ConstraintSet, window: GridWindow, tol: float = MEMBERSHIP_TOL) -> np.ndarray:
    if window.n > MAX_DIM:
        raise ValueError(f"grid oracle supports n <= {MAX_DIM}, got n = {window.n}")
    if window.n != K.n:
        raise ValueError(f"window has {window.n} coordinates, set has {K.n}")
    X = window.nodes()
    return X[K.contains(X, tol)]


def grid_front(f: VectorPolynomial, K: ConstraintSet, window: GridWindow,
               tol: float = DOMINANCE_TOL) -> GridFront:
    """Pareto and weak Pareto nodes among the feasible nodes of ``window``."""
    X = feasible_nodes(K, window)
    if len(X) == 0:
        raise ValueError("no grid node of the window lies in the constraint set")
    F = np.atleast_2d(f(X)).reshape(len(X), -1)
    weak = nondominated_mask(F, "weak", tol)
    pareto = nondominated_mask(F, "strict", tol)
    return GridFront(X, F, pareto, weak, window)
