"""Sparse multivariate polynomials over the reals.

A :class:`Polynomial` stores its terms as a mapping from exponent tuples to
nonzero float coefficients.  Everything here is immutable; arithmetic returns
new objects.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from typing import Iterable, Mapping, Sequence

import numpy as np

Exponents = tuple[int, ...]


class Polynomial:
    """Sparse polynomial in ``n`` variables.

    >>> p = Polynomial(2, {(2, 0): 1.0, (0, 1): -3.0})
    >>> p([2.0, 1.0])
    1.0
    """

    __slots__ = ("n", "_terms", "_degree", "_grad")

    def __init__(self, n: int, terms: Mapping[Sequence[int], float] | None = None):
        if n < 1:
            raise ValueError("a polynomial needs at least one variable")
        self.n = int(n)
        clean: dict[Exponents, float] = {}
        for exps, coef in (terms or {}).items():
            e = tuple(int(k) for k in exps)
            if len(e) != self.n:
                raise ValueError(f"exponent vector {e} does not have length {self.n}")
            if any(k < 0 for k in e):
                raise ValueError(f"negative exponent in {e}")
            c = clean.get(e, 0.0) + float(coef)
            if c == 0.0:
                clean.pop(e, None)
            else:
                clean[e] = c
        self._terms = clean
        self._degree = max((sum(e) for e in clean), default=-1)
        self._grad: list[Polynomial] | None = None

    # -- construction helpers ------------------------------------------------
    @classmethod
    def zero(cls, n: int) -> Polynomial:
        return cls(n)

    @classmethod
    def constant(cls, n: int, c: float) -> Polynomial:
        return cls(n, {(0,) * n: c})

    @classmethod
    def variable(cls, n: int, i: int) -> Polynomial:
        e = [0] * n
        e[i] = 1
        return cls(n, {tuple(e): 1.0})

    @classmethod
    def from_terms(cls, n: int, terms: Iterable[Mapping]) -> Polynomial:
        """Build from the instance-file encoding ``[{"coef": c, "exps": [...]}, ...]``."""
        acc: dict[Exponents, float] = {}
        for t in terms:
            e = tuple(int(k) for k in t["exps"])
            acc[e] = acc.get(e, 0.0) + float(t["coef"])
        return cls(n, acc)

    @classmethod
    def parse(cls, text: str, n: int) -> Polynomial:
        """Parse an arithmetic expression such as ``"x1^3 - x1^2*x2 + 1"``."""
        from .expr import expr_to_polynomial, parse_constraint

        return expr_to_polynomial(parse_constraint(text), n)

    def to_terms(self) -> list[dict]:
        return [{"coef": c, "exps": list(e)} for e, c in sorted(self._terms.items())]

    # -- basic properties ----------------------------------------------------
    @property
    def terms(self) -> dict[Exponents, float]:
        return dict(self._terms)

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return self._degree

    def is_zero(self) -> bool:
        return not self._terms

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        return f"Polynomial({self.n}, {self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in sorted(self._terms.items(), key=lambda t: (-sum(t[0]), tuple(-k for k in t[0]))):
            mono = "*".join(
                f"x{i + 1}" if k == 1 else f"x{i + 1}^{k}" for i, k in enumerate(e) if k
            )
            if not mono:
                parts.append(f"{c:g}")
            elif c == 1.0:
                parts.append(mono)
            elif c == -1.0:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c:g}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    # -- evaluation ----------------------------------------------------------
    def __call__(self, x) -> float | np.ndarray:
        """Evaluate at a point of shape ``(n,)`` or a batch of shape ``(m, n)``."""
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.n:
            raise ValueError(f"expected {self.n} coordinates, got {x.shape[-1]}")
        if x.ndim == 1:
            total = 0.0
            for e, c in self._terms.items():
                term = c
                for xi, k in zip(x, e):
                    if k:
                        term *= xi**k
                total += term
            return float(total)
        out = np.zeros(x.shape[:-1])
        for e, c in self._terms.items():
            term = np.full(x.shape[:-1], c)
            for i, k in enumerate(e):
                if k:
                    term = term * x[..., i] ** k
            out += term
        return out

    def derivative(self, i: int) -> Polynomial:
        out: dict[Exponents, float] = {}
        for e, c in self._terms.items():
            if e[i]:
                d = list(e)
                d[i] -= 1
                out[tuple(d)] = c * e[i]
        return Polynomial(self.n, out)

    def gradient_polys(self) -> list[Polynomial]:
        if self._grad is None:
            self._grad = [self.derivative(i) for i in range(self.n)]
        return self._grad

    def gradient(self, x) -> np.ndarray:
        """Gradient at ``x``; a batch ``(m, n)`` gives an ``(m, n)`` array."""
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.n:
            raise ValueError(f"expected {self.n} coordinates, got {x.shape[-1]}")
        return np.stack([np.asarray(d(x)) for d in self.gradient_polys()], axis=-1)

    # -- arithmetic ----------------------------------------------------------
    def _check(self, other: Polynomial) -> None:
        if other.n != self.n:
            raise ValueError(f"variable count mismatch: {self.n} vs {other.n}")

    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial.constant(self.n, float(other))

    def __add__(self, other) -> Polynomial:
        other = self._coerce(other)
        acc = dict(self._terms)
        for e, c in other._terms.items():
            acc[e] = acc.get(e, 0.0) + c
        return Polynomial(self.n, acc)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial(self.n, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> Polynomial:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> Polynomial:
        return self._coerce(other) - self

    def __mul__(self, other) -> Polynomial:
        if not isinstance(other, Polynomial):
            return scale(self, float(other))
        self._check(other)
        acc: dict[Exponents, float] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                acc[e] = acc.get(e, 0.0) + c1 * c2
        return Polynomial(self.n, acc)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Polynomial:
        if int(k) != k or k < 0:
            raise ValueError("only non-negative integer powers are supported")
        out = Polynomial.constant(self.n, 1.0)
        base = self
        k = int(k)
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def homogeneous_part(self, k: int) -> Polynomial:
        return Polynomial(self.n, {e: c for e, c in self._terms.items() if sum(e) == k})


def evaluate(p: Polynomial, x) -> float:
    return p(x)


def gradient(p: Polynomial, x) -> np.ndarray:
    return p.gradient(x)


def add(p: Polynomial, q: Polynomial) -> Polynomial:
    return p + q


def scale(p: Polynomial, c: float) -> Polynomial:
    c = float(c)
    return Polynomial(p.n, {e: c * v for e, v in p._terms.items()})


def leading_form(p: Polynomial) -> Polynomial:
    """Top-degree homogeneous component of ``p``.

    For ``d = deg p`` this equals ``lim_{t -> inf} p(t x) / t**d``: every term of
    lower degree ``k`` contributes ``t**(k - d) -> 0`` and the degree-``d`` terms
    are unchanged by the rescaling.
    """
    if p.is_zero():
        raise ValueError("the zero polynomial has no leading form")
    return p.homogeneous_part(p.degree)


# -- coefficient space ---------------------------------------------------------

def monomial_basis(n: int, d: int) -> list[Exponents]:
    """Exponent vectors of total degree <= d in graded lexicographic order.

    Degree blocks ascend (1, x1, ..., xn, x1^2, x1*x2, ...); inside a block the
    exponent tuples descend lexicographically, so x1^d comes first.
    """
    if d < 0:
        return []
    basis: list[Exponents] = []
    for k in range(d + 1):
        block = [e for e in itertools.product(range(k + 1), repeat=n) if sum(e) == k]
        block.sort(reverse=True)
        basis.extend(block)
    return basis


def basis_size(n: int, d: int) -> int:
    return comb(n + d, d) if d >= 0 else 0


@dataclass(frozen=True)
class CoefficientVector:
    n: int
    d: int
    values: np.ndarray

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.values))


def to_coefficient_vector(p: Polynomial, d: int) -> CoefficientVector:
    if p.degree > d:
        raise ValueError(f"degree {p.degree} exceeds the cap {d}")
    basis = monomial_basis(p.n, d)
    index = {e: i for i, e in enumerate(basis)}
    values = np.zeros(len(basis))
    for e, c in p._terms.items():
        values[index[e]] = c
    return CoefficientVector(p.n, d, values)


def from_coefficient_vector(cv: CoefficientVector) -> Polynomial:
    basis = monomial_basis(cv.n, cv.d)
    if len(cv.values) != len(basis):
        raise ValueError(f"expected {len(basis)} coefficients, got {len(cv.values)}")
    return Polynomial(cv.n, {e: float(v) for e, v in zip(basis, cv.values) if v != 0.0})


def poly_norm(p: Polynomial) -> float:
    """Euclidean norm of the coefficient vector (independent of the basis order)."""
    return float(np.sqrt(sum(c * c for c in p._terms.values())))


# -- vector polynomials --------------------------------------------------------

class VectorPolynomial:
    """An objective ``f = (f_1, ..., f_s)``; every component must have degree >= 1."""

    __slots__ = ("components",)

    def __init__(self, components: Sequence[Polynomial]):
        comps = tuple(components)
        if not comps:
            raise ValueError("a vector polynomial needs at least one component")
        n = comps[0].n
        for i, c in enumerate(comps):
            if c.n != n:
                raise ValueError("all components must share the variable count")
            if c.degree < 1:
                raise ValueError(f"component {i + 1} has degree {c.degree}; degree >= 1 required")
        self.components = comps

    @classmethod
    def parse(cls, texts: Sequence[str], n: int) -> VectorPolynomial:
        return cls([Polynomial.parse(t, n) for t in texts])

    @property
    def n(self) -> int:
        return self.components[0].n

    @property
    def s(self) -> int:
        return len(self.components)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(c.degree for c in self.components)

    def __getitem__(self, i: int) -> Polynomial:
        return self.components[i]

    def __iter__(self):
        return iter(self.components)

    def __len__(self) -> int:
        return len(self.components)

    def __eq__(self, other) -> bool:
        if not isinstance(other, VectorPolynomial):
            return NotImplemented
        return self.components == other.components

    def __hash__(self) -> int:
        return hash(self.components)

    def __repr__(self) -> str:
        return "VectorPolynomial(" + ", ".join(str(c) for c in self.components) + ")"

    def __call__(self, x) -> np.ndarray:
        """Values ``(s,)`` at a point, or ``(m, s)`` for a batch of points."""
        return np.stack([np.asarray(c(x)) for c in self.components], axis=-1)

    def jacobian(self, x) -> np.ndarray:
        """``(s, n)`` matrix whose rows are the component gradients."""
        return np.stack([c.gradient(x) for c in self.components], axis=-2)

    def norm(self) -> float:
        """Coefficient norm on the product space (concatenated coefficients)."""
        return float(np.sqrt(sum(poly_norm(c) ** 2 for c in self.components)))


def vector_leading_form(f: VectorPolynomial) -> VectorPolynomial:
    return VectorPolynomial([leading_form(c) for c in f.components])


def perturb(
    f: VectorPolynomial, g: Sequence[Polynomial], lower_degree: bool = False
) -> tuple[VectorPolynomial, bool]:
    """Return ``(f + g, ok)``.

    ``ok`` reports whether ``deg g_i < deg f_i`` for every component; it is
    always computed, but only enforced (``ValueError``) when ``lower_degree``
    is requested.
    """
    g = list(g)
    if len(g) != f.s:
        raise ValueError(f"perturbation has {len(g)} components, objective has {f.s}")
    ok = all(gi.degree < fi.degree for fi, gi in zip(f.components, g))
    if lower_degree and not ok:
        raise ValueError("perturbation does not have strictly lower degree in every component")
    return VectorPolynomial([fi + gi for fi, gi in zip(f.components, g)]), ok
