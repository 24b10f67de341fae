"""Polynomial vector optimization: regularity, Pareto solutions and stability probes.

The objective is a vector polynomial ``f = (f_1, ..., f_s)`` minimised over a
closed set ``K``.  Behaviour at infinity is read off the leading forms of the
components on the asymptotic cone of ``K``.
"""
from .constraints import (Cone, ConstraintSet, CustomSet, EmptySetError, Polyhedron,
                          asymptotic_cone, membership, sample_base, validate_declared_cone)
from .expr import parse_constraint
from .oracle import GridWindow, dominates, grid_front
from .poly import (CoefficientVector, Polynomial, VectorPolynomial, from_coefficient_vector,
                   leading_form, perturb, to_coefficient_vector, vector_leading_form)
from .regularity import (Decision, StrongReason, Verdict, analyze_regularity,
                         scalar_recession_verdict, wvcp_r0_check, zero_weak_status)
from .solver import (ParetoResult, Status, bounded_front_radius, certify_pareto,
                     precheck_emptiness, solve)

__version__ = "0.1.0"

__all__ = [
    "CoefficientVector", "Cone", "ConstraintSet", "CustomSet", "Decision", "EmptySetError",
    "GridWindow", "ParetoResult", "Polyhedron", "Polynomial", "Status", "StrongReason",
    "VectorPolynomial", "Verdict", "analyze_regularity", "asymptotic_cone",
    "bounded_front_radius", "certify_pareto", "dominates", "from_coefficient_vector",
    "grid_front", "leading_form", "membership", "parse_constraint", "perturb",
    "precheck_emptiness", "sample_base", "scalar_recession_verdict", "solve",
    "to_coefficient_vector", "validate_declared_cone", "vector_leading_form", "wvcp_r0_check",
    "zero_weak_status",
]
