"""Minimum stabbing rectangular partitions of rectilinear polygons.

Exact rational LP models, branch and bound, LP rounding diagnostics and
dragging normalization.
"""
from .formulation import CONFORMING, RPST, RPST2, build_model, relax
from .geometry import OrthoPolygon, build_arrangement, validate_polygon
from .partition import normalize_dragging, stabbing_number, validate_partition
from .rounding import diagnose, round_and_check
from .solver import branch_and_bound, brute_force, simplex

__all__ = [
    "CONFORMING",
    "RPST",
    "RPST2",
    "OrthoPolygon",
    "branch_and_bound",
    "brute_force",
    "build_arrangement",
    "build_model",
    "diagnose",
    "normalize_dragging",
    "relax",
    "round_and_check",
    "simplex",
    "stabbing_number",
    "validate_partition",
    "validate_polygon",
]
