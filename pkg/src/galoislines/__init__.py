"""Exact arithmetic verification of the Galois-line arrangement of the
degree-(q+1) space model of the curve y^((q+1)/2) = x^q - x, and of the
Galois points of its distinguished plane models."""

__version__ = "0.1.0"

from .autgroup import (AutGroup, CurveAutomorphism, GroupIsoClass,
                       build_full_group, identify_structure)
from .curve import CurvePoint, EmbeddedCurve, SectionDivisor
from .field import FieldElem, FieldError, Tower, make_tower, nth_roots
from .lines import (LineVerdict, classify_line, expected_by_case, fiber_group,
                    is_galois, projection_degree, verify_fiber_transitivity)
from .planemodels import (GaloisPointRecord, PlaneModel, galois_points,
                          is_birational, project_from, singular_points,
                          verify_corollary)
from .projspace import LineP3, PlaneP3, ProjPoint, enumerate_lines
from .sweep import run_sweep

__all__ = [
    "AutGroup", "CurveAutomorphism", "CurvePoint", "EmbeddedCurve",
    "FieldElem", "FieldError", "GaloisPointRecord", "GroupIsoClass",
    "LineP3", "LineVerdict", "PlaneModel", "PlaneP3", "ProjPoint",
    "SectionDivisor", "Tower", "build_full_group", "classify_line",
    "enumerate_lines", "expected_by_case", "fiber_group", "galois_points",
    "identify_structure", "is_birational", "is_galois", "make_tower",
    "nth_roots", "project_from", "projection_degree", "run_sweep",
    "singular_points", "verify_corollary", "verify_fiber_transitivity",
]
