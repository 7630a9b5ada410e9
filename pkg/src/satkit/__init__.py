"""Saturation and forbidden-configuration toolkit for (0,1) and (0,..,l) matrices."""
from __future__ import annotations

from .containment import ContainmentWitness, ForbiddenFamily, MatrixFamily, contains, creates, family_free
from .families import load_family, parse_family, parse_member
from .matrix import (
    Matrix,
    MatrixFormatError,
    build_K_l,
    build_T,
    canonical_form,
    f,
    format_matrix,
    isomorphic,
    parse_matrix,
    submatrix,
)
from .saturation import SaturationReport, close, is_m_saturated, is_saturated
from .search import ResultRecord, SearchProblem, run_search
from .constructions import gallery

__version__ = "0.1.0"

__all__ = [
    "ContainmentWitness", "ForbiddenFamily", "Matrix", "MatrixFamily", "MatrixFormatError",
    "ResultRecord", "SaturationReport", "SearchProblem", "build_K_l", "build_T",
    "canonical_form", "close", "contains", "creates", "f", "family_free", "format_matrix",
    "gallery", "is_m_saturated", "is_saturated", "isomorphic", "load_family", "parse_family",
    "parse_matrix", "parse_member", "run_search", "submatrix",
]
