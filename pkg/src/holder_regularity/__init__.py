"""
Hölder Regularity Package

Certified regularity of symmetric univariate subdivision schemes from the
spectral radius of a single transition matrix.

Main functionality:
- Exact Laurent-polynomial arithmetic over the rationals
- Exact sign decisions for B(xi) in s = sin^2(xi/2) via Sturm sequences
- Primal and dual pseudo-spline symbols (B-splines, Dubuc-Deslauriers)
- Certified spectral-radius enclosures and regularity reports
- Exact subdivision, divided differences and empirical growth checks
- Ratio constants between B-polynomials and comparison-inequality checks

Usage:
    >>> from holder_regularity import analyze, primal_symbol
    >>> report = analyze(primal_symbol(3, 2))
    >>> round(report.gamma, 5)
    2.83007
    >>> report.optimal
    True
"""

__version__ = "1.0.0"

from .comparisons import compare_families, gap_bound, min_ratio_constant, theorem_constants, verify_theorems
from .exceptions import (
    EnclosureTooWideError,
    InputError,
    MethodInapplicableError,
    RegularityError,
)
from .families import FamilyId, b_spoly, dual_symbol, parse_family_spec, primal_symbol
from .laurent import LaurentPoly, SymmetricMask, center_symmetric, extract_one_plus_z
from .regularity import (
    RationalMatrix,
    analyze,
    analyze_family,
    build_matrix_folded,
    build_matrix_large,
    build_matrix_transpose,
    char_poly,
    regularity_from_rho,
    regularity_table,
    spectral_radius,
)
from .schemas import (
    ComparisonResult,
    MaskFile,
    PositivityVerdict,
    RegularityReport,
    ReportDocument,
    RhoEnclosure,
    TableDocument,
)
from .trig import SPoly, positivity, sturm_root_count, to_s_poly

__all__ = [
    "analyze",
    "analyze_family",
    "regularity_table",
    "regularity_from_rho",
    "spectral_radius",
    "char_poly",
    "build_matrix_large",
    "build_matrix_folded",
    "build_matrix_transpose",
    "RationalMatrix",
    "LaurentPoly",
    "SymmetricMask",
    "center_symmetric",
    "extract_one_plus_z",
    "SPoly",
    "to_s_poly",
    "positivity",
    "sturm_root_count",
    "FamilyId",
    "parse_family_spec",
    "primal_symbol",
    "dual_symbol",
    "b_spoly",
    "min_ratio_constant",
    "gap_bound",
    "theorem_constants",
    "compare_families",
    "verify_theorems",
    "RegularityReport",
    "RhoEnclosure",
    "PositivityVerdict",
    "ComparisonResult",
    "MaskFile",
    "ReportDocument",
    "TableDocument",
    "RegularityError",
    "InputError",
    "MethodInapplicableError",
    "EnclosureTooWideError",
]
