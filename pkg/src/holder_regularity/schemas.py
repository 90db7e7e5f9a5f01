"""
Pydantic v2 models for reports and documents.

Rationals travel as "num/den" strings and are exact Fractions in memory;
floats keep pydantic's shortest round-trip rendering.
"""

import hashlib
from datetime import datetime, timezone
from fractions import Fraction
from typing import Annotated, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, PlainSerializer, PlainValidator, WithJsonSchema, model_validator

from .laurent import LaurentPoly, format_rational, parse_rational


def _coerce_rational(value) -> Fraction:
    return parse_rational(value)


RationalStr = Annotated[
    Fraction,
    PlainValidator(_coerce_rational),
    PlainSerializer(format_rational, return_type=str),
    WithJsonSchema({"type": "string", "pattern": r"^-?\d+(/\d+)?$"}),
]

PositivityKind = Literal["StrictlyPositive", "NonnegativeWithZero", "Indefinite"]
FamilyKind = Literal["primal", "dual"]


class RationalInterval(BaseModel):
    """Closed interval [lo, hi] with rational endpoints."""

    lo: RationalStr
    hi: RationalStr

    model_config = ConfigDict(extra="forbid", frozen=True)

    @model_validator(mode="after")
    def _ordered(self):
        if self.lo > self.hi:
            raise ValueError(f"interval endpoints out of order: {self.lo} > {self.hi}")
        return self


class PositivityVerdict(BaseModel):
    """
    Sign of an s-polynomial on [0, 1].

    Attributes:
        kind: StrictlyPositive, NonnegativeWithZero or Indefinite
        witness: interval isolating a root in [0, 1]; for a polynomial that is
            negative on all of [0, 1] it is the point s = 0
    """

    kind: PositivityKind
    witness: Optional[RationalInterval] = None

    model_config = ConfigDict(extra="forbid", frozen=True)

    @model_validator(mode="after")
    def _witness_matches_kind(self):
        if (self.kind == "StrictlyPositive") != (self.witness is None):
            raise ValueError("a witness is required exactly when the verdict is not StrictlyPositive")
        return self


class RhoEnclosure(BaseModel):
    """
    Certified enclosure of a spectral radius.

    The true value lies in [estimate - radius_bound, estimate + radius_bound].
    ``exact`` is set when the dominant root is rational.
    """

    estimate: float = Field(..., ge=0.0)
    radius_bound: float = Field(..., ge=0.0)
    charpoly: list[RationalStr] = Field(..., description="det(A - λI), constant term first")
    exact: Optional[RationalStr] = None

    model_config = ConfigDict(extra="forbid", frozen=True)


class RegularityReport(BaseModel):
    """
    Outcome of the spectral-radius regularity analysis.

    Attributes:
        multiplicity: power of (1+z) extracted from the symbol
        r: exponent used in the factorization (multiplicity - 1 unless overridden)
        p: half-width of the symmetric difference mask
        difference_mask: (b_0, ..., b_p)
        s_poly: coefficients of B in s = sin^2(xi/2), constant term first
        folded_matrix: transition matrix used for rho (absent when p = 0)
        gamma: regularity r - log2(rho); absent when the method does not apply
        optimal: True when gamma is the exact regularity, not just a lower bound
        integer_exponent_caveat: log2(rho) is an integer, so smoothness holds
            only for exponents strictly below gamma
    """

    multiplicity: int = Field(..., ge=0)
    r: int = Field(..., ge=0)
    p: int = Field(..., ge=0)
    difference_mask: list[RationalStr]
    s_poly: list[RationalStr]
    positivity: PositivityVerdict
    folded_matrix: Optional[list[list[RationalStr]]] = None
    rho: Optional[RhoEnclosure] = None
    gamma: Optional[float] = None
    optimal: bool = False
    integer_exponent_caveat: bool = False
    notes: str = ""

    model_config = ConfigDict(extra="forbid")


class MaskFile(BaseModel):
    """
    Mask document: coefficients as "num/den" or integer strings.

    Attributes:
        coeffs: coefficients a_offset, a_{offset+1}, ...
        offset: exponent of the first coefficient
    """

    coeffs: list[RationalStr] = Field(..., min_length=1)
    offset: int = 0

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode="after")
    def _nonzero(self):
        if all(c == 0 for c in self.coeffs):
            raise ValueError("mask has no nonzero coefficient")
        return self

    def to_laurent(self) -> LaurentPoly:
        return LaurentPoly(self.offset, tuple(self.coeffs))

    @classmethod
    def from_laurent(cls, a: LaurentPoly) -> "MaskFile":
        return cls(coeffs=list(a.coeffs), offset=a.low)


class Provenance(BaseModel):
    """Where a document came from."""

    source: str
    input_hash: str
    tool_version: str
    created_at: str

    model_config = ConfigDict(extra="forbid")


class ReportDocument(BaseModel):
    """Serialized analysis: the report plus provenance."""

    symbol: MaskFile
    report: RegularityReport
    provenance: Provenance

    model_config = ConfigDict(extra="forbid")


class TableCell(BaseModel):
    m: int = Field(..., ge=1)
    l: int = Field(..., ge=0)
    gamma: float
    rho: float
    optimal: bool
    caveat: bool

    model_config = ConfigDict(extra="forbid")


class TableDocument(BaseModel):
    """Regularity table for one family, ordered by (m, l)."""

    kind: FamilyKind
    m_max: int = Field(..., ge=2)
    decimals: int = Field(..., ge=0)
    cells: list[TableCell]
    provenance: Provenance

    model_config = ConfigDict(extra="forbid")


class ComparisonResult(BaseModel):
    """
    Ratio comparison between two B-polynomials.

    Attributes:
        c_star: sup over [0, 1] of num/den
        c_star_radius: enclosure radius of c_star
        c_star_exact: c_star as an exact rational when it is attained at a rational point
        argmax: interval containing a maximizer
        c_theorem: closed-form constant of the matching theorem, if any
        theorem: name of the matching statement (T5i ... T7b)
        r, r_tilde: exponents of the denominator and numerator schemes
        gap_bound: r_tilde - r - log2(c_star)
    """

    c_star: float = Field(..., ge=0.0)
    c_star_radius: float = Field(..., ge=0.0)
    c_star_exact: Optional[RationalStr] = None
    argmax: RationalInterval
    c_theorem: Optional[RationalStr] = None
    theorem: Optional[str] = None
    r: Optional[int] = None
    r_tilde: Optional[int] = None
    gap_bound: Optional[float] = None

    model_config = ConfigDict(extra="forbid")


class ComparisonDocument(BaseModel):
    spec_a: str
    spec_b: str
    result: ComparisonResult
    provenance: Provenance

    model_config = ConfigDict(extra="forbid")


class TheoremCheck(BaseModel):
    """One two-sided inequality lower <= value <= upper."""

    statement: str
    m: int
    l: int
    lower: float
    value: float
    upper: float
    ok: bool

    model_config = ConfigDict(extra="forbid")


class VerificationReport(BaseModel):
    m_max: int
    checks_run: dict[str, int]
    violations: list[TheoremCheck]

    model_config = ConfigDict(extra="forbid")

    @property
    def passed(self) -> bool:
        return not self.violations


class SimulationDocument(BaseModel):
    """
    Empirical run of the central-coefficient recursion.

    Attributes:
        central: exact b_{j,0}, j = 0..jmax
        ratio_estimates: b_{j,0} / b_{j-1,0} for j >= 1
        root_estimates: b_{j,0}^(1/j) for j >= 1
        rho_algebraic: spectral radius from the characteristic polynomial
        difference: last ratio estimate minus rho_algebraic
        max_at_center: exact max-at-center verdict, when requested
    """

    spec: str
    jmax: int
    central: list[RationalStr]
    ratio_estimates: list[float]
    root_estimates: list[float]
    rho_algebraic: float
    difference: float
    max_at_center: Optional[bool] = None
    provenance: Provenance

    model_config = ConfigDict(extra="forbid")


def make_provenance(source: str, payload: str) -> Provenance:
    """Provenance for a document whose defining input serializes to `payload`."""
    from . import __version__

    return Provenance(
        source=source,
        input_hash=hashlib.sha256(payload.encode("utf-8")).hexdigest(),
        tool_version=__version__,
        created_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
    )


def report_document(symbol: LaurentPoly, report: RegularityReport, source: str) -> ReportDocument:
    """Wrap a report; the input hash depends on the symbol only, not on how it was named."""
    mask = MaskFile.from_laurent(symbol)
    return ReportDocument(symbol=mask, report=report, provenance=make_provenance(source, mask.model_dump_json()))
