"""
Regularity of symmetric subdivision schemes from one spectral radius.

The symbol is factored as a(z) = (1+z)^(r+1) / 2^r * b(z) with b palindromic.
The growth rate rho of the central coefficients of b(z) b(z^2) ... b(z^(2^j))
is the spectral radius of a small transition matrix built from b, and the
scheme is C^gamma for every gamma < r - log2(rho). When B(xi) > 0 the bound is
the exact regularity.

The spectral radius is taken from the exact characteristic polynomial and
enclosed in a certified interval.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np
import sympy as sp

from .config import settings
from .exceptions import (
    ConvergenceConditionError,
    DegenerateBSplineError,
    EnclosureTooWideError,
    IndefiniteSymbolError,
    OutOfTheoremRangeError,
    ParameterRangeError,
    ReductionWindowExceededError,
)
from .families import FamilyId
from .laurent import LaurentPoly, SymmetricMask, center_symmetric, evaluate, extract_one_plus_z, mul, power, scale
from .schemas import FamilyKind, RegularityReport, RhoEnclosure, TableCell
from .trig import SPoly, positivity, to_s_poly

logger = logging.getLogger(__name__)

_LAMBDA = sp.Symbol("lambda")

# relative inflation applied to float moduli so enclosures stay outward-rounded
_ULP_PAD = 2.0**-48


# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RationalMatrix:
    """Square matrix of exact rationals, stored row by row."""

    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(Fraction(x) for x in row) for row in self.rows)
        n = len(rows)
        if n == 0 or any(len(row) != n for row in rows):
            raise ValueError("RationalMatrix must be square and non-empty")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable]) -> "RationalMatrix":
        return cls(tuple(tuple(row) for row in rows))

    @property
    def n(self) -> int:
        return len(self.rows)

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(tuple(zip(*self.rows)))

    def matvec(self, v: Sequence[Fraction]) -> tuple[Fraction, ...]:
        if len(v) != self.n:
            raise ValueError(f"vector of length {len(v)} does not match dimension {self.n}")
        return tuple(sum((a * x for a, x in zip(row, v)), Fraction(0)) for row in self.rows)

    def to_sympy(self) -> sp.Matrix:
        return sp.Matrix([[sp.Rational(x.numerator, x.denominator) for x in row] for row in self.rows])

    def to_lists(self) -> list[list[Fraction]]:
        return [list(row) for row in self.rows]


def _require_nondegenerate(b: SymmetricMask) -> None:
    if b.p == 0:
        raise DegenerateBSplineError("p = 0: the scheme is a B-spline and rho = 1 without a matrix")


def build_matrix_large(b: SymmetricMask) -> RationalMatrix:
    """
    (2p-1) x (2p-1) matrix with entry (k, l) = b_{k-2l}, k and l in -p+1..p-1.

    Examples:
        >>> build_matrix_large(SymmetricMask.from_half([1, 0])).rows
        ((Fraction(1, 1),),)
    """
    _require_nondegenerate(b)
    idx = range(-b.p + 1, b.p)
    return RationalMatrix(tuple(tuple(b.b(k - 2 * l) for l in idx) for k in idx))


def build_matrix_folded(b: SymmetricMask) -> RationalMatrix:
    """
    p x p folded matrix: m_{k,0} = b_k, m_{k,l} = b_{|k-2l|} + b_{k+2l} for l >= 1.

    It acts on (b_{j,0}, ..., b_{j,p-1}) using the symmetry b_{j,-k} = b_{j,k}.
    """
    _require_nondegenerate(b)
    rows = []
    for k in range(b.p):
        row = [b.b(k)]
        row.extend(b.b(k - 2 * l) + b.b(k + 2 * l) for l in range(1, b.p))
        rows.append(tuple(row))
    return RationalMatrix(tuple(rows))


def build_matrix_transpose(b: SymmetricMask) -> RationalMatrix:
    """Transpose of the large matrix; it drives the decimated recursion."""
    return build_matrix_large(b).transpose()


def char_poly(A: RationalMatrix) -> list[Fraction]:
    """
    Exact det(A - lambda I), constant term first.

    Examples:
        >>> char_poly(RationalMatrix.from_rows([[1, 0], [0, 1]]))
        [Fraction(1, 1), Fraction(-2, 1), Fraction(1, 1)]
    """
    # sympy returns det(lambda I - A); the two differ by (-1)^n
    descending = A.to_sympy().charpoly(_LAMBDA).all_coeffs()
    sign = -1 if A.n % 2 else 1
    coeffs = [sign * Fraction(int(c.p), int(c.q)) for c in reversed(descending)]
    logger.debug("characteristic polynomial of a %dx%d matrix: %s", A.n, A.n, coeffs)
    return coeffs


# ---------------------------------------------------------------------------
# Certified root enclosure
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Disc:
    center: complex
    radius: float
    exact: Optional[Fraction] = None

    @property
    def modulus(self) -> float:
        if self.exact is not None:
            return float(abs(self.exact))
        return abs(self.center)

    @property
    def outer(self) -> float:
        if self.exact is not None:
            return self.modulus
        return (self.modulus + self.radius) * (1 + _ULP_PAD)

    @property
    def inner(self) -> float:
        if self.exact is not None:
            return self.modulus
        return max(0.0, (self.modulus - self.radius) * (1 - _ULP_PAD))


def _aberth(coeffs: np.ndarray, max_sweeps: int = 100) -> np.ndarray:
    """All roots of a polynomial with simple roots (descending float coeffs)."""
    z = np.roots(coeffs).astype(complex)
    n = len(z)
    if n == 0:
        return z
    deriv = np.polyder(coeffs)
    scale_ = max(1.0, float(np.max(np.abs(z))))
    # coincident seeds would stall the sweep
    for i in range(n):
        for j in range(i):
            if z[i] == z[j]:
                z[i] += 1e-8 * scale_ * complex(1, 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        for _ in range(max_sweeps):
            moved = 0.0
            for i in range(n):
                value = np.polyval(coeffs, z[i])
                slope = np.polyval(deriv, z[i])
                if value == 0 or slope == 0:
                    continue
                ratio = value / slope
                repulsion = np.sum(1.0 / (z[i] - np.delete(z, i)))
                step = ratio / (1.0 - ratio * repulsion)
                if not np.isfinite(step):
                    continue
                z[i] -= step
                moved = max(moved, abs(step) / max(1.0, abs(z[i])))
            if moved < 1e-16:
                break
        # Newton polish
        for i in range(n):
            slope = np.polyval(deriv, z[i])
            if slope != 0:
                step = np.polyval(coeffs, z[i]) / slope
                if np.isfinite(step):
                    z[i] -= step
    return z


def _exact(z: complex) -> tuple[Fraction, Fraction]:
    return Fraction(z.real), Fraction(z.imag)


def _cmul(a: tuple[Fraction, Fraction], b: tuple[Fraction, Fraction]) -> tuple[Fraction, Fraction]:
    return a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0]


def _abs2(a: tuple[Fraction, Fraction]) -> Fraction:
    return a[0] * a[0] + a[1] * a[1]


def _inclusion_radii(coeffs: Sequence[Fraction], roots: np.ndarray) -> list[float]:
    """
    Radii n |f(z_i) / (lc prod_{j != i} (z_i - z_j))| of discs around approximate roots.

    The union of the discs contains every root, and each connected component
    holds as many roots as discs. f and the products are evaluated exactly at
    the rational values of the float approximations.
    """
    n = len(roots)
    points = [_exact(complex(z)) for z in roots]
    lc = coeffs[0]
    radii = []
    for i, zi in enumerate(points):
        value = (Fraction(0), Fraction(0))
        for c in coeffs:
            value = _cmul(value, zi)
            value = (value[0] + c, value[1])
        product = (lc, Fraction(0))
        for j, zj in enumerate(points):
            if j != i:
                product = _cmul(product, (zi[0] - zj[0], zi[1] - zj[1]))
        denominator = _abs2(product)
        if denominator == 0:
            radii.append(math.inf)
            continue
        radii.append(n * math.sqrt(float(_abs2(value) / denominator)) * (1 + _ULP_PAD))
    return radii


def _components(discs: list[_Disc]) -> list[list[_Disc]]:
    parent = list(range(len(discs)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(discs)):
        for j in range(i):
            gap = abs(discs[i].center - discs[j].center)
            if gap <= (discs[i].radius + discs[j].radius) * (1 + _ULP_PAD):
                parent[find(i)] = find(j)
    groups: dict[int, list[_Disc]] = {}
    for i, disc in enumerate(discs):
        groups.setdefault(find(i), []).append(disc)
    return list(groups.values())


def enclose_max_modulus(charpoly: Sequence[Fraction], rtol: Optional[float] = None) -> RhoEnclosure:
    """
    Certified enclosure of the largest root modulus of an exact polynomial.

    Args:
        charpoly: coefficients, constant term first
        rtol: relative width required (defaults to the configured tolerance)

    Raises:
        EnclosureTooWideError: the enclosure exceeds rtol * max(1, estimate);
            the best-effort enclosure is attached
    """
    rtol = settings.enclosure_rtol if rtol is None else rtol
    poly = SPoly(tuple(charpoly)).to_sympy()
    if poly.degree() < 1:
        raise ParameterRangeError("characteristic polynomial must have degree >= 1")
    _, factors = poly.sqf_part().factor_list()

    groups: list[list[_Disc]] = []
    for factor, _ in factors:
        descending = [Fraction(int(c.p), int(c.q)) for c in factor.all_coeffs()]
        if len(descending) == 2:
            root = -descending[1] / descending[0]
            groups.append([_Disc(complex(float(root)), 0.0, root)])
            continue
        approx = _aberth(np.array([float(c) for c in descending]))
        radii = _inclusion_radii(descending, approx)
        groups.extend(_components([_Disc(complex(z), r) for z, r in zip(approx, radii)]))

    discs = [d for group in groups for d in group]
    dominant = max(discs, key=lambda d: d.modulus)
    estimate = dominant.modulus
    upper = max(d.outer for d in discs)
    lower = max(min(d.inner for d in group) for group in groups)
    radius = max(upper - estimate, estimate - lower, 0.0)
    exact = abs(dominant.exact) if dominant.exact is not None and radius == 0.0 else None

    enclosure = RhoEnclosure(estimate=estimate, radius_bound=radius, charpoly=list(charpoly), exact=exact)
    logger.debug("spectral radius %.15g +/- %.3g from %d factor(s)", estimate, radius, len(factors))
    if radius > rtol * max(1.0, estimate):
        logger.warning("spectral radius enclosure too wide: %.3g > %.3g", radius, rtol * max(1.0, estimate))
        raise EnclosureTooWideError(
            f"could not enclose rho to relative width {rtol:g}: got {estimate!r} +/- {radius:.3g}",
            enclosure=enclosure,
        )
    return enclosure


def spectral_radius(A: RationalMatrix, rtol: Optional[float] = None) -> RhoEnclosure:
    """
    Certified spectral radius of A from its exact characteristic polynomial.

    Examples:
        >>> spectral_radius(RationalMatrix.from_rows([[2]])).estimate
        2.0
    """
    return enclose_max_modulus(char_poly(A), rtol)


# ---------------------------------------------------------------------------
# Regularity
# ---------------------------------------------------------------------------

def _is_power_of_two(x: Fraction) -> bool:
    """True for 2^k with k any integer."""
    if x <= 0:
        return False
    num, den = x.numerator, x.denominator
    return (den == 1 and num & (num - 1) == 0) or (num == 1 and den & (den - 1) == 0)


def regularity_from_rho(r: int, rho: RhoEnclosure) -> tuple[float, bool]:
    """
    gamma = r - log2(rho) and whether log2(rho) is an integer inside the enclosure.

    Raises:
        OutOfTheoremRangeError: rho < 1/2
        ReductionWindowExceededError: rho >= 2^r
    """
    value = rho.exact if rho.exact is not None else rho.estimate
    if value < Fraction(1, 2):
        raise OutOfTheoremRangeError(
            f"rho = {float(value):.10g} < 1/2; re-run with a smaller r (holds_derived) to obtain a bound"
        )
    if value >= 2**r:
        raise ReductionWindowExceededError(f"rho = {float(value):.10g} >= 2^r = {2**r}; no smoothness follows")

    if rho.exact is not None:
        caveat = _is_power_of_two(rho.exact)
        exponent = math.log2(rho.exact.numerator) - math.log2(rho.exact.denominator)
        gamma = float(r - round(exponent)) if caveat else r - exponent
    else:
        k = round(math.log2(rho.estimate))
        lo, hi = rho.estimate - rho.radius_bound, rho.estimate + rho.radius_bound
        caveat = lo <= 2.0**k <= hi
        gamma = float(r - k) if caveat and rho.radius_bound == 0 else r - math.log2(rho.estimate)
    return gamma, caveat


def _check_convergence(a: LaurentPoly) -> None:
    at_one = evaluate(a, 1)
    if at_one != 2:
        raise ConvergenceConditionError(f"a(1) = {at_one} ≠ 2: the symbol must satisfy a(1) = 2 and a(-1) = 0")
    at_minus_one = evaluate(a, -1)
    if at_minus_one != 0:
        raise ConvergenceConditionError(
            f"a(-1) = {at_minus_one} ≠ 0: the symbol must satisfy a(1) = 2 and a(-1) = 0"
        )


def difference_mask(a: LaurentPoly, holds_derived: Optional[int] = None) -> tuple[int, int, SymmetricMask]:
    """
    Factor a = (1+z)^(r+1) / 2^r * b and center b.

    Args:
        a: symbol with a(1) = 2, a(-1) = 0
        holds_derived: use this r instead of the maximal multiplicity - 1

    Returns:
        (multiplicity, r, half mask of b)
    """
    multiplicity, quotient = extract_one_plus_z(a)
    r = multiplicity - 1
    if holds_derived is not None:
        if not 0 <= holds_derived <= r:
            raise ParameterRangeError(f"holds_derived must lie in [0, {r}], got {holds_derived}")
        spare = power(LaurentPoly(0, (Fraction(1), Fraction(1))), r - holds_derived)
        quotient = mul(quotient, spare)
        r = holds_derived
    logger.debug("multiplicity %d, using r = %d", multiplicity, r)
    return multiplicity, r, center_symmetric(scale(quotient, 2**r))


def analyze(a: LaurentPoly, holds_derived: Optional[int] = None, rtol: Optional[float] = None) -> RegularityReport:
    """
    Full regularity analysis of the scheme with symbol a.

    Args:
        a: the symbol
        holds_derived: override r (0 <= r <= multiplicity - 1)
        rtol: relative tolerance of the rho enclosure

    Returns:
        RegularityReport with gamma, optimality and every intermediate

    Raises:
        ConvergenceConditionError: a(1) != 2 or a(-1) != 0
        NotSymmetricError / OddCenterError: b is not symmetric about an integer
        IndefiniteSymbolError: B changes sign (the report is attached)
        OutOfTheoremRangeError / ReductionWindowExceededError: rho outside [1/2, 2^r)
        EnclosureTooWideError: rho could not be enclosed tightly enough

    Examples:
        >>> from holder_regularity.families import primal_symbol
        >>> round(analyze(primal_symbol(3, 2)).gamma, 5)
        2.83007
    """
    _check_convergence(a)
    multiplicity, r, b = difference_mask(a, holds_derived)
    q = to_s_poly(b)
    verdict = positivity(q)
    base = dict(
        multiplicity=multiplicity,
        r=r,
        p=b.p,
        difference_mask=list(b.half),
        s_poly=list(q.coeffs),
        positivity=verdict,
    )

    if b.p == 0:
        rho = RhoEnclosure(estimate=1.0, radius_bound=0.0, charpoly=[], exact=Fraction(1))
        report = RegularityReport(
            **base,
            rho=rho,
            gamma=float(r),
            optimal=True,
            integer_exponent_caveat=True,
            notes=f"p = 0: the limit is the B-spline of degree {r}",
        )
        logger.info("analysis finished: B-spline of degree %d", r)
        return report

    matrix = build_matrix_folded(b)
    folded = matrix.to_lists()

    if verdict.kind == "Indefinite":
        try:
            rho = spectral_radius(matrix, rtol)
        except EnclosureTooWideError as e:
            rho = e.enclosure
        report = RegularityReport(
            **base,
            folded_matrix=folded,
            rho=rho,
            notes="B changes sign on [0, 1]; rho is reported as a diagnostic only",
        )
        raise IndefiniteSymbolError(
            f"B changes sign on [0, 1] (root in [{verdict.witness.lo}, {verdict.witness.hi}]); "
            "the spectral-radius bound does not apply",
            report=report,
        )

    rho = spectral_radius(matrix, rtol)
    try:
        gamma, caveat = regularity_from_rho(r, rho)
    except (OutOfTheoremRangeError, ReductionWindowExceededError) as e:
        e.report = RegularityReport(**base, folded_matrix=folded, rho=rho, notes=str(e))
        raise

    optimal = verdict.kind == "StrictlyPositive"
    notes = "" if optimal else "B has a zero on [0, 1]: gamma is a lower bound only"
    if caveat:
        caveat_note = "log2(rho) is an integer: smoothness holds for exponents below gamma"
        notes = f"{notes}; {caveat_note}" if notes else caveat_note
    logger.info(
        "analysis finished: r=%d p=%d rho=%.10g gamma=%.10g optimal=%s", r, b.p, rho.estimate, gamma, optimal
    )
    return RegularityReport(
        **base,
        folded_matrix=folded,
        rho=rho,
        gamma=gamma,
        optimal=optimal,
        integer_exponent_caveat=caveat,
        notes=notes,
    )


def analyze_family(family: FamilyId, rtol: Optional[float] = None) -> RegularityReport:
    return analyze(family.symbol(), rtol=rtol)


def _table_cell(family: FamilyId) -> TableCell:
    report = analyze_family(family)
    return TableCell(
        m=family.m,
        l=family.l,
        gamma=report.gamma,
        rho=report.rho.estimate,
        optimal=report.optimal,
        caveat=report.integer_exponent_caveat,
    )


def table_members(kind: FamilyKind, m_max: int, include_bspline: bool = False) -> list[FamilyId]:
    """Family members of a table in (m, l) order."""
    if m_max < 1:
        raise ParameterRangeError(f"m_max must be >= 1, got {m_max}")
    first_l = 0 if include_bspline else 1
    return [FamilyId(kind=kind, m=m, l=l) for m in range(1, m_max + 1) for l in range(first_l, m)]


def regularity_table(
    kind: FamilyKind,
    m_max: int,
    include_bspline: bool = False,
    workers: Optional[int] = None,
) -> list[TableCell]:
    """
    Regularity of every member up to m_max, ordered by (m, l).

    Args:
        kind: "primal" or "dual"
        m_max: largest m
        include_bspline: also include the l = 0 members
        workers: process count; more than one evaluates cells in a process pool
    """
    members = table_members(kind, m_max, include_bspline)
    workers = settings.table_workers if workers is None else workers
    if workers > 1 and len(members) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            cells = list(pool.map(_table_cell, members))
    else:
        cells = [_table_cell(member) for member in members]
    logger.info("computed %d %s table cells up to m = %d", len(cells), kind, m_max)
    return cells


def format_gamma(cell: TableCell, decimals: Optional[int] = None) -> str:
    """
    Render gamma rounded half-even; exact integers print without decimals.

    Examples:
        >>> format_gamma(TableCell(m=3, l=2, gamma=2.830074998557688, rho=4.5, optimal=True, caveat=False))
        '2.83007'
    """
    decimals = settings.table_decimals if decimals is None else decimals
    if cell.caveat and float(cell.gamma).is_integer():
        return str(int(cell.gamma))
    quantum = Decimal(1).scaleb(-decimals)
    return str(Decimal(repr(cell.gamma)).quantize(quantum, rounding=ROUND_HALF_EVEN))
