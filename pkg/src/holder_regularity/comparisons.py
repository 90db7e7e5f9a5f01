"""
Comparison of two B-polynomials and the regularity gaps it implies.

If B~(xi) <= C B(xi) on [0, pi], the scheme with exponent r~ and polynomial B~
has regularity at least gamma + r~ - r - log2(C). This module computes the
sharpest such C exactly, evaluates the closed-form constants of the
pseudo-spline comparison statements, and checks those statements against
computed regularity tables.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Optional, Sequence

from .exceptions import NotStrictlyPositiveError, ParameterRangeError
from .families import FamilyId, b_spoly
from .laurent import RationalLike, parse_rational
from .regularity import regularity_table
from .schemas import ComparisonResult, RationalInterval, TableCell, TheoremCheck, VerificationReport
from .trig import SPoly, isolate_roots, positivity, refine_root

logger = logging.getLogger(__name__)

Statement = Literal["T5i", "T5ii", "T5iii", "T6i", "T6ii", "T6iii", "T7a", "T7b"]

STATEMENTS: tuple[Statement, ...] = ("T5i", "T5ii", "T5iii", "T6i", "T6ii", "T6iii", "T7a", "T7b")

SLACK = 1e-9


@dataclass(frozen=True)
class RatioSup:
    """
    Enclosure of sup_{s in [0,1]} num(s)/den(s).

    Attributes:
        lower, upper: rational bounds on the supremum
        argmax: interval containing a maximizer
    """

    lower: Fraction
    upper: Fraction
    argmax: tuple[Fraction, Fraction]

    @property
    def value(self) -> float:
        return float((self.lower + self.upper) / 2)

    @property
    def radius(self) -> float:
        return float((self.upper - self.lower) / 2)

    @property
    def exact(self) -> Optional[Fraction]:
        return self.lower if self.lower == self.upper else None


def _interval_eval(q: SPoly, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    """Range enclosure of q over [lo, hi] (0 <= lo) by interval Horner."""
    if lo == hi:
        v = q(lo)
        return v, v
    acc_lo = acc_hi = Fraction(0)
    for c in reversed(q.coeffs):
        products = (acc_lo * lo, acc_lo * hi, acc_hi * lo, acc_hi * hi)
        acc_lo, acc_hi = min(products) + c, max(products) + c
    return acc_lo, acc_hi


def _ratio_bounds(num: SPoly, den: SPoly, interval: tuple[Fraction, Fraction]) -> tuple[Fraction, Fraction]:
    n_lo, n_hi = _interval_eval(num, *interval)
    d_lo, d_hi = _interval_eval(den, *interval)
    if d_lo <= 0:
        raise NotStrictlyPositiveError("denominator enclosure reaches zero; refine further")
    candidates = (n_lo / d_lo, n_lo / d_hi, n_hi / d_lo, n_hi / d_hi)
    return min(candidates), max(candidates)


def min_ratio_constant(num: SPoly, den: SPoly, rel_tol: float = 1e-9) -> RatioSup:
    """
    Smallest C with num(s) <= C den(s) on [0, 1].

    The supremum sits at an endpoint or at a root of num' den - num den', so
    only those candidates are evaluated, each enclosed by rational bisection.

    Raises:
        NotStrictlyPositiveError: den has a root in [0, 1] or is negative there

    Examples:
        >>> min_ratio_constant(SPoly.from_coeffs([1, 3, 6]), SPoly.from_coeffs([1, 2])).exact
        Fraction(10, 3)
    """
    if den.is_zero or positivity(den).kind != "StrictlyPositive":
        raise NotStrictlyPositiveError("the denominator must be strictly positive on [0, 1]")

    candidates: list[tuple[Fraction, Fraction]] = [(Fraction(0), Fraction(0)), (Fraction(1), Fraction(1))]
    cross = num.derivative() * den - num * den.derivative()
    if not cross.is_zero:
        for interval in isolate_roots(cross, 0, 1):
            if interval[0] != interval[1]:
                interval = refine_root(cross, interval, Fraction(1, 10**12))
            candidates.append(interval)

    best_lower, best_upper, argmax = None, None, None
    for interval in candidates:
        width = Fraction(1, 10**12)
        while True:
            lower, upper = _ratio_bounds(num, den, interval)
            if upper - lower <= Fraction(rel_tol) * max(Fraction(1), abs(upper)) / 4 or interval[0] == interval[1]:
                break
            width /= 1024
            interval = refine_root(cross, interval, width)
        if best_lower is None or lower > best_lower:
            best_lower, argmax = lower, interval
        if best_upper is None or upper > best_upper:
            best_upper = upper
    logger.debug("ratio sup in [%s, %s]", float(best_lower), float(best_upper))
    return RatioSup(lower=best_lower, upper=best_upper, argmax=argmax)


def gap_bound(c: RationalLike | float, r: int, r_tilde: int) -> float:
    """
    r~ - r - log2(c), the shift in the regularity lower bound.

    Examples:
        >>> gap_bound(4, 3, 5)
        0.0
    """
    value = c if isinstance(c, float) else parse_rational(c)
    if value < 1:
        raise ParameterRangeError(f"the comparison constant must be >= 1, got {value}")
    return r_tilde - r - math.log2(value)


def _product(m: int, l: int, top: Fraction, bottom: Fraction) -> Fraction:
    result = Fraction(1)
    for n in range(l):
        result *= (m + top + n) / (m + bottom + n)
    return result


def theorem_constants(which: Statement, m: int, l: int = 0) -> Fraction:
    """
    Closed-form comparison constant of a pseudo-spline statement.

    Examples:
        >>> theorem_constants("T5i", 3, 2)
        Fraction(5, 2)
        >>> theorem_constants("T5iii", 2)
        Fraction(10, 3)
    """
    half = Fraction(1, 2)
    if m < 1 or l < 0 or l > m - 1:
        raise ParameterRangeError(f"{which} needs m >= 1 and 0 <= l <= m-1, got (m, l) = ({m}, {l})")
    if which in ("T5i", "T6i") and l < 1:
        raise ParameterRangeError(f"{which} needs l >= 1, got l = {l}")

    if which == "T5i":
        return Fraction(m + l, l)
    if which == "T5ii":
        return Fraction(m + l, m)
    if which == "T5iii":
        return Fraction(2 * (2 * m + 1), m + 1)
    if which == "T6i":
        return (m + l + half) / l
    if which == "T6ii":
        return (m + l + half) / (m + half)
    if which == "T6iii":
        return (2 * m + half) * (2 * m + 3 * half) / (m * (m + 3 * half))
    if which == "T7a":
        return _product(m, l, half, Fraction(0))
    if which == "T7b":
        return _product(m, l, Fraction(1), half)
    raise ParameterRangeError(f"unknown statement {which!r}")


def match_statement(den: FamilyId, num: FamilyId) -> Optional[tuple[Statement, int, int]]:
    """Which comparison statement covers num against den, with its (m, l)."""
    if den.kind == num.kind:
        primal = den.kind == "primal"
        if num.m == den.m and num.l == den.l + 1:
            return ("T5i" if primal else "T6i", num.m, num.l)
        if num.m == den.m + 1 and num.l == den.l:
            return ("T5ii" if primal else "T6ii", den.m, den.l)
        if num.m == den.m + 1 and den.l == den.m - 1 and num.l == num.m - 1:
            return ("T5iii" if primal else "T6iii", den.m, den.l)
        return None
    if den.kind == "primal" and (num.m, num.l) == (den.m, den.l):
        return ("T7a", den.m, den.l)
    if den.kind == "dual" and num.m == den.m + 1 and num.l == den.l:
        return ("T7b", den.m, den.l)
    return None


def compare_families(den: FamilyId, num: FamilyId) -> ComparisonResult:
    """
    Sharpest C with B_num <= C B_den and the implied bound on gamma_num - gamma_den.

    Examples:
        >>> from holder_regularity.families import parse_family_spec
        >>> compare_families(parse_family_spec("primal:2,1"), parse_family_spec("primal:3,2")).theorem
        'T5iii'
    """
    sup = min_ratio_constant(b_spoly(num), b_spoly(den))
    match = match_statement(den, num)
    theorem, c_theorem = None, None
    if match is not None:
        theorem = match[0]
        c_theorem = theorem_constants(*match)
    c_star = sup.exact if sup.exact is not None else sup.value
    gap = gap_bound(c_star, den.r, num.r) if c_star >= 1 else None
    logger.info(
        "compared %s against %s: C* = %.12g (%s)", num.label, den.label, sup.value, theorem or "no statement"
    )
    return ComparisonResult(
        c_star=sup.value,
        c_star_radius=sup.radius,
        c_star_exact=sup.exact,
        argmax=RationalInterval(lo=sup.argmax[0], hi=sup.argmax[1]),
        c_theorem=c_theorem,
        theorem=theorem,
        r=den.r,
        r_tilde=num.r,
        gap_bound=gap,
    )


def _gammas(cells: Sequence[TableCell]) -> dict[tuple[int, int], float]:
    return {(cell.m, cell.l): cell.gamma for cell in cells}


def _check(
    statement: str, m: int, l: int, value: float, base: float, shift: int, constant: Fraction
) -> TheoremCheck:
    lower = base + shift - math.log2(constant)
    upper = base + shift
    ok = lower - SLACK <= value <= upper + SLACK
    return TheoremCheck(statement=statement, m=m, l=l, lower=lower, value=value, upper=upper, ok=ok)


def verify_theorems(
    m_max: int,
    primal: Optional[Sequence[TableCell]] = None,
    dual: Optional[Sequence[TableCell]] = None,
) -> VerificationReport:
    """
    Check every two-sided comparison inequality on computed regularities.

    Args:
        m_max: largest m to check
        primal, dual: tables including the l = 0 members; computed when omitted

    Returns:
        VerificationReport with per-statement counts and the violations
    """
    if m_max < 2:
        raise ParameterRangeError(f"m_max must be >= 2, got {m_max}")
    g = _gammas(primal if primal is not None else regularity_table("primal", m_max, include_bspline=True))
    gd = _gammas(dual if dual is not None else regularity_table("dual", m_max, include_bspline=True))

    checks: list[TheoremCheck] = []
    for m in range(1, m_max + 1):
        for l in range(0, m):
            if l >= 1:
                checks.append(_check("T5i", m, l, g[m, l], g[m, l - 1], 0, theorem_constants("T5i", m, l)))
                checks.append(_check("T6i", m, l, gd[m, l], gd[m, l - 1], 0, theorem_constants("T6i", m, l)))
            checks.append(_check("T7a", m, l, gd[m, l], g[m, l], 1, theorem_constants("T7a", m, l)))
            if m + 1 <= m_max:
                checks.append(_check("T5ii", m, l, g[m + 1, l], g[m, l], 2, theorem_constants("T5ii", m, l)))
                checks.append(_check("T6ii", m, l, gd[m + 1, l], gd[m, l], 2, theorem_constants("T6ii", m, l)))
                checks.append(_check("T7b", m, l, g[m + 1, l], gd[m, l], 1, theorem_constants("T7b", m, l)))
        if m + 1 <= m_max:
            checks.append(_check("T5iii", m, m - 1, g[m + 1, m], g[m, m - 1], 2, theorem_constants("T5iii", m)))
            checks.append(_check("T6iii", m, m - 1, gd[m + 1, m], gd[m, m - 1], 2, theorem_constants("T6iii", m)))

    counts = {name: sum(1 for c in checks if c.statement == name) for name in STATEMENTS}
    violations = [c for c in checks if not c.ok]
    if violations:
        logger.warning("%d comparison inequalities violated up to m = %d", len(violations), m_max)
    else:
        logger.info("all %d comparison inequalities hold up to m = %d", len(checks), m_max)
    return VerificationReport(m_max=m_max, checks_run=counts, violations=violations)
