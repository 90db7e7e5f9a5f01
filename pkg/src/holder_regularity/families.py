"""
Exact symbols of the pseudo-spline families.

Primal:  a_{m,l}(z) = 2 sigma^m(z) * sum_{k<=l} binom(m-1+k, k) delta^k(z)
Dual:    a~_{m,l}(z) = (1+z)/z * sigma^m(z) * sum_{k<=l} binom(m-1/2+k, k) delta^k(z)

with sigma = (z^-1 + 2 + z)/4 and delta = -(z^-1 - 2 + z)/4. l = 0 gives the
B-splines, l = m-1 the (dual) Dubuc-Deslauriers schemes.
"""

import logging
import re
from fractions import Fraction
from functools import lru_cache

from pydantic import BaseModel, ConfigDict, model_validator

from .exceptions import MaskParseError, ParameterRangeError
from .laurent import LaurentPoly, add, divide_one_plus_z, mul, power, scale, shift
from .schemas import FamilyKind
from .trig import SPoly

logger = logging.getLogger(__name__)

_SPEC_PATTERN = re.compile(r"^\s*(primal|dual)\s*:\s*(\d+)\s*,\s*(\d+)\s*$", re.IGNORECASE)


class FamilyId(BaseModel):
    """
    One member of a pseudo-spline family.

    Attributes:
        kind: "primal" or "dual"
        m: order parameter, m >= 1
        l: number of extra terms, 0 <= l <= m-1
    """

    kind: FamilyKind
    m: int
    l: int

    model_config = ConfigDict(extra="forbid", frozen=True)

    @model_validator(mode="after")
    def _check_range(self):
        if self.m < 1 or not 0 <= self.l <= self.m - 1:
            raise ParameterRangeError(
                f"{self.kind} family needs m >= 1 and 0 <= l <= m-1, got (m, l) = ({self.m}, {self.l})"
            )
        return self

    @property
    def label(self) -> str:
        """Spec string, e.g. "primal:3,2"."""
        return f"{self.kind}:{self.m},{self.l}"

    @property
    def r(self) -> int:
        """Exponent r of the factorization: 2m-1 (primal) or 2m (dual)."""
        return 2 * self.m - 1 if self.kind == "primal" else 2 * self.m

    def symbol(self) -> LaurentPoly:
        return primal_symbol(self.m, self.l) if self.kind == "primal" else dual_symbol(self.m, self.l)


def parse_family_spec(text: str) -> FamilyId:
    """
    Parse "primal:M,L" or "dual:M,L".

    Examples:
        >>> parse_family_spec("dual:4,3").label
        'dual:4,3'
    """
    match = _SPEC_PATTERN.match(text or "")
    if not match:
        raise MaskParseError(f"family spec must look like 'primal:M,L' or 'dual:M,L', got {text!r}")
    kind, m, l = match.groups()
    return FamilyId(kind=kind.lower(), m=int(m), l=int(l))


def sigma() -> LaurentPoly:
    """(z^-1 + 2 + z)/4."""
    return LaurentPoly(-1, (Fraction(1, 4), Fraction(1, 2), Fraction(1, 4)))


def delta() -> LaurentPoly:
    """-(z^-1 - 2 + z)/4 = 1 - sigma."""
    return LaurentPoly(-1, (Fraction(-1, 4), Fraction(1, 2), Fraction(-1, 4)))


def half_binomial(x: Fraction, k: int) -> Fraction:
    """
    binom(x + k, k) as the rising-factorial ratio prod_{i=1..k} (x + i)/i.

    Examples:
        >>> half_binomial(Fraction(3, 2), 1)
        Fraction(5, 2)
    """
    if k < 0:
        raise ParameterRangeError(f"binomial index must be >= 0, got {k}")
    result = Fraction(1)
    for i in range(1, k + 1):
        result = result * (Fraction(x) + i) / i
    return result


def _coefficient_base(kind: str, m: int) -> Fraction:
    return Fraction(m - 1) if kind == "primal" else Fraction(2 * m - 1, 2)


def _delta_series(kind: str, m: int, l: int) -> LaurentPoly:
    x = _coefficient_base(kind, m)
    d = delta()
    total = LaurentPoly.zero()
    d_power = LaurentPoly.one()
    for k in range(l + 1):
        total = add(total, scale(d_power, half_binomial(x, k)))
        d_power = mul(d_power, d)
    return total


@lru_cache(maxsize=None)
def primal_symbol(m: int, l: int) -> LaurentPoly:
    """
    Symbol of the primal pseudo-spline (m, l), symmetric about z^0.

    Examples:
        >>> [str(c) for c in primal_symbol(2, 1).coeffs]
        ['-1/16', '0', '9/16', '1', '9/16', '0', '-1/16']
    """
    FamilyId(kind="primal", m=m, l=l)
    symbol = scale(mul(power(sigma(), m), _delta_series("primal", m, l)), 2)
    logger.debug("primal symbol (%d, %d): span %d..%d", m, l, symbol.low, symbol.high)
    return symbol


@lru_cache(maxsize=None)
def dual_symbol(m: int, l: int) -> LaurentPoly:
    """Symbol of the dual pseudo-spline (m, l), symmetric about z^(-1/2)."""
    FamilyId(kind="dual", m=m, l=l)
    one_plus_z_over_z = LaurentPoly(-1, (Fraction(1), Fraction(1)))
    symbol = mul(one_plus_z_over_z, mul(power(sigma(), m), _delta_series("dual", m, l)))
    logger.debug("dual symbol (%d, %d): span %d..%d", m, l, symbol.low, symbol.high)
    return symbol


def b_spoly(family: FamilyId) -> SPoly:
    """
    B of the family member in s = sin^2(xi/2): sum_k binom(x+k, k) s^k.

    x is m-1 for primal members and m-1/2 for dual ones.
    """
    x = _coefficient_base(family.kind, family.m)
    return SPoly(tuple(half_binomial(x, k) for k in range(family.l + 1)))


def bspline_symbol(r: int) -> LaurentPoly:
    """
    (1+z)^(r+1) / 2^r, shifted so its center is 0 (odd r) or -1/2 (even r).

    Raises:
        ParameterRangeError: r < 0
    """
    if r < 0:
        raise ParameterRangeError(f"B-spline degree must be >= 0, got {r}")
    symbol = scale(power(LaurentPoly(0, (Fraction(1), Fraction(1))), r + 1), Fraction(1, 2**r))
    return shift(symbol, -(r // 2 + 1))


def dubuc_deslauriers_symbol(n_points: int) -> LaurentPoly:
    """Interpolatory n-point scheme, the primal member (n/2, n/2 - 1)."""
    if n_points < 2 or n_points % 2:
        raise ParameterRangeError(f"Dubuc-Deslauriers schemes need an even point count >= 2, got {n_points}")
    m = n_points // 2
    return primal_symbol(m, m - 1)


def family_difference_mask(family: FamilyId) -> LaurentPoly:
    """The quotient a / (1+z)^(r+1) times 2^r, before centering."""
    quotient = divide_one_plus_z(family.symbol(), family.r + 1)
    return scale(quotient, 2**family.r)
