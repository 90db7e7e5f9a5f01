"""
Exact Laurent polynomials with rational coefficients.

Masks, symbols and their factorizations all live here. Coefficients are
``fractions.Fraction`` values, so every operation is exact and equality
is structural (values are trimmed on construction).
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .exceptions import DomainError, MaskParseError, NotDivisibleError, NotSymmetricError, OddCenterError

logger = logging.getLogger(__name__)

RationalLike = Union[Fraction, int, str]


def parse_rational(value: RationalLike) -> Fraction:
    """
    Parse "num/den", an integer string, an int or a Fraction.

    Floats are rejected: a binary64 value is almost never the rational
    the caller meant.

    Examples:
        >>> parse_rational("3/256")
        Fraction(3, 256)
        >>> parse_rational(-2)
        Fraction(-2, 1)
    """
    if isinstance(value, bool) or isinstance(value, float):
        raise MaskParseError(f"expected an exact rational, got {value!r}")
    if isinstance(value, (Fraction, int)):
        return Fraction(value)
    try:
        return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError) as e:
        raise MaskParseError(f"cannot parse rational {value!r}: {e}") from e


def format_rational(value: Fraction) -> str:
    """Render a rational as "num/den" (plain integer when den = 1)."""
    return str(Fraction(value))


def _trim(low: int, coeffs: Sequence[Fraction]) -> tuple[int, tuple[Fraction, ...]]:
    start = 0
    end = len(coeffs)
    while start < end and coeffs[start] == 0:
        start += 1
    while end > start and coeffs[end - 1] == 0:
        end -= 1
    if start == end:
        return 0, ()
    return low + start, tuple(coeffs[start:end])


@dataclass(frozen=True)
class LaurentPoly:
    """
    Finite sum c_0 z^low + c_1 z^(low+1) + ... with exact coefficients.

    The zero polynomial has ``coeffs == ()`` and ``low == 0``; otherwise the
    first and last coefficients are nonzero.
    """

    low: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        low, coeffs = _trim(int(self.low), [Fraction(c) for c in self.coeffs])
        object.__setattr__(self, "low", low)
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[RationalLike], low: int = 0) -> "LaurentPoly":
        return cls(low, tuple(parse_rational(c) for c in coeffs))

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls(0, ())

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls(0, (Fraction(1),))

    @classmethod
    def monomial(cls, exponent: int, coeff: RationalLike = 1) -> "LaurentPoly":
        return cls(exponent, (parse_rational(coeff),))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def high(self) -> int:
        """Exponent of the last stored coefficient (low - 1 for zero)."""
        return self.low + len(self.coeffs) - 1

    def coefficient(self, exponent: int) -> Fraction:
        i = exponent - self.low
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        return add(self, other)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.low, tuple(-c for c in self.coeffs))

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return add(self, -other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        return mul(self, other)

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        body = ", ".join(format_rational(c) for c in self.coeffs)
        return f"z^{self.low}·({body})"


def add(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    """Exact coefficient-wise sum."""
    if p.is_zero:
        return q
    if q.is_zero:
        return p
    low = min(p.low, q.low)
    high = max(p.high, q.high)
    return LaurentPoly(low, tuple(p.coefficient(k) + q.coefficient(k) for k in range(low, high + 1)))


def mul(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    """Exact product (convolution of coefficients; low exponents add)."""
    if p.is_zero or q.is_zero:
        return LaurentPoly.zero()
    out = [Fraction(0)] * (len(p.coeffs) + len(q.coeffs) - 1)
    # upsampled operands are half zeros
    q_terms = [(j, c) for j, c in enumerate(q.coeffs) if c]
    for i, a in enumerate(p.coeffs):
        if not a:
            continue
        for j, c in q_terms:
            out[i + j] += a * c
    return LaurentPoly(p.low + q.low, tuple(out))


def scale(p: LaurentPoly, factor: RationalLike) -> LaurentPoly:
    f = parse_rational(factor)
    return LaurentPoly(p.low, tuple(f * c for c in p.coeffs))


def shift(p: LaurentPoly, k: int) -> LaurentPoly:
    """Multiply by z^k."""
    if p.is_zero:
        return p
    return LaurentPoly(p.low + k, p.coeffs)


def power(p: LaurentPoly, n: int) -> LaurentPoly:
    if n < 0:
        raise ValueError("power requires n >= 0")
    result = LaurentPoly.one()
    base = p
    while n:
        if n & 1:
            result = mul(result, base)
        base = mul(base, base)
        n >>= 1
    return result


def evaluate(p: LaurentPoly, x: RationalLike) -> Fraction:
    """
    Exact value of p at the rational point x.

    Raises:
        DomainError: x = 0 while p has negative exponents
    """
    x = parse_rational(x)
    if p.is_zero:
        return Fraction(0)
    if x == 0:
        if p.low < 0:
            raise DomainError(f"cannot evaluate at 0: lowest exponent is {p.low}")
        return p.coeffs[0] if p.low == 0 else Fraction(0)
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc * x ** p.low


def upsample(p: LaurentPoly) -> LaurentPoly:
    """Return p(z^2)."""
    if p.is_zero:
        return p
    out = [Fraction(0)] * (2 * len(p.coeffs) - 1)
    out[::2] = p.coeffs
    return LaurentPoly(2 * p.low, tuple(out))


def _divide_once(coeffs: tuple[Fraction, ...]) -> tuple[tuple[Fraction, ...], Fraction]:
    """Synthetic division by (1+z); returns (quotient, remainder)."""
    q = [coeffs[0]]
    for c in coeffs[1:-1]:
        q.append(c - q[-1])
    return tuple(q), coeffs[-1] - q[-1]


def divide_one_plus_z(p: LaurentPoly, times: int) -> LaurentPoly:
    """
    Exact quotient p / (1+z)^times.

    Raises:
        NotDivisibleError: a nonzero remainder appears
    """
    coeffs = p.coeffs
    for step in range(times):
        if len(coeffs) < 2:
            raise NotDivisibleError(f"(1+z)^{times} does not divide {p} (failed at factor {step + 1})")
        quotient, remainder = _divide_once(coeffs)
        if remainder != 0:
            raise NotDivisibleError(f"(1+z)^{times} does not divide {p} (failed at factor {step + 1})")
        coeffs = quotient
    return LaurentPoly(p.low, coeffs)


def extract_one_plus_z(p: LaurentPoly) -> tuple[int, LaurentPoly]:
    """
    Split p = (1+z)^m · q with q(-1) != 0 and m maximal.

    Examples:
        >>> extract_one_plus_z(LaurentPoly.from_coeffs([1, 2, 1]))
        (2, LaurentPoly(low=0, coeffs=(Fraction(1, 1),)))
    """
    if p.is_zero:
        raise ValueError("extract_one_plus_z requires a nonzero polynomial")
    coeffs = p.coeffs
    multiplicity = 0
    while len(coeffs) >= 2:
        quotient, remainder = _divide_once(coeffs)
        if remainder != 0:
            break
        coeffs = quotient
        multiplicity += 1
    logger.debug("extracted (1+z)^%d from a polynomial of span %d", multiplicity, len(p.coeffs))
    return multiplicity, LaurentPoly(p.low, coeffs)


@dataclass(frozen=True)
class SymmetricMask:
    """
    Palindromic mask b_{-p..p} stored as its half (b_0, ..., b_p).

    b_p must be nonzero unless p = 0.
    """

    half: tuple[Fraction, ...]

    def __post_init__(self):
        half = tuple(Fraction(c) for c in self.half)
        if not half:
            raise ValueError("SymmetricMask needs at least b_0")
        if len(half) > 1 and half[-1] == 0:
            raise ValueError("SymmetricMask requires b_p != 0 for p >= 1")
        object.__setattr__(self, "half", half)

    @classmethod
    def from_half(cls, half: Iterable[RationalLike]) -> "SymmetricMask":
        return cls(tuple(parse_rational(c) for c in half))

    @property
    def p(self) -> int:
        return len(self.half) - 1

    def b(self, k: int) -> Fraction:
        """b_k with b_{-k} = b_k and zero beyond p."""
        k = abs(k)
        return self.half[k] if k <= self.p else Fraction(0)


def symmetry_center(p: LaurentPoly) -> Fraction:
    """
    Exponent about which p is palindromic (possibly a half-integer).

    Raises:
        NotSymmetricError: p has no palindromic center
    """
    if p.is_zero:
        raise NotSymmetricError("the zero polynomial has no symmetry center")
    if p.coeffs != tuple(reversed(p.coeffs)):
        raise NotSymmetricError(f"mask {p} is not palindromic")
    return Fraction(2 * p.low + len(p.coeffs) - 1, 2)


def center_symmetric(p: LaurentPoly) -> SymmetricMask:
    """
    Shift p so it is symmetric about exponent 0 and return its half mask.

    Raises:
        NotSymmetricError: no palindromic center
        OddCenterError: the center is a half-integer
    """
    center = symmetry_center(p)
    if center.denominator != 1:
        raise OddCenterError(f"mask {p} is symmetric about the half-integer {center}")
    mid = len(p.coeffs) // 2
    return SymmetricMask(p.coeffs[mid:])


def from_half_mask(b: SymmetricMask) -> LaurentPoly:
    """Expand (b_0..b_p) to b_{-p} z^{-p} + ... + b_p z^p."""
    full = tuple(reversed(b.half[1:])) + b.half
    return LaurentPoly(-b.p, full)
