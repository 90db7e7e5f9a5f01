"""
The trigonometric polynomial B of a symmetric difference mask, rewritten in
s = sin^2(xi/2), and exact sign decisions for it on [0, 1].

B(xi) = b_0 + 2 * sum_k b_k cos(k xi) becomes a polynomial in s through
cos(k xi) = T_k(1 - 2s). Root counting uses Sturm sequences from sympy over
the rationals, so verdicts are certificates rather than samples.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np
import sympy as sp

from .exceptions import ZeroPolynomialError
from .laurent import RationalLike, SymmetricMask, parse_rational
from .schemas import PositivityVerdict, RationalInterval

logger = logging.getLogger(__name__)

_S = sp.Symbol("s")

# witnesses of a zero are narrowed to this width
WITNESS_WIDTH = Fraction(1, 2**20)

Interval = tuple[Fraction, Fraction]


@dataclass(frozen=True)
class SPoly:
    """
    Polynomial in s with exact coefficients, constant term first.

    Trailing zeros are dropped; the zero polynomial has no coefficients.
    """

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        coeffs = [Fraction(c) for c in self.coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(coeffs))

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[RationalLike]) -> "SPoly":
        return cls(tuple(parse_rational(c) for c in coeffs))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def __call__(self, x: RationalLike) -> Fraction:
        x = parse_rational(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def evaluate_float(self, x):
        """Double-precision value; accepts scalars or numpy arrays."""
        return np.polyval([float(c) for c in reversed(self.coeffs)] or [0.0], x)

    def __add__(self, other: "SPoly") -> "SPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return SPoly(tuple(x + y for x, y in zip(a, b)))

    def __sub__(self, other: "SPoly") -> "SPoly":
        return self + other.scale(-1)

    def __mul__(self, other: "SPoly") -> "SPoly":
        if self.is_zero or other.is_zero:
            return SPoly(())
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return SPoly(tuple(out))

    def scale(self, factor: RationalLike) -> "SPoly":
        f = parse_rational(factor)
        return SPoly(tuple(f * c for c in self.coeffs))

    def derivative(self) -> "SPoly":
        return SPoly(tuple(k * c for k, c in enumerate(self.coeffs) if k > 0))

    def to_sympy(self) -> sp.Poly:
        descending = [sp.Rational(c.numerator, c.denominator) for c in reversed(self.coeffs)]
        return sp.Poly(descending or [0], _S, domain=sp.QQ)

    @classmethod
    def from_sympy(cls, poly: sp.Poly) -> "SPoly":
        return cls(tuple(Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs())))

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if k == 0 else ("s" if k == 1 else f"s^{k}")
            if k and c == 1:
                terms.append(mono)
            else:
                terms.append(f"{c}{mono}" if not mono else f"({c}){mono}")
        return " + ".join(terms)


def to_s_poly(b: SymmetricMask) -> SPoly:
    """
    Rewrite B(xi) = b_0 + 2 sum b_k cos(k xi) as a polynomial in s.

    Args:
        b: half mask (b_0, ..., b_p)

    Returns:
        SPoly of degree p

    Examples:
        >>> str(to_s_poly(SymmetricMask.from_half(["38/8", "-18/8", "3/8"])))
        '1 + (3)s + (6)s^2'
    """
    x = SPoly((Fraction(1), Fraction(-2)))
    two_x = x.scale(2)
    prev, cur = SPoly((Fraction(1),)), x
    result = SPoly((b.half[0],))
    for k in range(1, b.p + 1):
        if k > 1:
            prev, cur = cur, two_x * cur - prev
        result = result + cur.scale(2 * b.half[k])
    return result


def eval_cosine_sum(b: SymmetricMask, xi):
    """Direct evaluation of b_0 + 2 sum b_k cos(k xi) in double precision."""
    xi = np.asarray(xi, dtype=float)
    total = np.full_like(xi, float(b.half[0]))
    for k in range(1, b.p + 1):
        total = total + 2.0 * float(b.half[k]) * np.cos(k * xi)
    return total


def _squarefree(q: SPoly) -> SPoly:
    return SPoly.from_sympy(q.to_sympy().sqf_part())


def _to_fraction(x) -> Fraction:
    x = sp.Rational(x)
    return Fraction(int(x.p), int(x.q))


def _to_rational(x: Fraction) -> sp.Rational:
    return sp.Rational(x.numerator, x.denominator)


def _split_rational_roots(g: SPoly) -> tuple[list[Fraction], Optional[sp.Poly]]:
    """
    Rational roots of the square-free g, and the cofactor without them.

    The cofactor is None when every root of g is rational.
    """
    _, factors = g.to_sympy().factor_list()
    rational: list[Fraction] = []
    rest = sp.Poly(1, _S, domain=sp.QQ)
    for factor, _ in factors:
        if factor.degree() == 1:
            a, b = factor.all_coeffs()
            rational.append(_to_fraction(-b / a))
        else:
            rest = rest * factor
    return sorted(rational), (rest if rest.degree() >= 1 else None)


def sturm_root_count(q: SPoly, lo: RationalLike, hi: RationalLike) -> int:
    """
    Count distinct real roots of q in the half-open interval (lo, hi].

    A root at lo is left out, so callers need not nudge endpoints.

    Examples:
        >>> sturm_root_count(SPoly.from_coeffs(["-1/4", 0, 1]), 0, 1)
        1
    """
    lo, hi = parse_rational(lo), parse_rational(hi)
    if lo >= hi:
        raise ValueError(f"sturm_root_count needs lo < hi, got ({lo}, {hi}]")
    if q.is_zero:
        raise ZeroPolynomialError("cannot count roots of the zero polynomial")
    g = _squarefree(q)
    if g.degree < 1:
        return 0
    closed = g.to_sympy().count_roots(_to_rational(lo), _to_rational(hi))
    return int(closed) - (1 if g(lo) == 0 else 0)


def _avoid(rest: sp.Poly, interval: Interval, points: Sequence[Fraction]) -> Interval:
    """Shrink an isolating interval of rest until none of `points` lies in it."""
    lo, hi = interval
    while any(lo <= x <= hi for x in points):
        lo, hi = _refine_sympy(rest, (lo, hi), (hi - lo) / 2)
    return lo, hi


def _refine_sympy(rest: sp.Poly, interval: Interval, width: Fraction) -> Interval:
    s, t = (_to_rational(x) for x in interval)
    a, b = rest.refine_root(s, t, eps=_to_rational(width))
    a, b = _to_fraction(a), _to_fraction(b)
    return (a, b) if a <= b else (b, a)


def isolate_roots(q: SPoly, lo: RationalLike = 0, hi: RationalLike = 1) -> list[Interval]:
    """
    Rational isolating intervals for the distinct roots of q in [lo, hi].

    Each interval holds exactly one root. Rational roots are found exactly
    and come back as degenerate intervals (c, c). Sorted ascending.

    Examples:
        >>> isolate_roots(SPoly.from_coeffs([1, -4, 4]))
        [(Fraction(1, 2), Fraction(1, 2))]
    """
    lo, hi = parse_rational(lo), parse_rational(hi)
    if q.is_zero:
        raise ZeroPolynomialError("cannot isolate roots of the zero polynomial")
    g = _squarefree(q)
    if g.degree < 1:
        return []
    rational, rest = _split_rational_roots(g)
    exact = [x for x in rational if lo <= x <= hi]
    out: list[Interval] = [(x, x) for x in exact]
    if rest is not None and lo < hi:
        for (a, b), _ in rest.intervals(inf=_to_rational(lo), sup=_to_rational(hi)):
            out.append(_avoid(rest, (_to_fraction(a), _to_fraction(b)), exact))
    out.sort()
    logger.debug("isolated %d root(s) of %s in [%s, %s]", len(out), q, lo, hi)
    return out


def refine_root(q: SPoly, interval: Interval, width: RationalLike) -> Interval:
    """Narrow an isolating interval of q until it is at most `width` wide."""
    width = parse_rational(width)
    lo, hi = interval
    if lo == hi:
        return interval
    g = _squarefree(q)
    for x in (lo, hi):
        if g(x) == 0:
            return (x, x)
    if hi - lo <= width:
        return interval
    rational, rest = _split_rational_roots(g)
    inside = [x for x in rational if lo < x < hi]
    if inside:
        # an isolating interval holds one root, so a rational root inside is it
        return (inside[0], inside[0])
    if rest is None:
        raise ValueError(f"({lo}, {hi}) holds no root of {q}")
    return _refine_sympy(rest, interval, width)


def _interior_sample(q: SPoly) -> Fraction:
    """A point of (0, 1) where q does not vanish."""
    den = 2
    while True:
        for num in range(1, den):
            t = Fraction(num, den)
            if q(t) != 0:
                return t
        den += 1


def _odd_multiplicity_part(q: SPoly) -> Optional[SPoly]:
    _, factors = q.to_sympy().sqf_list()
    odd = sp.Poly(1, _S, domain=sp.QQ)
    for factor, multiplicity in factors:
        if multiplicity % 2:
            odd = odd * factor
    result = SPoly.from_sympy(odd)
    return result if result.degree >= 1 else None


def _contains_root(g: SPoly, interval: Interval) -> bool:
    lo, hi = interval
    if lo == hi:
        return g(lo) == 0
    return sturm_root_count(g, lo, hi) > 0


def _as_witness(q: SPoly, interval: Interval) -> RationalInterval:
    lo, hi = refine_root(q, interval, WITNESS_WIDTH)
    return RationalInterval(lo=lo, hi=hi)


def positivity(q: SPoly) -> PositivityVerdict:
    """
    Decide the sign of q on [0, 1] exactly.

    Returns:
        StrictlyPositive when q has no root in [0, 1] and q(0) > 0;
        NonnegativeWithZero when every root in [0, 1] is a touch (or sits at an
        endpoint) and q is positive elsewhere; Indefinite otherwise

    Raises:
        ZeroPolynomialError: q is identically zero
    """
    if q.is_zero:
        raise ZeroPolynomialError("positivity of the zero polynomial is undefined")
    roots = isolate_roots(q, 0, 1)
    if not roots:
        if q(0) > 0:
            verdict = PositivityVerdict(kind="StrictlyPositive")
        else:
            origin = (Fraction(0), Fraction(0))
            verdict = PositivityVerdict(kind="Indefinite", witness=_as_witness(q, origin))
        logger.debug("positivity of %s: %s (no roots in [0, 1])", q, verdict.kind)
        return verdict

    odd = _odd_multiplicity_part(q)
    if odd is not None:
        for interval in roots:
            if interval in ((0, 0), (1, 1)):
                continue
            if _contains_root(odd, interval):
                logger.debug("positivity of %s: sign change near %s", q, interval)
                return PositivityVerdict(kind="Indefinite", witness=_as_witness(q, interval))

    kind = "NonnegativeWithZero" if q(_interior_sample(q)) > 0 else "Indefinite"
    logger.debug("positivity of %s: %s with %d root(s) in [0, 1]", q, kind, len(roots))
    return PositivityVerdict(kind=kind, witness=_as_witness(q, roots[0]))
