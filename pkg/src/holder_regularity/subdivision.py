"""
Exact execution of subdivision schemes and the empirical checks built on it.

Sequences keep their natural index span: refining data on [lo, hi] with a mask
on [K, L] gives data on [K + 2 lo, L + 2 hi], zeros included. All arithmetic
is over Fractions; floats appear only in the final estimates.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .config import settings
from .exceptions import DegenerateSequenceError, ParameterRangeError, SequenceTooShortError
from .laurent import (
    LaurentPoly,
    RationalLike,
    SymmetricMask,
    divide_one_plus_z,
    from_half_mask,
    parse_rational,
    scale,
)
from .regularity import build_matrix_folded, build_matrix_transpose

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DyadicSequence:
    """
    Values f_{j,k} attached to the points 2^-j (low + i).

    Attributes:
        level: refinement level j
        low: index of the first value
        values: exact values; zeros are kept
    """

    level: int
    low: int
    values: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))

    @classmethod
    def from_values(cls, values: Iterable[RationalLike], low: int = 0, level: int = 0) -> "DyadicSequence":
        return cls(level, low, tuple(parse_rational(v) for v in values))

    @classmethod
    def delta(cls, level: int = 0, pad: int = 0) -> "DyadicSequence":
        """Cardinal data, optionally padded with zeros on both sides."""
        return cls(level, -pad, (Fraction(0),) * pad + (Fraction(1),) + (Fraction(0),) * pad)

    @property
    def high(self) -> int:
        return self.low + len(self.values) - 1

    def __getitem__(self, k: int) -> Fraction:
        i = k - self.low
        if 0 <= i < len(self.values):
            return self.values[i]
        return Fraction(0)

    def to_laurent(self) -> LaurentPoly:
        return LaurentPoly(self.low, self.values)


@dataclass(frozen=True)
class DividedDiffSequence:
    order: int
    inner: DyadicSequence


def _refine(a: LaurentPoly, f: DyadicSequence) -> DyadicSequence:
    out = [Fraction(0)] * (2 * (len(f.values) - 1) + len(a.coeffs))
    taps = [(i, c) for i, c in enumerate(a.coeffs) if c]
    for l, value in enumerate(f.values):
        if not value:
            continue
        for i, c in taps:
            out[2 * l + i] += c * value
    return DyadicSequence(f.level + 1, a.low + 2 * f.low, tuple(out))


def subdivide(a: LaurentPoly, f: DyadicSequence, steps: int = 1) -> DyadicSequence:
    """
    Apply f_{j+1,k} = sum_l a_{k-2l} f_{j,l} `steps` times.

    Examples:
        >>> subdivide(LaurentPoly.from_coeffs([1, 1]), DyadicSequence.delta()).values
        (Fraction(1, 1), Fraction(1, 1))
    """
    if steps < 0:
        raise ParameterRangeError(f"steps must be >= 0, got {steps}")
    if a.is_zero:
        raise ParameterRangeError("cannot subdivide with the zero mask")
    for _ in range(steps):
        f = _refine(a, f)
    return f


def derived_mask(a: LaurentPoly, s: int) -> LaurentPoly:
    """
    Mask of the scheme acting on s-th divided differences: 2^s a / (1+z)^s.

    Raises:
        NotDivisibleError: (1+z)^s does not divide a
    """
    if s < 0:
        raise ParameterRangeError(f"derivative order must be >= 0, got {s}")
    return scale(divide_one_plus_z(a, s), 2**s)


def divided_differences(f: DyadicSequence, s: int) -> DividedDiffSequence:
    """
    f^[s]_{j,k} = 2^j / s * (f^[s-1]_{j,k} - f^[s-1]_{j,k-1}), for k from low + s.

    Raises:
        SequenceTooShortError: fewer than s + 1 values
    """
    if s < 1:
        raise ParameterRangeError(f"divided difference order must be >= 1, got {s}")
    if len(f.values) < s + 1:
        raise SequenceTooShortError(
            f"order-{s} divided differences need at least {s + 1} values, got {len(f.values)}"
        )
    values = f.values
    for order in range(1, s + 1):
        factor = Fraction(2**f.level, order)
        values = tuple(factor * (values[i] - values[i - 1]) for i in range(1, len(values)))
    return DividedDiffSequence(s, DyadicSequence(f.level, f.low + s, values))


def b_iterates(b: SymmetricMask, j: int) -> DyadicSequence:
    """
    Coefficients b_{j,k} of b(z) b(z^2) ... b(z^(2^(j-1))) on [-(2^j-1)p, (2^j-1)p].

    Examples:
        >>> b_iterates(SymmetricMask.from_half([1, 0]), 0).values
        (Fraction(1, 1),)
    """
    if j < 0:
        raise ParameterRangeError(f"level must be >= 0, got {j}")
    start = DyadicSequence.delta()
    if b.p == 0:
        return DyadicSequence(j, 0, (b.half[0] ** j,))
    return subdivide(from_half_mask(b), start, j)


def central_sequence(b: SymmetricMask, jmax: Optional[int] = None) -> list[Fraction]:
    """
    b_{0,0}, ..., b_{jmax,0} through the folded matrix.

    The vector (b_{j,0}, ..., b_{j,p-1}) is multiplied by the folded matrix at
    each step, so the work per level is constant.
    """
    jmax = settings.jmax_central if jmax is None else jmax
    if jmax < 0:
        raise ParameterRangeError(f"jmax must be >= 0, got {jmax}")
    if b.p == 0:
        return [b.half[0] ** j for j in range(jmax + 1)]
    matrix = build_matrix_folded(b)
    vector = (Fraction(1),) + (Fraction(0),) * (b.p - 1)
    central = [vector[0]]
    for _ in range(jmax):
        vector = matrix.matvec(vector)
        central.append(vector[0])
    return central


def decimated_sequence(b: SymmetricMask, jmax: int) -> list[tuple[Fraction, ...]]:
    """
    Vectors (b_{j, 2^j k})_{|k| < p} for j = 0..jmax via the transpose matrix.

    Entry i of each vector is the value at k = i - (p - 1).
    """
    if jmax < 0:
        raise ParameterRangeError(f"jmax must be >= 0, got {jmax}")
    matrix = build_matrix_transpose(b)
    vector = tuple(Fraction(1) if k == 0 else Fraction(0) for k in range(-b.p + 1, b.p))
    out = [vector]
    for _ in range(jmax):
        vector = matrix.matvec(vector)
        out.append(vector)
    return out


def ratio_estimates(central: list[Fraction]) -> list[float]:
    """b_{j,0} / b_{j-1,0} for j = 1..len-1."""
    out = []
    for j in range(1, len(central)):
        if central[j - 1] == 0:
            raise DegenerateSequenceError(f"b_({j - 1},0) = 0: the ratio estimate is undefined")
        out.append(float(central[j] / central[j - 1]))
    return out


def empirical_rho(b: SymmetricMask, jmax: Optional[int] = None) -> float:
    """
    Consecutive-ratio estimate b_{jmax,0} / b_{jmax-1,0} of rho.

    Raises:
        DegenerateSequenceError: b_{jmax-1,0} = 0
    """
    jmax = settings.jmax_central if jmax is None else jmax
    if jmax < 2:
        raise ParameterRangeError(f"jmax must be >= 2, got {jmax}")
    central = central_sequence(b, jmax)
    if central[-2] == 0:
        raise DegenerateSequenceError(f"b_({jmax - 1},0) = 0: the ratio estimate is undefined")
    return float(central[-1] / central[-2])


def central_root_estimate(central: list[Fraction]) -> float:
    """b_{j,0}^(1/j) for the last entry j of the sequence."""
    j = len(central) - 1
    value = central[-1]
    if j < 1:
        raise ParameterRangeError("the root estimate needs at least b_(1,0)")
    if value <= 0:
        raise DegenerateSequenceError(f"b_({j},0) = {value} is not positive")
    return math.exp((math.log(value.numerator) - math.log(value.denominator)) / j)


def max_center_check(b: SymmetricMask, jmax: Optional[int] = None) -> bool:
    """
    True iff max_k |b_{j,k}| is attained at k = 0 for every j <= jmax.

    Exact; the iterates are refined one level at a time.
    """
    jmax = settings.jmax_full if jmax is None else jmax
    mask = from_half_mask(b)
    seq = DyadicSequence.delta()
    for j in range(jmax + 1):
        if j:
            seq = _refine(mask, seq)
        center = seq[0]
        if any(abs(v) > center for v in seq.values):
            logger.debug("max-at-center fails at level %d", j)
            return False
    return True


def cardinal_samples(a: LaurentPoly, levels: int) -> DyadicSequence:
    """Refinement of the cardinal data delta_{k,0}, `levels` times."""
    return subdivide(a, DyadicSequence.delta(), levels)


def two_scale_residual(a: LaurentPoly, levels: int) -> Fraction:
    """
    max |f_{j,n} - sum_k a_k f_{j-1, n - k 2^(j-1)}| over 1 <= j <= levels.

    f_j are the cardinal samples; the residual is exactly zero for every scheme.
    """
    if levels < 1:
        raise ParameterRangeError(f"levels must be >= 1, got {levels}")
    worst = Fraction(0)
    previous = cardinal_samples(a, 0)
    for j in range(1, levels + 1):
        current = _refine(a, previous)
        stride = 2 ** (j - 1)
        for n in range(current.low, current.high + 1):
            rhs = sum((c * previous[n - (a.low + i) * stride] for i, c in enumerate(a.coeffs)), Fraction(0))
            worst = max(worst, abs(current[n] - rhs))
        previous = current
    return worst


def bspline_limit_values(seq: DyadicSequence) -> DyadicSequence:
    """
    Limit values (f_{k-1} + 4 f_k + f_{k+1}) / 6 of cubic B-spline control data.

    Defined for the interior indices low+1 .. high-1.
    """
    if len(seq.values) < 3:
        raise SequenceTooShortError("the limit-point rule needs at least 3 values")
    v = seq.values
    return DyadicSequence(
        seq.level,
        seq.low + 1,
        tuple((v[i - 1] + 4 * v[i] + v[i + 1]) / 6 for i in range(1, len(v) - 1)),
    )
