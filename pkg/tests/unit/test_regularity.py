"""
Unit tests for holder_regularity.regularity.

Transition matrices, exact characteristic polynomials, certified spectral
radii and the full analysis, checked against the known regularity tables.
"""

import sys
from fractions import Fraction
from pathlib import Path

import pytest

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent.parent / "src"))

from holder_regularity.exceptions import (
    ConvergenceConditionError,
    DegenerateBSplineError,
    EnclosureTooWideError,
    IndefiniteSymbolError,
    NotSymmetricError,
    OutOfTheoremRangeError,
    ParameterRangeError,
    ReductionWindowExceededError,
)
from holder_regularity.families import FamilyId, bspline_symbol, primal_symbol
from holder_regularity.laurent import LaurentPoly, SymmetricMask, center_symmetric, mul, shift
from holder_regularity.regularity import (
    RationalMatrix,
    analyze,
    analyze_family,
    build_matrix_folded,
    build_matrix_large,
    build_matrix_transpose,
    char_poly,
    difference_mask,
    enclose_max_modulus,
    format_gamma,
    regularity_from_rho,
    regularity_table,
    spectral_radius,
    table_members,
)
from holder_regularity.schemas import RhoEnclosure, TableCell


QUINTIC = LaurentPoly.from_coeffs(
    ["3/256", 0, "-25/256", 0, "150/256", 1, "150/256", 0, "-25/256", 0, "3/256"], low=-5
)
QUINTIC_B = SymmetricMask.from_half(["38/8", "-18/8", "3/8"])
EIGHT_POINT_B = SymmetricMask.from_half(["208/16", "-131/16", "40/16", "-5/16"])

PRIMAL_TABLE = {
    2: [2],
    3: [3.67807, 2.83007],
    4: [5.41504, 4.34379, 3.55113],
    5: [7.19265, 5.92502, 4.96207, 4.19357],
    6: [9, 7.55781, 6.43997, 5.53250, 4.77675],
    7: [10.83007, 9.23111, 7.97187, 6.93577, 6.06273, 5.31732],
    8: [12.67807, 10.93702, 9.54804, 8.39272, 7.41006, 6.56398, 5.82944],
}
DUAL_TABLE = {
    2: [2.83007],
    3: [4.54057, 3.57723],
    4: [6.29956, 5.12711, 4.24726],
    5: [8.09311, 6.73575, 5.69355, 4.85423],
    6: [9.91254, 8.38994, 7.19984, 6.22682, 5.41143],
    7: [11.75207, 10.08039, 8.75493, 7.65811, 6.72934, 5.93283],
    8: [13.60768, 11.80033, 10.35034, 9.13861, 8.10385, 7.20968, 6.43070],
}

# r = 1 with b = z^-1 - 1 + z: B = 1 - 4s changes sign
INDEFINITE = mul(LaurentPoly.from_coeffs(["1/2", 1, "1/2"]), LaurentPoly.from_coeffs([1, -1, 1], low=-1))
# r = 1 with B = (1 - 2s)^2, which touches zero at s = 1/2
TOUCHING = mul(
    LaurentPoly.from_coeffs(["1/2", 1, "1/2"]),
    LaurentPoly.from_coeffs(["1/4", 0, "1/2", 0, "1/4"], low=-2),
)


def _rho(estimate, radius=0.0, exact=None):
    return RhoEnclosure(estimate=estimate, radius_bound=radius, charpoly=[], exact=exact)


class TestMatrices:
    """Transition matrices built from the half mask."""

    def test_quintic_folded(self):
        """(1/8) [[38, 6], [-18, -18]]."""
        assert build_matrix_folded(QUINTIC_B).to_lists() == [
            [Fraction(38, 8), Fraction(6, 8)],
            [Fraction(-18, 8), Fraction(-18, 8)],
        ]

    def test_quintic_large(self):
        """(1/8) [[-18, -18, 0], [3, 38, 3], [0, -18, -18]]."""
        expected = [[-18, -18, 0], [3, 38, 3], [0, -18, -18]]
        assert build_matrix_large(QUINTIC_B).to_lists() == [[Fraction(x, 8) for x in row] for row in expected]

    def test_eight_point_folded(self):
        """Folded matrix of the eight-point scheme."""
        assert build_matrix_folded(EIGHT_POINT_B).to_lists() == [
            [13, 5, 0],
            [Fraction(-131, 16), Fraction(-136, 16), Fraction(-5, 16)],
            [Fraction(5, 2), 13, Fraction(5, 2)],
        ]

    def test_generic_small_masks(self):
        """Entry patterns for b = (5, 2, 1)."""
        b = SymmetricMask.from_half([5, 2, 1])
        assert build_matrix_large(b).to_lists() == [[2, 2, 0], [1, 5, 1], [0, 2, 2]]
        assert build_matrix_folded(b).to_lists() == [[5, 2], [2, 2]]

    def test_folded_row_with_reflection(self):
        """Row k = 2 of the folded matrix for p = 4 folds b_{k+2l} back in."""
        b = SymmetricMask.from_half([10, 4, 3, 2, 1])
        assert build_matrix_folded(b).to_lists()[2] == [3, 11, 3, 1]

    def test_transpose(self):
        """The decimation matrix is the transpose of the large one."""
        assert build_matrix_transpose(QUINTIC_B) == build_matrix_large(QUINTIC_B).transpose()

    def test_single_entry(self):
        """p = 1 gives the 1x1 matrix [b_0]."""
        b = SymmetricMask.from_half([2, "-1/2"])
        assert build_matrix_folded(b).to_lists() == [[2]]
        assert build_matrix_large(b).to_lists() == [[2]]

    def test_degenerate(self):
        """p = 0 has no matrix."""
        with pytest.raises(DegenerateBSplineError):
            build_matrix_folded(SymmetricMask.from_half([1]))

    def test_matvec(self):
        """Matrix-vector product is exact."""
        A = RationalMatrix.from_rows([[1, 2], [3, 4]])
        assert A.matvec([Fraction(1, 2), 1]) == (Fraction(5, 2), Fraction(11, 2))
        with pytest.raises(ValueError):
            A.matvec([1])


class TestCharPoly:
    """Exact det(A - lambda I)."""

    def test_quintic(self):
        """lambda^2 - (5/2) lambda - 9."""
        assert char_poly(build_matrix_folded(QUINTIC_B)) == [-9, Fraction(-5, 2), 1]

    def test_eight_point(self):
        """-lambda^3 + 7 lambda^2 + (217/4) lambda - 125."""
        assert char_poly(build_matrix_folded(EIGHT_POINT_B)) == [-125, Fraction(217, 4), 7, -1]

    def test_identity(self):
        """det(I - lambda I) = (1 - lambda)^2."""
        assert char_poly(RationalMatrix.from_rows([[1, 0], [0, 1]])) == [1, -2, 1]


class TestSpectralRadius:
    """Certified enclosures."""

    def test_rational_root_is_exact(self):
        """The quintic radius is 9/2 with a zero-width enclosure."""
        rho = spectral_radius(build_matrix_folded(QUINTIC_B))
        assert rho.exact == Fraction(9, 2)
        assert rho.estimate == 4.5
        assert rho.radius_bound == 0.0

    def test_irrational_root(self):
        """The eight-point radius is about 10.91976 with a tight enclosure."""
        rho = spectral_radius(build_matrix_folded(EIGHT_POINT_B))
        assert rho.exact is None
        assert rho.estimate == pytest.approx(10.91976, abs=5e-6)
        assert rho.radius_bound <= 1e-10 * rho.estimate

    def test_complex_dominant_pair(self):
        """x^2 + 2x + 5 has roots -1 +/- 2i of modulus sqrt(5)."""
        rho = enclose_max_modulus([5, 2, 1])
        assert rho.estimate == pytest.approx(5**0.5, rel=1e-12)
        assert rho.estimate - rho.radius_bound <= 5**0.5 <= rho.estimate + rho.radius_bound

    def test_repeated_roots(self):
        """(x - 3)^2 (x^2 - 2) is handled through its square-free part."""
        # (x^2 - 6x + 9)(x^2 - 2) = x^4 - 6x^3 + 7x^2 + 12x - 18
        rho = enclose_max_modulus([-18, 12, 7, -6, 1])
        assert rho.exact == 3
        assert rho.radius_bound == 0.0

    def test_unreachable_tolerance(self):
        """A zero tolerance cannot be met for an irrational root."""
        with pytest.raises(EnclosureTooWideError) as excinfo:
            enclose_max_modulus([-2, 0, 1], rtol=0.0)
        assert excinfo.value.enclosure.estimate == pytest.approx(2**0.5)

    def test_constant_rejected(self):
        """A constant has no roots."""
        with pytest.raises(ParameterRangeError):
            enclose_max_modulus([3])


class TestRegularityFromRho:
    """gamma = r - log2(rho)."""

    def test_exact_non_power(self):
        """rho = 9/2 at r = 5."""
        gamma, caveat = regularity_from_rho(5, _rho(4.5, exact=Fraction(9, 2)))
        assert gamma == pytest.approx(2.830074998557688, abs=1e-12)
        assert not caveat

    def test_power_of_two_flags_caveat(self):
        """rho = 4 at r = 11 is exactly 9."""
        gamma, caveat = regularity_from_rho(11, _rho(4.0, exact=Fraction(4)))
        assert gamma == 9.0
        assert caveat

    def test_fractional_power_of_two(self):
        """rho = 1/2 is the lowest admissible value."""
        gamma, caveat = regularity_from_rho(1, _rho(0.5, exact=Fraction(1, 2)))
        assert gamma == 2.0
        assert caveat

    def test_enclosure_without_exact_value(self):
        """An estimate with a small radius."""
        gamma, caveat = regularity_from_rho(7, _rho(10.919762, 1e-12))
        assert gamma == pytest.approx(3.55113, abs=5e-6)
        assert not caveat

    def test_too_small(self):
        """rho < 1/2 is outside the range of the bound."""
        with pytest.raises(OutOfTheoremRangeError):
            regularity_from_rho(3, _rho(0.25, exact=Fraction(1, 4)))

    def test_too_large(self):
        """rho >= 2^r gives no smoothness."""
        with pytest.raises(ReductionWindowExceededError):
            regularity_from_rho(2, _rho(4.0, exact=Fraction(4)))


class TestAnalyze:
    """End-to-end analysis of a symbol."""

    def test_quintic(self):
        """The quintic Dubuc-Deslauriers scheme is C^2.83007 exactly."""
        report = analyze(QUINTIC)
        assert report.multiplicity == 6
        assert report.r == 5
        assert report.p == 2
        assert report.difference_mask == [Fraction(19, 4), Fraction(-9, 4), Fraction(3, 8)]
        assert report.s_poly == [1, 3, 6]
        assert report.positivity.kind == "StrictlyPositive"
        assert report.rho.exact == Fraction(9, 2)
        assert report.gamma == pytest.approx(2.83007, abs=5e-6)
        assert report.optimal
        assert not report.integer_exponent_caveat

    def test_eight_point(self):
        """Primal (4, 3) is C^3.55113."""
        report = analyze_family(FamilyId(kind="primal", m=4, l=3))
        assert report.gamma == pytest.approx(3.55113, abs=5e-6)
        assert report.rho.estimate == pytest.approx(10.91976, abs=5e-6)

    def test_cubic_bspline(self):
        """p = 0: gamma = r = 3 with the integer caveat."""
        report = analyze(bspline_symbol(3))
        assert report.p == 0
        assert report.gamma == 3.0
        assert report.optimal
        assert report.integer_exponent_caveat
        assert report.folded_matrix is None

    def test_four_point(self):
        """Primal (2, 1) has rho = 2 and gamma = 2 exactly."""
        report = analyze(primal_symbol(2, 1))
        assert report.rho.exact == 2
        assert report.gamma == 2.0
        assert report.integer_exponent_caveat

    @pytest.mark.parametrize("k", [-3, -1, 1, 4])
    def test_shift_invariance(self, k):
        """Multiplying the symbol by z^k changes nothing."""
        assert analyze(shift(QUINTIC, k)) == analyze(QUINTIC)

    def test_convergence_condition(self):
        """a(1) = 4 is rejected with the value in the message."""
        with pytest.raises(ConvergenceConditionError, match="a\\(1\\) = 4"):
            analyze(LaurentPoly.from_coeffs([1, 2, 1]))

    def test_not_symmetric(self):
        """A non-palindromic quotient is rejected."""
        a = mul(LaurentPoly.from_coeffs([1, 1]), LaurentPoly.from_coeffs(["1/2", "1/4", "1/4"]))
        with pytest.raises(NotSymmetricError):
            analyze(a)

    def test_indefinite_carries_diagnostics(self):
        """A sign change is an error carrying rho but no gamma."""
        with pytest.raises(IndefiniteSymbolError) as excinfo:
            analyze(INDEFINITE)
        report = excinfo.value.report
        assert report.positivity.kind == "Indefinite"
        assert report.positivity.witness.lo <= Fraction(1, 4) <= report.positivity.witness.hi
        assert report.rho.exact == 1
        assert report.gamma is None

    def test_touching_zero_is_lower_bound(self):
        """B with a double zero still gives gamma, flagged as a lower bound."""
        report = analyze(TOUCHING)
        assert report.positivity.kind == "NonnegativeWithZero"
        assert report.rho.exact == Fraction(1, 2)
        assert report.gamma == 2.0
        assert not report.optimal

    def test_holds_derived(self):
        """A smaller r keeps spare (1+z) factors in b and gives a lower bound."""
        report = analyze(QUINTIC, holds_derived=3)
        assert report.multiplicity == 6
        assert report.r == 3
        assert report.p == 3
        assert report.positivity.kind == "NonnegativeWithZero"
        assert not report.optimal
        assert report.gamma <= 2.830075

    def test_holds_derived_out_of_range(self):
        """r cannot exceed multiplicity - 1."""
        with pytest.raises(ParameterRangeError):
            difference_mask(QUINTIC, holds_derived=6)

    def test_report_json_round_trip(self):
        """Reports survive JSON with exact rationals intact."""
        report = analyze(QUINTIC)
        again = type(report).model_validate_json(report.model_dump_json())
        assert again == report


class TestTables:
    """Regularity tables for both families."""

    def test_members_order(self):
        """Cells come in (m, l) order."""
        members = table_members("primal", 4)
        assert [(f.m, f.l) for f in members] == [(2, 1), (3, 1), (3, 2), (4, 1), (4, 2), (4, 3)]
        assert table_members("dual", 2, include_bspline=True)[0] == FamilyId(kind="dual", m=1, l=0)

    def test_small_primal_table(self):
        """m <= 3 formatted to five decimals."""
        cells = regularity_table("primal", 3)
        assert [format_gamma(c) for c in cells] == ["2", "3.67807", "2.83007"]

    def test_process_pool_matches_sequential(self):
        """The worker pool reproduces the sequential table."""
        assert regularity_table("dual", 4, workers=2) == regularity_table("dual", 4, workers=1)

    def test_format_gamma(self):
        """Half-even rounding and bare integers for exact powers of two."""
        cell = TableCell(m=3, l=2, gamma=2.830074998557688, rho=4.5, optimal=True, caveat=False)
        assert format_gamma(cell) == "2.83007"
        assert format_gamma(cell, decimals=2) == "2.83"
        integer = TableCell(m=6, l=1, gamma=9.0, rho=4.0, optimal=True, caveat=True)
        assert format_gamma(integer) == "9"

    @pytest.mark.slow
    @pytest.mark.parametrize("kind,table", [("primal", PRIMAL_TABLE), ("dual", DUAL_TABLE)])
    def test_full_tables(self, kind, table):
        """Every entry with m <= 8 matches the published values to five decimals."""
        cells = regularity_table(kind, 8)
        assert len(cells) == 28
        for cell in cells:
            assert cell.gamma == pytest.approx(table[cell.m][cell.l - 1], abs=5e-6)
            assert cell.optimal

    @pytest.mark.slow
    @pytest.mark.parametrize("kind", ["primal", "dual"])
    def test_monotone_structure(self, kind):
        """gamma decreases in l and increases in m."""
        gammas = {(c.m, c.l): c.gamma for c in regularity_table(kind, 8)}
        for (m, l), gamma in gammas.items():
            if (m, l + 1) in gammas:
                assert gammas[(m, l + 1)] < gamma
            if (m + 1, l) in gammas:
                assert gammas[(m + 1, l)] > gamma


@pytest.mark.slow
class TestMatrixEquivalence:
    """The folded, large and transposed matrices share their spectral radius."""

    @pytest.mark.parametrize(
        "family",
        [FamilyId(kind=k, m=m, l=l) for k in ("primal", "dual") for m in range(2, 9) for l in range(1, m)],
        ids=lambda f: f.label,
    )
    def test_same_radius(self, family):
        """Agreement to 1e-10 relative."""
        _, _, b = difference_mask(family.symbol())
        folded = spectral_radius(build_matrix_folded(b)).estimate
        large = spectral_radius(build_matrix_large(b)).estimate
        transposed = spectral_radius(build_matrix_transpose(b)).estimate
        assert large == pytest.approx(folded, rel=1e-10)
        assert transposed == pytest.approx(folded, rel=1e-10)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
