"""
Unit tests for holder_regularity.comparisons.

Sharpest ratio constants between B-polynomials, the closed-form constants
of the family statements and their check against computed tables.
"""

import sys
from fractions import Fraction
from pathlib import Path

import pytest

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent.parent / "src"))

from holder_regularity.comparisons import (
    STATEMENTS,
    compare_families,
    gap_bound,
    match_statement,
    min_ratio_constant,
    theorem_constants,
    verify_theorems,
)
from holder_regularity.exceptions import NotStrictlyPositiveError, ParameterRangeError
from holder_regularity.families import FamilyId, b_spoly, parse_family_spec
from holder_regularity.regularity import regularity_table
from holder_regularity.trig import SPoly


def _fam(kind, m, l):
    return FamilyId(kind=kind, m=m, l=l)


def _statement_pairs(m_max):
    """Every (den, num) pair covered by a statement, with m <= m_max on both sides."""
    pairs = []
    for kind in ("primal", "dual"):
        for m in range(1, m_max + 1):
            for l in range(1, m):
                pairs.append((_fam(kind, m, l - 1), _fam(kind, m, l)))
            if m < m_max:
                for l in range(m):
                    pairs.append((_fam(kind, m, l), _fam(kind, m + 1, l)))
                pairs.append((_fam(kind, m, m - 1), _fam(kind, m + 1, m)))
    for m in range(1, m_max + 1):
        for l in range(m):
            pairs.append((_fam("primal", m, l), _fam("dual", m, l)))
            if m < m_max:
                pairs.append((_fam("dual", m, l), _fam("primal", m + 1, l)))
    return pairs


class TestMinRatio:
    """sup of num/den on [0, 1]."""

    def test_endpoint_maximum(self):
        """(1 + 3s + 6s^2)/(1 + 2s) peaks at s = 1 with value 10/3."""
        sup = min_ratio_constant(SPoly.from_coeffs([1, 3, 6]), SPoly.from_coeffs([1, 2]))
        assert sup.exact == Fraction(10, 3)
        assert sup.argmax == (1, 1)

    def test_identical_polynomials(self):
        """q/q is 1 everywhere."""
        q = SPoly.from_coeffs([1, 3, 6])
        assert min_ratio_constant(q, q).exact == 1

    def test_rational_interior_maximum(self):
        """1 + 4s - 4s^2 peaks at s = 1/2 with value 2."""
        sup = min_ratio_constant(SPoly.from_coeffs([1, 4, -4]), SPoly.from_coeffs([1]))
        assert sup.exact == 2
        assert sup.argmax == (Fraction(1, 2), Fraction(1, 2))

    def test_irrational_interior_maximum(self):
        """1 + s - s^3 peaks at 1/sqrt(3)."""
        sup = min_ratio_constant(SPoly.from_coeffs([1, 1, 0, -1]), SPoly.from_coeffs([1]))
        expected = 1 + 2 / (3 * 3**0.5)
        assert sup.value == pytest.approx(expected, abs=1e-9)
        assert sup.radius <= 1e-9
        assert sup.lower <= Fraction(expected) + Fraction(1, 10**9)
        assert sup.exact is None

    def test_smaller_member_over_larger(self):
        """B_{m,l-1} / B_{m,l} is at most 1, attained at s = 0."""
        for m, l in [(3, 2), (5, 3), (8, 7)]:
            sup = min_ratio_constant(b_spoly(_fam("primal", m, l - 1)), b_spoly(_fam("primal", m, l)))
            assert sup.exact == 1

    def test_denominator_with_root(self):
        """A denominator vanishing on [0, 1] is rejected."""
        with pytest.raises(NotStrictlyPositiveError):
            min_ratio_constant(SPoly.from_coeffs([1]), SPoly.from_coeffs([0, 1]))


class TestGapBound:
    """r~ - r - log2(C)."""

    def test_values(self):
        """Exact and irrational examples."""
        assert gap_bound(1, 3, 3) == 0
        assert gap_bound(4, 3, 5) == 0
        assert gap_bound(Fraction(10, 3), 3, 5) == pytest.approx(0.26303, abs=5e-6)
        assert gap_bound(2.0, 1, 4) == 2.0

    def test_constant_below_one(self):
        """C < 1 is not a comparison constant."""
        with pytest.raises(ParameterRangeError):
            gap_bound(Fraction(1, 2), 3, 5)


class TestTheoremConstants:
    """Closed forms of the statements."""

    def test_examples(self):
        """Known values."""
        assert theorem_constants("T5i", 3, 2) == Fraction(5, 2)
        assert theorem_constants("T5iii", 2) == Fraction(10, 3)
        assert theorem_constants("T7a", 5, 0) == 1
        assert theorem_constants("T7a", 4, 3) == Fraction(429, 320)
        assert theorem_constants("T5ii", 3, 2) == Fraction(5, 3)

    @pytest.mark.parametrize("which", STATEMENTS)
    def test_at_least_one(self, which):
        """Every constant is >= 1."""
        for m in range(1, 9):
            for l in range(1 if which in ("T5i", "T6i") else 0, m):
                assert theorem_constants(which, m, l) >= 1

    def test_out_of_range(self):
        """l = 0 has no T5i constant and l must stay below m."""
        with pytest.raises(ParameterRangeError):
            theorem_constants("T5i", 3, 0)
        with pytest.raises(ParameterRangeError):
            theorem_constants("T5ii", 3, 3)


class TestMatchStatement:
    """Automatic statement detection."""

    def test_detection(self):
        """Each pattern maps to its statement."""
        assert match_statement(_fam("primal", 3, 1), _fam("primal", 3, 2)) == ("T5i", 3, 2)
        assert match_statement(_fam("dual", 3, 1), _fam("dual", 4, 1)) == ("T6ii", 3, 1)
        assert match_statement(_fam("primal", 2, 1), _fam("primal", 3, 2)) == ("T5iii", 2, 1)
        assert match_statement(_fam("primal", 4, 3), _fam("dual", 4, 3)) == ("T7a", 4, 3)
        assert match_statement(_fam("dual", 2, 1), _fam("primal", 3, 1)) == ("T7b", 2, 1)

    def test_unrelated(self):
        """Pairs outside every statement get None."""
        assert match_statement(_fam("primal", 3, 2), _fam("primal", 5, 1)) is None
        assert match_statement(_fam("dual", 3, 2), _fam("primal", 3, 2)) is None


class TestCompareFamilies:
    """compare_families end to end."""

    def test_diagonal(self):
        """Primal (2,1) against (3,2): C* = 10/3 matches the closed form."""
        result = compare_families(parse_family_spec("primal:2,1"), parse_family_spec("primal:3,2"))
        assert result.c_star == pytest.approx(10 / 3)
        assert result.c_star_radius == 0
        assert result.c_star_exact == Fraction(10, 3)
        assert result.theorem == "T5iii"
        assert result.c_theorem == Fraction(10, 3)
        assert (result.r, result.r_tilde) == (3, 5)
        assert result.gap_bound == pytest.approx(0.26303, abs=5e-6)

    def test_self(self):
        """A member against itself has C* = 1 and no statement."""
        family = parse_family_spec("primal:3,2")
        result = compare_families(family, family)
        assert result.c_star == 1
        assert result.theorem is None
        assert result.gap_bound == 0

    def test_primal_to_dual(self):
        """C* stays below the closed-form constant."""
        result = compare_families(_fam("primal", 4, 3), _fam("dual", 4, 3))
        assert result.theorem == "T7a"
        assert result.c_star <= float(result.c_theorem) + 1e-9

    @pytest.mark.slow
    def test_closed_forms_bound_sharp_constants(self):
        """For every covered pair with m <= 8 the sharp constant is below the closed form."""
        for den, num in _statement_pairs(8):
            result = compare_families(den, num)
            assert result.theorem is not None, (den.label, num.label)
            assert result.c_star <= float(result.c_theorem) + 1e-9, (den.label, num.label)


class TestVerifyTheorems:
    """Two-sided inequalities on computed tables."""

    def test_small(self):
        """Everything holds up to m = 3."""
        report = verify_theorems(3)
        assert report.passed
        assert report.checks_run["T5i"] == 3
        assert report.checks_run["T5iii"] == 2

    def test_rejects_tiny_range(self):
        """m_max must be at least 2."""
        with pytest.raises(ParameterRangeError):
            verify_theorems(1)

    def test_violation_reported(self):
        """A doctored table produces a violation."""
        primal = regularity_table("primal", 3, include_bspline=True)
        dual = regularity_table("dual", 3, include_bspline=True)
        doctored = [c.model_copy(update={"gamma": c.gamma + 5}) if (c.m, c.l) == (3, 2) else c for c in primal]
        report = verify_theorems(3, primal=doctored, dual=dual)
        assert not report.passed
        assert any(v.statement == "T5i" and (v.m, v.l) == (3, 2) for v in report.violations)

    @pytest.mark.slow
    def test_full(self):
        """Everything holds up to m = 8."""
        assert verify_theorems(8).passed

    @pytest.mark.slow
    def test_sharp_gaps_hold(self):
        """Actual gaps are at least the bound from the sharp constant."""
        tables = {
            kind: {(c.m, c.l): c.gamma for c in regularity_table(kind, 6, include_bspline=True)}
            for kind in ("primal", "dual")
        }
        for den, num in _statement_pairs(6):
            result = compare_families(den, num)
            actual = tables[num.kind][num.m, num.l] - tables[den.kind][den.m, den.l]
            assert actual >= result.gap_bound - 1e-9, (den.label, num.label)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
