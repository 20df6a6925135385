"""
Tests for ExactSurvivalService.

The three closed forms must agree with each other exactly in rational mode,
the certified curve must carry a tail bound below its target, and the
workload guards must trip before any enumeration starts.
"""

import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings as hypothesis_settings, strategies as st

from src.core.errors import (
    IndexOutOfRange,
    InvalidC,
    InvalidDelta,
    TailRateOne,
    WorkloadExceeded,
)
from src.core.settings import settings
from src.models.distribution import CouponDistribution, ThetaFamily
from src.models.enums import ArithmeticMode
from src.services.exact import CompositionIterator, ExactSurvivalService
from src.services.probmodel import ProbModelService


class TestCompositionIterator:
    def test_lists_compositions_lexicographically(self):
        """Test the compositions of 4 into 2 positive parts."""
        assert list(CompositionIterator(4, 2)) == [(1, 3), (2, 2), (3, 1)]

    def test_length_matches_binomial(self):
        """Test len() is C(total - 1, parts - 1)."""
        assert len(CompositionIterator(7, 3)) == math.comb(6, 2)
        assert len(list(CompositionIterator(7, 3))) == 15

    def test_empty_composition(self):
        """Test 0 splits into 0 parts exactly once and nothing else does."""
        assert list(CompositionIterator(0, 0)) == [()]
        assert list(CompositionIterator(3, 0)) == []
        assert len(CompositionIterator(2, 3)) == 0

    @pytest.mark.parametrize(("total", "parts"), [(0, 1), (0, 3), (1, 2), (2, 5)])
    def test_too_few_units_for_the_parts(self, total, parts):
        """Test no composition has a zero part when total < parts."""
        assert list(CompositionIterator(total, parts)) == []
        assert len(CompositionIterator(total, parts)) == 0


class TestSurvivalInclusionExclusion:
    """Tests for Pr{T > k} by inclusion-exclusion."""

    def test_two_fair_coupons(self, two_coupons):
        """Test Pr{T > k} = 1, 1, 1/2, 1/4, 1/8, 1/16."""
        values = ExactSurvivalService.survival_values(two_coupons, 2, 5)

        assert values == [1, 1, F(1, 2), F(1, 4), F(1, 8), F(1, 16)]

    def test_single_coupon_with_null_mass(self, sandwich_p):
        """Test c = 1 gives Pr{T > k} = p0^k."""
        values = ExactSurvivalService.survival_values(sandwich_p, 1, 4)

        assert values == [F(1, 5) ** k for k in range(5)]

    def test_sandwich_spot_values(self, sandwich_p):
        """Test Pr{T > 2} is 7/10 for p and 17/25 for the almost-uniform vector."""
        v = ProbModelService.almost_uniform(2, sandwich_p.null_mass)

        survival = ExactSurvivalService.survival_inclusion_exclusion

        assert survival(sandwich_p, 2, 2) == F(7, 10)
        assert survival(v, 2, 2) == F(17, 25)

    def test_float_values_are_clamped(self):
        """Test float values stay within [0, 1]."""
        p = ProbModelService.parse_distribution("0.3,0.3,0.3")

        values = ExactSurvivalService.survival_values(p, 3, 60)

        assert all(0.0 <= value <= 1.0 for value in values)
        assert values[0] == 1.0

    def test_invalid_c(self, two_coupons):
        """Test c outside 1..n raises InvalidC."""
        with pytest.raises(InvalidC):
            ExactSurvivalService.survival_inclusion_exclusion(two_coupons, 3, 1)

    def test_workload_guard(self, mocker):
        """Test the subset count is checked against the workload limit."""
        mocker.patch.object(settings, "workload_limit", 3)
        p = ProbModelService.uniform(4)

        with pytest.raises(WorkloadExceeded):
            ExactSurvivalService.survival_inclusion_exclusion(p, 3, 2)

    @given(st.permutations([F(1, 16), F(1, 6), F(1, 4), F(1, 8), F(19, 48)]))
    @hypothesis_settings(max_examples=20, deadline=None)
    def test_symmetric_in_the_entries(self, entries):
        """Test permuting the entries leaves the survival function unchanged."""
        reference = ProbModelService.parse_distribution("1/16,1/6,1/4,1/8,19/48")
        permuted = CouponDistribution(entries=tuple(entries))

        assert ExactSurvivalService.survival_values(
            permuted, 3, 6
        ) == ExactSurvivalService.survival_values(reference, 3, 6)


class TestAlternativeForms:
    """The composition sum and the decomposition agree with inclusion-exclusion."""

    @pytest.mark.parametrize("c", [1, 2, 3])
    def test_compositions_match(self, maximize_start, c):
        """Test the composition sum equals inclusion-exclusion exactly."""
        for k in range(6):
            assert ExactSurvivalService.survival_by_compositions(
                maximize_start, c, k
            ) == ExactSurvivalService.survival_inclusion_exclusion(maximize_start, c, k)

    @pytest.mark.parametrize("c", [1, 2, 3])
    def test_decomposition_matches(self, maximize_start, c):
        """Test conditioning on the null draws equals inclusion-exclusion exactly."""
        for k in range(6):
            assert ExactSurvivalService.survival_by_decomposition(
                maximize_start, c, k
            ) == ExactSurvivalService.survival_inclusion_exclusion(maximize_start, c, k)

    @pytest.mark.parametrize(
        ("literal", "expected"), [("2/5,2/5", F(17, 25)), ("1/2,3/10", F(7, 10))]
    )
    def test_null_mass_fixtures(self, literal, expected):
        """Test Pr{T > 2} with p0 = 1/5 and c = 2 is the same by every form."""
        p = ProbModelService.parse_distribution(literal)

        for form in (
            ExactSurvivalService.survival_inclusion_exclusion,
            ExactSurvivalService.survival_by_compositions,
            ExactSurvivalService.survival_by_decomposition,
        ):
            assert [form(p, 2, k) for k in range(3)] == [1, 1, expected]

    def test_single_coupon_normalizes_to_one(self):
        """Test n = 1 with p0 = 1/2, whose normalized vector is (1,)."""
        p = ProbModelService.parse_distribution("1/2")

        for k in range(4):
            expected = F(1, 2**k)
            assert ExactSurvivalService.survival_by_decomposition(p, 1, k) == expected
            assert ExactSurvivalService.survival_by_compositions(p, 1, k) == expected
        assert ExactSurvivalService.conditional_survival(p, 1, 3, 3) == 1
        assert ExactSurvivalService.conditional_survival(p, 1, 3, 2) == 0

    def test_float_forms_agree(self):
        """Test the three forms agree within the series tolerance in float mode."""
        p = ProbModelService.parse_distribution("0.35,0.2,0.15,0.1")
        tol = settings.series_tolerance
        for k in range(8):
            reference = ExactSurvivalService.survival_inclusion_exclusion(p, 3, k)
            by_compositions = ExactSurvivalService.survival_by_compositions(p, 3, k)
            by_decomposition = ExactSurvivalService.survival_by_decomposition(p, 3, k)
            assert by_compositions == pytest.approx(reference, abs=tol)
            assert by_decomposition == pytest.approx(reference, abs=tol)

    def test_composition_count(self):
        """Test the count of length-2 sequences over two coupons seeing fewer than 2."""
        assert ExactSurvivalService.composition_count(2, 2, 2, with_null=False) == 2

    def test_composition_guard(self, mocker, maximize_start):
        """Test the composition sum refuses work above its limit."""
        mocker.patch.object(settings, "composition_limit", 10)

        with pytest.raises(WorkloadExceeded):
            ExactSurvivalService.survival_by_compositions(maximize_start, 3, 6)

    def test_binomial_null_weights(self, sandwich_p):
        """Test the number of null draws is Binomial(k, p0)."""
        weights = ExactSurvivalService.binomial_null_weights(2, sandwich_p.null_mass)

        assert weights == [F(16, 25), F(8, 25), F(1, 25)]

    def test_float_null_weights_sum_to_one(self):
        """Test the scipy binomial weights in float mode."""
        weights = ExactSurvivalService.binomial_null_weights(5, 0.3)

        assert math.fsum(weights) == pytest.approx(1.0)

    def test_conditional_survival(self, sandwich_p):
        """Test all-null draws leave the collection empty."""
        assert ExactSurvivalService.conditional_survival(sandwich_p, 1, 3, 3) == 1
        assert ExactSurvivalService.conditional_survival(sandwich_p, 1, 3, 2) == 0

    def test_conditional_survival_range(self, sandwich_p):
        """Test more null draws than draws is rejected."""
        with pytest.raises(IndexOutOfRange):
            ExactSurvivalService.conditional_survival(sandwich_p, 1, 2, 3)


class TestTailAndCurve:
    """Tests for the tail rate, the envelope bound and certified curves."""

    def test_tail_rate(self, sandwich_p):
        """Test the rate is p0 plus the c - 1 largest entries."""
        assert ExactSurvivalService.tail_rate(sandwich_p, 1) == F(1, 5)
        assert ExactSurvivalService.tail_rate(sandwich_p, 2) == F(7, 10)

    def test_tail_rate_one(self):
        """Test a rate of one within tolerance raises TailRateOne."""
        p = ProbModelService.parse_distribution("0.9999999999999,0.0000000000001")

        with pytest.raises(TailRateOne):
            ExactSurvivalService.tail_rate(p, 2)

    def test_nb_tail_bound_geometric_case(self):
        """Test c = 1 reduces to the geometric tail sum_{m > k} r^m."""
        assert ExactSurvivalService.nb_tail_bound(F(1, 2), 1, 0) == 1
        assert ExactSurvivalService.nb_tail_bound(F(1, 2), 1, 3) == F(1, 8)

    def test_nb_tail_bound_float_matches_rational(self):
        """Test the scipy evaluation against the exact sum."""
        exact = ExactSurvivalService.nb_tail_bound(F(7, 10), 2, 12)
        approx = ExactSurvivalService.nb_tail_bound(0.7, 2, 12)

        assert approx == pytest.approx(float(exact), rel=1e-12)

    def test_curve_is_certified(self, two_coupons):
        """Test the truncation point is the first K with a bound below delta."""
        delta = 1e-6
        curve = ExactSurvivalService.survival_curve(two_coupons, 2, delta)
        bound = ExactSurvivalService.nb_tail_bound

        assert curve.tail_bound_at_K < delta
        assert bound(curve.tail_rate, 2, curve.truncation_k - 1) >= delta
        assert list(curve.values) == ExactSurvivalService.survival_values(
            two_coupons, 2, curve.truncation_k
        )
        assert curve.mode is ArithmeticMode.RATIONAL

    def test_tail_bound_dominates_residual(self, two_coupons):
        """Test the bound covers the series past K."""
        curve = ExactSurvivalService.survival_curve(two_coupons, 2, 1e-3)
        residual = 2 * F(1, 2) ** curve.truncation_k

        assert residual <= curve.tail_bound_at_K

    def test_curve_is_memoized(self, two_coupons):
        """Test a second request returns the cached curve."""
        first = ExactSurvivalService.survival_curve(two_coupons, 2, 1e-6)

        assert ExactSurvivalService.survival_curve(two_coupons, 2, 1e-6) is first

    def test_cache_keeps_modes_apart(self):
        """Test float and rational curves over equal dyadic entries are cached apart."""
        as_floats = ProbModelService.parse_distribution("0.5,0.5")
        as_fractions = ProbModelService.parse_distribution("1/2,1/2")

        float_curve = ExactSurvivalService.survival_curve(as_floats, 2, 1e-6)
        exact_curve = ExactSurvivalService.survival_curve(as_fractions, 2, 1e-6)

        assert float_curve.mode is ArithmeticMode.FLOAT
        assert exact_curve.mode is ArithmeticMode.RATIONAL
        assert all(isinstance(value, F) for value in exact_curve.values)
        assert ExactSurvivalService.survival_curve(as_floats, 2, 1e-6) is float_curve

    def test_invalid_delta(self, two_coupons):
        """Test delta outside (0, 1) raises InvalidDelta."""
        with pytest.raises(InvalidDelta):
            ExactSurvivalService.survival_curve(two_coupons, 2, 1.5)


class TestMoments:
    """Tests for the expectation and quantiles."""

    @pytest.mark.parametrize(
        ("n", "expected"), [(2, F(3)), (3, F(11, 2)), (4, F(25, 3))]
    )
    def test_uniform_harmonic_numbers(self, n, expected):
        """Test E[T] = n H_n for the uniform vector and c = n."""
        u = ProbModelService.uniform(n)

        assert ExactSurvivalService.expectation(u, n) == expected

    def test_float_harmonic_number(self):
        """Test the float expectation within 1e-12."""
        u = ProbModelService.uniform(4, ArithmeticMode.FLOAT)

        expected = ExactSurvivalService.expectation(u, 4)

        assert expected == pytest.approx(25 / 3, abs=1e-12)

    def test_null_mass_scales_expectation(self):
        """Test E[T] for the almost-uniform vector is n H_n / (1 - p0)."""
        v = ProbModelService.almost_uniform(2, F(1, 5))

        assert ExactSurvivalService.expectation(v, 2) == F(15, 4)

    def test_expectation_bounds_series(self, sandwich_p):
        """Test E[T] exceeds the truncated series by at most the tail bound."""
        curve = ExactSurvivalService.survival_curve(sandwich_p, 2)
        gap = ExactSurvivalService.expectation(sandwich_p, 2) - curve.series_sum()

        assert 0 <= gap <= curve.tail_bound_at_K

    def test_quantile_of_extremal_member(self):
        """Test the 0.1-quantile of (0.55, 0.25) with p0 = 0.2 is 9."""
        q = ThetaFamily(n=2, null_mass=0.2, theta=0.25).member(1)

        assert ExactSurvivalService.quantile(q, 2, 0.1) == 9

    def test_quantile_two_fair_coupons(self, two_coupons):
        """Test Pr{T > 5} = 1/16 is the first value at or below 0.1."""
        assert ExactSurvivalService.quantile(two_coupons, 2, 0.1) == 5

    def test_quantile_guard(self, mocker, two_coupons):
        """Test a quantile beyond the workload limit raises WorkloadExceeded."""
        mocker.patch.object(settings, "workload_limit", 10)

        with pytest.raises(WorkloadExceeded):
            ExactSurvivalService.quantile(two_coupons, 2, 1e-9)
