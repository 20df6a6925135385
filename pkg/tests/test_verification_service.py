"""Tests for the randomized theorem suites."""

from fractions import Fraction as F

import numpy as np
import pytest

from src.core.errors import WorkloadExceeded
from src.core.settings import settings
from src.models.enums import ArithmeticMode
from src.services.exact import ExactSurvivalService
from src.services.ordering import OrderingService
from src.services.verification import (
    SuiteSizes,
    VerificationService,
    draw_null_mass,
    random_distribution,
    random_rational_distribution,
)

SMALL = SuiteSizes(lambda_transform=6, sandwich=4, maximal=4, expectation=3, oracle=3)


class _SingleCouponStream:
    """A generator whose integer draws are all 1, so every instance has n = c = 1."""

    def __init__(self):
        self._rng = np.random.default_rng(0)

    def integers(self, *args, **kwargs):
        return 1

    def __getattr__(self, name):
        return getattr(self._rng, name)


class TestRandomDistribution:
    def test_mass_and_floor(self):
        """Test entries total 1 - p0 and respect the floor."""
        rng = np.random.default_rng(0)

        p = random_distribution(rng, 4, 0.2, floor=0.05)

        assert float(p.total) == pytest.approx(0.8)
        assert min(p.as_floats()) >= 0.05

    def test_single_coupon_always_has_null_mass(self):
        """Test n = 1 never draws p0 = 0, which would make the entry 1."""
        rng = np.random.default_rng(0)

        assert all(draw_null_mass(rng, 1) > 0 for _ in range(50))

    def test_rational_vector(self):
        """Test integer weights give an exact vector; n = 1 gets a null coupon."""
        rng = np.random.default_rng(3)

        p = random_rational_distribution(rng, 3, with_null=False)
        single = random_rational_distribution(rng, 1, with_null=False)

        assert p.mode is ArithmeticMode.RATIONAL
        assert p.null_mass == 0
        assert single.null_mass > 0



class TestTheoremSuite:
    """Tests for run_theorem_suite."""

    def test_small_suite_passes(self):
        """Test every suite passes on a handful of instances."""
        report = VerificationService.run_theorem_suite(seed=1, sizes=SMALL)

        assert report.passed
        assert [suite.name for suite in report.suites] == [
            "lambda_transform",
            "sandwich",
            "maximal",
            "expectation",
            "oracle_equivalence",
        ]
        # expectation adds the two harmonic-number checks
        assert report.suites[3].instances == 5

    def test_default_seed(self, mocker):
        """Test the configured seed is used when none is given."""
        mocker.patch.object(settings, "default_seed", 42)

        report = VerificationService.run_theorem_suite(sizes=SuiteSizes(0, 0, 0, 0, 0))

        assert report.seed == 42

    def test_threaded_run_matches_serial(self, mocker):
        """Test worker threads do not change the outcome."""
        serial = VerificationService.lambda_transform_suite(3, 5)

        mocker.patch.object(settings, "workers", 3)
        threaded = VerificationService.lambda_transform_suite(3, 5)

        assert threaded == serial

    def test_domain_errors_become_failures(self, mocker):
        """Test a check that raises is reported as a counterexample."""
        mocker.patch.object(
            OrderingService,
            "verify_sandwich",
            side_effect=WorkloadExceeded("too many terms"),
        )

        report = VerificationService.sandwich_suite(seed=0, instances=2)

        assert not report.passed
        assert len(report.failures) == 2
        assert report.failures[0].detail == "workload_exceeded: too many terms"

    def test_single_coupon_expectations(self, mocker):
        """Test the expectation suite runs when it draws n = 1."""
        mocker.patch(
            "src.services.verification._stream", return_value=_SingleCouponStream()
        )

        report = VerificationService.expectation_suite(seed=0, instances=3)

        assert report.passed
        assert report.instances == 5

    def test_exact_instances_must_agree_exactly(self, mocker):
        """Test rational instances fail on a difference the float tolerance would hide."""

        def nudged(p, c, k_max, method):
            values = ExactSurvivalService.survival_values(p, c, k_max)
            return [v + F(1, 10**30) if isinstance(v, F) else v for v in values]

        mocker.patch(
            "src.services.verification.SurvivalEvaluationService.values",
            side_effect=nudged,
        )

        report = VerificationService.oracle_suite(seed=0, instances=2)

        assert [failure.instance for failure in report.failures] == [1]

    def test_oracle_suite_passes(self):
        """Test float and exact instances agree across every deterministic method."""
        report = VerificationService.oracle_suite(seed=4, instances=4)

        assert report.passed
        assert report.instances == 4

    @pytest.mark.slow
    def test_default_run_passes(self):
        """Test the full-size suites with the configured seed."""
        report = VerificationService.run_theorem_suite()

        assert report.seed == settings.default_seed
        assert report.passed, [s.failures for s in report.suites if not s.passed]
        assert [suite.instances for suite in report.suites] == [200, 100, 100, 52, 50]
