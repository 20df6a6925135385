"""
Randomized falsification suites for the dominance and identity results.

Each suite draws its instances from its own PCG64 stream
``SeedSequence(seed, spawn_key=(suite,))`` so suites can be rerun in
isolation, then checks the instances on ``settings.workers`` threads.
Any failure is a counterexample and makes the whole report fail.
"""

import logging
import math
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from src.core.errors import CouponCollectorError
from src.core.settings import settings
from src.models.distribution import CouponDistribution, ThetaFamily
from src.models.enums import ArithmeticMode, SurvivalMethod
from src.models.ordering import SuiteFailure, SuiteReport, TheoremSuiteReport

from .exact import ExactSurvivalService
from .ordering import OrderingService
from .probmodel import ProbModelService
from .survival import SurvivalEvaluationService

logger = logging.getLogger(__name__)

# entries stay above this share of (1 - p0) / n so tails stay short
FLOOR_SHARE = 0.1
# largest integer weight of an exact-arithmetic instance
RATIONAL_WEIGHT_MAX = 9
# oracle checks cover k <= ORACLE_K_MAX; exact instances have n <= RATIONAL_MAX_N
ORACLE_K_MAX = 8
RATIONAL_MAX_N = 3


@dataclass(frozen=True)
class SuiteSizes:
    lambda_transform: int = 200
    sandwich: int = 100
    maximal: int = 100
    expectation: int = 50
    oracle: int = 50


def _stream(seed: int, suite: int) -> np.random.Generator:
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(suite,)))
    )


def draw_null_mass(rng: np.random.Generator, n: int, zero_share: float = 0.5) -> float:
    """Zero with probability ``zero_share``, else uniform on ``(0.01, 0.5)``.

    A single coupon always gets a null coupon next to it, since ``(1,)`` is not a
    valid distribution.
    """
    if n > 1 and rng.random() < zero_share:
        return 0.0
    return float(rng.uniform(0.01, 0.5))


def random_distribution(
    rng: np.random.Generator, n: int, p0: float, floor: float | None = None
) -> CouponDistribution:
    """Dirichlet entries of total ``1 - p0``, each at least ``floor``."""
    share = (1 - p0) / n
    floor = FLOOR_SHARE * share if floor is None else floor
    spread = rng.dirichlet(np.ones(n)) * (1 - p0 - n * floor)
    return CouponDistribution(entries=tuple(float(floor + x) for x in spread))


def random_rational_distribution(
    rng: np.random.Generator, n: int, with_null: bool
) -> CouponDistribution:
    """Fractions ``w_i / W`` of integer weights; a null weight is added for ``n = 1``."""
    weights = [int(w) for w in rng.integers(1, RATIONAL_WEIGHT_MAX + 1, size=n)]
    with_null = with_null or n == 1
    null_weight = int(rng.integers(1, RATIONAL_WEIGHT_MAX + 1)) if with_null else 0
    total = sum(weights) + null_weight
    return CouponDistribution(entries=tuple(Fraction(w, total) for w in weights))


def _run(
    name: str,
    checks: list[Callable[[], SuiteFailure | None]],
) -> SuiteReport:
    if settings.workers > 1:
        with ThreadPoolExecutor(max_workers=settings.workers) as pool:
            outcomes = list(pool.map(lambda check: check(), checks))
    else:
        outcomes = [check() for check in checks]
    failures = [failure for failure in outcomes if failure is not None]
    report = SuiteReport(name=name, instances=len(checks), failures=failures)
    logger.info("suite %s: %d instances, %d failures", name, len(checks), len(failures))
    return report


def _guarded(
    instance: int, check: Callable[[], SuiteFailure | None]
) -> Callable[[], SuiteFailure | None]:
    def run() -> SuiteFailure | None:
        try:
            return check()
        except CouponCollectorError as exc:
            return SuiteFailure(instance=instance, detail=f"{exc.code}: {exc.message}")

    return run


class VerificationService:
    """Builds and runs the randomized suites."""

    @staticmethod
    def lambda_transform_suite(seed: int, instances: int) -> SuiteReport:
        rng = _stream(seed, 0)
        checks = []
        for instance in range(instances):
            n = int(rng.integers(2, 7))
            p0 = 0.0 if rng.random() < 0.5 else float(rng.uniform(0, 0.5))
            p = random_distribution(rng, n, p0)
            i, j = (int(x) + 1 for x in rng.choice(n, size=2, replace=False))
            weight = float(rng.random())
            c = int(rng.integers(2, n + 1))

            def check(p=p, i=i, j=j, weight=weight, c=c, instance=instance):
                verdict = OrderingService.verify_lambda_transform(p, i, j, weight, c)
                if verdict.holds_left:
                    return None
                return SuiteFailure(
                    instance=instance,
                    detail=f"p={p.as_floats()} i={i} j={j} lambda={weight} c={c}: "
                    f"{verdict.relation}",
                    witness_k=verdict.witness_k,
                )

            checks.append(_guarded(instance, check))
        return _run("lambda_transform", checks)

    @staticmethod
    def sandwich_suite(seed: int, instances: int) -> SuiteReport:
        rng = _stream(seed, 1)
        checks = []
        for instance in range(instances):
            n = int(rng.integers(2, 6))
            p0 = float(rng.uniform(0.01, 0.5))
            p = random_distribution(rng, n, p0)
            c = int(rng.integers(1, n + 1))

            def check(p=p, c=c, instance=instance):
                lower, upper = OrderingService.verify_sandwich(p, c)
                for verdict in (lower, upper):
                    if not verdict.holds_left:
                        return SuiteFailure(
                            instance=instance,
                            detail=f"p={p.as_floats()} c={c}: {verdict.relation}",
                            witness_k=verdict.witness_k,
                        )
                return None

            checks.append(_guarded(instance, check))
        return _run("sandwich", checks)

    @staticmethod
    def maximal_suite(seed: int, instances: int) -> SuiteReport:
        rng = _stream(seed, 2)
        checks = []
        for instance in range(instances):
            n = int(rng.integers(2, 7))
            p0 = 0.0 if rng.random() < 0.5 else float(rng.uniform(0, 0.5))
            theta = float(rng.uniform(0.2, 1.0)) * (1 - p0) / n
            p = random_distribution(rng, n, p0, floor=theta)
            c = int(rng.integers(1, n + 1))
            order = [int(x) for x in rng.permutation(n)]

            def check(p=p, theta=theta, c=c, order=order, instance=instance):
                family = ThetaFamily(n=p.n, null_mass=p.null_mass, theta=theta)
                canonical = family.member(1)
                permuted = canonical.with_entries([canonical.entries[k] for k in order])
                for q in (canonical, permuted):
                    verdict = OrderingService.verify_maximal(p, theta, c, q=q)
                    if not verdict.holds_left:
                        return SuiteFailure(
                            instance=instance,
                            detail=f"p={p.as_floats()} theta={theta} c={c}: "
                            f"{verdict.relation}",
                            witness_k=verdict.witness_k,
                        )
                return None

            checks.append(_guarded(instance, check))
        return _run("maximal", checks)

    @staticmethod
    def expectation_suite(seed: int, instances: int) -> SuiteReport:
        """Closed-form expectation against the truncated series and against ``n H_n``."""
        rng = _stream(seed, 3)
        checks = []
        for instance in range(instances):
            n = int(rng.integers(1, 7))
            p0 = draw_null_mass(rng, n)
            p = random_distribution(rng, n, p0)
            c = int(rng.integers(1, n + 1))

            def check(p=p, c=c, instance=instance):
                expected = ExactSurvivalService.expectation(p, c)
                curve = ExactSurvivalService.survival_curve(p, c)
                series = curve.series_sum()
                gap = expected - series
                if not -settings.dominance_tolerance <= gap <= (
                    curve.tail_bound_at_K + settings.dominance_tolerance
                ):
                    return SuiteFailure(
                        instance=instance,
                        detail=f"p={p.as_floats()} c={c}: "
                        f"E[T]={expected} series={series}",
                    )
                return None

            checks.append(_guarded(instance, check))

        for n in (2, 4):

            def harmonic(n=n):
                target = n * sum(Fraction(1, m) for m in range(1, n + 1))
                exact = ExactSurvivalService.expectation(ProbModelService.uniform(n), n)
                approx = ExactSurvivalService.expectation(
                    ProbModelService.uniform(n, ArithmeticMode.FLOAT), n
                )
                if exact != target or abs(approx - float(target)) > 1e-12:
                    return SuiteFailure(
                        instance=instances + n,
                        detail=f"E[T] for uniform n={n} is {exact}",
                    )
                return None

            checks.append(_guarded(instances + n, harmonic))
        return _run("expectation", checks)

    @staticmethod
    def oracle_suite(seed: int, instances: int) -> SuiteReport:
        """
        All deterministic evaluators agree for ``n <= 5`` and ``k <= 8``.

        Odd instances are rational with ``n <= 3`` and must agree exactly;
        float instances agree within ``settings.series_tolerance``.
        """
        rng = _stream(seed, 4)
        tolerance = settings.series_tolerance
        checks = []
        for instance in range(instances):
            rational = instance % 2 == 1
            with_null = instance % 4 >= 2
            if rational:
                n = int(rng.integers(1, RATIONAL_MAX_N + 1))
                p = random_rational_distribution(rng, n, with_null)
            else:
                n = int(rng.integers(1, 6))
                p0 = float(rng.uniform(0.01, 0.5)) if with_null or n == 1 else 0.0
                p = random_distribution(rng, n, p0)
            c = int(rng.integers(1, n + 1))

            def check(p=p, c=c, instance=instance):
                reference = ExactSurvivalService.survival_values(p, c, ORACLE_K_MAX)
                exact = p.mode is ArithmeticMode.RATIONAL
                for method in SurvivalMethod:
                    if method in (SurvivalMethod.EXACT, SurvivalMethod.MC):
                        continue
                    values = SurvivalEvaluationService.values(
                        p, c, ORACLE_K_MAX, method
                    )
                    for k, value in enumerate(values):
                        agree = (
                            value == reference[k]
                            if exact
                            else math.isclose(
                                value, reference[k], rel_tol=0, abs_tol=tolerance
                            )
                        )
                        if not agree:
                            return SuiteFailure(
                                instance=instance,
                                detail=f"p={p.as_floats()} c={c} {method} at k={k}: "
                                f"{value} != {reference[k]}",
                                witness_k=k,
                            )
                return None

            checks.append(_guarded(instance, check))
        return _run("oracle_equivalence", checks)

    @staticmethod
    def run_theorem_suite(
        seed: int | None = None, sizes: SuiteSizes | None = None
    ) -> TheoremSuiteReport:
        seed = settings.default_seed if seed is None else seed
        sizes = sizes or SuiteSizes()
        suites = [
            VerificationService.lambda_transform_suite(seed, sizes.lambda_transform),
            VerificationService.sandwich_suite(seed, sizes.sandwich),
            VerificationService.maximal_suite(seed, sizes.maximal),
            VerificationService.expectation_suite(seed, sizes.expectation),
            VerificationService.oracle_suite(seed, sizes.oracle),
        ]
        report = TheoremSuiteReport(seed=seed, suites=suites)
        logger.info("theorem suite seed=%d passed=%s", seed, report.passed)
        return report
