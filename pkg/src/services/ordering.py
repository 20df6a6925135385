"""
Service layer for strong stochastic order comparisons.

``X <=_st Y`` holds when ``Pr{X > k} <= Pr{Y > k}`` for every ``k``. Curves are
compared pointwise up to the larger truncation point; past it both tails are
below the residual tolerance, which the verdict records.
"""

import logging
from fractions import Fraction

from src.core.errors import InsufficientTruncation, NotInFamily
from src.core.settings import settings
from src.models.common import Scalar
from src.models.distribution import CouponDistribution, ThetaFamily
from src.models.enums import ArithmeticMode, DominanceRelation
from src.models.ordering import DominanceVerdict
from src.models.survival import SurvivalCurve

from .exact import ExactSurvivalService
from .probmodel import ProbModelService

logger = logging.getLogger(__name__)


def _first_violation(
    upper: list[Scalar], lower: list[Scalar], tol: Scalar
) -> int | None:
    """First ``k`` with ``upper[k] > lower[k] + tol``."""
    return next(
        (k for k, (u, v) in enumerate(zip(upper, lower)) if u > v + tol),
        None,
    )


class OrderingService:
    """Dominance verdicts between survival curves and the theorem-level checks."""

    @staticmethod
    def stochastic_compare(
        a: SurvivalCurve,
        b: SurvivalCurve,
        tol: Scalar | None = None,
        residual_tol: float | None = None,
        strict: bool = True,
    ) -> DominanceVerdict:
        """
        Compare two survival curves in the strong stochastic order.

        Args:
            a: Left curve
            b: Right curve
            tol: Pointwise tolerance; 0 for two rational curves and
                ``settings.dominance_tolerance`` otherwise, widened by the
                larger tail bound
            residual_tol: Bound both truncation tails must stay below
            strict: Raise ``InsufficientTruncation`` on a long tail instead of
                returning an ``undecided`` verdict

        Returns:
            The verdict. For crossing curves ``witness_k`` is the smallest ``k``
            where either inequality fails.
        """
        if tol is None:
            both_rational = a.mode is b.mode is ArithmeticMode.RATIONAL
            tol = Fraction(0) if both_rational else settings.dominance_tolerance
        if residual_tol is None:
            residual_tol = settings.dominance_tolerance

        checked = max(a.truncation_k, b.truncation_k)
        residual = max(a.tail_bound_at_K, b.tail_bound_at_K)
        if residual >= residual_tol:
            if strict:
                raise InsufficientTruncation(
                    f"Tail bound {residual} is not below {residual_tol}; "
                    "recompute the curves with a smaller delta"
                )
            return DominanceVerdict(
                relation=DominanceRelation.UNDECIDED,
                checked_up_to=checked,
                residual_bound=residual,
            )

        # past its own K a curve reads 0 but stays below its tail bound
        tol = tol + residual
        left = [a.value_at(k) for k in range(checked + 1)]
        right = [b.value_at(k) for k in range(checked + 1)]
        left_fails = _first_violation(left, right, tol)
        right_fails = _first_violation(right, left, tol)

        witness = None
        if left_fails is None and right_fails is None:
            relation = DominanceRelation.EQUAL
        elif left_fails is None:
            relation = DominanceRelation.LEFT_ST_SMALLER
        elif right_fails is None:
            relation = DominanceRelation.RIGHT_ST_SMALLER
        else:
            relation = DominanceRelation.CROSSING
            witness = min(left_fails, right_fails)
            logger.debug("curves cross; witness k=%d", witness)

        return DominanceVerdict(
            relation=relation,
            witness_k=witness,
            checked_up_to=checked,
            residual_bound=residual,
        )

    @staticmethod
    def verify_lambda_transform(
        p: CouponDistribution,
        i: int,
        j: int,
        weight: object,
        c: int,
        tol: Scalar | None = None,
        delta: float | None = None,
    ) -> DominanceVerdict:
        """Compare the mixed vector against ``p``; the mixed one should be smaller."""
        mixed = ProbModelService.lambda_transform(p, i, j, weight)
        return OrderingService.stochastic_compare(
            ExactSurvivalService.survival_curve(mixed, c, delta),
            ExactSurvivalService.survival_curve(p.as_mode(mixed.mode), c, delta),
            tol,
        )

    @staticmethod
    def verify_sandwich(
        p: CouponDistribution,
        c: int,
        tol: Scalar | None = None,
        delta: float | None = None,
    ) -> tuple[DominanceVerdict, DominanceVerdict]:
        """Verdicts for ``T(u)`` against ``T(v)`` and ``T(v)`` against ``T(p)``."""
        u = ProbModelService.uniform(p.n, p.mode)
        v = ProbModelService.almost_uniform(p.n, p.null_mass)
        curve_u, curve_v, curve_p = (
            ExactSurvivalService.survival_curve(x, c, delta) for x in (u, v, p)
        )
        return (
            OrderingService.stochastic_compare(curve_u, curve_v, tol),
            OrderingService.stochastic_compare(curve_v, curve_p, tol),
        )

    @staticmethod
    def verify_maximal(
        p: CouponDistribution,
        theta: object,
        c: int,
        tol: Scalar | None = None,
        delta: float | None = None,
        q: CouponDistribution | None = None,
    ) -> DominanceVerdict:
        """
        Compare ``p`` in ``A_theta`` against a member of ``B_theta``.

        ``q`` defaults to the member holding ``gamma`` at position 1; any member
        gives the same curve since survival is symmetric in the entries.
        """
        family = ThetaFamily(n=p.n, null_mass=p.null_mass, theta=theta)
        if not family.contains(p):
            raise NotInFamily(
                f"{list(p.entries)} is not in A_theta for theta={family.theta}"
            )
        target = q if q is not None else family.member(1)
        return OrderingService.stochastic_compare(
            ExactSurvivalService.survival_curve(p, c, delta),
            ExactSurvivalService.survival_curve(target, c, delta),
            tol,
        )

    @staticmethod
    def expectation_sandwich(
        p: CouponDistribution, c: int
    ) -> tuple[Scalar, Scalar, Scalar]:
        """``(E[T(u)], E[T(v)], E[T(p)])``, non-decreasing."""
        u = ProbModelService.uniform(p.n, p.mode)
        v = ProbModelService.almost_uniform(p.n, p.null_mass)
        return (
            ExactSurvivalService.expectation(u, c),
            ExactSurvivalService.expectation(v, c),
            ExactSurvivalService.expectation(p, c),
        )
