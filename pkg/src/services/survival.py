"""
Dispatch of ``Pr{T > k}`` evaluation to a chosen method.
"""

from collections.abc import Callable

from src.models.common import Scalar
from src.models.distribution import CouponDistribution
from src.models.enums import SurvivalMethod
from src.models.oracle import McEstimate

from .exact import ExactSurvivalService
from .oracle import CollectionChain, OracleService

PointEvaluator = Callable[[CouponDistribution, int, int], Scalar]

POINT_EVALUATORS: dict[SurvivalMethod, PointEvaluator] = {
    SurvivalMethod.EXACT: ExactSurvivalService.survival_inclusion_exclusion,
    SurvivalMethod.COMPOSITION: ExactSurvivalService.survival_by_compositions,
    SurvivalMethod.DECOMPOSITION: ExactSurvivalService.survival_by_decomposition,
    SurvivalMethod.MARKOV: OracleService.survival_markov,
    SurvivalMethod.ENUMERATION: OracleService.survival_enumeration,
}


class SurvivalEvaluationService:
    """Evaluate survival values with any deterministic method, or estimate them."""

    @staticmethod
    def value(p: CouponDistribution, c: int, k: int, method: SurvivalMethod) -> Scalar:
        if method is SurvivalMethod.MC:
            raise ValueError(
                "Monte-Carlo values come from SurvivalEvaluationService.estimates"
            )
        return POINT_EVALUATORS[method](p, c, k)

    @staticmethod
    def values(
        p: CouponDistribution, c: int, k_max: int, method: SurvivalMethod
    ) -> list[Scalar]:
        """``Pr{T > k}`` for ``k = 0..k_max``; whole-curve methods share their setup."""
        if method is SurvivalMethod.EXACT:
            return ExactSurvivalService.survival_values(p, c, k_max)
        if method is SurvivalMethod.MARKOV:
            return CollectionChain(p, c).survival_values(k_max)
        return [
            SurvivalEvaluationService.value(p, c, k, method) for k in range(k_max + 1)
        ]

    @staticmethod
    def estimates(
        p: CouponDistribution, c: int, k_max: int, replicates: int, seed: int
    ) -> list[McEstimate]:
        return OracleService.mc_survival_curve(p, c, k_max, replicates, seed)
