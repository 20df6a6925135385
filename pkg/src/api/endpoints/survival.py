"""
Survival API endpoints.

Point values, certified curves, expectations and quantiles of the waiting
time ``T``, and strong stochastic order comparisons of two distributions.
"""

from fastapi import APIRouter, Depends

from src.api.responses import domain_error
from src.core.di import (
    get_evaluation_service,
    get_exact_service,
    get_ordering_service,
    get_probmodel_service,
)
from src.models.api import (
    CompareRequest,
    CurveRequest,
    ExpectationRequest,
    ExpectationResponse,
    QuantileRequest,
    QuantileResponse,
    SurvivalValueRequest,
    SurvivalValueResponse,
)
from src.models.enums import SurvivalMethod
from src.models.ordering import DominanceVerdict
from src.models.survival import SurvivalCurve
from src.services.exact import ExactSurvivalService
from src.services.ordering import OrderingService
from src.services.probmodel import ProbModelService
from src.services.survival import SurvivalEvaluationService

router = APIRouter(prefix="/api/v1/survival", tags=["survival"])


@router.post(
    "/value",
    response_model=SurvivalValueResponse,
    summary="Evaluate Pr{T > k} with a chosen method",
    responses=domain_error(
        "workload_exceeded",
        "8388608 subset terms exceed the limit; use the markov or mc method",
    ),
)
def survival_value(
    body: SurvivalValueRequest,
    probmodel: type[ProbModelService] = Depends(get_probmodel_service),
    evaluator: type[SurvivalEvaluationService] = Depends(get_evaluation_service),
) -> SurvivalValueResponse:
    """
    Evaluate ``Pr{T > k}``.

    Deterministic methods return ``survival``. The ``mc`` method returns an
    ``estimate`` with its 95% interval instead, reproducible from ``seed``.
    """
    p = probmodel.parse_distribution(body.p, body.mode)
    if body.method is SurvivalMethod.MC:
        estimates = evaluator.estimates(p, body.c, body.k, body.replicates, body.seed)
        return SurvivalValueResponse(
            k=body.k, method=body.method, estimate=estimates[-1]
        )
    value = evaluator.value(p, body.c, body.k, body.method)
    return SurvivalValueResponse(k=body.k, method=body.method, survival=value)


@router.post(
    "/curve",
    response_model=SurvivalCurve,
    summary="Survival curve truncated with a certified tail bound",
    responses=domain_error(
        "tail_rate_one", "Tail rate 1 is 1 within tolerance; 3 coupons are unreachable"
    ),
)
def survival_curve(
    body: CurveRequest,
    probmodel: type[ProbModelService] = Depends(get_probmodel_service),
    exact: type[ExactSurvivalService] = Depends(get_exact_service),
) -> SurvivalCurve:
    p = probmodel.parse_distribution(body.p, body.mode)
    return exact.survival_curve(p, body.c, body.delta)


@router.post(
    "/expectation",
    response_model=ExpectationResponse,
    summary="Expected waiting time with its uniform lower bounds",
    responses=domain_error("invalid_c", "c=4 must lie in 1..3"),
)
def expectation(
    body: ExpectationRequest,
    probmodel: type[ProbModelService] = Depends(get_probmodel_service),
    ordering: type[OrderingService] = Depends(get_ordering_service),
) -> ExpectationResponse:
    """``E[T(u)] <= E[T(v)] <= E[T(p)]`` for the uniform and almost-uniform vectors."""
    p = probmodel.parse_distribution(body.p, body.mode)
    uniform, almost_uniform, value = ordering.expectation_sandwich(p, body.c)
    return ExpectationResponse(
        expectation=value, uniform=uniform, almost_uniform=almost_uniform
    )


@router.post(
    "/quantile",
    response_model=QuantileResponse,
    summary="Smallest k with Pr{T > k} <= delta",
    responses=domain_error("invalid_delta", "delta=0 must lie in (0, 1)"),
)
def quantile(
    body: QuantileRequest,
    probmodel: type[ProbModelService] = Depends(get_probmodel_service),
    exact: type[ExactSurvivalService] = Depends(get_exact_service),
) -> QuantileResponse:
    p = probmodel.parse_distribution(body.p, body.mode)
    return QuantileResponse(k=exact.quantile(p, body.c, body.delta))


@router.post(
    "/compare",
    response_model=DominanceVerdict,
    summary="Compare T(p) and T(q) in the strong stochastic order",
    responses={
        200: {
            "description": "Verdict with the crossing witness when the curves cross",
            "content": {
                "application/json": {
                    "example": {
                        "relation": "left_st_smaller",
                        "witness_k": None,
                        "checked_up_to": 131,
                        "residual_bound": 8.7e-10,
                    }
                }
            },
        },
        **domain_error(
            "insufficient_truncation",
            "Tail bound 0.002 is not below 1e-09; recompute the curves with a smaller delta",
        ),
    },
)
def compare(
    body: CompareRequest,
    probmodel: type[ProbModelService] = Depends(get_probmodel_service),
    exact: type[ExactSurvivalService] = Depends(get_exact_service),
    ordering: type[OrderingService] = Depends(get_ordering_service),
) -> DominanceVerdict:
    p = probmodel.parse_distribution(body.p, body.mode)
    q = probmodel.parse_distribution(body.q, body.mode)
    return ordering.stochastic_compare(
        exact.survival_curve(p, body.c, body.delta),
        exact.survival_curve(q, body.c, body.delta),
        body.tol,
        strict=body.strict,
    )
