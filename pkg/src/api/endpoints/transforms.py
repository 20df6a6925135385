"""
Transform API endpoints.

A lambda-mixing replaces two entries by convex combinations of each other.
Uniformization and maximization chain such steps and return the whole trace.
"""

from fastapi import APIRouter, Depends

from src.api.responses import domain_error
from src.core.di import get_probmodel_service
from src.models.api import LambdaRequest, MaximizeRequest, UniformizeRequest
from src.models.distribution import CouponDistribution, TransformTrace
from src.services.probmodel import ProbModelService

router = APIRouter(prefix="/api/v1/transforms", tags=["transforms"])


@router.post(
    "/lambda",
    response_model=CouponDistribution,
    summary="Mix two entries of a distribution",
    responses=domain_error("lambda_out_of_range", "lambda=3/2 must lie in [0, 1]"),
)
def lambda_transform(
    body: LambdaRequest,
    service: type[ProbModelService] = Depends(get_probmodel_service),
) -> CouponDistribution:
    p = service.parse_distribution(body.p, body.mode)
    return service.lambda_transform(p, body.i, body.j, body.weight)


@router.post(
    "/uniformize",
    response_model=TransformTrace,
    summary="Drive a distribution to the almost-uniform vector",
    responses=domain_error(
        "lambda_out_of_range", "Pair (4, 5) does not straddle the target 1/5"
    ),
)
def uniformize(
    body: UniformizeRequest,
    service: type[ProbModelService] = Depends(get_probmodel_service),
) -> TransformTrace:
    """
    Uniformize ``p`` in at most ``n - 1`` steps.

    Each step pins one entry to ``(1 - p0) / n``. Explicit ``pairs`` are
    replayed first and must each straddle that target.
    """
    p = service.parse_distribution(body.p, body.mode)
    return service.uniformize_trace(p, body.pairs)


@router.post(
    "/maximize",
    response_model=TransformTrace,
    summary="Drive a distribution in A_theta to a member of B_theta",
    responses=domain_error(
        "not_in_family", "[0.01, 0.99] is not in A_theta for theta=0.1"
    ),
)
def maximize(
    body: MaximizeRequest,
    service: type[ProbModelService] = Depends(get_probmodel_service),
) -> TransformTrace:
    p = service.parse_distribution(body.p, body.mode)
    return service.maximize_trace(p, body.theta, body.j)
