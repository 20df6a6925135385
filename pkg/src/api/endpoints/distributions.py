"""
Distribution API endpoints.

Validation, normalization and majorization of coupon distributions, and the
reference vectors of the dominance results: the almost-uniform vector and the
extremal members of a theta family.
"""

from fastapi import APIRouter, Depends, status

from src.api.responses import domain_error
from src.core.di import get_probmodel_service
from src.models.api import (
    AlmostUniformRequest,
    DistributionRequest,
    FamilyRequest,
    MajorizesRequest,
    MajorizesResponse,
)
from src.models.distribution import CouponDistribution, ThetaFamily
from src.services.probmodel import ProbModelService

router = APIRouter(prefix="/api/v1/distributions", tags=["distributions"])


@router.post(
    "/validate",
    response_model=CouponDistribution,
    status_code=status.HTTP_200_OK,
    summary="Validate a coupon distribution",
    responses={
        200: {
            "description": "Validated distribution with its null mass",
            "content": {
                "application/json": {
                    "example": {
                        "entries": ["1/16", "1/6", "1/4", "1/8", "19/48"],
                        "null_mass": "0",
                    }
                }
            },
        },
        **domain_error("mass_exceeds_one", "Entries sum to 11/10, which exceeds 1"),
    },
)
def validate_distribution(
    body: DistributionRequest,
    service: type[ProbModelService] = Depends(get_probmodel_service),
) -> CouponDistribution:
    """
    Parse and validate a distribution.

    Fractions keep the vector in rational mode; any decimal entry switches it
    to float mode unless ``mode`` forces one.
    """
    return service.parse_distribution(body.p, body.mode)


@router.post(
    "/normalize",
    response_model=CouponDistribution,
    summary="Rescale a distribution to remove its null mass",
    responses=domain_error(
        "degenerate_null_mass", "Cannot normalize: the null coupon takes all mass"
    ),
)
def normalize_distribution(
    body: DistributionRequest,
    service: type[ProbModelService] = Depends(get_probmodel_service),
) -> CouponDistribution:
    return service.normalize(service.parse_distribution(body.p, body.mode))


@router.post(
    "/majorizes",
    response_model=MajorizesResponse,
    summary="Check whether one distribution majorizes another",
    responses=domain_error(
        "length_mismatch", "Cannot compare vectors of lengths 3 and 2"
    ),
)
def majorizes(
    body: MajorizesRequest,
    service: type[ProbModelService] = Depends(get_probmodel_service),
) -> MajorizesResponse:
    a = service.parse_distribution(body.a, body.mode)
    b = service.parse_distribution(body.b, body.mode)
    return MajorizesResponse(majorizes=service.majorizes(a, b))


@router.post(
    "/almost-uniform",
    response_model=CouponDistribution,
    summary="Build the almost-uniform vector",
    responses=domain_error("degenerate_null_mass", "Null mass 1 must lie in [0, 1)"),
)
def almost_uniform(
    body: AlmostUniformRequest,
    service: type[ProbModelService] = Depends(get_probmodel_service),
) -> CouponDistribution:
    """Every entry equals ``(1 - p0) / n``."""
    return service.almost_uniform(body.n, body.p0)


@router.post(
    "/extremal",
    response_model=CouponDistribution,
    summary="Build an extremal member of a theta family",
    responses=domain_error(
        "invalid_theta", "theta=1/2 must lie in (0, (1 - p0)/n] = (0, 1/3]"
    ),
)
def extremal_member(
    body: FamilyRequest,
    service: type[ProbModelService] = Depends(get_probmodel_service),
) -> CouponDistribution:
    """Entry ``j`` holds ``gamma = 1 - p0 - (n - 1) theta``, the others ``theta``."""
    family = ThetaFamily(n=body.n, null_mass=body.p0, theta=body.theta)
    return service.extremal_member(family, body.j)
