"""
Verification API endpoint: runs the randomized falsification suites.
"""

from dataclasses import fields

from fastapi import APIRouter, Depends

from src.core.di import get_verification_service
from src.models.api import VerifyRequest
from src.models.ordering import TheoremSuiteReport
from src.services.verification import SuiteSizes, VerificationService

router = APIRouter(prefix="/api/v1/verify", tags=["verify"])


@router.post(
    "/",
    response_model=TheoremSuiteReport,
    summary="Run the dominance and identity suites",
    responses={
        200: {
            "description": "Per-suite instance and failure counts; any failure is a counterexample",
        },
    },
)
def run_suites(
    body: VerifyRequest,
    service: type[VerificationService] = Depends(get_verification_service),
) -> TheoremSuiteReport:
    sizes = None
    if body.instances is not None:
        sizes = SuiteSizes(
            **{field.name: body.instances for field in fields(SuiteSizes)}
        )
    return service.run_theorem_suite(body.seed, sizes)
