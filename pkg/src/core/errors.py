"""
Domain error handling.

Every failure raised by the services derives from ``CouponCollectorError`` and
carries a stable ``ErrorCode``. The HTTP layer renders them as ``ErrorResponse``
bodies and the CLI maps them to exit code 1.
"""

from enum import StrEnum

from fastapi import Request, status
from fastapi.responses import JSONResponse
from pydantic import BaseModel


class ErrorCode(StrEnum):
    """Domain error codes."""

    NON_POSITIVE_ENTRY = "non_positive_entry"
    ENTRY_AT_LEAST_ONE = "entry_at_least_one"
    MASS_EXCEEDS_ONE = "mass_exceeds_one"
    EMPTY_VECTOR = "empty_vector"
    NULL_MASS_MISMATCH = "null_mass_mismatch"
    DEGENERATE_NULL_MASS = "degenerate_null_mass"
    LENGTH_MISMATCH = "length_mismatch"
    MASS_MISMATCH = "mass_mismatch"
    INDEX_OUT_OF_RANGE = "index_out_of_range"
    LAMBDA_OUT_OF_RANGE = "lambda_out_of_range"
    NOT_IN_FAMILY = "not_in_family"
    INVALID_THETA = "invalid_theta"
    INVALID_C = "invalid_c"
    INVALID_DELTA = "invalid_delta"
    WORKLOAD_EXCEEDED = "workload_exceeded"
    TAIL_RATE_ONE = "tail_rate_one"
    INSUFFICIENT_TRUNCATION = "insufficient_truncation"
    INVALID_REPLICATES = "invalid_replicates"
    CONFIG_INVALID = "config_invalid"
    TOO_FEW_SAMPLES = "too_few_samples"
    INVALID_LITERAL = "invalid_literal"


class CouponCollectorError(Exception):
    """Base class for domain failures.

    Deliberately not a ``ValueError``: pydantic wraps ``ValueError`` raised in
    validators, and these errors must reach callers with their code intact.
    """

    code: ErrorCode = ErrorCode.CONFIG_INVALID

    def __init__(self, message: str) -> None:
        super().__init__(message)
        self.message = message


class NonPositiveEntry(CouponCollectorError):
    code = ErrorCode.NON_POSITIVE_ENTRY


class EntryAtLeastOne(CouponCollectorError):
    code = ErrorCode.ENTRY_AT_LEAST_ONE


class MassExceedsOne(CouponCollectorError):
    code = ErrorCode.MASS_EXCEEDS_ONE


class EmptyVector(CouponCollectorError):
    code = ErrorCode.EMPTY_VECTOR


class NullMassMismatch(CouponCollectorError):
    code = ErrorCode.NULL_MASS_MISMATCH


class DegenerateNullMass(CouponCollectorError):
    code = ErrorCode.DEGENERATE_NULL_MASS


class LengthMismatch(CouponCollectorError):
    code = ErrorCode.LENGTH_MISMATCH


class MassMismatch(CouponCollectorError):
    code = ErrorCode.MASS_MISMATCH


class IndexOutOfRange(CouponCollectorError):
    code = ErrorCode.INDEX_OUT_OF_RANGE


class LambdaOutOfRange(CouponCollectorError):
    code = ErrorCode.LAMBDA_OUT_OF_RANGE


class NotInFamily(CouponCollectorError):
    code = ErrorCode.NOT_IN_FAMILY


class InvalidTheta(CouponCollectorError):
    code = ErrorCode.INVALID_THETA


class InvalidC(CouponCollectorError):
    code = ErrorCode.INVALID_C


class InvalidDelta(CouponCollectorError):
    code = ErrorCode.INVALID_DELTA


class WorkloadExceeded(CouponCollectorError):
    code = ErrorCode.WORKLOAD_EXCEEDED


class TailRateOne(CouponCollectorError):
    code = ErrorCode.TAIL_RATE_ONE


class InsufficientTruncation(CouponCollectorError):
    code = ErrorCode.INSUFFICIENT_TRUNCATION


class InvalidReplicates(CouponCollectorError):
    code = ErrorCode.INVALID_REPLICATES


class ConfigInvalid(CouponCollectorError):
    code = ErrorCode.CONFIG_INVALID


class TooFewSamples(CouponCollectorError):
    code = ErrorCode.TOO_FEW_SAMPLES


class InvalidLiteral(CouponCollectorError):
    code = ErrorCode.INVALID_LITERAL


class ErrorResponse(BaseModel):
    """Domain error response model."""

    error: ErrorCode
    error_description: str

    model_config = {
        "json_schema_extra": {
            "example": {
                "error": "mass_exceeds_one",
                "error_description": "Entries sum to 1.1, which exceeds 1",
            }
        }
    }


# Exception handler for domain errors
async def domain_exception_handler(
    request: Request, exc: CouponCollectorError
) -> JSONResponse:
    """Render a domain error as a 422 response."""
    return JSONResponse(
        status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
        content=ErrorResponse(
            error=exc.code, error_description=exc.message
        ).model_dump(),
    )
