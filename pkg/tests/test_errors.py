"""
Tests for domain error handling.
"""

import json

import pytest
from fastapi import Request

from src.core.errors import (
    CouponCollectorError,
    ErrorCode,
    ErrorResponse,
    InvalidTheta,
    MassExceedsOne,
    WorkloadExceeded,
    domain_exception_handler,
)


class TestErrorModels:
    """Tests for error codes and the response model."""

    def test_codes_are_stable_strings(self):
        """Test error codes serialize to their snake_case names."""
        assert ErrorCode.MASS_EXCEEDS_ONE == "mass_exceeds_one"
        assert ErrorCode.WORKLOAD_EXCEEDED == "workload_exceeded"
        assert ErrorCode.INSUFFICIENT_TRUNCATION == "insufficient_truncation"

    def test_every_subclass_has_its_own_code(self):
        """Test no two error classes share a code."""
        codes = [cls.code for cls in CouponCollectorError.__subclasses__()]

        assert len(codes) == len(set(codes))
        assert set(codes) == set(ErrorCode)

    def test_domain_errors_are_not_value_errors(self):
        """Test pydantic validators cannot swallow domain errors."""
        assert not issubclass(CouponCollectorError, ValueError)

    def test_error_response_serialization(self):
        """Test ErrorResponse dumps the code as its string value."""
        error = ErrorResponse(
            error=ErrorCode.INVALID_THETA, error_description="theta=1 is too large"
        )

        assert error.model_dump(mode="json") == {
            "error": "invalid_theta",
            "error_description": "theta=1 is too large",
        }


class TestDomainExceptionHandler:
    """Tests for the FastAPI exception handler."""

    @pytest.fixture
    def request_stub(self):
        return Request({"type": "http", "method": "POST", "path": "/", "headers": []})

    @pytest.mark.asyncio
    @pytest.mark.parametrize(
        ("exc", "code"),
        [
            (MassExceedsOne("Entries sum to 11/10"), "mass_exceeds_one"),
            (InvalidTheta("theta=1/2 is too large"), "invalid_theta"),
            (WorkloadExceeded("too many terms"), "workload_exceeded"),
        ],
    )
    async def test_renders_422(self, request_stub, exc, code):
        """Test every domain error becomes a 422 with its code and message."""
        response = await domain_exception_handler(request_stub, exc)

        assert response.status_code == 422
        body = json.loads(response.body)
        assert body == {"error": code, "error_description": exc.message}
