"""OpenAPI response documentation shared by the routers."""

from typing import Any

from src.core.errors import ErrorResponse


def domain_error(example_code: str, example_description: str) -> dict[int | str, Any]:
    """422 entry documenting a domain error body."""
    return {
        422: {
            "description": "Domain error or request validation error",
            "model": ErrorResponse,
            "content": {
                "application/json": {
                    "example": {
                        "error": example_code,
                        "error_description": example_description,
                    }
                }
            },
        },
    }
