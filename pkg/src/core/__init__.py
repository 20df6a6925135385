"""Core module for application configuration, domain errors and logging."""

from src.core.errors import CouponCollectorError, ErrorCode
from src.core.settings import settings

__all__ = [
    "settings",
    "CouponCollectorError",
    "ErrorCode",
]
