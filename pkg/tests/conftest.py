"""Shared test fixtures and configuration for all tests."""

from unittest.mock import MagicMock

import pytest
from fastapi.testclient import TestClient

from main import app
from src.core.di import (
    get_exact_service,
    get_simulation_service,
    get_verification_service,
)
from src.services.exact import ExactSurvivalService, clear_curve_cache
from src.services.icebergsim import IcebergSimulationService
from src.services.probmodel import ProbModelService
from src.services.verification import VerificationService
from tests.vectors import MAXIMIZE_LITERAL, UNIFORMIZE_LITERAL


@pytest.fixture(autouse=True)
def _cleanup_dependency_overrides():
    """Ensure dependency overrides are cleared after every test for isolation."""
    yield
    app.dependency_overrides.clear()


@pytest.fixture(autouse=True)
def _clear_curves():
    """Survival curves are memoized per process; start every test cold."""
    clear_curve_cache()
    yield
    clear_curve_cache()


@pytest.fixture
def client():
    """Create a test client for API testing."""
    return TestClient(app)


@pytest.fixture
def uniformize_start():
    """Five-coupon vector without null mass used by the uniformization trace."""
    return ProbModelService.parse_distribution(UNIFORMIZE_LITERAL)


@pytest.fixture
def maximize_start():
    """Five-coupon vector with null mass 1/10, inside A_theta for theta = 1/20."""
    return ProbModelService.parse_distribution(MAXIMIZE_LITERAL)


@pytest.fixture
def two_coupons():
    """p = (1/2, 1/2): Pr{T > k} = 2^(1-k) for k >= 1 when c = 2."""
    return ProbModelService.parse_distribution("1/2,1/2")


@pytest.fixture
def sandwich_p():
    """p = (1/2, 3/10) with p0 = 1/5."""
    return ProbModelService.parse_distribution("1/2,3/10")


@pytest.fixture
def scenario():
    """Small timer-free scenario with one extremal and one uniform router."""
    return {
        "n": 2,
        "c": 2,
        "theta": 0.25,
        "p0": 0.2,
        "routers": ["extremal", "uniform"],
        "horizon": 2000,
        "global_threshold": 0.45,
        "seed": 7,
    }


@pytest.fixture
def mock_exact_service():
    """Provide and override the exact survival service for endpoint tests."""
    mock_service = MagicMock(spec=ExactSurvivalService)
    app.dependency_overrides[get_exact_service] = lambda: mock_service
    try:
        yield mock_service
    finally:
        if get_exact_service in app.dependency_overrides:
            del app.dependency_overrides[get_exact_service]


@pytest.fixture
def mock_simulation_service():
    """Provide and override the simulation service for endpoint tests."""
    mock_service = MagicMock(spec=IcebergSimulationService)
    app.dependency_overrides[get_simulation_service] = lambda: mock_service
    try:
        yield mock_service
    finally:
        if get_simulation_service in app.dependency_overrides:
            del app.dependency_overrides[get_simulation_service]


@pytest.fixture
def mock_verification_service():
    """Provide and override the verification service for endpoint tests."""
    mock_service = MagicMock(spec=VerificationService)
    app.dependency_overrides[get_verification_service] = lambda: mock_service
    try:
        yield mock_service
    finally:
        if get_verification_service in app.dependency_overrides:
            del app.dependency_overrides[get_verification_service]
