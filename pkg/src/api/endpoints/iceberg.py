"""
Iceberg detection API endpoints: flush-timer dimensioning and simulation runs.
"""

from fastapi import APIRouter, Depends

from src.api.responses import domain_error
from src.core.di import get_simulation_service
from src.models.api import TimerRequest, TimerResponse
from src.models.simulation import SimConfig, SimReport
from src.services.icebergsim import IcebergSimulationService

router = APIRouter(prefix="/api/v1/iceberg", tags=["iceberg"])


@router.post(
    "/timer",
    response_model=TimerResponse,
    summary="Dimension a router flush timer",
    responses={
        200: {
            "description": "Timer in slots",
            "content": {"application/json": {"example": {"timer_k": 104}}},
        },
        **domain_error(
            "invalid_theta", "theta=0.3 must lie in (0, (1 - p0)/n] = (0, 0.2]"
        ),
    },
)
def dimension_timer(
    body: TimerRequest,
    service: type[IcebergSimulationService] = Depends(get_simulation_service),
) -> TimerResponse:
    """
    Smallest ``k`` with ``Pr{no flush by k} <= delta`` for every router whose
    signatures each carry at least ``theta`` of its traffic.
    """
    timer_k = service.dimension_timer(body.n, body.c, body.theta, body.p0, body.delta)
    return TimerResponse(timer_k=timer_k)


@router.post(
    "/simulate",
    response_model=SimReport,
    summary="Run one slot-synchronous detection scenario",
    responses=domain_error("config_invalid", "Router 1 has 4 entries, expected 5"),
)
def simulate(
    config: SimConfig,
    service: type[IcebergSimulationService] = Depends(get_simulation_service),
) -> SimReport:
    """The report is a pure function of the scenario, seed included."""
    return service.run_simulation(config)
