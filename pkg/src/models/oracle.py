"""
Pydantic models for the ground-truth oracles.
"""

from typing import TypedDict

from pydantic import BaseModel, ConfigDict, Field, computed_field

from .common import Scalar


class ChainState(TypedDict):
    """One state of the collection chain with its probability mass.

    ``collected`` is ``None`` for the absorbing state reached once ``c``
    distinct non-null coupons have been drawn.
    """

    collected: frozenset[int] | None
    mass: Scalar


class McEstimate(BaseModel):
    """Monte-Carlo estimate of ``Pr{T > k}`` (or of a mean) with a 95% interval.

    The half-width uses the normal approximation, which undercovers when the
    count of events is small; read intervals for estimates near 0 or 1 with
    that in mind.
    """

    model_config = ConfigDict(frozen=True, extra="ignore")

    k: int | None = Field(None, ge=0, description="Point of the survival curve")
    estimate: float
    half_width: float = Field(..., ge=0)
    replicates: int = Field(..., ge=1)
    seed: int = Field(..., ge=0)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def ci_low(self) -> float:
        return self.estimate - self.half_width

    @computed_field  # type: ignore[prop-decorator]
    @property
    def ci_high(self) -> float:
        return self.estimate + self.half_width

    def covers(self, value: float) -> bool:
        return self.ci_low <= value <= self.ci_high
