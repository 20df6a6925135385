"""
Pydantic models for stochastic order verdicts and theorem suite reports.
"""

from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator

from .common import ProbabilityValue
from .enums import DominanceRelation


class DominanceVerdict(BaseModel):
    """Result of comparing two survival curves in the strong stochastic order."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    relation: DominanceRelation
    witness_k: int | None = Field(
        None, ge=0, description="Smallest k where the curves cross beyond tolerance"
    )
    checked_up_to: int = Field(..., ge=0)
    residual_bound: ProbabilityValue

    @model_validator(mode="after")
    def _witness_iff_crossing(self) -> "DominanceVerdict":
        crossing = self.relation == DominanceRelation.CROSSING
        if crossing != (self.witness_k is not None):
            raise ValueError("witness_k is reported exactly for crossing verdicts")
        return self

    @property
    def holds_left(self) -> bool:
        """Left curve is stochastically smaller or equal."""
        return self.relation in (
            DominanceRelation.LEFT_ST_SMALLER,
            DominanceRelation.EQUAL,
        )


class SuiteFailure(BaseModel):
    """A counterexample found by a randomized suite."""

    instance: int
    detail: str
    witness_k: int | None = None


class SuiteReport(BaseModel):
    """Outcome of one randomized property suite."""

    name: str
    instances: int = Field(..., ge=0)
    failures: list[SuiteFailure] = Field(default_factory=list)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def passed(self) -> bool:
        return not self.failures


class TheoremSuiteReport(BaseModel):
    """All suites run by ``verify`` for one seed."""

    seed: int
    suites: list[SuiteReport]

    @computed_field  # type: ignore[prop-decorator]
    @property
    def passed(self) -> bool:
        return all(suite.passed for suite in self.suites)
