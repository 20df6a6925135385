"""
Request and response models of the HTTP API.

Distributions travel either as the literal ``"1/16,1/6,1/4"`` or as a JSON
array of numbers and fraction strings.
"""

from pydantic import BaseModel, ConfigDict, Field

from .common import ProbabilityValue
from .enums import ArithmeticMode, SurvivalMethod
from .oracle import McEstimate

# Shared base configuration
base_config = ConfigDict(
    extra="forbid",
    str_strip_whitespace=True,
)

DistributionLiteral = str | list[str | float | int]


class DistributionRequest(BaseModel):
    """A distribution literal with an optional arithmetic mode."""

    model_config = base_config

    p: DistributionLiteral = Field(
        ..., description="Entries p_1..p_n", examples=["1/16,1/6,1/4,1/8,19/48"]
    )
    mode: ArithmeticMode | None = Field(
        None, description="Force float or rational arithmetic"
    )


class MajorizesRequest(BaseModel):
    model_config = base_config

    a: DistributionLiteral = Field(..., examples=["0.5,0.3,0.2"])
    b: DistributionLiteral = Field(..., examples=["0.4,0.4,0.2"])
    mode: ArithmeticMode | None = None


class MajorizesResponse(BaseModel):
    majorizes: bool


class AlmostUniformRequest(BaseModel):
    model_config = base_config

    n: int = Field(..., ge=1)
    p0: ProbabilityValue = Field(0, description="Null mass in [0, 1)")


class FamilyRequest(BaseModel):
    """A theta family and the position holding ``gamma``."""

    model_config = base_config

    n: int = Field(..., ge=1)
    p0: ProbabilityValue = 0
    theta: ProbabilityValue = Field(..., examples=["1/20"])
    j: int = Field(1, ge=1)


class LambdaRequest(DistributionRequest):
    i: int = Field(..., ge=1)
    j: int = Field(..., ge=1)
    weight: ProbabilityValue = Field(..., description="Mixing weight in [0, 1]")


class UniformizeRequest(DistributionRequest):
    pairs: list[tuple[int, int]] | None = Field(
        None, description="Explicit (i, j) pairs replayed before the default rule"
    )


class MaximizeRequest(DistributionRequest):
    theta: ProbabilityValue
    j: int = Field(..., ge=1)


class SurvivalValueRequest(DistributionRequest):
    c: int = Field(..., ge=1)
    k: int = Field(..., ge=0)
    method: SurvivalMethod = SurvivalMethod.EXACT
    replicates: int = Field(100_000, ge=1, description="Monte-Carlo replicates")
    seed: int = Field(0, ge=0)


class SurvivalValueResponse(BaseModel):
    k: int
    method: SurvivalMethod
    survival: ProbabilityValue | None = None
    estimate: McEstimate | None = None


class CurveRequest(DistributionRequest):
    c: int = Field(..., ge=1)
    delta: float | None = Field(None, gt=0, lt=1, description="Tail target")


class ExpectationRequest(DistributionRequest):
    c: int = Field(..., ge=1)


class ExpectationResponse(BaseModel):
    """``E[T]`` with the uniform and almost-uniform lower bounds."""

    expectation: ProbabilityValue
    uniform: ProbabilityValue
    almost_uniform: ProbabilityValue


class QuantileRequest(DistributionRequest):
    c: int = Field(..., ge=1)
    delta: float = Field(..., gt=0, lt=1)


class QuantileResponse(BaseModel):
    k: int


class CompareRequest(BaseModel):
    model_config = base_config

    p: DistributionLiteral
    q: DistributionLiteral
    mode: ArithmeticMode | None = None
    c: int = Field(..., ge=1)
    delta: float | None = Field(None, gt=0, lt=1)
    tol: float | None = Field(None, ge=0)
    strict: bool = True


class TimerRequest(BaseModel):
    model_config = base_config

    n: int = Field(..., ge=1)
    c: int = Field(..., ge=1)
    theta: ProbabilityValue
    p0: ProbabilityValue = 0
    delta: float = Field(..., gt=0, lt=1)


class TimerResponse(BaseModel):
    timer_k: int


class VerifyRequest(BaseModel):
    model_config = base_config

    seed: int | None = Field(None, ge=0)
    instances: int | None = Field(
        None, ge=1, description="Instances per suite; full sizes when omitted"
    )
