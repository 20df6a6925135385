"""
Pydantic models for truncated survival functions ``Pr{T > k}``.
"""

from typing import Any

from pydantic import BaseModel, Field, computed_field, model_validator

from .common import ProbabilityValue, Scalar, format_scalar, mode_of, scalar_sum
from .distribution import tolerance_for, value_config
from .enums import ArithmeticMode, SurvivalMethod


class SurvivalCurve(BaseModel):
    """Values ``Pr{T > k}`` for ``k = 0..K`` with a certified tail.

    ``tail_bound_at_K`` bounds ``sum_{k > K} Pr{T > k}`` and therefore every
    single value past the truncation point. It comes from the negative
    binomial envelope with per-step failure probability ``tail_rate``.
    """

    model_config = value_config

    values: tuple[ProbabilityValue, ...] = Field(..., min_length=1)
    tail_rate: ProbabilityValue
    truncation_k: int = Field(..., ge=0)
    tail_bound_at_K: ProbabilityValue
    c: int = Field(..., ge=1, description="Collection size the curve belongs to")

    @model_validator(mode="before")
    @classmethod
    def _drop_derived(cls, data: Any) -> Any:
        if isinstance(data, dict) and "arithmetic_mode" in data:
            data = {
                key: value for key, value in data.items() if key != "arithmetic_mode"
            }
        return data

    @model_validator(mode="after")
    def _check_shape(self) -> "SurvivalCurve":
        if self.truncation_k != len(self.values) - 1:
            raise ValueError("truncation_k must index the last stored value")
        tol = tolerance_for(self.mode)
        if abs(self.values[0] - 1) > tol:
            raise ValueError("Pr{T > 0} must equal 1")
        if not 0 <= self.tail_rate < 1:
            raise ValueError("tail_rate must lie in [0, 1)")
        if self.tail_bound_at_K < 0:
            raise ValueError("tail_bound_at_K must be non-negative")
        for k in range(1, len(self.values)):
            current, previous = self.values[k], self.values[k - 1]
            if not -tol <= current <= 1 + tol:
                raise ValueError(f"Pr{{T > {k}}} = {current} is not a probability")
            if current > previous + tol:
                raise ValueError(f"Survival increases at k={k}")
        return self

    @property
    def mode(self) -> ArithmeticMode:
        return mode_of(list(self.values))

    @computed_field  # type: ignore[prop-decorator]
    @property
    def arithmetic_mode(self) -> ArithmeticMode:
        return self.mode

    def value_at(self, k: int) -> Scalar:
        """``Pr{T > k}``; zero past the truncation point, off by at most the tail bound."""
        if k <= 0:
            return self.values[0]
        if k <= self.truncation_k:
            return self.values[k]
        return 0 * self.values[0]

    def cumulative(self) -> list[Scalar]:
        return [1 - value for value in self.values]

    def csv_rows(self) -> list[dict[str, str]]:
        return [
            {
                "k": str(k),
                "survival": format_scalar(value),
                "cumulative": format_scalar(1 - value),
            }
            for k, value in enumerate(self.values)
        ]

    def series_sum(self) -> Scalar:
        """Truncated ``sum_k Pr{T > k}``: the expectation minus at most the tail bound."""
        return scalar_sum(self.values, self.mode)


class SurvivalTable(BaseModel):
    """``Pr{T > k}`` for ``k = 0..k_max`` from one evaluation method, untruncated."""

    method: SurvivalMethod
    c: int = Field(..., ge=1)
    values: list[ProbabilityValue]

    def csv_rows(self) -> list[dict[str, str]]:
        return [
            {
                "k": str(k),
                "survival": format_scalar(value),
                "cumulative": format_scalar(1 - value),
            }
            for k, value in enumerate(self.values)
        ]


class ExpectationResult(BaseModel):
    method: SurvivalMethod
    expectation: ProbabilityValue

    def csv_rows(self) -> list[dict[str, str]]:
        return [
            {"method": str(self.method), "expectation": format_scalar(self.expectation)}
        ]
