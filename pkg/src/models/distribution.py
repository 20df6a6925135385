"""
Pydantic models for coupon distributions, theta families and transform traces.

All models are frozen values. A distribution is in rational mode when every
entry is a ``Fraction`` and in float mode otherwise; mixed input is coerced
to float.
"""

from collections.abc import Sequence
from fractions import Fraction
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.core.errors import (
    DegenerateNullMass,
    EmptyVector,
    EntryAtLeastOne,
    IndexOutOfRange,
    InvalidTheta,
    MassExceedsOne,
    NonPositiveEntry,
    NullMassMismatch,
)
from src.core.settings import settings

from .common import (
    ProbabilityValue,
    Scalar,
    coerce_scalar,
    mode_of,
    one,
    scalar_sum,
    to_mode,
    zero,
)
from .enums import ArithmeticMode

# Shared base configuration
value_config = ConfigDict(frozen=True, extra="forbid")


def tolerance_for(mode: ArithmeticMode) -> Scalar:
    """Equality tolerance: exact in rational mode, ``settings.tolerance`` otherwise."""
    if mode is ArithmeticMode.RATIONAL:
        return Fraction(0)
    return settings.tolerance


def _raw_values(raw: Any) -> list[Any]:
    if isinstance(raw, str):
        return [part for part in raw.split(",") if part.strip()]
    return list(raw)


class CouponDistribution(BaseModel):
    """Drawing probabilities ``p = (p_1, ..., p_n)`` of the non-null coupons.

    The null coupon takes the remaining mass ``p0 = 1 - sum(p)``.
    """

    model_config = value_config

    entries: tuple[ProbabilityValue, ...]
    null_mass: ProbabilityValue = Field(
        description="Probability p0 of the null coupon, clamped to [0, 1]"
    )

    @model_validator(mode="before")
    @classmethod
    def _derive_null_mass(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data

        entries = [coerce_scalar(v) for v in _raw_values(data.get("entries", ()))]
        if not entries:
            raise EmptyVector("A coupon distribution needs at least one entry")

        mode = mode_of(entries)
        entries = [to_mode(v, mode) for v in entries]
        tol = tolerance_for(mode)

        for position, value in enumerate(entries, start=1):
            if value <= 0:
                raise NonPositiveEntry(
                    f"Entry {position} is {value}; entries must be strictly positive"
                )
            if value >= 1:
                raise EntryAtLeastOne(
                    f"Entry {position} is {value}; entries must be below 1"
                )

        total = scalar_sum(entries, mode)
        if total > 1 + tol:
            raise MassExceedsOne(f"Entries sum to {total}, which exceeds 1")
        implied = min(max(one(mode) - total, zero(mode)), one(mode))

        given = data.get("null_mass")
        if given is not None:
            given_value = to_mode(coerce_scalar(given), mode)
            if abs(given_value - implied) > tol:
                raise NullMassMismatch(
                    f"Null mass {given_value} disagrees with 1 - sum(entries) = {implied}"
                )

        return {"entries": tuple(entries), "null_mass": implied}

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def mode(self) -> ArithmeticMode:
        return mode_of(self.entries)

    @property
    def total(self) -> Scalar:
        return scalar_sum(self.entries, self.mode)

    @property
    def uniform_share(self) -> Scalar:
        """Common entry ``(1 - p0) / n`` of the almost-uniform distribution."""
        return (one(self.mode) - self.null_mass) / self.n

    def entry(self, position: int) -> Scalar:
        """Entry at a 1-based position."""
        if not 1 <= position <= self.n:
            raise IndexOutOfRange(f"Position {position} is outside 1..{self.n}")
        return self.entries[position - 1]

    def with_entries(self, values: Sequence[Scalar]) -> "CouponDistribution":
        return CouponDistribution(entries=tuple(values))

    def as_mode(self, mode: ArithmeticMode) -> "CouponDistribution":
        if mode is self.mode:
            return self
        return CouponDistribution(entries=tuple(to_mode(v, mode) for v in self.entries))

    def as_floats(self) -> list[float]:
        return [float(v) for v in self.entries]

    def is_close(self, other: "CouponDistribution", tol: Scalar | None = None) -> bool:
        """Entry-wise equality within ``tol`` (exact for two rational vectors)."""
        if self.n != other.n:
            return False
        if tol is None:
            both_rational = ArithmeticMode.RATIONAL == self.mode == other.mode
            tol = 0 if both_rational else settings.tolerance
        return all(abs(a - b) <= tol for a, b in zip(self.entries, other.entries))


class ThetaFamily(BaseModel):
    """The constraint set ``A_theta`` and its extremal members ``B_theta``.

    ``A_theta`` holds the distributions of total mass ``1 - p0`` whose entries
    are all at least ``theta``; ``B_theta`` the ones with every entry equal to
    ``theta`` except a single ``gamma``.
    """

    model_config = value_config

    n: int = Field(..., ge=1)
    null_mass: ProbabilityValue
    theta: ProbabilityValue

    @model_validator(mode="before")
    @classmethod
    def _check_theta(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data

        n = data.get("n")
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            # let field validation report the error
            return data
        p0 = coerce_scalar(data.get("null_mass", 0))
        theta = coerce_scalar(data.get("theta"))
        mode = mode_of([p0, theta])
        p0, theta = to_mode(p0, mode), to_mode(theta, mode)
        tol = tolerance_for(mode)

        if not 0 <= p0 < 1:
            raise DegenerateNullMass(f"Null mass {p0} must lie in [0, 1)")
        ceiling = (one(mode) - p0) / n
        if not 0 < theta <= ceiling + tol:
            raise InvalidTheta(
                f"theta={theta} must lie in (0, (1 - p0)/n] = (0, {ceiling}]"
            )

        return {"n": n, "null_mass": p0, "theta": theta}

    @property
    def mode(self) -> ArithmeticMode:
        return mode_of([self.null_mass, self.theta])

    @property
    def gamma(self) -> Scalar:
        """The single non-theta entry ``1 - p0 - (n - 1) theta`` of a ``B_theta`` member."""
        gamma = one(self.mode) - self.null_mass - (self.n - 1) * self.theta
        assert gamma >= self.theta - tolerance_for(self.mode)
        return gamma

    def member(self, position: int) -> CouponDistribution:
        """The member of ``B_theta`` holding ``gamma`` at a 1-based position."""
        if not 1 <= position <= self.n:
            raise IndexOutOfRange(f"Position {position} is outside 1..{self.n}")
        gamma = self.gamma
        entries = [gamma if k == position else self.theta for k in range(1, self.n + 1)]
        return CouponDistribution(entries=tuple(entries))

    def members(self) -> list[CouponDistribution]:
        return [self.member(position) for position in range(1, self.n + 1)]

    def contains(self, p: CouponDistribution) -> bool:
        """Whether ``p`` lies in ``A_theta``."""
        tol = max(tolerance_for(self.mode), tolerance_for(p.mode))
        if p.n != self.n:
            return False
        if abs(p.null_mass - self.null_mass) > tol:
            return False
        return all(entry >= self.theta - tol for entry in p.entries)


class TransformStep(BaseModel):
    """One lambda-mixing of the entries at positions ``index_i`` and ``index_j``."""

    model_config = value_config

    index_i: int = Field(..., ge=1)
    index_j: int = Field(..., ge=1)
    weight: ProbabilityValue = Field(description="Mixing weight lambda in [0, 1]")
    result: CouponDistribution


class TransformTrace(BaseModel):
    """An ordered chain of mixing steps starting from ``start``."""

    model_config = value_config

    start: CouponDistribution
    steps: tuple[TransformStep, ...] = ()

    @model_validator(mode="after")
    def _check_chain(self) -> "TransformTrace":
        n = self.start.n
        if len(self.steps) > max(n - 1, 0):
            raise ValueError(f"A trace over {n} entries has at most {n - 1} steps")

        previous = self.start
        for number, step in enumerate(self.steps, start=1):
            current = step.result
            if current.n != n:
                raise ValueError(f"Step {number} changes the vector length")
            tol = max(tolerance_for(previous.mode), tolerance_for(current.mode))
            touched = {step.index_i, step.index_j}
            for position, (before, after) in enumerate(
                zip(previous.entries, current.entries), start=1
            ):
                if position not in touched and abs(before - after) > tol:
                    raise ValueError(
                        f"Step {number} modifies position {position} outside (i, j)"
                    )
            if abs(previous.total - current.total) > tol:
                raise ValueError(f"Step {number} does not preserve the entry sum")
            previous = current
        return self

    @property
    def vectors(self) -> list[CouponDistribution]:
        """Intermediate and final vectors, without the start."""
        return [step.result for step in self.steps]

    @property
    def final(self) -> CouponDistribution:
        return self.steps[-1].result if self.steps else self.start
