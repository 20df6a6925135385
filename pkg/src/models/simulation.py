"""
Pydantic models for the iceberg detection simulator.

A scenario fixes ``n`` signatures, the collection size ``c``, the floor
``theta`` and the lumped sub-theta traffic ``p0``. Routers are given either
as explicit entries or as one of the presets ``uniform`` (the almost-uniform
vector) and ``extremal`` (a member of ``B_theta``).
"""

from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator

from src.core.errors import ConfigInvalid, CouponCollectorError

from .common import ProbabilityValue, mode_of, one, to_mode
from .distribution import CouponDistribution, ThetaFamily, tolerance_for
from .enums import RouterPreset

TimerSetting = int | Literal["auto"] | None


class RouterConfig(BaseModel):
    """One router: its request distribution, collection size and flush timer."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    distribution: CouponDistribution
    collection_size: int = Field(..., ge=1)
    timer_k: TimerSetting = Field(
        None, description="Slots before a forced partial flush; None disables it"
    )
    preset: RouterPreset | None = None

    @model_validator(mode="after")
    def _check_size(self) -> "RouterConfig":
        if self.collection_size > self.distribution.n:
            raise ConfigInvalid(
                f"collection size {self.collection_size} exceeds n={self.distribution.n}"
            )
        if isinstance(self.timer_k, int) and self.timer_k < 1:
            raise ConfigInvalid("timer_k must be at least 1")
        return self


class InjectionConfig(BaseModel):
    """Raise one signature's probability on some routers from a given slot on."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    signature: int = Field(..., ge=1, description="1-based signature position")
    routers: tuple[int, ...] = Field(..., min_length=1, description="Router indices")
    slot: int = Field(..., ge=0)
    probability: ProbabilityValue


def _router_from_entry(
    raw: Any, scenario: dict[str, Any], family: ThetaFamily
) -> dict[str, Any]:
    if isinstance(raw, str):
        raw = {"preset": raw}
    if isinstance(raw, list | tuple):
        raw = {"entries": raw}
    if not isinstance(raw, dict):
        raise ConfigInvalid(f"Cannot read router entry {raw!r}")
    if "distribution" in raw:
        return raw

    preset = raw.get("preset")
    if preset is not None:
        try:
            preset = RouterPreset(preset)
        except ValueError as exc:
            raise ConfigInvalid(f"Unknown router preset {preset!r}") from exc
        if preset is RouterPreset.UNIFORM:
            share = (one(family.mode) - family.null_mass) / family.n
            distribution = CouponDistribution(entries=(share,) * family.n)
        else:
            distribution = family.member(int(raw.get("j", 1)))
    else:
        distribution = CouponDistribution(entries=raw.get("entries", ()))

    return {
        "distribution": distribution,
        "collection_size": raw.get("c", scenario.get("c")),
        "timer_k": raw.get("timer_k", scenario.get("timer_k")),
        "preset": preset,
    }


class SimConfig(BaseModel):
    """A simulation scenario as read from JSON."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    n: int = Field(..., ge=1)
    c: int = Field(..., ge=1)
    theta: ProbabilityValue
    p0: ProbabilityValue
    routers: tuple[RouterConfig, ...] = Field(..., min_length=1)
    horizon: int = Field(..., ge=1, description="Number of draw slots")
    global_threshold: float = Field(..., gt=0, lt=1)
    seed: int = Field(..., ge=0)
    timer_k: TimerSetting = None
    timer_delta: float = Field(0.1, gt=0, lt=1)
    min_reports: int = Field(
        0, ge=0, description="Reported requests needed before alarms are evaluated"
    )
    injection: InjectionConfig | None = None

    @model_validator(mode="before")
    @classmethod
    def _resolve_routers(cls, data: Any) -> Any:
        if not isinstance(data, dict) or "routers" not in data:
            return data
        raw_routers = data["routers"]
        if raw_routers and all(isinstance(r, RouterConfig) for r in raw_routers):
            return data
        try:
            family = ThetaFamily(
                n=data.get("n"),
                null_mass=data.get("p0", 0),
                theta=data.get("theta"),
            )
            routers = [_router_from_entry(raw, data, family) for raw in raw_routers]
        except ConfigInvalid:
            raise
        except CouponCollectorError as exc:
            raise ConfigInvalid(exc.message) from exc
        return {**data, "routers": routers}

    @model_validator(mode="after")
    def _check_scenario(self) -> "SimConfig":
        mode = mode_of([self.p0, self.theta])
        for index, router in enumerate(self.routers):
            p = router.distribution
            tol = max(tolerance_for(mode), tolerance_for(p.mode))
            if p.n != self.n:
                raise ConfigInvalid(
                    f"Router {index} has {p.n} entries, expected {self.n}"
                )
            if abs(p.null_mass - to_mode(self.p0, p.mode)) > tol:
                raise ConfigInvalid(
                    f"Router {index} has null mass {p.null_mass}, expected {self.p0}"
                )
            if any(entry < to_mode(self.theta, p.mode) - tol for entry in p.entries):
                raise ConfigInvalid(f"Router {index} has an entry below theta")

        if self.injection is not None:
            inj = self.injection
            if inj.signature > self.n:
                raise ConfigInvalid(f"Injected signature {inj.signature} exceeds n")
            if any(not 0 <= r < len(self.routers) for r in inj.routers):
                raise ConfigInvalid("Injection targets an unknown router")
            if inj.slot >= self.horizon:
                raise ConfigInvalid("Injection slot lies beyond the horizon")
            if not 0 < float(inj.probability) < 1 - float(self.p0):
                raise ConfigInvalid("Injected probability must lie in (0, 1 - p0)")
        return self


class RouterReport(BaseModel):
    """Flush history of one router."""

    index: int
    inter_flush_times: list[int] = Field(default_factory=list)
    timer_fired: list[bool] = Field(default_factory=list)
    timer_k: int | None = None
    pending_draws: int = Field(0, ge=0, description="Buffered draws never flushed")

    @model_validator(mode="after")
    def _aligned(self) -> "RouterReport":
        if len(self.inter_flush_times) != len(self.timer_fired):
            raise ValueError("inter_flush_times and timer_fired must align")
        return self

    @computed_field  # type: ignore[prop-decorator]
    @property
    def flushes(self) -> int:
        return len(self.inter_flush_times)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def timer_firings(self) -> int:
        return sum(self.timer_fired)

    @property
    def collection_times(self) -> list[int]:
        """Cycles that ended because ``c`` distinct signatures were collected."""
        return [
            t for t, fired in zip(self.inter_flush_times, self.timer_fired) if not fired
        ]

    @property
    def firing_rate(self) -> float:
        return self.timer_firings / self.flushes if self.flushes else 0.0


class ServerAlarm(BaseModel):
    signature: int
    slot: int
    fraction: float


class SimReport(BaseModel):
    """Outcome of one simulation run."""

    seed: int
    horizon: int
    routers: list[RouterReport]
    alarms: list[ServerAlarm] = Field(default_factory=list)
    server_counts: list[int] = Field(
        default_factory=list, description="Counted draws per signature 1..n"
    )
    reported_requests: int = 0
    non_null_draws: int = 0
    detection_latencies: list[int] = Field(default_factory=list)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def messages(self) -> int:
        return sum(router.flushes for router in self.routers)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def timer_firings(self) -> int:
        return sum(router.timer_firings for router in self.routers)

    @property
    def pending_draws(self) -> int:
        return sum(router.pending_draws for router in self.routers)

    def csv_rows(self) -> list[dict[str, str]]:
        return [
            {
                "router": str(router.index),
                "cycle": str(cycle),
                "inter_flush": str(time),
                "timer_fired": str(int(fired)),
            }
            for router in self.routers
            for cycle, (time, fired) in enumerate(
                zip(router.inter_flush_times, router.timer_fired)
            )
        ]
