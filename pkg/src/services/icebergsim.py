"""
Slot-synchronous simulation of distributed iceberg detection.

Every slot each router draws one request: a signature ``1..n`` or the
sub-theta noise symbol 0. A router buffers the signatures it sees and flushes
them to the aggregation server once ``c`` distinct ones are collected, or
sends its partial buffer when its timer expires. The server keeps cumulative
counts and raises an alarm when a signature's share of the reported requests
reaches the global threshold.
"""

import logging
from collections import Counter
from collections.abc import Mapping
from typing import Any

import numpy as np
from pydantic import ValidationError

from src.core.errors import ConfigInvalid, TooFewSamples
from src.models.distribution import CouponDistribution, ThetaFamily
from src.models.simulation import (
    RouterConfig,
    RouterReport,
    ServerAlarm,
    SimConfig,
    SimReport,
)
from src.models.survival import SurvivalCurve

from .exact import ExactSurvivalService
from .oracle import OracleService

logger = logging.getLogger(__name__)

MIN_SAMPLES = 100


def _cumulative(entries: list[float], p0: float) -> np.ndarray:
    return np.cumsum([p0, *entries])


def injected_entries(p: CouponDistribution, signature: int, probability: float) -> list[
    float
]:
    """Entries with ``signature`` raised to ``probability``, the others rescaled.

    The null mass is kept, so the other signatures share what remains.
    """
    entries = p.as_floats()
    p0 = float(p.null_mass)
    rest = 1 - p0 - entries[signature - 1]
    scale = (1 - p0 - probability) / rest if rest > 0 else 0.0
    return [
        probability if position == signature else value * scale
        for position, value in enumerate(entries, start=1)
    ]


class Router:
    """Collects distinct signatures and decides when to flush."""

    def __init__(
        self, index: int, c: int, timer_k: int | None, symbols: np.ndarray
    ) -> None:
        self.index = index
        self.c = c
        self.timer_k = timer_k
        self.symbols = symbols
        self.buffer: Counter[int] = Counter()
        self.elapsed = 0
        self.inter_flush_times: list[int] = []
        self.timer_fired: list[bool] = []

    def draw(self, slot: int) -> tuple[Counter[int], int] | None:
        """Take the request of ``slot``; return ``(buffer, requests)`` on a flush."""
        self.elapsed += 1
        symbol = int(self.symbols[slot])
        if symbol:
            self.buffer[symbol] += 1

        collected = len(self.buffer) >= self.c
        expired = self.timer_k is not None and self.elapsed >= self.timer_k
        if not collected and not expired:
            return None

        message = (self.buffer, self.elapsed)
        self.inter_flush_times.append(self.elapsed)
        self.timer_fired.append(not collected)
        self.buffer = Counter()
        self.elapsed = 0
        return message

    def report(self) -> RouterReport:
        return RouterReport(
            index=self.index,
            inter_flush_times=self.inter_flush_times,
            timer_fired=self.timer_fired,
            timer_k=self.timer_k,
            pending_draws=sum(self.buffer.values()),
        )


class AggregationServer:
    """Cumulative signature counts with threshold alarms that re-arm."""

    def __init__(self, n: int, threshold: float, min_reports: int) -> None:
        self.counts = [0] * (n + 1)
        self.requests = 0
        self.threshold = threshold
        self.min_reports = min_reports
        self.active = [False] * (n + 1)
        self.alarms: list[ServerAlarm] = []

    def receive(self, buffer: Counter[int], requests: int) -> None:
        for signature, count in buffer.items():
            self.counts[signature] += count
        self.requests += requests

    def evaluate(self, slot: int) -> None:
        if self.requests == 0 or self.requests < self.min_reports:
            return
        for signature in range(1, len(self.counts)):
            fraction = self.counts[signature] / self.requests
            if fraction >= self.threshold:
                if not self.active[signature]:
                    self.active[signature] = True
                    self.alarms.append(
                        ServerAlarm(signature=signature, slot=slot, fraction=fraction)
                    )
            else:
                self.active[signature] = False


class IcebergSimulationService:
    """Timer dimensioning, simulation runs and their comparison with theory."""

    @staticmethod
    def load_config(data: Mapping[str, Any]) -> SimConfig:
        try:
            return SimConfig.model_validate(dict(data))
        except ValidationError as exc:
            raise ConfigInvalid(f"Invalid simulation config: {exc}") from exc

    @staticmethod
    def dimension_timer(n: int, c: int, theta: object, p0: object, delta: float) -> int:
        """
        Worst-case flush deadline over ``A_theta``.

        Every member of ``B_theta`` maximizes the collection time, so the
        ``delta``-quantile of one of them bounds ``Pr{no flush by k}`` for any
        router whose signatures each take at least ``theta`` of its traffic.
        """
        family = ThetaFamily(n=n, null_mass=p0, theta=theta)
        return ExactSurvivalService.quantile(family.member(1), c, delta)

    @staticmethod
    def resolve_timer(config: SimConfig, router: RouterConfig) -> int | None:
        if router.timer_k != "auto":
            return router.timer_k
        return IcebergSimulationService.dimension_timer(
            config.n,
            router.collection_size,
            config.theta,
            config.p0,
            config.timer_delta,
        )

    @staticmethod
    def router_symbols(config: SimConfig, index: int) -> np.ndarray:
        """All requests of router ``index`` for the horizon, from its own stream."""
        router = config.routers[index]
        stream = np.random.SeedSequence(config.seed, spawn_key=(index,))
        uniforms = np.random.Generator(np.random.PCG64(stream)).random(config.horizon)
        p = router.distribution
        p0 = float(p.null_mass)
        entries = p.as_floats()

        boundary = config.horizon
        injected = entries
        if config.injection is not None and index in config.injection.routers:
            boundary = config.injection.slot
            injected = injected_entries(
                p, config.injection.signature, float(config.injection.probability)
            )

        symbols = np.empty(config.horizon, dtype=np.int64)
        symbols[:boundary] = np.searchsorted(
            _cumulative(entries, p0), uniforms[:boundary], side="right"
        )
        symbols[boundary:] = np.searchsorted(
            _cumulative(injected, p0), uniforms[boundary:], side="right"
        )
        return np.minimum(symbols, p.n)

    @staticmethod
    def run_simulation(config: SimConfig) -> SimReport:
        """Run one scenario; the report depends on nothing but the config."""
        routers = [
            Router(
                index=index,
                c=router.collection_size,
                timer_k=IcebergSimulationService.resolve_timer(config, router),
                symbols=IcebergSimulationService.router_symbols(config, index),
            )
            for index, router in enumerate(config.routers)
        ]
        server = AggregationServer(
            config.n, config.global_threshold, config.min_reports
        )

        for slot in range(config.horizon):
            flushed = False
            for router in routers:
                message = router.draw(slot)
                if message is not None:
                    server.receive(*message)
                    flushed = True
            if flushed:
                server.evaluate(slot)

        latencies = IcebergSimulationService._latencies(config, server)
        non_null = sum(int(np.count_nonzero(router.symbols)) for router in routers)
        report = SimReport(
            seed=config.seed,
            horizon=config.horizon,
            routers=[router.report() for router in routers],
            alarms=server.alarms,
            server_counts=server.counts[1:],
            reported_requests=server.requests,
            non_null_draws=non_null,
            detection_latencies=latencies,
        )
        logger.info(
            "simulation seed=%d: %d messages, %d timer firings, %d alarms",
            config.seed,
            report.messages,
            report.timer_firings,
            len(report.alarms),
        )
        return report

    @staticmethod
    def _latencies(config: SimConfig, server: AggregationServer) -> list[int]:
        injection = config.injection
        if injection is None:
            return []
        for alarm in server.alarms:
            if alarm.signature == injection.signature and alarm.slot >= injection.slot:
                return [alarm.slot - injection.slot]
        logger.warning(
            "signature %d raised no alarm after slot %d; no latency recorded",
            injection.signature,
            injection.slot,
        )
        return []

    @staticmethod
    def sup_distance(samples: list[int] | np.ndarray, curve: SurvivalCurve) -> float:
        """``max_k |empirical Pr{T > k} - curve Pr{T > k}|``."""
        samples = np.asarray(samples, dtype=np.int64)
        if samples.size < MIN_SAMPLES:
            raise TooFewSamples(
                f"{samples.size} samples; at least {MIN_SAMPLES} are needed"
            )
        k_max = max(curve.truncation_k, int(samples.max()))
        empirical = OracleService.survival_from_samples(samples, k_max)
        return max(
            abs(empirical[k] - float(curve.value_at(k))) for k in range(k_max + 1)
        )

    @staticmethod
    def empirical_vs_theory(
        report: SimReport, curve: SurvivalCurve, router: int = 0
    ) -> float:
        """Sup distance between a router's inter-flush times and ``curve``."""
        return IcebergSimulationService.sup_distance(
            report.routers[router].inter_flush_times, curve
        )
