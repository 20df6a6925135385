"""
Pydantic models for the domain values and the API request/response bodies.
"""

from .common import ProbabilityValue, Scalar
from .distribution import CouponDistribution, ThetaFamily, TransformStep, TransformTrace
from .enums import (
    ArithmeticMode,
    DominanceRelation,
    OutputFormat,
    RouterPreset,
    SurvivalMethod,
)
from .oracle import ChainState, McEstimate
from .ordering import DominanceVerdict, SuiteFailure, SuiteReport, TheoremSuiteReport
from .simulation import (
    InjectionConfig,
    RouterConfig,
    RouterReport,
    ServerAlarm,
    SimConfig,
    SimReport,
)
from .survival import ExpectationResult, SurvivalCurve, SurvivalTable

__all__ = [
    "ArithmeticMode",
    "ChainState",
    "CouponDistribution",
    "DominanceRelation",
    "DominanceVerdict",
    "ExpectationResult",
    "InjectionConfig",
    "McEstimate",
    "OutputFormat",
    "ProbabilityValue",
    "RouterConfig",
    "RouterPreset",
    "RouterReport",
    "Scalar",
    "ServerAlarm",
    "SimConfig",
    "SimReport",
    "SuiteFailure",
    "SuiteReport",
    "SurvivalCurve",
    "SurvivalMethod",
    "SurvivalTable",
    "TheoremSuiteReport",
    "ThetaFamily",
    "TransformStep",
    "TransformTrace",
]
