"""
Enumerations for model field validation.

This module defines strongly-typed enums for categorical fields,
providing type safety and automatic validation in Pydantic models.
"""

from enum import StrEnum


class ArithmeticMode(StrEnum):
    """Number system a computation runs in.

    ``rational`` keeps every probability as an exact ``Fraction``; ``float``
    uses binary64 with compensated summation.
    """

    FLOAT = "float"
    RATIONAL = "rational"


class SurvivalMethod(StrEnum):
    """Evaluators of ``Pr{T > k}``.

    The first three are closed forms; the others are the independent oracles.
    """

    EXACT = "exact"
    COMPOSITION = "composition"
    DECOMPOSITION = "decomposition"
    MARKOV = "markov"
    ENUMERATION = "enumeration"
    MC = "mc"


class DominanceRelation(StrEnum):
    """Outcome of a strong stochastic order comparison of two curves."""

    LEFT_ST_SMALLER = "left_st_smaller"
    RIGHT_ST_SMALLER = "right_st_smaller"
    EQUAL = "equal"
    CROSSING = "crossing"
    UNDECIDED = "undecided"


class OutputFormat(StrEnum):
    CSV = "csv"
    JSON = "json"


class RouterPreset(StrEnum):
    """Named router distributions of a simulation scenario."""

    UNIFORM = "uniform"
    EXTREMAL = "extremal"
