"""
Common scalar handling shared across the models.

Probabilities are either exact ``Fraction`` values (rational mode) or binary64
floats. This module parses both from literals and JSON, and serializes
fractions as ``"p/q"`` strings so emitted JSON re-parses to equal values.
"""

import math
from collections.abc import Iterable
from decimal import Decimal
from fractions import Fraction
from typing import Annotated

from pydantic import BeforeValidator, PlainSerializer, WithJsonSchema

from src.core.errors import InvalidLiteral

from .enums import ArithmeticMode

Scalar = Fraction | float


def coerce_scalar(value: object) -> Scalar:
    """Convert a literal or number to a ``Fraction`` or ``float``.

    Slash literals and integers become fractions; decimal literals and floats
    stay floats.
    """
    if isinstance(value, bool):
        raise InvalidLiteral(f"Boolean {value!r} is not a probability")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return value
    if isinstance(value, Decimal):
        return float(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            if "/" in text:
                return Fraction(text)
            return float(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidLiteral(f"Cannot parse {value!r} as a probability") from exc
    raise InvalidLiteral(f"Unsupported probability value {value!r}")


def to_mode(value: Scalar, mode: ArithmeticMode) -> Scalar:
    """Represent ``value`` in the given arithmetic mode.

    Float to rational uses the decimal shortest repr, so ``0.3`` becomes
    ``3/10`` rather than its binary expansion.
    """
    if mode is ArithmeticMode.RATIONAL:
        if isinstance(value, Fraction):
            return value
        return Fraction(repr(float(value)))
    return float(value)


def mode_of(values: tuple[Scalar, ...] | list[Scalar]) -> ArithmeticMode:
    if values and all(isinstance(v, Fraction) for v in values):
        return ArithmeticMode.RATIONAL
    return ArithmeticMode.FLOAT


def scalar_sum(values: Iterable[Scalar], mode: ArithmeticMode) -> Scalar:
    """Exact sum in rational mode, correctly rounded ``math.fsum`` in float mode."""
    if mode is ArithmeticMode.RATIONAL:
        return sum(values, Fraction(0))
    return math.fsum(values)


def one(mode: ArithmeticMode) -> Scalar:
    return Fraction(1) if mode is ArithmeticMode.RATIONAL else 1.0


def zero(mode: ArithmeticMode) -> Scalar:
    return Fraction(0) if mode is ArithmeticMode.RATIONAL else 0.0


def format_scalar(value: Scalar) -> str:
    """Text form used in CSV output: ``1/16`` for fractions, shortest repr for floats."""
    if isinstance(value, Fraction):
        return str(value)
    return repr(float(value))


def _serialize_scalar(value: Scalar) -> str | float:
    if isinstance(value, Fraction):
        return str(value)
    return value


ProbabilityValue = Annotated[
    Scalar,
    BeforeValidator(coerce_scalar),
    PlainSerializer(_serialize_scalar, when_used="json"),
    WithJsonSchema(
        {
            "anyOf": [
                {"type": "number"},
                {"type": "string", "examples": ["1/16", "0.25"]},
            ]
        }
    ),
]
