"""
Service layer for probability vectors and their constructive transforms.

Covers validation and parsing of coupon distributions, majorization, the
lambda-mixing of two entries, and the two step-by-step constructions built
on it: uniformization towards the almost-uniform vector and maximization
towards a member of ``B_theta``.
"""

import logging
from collections.abc import Iterable, Sequence
from fractions import Fraction
from itertools import accumulate

from src.core.errors import (
    DegenerateNullMass,
    EmptyVector,
    IndexOutOfRange,
    LambdaOutOfRange,
    LengthMismatch,
    MassMismatch,
    NotInFamily,
)
from src.models.common import coerce_scalar, mode_of, one, to_mode
from src.models.distribution import (
    CouponDistribution,
    ThetaFamily,
    TransformStep,
    TransformTrace,
    tolerance_for,
)
from src.models.enums import ArithmeticMode

logger = logging.getLogger(__name__)


def _position(p: CouponDistribution, position: int) -> int:
    if not 1 <= position <= p.n:
        raise IndexOutOfRange(f"Position {position} is outside 1..{p.n}")
    return position - 1


class ProbModelService:
    """Operations on coupon distributions and theta families."""

    @staticmethod
    def parse_distribution(
        literal: str | Sequence[object], mode: ArithmeticMode | None = None
    ) -> CouponDistribution:
        """
        Parse ``"1/16,1/6,1/4"`` style literals.

        Args:
            literal: Comma separated decimals or slash fractions, or a sequence
                of numbers and such strings
            mode: Force an arithmetic mode; by default fractions give rational
                mode and any decimal gives float mode

        Returns:
            The validated distribution
        """
        raw = literal.split(",") if isinstance(literal, str) else list(literal)
        values = [
            coerce_scalar(v.strip() if isinstance(v, str) else v)
            for v in raw
            if not (isinstance(v, str) and not v.strip())
        ]
        if not values:
            raise EmptyVector("A coupon distribution needs at least one entry")
        if mode is not None:
            values = [to_mode(v, mode) for v in values]
        return CouponDistribution(entries=tuple(values))

    @staticmethod
    def validate(entries: Iterable[object]) -> CouponDistribution:
        return CouponDistribution(entries=tuple(entries))

    @staticmethod
    def normalize(p: CouponDistribution) -> CouponDistribution:
        """Divide every entry by ``1 - p0``; the result has no null mass."""
        remaining = one(p.mode) - p.null_mass
        if remaining <= tolerance_for(p.mode):
            raise DegenerateNullMass("Cannot normalize: the null coupon takes all mass")
        return CouponDistribution(entries=tuple(v / remaining for v in p.entries))

    @staticmethod
    def majorizes(a: CouponDistribution, b: CouponDistribution) -> bool:
        """Whether every top-m partial sum of ``a`` dominates that of ``b``."""
        if a.n != b.n:
            raise LengthMismatch(f"Cannot compare vectors of lengths {a.n} and {b.n}")
        tol = max(tolerance_for(a.mode), tolerance_for(b.mode))
        if abs(a.total - b.total) > tol:
            raise MassMismatch(f"Entry sums differ: {a.total} and {b.total}")

        top_a = accumulate(sorted(a.entries, reverse=True))
        top_b = accumulate(sorted(b.entries, reverse=True))
        return all(sa >= sb - tol for sa, sb in zip(top_a, top_b))

    @staticmethod
    def lambda_transform(
        p: CouponDistribution, i: int, j: int, weight: object
    ) -> CouponDistribution:
        """
        Mix entries ``i`` and ``j``: ``p'_i = w p_i + (1 - w) p_j`` and
        ``p'_j = (1 - w) p_i + w p_j``.

        Args:
            p: Distribution to transform
            i: First 1-based position
            j: Second 1-based position, different from ``i``
            weight: Mixing weight in [0, 1]

        Returns:
            The transformed distribution, majorized by ``p``
        """
        a, b = _position(p, i), _position(p, j)
        if a == b:
            raise IndexOutOfRange(
                f"Mixing needs two different positions, got {i} twice"
            )
        lam = coerce_scalar(weight)
        if not 0 <= lam <= 1:
            raise LambdaOutOfRange(f"lambda={lam} must lie in [0, 1]")

        mode = mode_of([*p.entries, lam])
        p = p.as_mode(mode)
        lam = to_mode(lam, mode)
        entries = list(p.entries)
        pi, pj = entries[a], entries[b]
        entries[a] = lam * pi + (1 - lam) * pj
        entries[b] = (1 - lam) * pi + lam * pj
        return p.with_entries(entries)

    @staticmethod
    def almost_uniform(n: int, p0: object = 0) -> CouponDistribution:
        """The vector ``v`` with every entry equal to ``(1 - p0) / n``."""
        if n < 1:
            raise EmptyVector("A coupon distribution needs at least one entry")
        null_mass = coerce_scalar(p0)
        if not 0 <= null_mass < 1:
            raise DegenerateNullMass(f"Null mass {null_mass} must lie in [0, 1)")
        share = (1 - null_mass) / n
        return CouponDistribution(entries=(share,) * n)

    @staticmethod
    def uniform(
        n: int, mode: ArithmeticMode = ArithmeticMode.RATIONAL
    ) -> CouponDistribution:
        """The uniform distribution ``u`` over ``n`` coupons without null mass."""
        return ProbModelService.almost_uniform(n, to_mode(Fraction(0), mode))

    @staticmethod
    def extremal_member(family: ThetaFamily, j: int) -> CouponDistribution:
        return family.member(j)

    @staticmethod
    def in_family(p: CouponDistribution, family: ThetaFamily) -> bool:
        return family.contains(p)

    @staticmethod
    def uniformize_trace(
        p: CouponDistribution, pairs: Sequence[tuple[int, int]] | None = None
    ) -> TransformTrace:
        """
        Drive ``p`` to the almost-uniform vector, pinning one entry per step.

        Each step takes a deficient entry ``p_i < t`` and a surplus entry
        ``p_j > t`` with ``t = (1 - p0) / n`` and mixes them with
        ``lambda = (p_j - t) / (p_j - p_i)``, which sets ``p'_i = t``. Explicit
        ``pairs`` are replayed first; the remaining steps take the lowest-index
        deficient and surplus entries.
        """
        target = p.uniform_share
        tol = tolerance_for(p.mode)
        pending = list(pairs or ())
        if len(pending) > max(p.n - 1, 0):
            raise IndexOutOfRange(
                f"At most {p.n - 1} pairs fit a vector of length {p.n}"
            )

        steps: list[TransformStep] = []
        current = p
        while True:
            if pending:
                i, j = pending.pop(0)
                a, b = _position(current, i), _position(current, j)
                pi, pj = current.entries[a], current.entries[b]
                if not pi < target - tol or not pj > target + tol:
                    raise LambdaOutOfRange(
                        f"Pair ({i}, {j}) does not straddle the target {target}"
                    )
            else:
                deficient = [
                    k for k, v in enumerate(current.entries) if v < target - tol
                ]
                surplus = [k for k, v in enumerate(current.entries) if v > target + tol]
                if not deficient or not surplus:
                    break
                a, b = deficient[0], surplus[0]
                i, j = a + 1, b + 1
                pi, pj = current.entries[a], current.entries[b]

            lam = (pj - target) / (pj - pi)
            entries = list(current.entries)
            entries[a] = target
            entries[b] = pi + pj - target
            current = current.with_entries(entries)
            steps.append(
                TransformStep(index_i=i, index_j=j, weight=lam, result=current)
            )
            logger.debug("uniformize step (%d, %d) lambda=%s", i, j, lam)

        return TransformTrace(start=p, steps=tuple(steps))

    @staticmethod
    def maximize_trace(p: CouponDistribution, theta: object, j: int) -> TransformTrace:
        """
        Drive ``p`` in ``A_theta`` to the ``B_theta`` member holding ``gamma`` at ``j``.

        Each step pins the first entry ``i != j`` above ``theta`` to ``theta`` and
        moves the excess to ``j``. The recorded weight
        ``lambda = (p_j - theta) / (p_j - theta + p_i - theta)`` mixes the step
        result back into its predecessor, so the predecessor is the more
        balanced of the two.
        """
        family = ThetaFamily(n=p.n, null_mass=p.null_mass, theta=theta)
        b = _position(p, j)
        mode = mode_of([*p.entries, family.theta])
        current = p.as_mode(mode)
        floor = to_mode(family.theta, mode)
        tol = max(tolerance_for(mode), tolerance_for(family.mode))
        if not family.contains(current):
            raise NotInFamily(
                f"Some entry of {list(p.entries)} lies below theta={floor}"
            )

        steps: list[TransformStep] = []
        while True:
            above = [
                k for k, v in enumerate(current.entries) if k != b and v > floor + tol
            ]
            if not above:
                break
            a = above[0]
            pi, pj = current.entries[a], current.entries[b]
            lam = (pj - floor) / (pj - floor + pi - floor)
            entries = list(current.entries)
            entries[a] = floor
            entries[b] = pi + pj - floor
            current = current.with_entries(entries)
            steps.append(
                TransformStep(index_i=a + 1, index_j=j, weight=lam, result=current)
            )
            logger.debug("maximize step (%d, %d) lambda=%s", a + 1, j, lam)

        return TransformTrace(start=p.as_mode(mode), steps=tuple(steps))
