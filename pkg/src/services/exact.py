"""
Closed-form evaluation of the collection time ``T = T_{c,n}(p)``.

Three independent formulas for ``Pr{T > k}``:

- inclusion-exclusion over subsets ``J`` with fewer than ``c`` members,
  ``sum_i (-1)^(c-1-i) C(n-i-1, n-c) sum_{|J|=i} (p0 + P_J)^k``;
- the multinomial composition sum over the set of coupons actually seen;
- the decomposition over the number of null draws, which reduces the problem
  to the normalized distribution ``p / (1 - p0)``.

Subsets are visited in lexicographic order and float sums go through
``math.fsum`` so results are reproducible run to run. Binomial coefficients
stay integers until they meet a probability.
"""

import logging
import math
import threading
from collections.abc import Iterator
from fractions import Fraction
from itertools import combinations, pairwise
from typing import NamedTuple

import numpy as np
from cachetools import LRUCache
from scipy.stats import binom

from src.core.errors import (
    IndexOutOfRange,
    InvalidC,
    InvalidDelta,
    TailRateOne,
    WorkloadExceeded,
)
from src.core.settings import settings
from src.models.common import Scalar, one, scalar_sum
from src.models.distribution import CouponDistribution, tolerance_for
from src.models.enums import ArithmeticMode
from src.models.survival import SurvivalCurve

logger = logging.getLogger(__name__)

# Curves keyed by (mode, entries, c, delta); 0.5 and Fraction(1, 2) hash alike
_curve_cache: LRUCache = LRUCache(maxsize=settings.curve_cache_size)
_curve_lock = threading.Lock()


class SubsetTerm(NamedTuple):
    """A subset ``J`` of coupon positions (1-based) with its mass ``P_J``."""

    members: tuple[int, ...]
    mass: Scalar


class CompositionIterator:
    """Compositions of ``total`` into ``parts`` positive parts, lexicographically.

    This is the set ``E_{k,J}`` for ``k = total`` and ``|J| = parts``. The empty
    composition is the only one of 0 into 0 parts.
    """

    def __init__(self, total: int, parts: int) -> None:
        self.total = total
        self.parts = parts

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        if self.parts == 0:
            if self.total == 0:
                yield ()
            return
        if self.total < self.parts:
            return
        for cuts in combinations(range(1, self.total), self.parts - 1):
            yield tuple(b - a for a, b in pairwise((0, *cuts, self.total)))

    def __len__(self) -> int:
        if self.parts == 0:
            return int(self.total == 0)
        if self.total < self.parts:
            return 0
        return math.comb(self.total - 1, self.parts - 1)


def _multinomial(total: int, parts: tuple[int, ...]) -> int:
    return math.factorial(total) // math.prod(math.factorial(x) for x in parts)


def _clamp(value: Scalar, mode: ArithmeticMode) -> Scalar:
    if mode is ArithmeticMode.RATIONAL:
        return value
    return min(max(value, 0.0), 1.0)


def _check_c(p: CouponDistribution, c: int) -> None:
    if not 1 <= c <= p.n:
        raise InvalidC(f"c={c} must lie in 1..{p.n}")


def _check_delta(delta: float) -> None:
    if not 0 < delta < 1:
        raise InvalidDelta(f"delta={delta} must lie in (0, 1)")


def _normalized_entries(p: CouponDistribution) -> tuple[Scalar, ...]:
    scale = one(p.mode) - p.null_mass
    return tuple(x / scale for x in p.entries)


def _signed_subsets(
    entries: tuple[Scalar, ...], c: int, mode: ArithmeticMode
) -> Iterator[tuple[int, SubsetTerm]]:
    n = len(entries)
    terms = ExactSurvivalService.subset_count(n, c)
    if terms > settings.workload_limit:
        logger.warning("inclusion-exclusion needs %d subset terms", terms)
        raise WorkloadExceeded(
            f"{terms} subset terms exceed the limit of {settings.workload_limit}; "
            "use the markov or mc method"
        )
    logger.debug("inclusion-exclusion over %d subset terms (n=%d, c=%d)", terms, n, c)

    for i in range(c):
        coefficient = (-1) ** (c - 1 - i) * math.comb(n - i - 1, n - c)
        for members in combinations(range(1, n + 1), i):
            mass = scalar_sum((entries[m - 1] for m in members), mode)
            yield coefficient, SubsetTerm(members, mass)


def _composition_terms(
    entries: tuple[Scalar, ...], null_mass: Scalar, c: int, k: int
) -> Iterator[Scalar]:
    with_null = null_mass > 0
    for nulls in range(k + 1) if with_null else (0,):
        remaining = k - nulls
        weight = math.comb(k, nulls) * null_mass**nulls
        for size in range(c):
            for members in combinations(range(len(entries)), size):
                probs = [entries[j] for j in members]
                for parts in CompositionIterator(remaining, size):
                    yield (
                        weight
                        * _multinomial(remaining, parts)
                        * math.prod(q**x for q, x in zip(probs, parts))
                    )


def _check_compositions(n: int, c: int, k: int, with_null: bool) -> None:
    count = ExactSurvivalService.composition_count(n, c, k, with_null)
    if count > settings.composition_limit:
        logger.warning("composition sum needs %d compositions", count)
        raise WorkloadExceeded(
            f"{count} compositions exceed the limit of {settings.composition_limit}"
        )


class _PowerTerms:
    """Merged ``(coefficient, base)`` pairs of the inclusion-exclusion sum."""

    def __init__(
        self,
        entries: tuple[Scalar, ...],
        null_mass: Scalar,
        mode: ArithmeticMode,
        c: int,
    ) -> None:
        self.mode = mode
        merged: dict[Scalar, int] = {}
        for coefficient, term in _signed_subsets(entries, c, mode):
            base = null_mass + term.mass
            merged[base] = merged.get(base, 0) + coefficient
        pairs = [(coef, base) for base, coef in merged.items() if coef != 0]
        self.coefficients = [coef for coef, _ in pairs]
        self.bases = [base for _, base in pairs]
        if self.mode is ArithmeticMode.FLOAT:
            self._coef_array = np.array(self.coefficients, dtype=np.float64)
            self._base_array = np.array(self.bases, dtype=np.float64)

    @classmethod
    def of(cls, p: CouponDistribution, c: int) -> "_PowerTerms":
        _check_c(p, c)
        return cls(p.entries, p.null_mass, p.mode, c)

    @classmethod
    def normalized(cls, p: CouponDistribution, c: int) -> "_PowerTerms":
        """Terms of ``p / (1 - p0)``, which may hold a single entry of 1."""
        _check_c(p, c)
        return cls(_normalized_entries(p), 0 * p.null_mass, p.mode, c)

    def __len__(self) -> int:
        return len(self.bases)

    def survival(self, k: int) -> Scalar:
        if k < 0:
            return one(self.mode)
        if self.mode is ArithmeticMode.RATIONAL:
            return sum(
                (coef * base**k for coef, base in zip(self.coefficients, self.bases)),
                Fraction(0),
            )
        return _clamp(math.fsum(self._coef_array * self._base_array**k), self.mode)

    def expectation(self) -> Scalar:
        return scalar_sum(
            (coef / (1 - base) for coef, base in zip(self.coefficients, self.bases)),
            self.mode,
        )


class ExactSurvivalService:
    """Closed-form survival functions, expectation and quantiles."""

    @staticmethod
    def subset_count(n: int, c: int) -> int:
        return sum(math.comb(n, i) for i in range(c))

    @staticmethod
    def subset_terms(p: CouponDistribution, c: int) -> Iterator[tuple[int, SubsetTerm]]:
        """
        Signed subset terms of the inclusion-exclusion sum.

        Yields ``((-1)^(c-1-i) C(n-i-1, n-c), SubsetTerm)`` for every ``J`` with
        ``|J| = i < c``, by increasing ``i`` and lexicographically within a layer.
        """
        _check_c(p, c)
        yield from _signed_subsets(p.entries, c, p.mode)

    @staticmethod
    def survival_inclusion_exclusion(p: CouponDistribution, c: int, k: int) -> Scalar:
        """``Pr{T > k}`` by inclusion-exclusion over subsets of fewer than ``c`` coupons."""
        return _PowerTerms.of(p, c).survival(k)

    @staticmethod
    def survival_values(p: CouponDistribution, c: int, k_max: int) -> list[Scalar]:
        terms = _PowerTerms.of(p, c)
        return [terms.survival(k) for k in range(k_max + 1)]

    @staticmethod
    def tail_rate(p: CouponDistribution, c: int) -> Scalar:
        """
        Worst per-draw probability of no progress: ``p0`` plus the ``c - 1`` largest entries.

        Raises:
            TailRateOne: if the rate is 1 within tolerance
        """
        _check_c(p, c)
        largest = sorted(p.entries, reverse=True)[: c - 1]
        rate = p.null_mass + scalar_sum(largest, p.mode)
        if rate >= one(p.mode) - tolerance_for(p.mode):
            raise TailRateOne(
                f"Tail rate {rate} is 1 within tolerance; {c} coupons are unreachable"
            )
        return rate

    @staticmethod
    def nb_tail_bound(rate: Scalar, c: int, k: int) -> Scalar:
        """
        ``sum_{m > k} Pr{Bin(m, 1 - rate) < c}``, the residual of the negative binomial envelope.

        Every draw adds a new coupon with probability at least ``1 - rate``
        until ``c`` coupons are in, so ``T`` is stochastically below
        the number of such trials needed for ``c`` successes. The residual
        equals ``sum_{t < c} (c - t) Pr{Bin(k + 1, s) = t} / s`` with ``s = 1 - rate``.
        """
        success = 1 - rate
        trials = k + 1
        if isinstance(rate, Fraction):
            total = sum(
                (
                    (c - t) * math.comb(trials, t) * success**t * rate ** (trials - t)
                    for t in range(min(c, trials + 1))
                ),
                Fraction(0),
            )
            return total / success
        t = np.arange(c)
        weights = binom.pmf(t, trials, float(success))
        return math.fsum((c - t) * weights) / float(success)

    @staticmethod
    def truncation_point(rate: Scalar, c: int, delta: float, max_k: int) -> int:
        """Smallest ``K >= 1`` whose tail bound is below ``delta``."""
        bound = ExactSurvivalService.nb_tail_bound
        high = 1
        while bound(rate, c, high) >= delta:
            if high >= max_k:
                raise WorkloadExceeded(
                    f"Truncating at delta={delta} needs more than {max_k} points"
                )
            high = min(high * 2, max_k)
        low = high // 2
        # bound(low) >= delta, or low == 0
        while high - low > 1:
            middle = (low + high) // 2
            if bound(rate, c, middle) < delta:
                high = middle
            else:
                low = middle
        return max(high, 1)

    @staticmethod
    def survival_curve(
        p: CouponDistribution, c: int, delta: float | None = None
    ) -> SurvivalCurve:
        """
        Values ``Pr{T > k}`` for ``k = 0..K`` with a certified tail below ``delta``.

        Curves are memoized per process.
        """
        delta = settings.default_delta if delta is None else delta
        _check_delta(delta)
        _check_c(p, c)
        key = (p.mode, p.entries, c, delta)
        with _curve_lock:
            cached = _curve_cache.get(key)
        if cached is not None:
            return cached

        rate = ExactSurvivalService.tail_rate(p, c)
        terms = _PowerTerms.of(p, c)
        max_k = max(settings.workload_limit // max(len(terms), 1), 1)
        truncation = ExactSurvivalService.truncation_point(rate, c, delta, max_k)
        logger.debug(
            "curve n=%d c=%d truncated at K=%d (rate=%s)", p.n, c, truncation, rate
        )

        curve = SurvivalCurve(
            values=tuple(terms.survival(k) for k in range(truncation + 1)),
            tail_rate=rate,
            truncation_k=truncation,
            tail_bound_at_K=ExactSurvivalService.nb_tail_bound(rate, c, truncation),
            c=c,
        )
        with _curve_lock:
            _curve_cache[key] = curve
        return curve

    @staticmethod
    def composition_count(n: int, c: int, k: int, with_null: bool) -> int:
        lengths = range(k + 1) if with_null else (k,)
        return sum(
            math.comb(n, i) * len(CompositionIterator(m, i))
            for m in lengths
            for i in range(c)
        )

    @staticmethod
    def survival_by_compositions(p: CouponDistribution, c: int, k: int) -> Scalar:
        """
        ``Pr{T > k}`` as the probability that fewer than ``c`` coupons are seen.

        Sums the multinomial probabilities of all count vectors ``(k_0, k_J)``
        where the seen set ``J`` has fewer than ``c`` members and every
        ``k_j >= 1``. With ``p0 = 0`` only ``k_0 = 0`` contributes.
        """
        _check_c(p, c)
        mode = p.mode
        if k < 0:
            return one(mode)
        _check_compositions(p.n, c, k, p.null_mass > 0)
        terms = _composition_terms(p.entries, p.null_mass, c, k)
        return _clamp(scalar_sum(terms, mode), mode)

    @staticmethod
    def binomial_null_weights(k: int, p0: Scalar) -> list[Scalar]:
        """Law of the number of null draws among ``k`` draws."""
        if isinstance(p0, Fraction):
            return [
                math.comb(k, nulls) * p0**nulls * (1 - p0) ** (k - nulls)
                for nulls in range(k + 1)
            ]
        return binom.pmf(np.arange(k + 1), k, float(p0)).tolist()

    @staticmethod
    def conditional_survival(
        p: CouponDistribution, c: int, k: int, nulls: int
    ) -> Scalar:
        """``Pr{T > k}`` given that ``nulls`` of the ``k`` draws hit the null coupon."""
        if not 0 <= nulls <= k:
            raise IndexOutOfRange(f"Null draw count {nulls} is outside 0..{k}")
        _check_c(p, c)
        remaining = k - nulls
        _check_compositions(p.n, c, remaining, with_null=False)
        # Built from raw entries: for n = 1 the normalized vector is (1,)
        normalized = _normalized_entries(p)
        terms = _composition_terms(normalized, 0 * p.null_mass, c, remaining)
        return _clamp(scalar_sum(terms, p.mode), p.mode)

    @staticmethod
    def survival_by_decomposition(p: CouponDistribution, c: int, k: int) -> Scalar:
        """``sum_l C(k, l) p0^l (1 - p0)^(k - l) Pr{T(p / (1 - p0)) > k - l}``."""
        terms = _PowerTerms.normalized(p, c)
        if k < 0:
            return one(p.mode)
        weights = ExactSurvivalService.binomial_null_weights(k, p.null_mass)
        return _clamp(
            scalar_sum(
                (weights[nulls] * terms.survival(k - nulls) for nulls in range(k + 1)),
                p.mode,
            ),
            p.mode,
        )

    @staticmethod
    def expectation(p: CouponDistribution, c: int) -> Scalar:
        """
        ``E[T]`` from the geometric series of the inclusion-exclusion terms.

        Returns:
            ``sum_i (-1)^(c-1-i) C(n-i-1, n-c) sum_{|J|=i} 1 / (1 - p0 - P_J)``
        """
        ExactSurvivalService.tail_rate(p, c)
        return _PowerTerms.of(p, c).expectation()

    @staticmethod
    def quantile(p: CouponDistribution, c: int, delta: float) -> int:
        """Smallest ``k`` with ``Pr{T > k} <= delta``."""
        _check_delta(delta)
        ExactSurvivalService.tail_rate(p, c)
        terms = _PowerTerms.of(p, c)
        max_k = max(settings.workload_limit // max(len(terms), 1), 1)
        k = 0
        while terms.survival(k) > delta:
            k += 1
            if k > max_k:
                raise WorkloadExceeded(
                    f"Quantile at delta={delta} lies beyond k={max_k}"
                )
        logger.debug("quantile n=%d c=%d delta=%s -> %d", p.n, c, delta, k)
        return k


def clear_curve_cache() -> None:
    with _curve_lock:
        _curve_cache.clear()
