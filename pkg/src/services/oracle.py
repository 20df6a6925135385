"""
Independent ground truth for the collection time.

The collection chain walks the sets of distinct coupons seen so far, with
every set of ``c`` coupons merged into one absorbing state. Enumeration sums
over every draw sequence of length ``k``. The Monte-Carlo sampler draws
symbols by cumulative inversion over ``(p0, p_1, ..., p_n)`` from PCG64
streams split by ``(seed, block)``, so serial and threaded runs agree
exactly.
"""

import logging
import math
from collections import defaultdict
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from itertools import combinations, product

import numpy as np
from scipy.sparse import csr_matrix, identity
from scipy.sparse.linalg import spsolve
from scipy.stats import norm

from src.core.errors import InvalidC, InvalidReplicates, WorkloadExceeded
from src.core.settings import settings
from src.models.common import Scalar, one, scalar_sum, zero
from src.models.distribution import CouponDistribution
from src.models.enums import ArithmeticMode
from src.models.oracle import ChainState, McEstimate

logger = logging.getLogger(__name__)

MIN_REPLICATES = 100
# two-sided 95% normal quantile
Z_95 = float(norm.ppf(0.975))


def _check_c(p: CouponDistribution, c: int) -> None:
    if not 1 <= c <= p.n:
        raise InvalidC(f"c={c} must lie in 1..{p.n}")


class CollectionChain:
    """Absorbing chain on the sets of distinct coupons collected so far.

    From a set ``J`` the chain stays put with probability ``p0 + P_J`` and
    moves to ``J + {i}`` with probability ``p_i`` for every ``i`` not in ``J``.
    Sets of size ``c`` are collapsed into one absorbing state.
    """

    def __init__(self, p: CouponDistribution, c: int) -> None:
        _check_c(p, c)
        count = sum(math.comb(p.n, i) for i in range(c))
        if count > settings.state_limit:
            logger.warning("collection chain needs %d states", count)
            raise WorkloadExceeded(
                f"{count} chain states exceed the limit of {settings.state_limit}; "
                "use the mc method"
            )
        self.p = p
        self.c = c
        self.mode = p.mode
        self.states: list[frozenset[int]] = [
            frozenset(members)
            for size in range(c)
            for members in combinations(range(1, p.n + 1), size)
        ]
        self._stay = {
            state: p.null_mass + scalar_sum(
                (p.entries[i - 1] for i in state), self.mode
            )
            for state in self.states
        }
        logger.debug("collection chain with %d transient states", count)

    def initial(self) -> dict[frozenset[int], Scalar]:
        return {frozenset(): one(self.mode)}

    def step(
        self, masses: dict[frozenset[int], Scalar]
    ) -> tuple[dict[frozenset[int], Scalar], Scalar]:
        """One draw. Returns the transient masses and the mass absorbed in this step."""
        following: dict[frozenset[int], Scalar] = defaultdict(lambda: zero(self.mode))
        absorbed = zero(self.mode)
        for state, mass in masses.items():
            following[state] += mass * self._stay[state]
            for i in range(1, self.p.n + 1):
                if i in state:
                    continue
                moved = mass * self.p.entries[i - 1]
                if len(state) + 1 == self.c:
                    absorbed += moved
                else:
                    following[state | {i}] += moved
        return dict(following), absorbed

    def survival_values(self, k_max: int) -> list[Scalar]:
        """Transient mass after ``k`` draws for ``k = 0..k_max``."""
        masses = self.initial()
        values = [one(self.mode)]
        for _ in range(k_max):
            masses, _ = self.step(masses)
            values.append(scalar_sum(masses.values(), self.mode))
        return values

    def chain_states(self, k: int) -> list[ChainState]:
        """The full distribution after ``k`` draws, absorbing state last."""
        masses = self.initial()
        done = zero(self.mode)
        for _ in range(k):
            masses, absorbed = self.step(masses)
            done += absorbed
        states: list[ChainState] = [
            {"collected": state, "mass": masses[state]}
            for state in self.states
            if state in masses
        ]
        states.append({"collected": None, "mass": done})
        return states

    def expected_absorption(self) -> Scalar:
        """Expected number of draws until absorption from the empty set."""
        if self.mode is ArithmeticMode.RATIONAL:
            return self._expected_by_recursion()
        return self._expected_by_solve()

    def _expected_by_recursion(self) -> Scalar:
        # E[J] = (1 + sum_i p_i E[J + i]) / (1 - p0 - P_J), largest sets first
        expected: dict[frozenset[int], Scalar] = {}
        for state in reversed(self.states):
            total = Fraction(1)
            for i in range(1, self.p.n + 1):
                if i not in state and len(state) + 1 < self.c:
                    total += self.p.entries[i - 1] * expected[state | {i}]
            expected[state] = total / (1 - self._stay[state])
        return expected[frozenset()]

    def _expected_by_solve(self) -> float:
        index = {state: position for position, state in enumerate(self.states)}
        rows, cols, data = [], [], []
        for state, position in index.items():
            rows.append(position)
            cols.append(position)
            data.append(float(self._stay[state]))
            for i in range(1, self.p.n + 1):
                if i not in state and len(state) + 1 < self.c:
                    rows.append(position)
                    cols.append(index[state | {i}])
                    data.append(float(self.p.entries[i - 1]))
        size = len(self.states)
        transient = csr_matrix((data, (rows, cols)), shape=(size, size))
        times = spsolve(
            (identity(size, format="csr") - transient).tocsc(), np.ones(size)
        )
        return float(np.atleast_1d(times)[index[frozenset()]])


def _block_times(
    cumulative: np.ndarray, n: int, c: int, size: int, seed: int, block: int
) -> np.ndarray:
    stream = np.random.SeedSequence(seed, spawn_key=(block,))
    rng = np.random.Generator(np.random.PCG64(stream))
    seen = np.zeros((size, n + 1), dtype=bool)
    distinct = np.zeros(size, dtype=np.int64)
    times = np.zeros(size, dtype=np.int64)
    active = np.arange(size)
    draw = 0
    while active.size:
        draw += 1
        uniforms = rng.random(active.size)
        symbols = np.minimum(np.searchsorted(cumulative, uniforms, side="right"), n)
        fresh = (symbols > 0) & ~seen[active, symbols]
        seen[active, symbols] = True
        distinct[active] += fresh
        finished = distinct[active] >= c
        times[active[finished]] = draw
        active = active[~finished]
    return times


class OracleService:
    """Chain iteration, enumeration and Monte-Carlo estimates of ``T``."""

    @staticmethod
    def survival_markov(p: CouponDistribution, c: int, k: int) -> Scalar:
        """Mass not yet absorbed by the collection chain after ``k`` draws."""
        if k < 0:
            return one(p.mode)
        return CollectionChain(p, c).survival_values(k)[k]

    @staticmethod
    def expectation_markov(p: CouponDistribution, c: int) -> Scalar:
        """``E[T]`` from the chain: an exact backward recursion or a sparse solve."""
        return CollectionChain(p, c).expected_absorption()

    @staticmethod
    def survival_enumeration(p: CouponDistribution, c: int, k: int) -> Scalar:
        """Probability of the length-``k`` draw sequences with fewer than ``c`` distinct coupons."""
        _check_c(p, c)
        if k < 0:
            return one(p.mode)
        sequences = (p.n + 1) ** k
        if sequences > settings.enumeration_limit:
            logger.warning("enumeration needs %d sequences", sequences)
            raise WorkloadExceeded(
                f"{sequences} draw sequences exceed the limit of {settings.enumeration_limit}"
            )
        probs = (p.null_mass, *p.entries)
        return scalar_sum(
            (
                math.prod((probs[s] for s in sequence), start=one(p.mode))
                for sequence in product(range(p.n + 1), repeat=k)
                if len(set(sequence) - {0}) < c
            ),
            p.mode,
        )

    @staticmethod
    def sample_collection_time(
        p: CouponDistribution, c: int, rng: np.random.Generator
    ) -> int:
        """One realization of ``T``: draws until ``c`` distinct non-null coupons appear."""
        _check_c(p, c)
        cumulative = np.cumsum([float(p.null_mass), *p.as_floats()])
        seen: set[int] = set()
        draws = 0
        while len(seen) < c:
            draws += 1
            symbol = min(
                int(np.searchsorted(cumulative, rng.random(), side="right")), p.n
            )
            if symbol:
                seen.add(symbol)
        return draws

    @staticmethod
    def sample_collection_times(
        p: CouponDistribution, c: int, replicates: int, seed: int
    ) -> np.ndarray:
        """
        ``replicates`` independent realizations of ``T``.

        Replicates are drawn in blocks of ``settings.mc_block_size``; block ``b``
        owns the stream ``SeedSequence(seed, spawn_key=(b,))``. Blocks run on
        ``settings.workers`` threads and are concatenated in block order.
        """
        _check_c(p, c)
        if replicates < 1:
            raise InvalidReplicates(f"replicates={replicates} must be positive")
        cumulative = np.cumsum([float(p.null_mass), *p.as_floats()])
        block_size = settings.mc_block_size
        sizes = [
            min(block_size, replicates - start)
            for start in range(0, replicates, block_size)
        ]

        def run(block: int) -> np.ndarray:
            return _block_times(cumulative, p.n, c, sizes[block], seed, block)

        if settings.workers > 1 and len(sizes) > 1:
            with ThreadPoolExecutor(max_workers=settings.workers) as pool:
                blocks = list(pool.map(run, range(len(sizes))))
        else:
            blocks = [run(block) for block in range(len(sizes))]
        logger.debug("sampled %d collection times in %d blocks", replicates, len(sizes))
        return np.concatenate(blocks)

    @staticmethod
    def mc_survival_curve(
        p: CouponDistribution, c: int, k_max: int, replicates: int, seed: int
    ) -> list[McEstimate]:
        """Estimates of ``Pr{T > k}`` for ``k = 0..k_max`` with 95% normal intervals."""
        if replicates < MIN_REPLICATES:
            raise InvalidReplicates(
                f"replicates={replicates}; at least {MIN_REPLICATES} are needed"
            )
        times = OracleService.sample_collection_times(p, c, replicates, seed)
        completed = np.cumsum(np.bincount(times, minlength=k_max + 1))[: k_max + 1]
        estimates = []
        for k in range(k_max + 1):
            estimate = float(replicates - completed[k]) / replicates
            half_width = Z_95 * math.sqrt(estimate * (1 - estimate) / replicates)
            estimates.append(
                McEstimate(
                    k=k,
                    estimate=estimate,
                    half_width=half_width,
                    replicates=replicates,
                    seed=seed,
                )
            )
        return estimates

    @staticmethod
    def mc_expectation(
        p: CouponDistribution, c: int, replicates: int, seed: int
    ) -> McEstimate:
        if replicates < MIN_REPLICATES:
            raise InvalidReplicates(
                f"replicates={replicates}; at least {MIN_REPLICATES} are needed"
            )
        times = OracleService.sample_collection_times(p, c, replicates, seed)
        spread = float(np.std(times, ddof=1))
        return McEstimate(
            estimate=float(np.mean(times)),
            half_width=Z_95 * spread / math.sqrt(replicates),
            replicates=replicates,
            seed=seed,
        )

    @staticmethod
    def survival_from_samples(times: Sequence[int] | np.ndarray, k_max: int) -> list[
        float
    ]:
        """Empirical ``Pr{T > k}`` for ``k = 0..k_max``."""
        samples = np.asarray(times, dtype=np.int64)
        completed = np.cumsum(np.bincount(samples, minlength=k_max + 1))[: k_max + 1]
        return (1.0 - completed / samples.size).tolist()
