"""Segmented odd-only prime sieve and compensated prime sums."""

from __future__ import annotations

import math
import os
from collections.abc import Callable, Iterator
from dataclasses import dataclass, field
from decimal import Decimal, localcontext

import numpy as np

from .errors import ResourceLimitError

__all__ = [
    "CompensatedSum",
    "PrimeStream",
    "SieveConfig",
    "chebyshev_interval_sum",
    "extended_log_sum",
    "filtered_log_sum",
    "pi",
    "pi_upper_bound",
    "prime_counts",
    "primes_up_to",
]

DEFAULT_SEGMENT_SIZE = 1 << 16
DEFAULT_MAX_BOUND = 10**8


@dataclass(frozen=True)
class SieveConfig:
    max_bound: int = DEFAULT_MAX_BOUND
    segment_size: int = DEFAULT_SEGMENT_SIZE

    @classmethod
    def from_env(cls) -> SieveConfig:
        return cls(
            max_bound=int(os.environ.get("SQPROD_SIEVE_BOUND", DEFAULT_MAX_BOUND)),
            segment_size=int(os.environ.get("SQPROD_SEGMENT_SIZE", DEFAULT_SEGMENT_SIZE)),
        )


def _small_sieve(limit: int) -> np.ndarray:
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags).astype(np.int64)


@dataclass(frozen=True)
class PrimeStream:
    """Re-iterable stream of the primes <= ``bound`` in increasing order.

    Only odd numbers are stored; each segment holds ``segment_size`` odd slots.
    """

    bound: int
    segment_size: int = DEFAULT_SEGMENT_SIZE
    _base: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.segment_size < 1:
            raise ValueError("segment_size must be positive")
        base = _small_sieve(math.isqrt(max(self.bound, 0)))
        object.__setattr__(self, "_base", base[1:])  # odd base primes

    def segments(self) -> Iterator[np.ndarray]:
        """Yield int64 arrays of primes, one per sieve segment, ascending."""
        if self.bound < 2:
            return
        yield np.array([2], dtype=np.int64)
        span = 2 * self.segment_size
        low = 3
        while low <= self.bound:
            high = min(low + span, self.bound + 1)  # exclusive
            count = (high - low + 1) // 2
            mask = np.ones(count, dtype=bool)
            for p in self._base:
                p = int(p)
                sq = p * p
                if sq >= high:
                    break
                start = max(sq, (low + p - 1) // p * p)
                if start % 2 == 0:
                    start += p
                if start < high:
                    mask[(start - low) // 2 :: p] = False
            yield low + 2 * np.flatnonzero(mask).astype(np.int64)
            low += 2 * count

    def __iter__(self) -> Iterator[int]:
        for seg in self.segments():
            yield from seg.tolist()

    def to_array(self) -> np.ndarray:
        chunks = list(self.segments())
        return np.concatenate(chunks) if chunks else np.empty(0, dtype=np.int64)


def primes_up_to(bound: int, segment_size: int = DEFAULT_SEGMENT_SIZE, max_bound: int | None = None) -> PrimeStream:
    if max_bound is None:
        max_bound = SieveConfig.from_env().max_bound
    if bound > max_bound:
        raise ResourceLimitError(f"sieve bound {bound} exceeds configured maximum {max_bound}")
    return PrimeStream(bound, segment_size)


def pi(n: int) -> int:
    """Number of primes <= n."""
    if n < 2:
        return 0
    return sum(int(seg.size) for seg in primes_up_to(n).segments())


def prime_counts(n_max: int) -> np.ndarray:
    """Array ``c`` with ``c[x] = pi(x)`` for 0 <= x <= n_max."""
    flags = np.zeros(n_max + 1, dtype=np.int64)
    flags[primes_up_to(n_max).to_array()] = 1
    return np.cumsum(flags)


def pi_upper_bound(n: int) -> float:
    """Chebyshev-type upper bound 2 log 4 * n / log n + sqrt(n)."""
    if n < 2:
        raise ValueError(f"pi_upper_bound needs n >= 2, got {n}")
    return 2 * math.log(4) * n / math.log(n) + math.sqrt(n)


class CompensatedSum:
    """Neumaier-style compensated accumulator; deterministic for a fixed term order."""

    __slots__ = ("accumulator", "compensation")

    def __init__(self) -> None:
        self.accumulator = 0.0
        self.compensation = 0.0

    def add(self, x: float) -> None:
        s = self.accumulator
        t = s + x
        if abs(s) >= abs(x):
            self.compensation += (s - t) + x
        else:
            self.compensation += (x - t) + s
        self.accumulator = t

    @property
    def value(self) -> float:
        return self.accumulator + self.compensation


def chebyshev_interval_sum(n: int) -> float:
    """Sum of log p over primes with n < p < 2n."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    acc = CompensatedSum()
    for seg in primes_up_to(2 * n - 1).segments():
        for p in seg[seg > n].tolist():
            acc.add(math.log(p))
    return acc.value


def log_term(p: int) -> float:
    return math.log(p) / (p - 1)


def filtered_log_sum(bound: int, keep: Callable[[int], bool], strict: bool = False) -> float:
    """Sum of log p / (p - 1) over primes kept by ``keep``.

    Primes range over p <= bound, or p < bound when ``strict``. Terms are added
    in increasing p with compensated accumulation.
    """
    if bound < 1:
        raise ValueError(f"bound must be positive, got {bound}")
    top = bound - 1 if strict else bound
    acc = CompensatedSum()
    for p in primes_up_to(top):
        if keep(p):
            acc.add(log_term(p))
    return acc.value


def extended_log_sum(primes, digits: int = 40) -> Decimal:
    """High-precision sum of log p / (p - 1) over ``primes`` using Decimal arithmetic."""
    with localcontext() as ctx:
        ctx.prec = digits
        total = Decimal(0)
        for p in primes:
            total += Decimal(int(p)).ln() / (int(p) - 1)
        return +total
