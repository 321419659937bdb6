"""Exact squareness of P_{2,l}(n) for small n via prime-exponent parity."""

from __future__ import annotations

import os
from dataclasses import dataclass

from .arith import factorize, isqrt
from .errors import ResourceLimitError

__all__ = [
    "DEFAULT_DIRECT_CAP",
    "ParityState",
    "bigint_square_oracle",
    "find_squares",
    "parity_step",
    "term_odd_primes",
]

DEFAULT_DIRECT_CAP = 10**4


@dataclass(frozen=True)
class ParityState:
    """Primes appearing to an odd power in prod_{k<=n} (2k^2 + l)."""

    l: int
    n: int = 0
    odd_exponent_primes: frozenset[int] = frozenset()

    @property
    def is_square(self) -> bool:
        return not self.odd_exponent_primes

    def kernel(self) -> int:
        """Squarefree kernel of the running product."""
        out = 1
        for p in self.odd_exponent_primes:
            out *= p
        return out


def term_odd_primes(l: int, k: int) -> set[int]:
    """Primes dividing 2k^2 + l to an odd power."""
    return {p for p, e in factorize(2 * k * k + l) if e & 1}


def parity_step(state: ParityState) -> ParityState:
    k = state.n + 1
    return ParityState(state.l, k, state.odd_exponent_primes ^ term_odd_primes(state.l, k))


def _direct_cap() -> int:
    return int(os.environ.get("SQPROD_DIRECT_CAP", DEFAULT_DIRECT_CAP))


def find_squares(l: int, up_to: int, include_zero: bool = False, cap: int | None = None) -> list[int]:
    """All n <= up_to (n >= 1 unless ``include_zero``) with P_{2,l}(n) a perfect square."""
    if l < 1 or l % 2 == 0:
        raise ValueError(f"l must be a positive odd integer, got {l}")
    cap = _direct_cap() if cap is None else cap
    if up_to > cap:
        raise ResourceLimitError(f"direct check up to {up_to} exceeds cap {cap}")
    found = [0] if include_zero else []
    odd: set[int] = set()
    for k in range(1, up_to + 1):
        odd ^= term_odd_primes(l, k)
        if not odd:
            found.append(k)
    return found


def bigint_square_oracle(l: int, n: int) -> bool:
    """Multiply out P_{2,l}(n) exactly and test it with an integer square root."""
    prod = 1
    for k in range(1, n + 1):
        prod *= 2 * k * k + l
    r = isqrt(prod)
    return r * r == prod
