"""Split-prime classification, the limiting constant, and the threshold search.

For odd l the primes p with (-2l/p) = +1 form the split set. The threshold
N_l is the first n at which the sum of log p / (p - 1) over primes outside
that set exceeds the limiting constant of the master inequality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from typing import Literal

import numpy as np

from .arith import factorize, isqrt, jacobi, padic_valuation
from .errors import PrecisionError, SearchLimitError
from .sieve import CompensatedSum, extended_log_sum, log_term, primes_up_to

__all__ = [
    "FactoredL",
    "ThresholdReport",
    "find_threshold",
    "gamma_lp",
    "in_S",
    "lam",
    "limit_value",
    "rhs_eq9",
    "rigor_margin",
    "split_mask",
]

Convention = Literal["strict-lt", "leq"]
CONVENTIONS = ("strict-lt", "leq")

PRECISION_MARGIN = 1e-9
DEFAULT_THRESHOLD_CAP = 10**8
# residue tables mod 8l are built only when they stay this small
_TABLE_LIMIT = 1 << 18


@dataclass(frozen=True)
class FactoredL:
    l: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.l < 1 or self.l % 2 == 0:
            raise ValueError(f"l must be a positive odd integer, got {self.l}")
        prod = 1
        for p, e in self.factors:
            prod *= p**e
        if prod != self.l:
            raise ValueError(f"factors {self.factors} do not multiply to {self.l}")

    @classmethod
    def of(cls, l: int) -> FactoredL:
        if l < 1 or l % 2 == 0:
            raise ValueError(f"l must be a positive odd integer, got {l}")
        return cls(l, () if l == 1 else factorize(l).factors)

    @property
    def r(self) -> int:
        return len(self.factors)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)


def as_factored(l: int | FactoredL) -> FactoredL:
    return l if isinstance(l, FactoredL) else FactoredL.of(l)


def in_S(l: int | FactoredL, p: int) -> bool:
    """True iff p is an odd prime with (-2l/p) = +1."""
    l = as_factored(l).l
    if p == 2:
        return False
    return jacobi(-2 * l, p) == 1


def split_mask(l: int | FactoredL, primes: np.ndarray) -> np.ndarray:
    """Vectorised :func:`in_S` over an array of primes.

    (-2l/m) is periodic in odd m with period 8l, so a residue table replaces
    per-prime symbol evaluation whenever 8l is small enough.
    """
    l = as_factored(l).l
    modulus = 8 * l
    if modulus <= _TABLE_LIMIT:
        table = np.zeros(modulus, dtype=bool)
        for r in range(1, modulus, 2):
            table[r] = jacobi(-2 * l, r) == 1
        return table[primes % modulus]
    return np.fromiter((in_S(l, int(p)) for p in primes), dtype=bool, count=len(primes))


def _limit_summand(p: float, e: int) -> float:
    return (
        (3 * p - 2 - p ** (-e)) / (p - 1) ** 2
        - (e + 3) / (p**e * (p - 1))
        + 4 / (p ** (e / 2) * (p - 1))
    )


def limit_value(l: int | FactoredL) -> float:
    """Limit of the right-hand side of the master inequality as n grows."""
    fl = as_factored(l)
    total = 10 * math.log(2)
    for p, e in fl.factors:
        total += 0.25 * _limit_summand(p, e) * math.log(p)
    return total


def _limit_value_decimal(fl: FactoredL, digits: int) -> Decimal:
    with localcontext() as ctx:
        ctx.prec = digits
        total = 10 * Decimal(2).ln()
        for p, e in fl.factors:
            P = Decimal(p)
            summand = (
                (3 * P - 2 - P ** (-e)) / (P - 1) ** 2
                - (e + 3) / (P**e * (P - 1))
                + 4 / (P ** (Decimal(e) / 2) * (P - 1))
            )
            total += summand * P.ln() / 4
        return +total


def lam(l: int | FactoredL, n: int) -> float:
    """Exponent log(2n^2 + l) / log n with P_{2,l}(n) > (n!)^lam."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    l = as_factored(l).l
    return math.log(2 * n * n + l) / math.log(n)


def gamma_lp(l: int | FactoredL, p: int, n: int) -> float:
    """Closed-form upper bound on the exponent of a prime p dividing l in P_{2,l}(n)."""
    fl = as_factored(l)
    if p not in fl.primes:
        raise ValueError(f"{p} does not divide l={fl.l}")
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    s, _ = padic_valuation(fl.l, p)
    big = 2 * n * n + fl.l
    half = p ** (s / 2)
    return (
        n / 2 * ((3 * p - 2 - p ** (-s)) / (p - 1) ** 2 - (s + 3) / (p**s * (p - 1)) + 4 / (half * (p - 1)))
        - 2 * n * half / ((p - 1) * big)
        + s * (s + 5) / 4
        + 2 * half * (math.log(big) / math.log(p) - s)
    )


def rhs_eq9(l: int | FactoredL, n: int) -> float:
    """Finite-n right-hand side of the master inequality."""
    fl = as_factored(l)
    if n < 2 or 2 * n * n <= fl.l:
        raise ValueError(f"need n >= 2 and n > sqrt(l/2); got n={n}, l={fl.l}")
    log_big = math.log(2 * n * n + fl.l)
    log4 = math.log(4)
    head = log_big / (n - 1) * (2 * log4 * n / math.log(n) + math.sqrt(n))
    middle = sum(gamma_lp(fl, p, n) * math.log(p) / (n - 1) for p in fl.primes)
    return head + math.log(n) / log_big * middle + n * log4 / (n - 1)


@dataclass(frozen=True)
class ThresholdReport:
    l: FactoredL
    limit: float
    threshold: int
    sum_at_threshold: float
    sum_before: float
    crossing_prime: int
    convention: str
    rigor_margin: float
    precision_flag: bool

    def summary(self) -> str:
        rel = "<" if self.convention == "strict-lt" else "<="
        return (
            f"l={self.l.l}: N_l = {self.threshold} (sum over p {rel} n, p not split)\n"
            f"  limit          = {self.limit:.9f}\n"
            f"  crossing prime = {self.crossing_prime}\n"
            f"  sum at N_l     = {self.sum_at_threshold:.12f}\n"
            f"  sum before     = {self.sum_before:.12f}\n"
            f"  rigor margin   = {self.rigor_margin:+.6f} (sum minus finite-n bound at N_l)\n"
            f"  precision flag = {self.precision_flag}"
        )


def _scan_start(l: int) -> int:
    return max(2, isqrt(l // 2) + 1)


def _nonsplit_primes(fl: FactoredL, top: int) -> list[int]:
    out: list[int] = []
    for seg in primes_up_to(top).segments():
        out.extend(seg[~split_mask(fl, seg)].tolist())
    return out


def nonsplit_sum(l: int | FactoredL, n: int, convention: Convention = "strict-lt") -> float:
    """Sum of log p/(p-1) over non-split primes p < n (strict-lt) or p <= n (leq)."""
    fl = as_factored(l)
    top = n - 1 if convention == "strict-lt" else n
    acc = CompensatedSum()
    for p in _nonsplit_primes(fl, top):
        acc.add(log_term(p))
    return acc.value


def rigor_margin(l: int | FactoredL, n: int, convention: Convention = "strict-lt") -> float:
    """Left side minus finite-n right side of the master inequality at n."""
    fl = as_factored(l)
    return nonsplit_sum(fl, n, convention) - rhs_eq9(fl, n)


def _recheck(fl: FactoredL, crossing: int, digits: int = 40) -> None:
    primes = _nonsplit_primes(fl, crossing)
    total = extended_log_sum(primes, digits)
    before = extended_log_sum(primes[:-1], digits)
    limit = _limit_value_decimal(fl, digits)
    resolution = Decimal(10) ** (10 - digits)
    if not (total - limit > resolution and limit - before >= resolution):
        raise PrecisionError(
            f"crossing at p={crossing} for l={fl.l} is ambiguous even at {digits} digits"
        )


def find_threshold(
    l: int | FactoredL,
    convention: Convention = "strict-lt",
    cap: int = DEFAULT_THRESHOLD_CAP,
) -> ThresholdReport:
    """Smallest n whose non-split prime sum exceeds :func:`limit_value`.

    Under ``strict-lt`` primes p < n count, so n is the crossing prime plus one;
    under ``leq`` n is the crossing prime itself.
    """
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    fl = as_factored(l)
    limit = limit_value(fl)
    acc = CompensatedSum()
    crossing = None
    before = 0.0
    for seg in primes_up_to(cap).segments():
        for p in seg[~split_mask(fl, seg)].tolist():
            before = acc.value
            acc.add(log_term(p))
            if acc.value > limit:
                crossing = p
                break
        if crossing is not None:
            break
    if crossing is None:
        raise SearchLimitError(f"no threshold crossing for l={fl.l} below cap {cap}")

    total = acc.value
    flagged = min(total - limit, limit - before) < PRECISION_MARGIN
    if flagged:
        _recheck(fl, crossing)
    n = crossing + 1 if convention == "strict-lt" else crossing
    if n < _scan_start(fl.l):
        # only reachable for very large l: the search may not start below sqrt(l/2)
        n = _scan_start(fl.l)
        total = nonsplit_sum(fl, n, convention)
    return ThresholdReport(
        l=fl,
        limit=limit,
        threshold=n,
        sum_at_threshold=total,
        sum_before=before,
        crossing_prime=crossing,
        convention=convention,
        rigor_margin=total - rhs_eq9(fl, n),
        precision_flag=flagged,
    )
