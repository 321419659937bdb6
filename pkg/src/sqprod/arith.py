"""Exact integer primitives: Jacobi symbol, 64-bit primality, isqrt, factoring."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

__all__ = [
    "Factorization",
    "factorize",
    "is_prime",
    "isqrt",
    "jacobi",
    "padic_valuation",
]

UINT64_MAX = (1 << 64) - 1

# Deterministic for every n < 3.3e24, which contains the 64-bit range.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)

DEFAULT_TRIAL_BOUND = 1024


def jacobi(a: int, m: int) -> int:
    """Jacobi symbol (a/m) for odd m >= 1; returns -1, 0 or +1.

    ``a`` may be negative; it is reduced into [0, m) first.
    """
    if m < 1 or m % 2 == 0:
        raise ValueError(f"Jacobi modulus must be odd and positive, got {m}")
    a %= m
    result = 1
    while a:
        # strip factors of two: (2/m) = -1 iff m = 3, 5 (mod 8)
        twos = (a & -a).bit_length() - 1
        a >>= twos
        if twos & 1 and m & 7 in (3, 5):
            result = -result
        # reciprocity flip
        if a & 3 == 3 and m & 3 == 3:
            result = -result
        a, m = m % a, a
    return result if m == 1 else 0


def is_prime(n: int) -> bool:
    """Deterministic primality for 0 <= n <= 2**64 - 1."""
    if n > UINT64_MAX:
        raise ValueError(f"is_prime is only certified below 2**64, got {n}")
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    if n < 53 * 53:
        return True
    d = n - 1
    r = (d & -d).bit_length() - 1
    d >>= r
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def isqrt(n: int) -> int:
    """Exact floor of the square root of a nonnegative integer."""
    return math.isqrt(n)


@dataclass(frozen=True)
class Factorization:
    """Prime factorization with strictly increasing primes."""

    factors: tuple[tuple[int, int], ...]

    def value(self) -> int:
        out = 1
        for p, e in self.factors:
            out *= p**e
        return out

    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def __iter__(self):
        return iter(self.factors)

    def __len__(self) -> int:
        return len(self.factors)


def _trial_primes(bound: int) -> list[int]:
    if bound < 2:
        return []
    flags = bytearray([1]) * (bound + 1)
    flags[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(bound) + 1):
        if flags[i]:
            flags[i * i :: i] = bytearray(len(range(i * i, bound + 1, i)))
    return [i for i, f in enumerate(flags) if f]


_trial_cache: dict[int, list[int]] = {}


def _primes_for_trial(bound: int) -> list[int]:
    primes = _trial_cache.get(bound)
    if primes is None:
        primes = _trial_cache[bound] = _trial_primes(bound)
    return primes


def _brent_split(n: int, rng: random.Random) -> int:
    """Return a nontrivial factor of the odd composite n (Pollard rho, Brent variant)."""
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r <<= 1
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factorize(n: int, trial_bound: int = DEFAULT_TRIAL_BOUND, seed: int = 0) -> Factorization:
    """Factor n >= 2 exactly.

    Trial division by primes up to ``trial_bound``, then Brent's rho on the
    cofactor. Every emitted factor is certified with :func:`is_prime`, so the
    answer is exact even though rho's running time depends on ``seed``.
    """
    if n < 2:
        raise ValueError(f"factorize needs n >= 2, got {n}")
    counts: dict[int, int] = {}
    for p in _primes_for_trial(trial_bound):
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            counts[p] = e
    if n > 1:
        if n <= trial_bound * trial_bound:
            counts[n] = counts.get(n, 0) + 1
        else:
            rng = random.Random(seed)
            stack = [n]
            while stack:
                m = stack.pop()
                if is_prime(m):
                    counts[m] = counts.get(m, 0) + 1
                    continue
                d = _brent_split(m, rng)
                stack.extend((d, m // d))
    return Factorization(tuple(sorted(counts.items())))


def padic_valuation(l: int, p: int) -> tuple[int, int]:
    """Split ``l = p**s * cofactor`` with p not dividing cofactor; returns (s, cofactor)."""
    if p < 2:
        raise ValueError(f"p must be prime, got {p}")
    if l < 1:
        raise ValueError(f"l must be positive, got {l}")
    s = 0
    while l % p == 0:
        l //= p
        s += 1
    return s, l
