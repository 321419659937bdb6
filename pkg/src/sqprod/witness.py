"""Witness primes q = 2k^2 + l and the covering chains built from them.

If q = 2k^2 + l is prime, the only solutions of 2x^2 = -l (mod q) in [0, q)
are k and q - k, so q divides exactly one term of P_{2,l}(n), to the first
power, for every n in [k, q - k - 1]. Such n give a non-square product.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arith import UINT64_MAX, is_prime
from .errors import ChainGapError, NotPrimeError

__all__ = [
    "CoverageChain",
    "Witness",
    "build_chain",
    "chain_failure",
    "first_witness_k",
    "make_witness",
    "verify_chain",
]

DEFAULT_STEP_CAP = 10**6


@dataclass(frozen=True)
class Witness:
    l: int
    k: int
    q: int

    @property
    def cover_start(self) -> int:
        return self.k

    @property
    def cover_end(self) -> int:
        return self.q - self.k - 1

    def describe(self) -> str:
        return (
            f"since 2*{self.k}^2+{self.l} = {self.q} is prime and the next k > {self.k} "
            f"with {self.q} | 2k^2+{self.l} is k = {self.q - self.k}, "
            f"P(n) is not a square for {self.cover_start} <= n <= {self.cover_end}"
        )


def _check_l(l: int) -> None:
    if l < 1 or l % 2 == 0:
        raise ValueError(f"l must be a positive odd integer, got {l}")


def make_witness(l: int, k: int) -> Witness:
    _check_l(l)
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    q = 2 * k * k + l
    if q > UINT64_MAX:
        raise OverflowError(f"2*{k}^2+{l} = {q} exceeds the 64-bit range")
    if not is_prime(q):
        raise NotPrimeError(q, f"2*{k}^2+{l} = {q} is not prime")
    return Witness(l, k, q)


@dataclass(frozen=True)
class CoverageChain:
    l: int
    witnesses: tuple[Witness, ...]

    @property
    def covered(self) -> tuple[int, int]:
        """(n_lo, n_hi): first witness k and the furthest cover end."""
        if not self.witnesses:
            raise ValueError("empty chain covers nothing")
        return self.witnesses[0].k, max(w.cover_end for w in self.witnesses)

    def __len__(self) -> int:
        return len(self.witnesses)


def _largest_prime_k(l: int, top: int, step_cap: int) -> int | None:
    k = top
    for _ in range(step_cap):
        if k < 1:
            return None
        if is_prime(2 * k * k + l):
            return k
        k -= 1
    return None


def first_witness_k(l: int, limit: int = DEFAULT_STEP_CAP) -> int:
    """Smallest k >= 1 with 2k^2 + l prime."""
    _check_l(l)
    for k in range(1, limit + 1):
        if is_prime(2 * k * k + l):
            return k
    raise ChainGapError(1, limit, f"no k <= {limit} makes 2k^2+{l} prime")


def build_chain(l: int, start: int, end: int, step_cap: int = DEFAULT_STEP_CAP) -> CoverageChain:
    """Greedy chain covering [start, end].

    Each step takes the largest k <= (current cover end + 1) with 2k^2 + l
    prime, scanning at most ``step_cap`` candidates downward.
    """
    _check_l(l)
    if start < 1 or start > end:
        raise ValueError(f"need 1 <= start <= end, got [{start}, {end}]")
    witnesses: list[Witness] = []
    reach = start - 1
    while reach < end:
        k = _largest_prime_k(l, reach + 1, step_cap)
        if k is None or (witnesses and k <= witnesses[-1].k):
            raise ChainGapError(reach + 1, end)
        w = make_witness(l, k)
        witnesses.append(w)
        reach = max(reach, w.cover_end)
    return CoverageChain(l, tuple(witnesses))


def chain_failure(chain: CoverageChain, l: int, start: int, end: int) -> str | None:
    """First reason ``chain`` fails to certify [start, end], or None if it is valid."""
    if not chain.witnesses:
        return "empty chain"
    if chain.l != l:
        return f"chain is for l={chain.l}, expected l={l}"
    prev_k = 0
    reach = None
    for i, w in enumerate(chain.witnesses):
        if w.l != l:
            return f"witness {i} is for l={w.l}"
        if w.k <= prev_k:
            return f"witness {i} (k={w.k}) is not sorted by k"
        q = 2 * w.k * w.k + l
        if w.q != q:
            return f"witness {i}: q={w.q} but 2*{w.k}^2+{l} = {q}"
        if q > UINT64_MAX or not is_prime(q):
            return f"witness {i}: q={q} is not prime"
        if reach is None:
            if w.k > start:
                return f"first witness k={w.k} starts after {start}"
            reach = w.cover_end
        else:
            if w.k > reach + 1:
                return f"gap: witness {i} starts at k={w.k} but cover ends at {reach}"
            reach = max(reach, w.cover_end)
        prev_k = w.k
    if reach < end:
        return f"cover ends at {reach}, short of {end}"
    return None


def verify_chain(chain: CoverageChain, l: int, start: int, end: int) -> bool:
    return chain_failure(chain, l, start, end) is None
