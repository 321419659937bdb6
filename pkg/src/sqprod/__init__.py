"""Decide when prod_{k=1}^n (2k^2 + l) is a perfect square, for odd l."""

from .arith import factorize, is_prime, isqrt, jacobi, padic_valuation
from .directcheck import ParityState, bigint_square_oracle, find_squares, parity_step
from .pipeline import Certificate, RunConfig, run_check_certificate, run_verify
from .sieve import (
    CompensatedSum,
    PrimeStream,
    chebyshev_interval_sum,
    filtered_log_sum,
    pi,
    pi_upper_bound,
    primes_up_to,
)
from .threshold import FactoredL, ThresholdReport, find_threshold, gamma_lp, in_S, lam, limit_value, rhs_eq9
from .witness import CoverageChain, Witness, build_chain, make_witness, verify_chain

__version__ = "0.1.0"
