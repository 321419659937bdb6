"""End-to-end decision for one l: threshold, direct check, covering chain, certificate."""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .directcheck import DEFAULT_DIRECT_CAP, find_squares
from .errors import ChainGapError, ResourceLimitError, SqprodError
from .sieve import DEFAULT_MAX_BOUND
from .threshold import CONVENTIONS, DEFAULT_THRESHOLD_CAP, ThresholdReport, find_threshold
from .witness import DEFAULT_STEP_CAP, CoverageChain, Witness, build_chain, chain_failure, first_witness_k

__all__ = [
    "Certificate",
    "CertificateMismatch",
    "RunConfig",
    "StageError",
    "check_certificate",
    "run_check_certificate",
    "run_verify",
]

FLOAT_RTOL = 1e-12


class StageError(SqprodError):
    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        self.cause = cause
        super().__init__(f"[{stage}] {cause}")


class CertificateMismatch(SqprodError):
    """A certificate field disagrees with its recomputation."""


def _env_int(name: str, default: int) -> int:
    return int(os.environ.get(name, default))


@dataclass(frozen=True)
class RunConfig:
    l: int
    convention: str = "strict-lt"
    threshold_cap: int = DEFAULT_THRESHOLD_CAP
    direct_cap: int = DEFAULT_DIRECT_CAP
    chain_step_cap: int = DEFAULT_STEP_CAP
    sieve_bound: int = DEFAULT_MAX_BOUND
    output_path: Path | None = None
    format: str = "text"

    def __post_init__(self):
        if self.l < 1 or self.l % 2 == 0:
            raise ValueError(f"l must be a positive odd integer, got {self.l}")
        if self.convention not in CONVENTIONS:
            raise ValueError(f"convention must be one of {CONVENTIONS}")
        for name in ("threshold_cap", "direct_cap", "chain_step_cap", "sieve_bound"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.format not in ("text", "json"):
            raise ValueError("format must be 'text' or 'json'")

    @classmethod
    def from_env(cls, l: int, **overrides: Any) -> RunConfig:
        values = dict(
            threshold_cap=_env_int("SQPROD_THRESHOLD_CAP", DEFAULT_THRESHOLD_CAP),
            direct_cap=_env_int("SQPROD_DIRECT_CAP", DEFAULT_DIRECT_CAP),
            chain_step_cap=_env_int("SQPROD_CHAIN_STEP_CAP", DEFAULT_STEP_CAP),
            sieve_bound=_env_int("SQPROD_SIEVE_BOUND", DEFAULT_MAX_BOUND),
        )
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(l=l, **values)


@dataclass(frozen=True)
class Certificate:
    l: int
    threshold: ThresholdReport
    direct_range: tuple[int, int]
    direct_squares: tuple[int, ...]
    chain: CoverageChain
    complete: bool

    @property
    def squares(self) -> tuple[int, ...]:
        return self.direct_squares

    def to_json(self) -> dict[str, Any]:
        t = self.threshold
        return {
            "l": self.l,
            "threshold": {
                "limit": t.limit,
                "value": t.threshold,
                "convention": t.convention,
                "crossing_prime": t.crossing_prime,
                "sum": t.sum_at_threshold,
                "rigor_margin": t.rigor_margin,
                "precision_flag": t.precision_flag,
            },
            "direct": {"range": list(self.direct_range), "squares": list(self.direct_squares)},
            "chain": [{"k": w.k, "q": w.q, "cover": [w.cover_start, w.cover_end]} for w in self.chain.witnesses],
            "conclusion": {"squares": list(self.direct_squares), "complete": self.complete},
        }

    def dumps(self) -> str:
        # json writes floats with repr(), the shortest string that round-trips exactly
        return json.dumps(self.to_json(), indent=2) + "\n"

    def report(self) -> str:
        t = self.threshold
        lines = [t.summary(), "", f"Direct check for 1 <= n <= {self.direct_range[1]}:"]
        lines.append(f"  squares found: {list(self.direct_squares) or 'none'}")
        lines.append("")
        if self.chain.witnesses:
            lines.append(f"Witness chain up to N_l - 1 = {t.threshold - 1}:")
            lines.extend(f"  - {w.describe()}" for w in self.chain.witnesses)
        else:
            lines.append("Witness chain: none")
        lines.append("")
        if self.complete:
            if self.direct_squares:
                lines.append(f"Conclusion: P_(2,{self.l})(n) is a square only for n in {list(self.direct_squares)}.")
            else:
                lines.append(f"Conclusion: P_(2,{self.l})(n) is not a square for any n >= 1.")
        else:
            lines.append("Conclusion: INCOMPLETE, the direct range and chain do not cover [1, N_l - 1].")
        return "\n".join(lines) + "\n"


def _covers(direct_range: tuple[int, int], chain: CoverageChain, l: int, n_max: int) -> bool:
    d = direct_range[1]
    if direct_range[0] != 1:
        return False
    if d >= n_max:
        return True
    if not chain.witnesses:
        return False
    start = chain.witnesses[0].k
    return start <= d + 1 and chain_failure(chain, l, start, n_max) is None


def _chain_after_direct(l: int, start: int, d: int, n_max: int, step_cap: int) -> CoverageChain:
    """Chain over [start, n_max], restarting past any n no witness can cover.

    A gap at n = r is harmless while r <= d, since the direct check handles it.
    """
    if d >= n_max:
        return CoverageChain(l, ())
    while start <= d + 1:
        try:
            return build_chain(l, start, n_max, step_cap)
        except ChainGapError as gap:
            start = gap.start + 1
    return CoverageChain(l, ())


def run_verify(config: RunConfig) -> Certificate:
    l = config.l
    if config.threshold_cap > config.sieve_bound:
        raise StageError("threshold", ResourceLimitError(
            f"threshold cap {config.threshold_cap} exceeds sieve bound {config.sieve_bound}"))
    try:
        report = find_threshold(l, config.convention, config.threshold_cap)
    except Exception as exc:
        raise StageError("threshold", exc) from exc
    n_max = report.threshold - 1

    try:
        chain_start = first_witness_k(l, config.chain_step_cap)
    except Exception as exc:
        raise StageError("chain", exc) from exc
    d = max(config.direct_cap, chain_start)
    try:
        squares = find_squares(l, d, cap=d)
    except Exception as exc:
        raise StageError("direct", exc) from exc

    try:
        chain = _chain_after_direct(l, chain_start, d, n_max, config.chain_step_cap)
    except Exception as exc:
        raise StageError("chain", exc) from exc

    complete = _covers((1, d), chain, l, n_max)
    if complete:
        lo, hi = chain.covered if chain.witnesses else (d + 1, d)
        clash = [n for n in squares if lo <= n <= hi]
        if clash:
            raise StageError("verify", SqprodError(f"direct squares {clash} lie inside witness cover"))
    return Certificate(l, report, (1, d), tuple(squares), chain, complete)


def _close(a: float, b: float) -> bool:
    return math.isclose(a, b, rel_tol=FLOAT_RTOL, abs_tol=FLOAT_RTOL)


def check_certificate(data: dict[str, Any], direct_cap: int | None = None) -> bool:
    """Recompute every part of a parsed certificate; raise CertificateMismatch on the first divergence.

    Returns the recomputed completeness flag.
    """
    try:
        l = int(data["l"])
        th = data["threshold"]
        direct = data["direct"]
        links = data["chain"]
        conclusion = data["conclusion"]
        convention = th["convention"]
    except (KeyError, TypeError, ValueError) as exc:
        raise CertificateMismatch(f"malformed certificate: {exc!r}") from exc
    if l < 1 or l % 2 == 0:
        raise CertificateMismatch(f"l={l} is not a positive odd integer")
    if convention not in CONVENTIONS:
        raise CertificateMismatch(f"unknown convention {convention!r}")

    report = find_threshold(l, convention, max(DEFAULT_THRESHOLD_CAP, int(th["value"])))
    if int(th["value"]) != report.threshold:
        raise CertificateMismatch(f"threshold.value {th['value']} != recomputed {report.threshold}")
    if int(th["crossing_prime"]) != report.crossing_prime:
        raise CertificateMismatch(
            f"threshold.crossing_prime {th['crossing_prime']} != recomputed {report.crossing_prime}")
    for key, value in (("limit", report.limit), ("sum", report.sum_at_threshold),
                       ("rigor_margin", report.rigor_margin)):
        if not _close(float(th[key]), value):
            raise CertificateMismatch(f"threshold.{key} {th[key]} != recomputed {value}")

    lo, d = (int(x) for x in direct["range"])
    if lo != 1 or d < 1:
        raise CertificateMismatch(f"direct.range must be [1, d], got {direct['range']}")
    cap = max(DEFAULT_DIRECT_CAP, d) if direct_cap is None else direct_cap
    squares = find_squares(l, d, cap=cap)
    if [int(n) for n in direct["squares"]] != squares:
        raise CertificateMismatch(f"direct.squares {direct['squares']} != recomputed {squares}")

    witnesses = []
    for i, link in enumerate(links):
        w = Witness(l, int(link["k"]), int(link["q"]))
        if [int(x) for x in link["cover"]] != [w.cover_start, w.cover_end]:
            raise CertificateMismatch(f"chain[{i}].cover {link['cover']} != [{w.cover_start}, {w.cover_end}]")
        witnesses.append(w)
    chain = CoverageChain(l, tuple(witnesses))
    n_max = report.threshold - 1
    if witnesses and d < n_max:
        problem = chain_failure(chain, l, witnesses[0].k, n_max)
        if problem:
            raise CertificateMismatch(f"chain: {problem}")

    complete = _covers((1, d), chain, l, n_max)
    if bool(conclusion["complete"]) != complete:
        raise CertificateMismatch(f"conclusion.complete {conclusion['complete']} != recomputed {complete}")
    if [int(n) for n in conclusion["squares"]] != squares:
        raise CertificateMismatch(f"conclusion.squares {conclusion['squares']} != direct squares {squares}")
    return complete


def run_check_certificate(path: str | Path) -> bool:
    """Re-verify the certificate stored at ``path``; True iff every field reproduces."""
    try:
        data = json.loads(Path(path).read_text())
        check_certificate(data)
    except (CertificateMismatch, json.JSONDecodeError):
        return False
    return True
