"""Command-line front end: ``sqprod {threshold,chain,direct,symbol,verify,check}``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .arith import is_prime, jacobi
from .directcheck import find_squares
from .errors import SqprodError
from .pipeline import CertificateMismatch, RunConfig, check_certificate, run_verify
from .threshold import CONVENTIONS, find_threshold, in_S
from .witness import build_chain

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INCOMPLETE = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _odd_l(text: str) -> int:
    l = int(text)
    if l < 1 or l % 2 == 0:
        raise argparse.ArgumentTypeError(f"l must be a positive odd integer, got {text}")
    return l


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sqprod", description="Decide when prod_{k<=n} (2k^2+l) is a perfect square.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("threshold", help="compute the threshold N_l")
    p.add_argument("--l", type=_odd_l, required=True)
    p.add_argument("--convention", choices=CONVENTIONS, default="strict-lt")
    p.add_argument("--cap", type=int, default=None)

    p = sub.add_parser("chain", help="build a witness chain covering [from, to]")
    p.add_argument("--l", type=_odd_l, required=True)
    p.add_argument("--from", dest="start", type=int, required=True)
    p.add_argument("--to", dest="end", type=int, required=True)
    p.add_argument("--step-cap", type=int, default=None)

    p = sub.add_parser("direct", help="list n <= D with a square product")
    p.add_argument("--l", type=_odd_l, required=True)
    p.add_argument("--up-to", type=int, required=True)

    p = sub.add_parser("symbol", help="show (-2l/p) and split-set membership")
    p.add_argument("--l", type=_odd_l, required=True)
    p.add_argument("--p", type=int, required=True)

    p = sub.add_parser("verify", help="run the full pipeline and emit a certificate")
    p.add_argument("--l", type=_odd_l, required=True)
    p.add_argument("--json", dest="json_path", type=Path, default=None, help="write the certificate here")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--convention", choices=CONVENTIONS, default="strict-lt")
    p.add_argument("--threshold-cap", type=int, default=None)
    p.add_argument("--direct-cap", type=int, default=None)
    p.add_argument("--chain-step-cap", type=int, default=None)
    p.add_argument("--sieve-bound", type=int, default=None)

    p = sub.add_parser("check", help="independently re-verify a certificate file")
    p.add_argument("path", type=Path)
    return parser


def _cmd_threshold(args) -> int:
    kwargs = {} if args.cap is None else {"cap": args.cap}
    report = find_threshold(args.l, args.convention, **kwargs)
    print(report.summary())
    return EXIT_OK


def _cmd_chain(args) -> int:
    if args.start < 1 or args.start > args.end:
        print("error: need 1 <= --from <= --to", file=sys.stderr)
        return EXIT_ERROR
    kwargs = {} if args.step_cap is None else {"step_cap": args.step_cap}
    chain = build_chain(args.l, args.start, args.end, **kwargs)
    lo, hi = chain.covered
    print(f"chain for l={args.l} covering [{lo}, {hi}] with {len(chain)} witnesses:")
    for w in chain.witnesses:
        print(f"  k={w.k} q={w.q} cover=[{w.cover_start}, {w.cover_end}]")
    return EXIT_OK


def _cmd_direct(args) -> int:
    print(find_squares(args.l, args.up_to))
    return EXIT_OK


def _cmd_symbol(args) -> int:
    if not is_prime(args.p):
        print(f"error: p={args.p} is not prime", file=sys.stderr)
        return EXIT_ERROR
    sym = jacobi(-2 * args.l, args.p) if args.p != 2 else 0
    member = in_S(args.l, args.p)
    print(f"(-2*{args.l}/{args.p}) = {sym:+d}" if sym else f"(-2*{args.l}/{args.p}) = 0")
    print(f"p={args.p} is {'in S' if member else 'not in S'}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    config = RunConfig.from_env(
        args.l,
        convention=args.convention,
        threshold_cap=args.threshold_cap,
        direct_cap=args.direct_cap,
        chain_step_cap=args.chain_step_cap,
        sieve_bound=args.sieve_bound,
        output_path=args.json_path,
        format=args.format,
    )
    cert = run_verify(config)
    if config.output_path is not None:
        config.output_path.write_text(cert.dumps())
    sys.stdout.write(cert.dumps() if config.format == "json" else cert.report())
    return EXIT_OK if cert.complete else EXIT_INCOMPLETE


def _cmd_check(args) -> int:
    try:
        data = json.loads(args.path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read certificate: {exc}", file=sys.stderr)
        return EXIT_ERROR
    try:
        complete = check_certificate(data)
    except CertificateMismatch as exc:
        print(f"certificate REJECTED: {exc}")
        return EXIT_ERROR
    print(f"certificate OK (complete={complete})")
    return EXIT_OK if complete else EXIT_INCOMPLETE


COMMANDS = {
    "threshold": _cmd_threshold,
    "chain": _cmd_chain,
    "direct": _cmd_direct,
    "symbol": _cmd_symbol,
    "verify": _cmd_verify,
    "check": _cmd_check,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (SqprodError, ValueError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
