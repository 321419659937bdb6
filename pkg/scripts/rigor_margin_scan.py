"""Compare the non-split prime sum with the finite-n bound at chosen checkpoints.

The threshold is located against the limiting constant; at finite n the bound
is larger, so the margin at N_l is negative. This scan shows where it turns.
"""

import argparse
from dataclasses import dataclass, field

from sqprod.threshold import find_threshold, limit_value, nonsplit_sum, rhs_eq9


@dataclass
class Config:
    l: int = 1
    checkpoints: list[int] = field(default_factory=lambda: [10**5, 10**6, 3 * 10**6, 10**7, 3 * 10**7])


def main(cfg: Config) -> None:
    report = find_threshold(cfg.l)
    print(f"l={cfg.l}  limit={limit_value(cfg.l):.9f}  N_l={report.threshold}  margin at N_l={report.rigor_margin:+.6f}")
    print(f"{'n':>10} {'sum':>12} {'bound':>12} {'margin':>10}")
    for n in sorted(cfg.checkpoints):
        s = nonsplit_sum(cfg.l, n)
        b = rhs_eq9(cfg.l, n)
        print(f"{n:>10} {s:>12.6f} {b:>12.6f} {s - b:>+10.6f}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--l", type=int, default=Config.l)
    ap.add_argument("--checkpoints", type=int, nargs="+", default=None)
    args = ap.parse_args()
    cfg = Config(args.l) if args.checkpoints is None else Config(args.l, args.checkpoints)
    main(cfg)
