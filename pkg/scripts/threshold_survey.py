"""Tabulate N_l, the limit constant and the rigor margin for a range of odd l."""

import argparse
from dataclasses import dataclass

from sqprod.threshold import find_threshold


@dataclass
class Config:
    l_max: int = 51
    convention: str = "strict-lt"


def main(cfg: Config) -> None:
    print(f"{'l':>4} {'factors':>14} {'limit':>10} {'N_l':>10} {'rigor margin':>13}")
    for l in range(1, cfg.l_max + 1, 2):
        r = find_threshold(l, cfg.convention)
        factors = "*".join(f"{p}^{e}" if e > 1 else str(p) for p, e in r.l.factors) or "1"
        print(f"{l:>4} {factors:>14} {r.limit:>10.6f} {r.threshold:>10} {r.rigor_margin:>+13.6f}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--l-max", type=int, default=Config.l_max)
    ap.add_argument("--convention", choices=("strict-lt", "leq"), default=Config.convention)
    args = ap.parse_args()
    main(Config(args.l_max, args.convention))
