"""Run the full pipeline for l = 1, 3, 7 and write one certificate per l."""

import argparse
import time
from dataclasses import dataclass
from pathlib import Path

from sqprod.pipeline import RunConfig, run_check_certificate, run_verify


@dataclass
class Config:
    ls: tuple[int, ...] = (1, 3, 7)
    out_dir: Path = Path("certificates")


def main(cfg: Config) -> None:
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    print(f"{'l':>3} {'N_l':>9} {'squares':>8} {'chain':>6} {'complete':>8} {'checked':>7} {'secs':>6}")
    for l in cfg.ls:
        t0 = time.perf_counter()
        cert = run_verify(RunConfig.from_env(l))
        path = cfg.out_dir / f"l{l}.json"
        path.write_text(cert.dumps())
        ok = run_check_certificate(path)
        secs = time.perf_counter() - t0
        print(f"{l:>3} {cert.threshold.threshold:>9} {str(list(cert.squares)):>8} {len(cert.chain):>6} "
              f"{str(cert.complete):>8} {str(ok):>7} {secs:>6.2f}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--l", dest="ls", type=int, nargs="+", default=list(Config.ls))
    ap.add_argument("--out-dir", type=Path, default=Config.out_dir)
    args = ap.parse_args()
    main(Config(tuple(args.ls), args.out_dir))
