"""Search for non-Olson prime powers p^n <= B with p >= 7.

    python3 scripts/prime_power_scan.py --bound 1e9 --threads 4
"""

from __future__ import annotations

import sys
from dataclasses import dataclass

from _common import parse_config, pool, timed, write_csv
from cmtorsion.olson import prime_power_scan


@dataclass(frozen=True)
class Config:
    """Prime-power scan; an empty hit list means every p^n <= bound is Olson."""
    bound: int = 10**8
    threads: int = 1
    skip_even: bool = True
    out: str = ""


def main(cfg: Config) -> list:
    def progress(done, total):
        print(f"\r{done}/{total}", end="", file=sys.stderr)

    with pool(cfg.threads) as ex, timed(f"scan {cfg.bound}"):
        hits = prime_power_scan(cfg.bound, skip_even=cfg.skip_even, executor=ex,
                                progress=progress)
    print(file=sys.stderr)
    print(f"bound {cfg.bound}: {len(hits)} non-Olson prime powers")
    for h in hits:
        print(f"  {h.p}^{h.n}: r={h.r} l={h.ell} h={h.h}")
    write_csv(cfg.out, [vars(h) for h in hits])
    return hits


if __name__ == "__main__":
    main(parse_config(Config))
