"""Average of the certified lower bound for T_CM(d) over d <= x.

    python3 scripts/tcm_average.py --x 1e6 --odd-only
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from _common import parse_config, timed, write_csv
from cmtorsion.tcm import avg_experiment


@dataclass(frozen=True)
class Config:
    """Mean lower bound at dyadic checkpoints and the fitted log-log slope."""
    x: int = 10**6
    odd_only: bool = False
    out: str = ""


def main(cfg: Config):
    with timed(f"avg {cfg.x}"):
        s = avg_experiment(cfg.x, odd_only=cfg.odd_only)
    rows = [{"checkpoint": c, "mean": m, "log_mean_over_log_x": math.log(m) / math.log(c)}
            for c, m in zip(s.checkpoints, s.means)]
    for r in rows:
        print(f"{r['checkpoint']:>10} {r['mean']:>14.3f} {r['log_mean_over_log_x']:.4f}")
    print(f"slope {s.slope:.4f}  total {s.total}")
    write_csv(cfg.out, rows)
    return s


if __name__ == "__main__":
    main(parse_config(Config))
