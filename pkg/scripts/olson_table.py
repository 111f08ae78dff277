"""Count Olson degrees up to a list of bounds and compare with reference counts.

    python3 scripts/olson_table.py --bounds 1e3 1e4 1e5 1e6 --threads 4
"""

from __future__ import annotations

from dataclasses import dataclass

from _common import parse_config, pool, timed, write_csv
from cmtorsion.config import RunConfig
from cmtorsion.olson import count_olson, generators

REFERENCE = {10**3: 265, 10**4: 2649, 10**5: 26474, 10**6: 264633, 10**7: 2646355}


@dataclass(frozen=True)
class Config:
    """Olson counts N -> #{d <= N : d Olson}."""
    bounds: tuple[int, ...] = (10**3, 10**4, 10**5, 10**6)
    threads: int = 1
    cache_dir: str | None = None
    out: str = ""


def main(cfg: Config) -> list[dict]:
    top = max(cfg.bounds)
    rows = []
    with pool(cfg.threads) as ex:
        src = RunConfig(threads=cfg.threads, cache_dir=cfg.cache_dir).table_source(ex)
        with timed(f"class numbers to {2 * top + 1}"):
            table = src.table(2 * top + 1)
        for N in sorted(cfg.bounds):
            with timed(f"count {N}"):
                c = count_olson(N, gens=generators(N, table=table), executor=ex)
            ref = REFERENCE.get(N)
            rows.append({"N": N, "count": c, "density": c / N, "reference": ref,
                         "match": None if ref is None else c == ref})
    for r in rows:
        print(f"{r['N']:>12} {r['count']:>10} {r['density']:.6f}  ref={r['reference']}")
    write_csv(cfg.out, rows)
    return rows


if __name__ == "__main__":
    main(parse_config(Config))
