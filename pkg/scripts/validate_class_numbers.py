"""Cross-check every class-number method against the reduced-forms count.

    python3 scripts/validate_class_numbers.py --max-abs-disc 1e5
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from _common import parse_config, timed
from cmtorsion.classnum import (class_number, class_number_sweep, fundamental_discriminants,
                                hbound_holds, reduced_forms_class_number)


@dataclass(frozen=True)
class Config:
    """Agreement of root-count, character-sum and forms class numbers."""
    max_abs_disc: int = 10**5
    sweep_bound: int = 10**6


def main(cfg: Config) -> dict:
    with timed("single discriminants"):
        ds = list(fundamental_discriminants(cfg.max_abs_disc))
        bad = [D for D in ds if class_number(D) != reduced_forms_class_number(D)]
    with timed("sweeps"):
        ref = class_number_sweep(cfg.sweep_bound)
        alt = class_number_sweep(cfg.sweep_bound, "charsum")
    report = {
        "discriminants": len(ds),
        "mismatches": len(bad),
        "primes": len(ref),
        "sweeps_agree": ref == alt,
        "even_h": int(np.count_nonzero(ref.hs % 2 == 0)),
        "bound_violations": sum(not hbound_holds(l, h) for l, h in ref.entries),
        "max_h": int(ref.hs.max()),
    }
    for k, v in report.items():
        print(f"{k:>18}: {v}")
    return report


if __name__ == "__main__":
    main(parse_config(Config))
