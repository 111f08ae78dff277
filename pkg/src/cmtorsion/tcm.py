"""Lower bounds for T_CM(d), the largest CM torsion order over degree-d fields.

Bounds come from constructions whose degree divides d (torsion persists in
extensions): a point of order l over degree (l-1)/2 * h(-l) when l = 3 mod 4,
a point of order l over degree (l-1)/3 when l = 1 mod 3, and a short
registry of exactly known values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arith import divisors, is_prime, primes_in
from .classnum import ClassNumberTable
from .errors import DomainError
from .olson import _h_at_most, generators

FLOOR = 6
EVEN_FLOOR = 12

# exact values with a one-line basis
_REGISTRY = {
    1: (6, "torsion of CM curves over Q (six groups, largest Z/6 and Z/2 x Z/2)"),
    2: (12, "classification of CM torsion over quadratic fields"),
    8: (50, "classification of CM torsion in degree 8"),
    10: (50, "classification of CM torsion in degree 10"),
    12: (84, "classification of CM torsion in degree 12"),
}
_PRIME_SOURCE = "prime degree >= 7 is an Olson degree, so only the six groups occur"


@dataclass(frozen=True)
class KnownValue:
    degree: int
    value: int
    source: str


def known_tcm(d: int) -> KnownValue | None:
    if d < 1:
        raise DomainError(f"degree must be >= 1, got {d}")
    if d in _REGISTRY:
        return KnownValue(d, *_REGISTRY[d])
    if d >= 7 and is_prime(d):
        return KnownValue(d, FLOOR, _PRIME_SOURCE)
    return None


@dataclass(frozen=True)
class TcmWitness:
    source: str  # olson-floor, even-floor, known-value, divisor-monotonicity, ramified-l, split-j0
    base: int    # point order l, or the degree a known value lives in
    value: int
    details: str


@dataclass(frozen=True)
class TcmCertificate:
    degree: int
    lower_bound: int
    witnesses: tuple[TcmWitness, ...]

    def __post_init__(self):
        if self.lower_bound < FLOOR:
            raise DomainError("lower bound below the Olson floor")
        if self.lower_bound != max(w.value for w in self.witnesses):
            raise DomainError("lower bound must be the largest witness contribution")

    @property
    def achieving(self) -> tuple[TcmWitness, ...]:
        return tuple(w for w in self.witnesses if w.value == self.lower_bound)

    @property
    def point_orders(self) -> list[int]:
        return [w.base for w in self.witnesses if w.source in ("ramified-l", "split-j0")]


def tcm_lower_bound(d: int, table: ClassNumberTable | None = None) -> TcmCertificate:
    """Max of every applicable construction; witnesses not beating 6 are omitted."""
    if not 1 <= d < 2**63:
        raise DomainError(f"need 1 <= d < 2^63, got {d}")
    ws = [TcmWitness("olson-floor", 1, FLOOR, "Olson groups occur in every degree")]
    if d % 2 == 0:
        ws.append(TcmWitness("even-floor", 2, EVEN_FLOOR, "known value in degree 2, lifted to d"))
    divs = divisors(d)
    for e in divs:
        kv = _REGISTRY.get(e)
        # degree 2 is the even floor already
        if kv and kv[0] > FLOOR and e != 2:
            src = "known-value" if e == d else "divisor-monotonicity"
            ws.append(TcmWitness(src, e, kv[0], kv[1]))
    for e in divs:
        ell = 3 * e + 1
        if is_prime(ell):
            ws.append(TcmWitness("split-j0", ell, ell, f"point of order {ell} in degree {e}"))
        ell = 2 * e + 1
        if e % 2 and e > 1 and is_prime(ell):
            h = _h_at_most(ell, d // e, table)
            if h is not None and (d // e) % h == 0:
                ws.append(TcmWitness("ramified-l", ell, ell,
                                     f"point of order {ell} in degree {e}*h(-{ell}) = {e * h}"))
    ws = [w for w in ws if w.source == "olson-floor" or w.value > FLOOR]
    return TcmCertificate(d, max(w.value for w in ws), tuple(ws))


def lower_bound_sieve(x: int, table: ClassNumberTable | None = None) -> np.ndarray:
    """tcm_lower_bound(d).lower_bound for all d <= x at once (entry 0 unused)."""
    if x < 1:
        raise DomainError("x must be >= 1")
    lb = np.full(x + 1, FLOOR, dtype=np.int64)
    lb[2::2] = EVEN_FLOOR
    for e, (val, _) in _REGISTRY.items():
        if e <= x:
            np.maximum(lb[e::e], val, out=lb[e::e])
    for ell in primes_in(7, 3 * x + 1):
        ell = int(ell)
        if ell % 3 == 1:
            e = (ell - 1) // 3
            np.maximum(lb[e::e], ell, out=lb[e::e])
    if x >= 2:
        for g in generators(x, primitive=False, table=table).entries:
            if g.witness_prime:
                np.maximum(lb[g.g::g.g], g.witness_prime, out=lb[g.g::g.g])
    lb[0] = 0
    return lb


@dataclass(frozen=True)
class AvgSummary:
    x: int
    odd_only: bool
    total: int
    mean: float
    checkpoints: tuple[int, ...]
    means: tuple[float, ...]
    slope: float


def avg_experiment(x: int, odd_only: bool = False, table: ClassNumberTable | None = None) -> AvgSummary:
    """Sum and mean of the lower bounds over d <= x, with a log-log slope of
    the running mean fitted at x/8, x/4, x/2, x."""
    if x < 16:
        raise DomainError(f"x must be >= 16, got {x}")
    lb = lower_bound_sieve(x, table)
    vals = lb[1::2] if odd_only else lb[1:]
    cps = (x // 8, x // 4, x // 2, x)
    csum = np.cumsum(vals)
    means = []
    for c in cps:
        k = (c + 1) // 2 if odd_only else c
        means.append(float(csum[k - 1]) / k)
    slope = float(np.polyfit(np.log(cps), np.log(means), 1)[0])
    total = int(csum[-1])
    return AvgSummary(x, odd_only, total, total / len(vals), cps, tuple(means), slope)
