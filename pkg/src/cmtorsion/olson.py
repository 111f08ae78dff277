"""Olson degrees.

The non-Olson degrees are exactly the multiples of
    G = {2} u {(l-1)/2 * h(-l) : l prime, l = 3 mod 4, l > 3}.
This module builds G, sieves its set of multiples, answers single-degree
queries through the divisors of d, and scans prime powers.
"""

from __future__ import annotations

import math
from concurrent.futures import Executor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .arith import factorize, is_prime, iter_prime_segments
from .cache import TableSource
from .classnum import (ClassNumberTable, bounded_batch, class_number_bounded,
                       hbound_holds, qualifying_primes)
from .errors import DomainError

SEGMENT = 1 << 23  # odd degrees per sieve segment


@dataclass(frozen=True, order=True)
class GeneratorEntry:
    g: int
    witness_prime: int
    witness_h: int

    def __post_init__(self):
        if self.witness_prime == 0:
            if (self.g, self.witness_h) != (2, 1):
                raise DomainError("the only witness-free generator is 2")
            return
        ell = self.witness_prime
        if ell % 4 != 3 or ell <= 3 or self.g != (ell - 1) // 2 * self.witness_h:
            raise DomainError(f"inconsistent generator entry {self}")
        if self.g % 2 == 0:
            raise DomainError(f"generator {self.g} from l = {ell} should be odd")


TWO = GeneratorEntry(2, 0, 1)


@dataclass
class GeneratorSet:
    bound: int
    entries: list[GeneratorEntry]
    primitive: bool
    provenance: str = "rootcount"

    def values(self) -> np.ndarray:
        return np.array([e.g for e in self.entries], dtype=np.int64)

    def odd_values(self) -> np.ndarray:
        v = self.values()
        return v[v % 2 == 1]

    def __len__(self):
        return len(self.entries)


@dataclass(frozen=True)
class OlsonVerdict:
    degree: int
    olson: bool
    witness: GeneratorEntry | None = None

    def __post_init__(self):
        if self.olson != (self.witness is None):
            raise DomainError("verdict is Olson exactly when no witness is given")
        if self.witness is not None and self.degree % self.witness.g:
            raise DomainError(f"witness {self.witness.g} does not divide {self.degree}")


@dataclass
class SievedRange:
    """Non-Olson flags on [1, bound], stored as a bitmap over odd d only."""

    bound: int
    generator_bound: int
    odd_bits: np.ndarray = field(repr=False)

    def _odd_flags(self) -> np.ndarray:
        return np.unpackbits(self.odd_bits, count=(self.bound + 1) // 2).astype(bool)

    def is_non_olson(self, d: int) -> bool:
        if not 1 <= d <= self.bound:
            raise DomainError(f"{d} outside [1, {self.bound}]")
        if d % 2 == 0:
            return True
        i = (d - 1) // 2
        return bool(self.odd_bits[i >> 3] >> (7 - (i & 7)) & 1)

    def non_olson_mask(self) -> np.ndarray:
        """Boolean array m with m[d] true iff d is non-Olson (m[0] unused)."""
        m = np.ones(self.bound + 1, dtype=bool)
        m[0] = False
        m[1::2] = self._odd_flags()
        return m

    def olson_degrees(self) -> np.ndarray:
        return 2 * np.flatnonzero(~self._odd_flags()).astype(np.int64) + 1

    def count(self) -> int:
        return int(np.count_nonzero(~self._odd_flags()))


# --------------------------------------------------------------------------
# generators

def _prune(entries: list[GeneratorEntry], X: int) -> list[GeneratorEntry]:
    """Drop entries divisible by an earlier (smaller) kept entry."""
    hit = np.zeros(X + 1, dtype=bool)
    kept = []
    for e in entries:
        if hit[e.g]:
            continue
        kept.append(e)
        hit[e.g::e.g] = True
    return kept


def generators(X: int, primitive: bool = True, source: TableSource | None = None,
               table: ClassNumberTable | None = None, bounded: bool = False) -> GeneratorSet:
    """All generators g <= X, sorted by (g, l).

    Class numbers come from ``table`` if given, otherwise from ``source``
    (which may compute and cache them). With ``bounded`` no table is built:
    each l only gets a certificate that h(-l) <= X / ((l-1)/2) or not.
    """
    if X < 2:
        raise DomainError(f"generator bound must be >= 2, got {X}")
    L = 2 * X + 1
    provenance = "rootcount-bounded"
    if bounded:
        ells = qualifying_primes(7, L)
        hs = bounded_batch(ells, X // ((ells - 1) // 2))
        keep = hs > 0
        ells, hs = ells[keep], hs[keep]
    else:
        if table is None:
            table = (source or TableSource(use_cache=False)).table(L)
        elif table.upper_bound < L:
            raise DomainError(f"class-number table reaches {table.upper_bound}, need {L}")
        provenance = table.provenance
        k = int(np.searchsorted(table.ells, L, side="right"))
        ells, hs = table.ells[:k], table.hs[:k]
    g = (ells - 1) // 2 * hs
    keep = g <= X
    entries = [TWO] + [GeneratorEntry(int(a), int(b), int(c))
                       for a, b, c in zip(g[keep], ells[keep], hs[keep])]
    entries.sort()
    if primitive:
        entries = _prune(entries, X)
    return GeneratorSet(X, entries, primitive, provenance)


# --------------------------------------------------------------------------
# sieve

def _mark_segment(i0: int, n: int, gs: np.ndarray) -> np.ndarray:
    """Non-Olson flags for odd d = 2i+1, i0 <= i < i0+n."""
    seg = np.zeros(n, dtype=bool)
    for g in gs:
        g = int(g)
        # odd multiples of g sit at i = (g-1)/2 + k*g
        r = (g - 1) // 2
        start = r - i0 if i0 <= r else (-(i0 - r)) % g
        if start < n:
            seg[start::g] = True
    return seg


def _segments(N: int, segment: int):
    n_odd = (N + 1) // 2
    return [(i0, min(segment, n_odd - i0)) for i0 in range(0, n_odd, segment)]


def _odd_generators(N: int, gens: GeneratorSet | None, source: TableSource | None) -> GeneratorSet:
    if gens is None:
        gens = generators(max(N, 2), primitive=True, source=source)
    elif gens.bound < N:
        raise DomainError(f"generator set only reaches {gens.bound}, need {N}")
    return gens


def sieve_olson(N: int, gens: GeneratorSet | None = None, source: TableSource | None = None,
                executor: Executor | None = None, segment: int = SEGMENT) -> SievedRange:
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    gens = _odd_generators(N, gens, source)
    gs = gens.odd_values()
    gs = gs[gs <= N]
    segs = _segments(N, segment)
    mapper = executor.map if executor is not None else map
    parts = list(mapper(lambda s: _mark_segment(s[0], s[1], gs), segs))
    flags = np.concatenate(parts) if parts else np.zeros(0, dtype=bool)
    return SievedRange(N, gens.bound, np.packbits(flags))


def count_olson(N: int, gens: GeneratorSet | None = None, source: TableSource | None = None,
                executor: Executor | None = None, segment: int = SEGMENT) -> int:
    """Number of Olson degrees <= N, counted one segment at a time."""
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    gens = _odd_generators(N, gens, source)
    gs = gens.odd_values()
    gs = gs[gs <= N]
    mapper = executor.map if executor is not None else map
    counts = mapper(lambda s: s[1] - int(np.count_nonzero(_mark_segment(s[0], s[1], gs))),
                    _segments(N, segment))
    return int(sum(counts))


def olson_density(N: int, **kw) -> Fraction:
    return Fraction(count_olson(N, **kw), N)


# --------------------------------------------------------------------------
# single degrees

def _h_at_most(ell: int, limit: int, table: ClassNumberTable | None) -> int | None:
    if table is not None and ell <= table.upper_bound:
        h = table.h(ell)
        return h if h <= limit else None
    return class_number_bounded(-ell, limit)


def _odd_witnesses(d: int, table: ClassNumberTable | None, first_only: bool) -> list[GeneratorEntry]:
    found: list[GeneratorEntry] = []
    for e in factorize(d).divisors():
        if e == 1:
            continue
        # g = e*h >= e, so nothing later can beat a witness already found
        if first_only and found and e >= min(found).g:
            break
        ell = 2 * e + 1
        if not is_prime(ell):
            continue
        h = _h_at_most(ell, d // e, table)
        if h is not None and (d // e) % h == 0:
            found.append(GeneratorEntry(e * h, ell, h))
    return sorted(found)


def olson_witnesses(d: int, table: ClassNumberTable | None = None) -> list[GeneratorEntry]:
    """Every generator dividing d, sorted by (g, l)."""
    if not 1 <= d < 2**63:
        raise DomainError(f"need 1 <= d < 2^63, got {d}")
    if d % 2 == 0:
        # odd generators dividing d are those dividing its odd part
        odd = d >> ((d & -d).bit_length() - 1)
        return [TWO] + (_odd_witnesses(odd, table, False) if odd > 1 else [])
    return _odd_witnesses(d, table, False)


def is_olson(d: int, table: ClassNumberTable | None = None) -> OlsonVerdict:
    """Verdict for d via its divisors e with l = 2e+1 prime and h(-l) | d/e.

    The witness is the smallest generator dividing d (ties by smaller l).
    """
    if not 1 <= d < 2**63:
        raise DomainError(f"is_olson needs 1 <= d < 2^63, got {d}")
    if d % 2 == 0:
        return OlsonVerdict(d, False, TWO)
    found = _odd_witnesses(d, table, True)
    return OlsonVerdict(d, not found, found[0] if found else None)


# --------------------------------------------------------------------------
# prime powers

@dataclass(frozen=True)
class PrimePowerHit:
    p: int
    n: int
    r: int
    ell: int
    h: int


def _max_s(p: int, room: int, ell: int) -> int:
    """Largest s <= room with p^s <= sqrt(l) log l (outward rounded)."""
    s = 0
    while s < room and hbound_holds(ell, p ** (s + 1)):
        s += 1
    return s


def _power_exponent(h: int, p: int) -> int | None:
    s = 0
    while h % p == 0:
        h //= p
        s += 1
    return s if h == 1 else None


def _lowered_exponent_checks(p: int, r: int) -> int:
    ell = 2 * p**r + 1
    if r % 2 == 0 and p != 3:
        # p^r = 1 mod 3 for even r, so 3 | l and l > 3: never prime
        assert ell % 3 == 0 and ell > 3
        return 0
    return ell


def prime_power_witnesses(p: int, n: int, skip_even: bool = True,
                          table: ClassNumberTable | None = None) -> list[PrimePowerHit]:
    """Every (r, s) with r+s <= n, l = 2p^r+1 prime and h(-l) = p^s."""
    hits = []
    for r in range(1, n + 1):
        ell = _lowered_exponent_checks(p, r) if skip_even else 2 * p**r + 1
        if not ell or not is_prime(ell):
            continue
        smax = _max_s(p, n - r, ell)
        h = _h_at_most(ell, p**smax, table)
        if h is None:
            continue
        s = _power_exponent(h, p)
        if s is not None and s <= smax:
            hits.append(PrimePowerHit(p, n, r, ell, h))
    return hits


def is_prime_power_olson(p: int, n: int, skip_even: bool = True,
                         table: ClassNumberTable | None = None) -> OlsonVerdict:
    if not is_prime(p) or n < 1:
        raise DomainError(f"need p prime and n >= 1, got p={p}, n={n}")
    d = p**n
    if d >= 2**63:
        raise DomainError(f"{p}^{n} is not below 2^63")
    if p == 2:
        return OlsonVerdict(d, False, TWO)
    if p in (3, 5):
        return OlsonVerdict(d, False, GeneratorEntry(p, 2 * p + 1, 1))
    hits = prime_power_witnesses(p, n, skip_even, table)
    if not hits:
        return OlsonVerdict(d, True)
    best = min(hits, key=lambda t: (p**t.r * t.h, t.ell))
    return OlsonVerdict(d, False, GeneratorEntry(p**best.r * best.h, best.ell, best.h))


def _scan_r1(lo: int, hi: int, B: int) -> list[PrimePowerHit]:
    """Hits with r = 1 for primes lo <= p <= hi (l = 2p+1)."""
    ps = np.concatenate(list(iter_prime_segments(lo, hi)) or [np.zeros(0, dtype=np.int64)])
    if not len(ps):
        return []
    qs = np.concatenate(list(iter_prime_segments(2 * lo + 1, 2 * hi + 1)))
    ps = ps[np.isin(2 * ps + 1, qs, assume_unique=True)]
    ells = 2 * ps + 1
    limits = np.ones(len(ps), dtype=np.int64)
    # s >= 1 is only possible when p^2 <= B
    small = np.flatnonzero(ps * ps <= B)
    for i in small:
        p = int(ps[i])
        room = 0
        while p ** (room + 2) <= B:
            room += 1
        limits[i] = p ** _max_s(p, room, int(ells[i]))
    hs = bounded_batch(ells, limits)
    out = []
    for i in np.flatnonzero(hs > 0):
        p, h = int(ps[i]), int(hs[i])
        s = _power_exponent(h, p)
        if s is not None and p ** (1 + s) <= B:
            n_min = 1 + s
            out.append(PrimePowerHit(p, n_min, 1, int(ells[i]), h))
    return out


def prime_power_scan(B: int, skip_even: bool = True, executor: Executor | None = None,
                     chunk: int = 1 << 24, progress=None) -> list[PrimePowerHit]:
    """Every non-Olson p^n <= B with p > 5, reported at its least exponent n.

    l = 2p^r + 1 with r = 1 is handled in sieved batches over p; the few
    (p, r) with r >= 2 and p^r <= B are checked one by one.
    """
    if B < 49:
        raise DomainError(f"scan bound must be >= 49, got {B}")
    ranges = [(lo, min(lo + chunk - 1, B)) for lo in range(7, B + 1, chunk)]
    mapper = executor.map if executor is not None else map
    hits: list[PrimePowerHit] = []
    for k, part in enumerate(mapper(lambda rg: _scan_r1(rg[0], rg[1], B), ranges)):
        hits.extend(part)
        if progress:
            progress(k + 1, len(ranges))
    for seg in iter_prime_segments(7, math.isqrt(B)):
        for p in seg.tolist():
            r = 2
            while p**r <= B:
                ell = _lowered_exponent_checks(p, r) if skip_even else 2 * p**r + 1
                if ell and is_prime(ell):
                    room = 0
                    while p ** (r + room + 1) <= B:
                        room += 1
                    smax = _max_s(p, room, ell)
                    h = class_number_bounded(-ell, p**smax)
                    s = None if h is None else _power_exponent(h, p)
                    if s is not None and s <= smax:
                        hits.append(PrimePowerHit(p, r + s, r, ell, h))
                r += 1
    hits.sort(key=lambda t: (t.p, t.n, t.r))
    return hits
