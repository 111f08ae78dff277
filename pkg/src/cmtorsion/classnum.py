"""Exact class numbers of imaginary quadratic fields.

Three unconditional routes are available and cross-checked in the tests:

* ``forms``     direct enumeration of reduced forms (the oracle, O(|D|)),
* ``charsum``   the half-interval character sum for D = -l, l = 3 mod 4 prime,
* ``rootcount`` reduced forms counted through square-root counts mod 4a,
                O(sqrt|D|) plus a thin band, with early exit above a limit.

``bsgs`` (see :mod:`cmtorsion.forms`) is a fast conditional route and is
only used when explicitly requested.
"""

from __future__ import annotations

import math
from concurrent.futures import Executor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np

from . import _kernels as K
from .arith import factorize, is_prime, kronecker, primes_in, simple_sieve
from .errors import DomainError

MAX_EXACT_ABS_D = 1 << 40
CHARSUM_MAX = 10**8  # above this the character sum is slower than root counting
SWEEP_CHUNK = 2048
METHODS = ("auto", "forms", "charsum", "rootcount", "bsgs")
UNCONDITIONAL = ("forms", "charsum", "rootcount")


# --------------------------------------------------------------------------
# discriminants

def is_fundamental(D: int) -> bool:
    """True iff D is a fundamental discriminant (D != 1)."""
    if D in (0, 1):
        return False
    if D < 0 and -D % 4 == 3 and is_prime(-D):
        return True
    if D % 4 == 1:
        return all(e == 1 for _, e in factorize(abs(D)).factors)
    if D % 4 == 0:
        m = D // 4
        if m % 4 in (2, 3):
            return all(e == 1 for _, e in factorize(abs(m)).factors)
    return False


def fundamental_decomposition(D: int) -> tuple[int, int]:
    """(D_K, f) with D = f^2 * D_K and D_K fundamental, for a discriminant D < 0."""
    if D >= 0 or D % 4 not in (0, 1):
        raise DomainError(f"{D} is not a negative discriminant")
    core = -1
    square = 1
    for p, e in factorize(-D).factors:
        square *= p ** (e // 2)
        if e % 2:
            core *= p
    # D = square^2 * core, core squarefree
    if core % 4 == 1:
        dk, f = core, square
    else:
        dk, f = 4 * core, square // 2
    if f < 1 or f * f * dk != D:
        raise DomainError(f"{D} is not a discriminant")
    return dk, f


def unit_count(D: int) -> int:
    return {-3: 6, -4: 4}.get(D, 2)


def _check_fundamental(D: int, max_abs: int | None = MAX_EXACT_ABS_D) -> None:
    if D >= 0:
        raise DomainError(f"discriminant must be negative, got {D}")
    if max_abs is not None and -D >= max_abs:
        raise DomainError(f"|D| must be below 2^{max_abs.bit_length() - 1}, got {D}")
    if D % 4 not in (0, 1):
        raise DomainError(f"{D} is not congruent to 0 or 1 mod 4")
    if not is_fundamental(D):
        raise DomainError(f"{D} is not fundamental (square factor in its odd part or bad 2-part)")


@dataclass(frozen=True)
class ImQuadField:
    disc: int
    class_number: int
    unit_count: int

    def __post_init__(self):
        if self.unit_count != unit_count(self.disc):
            raise DomainError(f"w_K for {self.disc} must be {unit_count(self.disc)}")
        if self.class_number < 1:
            raise DomainError("class number must be positive")

    @classmethod
    def from_disc(cls, D: int, method: str = "auto") -> "ImQuadField":
        return cls(D, class_number(D, method), unit_count(D))


# --------------------------------------------------------------------------
# single discriminants

def reduced_forms_class_number(D: int) -> int:
    """Count of reduced primitive forms of discriminant D (the oracle)."""
    _check_fundamental(D)
    return int(K.forms_count(-D))


def _rootcount_py(absD: int, limit: int) -> int:
    """Pure-Python root-count engine for |D| beyond int64 comfort."""
    D = -absD
    a_head = math.isqrt((absD - 1) // 4)
    A = min(a_head, 32) if limit >= 0 else a_head
    total = 0
    while True:
        if A > K.MAX_HEAD:
            return -2
        r = np.ones(A + 1, dtype=np.int64)
        r[0] = 0
        if A >= 2:
            if absD % 2:
                r[2::2] = 2 if absD % 8 == 7 else 0
            else:
                r[4::4] = 0
            for p in simple_sieve(A)[1:]:
                p = int(p)
                if absD % p == 0:
                    if p * p <= A:
                        r[p * p::p * p] = 0
                elif kronecker(D, p) == 1:
                    r[p::p] *= 2
                else:
                    r[p::p] = 0
        total = int(r[1:].sum())
        if 0 <= limit < total:
            return -1
        if A >= a_head:
            break
        A = min(a_head, 8 * A)
    for a in range(a_head + 1, math.isqrt(absD // 3) + 1):
        lo2 = 4 * a * a - absD
        b = math.isqrt(lo2 - 1) + 1 if lo2 > 0 else 0
        if (b - absD) % 2:
            b += 1
        for bb in range(b, a + 1, 2):
            num = bb * bb + absD
            if num % (4 * a) == 0:
                c = num // (4 * a)
                total += 1 if (bb == 0 or bb == a or c == a) else 2
        if 0 <= limit < total:
            return -1
    return total


def _rootcount(absD: int, limit: int = -1) -> int:
    if absD < K.MAX_ABS_D:
        h = int(K.rootcount_class_number(absD, limit))
    else:
        h = _rootcount_py(absD, limit)
    if h == -2:
        raise DomainError(f"|D| = {absD} too large for an exact root count")
    return h


def _auto_method(D: int) -> str:
    ell = -D
    if ell % 4 == 3 and ell > 3 and ell <= CHARSUM_MAX and is_prime(ell):
        return "charsum"
    return "rootcount"


def compute_class_number(D: int, method: str = "auto") -> tuple[int, str]:
    """(h(D), method actually used)."""
    if method not in METHODS:
        raise DomainError(f"unknown class-number method {method!r}")
    _check_fundamental(D)
    if method == "auto":
        method = _auto_method(D)
    if method == "forms":
        return int(K.forms_count(-D)), method
    if method == "charsum":
        ell = -D
        if not (ell % 4 == 3 and ell > 3 and is_prime(ell)):
            raise DomainError(f"charsum needs -D prime, 3 mod 4 and > 3; got D = {D}")
        h = int(K.charsum_class_number(ell))
        if h < 1:
            raise ArithmeticError(f"character sum for {ell} not divisible as expected")
        return h, method
    if method == "bsgs":
        from .forms import class_number_bsgs
        return class_number_bsgs(D), method
    return _rootcount(-D), "rootcount"


def class_number(D: int, method: str = "auto") -> int:
    """h(D) for a fundamental discriminant D < 0 with |D| < 2^40."""
    return compute_class_number(D, method)[0]


def class_number_bounded(D: int, limit: int) -> int | None:
    """h(D) if h(D) <= limit, else None (a proof that h(D) > limit).

    Accepts any fundamental D < 0; cost grows with min(limit, sqrt|D|)
    unless h really is small.
    """
    _check_fundamental(D, max_abs=None)
    if limit < 0:
        return None
    h = _rootcount(-D, limit)
    return None if h == -1 else h


def bounded_batch(ells: np.ndarray, limits: np.ndarray) -> np.ndarray:
    """Vectorised class_number_bounded for D = -ell; entries > limit come back as -1.

    Callers guarantee each -ell is fundamental (ell prime, 3 mod 4).
    """
    ells = np.asarray(ells, dtype=np.int64)
    limits = np.asarray(limits, dtype=np.int64)
    return K.rootcount_batch(ells, limits)


def hbound_holds(ell: int, h: int) -> bool:
    """h <= sqrt(ell) * log(ell), with the right side rounded outward."""
    if ell < 7 or not is_prime(ell):
        raise DomainError(f"hbound_holds needs a prime ell >= 7, got {ell}")
    log_up = math.nextafter(math.nextafter(math.log(ell), math.inf), math.inf)
    return Fraction(h * h) <= ell * Fraction(log_up) ** 2


# --------------------------------------------------------------------------
# tables

@dataclass(eq=False)
class ClassNumberTable:
    """h(-l) for every prime l = 3 mod 4 with 3 < l <= upper_bound."""

    upper_bound: int
    ells: np.ndarray
    hs: np.ndarray
    complete: bool = True
    provenance: str = "rootcount"
    _index: dict = field(default=None, repr=False)

    def __post_init__(self):
        self.ells = np.asarray(self.ells, dtype=np.int64)
        self.hs = np.asarray(self.hs, dtype=np.int64)

    def __len__(self):
        return len(self.ells)

    def __eq__(self, other):
        if not isinstance(other, ClassNumberTable):
            return NotImplemented
        return (self.upper_bound == other.upper_bound and self.complete == other.complete
                and np.array_equal(self.ells, other.ells) and np.array_equal(self.hs, other.hs))

    @property
    def entries(self) -> list[tuple[int, int]]:
        return list(zip(self.ells.tolist(), self.hs.tolist()))

    def h(self, ell: int) -> int:
        i = int(np.searchsorted(self.ells, ell))
        if i == len(self.ells) or self.ells[i] != ell:
            raise KeyError(ell)
        return int(self.hs[i])

    def restrict(self, L: int) -> "ClassNumberTable":
        if self.complete and L > self.upper_bound:
            raise DomainError(f"table only reaches {self.upper_bound}")
        k = int(np.searchsorted(self.ells, L, side="right"))
        return ClassNumberTable(L, self.ells[:k].copy(), self.hs[:k].copy(),
                                complete=True, provenance=self.provenance)

    def check_invariants(self) -> None:
        from .errors import CacheIntegrityError
        if len(self.ells) and (np.any(np.diff(self.ells) <= 0)):
            raise CacheIntegrityError("ell values not strictly ascending")
        if np.any(self.ells % 4 != 3) or np.any(self.ells <= 3):
            raise CacheIntegrityError("entry with ell not 3 mod 4 or ell <= 3")
        bad = np.flatnonzero(self.hs % 2 == 0)
        if len(bad):
            i = int(bad[0])
            raise CacheIntegrityError(
                f"h({-int(self.ells[i])}) = {int(self.hs[i])} is even; genus theory forces odd h")

    def check_complete(self) -> None:
        from .errors import CacheIntegrityError
        if not np.array_equal(self.ells, qualifying_primes(7, self.upper_bound)):
            raise CacheIntegrityError(f"table does not cover every qualifying prime <= {self.upper_bound}")


def qualifying_primes(lo: int, hi: int) -> np.ndarray:
    """Primes l = 3 mod 4 with max(lo, 7) <= l <= hi."""
    lo = max(lo, 7)
    if hi < lo:
        return np.zeros(0, dtype=np.int64)
    p = primes_in(lo, hi)
    return p[p % 4 == 3]


def _sweep_chunk(ells: np.ndarray, method: str) -> np.ndarray:
    if method == "charsum":
        return K.charsum_batch(ells)
    if method == "forms":
        return np.array([K.forms_count(int(x)) for x in ells], dtype=np.int64)
    if method == "bsgs":
        from .forms import class_number_bsgs
        return np.array([class_number_bsgs(-int(x)) for x in ells], dtype=np.int64)
    return K.rootcount_batch(ells, np.full(len(ells), -1, dtype=np.int64))


def class_number_sweep(L: int, method: str = "rootcount", executor: Executor | None = None,
                       start: ClassNumberTable | None = None,
                       progress: Callable[[int, int], None] | None = None,
                       sample_seed: int = 0) -> ClassNumberTable:
    """Complete table of h(-l) for primes l = 3 mod 4, 3 < l <= L.

    ``start`` may be a partial or smaller table to extend. With ``bsgs`` a
    seeded 1% sample is recomputed by root counting and must agree.
    """
    if L < 7:
        raise DomainError(f"sweep bound must be >= 7, got {L}")
    if method not in ("rootcount", "charsum", "forms", "bsgs"):
        raise DomainError(f"unknown sweep method {method!r}")
    old_ells = np.zeros(0, dtype=np.int64)
    old_hs = np.zeros(0, dtype=np.int64)
    lo = 7
    if start is not None and len(start):
        keep = start.ells <= L
        old_ells, old_hs = start.ells[keep], start.hs[keep]
        expect = qualifying_primes(7, int(old_ells[-1]))
        if not np.array_equal(expect, old_ells):
            from .errors import CacheIntegrityError
            raise CacheIntegrityError("starting table has gaps")
        lo = int(old_ells[-1]) + 1
    ells = qualifying_primes(lo, L)
    chunks = [ells[i:i + SWEEP_CHUNK] for i in range(0, len(ells), SWEEP_CHUNK)]
    mapper = executor.map if executor is not None else map
    parts = []
    done = 0
    for part in mapper(_sweep_chunk, chunks, [method] * len(chunks)):
        parts.append(part)
        done += len(part)
        if progress:
            progress(done, len(ells))
    hs = np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)
    if np.any(hs < 1):
        raise ArithmeticError("class-number kernel reported a failure")
    if method == "bsgs" and len(ells):
        _audit_sample(ells, hs, sample_seed)
    table = ClassNumberTable(L, np.concatenate([old_ells, ells]), np.concatenate([old_hs, hs]),
                             complete=True, provenance=method)
    table.check_invariants()
    return table


def _audit_sample(ells: np.ndarray, hs: np.ndarray, seed: int) -> None:
    rng = np.random.default_rng(seed)
    k = max(1, len(ells) // 100)
    idx = np.sort(rng.choice(len(ells), size=k, replace=False))
    ref = K.rootcount_batch(ells[idx], np.full(k, -1, dtype=np.int64))
    if not np.array_equal(ref, hs[idx]):
        i = int(idx[np.flatnonzero(ref != hs[idx])[0]])
        raise ArithmeticError(f"bsgs disagrees with root count at ell = {int(ells[i])}")


def fundamental_discriminants(bound: int) -> Iterable[int]:
    """Fundamental D with -bound <= D < 0, in order of increasing |D|."""
    for n in range(3, bound + 1):
        if (-n) % 4 in (0, 1) and is_fundamental(-n):
            yield -n
